#include "fpsa/errors.hpp"

namespace fpsa {

ExitCode exit_code(const Error& e) noexcept {
  if (dynamic_cast<const NumericalError*>(&e) != nullptr) return ExitCode::numerical;
  return ExitCode::usage;
}

}  // namespace fpsa
