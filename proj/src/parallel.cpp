#include "fpsa/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace fpsa {

int thread_cap() {
  if (const char* env = std::getenv("FPSA_SNN_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return omp_get_max_threads();
}

}  // namespace fpsa
