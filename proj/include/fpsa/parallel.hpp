#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <vector>

namespace fpsa {

enum class Execution { serial, parallel };

/// Worker count for parallel regions: FPSA_SNN_THREADS when set to a positive
/// integer, otherwise the OpenMP default.
int thread_cap();

/// Evaluates fn(0..n-1) and returns the results in index order. The parallel
/// path distributes indices over OpenMP threads; results and the exception
/// rethrown (the one from the lowest failing index) do not depend on scheduling.
template <class Result, class Fn>
std::vector<Result> map_indexed(std::size_t n, Fn&& fn, Execution ex = Execution::parallel) {
  std::vector<std::optional<Result>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  if (ex == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_cap())
    for (long long i = 0; i < count; ++i) {
      const auto k = static_cast<std::size_t>(i);
      try {
        slots[k].emplace(fn(k));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Result> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace fpsa
