#pragma once

// Internal helpers for the OpenMP kernels.

#include <cstddef>
#include <exception>
#include <vector>

#include "ricci/curvature.hpp"

namespace ricci::detail {

/// Runs body(i) for i in [0, count). Iterations must write disjoint output
/// slots. An exception thrown by any iteration is captured and the one from
/// the smallest index is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t count, Execution exec, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  const long n = static_cast<long>(count);
  const bool parallel = exec == Execution::Parallel;
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

}  // namespace ricci::detail
