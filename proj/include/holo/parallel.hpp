#pragma once

// Every data-parallel kernel in the library takes an Exec tag. The serial
// path is the reference implementation; the OpenMP path must produce
// bitwise-identical results (work is split by index and reduced with
// order-independent operations only).

#include <cstddef>
#include <exception>
#include <vector>

namespace holo {

enum class Exec { parallel, serial };

void set_num_threads(int n);
int max_threads();

/// Runs body(i) for i in [0, n). Exceptions thrown by iterations are
/// collected and the one from the lowest index is rethrown afterwards.
template <class Body>
void parallel_for(std::size_t n, Exec exec, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (long i = 0; i < count; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace holo
