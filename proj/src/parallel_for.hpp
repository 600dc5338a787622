#pragma once

#include <cstddef>
#include <exception>

namespace sigmalab::detail {

// OpenMP loop over [0, n). An exception thrown by the body is captured and
// rethrown after the loop; when several iterations throw, the one with the
// lowest index wins so failures are reproducible.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr error;
  std::size_t error_index = n;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(sigmalab_parallel_for_error)
      {
        if (static_cast<std::size_t>(i) < error_index) {
          error_index = static_cast<std::size_t>(i);
          error = std::current_exception();
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace sigmalab::detail
