#pragma once

#include <cstddef>
#include <exception>

namespace voaforge {

/// OpenMP loop over [0, count) that carries the first exception thrown by
/// any iteration back to the caller (an exception escaping an OpenMP region
/// would otherwise terminate the process).
template <class Body>
void parallel_for(std::size_t count, bool parallel, Body&& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(voaforge_parallel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace voaforge
