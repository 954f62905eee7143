#pragma once

#include <cstddef>
#include <exception>

namespace texdiff::detail {

/// OpenMP loop over [0, n) that rethrows the first captured exception on
/// the calling thread.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(texdiff_parallel_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

} // namespace texdiff::detail
