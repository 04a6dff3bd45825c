#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace wfs {

/// Execution policy for the data-parallel kernels. Serial is the reference
/// path; Parallel distributes independent indices over OpenMP threads and
/// writes each result into its own slot, so both paths produce identical output.
enum class Exec { Serial, Parallel };

template <class Fn>
void for_each_index(Exec exec, std::size_t n, Fn&& fn) {
    if (exec == Exec::Serial) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    // Exceptions cannot cross an OpenMP region; keep the one from the lowest index.
    std::exception_ptr first;
    std::size_t first_index = n;
    std::mutex guard;
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(guard);
            if (static_cast<std::size_t>(i) < first_index) {
                first_index = static_cast<std::size_t>(i);
                first = std::current_exception();
            }
        }
    }
    if (first) std::rethrow_exception(first);
}

}  // namespace wfs
