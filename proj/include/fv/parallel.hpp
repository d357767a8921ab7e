#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

namespace fv {

enum class Execution { serial, parallel };

// Thread count from BETHE_GROTH_THREADS when set, else the OpenMP default.
int thread_count();
void set_thread_count(int n);

// Calls f(i) for i in [0, n). The parallel branch rethrows the first exception.
template <class F>
void for_each_index(std::size_t n, Execution ex, F&& f) {
    if (ex == Execution::serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
    for (long i = 0; i < count; ++i) {
        try {
            f(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

template <class T, class F>
std::vector<T> map_indices(std::size_t n, Execution ex, F&& f) {
    std::vector<T> out(n);
    for_each_index(n, ex, [&](std::size_t i) { out[i] = f(i); });
    return out;
}

// Sum in index order so both branches give identical results.
template <class T, class F>
T ordered_sum(std::size_t n, Execution ex, const T& zero, F&& f) {
    const std::vector<T> terms = map_indices<T>(n, ex, std::forward<F>(f));
    T acc = zero;
    for (const auto& t : terms) acc += t;
    return acc;
}

}  // namespace fv
