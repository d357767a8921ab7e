#include "fv/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fv {

namespace {

std::atomic<int> g_override{0};

int env_threads() {
    const char* v = std::getenv("BETHE_GROTH_THREADS");
    if (!v) return 0;
    try {
        const int n = std::stoi(v);
        return n > 0 ? n : 0;
    } catch (...) {
        return 0;
    }
}

}  // namespace

int thread_count() {
    if (const int o = g_override.load(); o > 0) return o;
    if (const int e = env_threads(); e > 0) return e;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_thread_count(int n) { g_override.store(n > 0 ? n : 0); }

}  // namespace fv
