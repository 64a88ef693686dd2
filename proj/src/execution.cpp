#include "scatterlab/execution.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace scatterlab {

namespace {
int& default_threads() {
#ifdef _OPENMP
    static int value = omp_get_max_threads();
#else
    static int value = 1;
#endif
    return value;
}
}  // namespace

void set_thread_limit(int threads) {
    const int base = default_threads();
#ifdef _OPENMP
    omp_set_num_threads(threads > 0 ? threads : base);
#else
    (void)threads;
    (void)base;
#endif
}

int apply_thread_limit_from_env() {
    int limit = 0;
    if (const char* raw = std::getenv("SCATTERLAB_THREADS")) {
        try {
            limit = std::max(0, std::stoi(raw));
        } catch (const std::exception&) {
            limit = 0;
        }
    }
    set_thread_limit(limit);
    return limit;
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace scatterlab
