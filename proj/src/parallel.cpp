#include "hjsr/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hjsr {

int thread_count() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* env = std::getenv("HJSR_THREADS")) {
        try {
            const int cap = std::stoi(env);
            if (cap >= 1 && cap < n) n = cap;
        } catch (...) {
            // unparsable value: ignore, keep the OpenMP default
        }
    }
    return n;
}

} // namespace hjsr
