#include "butterfly/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace butterfly {

int apply_thread_env() {
    if (const char* env = std::getenv("BUTTERFLY_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) omp_set_num_threads(n);
        } catch (const std::exception&) {
        }
    }
    return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace butterfly
