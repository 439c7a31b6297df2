#include "brinkman/threading.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace brinkman {

int thread_budget() {
    static const int budget = [] {
        if (const char* env = std::getenv("BRINKMAN_THREADS")) {
            try {
                return std::max(1, std::stoi(env));
            } catch (...) {
            }
        }
        return omp_get_max_threads();
    }();
    return budget;
}

void apply_thread_budget() {
    omp_set_num_threads(thread_budget());
}

}  // namespace brinkman
