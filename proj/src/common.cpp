#include "ibf/common.hpp"

#include <cstdlib>
#include <thread>

extern "C" void openblas_set_num_threads(int num_threads);

namespace ibf {

int thread_count() {
    if (const char* env = std::getenv("IBF_THREADS")) {
        char* end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || n < 1)
            throw ConfigError("IBF_THREADS must be a positive integer, got \"" + std::string(env) + "\"");
        return static_cast<int>(n);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void apply_thread_limit() {
    openblas_set_num_threads(thread_count());
}

} // namespace ibf
