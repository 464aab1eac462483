#pragma once

#include <stdexcept>
#include <string>

namespace ibf {

// Validation failure: bad configuration, malformed input, shape mismatch.
// The CLI maps these to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Failure during compute or I/O after validation passed. CLI exit code 2.
class RunError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Worker count: IBF_THREADS (>= 1) when set, hardware concurrency otherwise.
int thread_count();

// Push the resolved worker count down to the BLAS backend. Idempotent.
void apply_thread_limit();

} // namespace ibf
