#pragma once

#include <exception>
#include <mutex>

namespace scatterlab {

// Selects between the serial reference loop and the OpenMP kernel.
// Both paths compute the same sums in the same per-element order; only
// the distribution of independent items across threads differs.
enum class Execution { serial, parallel };

// Caps OpenMP parallelism. 0 restores the runtime default.
void set_thread_limit(int threads);

// Applies SCATTERLAB_THREADS from the environment (0 or unset = auto).
// Returns the limit that was applied.
int apply_thread_limit_from_env();

int max_threads();

// Exceptions must not escape an OpenMP region. Loop bodies run through capture();
// the first exception is kept and rethrown after the region by rethrow_if_set().
class ExceptionSlot {
public:
    template <class F>
    void capture(F&& body) noexcept {
        try {
            body();
        } catch (...) {
            std::lock_guard<std::mutex> lock(mutex_);
            if (!error_) error_ = std::current_exception();
        }
    }
    void rethrow_if_set() {
        if (error_) std::rethrow_exception(error_);
    }

private:
    std::mutex mutex_;
    std::exception_ptr error_;
};

}  // namespace scatterlab
