#pragma once

namespace butterfly {

/// Kernels come in a serial reference form and an OpenMP form.  Both produce
/// the same numbers up to summation order; with deterministic reduction the
/// parallel form is also bitwise reproducible across thread counts.
enum class Execution { serial, parallel };

struct ExecutionOptions {
    Execution execution = Execution::parallel;
    bool deterministic = true;
};

/// Reads BUTTERFLY_THREADS (if set and positive) and applies it to OpenMP.
/// Returns the thread count OpenMP will use.
int apply_thread_env();
int max_threads();

}  // namespace butterfly
