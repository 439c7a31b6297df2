#pragma once

namespace brinkman {

/// Worker budget: BRINKMAN_THREADS when set (clamped to >= 1), otherwise the
/// OpenMP default. Shared by the kernel pragmas and the harness run pool.
int thread_budget();

/// Applies the budget to the OpenMP runtime. Call once at process start.
void apply_thread_budget();

}  // namespace brinkman
