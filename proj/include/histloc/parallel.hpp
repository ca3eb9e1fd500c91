#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace histloc {

/// Serial is the reference path; OpenMP must produce identical results.
/// Sweeps write into preallocated per-index slots so the aggregation order
/// never depends on the execution order.
enum class ExecMode { serial, openmp };

template <typename Body>
void parallel_for(ExecMode mode, int count, const Body& body) {
#ifdef _OPENMP
    if (mode == ExecMode::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
#else
    (void)mode;
#endif
    for (int i = 0; i < count; ++i) body(i);
}

}  // namespace histloc
