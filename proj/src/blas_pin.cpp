// Compiled into every executable (interface source of hhlab_core).
//
// OpenBLAS 0.3.20 picks its Cooperlake kernels on AVX-512 hosts, and those return
// wrong Householder updates inside SPQR. The kernel family is read from the
// environment by an OpenBLAS constructor of priority 101, so this one has the same
// priority and comes first in link order. A single BLAS thread keeps every
// reduction in a fixed order.
#include <cstdlib>

namespace {

__attribute__((constructor(101))) void pin_openblas()
{
    __builtin_cpu_init();
    if (!std::getenv("OPENBLAS_CORETYPE") && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        setenv("OPENBLAS_CORETYPE", "Haswell", 0);
    setenv("OPENBLAS_NUM_THREADS", "1", 1);
}

} // namespace
