#pragma once

#include <cstddef>

namespace gasforge {

// Pair interaction W. Log is W(x) = -log|x| (Coulomb kernel of R^2, used by
// all log-gases). Coulomb is W(x) = |x|^{-(n-2)} for ambient dimension n >= 3.
enum class Interaction { Log, Coulomb };

namespace kernels {

struct PairKernel {
    Interaction interaction = Interaction::Log;
    int coulomb_n = 3;  // only read when interaction == Coulomb
};

struct SweepResult {
    double interaction_sum = 0.0;  // sum over i<j of W(x_i - x_j)
    bool singular = false;         // some pair coincides exactly
};

// One O(N^2/2) sweep over all pairs of the flat position buffer (n blocks of
// d doubles). Accumulates the raw pair energy, and when grad is non-null adds
// sum_{j != i} grad W(x_i - x_j) into grad[i*d .. i*d+d). The caller applies
// the 1/N^2 Hamiltonian scaling. grad must be zero-initialized (or hold the
// confinement part already). On a singular pair the result is flagged and the
// gradient contents are unspecified.
using SweepFn = SweepResult (*)(const double* pos, int n, int d,
                                PairKernel kernel, double* grad);

SweepResult sweep_scalar(const double* pos, int n, int d, PairKernel kernel,
                         double* grad);

#if defined(__x86_64__) || defined(_M_X64)
#define GASFORGE_HAVE_AVX2_KERNELS 1
SweepResult sweep_avx2(const double* pos, int n, int d, PairKernel kernel,
                       double* grad);
#endif

// Runtime dispatch. The default is the widest variant the CPU supports;
// "scalar" / "avx2" / "auto" can be forced (tests, GASFORGE_KERNEL env var).
SweepFn active_sweep();
const char* active_sweep_name();
bool force_sweep(const char* name);

inline SweepResult pair_sweep(const double* pos, int n, int d,
                              PairKernel kernel, double* grad) {
    return active_sweep()(pos, n, d, kernel, grad);
}

}  // namespace kernels
}  // namespace gasforge
