#include "gasforge/kernels.hpp"

#include <cmath>

namespace gasforge::kernels {

namespace {

// W and grad W for one separation vector dx (length d), given r2 = |dx|^2.
// Log kernel: W = -0.5 log r2, grad W = -dx/r2.
// Coulomb n>=3: W = r^{-(n-2)}, grad W = -(n-2) dx r^{-n}.

template <int D, Interaction K>
SweepResult sweep_fixed(const double* pos, int n, int coulomb_n,
                        double* grad) {
    SweepResult out;
    const double p = static_cast<double>(coulomb_n - 2);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double* xi = pos + static_cast<std::size_t>(i) * D;
        double gi[D] = {};
        for (int j = i + 1; j < n; ++j) {
            const double* xj = pos + static_cast<std::size_t>(j) * D;
            double dx[D];
            double r2 = 0.0;
            for (int c = 0; c < D; ++c) {
                dx[c] = xi[c] - xj[c];
                r2 += dx[c] * dx[c];
            }
            if (r2 == 0.0) {
                out.singular = true;
                return out;
            }
            double coef;  // grad W = coef * dx
            if constexpr (K == Interaction::Log) {
                acc += -0.5 * std::log(r2);
                coef = -1.0 / r2;
            } else {
                const double r = std::sqrt(r2);
                const double w = std::pow(r, -p);
                acc += w;
                coef = -p * w / r2;
            }
            if (grad != nullptr) {
                double* gj = grad + static_cast<std::size_t>(j) * D;
                for (int c = 0; c < D; ++c) {
                    const double f = coef * dx[c];
                    gi[c] += f;
                    gj[c] -= f;
                }
            }
        }
        if (grad != nullptr) {
            double* g = grad + static_cast<std::size_t>(i) * D;
            for (int c = 0; c < D; ++c) g[c] += gi[c];
        }
    }
    out.interaction_sum = acc;
    return out;
}

template <Interaction K>
SweepResult sweep_generic(const double* pos, int n, int d, int coulomb_n,
                          double* grad) {
    SweepResult out;
    const double p = static_cast<double>(coulomb_n - 2);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double* xi = pos + static_cast<std::size_t>(i) * d;
        for (int j = i + 1; j < n; ++j) {
            const double* xj = pos + static_cast<std::size_t>(j) * d;
            double r2 = 0.0;
            for (int c = 0; c < d; ++c) {
                const double dc = xi[c] - xj[c];
                r2 += dc * dc;
            }
            if (r2 == 0.0) {
                out.singular = true;
                return out;
            }
            double coef;
            if constexpr (K == Interaction::Log) {
                acc += -0.5 * std::log(r2);
                coef = -1.0 / r2;
            } else {
                const double r = std::sqrt(r2);
                const double w = std::pow(r, -p);
                acc += w;
                coef = -p * w / r2;
            }
            if (grad != nullptr) {
                double* gi = grad + static_cast<std::size_t>(i) * d;
                double* gj = grad + static_cast<std::size_t>(j) * d;
                for (int c = 0; c < d; ++c) {
                    const double f = coef * (xi[c] - xj[c]);
                    gi[c] += f;
                    gj[c] -= f;
                }
            }
        }
    }
    out.interaction_sum = acc;
    return out;
}

}  // namespace

SweepResult sweep_scalar(const double* pos, int n, int d, PairKernel kernel,
                         double* grad) {
    if (kernel.interaction == Interaction::Log) {
        switch (d) {
            case 1: return sweep_fixed<1, Interaction::Log>(pos, n, 0, grad);
            case 2: return sweep_fixed<2, Interaction::Log>(pos, n, 0, grad);
            case 3: return sweep_fixed<3, Interaction::Log>(pos, n, 0, grad);
            default:
                return sweep_generic<Interaction::Log>(pos, n, d, 0, grad);
        }
    }
    switch (d) {
        case 1:
            return sweep_fixed<1, Interaction::Coulomb>(pos, n,
                                                        kernel.coulomb_n, grad);
        case 2:
            return sweep_fixed<2, Interaction::Coulomb>(pos, n,
                                                        kernel.coulomb_n, grad);
        case 3:
            return sweep_fixed<3, Interaction::Coulomb>(pos, n,
                                                        kernel.coulomb_n, grad);
        default:
            return sweep_generic<Interaction::Coulomb>(pos, n, d,
                                                       kernel.coulomb_n, grad);
    }
}

}  // namespace gasforge::kernels
