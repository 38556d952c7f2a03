#include "gasforge/kernels.hpp"

#if defined(GASFORGE_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <cmath>

namespace gasforge::kernels {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline bool any_zero(__m256d r2) {
    return _mm256_movemask_pd(
               _mm256_cmp_pd(r2, _mm256_setzero_pd(), _CMP_EQ_OQ)) != 0;
}

// Four lane-wise interaction evaluations given r2: sets coef (grad W = coef *
// dx) and accumulates the energy terms. Log energies go through scalar
// std::log to keep full double accuracy; everything else stays vectorized.
template <Interaction K>
inline __m256d lane_coef(__m256d r2, double& log_acc, __m256d& w_acc) {
    if constexpr (K == Interaction::Log) {
        alignas(32) double l[4];
        _mm256_store_pd(l, r2);
        log_acc += std::log(l[0]) + std::log(l[1]) + std::log(l[2]) +
                   std::log(l[3]);
        return _mm256_div_pd(_mm256_set1_pd(-1.0), r2);
    } else {
        // n = 3 Coulomb: W = 1/r, grad W = -dx/r^3.
        const __m256d invr =
            _mm256_div_pd(_mm256_set1_pd(1.0), _mm256_sqrt_pd(r2));
        w_acc = _mm256_add_pd(w_acc, invr);
        return _mm256_mul_pd(
            _mm256_set1_pd(-1.0),
            _mm256_mul_pd(invr, _mm256_mul_pd(invr, invr)));
    }
}

template <Interaction K>
inline void scalar_pair(double r2, double& log_acc, double& w_acc,
                        double& coef) {
    if constexpr (K == Interaction::Log) {
        log_acc += std::log(r2);
        coef = -1.0 / r2;
    } else {
        const double invr = 1.0 / std::sqrt(r2);
        w_acc += invr;
        coef = -invr * invr * invr;
    }
}

template <Interaction K>
SweepResult sweep_d1(const double* pos, int n, double* grad) {
    SweepResult out;
    double log_acc = 0.0, w_tail = 0.0;
    __m256d w_acc = _mm256_setzero_pd();
    for (int i = 0; i < n; ++i) {
        const __m256d xiv = _mm256_set1_pd(pos[i]);
        __m256d gacc = _mm256_setzero_pd();
        double gtail = 0.0;
        int j = i + 1;
        for (; j + 4 <= n; j += 4) {
            const __m256d dx = _mm256_sub_pd(xiv, _mm256_loadu_pd(pos + j));
            const __m256d r2 = _mm256_mul_pd(dx, dx);
            if (any_zero(r2)) {
                out.singular = true;
                return out;
            }
            const __m256d coef = lane_coef<K>(r2, log_acc, w_acc);
            if (grad != nullptr) {
                const __m256d f = _mm256_mul_pd(coef, dx);
                gacc = _mm256_add_pd(gacc, f);
                _mm256_storeu_pd(grad + j,
                                 _mm256_sub_pd(_mm256_loadu_pd(grad + j), f));
            }
        }
        for (; j < n; ++j) {
            const double dx = pos[i] - pos[j];
            const double r2 = dx * dx;
            if (r2 == 0.0) {
                out.singular = true;
                return out;
            }
            double coef;
            scalar_pair<K>(r2, log_acc, w_tail, coef);
            if (grad != nullptr) {
                const double f = coef * dx;
                gtail += f;
                grad[j] -= f;
            }
        }
        if (grad != nullptr) grad[i] += hsum(gacc) + gtail;
    }
    out.interaction_sum = (K == Interaction::Log)
                              ? -0.5 * log_acc
                              : hsum(w_acc) + w_tail;
    return out;
}

template <Interaction K>
SweepResult sweep_d2(const double* pos, int n, double* grad) {
    SweepResult out;
    double log_acc = 0.0, w_tail = 0.0;
    __m256d w_acc = _mm256_setzero_pd();
    for (int i = 0; i < n; ++i) {
        const __m256d xiv = _mm256_set1_pd(pos[2 * i]);
        const __m256d yiv = _mm256_set1_pd(pos[2 * i + 1]);
        __m256d gxacc = _mm256_setzero_pd();
        __m256d gyacc = _mm256_setzero_pd();
        double gxtail = 0.0, gytail = 0.0;
        int j = i + 1;
        for (; j + 4 <= n; j += 4) {
            const double* base = pos + 2 * j;
            const __m256d a = _mm256_loadu_pd(base);      // x0 y0 x1 y1
            const __m256d b = _mm256_loadu_pd(base + 4);  // x2 y2 x3 y3
            const __m256d xs = _mm256_unpacklo_pd(a, b);  // x0 x2 x1 x3
            const __m256d ys = _mm256_unpackhi_pd(a, b);
            const __m256d dx = _mm256_sub_pd(xiv, xs);
            const __m256d dy = _mm256_sub_pd(yiv, ys);
            const __m256d r2 =
                _mm256_fmadd_pd(dy, dy, _mm256_mul_pd(dx, dx));
            if (any_zero(r2)) {
                out.singular = true;
                return out;
            }
            const __m256d coef = lane_coef<K>(r2, log_acc, w_acc);
            if (grad != nullptr) {
                const __m256d fx = _mm256_mul_pd(coef, dx);
                const __m256d fy = _mm256_mul_pd(coef, dy);
                gxacc = _mm256_add_pd(gxacc, fx);
                gyacc = _mm256_add_pd(gyacc, fy);
                double* gb = grad + 2 * j;
                const __m256d ga0 = _mm256_loadu_pd(gb);
                const __m256d ga1 = _mm256_loadu_pd(gb + 4);
                _mm256_storeu_pd(
                    gb, _mm256_sub_pd(ga0, _mm256_unpacklo_pd(fx, fy)));
                _mm256_storeu_pd(
                    gb + 4, _mm256_sub_pd(ga1, _mm256_unpackhi_pd(fx, fy)));
            }
        }
        for (; j < n; ++j) {
            const double dx = pos[2 * i] - pos[2 * j];
            const double dy = pos[2 * i + 1] - pos[2 * j + 1];
            const double r2 = dx * dx + dy * dy;
            if (r2 == 0.0) {
                out.singular = true;
                return out;
            }
            double coef;
            scalar_pair<K>(r2, log_acc, w_tail, coef);
            if (grad != nullptr) {
                gxtail += coef * dx;
                gytail += coef * dy;
                grad[2 * j] -= coef * dx;
                grad[2 * j + 1] -= coef * dy;
            }
        }
        if (grad != nullptr) {
            grad[2 * i] += hsum(gxacc) + gxtail;
            grad[2 * i + 1] += hsum(gyacc) + gytail;
        }
    }
    out.interaction_sum = (K == Interaction::Log)
                              ? -0.5 * log_acc
                              : hsum(w_acc) + w_tail;
    return out;
}

// 3D points are gathered lane by lane; the sqrt/div/log work stays
// vectorized, the force scatter is scalar.
template <Interaction K>
SweepResult sweep_d3(const double* pos, int n, double* grad) {
    SweepResult out;
    double log_acc = 0.0, w_tail = 0.0;
    __m256d w_acc = _mm256_setzero_pd();
    for (int i = 0; i < n; ++i) {
        const double* xi = pos + 3 * i;
        const __m256d xiv = _mm256_set1_pd(xi[0]);
        const __m256d yiv = _mm256_set1_pd(xi[1]);
        const __m256d ziv = _mm256_set1_pd(xi[2]);
        double gx = 0.0, gy = 0.0, gz = 0.0;
        int j = i + 1;
        for (; j + 4 <= n; j += 4) {
            const double* b = pos + 3 * j;
            const __m256d xs = _mm256_setr_pd(b[0], b[3], b[6], b[9]);
            const __m256d ys = _mm256_setr_pd(b[1], b[4], b[7], b[10]);
            const __m256d zs = _mm256_setr_pd(b[2], b[5], b[8], b[11]);
            const __m256d dx = _mm256_sub_pd(xiv, xs);
            const __m256d dy = _mm256_sub_pd(yiv, ys);
            const __m256d dz = _mm256_sub_pd(ziv, zs);
            __m256d r2 = _mm256_mul_pd(dx, dx);
            r2 = _mm256_fmadd_pd(dy, dy, r2);
            r2 = _mm256_fmadd_pd(dz, dz, r2);
            if (any_zero(r2)) {
                out.singular = true;
                return out;
            }
            const __m256d coef = lane_coef<K>(r2, log_acc, w_acc);
            if (grad != nullptr) {
                alignas(32) double fx[4], fy[4], fz[4];
                _mm256_store_pd(fx, _mm256_mul_pd(coef, dx));
                _mm256_store_pd(fy, _mm256_mul_pd(coef, dy));
                _mm256_store_pd(fz, _mm256_mul_pd(coef, dz));
                for (int k = 0; k < 4; ++k) {
                    double* gj = grad + 3 * (j + k);
                    gx += fx[k];
                    gy += fy[k];
                    gz += fz[k];
                    gj[0] -= fx[k];
                    gj[1] -= fy[k];
                    gj[2] -= fz[k];
                }
            }
        }
        for (; j < n; ++j) {
            const double* xj = pos + 3 * j;
            const double dx = xi[0] - xj[0];
            const double dy = xi[1] - xj[1];
            const double dz = xi[2] - xj[2];
            const double r2 = dx * dx + dy * dy + dz * dz;
            if (r2 == 0.0) {
                out.singular = true;
                return out;
            }
            double coef;
            scalar_pair<K>(r2, log_acc, w_tail, coef);
            if (grad != nullptr) {
                double* gj = grad + 3 * j;
                gx += coef * dx;
                gy += coef * dy;
                gz += coef * dz;
                gj[0] -= coef * dx;
                gj[1] -= coef * dy;
                gj[2] -= coef * dz;
            }
        }
        if (grad != nullptr) {
            double* gi = grad + 3 * i;
            gi[0] += gx;
            gi[1] += gy;
            gi[2] += gz;
        }
    }
    out.interaction_sum = (K == Interaction::Log)
                              ? -0.5 * log_acc
                              : hsum(w_acc) + w_tail;
    return out;
}

}  // namespace

SweepResult sweep_avx2(const double* pos, int n, int d, PairKernel kernel,
                       double* grad) {
    if (kernel.interaction == Interaction::Log) {
        switch (d) {
            case 1: return sweep_d1<Interaction::Log>(pos, n, grad);
            case 2: return sweep_d2<Interaction::Log>(pos, n, grad);
            case 3: return sweep_d3<Interaction::Log>(pos, n, grad);
            default: break;
        }
    } else if (kernel.coulomb_n == 3) {
        switch (d) {
            case 1: return sweep_d1<Interaction::Coulomb>(pos, n, grad);
            case 2: return sweep_d2<Interaction::Coulomb>(pos, n, grad);
            case 3: return sweep_d3<Interaction::Coulomb>(pos, n, grad);
            default: break;
        }
    }
    // General Riesz exponents and d > 3 have no vector path.
    return sweep_scalar(pos, n, d, kernel, grad);
}

}  // namespace gasforge::kernels

#endif  // GASFORGE_HAVE_AVX2_KERNELS
