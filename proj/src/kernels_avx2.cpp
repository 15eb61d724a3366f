#include "bivar/kernels.hpp"

#include <cmath>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace bivar::kern {
namespace {

const __m256d kSignMask = _mm256_set1_pd(-0.0);

inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(kSignMask, x); }

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// |d|^p for the exponents the hot paths use; mode precomputed by caller
enum PowMode { P1, P15, P2, P3, PGEN };

inline PowMode pow_mode(double p) {
    if (p == 1.0) return P1;
    if (p == 1.5) return P15;
    if (p == 2.0) return P2;
    if (p == 3.0) return P3;
    return PGEN;
}

template <PowMode M>
inline __m256d vabs_pow(__m256d d) {
    __m256d a = vabs(d);
    if constexpr (M == P1) return a;
    if constexpr (M == P15) return _mm256_mul_pd(a, _mm256_sqrt_pd(a));
    if constexpr (M == P2) return _mm256_mul_pd(d, d);
    if constexpr (M == P3) return _mm256_mul_pd(a, _mm256_mul_pd(d, d));
    return a;  // unreachable for PGEN
}

inline double scalar_abs_pow(double d, double p) {
    double a = std::fabs(d);
    if (p == 1.0) return a;
    if (p == 2.0) return d * d;
    if (p == 3.0) return a * (d * d);
    if (p == 1.5) return a * std::sqrt(a);
    return std::pow(a, p);
}

template <PowMode M>
double sum_abs_pow_impl(const double* d, std::size_t n, double p) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, vabs_pow<M>(_mm256_loadu_pd(d + i)));
    double s = hsum(acc);
    for (; i < n; ++i) s += scalar_abs_pow(d[i], p);
    return s;
}

double v_sum_abs_pow(const double* d, std::size_t n, double p) {
    switch (pow_mode(p)) {
        case P1: return sum_abs_pow_impl<P1>(d, n, p);
        case P15: return sum_abs_pow_impl<P15>(d, n, p);
        case P2: return sum_abs_pow_impl<P2>(d, n, p);
        case P3: return sum_abs_pow_impl<P3>(d, n, p);
        default: return scalar_ops().sum_abs_pow(d, n, p);
    }
}

double v_sum_abs_adj_diff(const double* f, std::size_t n) {
    if (n < 2) return 0.0;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 1;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, vabs(_mm256_sub_pd(_mm256_loadu_pd(f + i), _mm256_loadu_pd(f + i - 1))));
    double s = hsum(acc);
    for (; i < n; ++i) s += std::fabs(f[i] - f[i - 1]);
    return s;
}

template <PowMode M>
double max_plus_pow_impl(const double* best, const double* f, std::size_t n, double fi, double p) {
    __m256d vfi = _mm256_set1_pd(fi);
    __m256d m = _mm256_set1_pd(-1.0 / 0.0);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d cand = _mm256_add_pd(_mm256_loadu_pd(best + j),
                                     vabs_pow<M>(_mm256_sub_pd(vfi, _mm256_loadu_pd(f + j))));
        m = _mm256_max_pd(m, cand);
    }
    double mx = hmax(m);
    for (; j < n; ++j) {
        double c = best[j] + scalar_abs_pow(fi - f[j], p);
        if (c > mx) mx = c;
    }
    return mx;
}

double v_max_plus_pow(const double* best, const double* f, std::size_t n, double fi, double p) {
    switch (pow_mode(p)) {
        case P1: return max_plus_pow_impl<P1>(best, f, n, fi, p);
        case P15: return max_plus_pow_impl<P15>(best, f, n, fi, p);
        case P2: return max_plus_pow_impl<P2>(best, f, n, fi, p);
        case P3: return max_plus_pow_impl<P3>(best, f, n, fi, p);
        default: return scalar_ops().max_plus_pow(best, f, n, fi, p);
    }
}

double v_rs_cell_sum(const double* ftag, const double* ghi, const double* glo, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d dhi = _mm256_sub_pd(_mm256_loadu_pd(ghi + j + 1), _mm256_loadu_pd(ghi + j));
        __m256d dlo = _mm256_sub_pd(_mm256_loadu_pd(glo + j + 1), _mm256_loadu_pd(glo + j));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(ftag + j), _mm256_sub_pd(dhi, dlo), acc);
    }
    double s = hsum(acc);
    for (; j < n; ++j) s += ftag[j] * ((ghi[j + 1] - glo[j + 1]) - (ghi[j] - glo[j]));
    return s;
}

std::size_t v_count_in_band(const double* v, std::size_t n, double x, double eps) {
    __m256d vx = _mm256_set1_pd(x), ve = _mm256_set1_pd(eps);
    std::size_t c = 0, i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = vabs(_mm256_sub_pd(_mm256_loadu_pd(v + i), vx));
        int mask = _mm256_movemask_pd(_mm256_cmp_pd(d, ve, _CMP_LT_OQ));
        c += static_cast<std::size_t>(__builtin_popcount(mask));
    }
    for (; i < n; ++i)
        if (std::fabs(v[i] - x) < eps) ++c;
    return c;
}

std::size_t v_first_exit(const double* v, std::size_t n, double c, double r) {
    __m256d vc = _mm256_set1_pd(c), vr = _mm256_set1_pd(r);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = vabs(_mm256_sub_pd(_mm256_loadu_pd(v + i), vc));
        int mask = _mm256_movemask_pd(_mm256_cmp_pd(d, vr, _CMP_GE_OQ));
        if (mask) return i + static_cast<std::size_t>(__builtin_ctz(mask));
    }
    for (; i < n; ++i)
        if (std::fabs(v[i] - c) >= r) return i;
    return n;
}

double v_max_abs_diff(const double* a, const double* b, std::size_t n) {
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        m = _mm256_max_pd(m, vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
    double mx = hmax(m);
    for (; i < n; ++i) mx = std::fmax(mx, std::fabs(a[i] - b[i]));
    return mx;
}

double v_max_scaled_diff(const double* a, double a0, const double* w, std::size_t n) {
    __m256d v0 = _mm256_set1_pd(a0);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        m = _mm256_max_pd(m, _mm256_mul_pd(vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i), v0)),
                                           _mm256_loadu_pd(w + i)));
    double mx = hmax(m);
    for (; i < n; ++i) mx = std::fmax(mx, std::fabs(a[i] - a0) * w[i]);
    return mx;
}

double v_sum(const double* d, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(d + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += d[i];
    return s;
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{v_sum_abs_pow, v_sum_abs_adj_diff, v_max_plus_pow, v_rs_cell_sum,
                         v_count_in_band, v_first_exit, v_max_abs_diff, v_max_scaled_diff,
                         v_sum, "avx2"};
    return ops;
}

bool avx2_available() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace bivar::kern

#else  // non-x86: no vector variant, dispatcher falls back to scalar

namespace bivar::kern {
const Ops& avx2_ops() { return scalar_ops(); }
bool avx2_available() { return false; }
}  // namespace bivar::kern

#endif
