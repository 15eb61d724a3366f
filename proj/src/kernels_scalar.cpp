#include "bivar/kernels.hpp"

#include <cmath>

namespace bivar::kern {
namespace {

inline double abs_pow(double d, double p) {
    double a = std::fabs(d);
    if (p == 1.0) return a;
    if (p == 2.0) return d * d;
    if (p == 3.0) return a * (d * d);
    if (p == 1.5) return a * std::sqrt(a);
    return std::pow(a, p);
}

double s_sum_abs_pow(const double* d, std::size_t n, double p) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += abs_pow(d[i], p);
    return s;
}

double s_sum_abs_adj_diff(const double* f, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 1; i < n; ++i) s += std::fabs(f[i] - f[i - 1]);
    return s;
}

double s_max_plus_pow(const double* best, const double* f, std::size_t n, double fi, double p) {
    double m = -1.0 / 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double c = best[j] + abs_pow(fi - f[j], p);
        if (c > m) m = c;
    }
    return m;
}

double s_rs_cell_sum(const double* ftag, const double* ghi, const double* glo, std::size_t n) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        s += ftag[j] * ((ghi[j + 1] - glo[j + 1]) - (ghi[j] - glo[j]));
    return s;
}

std::size_t s_count_in_band(const double* v, std::size_t n, double x, double eps) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (std::fabs(v[i] - x) < eps) ++c;
    return c;
}

std::size_t s_first_exit(const double* v, std::size_t n, double c, double r) {
    for (std::size_t i = 0; i < n; ++i)
        if (std::fabs(v[i] - c) >= r) return i;
    return n;
}

double s_max_abs_diff(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(a[i] - b[i]));
    return m;
}

double s_max_scaled_diff(const double* a, double a0, const double* w, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::fmax(m, std::fabs(a[i] - a0) * w[i]);
    return m;
}

double s_sum(const double* d, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += d[i];
    return s;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{s_sum_abs_pow, s_sum_abs_adj_diff, s_max_plus_pow, s_rs_cell_sum,
                         s_count_in_band, s_first_exit, s_max_abs_diff, s_max_scaled_diff,
                         s_sum, "scalar"};
    return ops;
}

}  // namespace bivar::kern
