#include "bivar/core.hpp"

#include <algorithm>
#include <cmath>

namespace bivar {

void require_increasing(const std::vector<double>& x, const char* what) {
    if (x.size() < 2) throw hypothesis_error(std::string(what) + ": need at least 2 points");
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1]))
            throw hypothesis_error(std::string(what) + ": grid not strictly increasing at index " +
                                   std::to_string(i));
        if (!std::isfinite(x[i - 1]) || !std::isfinite(x[i]))
            throw hypothesis_error(std::string(what) + ": non-finite grid value");
    }
}

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
    for (double d : v)
        if (!std::isfinite(d)) throw hypothesis_error(std::string(what) + ": non-finite value");
}

// index of the cell [x[i], x[i+1]] containing xq; exact grid hits return i with x[i] == xq
std::size_t locate(const std::vector<double>& x, double xq, const char* what) {
    if (xq < x.front() || xq > x.back())
        throw hypothesis_error(std::string(what) + ": query outside sampled domain");
    auto it = std::upper_bound(x.begin(), x.end(), xq);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    return i == 0 ? 0 : i - 1;
}

}  // namespace

SampledFunction1D::SampledFunction1D(std::vector<double> xs, std::vector<double> vs)
    : x(std::move(xs)), v(std::move(vs)) {
    require_increasing(x, "SampledFunction1D");
    if (v.size() != x.size()) throw hypothesis_error("SampledFunction1D: value/grid size mismatch");
    require_finite(v, "SampledFunction1D");
}

double SampledFunction1D::value_at(double xq) const {
    std::size_t i = locate(x, xq, "SampledFunction1D");
    if (xq == x[i]) return v[i];
    if (i + 1 == x.size()) return v[i];  // xq == b handled above; defensive
    double w = (xq - x[i]) / (x[i + 1] - x[i]);
    return v[i] + w * (v[i + 1] - v[i]);
}

SampledFunction2D::SampledFunction2D(std::vector<double> xs, std::vector<double> ys,
                                     std::vector<double> vals)
    : gx(std::move(xs)), gy(std::move(ys)), v(std::move(vals)) {
    require_increasing(gx, "SampledFunction2D x");
    require_increasing(gy, "SampledFunction2D y");
    if (v.size() != gx.size() * gy.size())
        throw hypothesis_error("SampledFunction2D: value/grid size mismatch");
    require_finite(v, "SampledFunction2D");
}

double SampledFunction2D::value_at(double xq, double yq) const {
    std::size_t i = locate(gx, xq, "SampledFunction2D x");
    std::size_t j = locate(gy, yq, "SampledFunction2D y");
    double wx = (xq == gx[i] || i + 1 == gx.size()) ? 0.0 : (xq - gx[i]) / (gx[i + 1] - gx[i]);
    double wy = (yq == gy[j] || j + 1 == gy.size()) ? 0.0 : (yq - gy[j]) / (gy[j + 1] - gy[j]);
    std::size_t i1 = wx > 0.0 ? i + 1 : i;
    std::size_t j1 = wy > 0.0 ? j + 1 : j;
    double f00 = at(i, j), f10 = at(i1, j), f01 = at(i, j1), f11 = at(i1, j1);
    // difference form so constant and separable-linear data reproduce exactly
    return f00 + wx * (f10 - f00) + wy * (f01 - f00) + wx * wy * (f11 - f10 - f01 + f00);
}

double SampledFunction2D::max_abs_on_axes() const {
    double m = 0.0;
    for (std::size_t j = 0; j < ny(); ++j) m = std::max(m, std::fabs(at(0, j)));
    for (std::size_t i = 0; i < nx(); ++i) m = std::max(m, std::fabs(at(i, 0)));
    return m;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n < 2 || !(b > a)) throw hypothesis_error("linspace: need n >= 2 and b > a");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    x.back() = b;
    return x;
}

}  // namespace bivar
