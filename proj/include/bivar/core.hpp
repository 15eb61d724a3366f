#ifndef BIVAR_CORE_HPP
#define BIVAR_CORE_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bivar {

// Comparison tolerances used across the library: relative for values away
// from zero, absolute near zero.
inline constexpr double kRelTol = 1e-12;
inline constexpr double kAbsTol = 1e-14;

inline bool close(double a, double b, double rel = kRelTol, double abs = kAbsTol) {
    double d = a > b ? a - b : b - a;
    double m = std::max(a < 0 ? -a : a, b < 0 ? -b : b);
    return d <= abs || d <= rel * m;
}

// Input that violates a documented precondition (bad exponent, unsorted grid,
// hypothesis failure). The CLI maps this to exit code 2.
struct hypothesis_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Iteration limit reached without meeting the convergence rule. Exit code 3.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_increasing(const std::vector<double>& x, const char* what);

// Scalar function sampled on a strictly increasing grid. Evaluation between
// samples is linear interpolation; at a grid point it is the exact sample.
class SampledFunction1D {
  public:
    std::vector<double> x;
    std::vector<double> v;

    SampledFunction1D() = default;
    SampledFunction1D(std::vector<double> xs, std::vector<double> vs);

    double a() const { return x.front(); }
    double b() const { return x.back(); }
    std::size_t size() const { return x.size(); }
    double value_at(double xq) const;
};

// Two-parameter function sampled on a tensor grid, row-major in x.
class SampledFunction2D {
  public:
    std::vector<double> gx;
    std::vector<double> gy;
    std::vector<double> v;  // v[i*gy.size() + j] = F(gx[i], gy[j])

    SampledFunction2D() = default;
    SampledFunction2D(std::vector<double> xs, std::vector<double> ys, std::vector<double> vals);

    std::size_t nx() const { return gx.size(); }
    std::size_t ny() const { return gy.size(); }
    double at(std::size_t i, std::size_t j) const { return v[i * gy.size() + j]; }
    double& at(std::size_t i, std::size_t j) { return v[i * gy.size() + j]; }
    double value_at(double xq, double yq) const;

    // max |F| along the x = gx[0] and y = gy[0] edges; the integral machinery
    // expects functions vanishing there.
    double max_abs_on_axes() const;
};

struct VariationResult {
    double value = 0.0;
    std::vector<std::size_t> optimal_subset;  // indices into the sample grid, endpoints included
    bool exact = true;
    // for bivariation results: the section pair (y1,y2) or (x1,x2) realizing the sup
    std::optional<std::pair<std::size_t, std::size_t>> section_pair;
    // for joint-variation results: the column subset (optimal_subset holds rows)
    std::vector<std::size_t> optimal_subset_y;
};

// uniform grid helper: n points from a to b inclusive
std::vector<double> linspace(double a, double b, std::size_t n);

}  // namespace bivar

#endif
