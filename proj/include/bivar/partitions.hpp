#ifndef BIVAR_PARTITIONS_HPP
#define BIVAR_PARTITIONS_HPP

#include "bivar/core.hpp"

// Tagged partitions, step functions built from sampled data, and the dyadic
// refinement chain used to drive integral sums toward their Moore-Pollard
// limit.

namespace bivar {

struct TaggedPartition {
    std::vector<double> points;  // x_0 < ... < x_N, N >= 1
    std::vector<double> tags;    // xi_1..xi_N with x_{i-1} <= xi_i <= x_i

    TaggedPartition(std::vector<double> pts, std::vector<double> tg);
    static TaggedPartition with_midpoint_tags(std::vector<double> pts);

    double a() const { return points.front(); }
    double b() const { return points.back(); }
    std::size_t cells() const { return tags.size(); }
};

// piecewise-constant interpolant: partition points keep their node values,
// strict cell interiors take the tag value of that cell
struct StepFunction1D {
    TaggedPartition partition;
    std::vector<double> node_values;      // f(x_i), i = 0..N
    std::vector<double> interior_values;  // f(xi_i), i = 1..N

    double operator()(double x) const;
    // breakpoints-and-midpoints grid carrying every value the step attains,
    // in path order; p-variation of this sample equals that of the step
    SampledFunction1D resample() const;
};

// 2D analogue; evaluation picks one of four value families depending on
// whether x (resp. y) hits a partition point exactly or lies strictly inside
// a cell. Machine-equal comparison decides "hits exactly".
struct StepFunction2D {
    TaggedPartition px, py;
    std::vector<double> corner_values;  // F(x_i, y_j),    (N+1) x (N'+1) row-major
    std::vector<double> edge_values_x;  // F(x_i, eta_j),  (N+1) x N'
    std::vector<double> edge_values_y;  // F(xi_i, y_j),   N x (N'+1)
    std::vector<double> cell_values;    // F(xi_i, eta_j), N x N'

    double operator()(double x, double y) const;
};

StepFunction1D make_step_1d(const SampledFunction1D& f, const TaggedPartition& part);
StepFunction2D make_step_2d(const SampledFunction2D& F, const TaggedPartition& px,
                            const TaggedPartition& py);

// Pi_0 = {a,b}; each level inserts one point per cell (2^j + 1 points at
// level j), preferring unabsorbed target points whose insertion keeps both
// new gaps < 4(b-a)2^{-(j+1)} (tie-break: closest to the cell midpoint) and
// falling back to the exact midpoint; stops at the first level containing
// every target point.
struct RefinementChain {
    std::vector<std::vector<double>> levels;
    std::vector<double> target;

    std::size_t depth() const { return levels.size() - 1; }  // M
};

// throws hypothesis_error if min target gap < 2^-38 (b-a); convergence_error
// if 40 levels do not absorb the target (unreachable under the guard)
RefinementChain build_chain(const TaggedPartition& target, double a, double b);

// appends pure midpoint-halving levels until depth() == new_depth
RefinementChain extend_chain(RefinementChain chain, std::size_t new_depth);

// largest consecutive gap
double mesh(const std::vector<double>& points);

}  // namespace bivar

#endif
