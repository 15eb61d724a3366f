#ifndef BIVAR_VARIATION_HPP
#define BIVAR_VARIATION_HPP

#include <cstdint>

#include "bivar/core.hpp"

// p-variation seminorms, Young's two-parameter bivariations, joint variation,
// and the rectangle Hoelder-control check.
//
// Convention: all suprema are taken over subsequences of the sample grid that
// include both endpoints. For p >= 1 this matches the continuum seminorm of
// the piecewise-linear interpolant; p < 1 is rejected (refining a monotone
// segment then increases the sum, so grid subsequences no longer realize it).

namespace bivar {

VariationResult p_variation(const SampledFunction1D& f, double p);

// independent oracle: exhaustive enumeration of interior subsets (n <= 20)
VariationResult p_variation_bruteforce(const SampledFunction1D& f, double p);

// ||F||_{1;p}: sup over y-pairs of the p-variation in x of F(.,y1) - F(.,y2)
VariationResult bivariation_x(const SampledFunction2D& F, double p);
// ||F||_{2;q}: sup over x-pairs of the q-variation in y of F(x1,.) - F(x2,.)
VariationResult bivariation_y(const SampledFunction2D& F, double q);

enum class JointMode { Exact, Heuristic };

// V_p(F): sup over row x column subsequences of (sum sum |DDF|^p)^(1/p).
// Exact mode enumerates subsets (both dims <= 10); Heuristic runs alternating
// row/column DP ascent from the full grid and 8 seeded random restarts.
VariationResult joint_variation(const SampledFunction2D& F, double p, JointMode mode);

struct HolderReport {
    bool holds = false;
    double max_ratio = 0.0;  // max |DDG| / (C |dx|^{1/pt} |dy|^{1/qt})
    std::size_t i1 = 0, i2 = 0, j1 = 0, j2 = 0;  // worst rectangle
};

// checks |DDG| <= C |x2-x1|^{1/p_tilde} |y2-y1|^{1/q_tilde} over all grid
// rectangles (all index pairs i1<i2, j1<j2); O(nx^2 * ny^2)
HolderReport check_holder_control(const SampledFunction2D& G, double C, double p_tilde,
                                  double q_tilde);

namespace detail {

// workspace so the pair loops in bivariation don't allocate
struct PvarScratch {
    std::vector<double> diff, contracted, best;
};

// max over endpoint-containing subsequences of sum |delta|^p (the p-th power,
// not the root); exact for p >= 1
double pvar_power_sum(const double* v, std::size_t n, double p, PvarScratch& ws);

// same value via parent-tracking DP, also yields the realizing subsequence
double pvar_power_sum_subset(const double* v, std::size_t n, double p,
                             std::vector<std::size_t>& subset);

}  // namespace detail

}  // namespace bivar

#endif
