#ifndef BIVAR_SWEEP_HPP
#define BIVAR_SWEEP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bivar/young.hpp"

// randomized (F, G) case generator for the main-inequality verifier. Cases
// are constructed to satisfy every hypothesis: F vanishes exactly on the low
// edges, G carries a certified rectangle increment constant (analytic for
// separable rough constructions, measured on the grid otherwise), and the
// exponents are drawn strictly inside the admissible region.

namespace bivar {

// family 0: rank-1 polynomial F  x  separable multi-octave rough G
// family 1: multi-term smooth F  x  separable multi-octave rough G
// family 2: small grids (<= 9 points per side), smooth F and G; joint
//           variations are exactly computable so the report gains the
//           joint-variation bound
// family 3: mid-size smooth F and smooth G, measured increment constant
struct SweepCase {
    std::size_t index;
    int family;
    double p, q;
    ControlModulus mod;
    SampledFunction2D F, G;

    SweepCase(std::size_t idx, int fam, double p_, double q_, ControlModulus mod_,
              SampledFunction2D F_, SampledFunction2D G_)
        : index(idx), family(fam), p(p_), q(q_), mod(mod_), F(std::move(F_)), G(std::move(G_)) {}
};

// one row of the sweep table; `excluded` marks a case whose hypotheses the
// verifier rejected -- such rows stay in the output, flagged with the reason
struct SweepOutcome {
    std::size_t index = 0;
    int family = 0;
    std::size_t nx = 0, ny = 0;
    double p = 0.0, q = 0.0;
    double p_tilde = 0.0, q_tilde = 0.0, alpha = 0.0;
    bool excluded = false;
    std::string note;        // rejection reason when excluded
    bool satisfied = false;  // report.satisfied when not excluded
    double ratio = 0.0;      // lhs / min_rhs (0 when min_rhs is 0)
    BoundReport report;      // meaningful only when not excluded
};

// deterministic in (index, seed): each case owns an independently seeded
// generator, so case k is the same whether built alone or inside a sweep
SweepCase make_sweep_case(std::size_t index, std::uint64_t seed);

// holder_scale multiplies the certified constant before verification; values
// below 1 manufacture hypothesis rejections (the flagged-row path)
SweepOutcome evaluate_case(const SweepCase& c, double tol = 2e-4, std::size_t max_depth = 10,
                           double holder_scale = 1.0);

std::vector<SweepOutcome> run_sweep(std::size_t n_cases, std::uint64_t seed, double tol = 2e-4,
                                    std::size_t max_depth = 10, std::size_t threads = 1,
                                    double holder_scale = 1.0);

}  // namespace bivar

#endif
