#include "bivar/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "bivar/parallel.hpp"
#include "bivar/variation.hpp"

namespace bivar {

namespace {

constexpr double kPi = 3.14159265358979323846;

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uni(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * u01(rng); }

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {  // inclusive
    std::size_t span = hi - lo + 1;
    auto i = static_cast<std::size_t>(u01(rng) * static_cast<double>(span));
    return lo + std::min(i, span - 1);
}

struct Exponents {
    double p, q, pt, qt, alpha;
};

// strictly admissible draws: cap p(1 - 1/pt) and q(1 - 1/qt) at ~0.35 each so
// the alpha window (lo, hi) is at least 0.3 wide, then stay well inside it
Exponents draw_exponents(std::mt19937_64& rng, int family) {
    static constexpr double grid[] = {1.0, 1.25, 1.5, 2.0};
    double p, q;
    if (family == 2) {
        p = 1.0;  // keeps 1/p + 1/q > 1 so the joint-variation bound applies
        q = (u01(rng) < 0.5) ? 1.0 : 1.25;
    } else {
        p = grid[pick(rng, 0, 3)];
        q = grid[pick(rng, 0, 3)];
    }
    double pt = uni(rng, 1.05, std::min(1.5, 0.995 / (1.0 - 0.35 / p)));
    double qt = uni(rng, 1.05, std::min(1.5, 0.995 / (1.0 - 0.35 / q)));
    double lo = p * (1.0 - 1.0 / pt);
    double hi = 1.0 - q * (1.0 - 1.0 / qt);
    double alpha = lo + (0.30 + 0.40 * u01(rng)) * (hi - lo);
    return {p, q, pt, qt, alpha};
}

// exact 1D Hoelder constant of the sampled profile:
// max |v_j - v_i| / (x_j - x_i)^expo over all sample pairs
double holder_1d(const std::vector<double>& xs, const std::vector<double>& vs, double expo) {
    double best = 0.0;
    std::size_t n = xs.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double r = std::fabs(vs[j] - vs[i]) / std::pow(xs[j] - xs[i], expo);
            if (r > best) best = r;
        }
    return best;
}

// multi-octave cosine sum with amplitude 2^{-n expo} at octave n; the octave
// count is capped by the caller so the top frequency stays grid-resolved
std::vector<double> rough_profile(const std::vector<double>& xs, double expo, int octaves,
                                  std::mt19937_64& rng) {
    double span = xs.back() - xs.front();
    std::vector<double> phase(static_cast<std::size_t>(octaves) + 1);
    for (auto& ph : phase) ph = uni(rng, 0.0, 2.0 * kPi);
    std::vector<double> out(xs.size(), 0.0);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double t = (xs[i] - xs.front()) / span;
        double s = 0.0;
        for (int n = 0; n <= octaves; ++n)
            s += std::exp2(-n * expo) * std::cos(std::ldexp(kPi, n) * t + phase[n]);
        out[i] = s;
    }
    return out;
}

struct SmoothTerm {
    double s, ax, ay, wx, wy;  // s t^ax u^ay (1 + 0.25 cos(wx t) cos(wy u))
};

// smooth integrand on the unit-rescaled grid; the power factors put exact
// zeros on the low edges (pow(0, a) == 0 and the grids start at 0)
std::vector<double> eval_smooth(const std::vector<double>& xs, const std::vector<double>& ys,
                                const std::vector<SmoothTerm>& terms) {
    std::vector<double> v(xs.size() * ys.size(), 0.0);
    double bx = xs.back(), by = ys.back();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double t = xs[i] / bx;
        for (std::size_t j = 0; j < ys.size(); ++j) {
            double u = ys[j] / by;
            double acc = 0.0;
            for (const auto& tm : terms)
                acc += tm.s * std::pow(t, tm.ax) * std::pow(u, tm.ay) *
                       (1.0 + 0.25 * std::cos(tm.wx * t) * std::cos(tm.wy * u));
            v[i * ys.size() + j] = acc;
        }
    }
    return v;
}

}  // namespace

SweepCase make_sweep_case(std::size_t index, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ull * (index + 1)));
    int family = static_cast<int>(index % 4);
    Exponents e = draw_exponents(rng, family);
    double bx = 0.5 + 0.25 * static_cast<double>(pick(rng, 0, 2));
    double by = 0.5 + 0.25 * static_cast<double>(pick(rng, 0, 2));

    std::vector<double> xs, ys;
    if (family == 2) {
        xs = linspace(0.0, bx, pick(rng, 4, 9));
        ys = linspace(0.0, by, pick(rng, 4, 9));
    } else if (family == 3) {
        xs = dyadic_grid(0.0, bx, 5);
        ys = dyadic_grid(0.0, by, 5);
    } else {
        xs = dyadic_grid(0.0, bx, 6);
        ys = dyadic_grid(0.0, by, 6);
    }

    static constexpr double expo[] = {1.0, 1.5, 2.0, 2.5};
    std::size_t n_terms = (family == 0) ? 1 : (family == 1 ? 2 + pick(rng, 0, 1) : 1 + pick(rng, 0, 1));
    std::vector<SmoothTerm> terms(n_terms);
    for (auto& tm : terms) {
        tm.s = (u01(rng) < 0.5 ? -1.0 : 1.0) * uni(rng, 0.4, 1.6);
        tm.ax = expo[pick(rng, 0, 3)];
        tm.ay = expo[pick(rng, 0, 3)];
        tm.wx = uni(rng, 0.0, 4.0);
        tm.wy = uni(rng, 0.0, 4.0);
    }
    SampledFunction2D F(xs, ys, eval_smooth(xs, ys, terms));

    std::vector<double> gv(xs.size() * ys.size(), 0.0);
    double C = 0.0;
    if (family == 0 || family == 1) {
        // separable rough integrator; the increment constant is the rank sum
        // |c_r| H(W_r) H(V_r), exact for the sampled values because
        // |DDG| <= sum_r |c_r| |DW_r| |DV_r|
        std::size_t rank = (family == 0) ? pick(rng, 1, 3) : pick(rng, 1, 2);
        for (std::size_t r = 0; r < rank; ++r) {
            double cr = (u01(rng) < 0.5 ? -1.0 : 1.0) * uni(rng, 0.4, 1.2);
            auto W = rough_profile(xs, 1.0 / e.pt, 5, rng);
            auto V = rough_profile(ys, 1.0 / e.qt, 5, rng);
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = 0; j < ys.size(); ++j) gv[i * ys.size() + j] += cr * W[i] * V[j];
            C += std::fabs(cr) * holder_1d(xs, W, 1.0 / e.pt) * holder_1d(ys, V, 1.0 / e.qt);
        }
    } else {
        // smooth integrator: additive parts (invisible to rectangle
        // increments) plus a bilinear core and a mild product wiggle; the
        // constant is measured on the grid with a cushion
        double g0 = uni(rng, -0.5, 0.5), a1 = uni(rng, -0.5, 0.5), a2 = uni(rng, -0.5, 0.5);
        double s1 = (u01(rng) < 0.5 ? -1.0 : 1.0) * uni(rng, 0.5, 1.5);
        double s2 = uni(rng, -0.4, 0.4);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double t = xs[i] / bx;
            for (std::size_t j = 0; j < ys.size(); ++j) {
                double u = ys[j] / by;
                gv[i * ys.size() + j] =
                    g0 + a1 * t + a2 * u + s1 * t * u + s2 * std::sin(kPi * t) * std::sin(kPi * u);
            }
        }
        C = check_holder_control(SampledFunction2D(xs, ys, gv), 1.0, e.pt, e.qt).max_ratio *
            (1.0 + 1e-9);
    }
    SampledFunction2D G(xs, ys, std::move(gv));
    double half = std::sqrt(C);
    ControlModulus mod(half, e.pt, half, e.qt, e.alpha);
    return SweepCase(index, family, e.p, e.q, mod, std::move(F), std::move(G));
}

SweepOutcome evaluate_case(const SweepCase& c, double tol, std::size_t max_depth,
                           double holder_scale) {
    SweepOutcome o;
    o.index = c.index;
    o.family = c.family;
    o.nx = c.F.nx();
    o.ny = c.F.ny();
    o.p = c.p;
    o.q = c.q;
    o.p_tilde = c.mod.p_tilde;
    o.q_tilde = c.mod.q_tilde;
    o.alpha = c.mod.alpha;
    ControlModulus mod(c.mod.c_lambda * holder_scale, c.mod.p_tilde, c.mod.c_mu, c.mod.q_tilde,
                       c.mod.alpha);
    try {
        o.report = verify_main_inequality(c.F, c.G, c.p, c.q, mod, tol, max_depth);
    } catch (const hypothesis_error& err) {
        o.excluded = true;
        o.note = err.what();
        return o;
    }
    o.satisfied = o.report.satisfied;
    o.ratio = (o.report.min_rhs > 0.0) ? o.report.lhs / o.report.min_rhs : 0.0;
    return o;
}

std::vector<SweepOutcome> run_sweep(std::size_t n_cases, std::uint64_t seed, double tol,
                                    std::size_t max_depth, std::size_t threads,
                                    double holder_scale) {
    std::vector<SweepOutcome> out(n_cases);
    parallel_replicates(n_cases, threads, [&](std::size_t i) {
        out[i] = evaluate_case(make_sweep_case(i, seed), tol, max_depth, holder_scale);
    });
    return out;
}

}  // namespace bivar
