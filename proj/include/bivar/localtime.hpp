#pragma once

#include <cstdint>
#include <vector>

#include "bivar/core.hpp"

namespace bivar {

// uniform-grid Brownian sample path, B(0) = 0, reproducible per seed
struct BrownianPath {
    std::vector<double> t;
    std::vector<double> b;
    std::uint64_t seed = 0;

    double horizon() const { return t.back(); }
    std::size_t n_steps() const { return t.size() - 1; }
};

BrownianPath simulate_bm(double T, std::size_t n_steps, std::uint64_t seed);

struct StopResult {
    BrownianPath path;       // frozen after the first grid time with |B| > 2^m
    bool stopped = false;
    std::size_t stop_index = 0;  // grid index of the freeze (t.size() when never)
};

StopResult stop_at_exit(const BrownianPath& path, int m);

// walk on b(0) + 2^{-k} Z extracted from threshold crossings of the path;
// consecutive levels differ by exactly one step
struct EmbeddedWalk {
    int k = 0;
    double step = 0.0;            // 2^{-k}
    std::vector<double> times;    // strictly increasing, times[0] = t_0
    std::vector<double> levels;   // snapped to exact multiples of the step

    std::size_t steps_before(double t) const;  // # crossings with time <= t
};

EmbeddedWalk embed_walk(const BrownianPath& path, int k);

// cumulative upcrossing counts per dyadic level over an output time grid;
// the level axis spans the extended range [-2^m - 1, 2^m] so the low strip
// the walk cannot reach stays identically zero
struct UpcrossingField {
    int k = 0;
    int m = 0;
    double step = 0.0;
    std::vector<double> t_grid;
    std::vector<double> x_levels;          // j * 2^{-k}, j = j_lo .. j_lo + nx - 1
    long long j_lo = 0;
    std::vector<std::uint32_t> counts;     // row-major (t, level): u at time t_grid[i]
    std::size_t clipped = 0;               // crossings outside the level range

    std::size_t nt() const { return t_grid.size(); }
    std::size_t nx() const { return x_levels.size(); }
    std::uint32_t count_at(std::size_t ti, std::size_t ji) const { return counts[ti * nx() + ji]; }
    double field_at(std::size_t ti, std::size_t ji) const {
        return 2.0 * step * static_cast<double>(count_at(ti, ji));
    }
    // piecewise-constant-in-x convention: level index is ceil(x / step), 0 at x = 0;
    // time snaps to the last grid point <= t
    double value(double t, double x) const;
    SampledFunction2D field() const;  // sampled (t, x) -> 2 * 2^{-k} * u
};

UpcrossingField upcrossing_field(const EmbeddedWalk& walk, int m, std::vector<double> t_grid,
                                 int k);

// occupation-density estimate: l(t, x) = (1/2e) sum of dt over full sample
// intervals [t_i, t_{i+1}] within [0, t] whose left endpoint lies in (x-e, x+e)
struct LocalTimeField {
    std::vector<double> t_grid;
    std::vector<double> x_grid;
    std::vector<double> values;  // row-major (t, x)
    double epsilon = 0.0;

    std::size_t nt() const { return t_grid.size(); }
    std::size_t nx() const { return x_grid.size(); }
    double at(std::size_t ti, std::size_t xi) const { return values[ti * nx() + xi]; }
    SampledFunction2D field() const;
};

LocalTimeField occupation_local_time(const BrownianPath& path, std::vector<double> x_grid,
                                     std::vector<double> t_grid, double epsilon);

// strong-approximation experiment: per level exponent k, Monte Carlo means of
// sup |U^k - l| and of the Young-integral gap |II U^k dg - II l dg| against a
// smooth test integrator g(s, x) = c s^a (x + 2^m + 1)^b on the extended domain
struct ExperimentConfig {
    std::vector<int> ks{3, 4, 5, 6};
    std::size_t n_paths = 200;
    std::uint64_t seed0 = 1;
    int m = 2;
    double T = 1.0;
    double g_c = 0.1;
    double g_a = 1.0;
    double g_b = 2.0;
    // per-k path resolution 2^{2k + oversample_exp}; the embed guard needs >= 6
    int oversample_exp = 10;
    std::size_t t_out = 257;      // output/integration time grid size
    double tol = 1e-4;            // integral refinement tolerance
    std::size_t max_depth = 11;
    std::size_t threads = 1;
    // smoothness/exponent hypothesis parameters for the integrator check
    double q1 = 1.25;
    double q2 = 1.02;
    double alpha = 0.9;
    double delta = 1.0;
    bool check_hypotheses = true;
};

struct ExperimentRow {
    int k = 0;
    std::size_t n_paths = 0;
    double mean_sup_error = 0.0;
    double se_sup_error = 0.0;
    double mean_integral_l1_error = 0.0;
    double se_integral_l1_error = 0.0;
    double stopped_fraction = 0.0;
};

std::vector<ExperimentRow> convergence_experiment(const ExperimentConfig& cfg);

// the smooth test integrator of the experiment, sampled on the given grids
SampledFunction2D experiment_integrator(const ExperimentConfig& cfg,
                                        const std::vector<double>& t_grid,
                                        const std::vector<double>& x_grid);

// both sides of the discrete double summation-by-parts identity for
// sum g * DDL (left tags), requiring the first time row of L to vanish;
// returns the absolute residual between the two evaluations
double summation_by_parts_check(const SampledFunction2D& g, const SampledFunction2D& L);

// per-field seminorms used by the moment table: sup over x-levels of the
// 1-variation in t, and sup over times of the (2+delta)-variation in x
// raised to the (2+delta) power
struct FieldMoments {
    double sup_x_time_var = 0.0;
    double sup_t_space_var_pow = 0.0;
};

FieldMoments field_moments(const UpcrossingField& fld, double delta);

struct MomentRow {
    int k = 0;
    std::size_t n_paths = 0;
    double mean_time_var = 0.0;
    double se_time_var = 0.0;
    double mean_space_var_pow = 0.0;
    double se_space_var_pow = 0.0;
};

std::vector<MomentRow> bivariation_moments(const std::vector<int>& ks, std::size_t n_paths,
                                           std::uint64_t seed0, int m, double delta = 1.0,
                                           std::size_t t_out = 65, int oversample_exp = 10,
                                           std::size_t threads = 1);

}  // namespace bivar
