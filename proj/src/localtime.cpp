#include "bivar/localtime.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <random>
#include <string>

#include "bivar/kernels.hpp"
#include "bivar/parallel.hpp"
#include "bivar/variation.hpp"
#include "bivar/young.hpp"

namespace bivar {

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
    MeanSe r;
    const double n = static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += x;
    r.mean = s / n;
    if (v.size() < 2) return r;
    double ss = 0.0;
    for (double x : v) ss += (x - r.mean) * (x - r.mean);
    r.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return r;
}

// level-index geometry of the extended domain [-2^m - 1, 2^m]
struct LevelRange {
    long long j_lo;
    long long j_hi;
};

LevelRange level_range(int m, int k) {
    LevelRange r;
    r.j_hi = 1ll << (m + k);
    r.j_lo = -(r.j_hi + (1ll << k));
    return r;
}

std::vector<double> level_grid(int m, int k) {
    LevelRange r = level_range(m, k);
    std::vector<double> x(static_cast<std::size_t>(r.j_hi - r.j_lo) + 1);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::ldexp(static_cast<double>(r.j_lo + static_cast<long long>(i)), -k);
    return x;
}

}  // namespace

BrownianPath simulate_bm(double T, std::size_t n_steps, std::uint64_t seed) {
    if (n_steps < 1) throw hypothesis_error("simulate_bm: need n_steps >= 1");
    if (!(T > 0.0)) throw hypothesis_error("simulate_bm: need T > 0");
    BrownianPath p;
    p.seed = seed;
    p.t = linspace(0.0, T, n_steps + 1);
    p.b.resize(n_steps + 1);
    p.b[0] = 0.0;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> inc(0.0, std::sqrt(T / static_cast<double>(n_steps)));
    for (std::size_t i = 1; i <= n_steps; ++i) p.b[i] = p.b[i - 1] + inc(rng);
    return p;
}

StopResult stop_at_exit(const BrownianPath& path, int m) {
    if (path.t.size() < 2 || path.b.size() != path.t.size())
        throw hypothesis_error("stop_at_exit: malformed path");
    const double barrier = std::ldexp(1.0, m);
    StopResult r;
    r.path = path;
    r.stop_index = path.t.size();
    std::size_t hit = kern::active().first_exit(path.b.data(), path.b.size(), 0.0, barrier);
    // the scan finds |b| >= barrier; the stopping rule wants strict excess
    while (hit < path.b.size() && !(std::fabs(path.b[hit]) > barrier)) {
        std::size_t next = kern::active().first_exit(path.b.data() + hit + 1,
                                                     path.b.size() - hit - 1, 0.0, barrier);
        hit = hit + 1 + next;
    }
    if (hit < path.b.size()) {
        r.stopped = true;
        r.stop_index = hit;
        std::fill(r.path.b.begin() + static_cast<std::ptrdiff_t>(hit) + 1, r.path.b.end(),
                  path.b[hit]);
    }
    return r;
}

std::size_t EmbeddedWalk::steps_before(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    return it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
}

EmbeddedWalk embed_walk(const BrownianPath& path, int k) {
    if (k < 0 || k > 25) throw hypothesis_error("embed_walk: k out of range [0, 25]");
    if (path.t.size() < 2 || path.b.size() != path.t.size())
        throw hypothesis_error("embed_walk: malformed path");
    const std::size_t n_steps = path.t.size() - 1;
    const std::size_t needed = std::size_t(1) << (2 * k + 6);
    if (n_steps < needed)
        throw hypothesis_error("embed_walk: path has " + std::to_string(n_steps) +
                               " steps but the oversampling guard requires n_steps >= 2^(2k+6) = " +
                               std::to_string(needed) + " for k = " + std::to_string(k));
    EmbeddedWalk w;
    w.k = k;
    w.step = std::ldexp(1.0, -k);
    w.times.push_back(path.t.front());
    w.levels.push_back(path.b.front());
    const double base = path.b.front();
    long long j = 0;  // anchor = base + j * step, exact dyadic offset
    double anchor = base;
    std::size_t i = 1;
    const auto& ops = kern::active();
    while (i < path.b.size()) {
        // vectorized skip to the next sample leaving the band around the anchor
        std::size_t hop = ops.first_exit(path.b.data() + i, path.b.size() - i, anchor, w.step);
        i += hop;
        if (i >= path.b.size()) break;
        const double v = path.b[i];
        double t_from = path.t[i - 1];
        double v_from = path.b[i - 1];
        // same-sample retest: one sample can complete several crossings
        while (std::fabs(v - anchor) >= w.step) {
            j += (v > anchor) ? 1 : -1;
            const double target = base + std::ldexp(static_cast<double>(j), -k);
            const double frac = (target - v_from) / (v - v_from);
            double t_cross = t_from + frac * (path.t[i] - t_from);
            if (!(t_cross > w.times.back()))
                t_cross = std::nextafter(w.times.back(), std::numeric_limits<double>::infinity());
            w.times.push_back(t_cross);
            w.levels.push_back(target);
            anchor = target;
            v_from = target;
            t_from = t_cross;
        }
        ++i;
    }
    return w;
}

UpcrossingField upcrossing_field(const EmbeddedWalk& walk, int m, std::vector<double> t_grid,
                                 int k) {
    if (k != walk.k) throw hypothesis_error("upcrossing_field: level exponent mismatch");
    if (m < 0 || m + k > 40) throw hypothesis_error("upcrossing_field: m out of range");
    require_increasing(t_grid, "upcrossing_field t_grid");
    UpcrossingField f;
    f.k = k;
    f.m = m;
    f.step = std::ldexp(1.0, -k);
    f.t_grid = std::move(t_grid);
    LevelRange lr = level_range(m, k);
    f.j_lo = lr.j_lo;
    f.x_levels = level_grid(m, k);
    const std::size_t nx = f.x_levels.size();
    const std::size_t nt = f.t_grid.size();
    f.counts.assign(nt * nx, 0);
    for (std::size_t n = 1; n < walk.levels.size(); ++n) {
        if (!(walk.levels[n] > walk.levels[n - 1])) continue;  // count up-moves only
        const double jq = walk.levels[n] / f.step;
        const long long j = std::llround(jq);
        if (std::fabs(jq - static_cast<double>(j)) > 1e-6)
            throw hypothesis_error("upcrossing_field: walk levels are not multiples of the step");
        if (j < lr.j_lo || j > lr.j_hi) {
            ++f.clipped;
            continue;
        }
        auto it = std::lower_bound(f.t_grid.begin(), f.t_grid.end(), walk.times[n]);
        if (it == f.t_grid.end()) continue;  // beyond the last output time
        f.counts[static_cast<std::size_t>(it - f.t_grid.begin()) * nx +
                 static_cast<std::size_t>(j - lr.j_lo)] += 1;
    }
    for (std::size_t ti = 1; ti < nt; ++ti)
        for (std::size_t ji = 0; ji < nx; ++ji)
            f.counts[ti * nx + ji] += f.counts[(ti - 1) * nx + ji];
    return f;
}

double UpcrossingField::value(double t, double x) const {
    if (t < t_grid.front()) return 0.0;
    auto it = std::upper_bound(t_grid.begin(), t_grid.end(), t);
    const std::size_t ti = static_cast<std::size_t>(it - t_grid.begin()) - 1;
    const long long j = static_cast<long long>(std::ceil(x / step));
    if (j < j_lo || j >= j_lo + static_cast<long long>(nx())) return 0.0;
    return field_at(ti, static_cast<std::size_t>(j - j_lo));
}

SampledFunction2D UpcrossingField::field() const {
    std::vector<double> v(counts.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = 2.0 * step * static_cast<double>(counts[i]);
    return SampledFunction2D(t_grid, x_levels, std::move(v));
}

SampledFunction2D LocalTimeField::field() const { return SampledFunction2D(t_grid, x_grid, values); }

LocalTimeField occupation_local_time(const BrownianPath& path, std::vector<double> x_grid,
                                     std::vector<double> t_grid, double epsilon) {
    if (!(epsilon > 0.0)) throw hypothesis_error("occupation_local_time: epsilon must be > 0");
    if (path.t.size() < 2 || path.b.size() != path.t.size())
        throw hypothesis_error("occupation_local_time: malformed path");
    require_increasing(x_grid, "occupation_local_time x_grid");
    require_increasing(t_grid, "occupation_local_time t_grid");
    const std::size_t n = path.t.size() - 1;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dv = path.b[i + 1] - path.b[i];
        ss += dv * dv;
    }
    const double rms = std::sqrt(ss / static_cast<double>(n));
    if (epsilon < 2.0 * rms)
        std::cerr << "occupation_local_time: warning: epsilon " << epsilon
                  << " is below twice the rms path increment " << rms
                  << "; the band estimator is under-resolved\n";

    LocalTimeField out;
    out.epsilon = epsilon;
    out.t_grid = std::move(t_grid);
    out.x_grid = std::move(x_grid);
    const std::size_t nx = out.x_grid.size();
    const std::size_t nt = out.t_grid.size();
    out.values.assign(nt * nx, 0.0);

    const double dt = (path.t.back() - path.t.front()) / static_cast<double>(n);
    const double scale = dt / (2.0 * epsilon);
    std::vector<std::int64_t> cnt(nx, 0);
    std::size_t next_out = 0;
    auto flush_before = [&](double limit) {
        while (next_out < nt && out.t_grid[next_out] < limit) {
            double* row = out.values.data() + next_out * nx;
            for (std::size_t jx = 0; jx < nx; ++jx)
                row[jx] = static_cast<double>(cnt[jx]) * scale;
            ++next_out;
        }
    };
    for (std::size_t i = 0; i < n && next_out < nt; ++i) {
        flush_before(path.t[i + 1]);  // outputs before this interval's end exclude it
        if (next_out == nt) break;
        const double v = path.b[i];
        auto it = std::lower_bound(out.x_grid.begin(), out.x_grid.end(), v - epsilon);
        std::size_t jx = static_cast<std::size_t>(it - out.x_grid.begin());
        if (jx > 0) --jx;  // widen one slot; the band predicate below decides
        for (; jx < nx; ++jx) {
            const double x = out.x_grid[jx];
            if (x - v >= epsilon) break;
            if (std::fabs(v - x) < epsilon) ++cnt[jx];
        }
    }
    flush_before(std::numeric_limits<double>::infinity());
    return out;
}

SampledFunction2D experiment_integrator(const ExperimentConfig& cfg,
                                        const std::vector<double>& t_grid,
                                        const std::vector<double>& x_grid) {
    if (!(cfg.g_a >= 1.0 && cfg.g_b >= 1.0))
        throw hypothesis_error("experiment_integrator: exponents a, b must be >= 1");
    const double shift = std::ldexp(1.0, cfg.m) + 1.0;
    std::vector<double> v(t_grid.size() * x_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i)
        for (std::size_t jx = 0; jx < x_grid.size(); ++jx)
            v[i * x_grid.size() + jx] =
                cfg.g_c * std::pow(t_grid[i], cfg.g_a) * std::pow(x_grid[jx] + shift, cfg.g_b);
    return SampledFunction2D(t_grid, x_grid, std::move(v));
}

namespace {

// integrator smoothness hypotheses: strict exponent sums against the
// (1, 2+delta) variations of the limit field, plus a verified rectangle
// increment bound |DDg| <= C |dt|^{1/q1} |dx|^{1/q2} on a subsampled grid
void verify_integrator_hypotheses(const ExperimentConfig& cfg) {
    if (!(cfg.q1 > 1.0 && cfg.q2 > 1.0 && cfg.alpha > 0.0 && cfg.alpha < 1.0 && cfg.delta > 0.0))
        throw hypothesis_error("experiment hypotheses: need q1, q2 > 1, alpha in (0,1), delta > 0");
    const double sx = cfg.alpha / 1.0 + 1.0 / cfg.q1;
    if (!(sx > 1.0))
        throw hypothesis_error("experiment hypotheses: alpha/p + 1/q1 must exceed 1 (p = 1)");
    const double sy = (1.0 - cfg.alpha) / (2.0 + cfg.delta) + 1.0 / cfg.q2;
    if (!(sy > 1.0))
        throw hypothesis_error(
            "experiment hypotheses: (1-alpha)/q + 1/q2 must exceed 1 (q = 2 + delta)");
    if (cfg.g_c == 0.0) return;  // zero integrator satisfies any control
    const double shift = std::ldexp(1.0, cfg.m) + 1.0;
    const double len_x = shift + std::ldexp(1.0, cfg.m);
    const double c_time = cfg.g_a * std::pow(cfg.T, cfg.g_a - 1.0 / cfg.q1);
    const double c_space = std::fabs(cfg.g_c) * cfg.g_b * std::pow(len_x, cfg.g_b - 1.0 / cfg.q2);
    auto tsub = linspace(0.0, cfg.T, 17);
    auto xsub = linspace(-shift, std::ldexp(1.0, cfg.m), 17);
    auto gsub = experiment_integrator(cfg, tsub, xsub);
    auto rep = check_holder_control(gsub, c_time * c_space * (1.0 + 1e-9), cfg.q1, cfg.q2);
    if (!rep.holds)
        throw hypothesis_error(
            "experiment hypotheses: integrator failed its own Holder control check, ratio " +
            std::to_string(rep.max_ratio));
}

}  // namespace

std::vector<ExperimentRow> convergence_experiment(const ExperimentConfig& cfg) {
    if (cfg.ks.empty()) throw hypothesis_error("convergence_experiment: no levels requested");
    if (cfg.n_paths < 1) throw hypothesis_error("convergence_experiment: need n_paths >= 1");
    if (cfg.t_out < 2) throw hypothesis_error("convergence_experiment: need t_out >= 2");
    if (cfg.oversample_exp < 6)
        throw hypothesis_error("convergence_experiment: oversample exponent below the embed guard");
    if (cfg.check_hypotheses) verify_integrator_hypotheses(cfg);

    std::vector<ExperimentRow> rows;
    for (int k : cfg.ks) {
        if (k < 1 || 2 * k + cfg.oversample_exp > 28)
            throw hypothesis_error("convergence_experiment: k = " + std::to_string(k) +
                                   " out of the supported resolution range");
        const std::size_t n_steps = std::size_t(1) << (2 * k + cfg.oversample_exp);
        const double step = std::ldexp(1.0, -k);
        auto t_grid = linspace(0.0, cfg.T, cfg.t_out);
        auto x_levels = level_grid(cfg.m, k);
        auto g = experiment_integrator(cfg, t_grid, x_levels);

        std::vector<double> sup_err(cfg.n_paths), int_err(cfg.n_paths);
        std::vector<char> stopped(cfg.n_paths, 0);
        parallel_replicates(cfg.n_paths, cfg.threads, [&](std::size_t r) {
            auto path = simulate_bm(cfg.T, n_steps, cfg.seed0 + r);
            auto sr = stop_at_exit(path, cfg.m);
            stopped[r] = sr.stopped ? 1 : 0;
            auto walk = embed_walk(sr.path, k);
            auto fld = upcrossing_field(walk, cfg.m, t_grid, k);
            auto occ = occupation_local_time(sr.path, x_levels, t_grid, step);
            auto ufield = fld.field();
            sup_err[r] =
                kern::active().max_abs_diff(ufield.v.data(), occ.values.data(), occ.values.size());
            const double iu = young_2d(ufield, g, cfg.tol, cfg.max_depth).value;
            const double il = young_2d(occ.field(), g, cfg.tol, cfg.max_depth).value;
            int_err[r] = std::fabs(iu - il);
        });

        ExperimentRow row;
        row.k = k;
        row.n_paths = cfg.n_paths;
        MeanSe s = mean_se(sup_err);
        row.mean_sup_error = s.mean;
        row.se_sup_error = s.se;
        MeanSe ie = mean_se(int_err);
        row.mean_integral_l1_error = ie.mean;
        row.se_integral_l1_error = ie.se;
        std::size_t nstop = 0;
        for (char c : stopped) nstop += static_cast<std::size_t>(c);
        row.stopped_fraction = static_cast<double>(nstop) / static_cast<double>(cfg.n_paths);
        rows.push_back(row);
    }
    return rows;
}

double summation_by_parts_check(const SampledFunction2D& g, const SampledFunction2D& L) {
    if (g.gx != L.gx || g.gy != L.gy)
        throw hypothesis_error("summation_by_parts_check: fields must share one grid");
    for (std::size_t jx = 0; jx < L.ny(); ++jx)
        if (L.at(0, jx) != 0.0)
            throw hypothesis_error("summation_by_parts_check: first time row of L must vanish");
    const std::size_t P = g.nx() - 1;  // time cells
    const std::size_t M = g.ny() - 1;  // space cells
    double lhs = 0.0;
    for (std::size_t nn = 1; nn <= P; ++nn)
        for (std::size_t i = 1; i <= M; ++i)
            lhs += g.at(nn - 1, i - 1) * ((L.at(nn, i) - L.at(nn - 1, i)) -
                                          (L.at(nn, i - 1) - L.at(nn - 1, i - 1)));
    // complete double Abel expansion: interior double difference, final-time
    // row, both space boundary columns, corner terms
    double rhs = 0.0;
    for (std::size_t nn = 1; nn < P; ++nn)
        for (std::size_t i = 1; i < M; ++i)
            rhs += L.at(nn, i) *
                   ((g.at(nn, i) - g.at(nn - 1, i)) - (g.at(nn, i - 1) - g.at(nn - 1, i - 1)));
    for (std::size_t i = 1; i < M; ++i)
        rhs -= L.at(P, i) * (g.at(P - 1, i) - g.at(P - 1, i - 1));
    for (std::size_t nn = 1; nn < P; ++nn)
        rhs -= L.at(nn, M) * (g.at(nn, M - 1) - g.at(nn - 1, M - 1));
    for (std::size_t nn = 1; nn < P; ++nn)
        rhs += L.at(nn, 0) * (g.at(nn, 0) - g.at(nn - 1, 0));
    rhs += L.at(P, M) * g.at(P - 1, M - 1);
    rhs -= L.at(P, 0) * g.at(P - 1, 0);
    return std::fabs(lhs - rhs);
}

FieldMoments field_moments(const UpcrossingField& fld, double delta) {
    if (!(delta > 0.0)) throw hypothesis_error("field_moments: delta must be > 0");
    FieldMoments out;
    const std::size_t nt = fld.nt(), nx = fld.nx();
    std::vector<double> col(nt);
    for (std::size_t ji = 0; ji < nx; ++ji) {
        for (std::size_t ti = 0; ti < nt; ++ti) col[ti] = fld.field_at(ti, ji);
        double tv = p_variation(SampledFunction1D(fld.t_grid, col), 1.0).value;
        out.sup_x_time_var = std::max(out.sup_x_time_var, tv);
    }
    const double p = 2.0 + delta;
    std::vector<double> row(nx);
    for (std::size_t ti = 0; ti < nt; ++ti) {
        for (std::size_t ji = 0; ji < nx; ++ji) row[ji] = fld.field_at(ti, ji);
        double xv = p_variation(SampledFunction1D(fld.x_levels, row), p).value;
        out.sup_t_space_var_pow = std::max(out.sup_t_space_var_pow, std::pow(xv, p));
    }
    return out;
}

std::vector<MomentRow> bivariation_moments(const std::vector<int>& ks, std::size_t n_paths,
                                           std::uint64_t seed0, int m, double delta,
                                           std::size_t t_out, int oversample_exp,
                                           std::size_t threads) {
    if (ks.empty()) throw hypothesis_error("bivariation_moments: no levels requested");
    if (n_paths < 1) throw hypothesis_error("bivariation_moments: need n_paths >= 1");
    if (t_out < 2) throw hypothesis_error("bivariation_moments: need t_out >= 2");
    if (oversample_exp < 6)
        throw hypothesis_error("bivariation_moments: oversample exponent below the embed guard");
    std::vector<MomentRow> rows;
    for (int k : ks) {
        if (k < 1 || 2 * k + oversample_exp > 28)
            throw hypothesis_error("bivariation_moments: k out of the supported range");
        const std::size_t n_steps = std::size_t(1) << (2 * k + oversample_exp);
        auto t_grid = linspace(0.0, 1.0, t_out);
        std::vector<double> tvar(n_paths), xvar(n_paths);
        parallel_replicates(n_paths, threads, [&](std::size_t r) {
            auto sr = stop_at_exit(simulate_bm(1.0, n_steps, seed0 + r), m);
            auto fld = upcrossing_field(embed_walk(sr.path, k), m, t_grid, k);
            FieldMoments fm = field_moments(fld, delta);
            tvar[r] = fm.sup_x_time_var;
            xvar[r] = fm.sup_t_space_var_pow;
        });
        MomentRow row;
        row.k = k;
        row.n_paths = n_paths;
        MeanSe a = mean_se(tvar);
        row.mean_time_var = a.mean;
        row.se_time_var = a.se;
        MeanSe b = mean_se(xvar);
        row.mean_space_var_pow = b.mean;
        row.se_space_var_pow = b.se;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace bivar
