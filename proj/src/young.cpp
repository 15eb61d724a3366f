#include "bivar/young.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "bivar/kernels.hpp"
#include "bivar/variation.hpp"

namespace bivar {

double zeta(double s) {
    if (!(s > 1.0)) throw hypothesis_error("zeta requires s > 1");
    constexpr std::size_t N = 100000;
    double sum = 0.0;
    for (std::size_t m = N; m >= 1; --m) sum += std::pow(static_cast<double>(m), -s);
    return sum + std::pow(static_cast<double>(N), 1.0 - s) / (s - 1.0);
}

ControlModulus::ControlModulus(double cl, double pt, double cm, double qt, double a)
    : c_lambda(cl), p_tilde(pt), c_mu(cm), q_tilde(qt), alpha(a) {
    if (!(p_tilde > 1.0 && q_tilde > 1.0))
        throw hypothesis_error("modulus exponents p_tilde, q_tilde must exceed 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw hypothesis_error("alpha must lie in (0,1)");
    if (!(c_lambda > 0.0 && c_mu > 0.0)) throw hypothesis_error("modulus constants must be > 0");
}

double ControlModulus::lambda(double u) const { return c_lambda * std::pow(u, 1.0 / p_tilde); }
double ControlModulus::mu(double u) const { return c_mu * std::pow(u, 1.0 / q_tilde); }
double ControlModulus::rho(double u) const { return std::pow(u, alpha); }
double ControlModulus::sigma(double u) const { return std::pow(u, 1.0 - alpha); }

std::vector<double> dyadic_grid(double a, double b, std::size_t n) {
    const std::size_t cells = std::size_t(1) << n;
    std::vector<double> x(cells + 1);
    const double len = b - a;
    for (std::size_t i = 0; i <= cells; ++i)
        x[i] = a + len * std::ldexp(static_cast<double>(i), -static_cast<int>(n));
    x.back() = b;
    return x;
}

namespace {

// cell index + weight for a batch of queries against a sample grid, so the
// inner sum loops do no binary searches
struct LocTable {
    std::vector<std::size_t> idx;
    std::vector<double> w;
};

LocTable locate_all(const std::vector<double>& grid, const std::vector<double>& q,
                    const char* what) {
    LocTable t;
    t.idx.resize(q.size());
    t.w.resize(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) {
        double x = q[k];
        if (x < grid.front() || x > grid.back())
            throw hypothesis_error(std::string(what) + ": point outside the sampled domain");
        auto it = std::upper_bound(grid.begin(), grid.end(), x);
        std::size_t i = static_cast<std::size_t>(it - grid.begin());
        i = (i == 0) ? 0 : i - 1;  // grid[i] <= x
        if (x == grid[i]) {        // exact node (includes back()): no interpolation
            t.idx[k] = i;
            t.w[k] = 0.0;
            continue;
        }
        double w = (x - grid[i]) / (grid[i + 1] - grid[i]);
        if (w >= 1.0) {  // rounded up to the right node
            t.idx[k] = i + 1;
            t.w[k] = 0.0;
        } else {
            t.idx[k] = i;
            t.w[k] = w;
        }
    }
    return t;
}

// H(x, y_k) for all k, where x sits in cell (ix, ix+1) with weight wx and the
// y queries were located in yt; difference form matches SampledFunction2D
void eval_row(const SampledFunction2D& H, std::size_t ix, double wx, const LocTable& yt,
              double* out) {
    // w == 0 means "exact node": skip the interpolation terms entirely so grid
    // hits reproduce sample values bitwise (idx+1 may be out of range then)
    for (std::size_t k = 0; k < yt.idx.size(); ++k) {
        std::size_t jy = yt.idx[k];
        double wy = yt.w[k];
        double f00 = H.at(ix, jy);
        double v = f00;
        if (wx > 0.0) v += wx * (H.at(ix + 1, jy) - f00);
        if (wy > 0.0) {
            double f01 = H.at(ix, jy + 1);
            v += wy * (f01 - f00);
            if (wx > 0.0) v += wx * wy * (H.at(ix + 1, jy + 1) - H.at(ix + 1, jy) - f01 + f00);
        }
        out[k] = v;
    }
}

std::vector<double> dyadic_midpoints(double a, double b, std::size_t n) {
    const std::size_t cells = std::size_t(1) << n;
    std::vector<double> t(cells);
    const double len = b - a;
    for (std::size_t i = 0; i < cells; ++i)
        t[i] = a + len * std::ldexp(static_cast<double>(2 * i + 1), -static_cast<int>(n) - 1);
    return t;
}

// sum_{i,j} F(xtag_i, ytag_j) DDG over the cells of xs x ys
double tagged_sum_2d(const SampledFunction2D& F, const SampledFunction2D& G,
                     const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::vector<double>& xtags, const std::vector<double>& ytags) {
    LocTable xf = locate_all(F.gx, xtags, "integrand x");
    LocTable yf = locate_all(F.gy, ytags, "integrand y");
    LocTable xg = locate_all(G.gx, xs, "integrator x");
    LocTable yg = locate_all(G.gy, ys, "integrator y");
    const std::size_t m = ytags.size();
    std::vector<double> glo(ys.size()), ghi(ys.size()), frow(m);
    eval_row(G, xg.idx[0], xg.w[0], yg, glo.data());
    double s = 0.0;
    const auto& ops = kern::active();
    for (std::size_t i = 1; i < xs.size(); ++i) {
        eval_row(G, xg.idx[i], xg.w[i], yg, ghi.data());
        eval_row(F, xf.idx[i - 1], xf.w[i - 1], yf, frow.data());
        s += ops.rs_cell_sum(frow.data(), ghi.data(), glo.data(), m);
        glo.swap(ghi);
    }
    return s;
}

// midpoint-tagged dyadic sum at x-level nx, y-level ny
double level_sum(const SampledFunction2D& F, const SampledFunction2D& G, std::size_t nx,
                 std::size_t ny) {
    double a = G.gx.front(), b = G.gx.back(), c = G.gy.front(), d = G.gy.back();
    return tagged_sum_2d(F, G, dyadic_grid(a, b, nx), dyadic_grid(c, d, ny),
                         dyadic_midpoints(a, b, nx), dyadic_midpoints(c, d, ny));
}

void require_same_interval(double a1, double b1, double a2, double b2, const char* what) {
    if (a1 != a2 || b1 != b2) throw hypothesis_error(std::string(what) + ": domain mismatch");
}

}  // namespace

double rs_sum_1d(const StepFunction1D& step, const SampledFunction1D& g) {
    const auto& pts = step.partition.points;
    std::vector<double> gv(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) gv[i] = g.value_at(pts[i]);
    std::vector<double> zero(pts.size(), 0.0);
    return kern::active().rs_cell_sum(step.interior_values.data(), gv.data(), zero.data(),
                                      step.interior_values.size());
}

IntegralResult young_1d(const SampledFunction1D& f, const SampledFunction1D& g, double tol,
                        std::size_t max_depth) {
    require_same_interval(f.a(), f.b(), g.a(), g.b(), "young_1d");
    const double a = f.a(), b = f.b();
    auto sum_at = [&](std::size_t n) {
        auto part = TaggedPartition(dyadic_grid(a, b, n), dyadic_midpoints(a, b, n));
        return rs_sum_1d(make_step_1d(f, part), g);
    };
    IntegralResult r;
    double prev = sum_at(0);
    r.value = prev;
    r.last_delta = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= max_depth; ++n) {
        double cur = sum_at(n);
        r.value = cur;
        r.depth_x = n;
        r.last_delta = std::fabs(cur - prev);
        if (r.last_delta < tol) {
            r.converged = true;
            break;
        }
        prev = cur;
    }
    return r;
}

double young_bound_1d(const SampledFunction1D& f, const SampledFunction1D& g, double p, double q) {
    if (!(1.0 / p + 1.0 / q > 1.0))
        throw hypothesis_error("young_bound_1d requires 1/p + 1/q > 1");
    double c = 1.0 + zeta(1.0 / p + 1.0 / q);
    return c * (std::fabs(f.v.front()) + p_variation(f, p).value) * p_variation(g, q).value;
}

double step_integral_2d(const StepFunction2D& stepF, const SampledFunction2D& G) {
    const auto& xs = stepF.px.points;
    const auto& ys = stepF.py.points;
    const std::size_t m = stepF.py.cells();
    LocTable yg = locate_all(G.gy, ys, "integrator y");
    LocTable xg = locate_all(G.gx, xs, "integrator x");
    std::vector<double> glo(ys.size()), ghi(ys.size());
    eval_row(G, xg.idx[0], xg.w[0], yg, glo.data());
    double s = 0.0;
    const auto& ops = kern::active();
    for (std::size_t i = 1; i < xs.size(); ++i) {
        eval_row(G, xg.idx[i], xg.w[i], yg, ghi.data());
        s += ops.rs_cell_sum(stepF.cell_values.data() + (i - 1) * m, ghi.data(), glo.data(), m);
        glo.swap(ghi);
    }
    return s;
}

double chain_sum_2d(const SampledFunction2D& F, const SampledFunction2D& G,
                    const RefinementChain& cx, const RefinementChain& cy, std::size_t n,
                    std::size_t nprime) {
    if (n > cx.depth() || nprime > cy.depth())
        throw hypothesis_error("chain_sum_2d: level beyond chain depth");
    const auto& xs = cx.levels[n];
    const auto& ys = cy.levels[nprime];
    LocTable xf = locate_all(F.gx, xs, "integrand x");
    LocTable yf = locate_all(F.gy, ys, "integrand y");
    LocTable xg = locate_all(G.gx, xs, "integrator x");
    LocTable yg = locate_all(G.gy, ys, "integrator y");
    const std::size_t m = ys.size() - 1;
    std::vector<double> glo(ys.size()), ghi(ys.size()), frow(ys.size());
    eval_row(G, xg.idx[0], xg.w[0], yg, glo.data());
    double s = 0.0;
    const auto& ops = kern::active();
    for (std::size_t i = 1; i < xs.size(); ++i) {
        eval_row(G, xg.idx[i], xg.w[i], yg, ghi.data());
        eval_row(F, xf.idx[i], xf.w[i], yf, frow.data());
        s += ops.rs_cell_sum(frow.data() + 1, ghi.data(), glo.data(), m);
        glo.swap(ghi);
    }
    return s;
}

double telescope_delta(const SampledFunction2D& F, const SampledFunction2D& G,
                       const RefinementChain& cx, const RefinementChain& cy, std::size_t n,
                       std::size_t nprime) {
    if (n < 1 || nprime < 1) throw hypothesis_error("telescope_delta: levels start at 1");
    if (n > cx.depth() || nprime > cy.depth())
        throw hypothesis_error("telescope_delta: level beyond chain depth");
    const auto& xs = cx.levels[n];
    const auto& ys = cy.levels[nprime];
    const std::size_t hx = std::size_t(1) << (n - 1);
    const std::size_t hy = std::size_t(1) << (nprime - 1);
    double s = 0.0;
    for (std::size_t i = 1; i <= hx; ++i) {
        double x2 = xs[2 * i], x1 = xs[2 * i - 1], x0 = xs[2 * i - 2];
        for (std::size_t j = 1; j <= hy; ++j) {
            double y2 = ys[2 * j], y1 = ys[2 * j - 1], y0 = ys[2 * j - 2];
            double ddF = F.value_at(x2, y2) - F.value_at(x1, y2) - F.value_at(x2, y1) +
                         F.value_at(x1, y1);
            double ddG = G.value_at(x1, y1) - G.value_at(x0, y1) - G.value_at(x1, y0) +
                         G.value_at(x0, y0);
            s += ddF * ddG;
        }
    }
    return s;
}

IntegralResult young_2d(const SampledFunction2D& F, const SampledFunction2D& G, double tol,
                        std::size_t max_depth) {
    require_same_interval(F.gx.front(), F.gx.back(), G.gx.front(), G.gx.back(), "young_2d x");
    require_same_interval(F.gy.front(), F.gy.back(), G.gy.front(), G.gy.back(), "young_2d y");
    if (F.max_abs_on_axes() > 1e-12)
        std::cerr << "young_2d: warning: integrand does not vanish on the low edges "
                     "x=a, y=c; the limit may not exist\n";
    IntegralResult r;
    double s_prev = level_sum(F, G, 0, 0);  // F(mid) DDG over the whole rectangle
    r.value = s_prev;
    r.last_delta = std::numeric_limits<double>::infinity();
    double q_prev = std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n <= max_depth; ++n) {
        double s_nn = level_sum(F, G, n, n);
        double s_lo_n = level_sum(F, G, n - 1, n);
        double s_n_lo = level_sum(F, G, n, n - 1);
        double dd = std::fabs(s_nn - s_lo_n - s_n_lo + s_prev);
        double d1 = std::fabs(s_nn - s_lo_n);
        double d2 = std::fabs(s_nn - s_n_lo);
        double qn = dd + d1 + d2;
        r.value = s_nn;
        r.depth_x = r.depth_y = n;
        r.last_delta = qn;
        if (qn < tol && q_prev < tol) {
            r.converged = true;
            break;
        }
        q_prev = qn;
        s_prev = s_nn;
    }
    return r;
}

namespace {

// partial sum of m^{-s} for m = 1..N plus its integral-comparison tail
double power_sum(double s, std::size_t N, double& tail) {
    double sum = 0.0;
    for (std::size_t m = N; m >= 1; --m) sum += std::pow(static_cast<double>(m), -s);
    tail = std::pow(static_cast<double>(N), 1.0 - s) / (s - 1.0);
    return sum;
}

}  // namespace

MainBoundResult main_bound(double norm1p, double norm2q, double p, double q,
                           const ControlModulus& mod, double a, double b, double c, double d,
                           std::size_t series_terms) {
    if (!(p > 0.0 && q > 0.0)) throw hypothesis_error("main_bound requires p, q > 0");
    if (!(b > a && d > c)) throw hypothesis_error("main_bound requires a nonempty rectangle");
    if (norm1p < 0.0 || norm2q < 0.0) throw hypothesis_error("norms must be nonnegative");
    const double sx = mod.alpha / p + 1.0 / mod.p_tilde;
    const double sy = (1.0 - mod.alpha) / q + 1.0 / mod.q_tilde;
    if (!(sx > 1.0))
        throw hypothesis_error("series diverges: alpha/p + 1/p_tilde must exceed 1");
    if (!(sy > 1.0))
        throw hypothesis_error("series diverges: (1-alpha)/q + 1/q_tilde must exceed 1");
    const double smx = 1.0 / p + 1.0 / mod.p_tilde;  // > sx since alpha < 1
    const double smy = 1.0 / q + 1.0 / mod.q_tilde;

    double tzx, tzy, tzmx, tzmy;
    const double zx = power_sum(sx, series_terms, tzx);
    const double zy = power_sum(sy, series_terms, tzy);
    const double zmx = power_sum(smx, series_terms, tzmx);
    const double zmy = power_sum(smy, series_terms, tzmy);

    // literal arguments 4/m: every term factors into coeff * m^{-s}
    const double cx = mod.c_lambda * std::pow(4.0, 1.0 / mod.p_tilde);
    const double cy = mod.c_mu * std::pow(4.0, 1.0 / mod.q_tilde);
    const double mix_x = std::pow(norm1p, mod.alpha) * cx;
    const double mix_y = std::pow(norm2q, 1.0 - mod.alpha) * cy;
    const double marg_x = norm1p * cx;
    const double marg_y = norm2q * cy;
    const double pre_x = mod.mu(d - c);   // marginal prefactors keep real lengths
    const double pre_y = mod.lambda(b - a);

    MainBoundResult r;
    auto assemble = [&](double fx, double fy, double& rhs, double& tail) {
        double X = mix_x * fx * zx, tX = mix_x * fx * tzx;
        double Y = mix_y * fy * zy, tY = mix_y * fy * tzy;
        double MX = marg_x * fx * zmx, tMX = marg_x * fx * tzmx;
        double MY = marg_y * fy * zmy, tMY = marg_y * fy * tzmy;
        rhs = r.K * X * Y + r.K1 * pre_x * MX + r.K2 * pre_y * MY;
        tail = r.K * (X * tY + tX * Y + tX * tY) + r.K1 * pre_x * tMX + r.K2 * pre_y * tMY;
    };
    assemble(1.0, 1.0, r.rhs_literal, r.tail_literal);
    assemble(std::pow(b - a, 1.0 / mod.p_tilde), std::pow(d - c, 1.0 / mod.q_tilde), r.rhs_scaled,
             r.tail_scaled);

    // closed form: zeta-assembled constants times the modulus constant
    r.Kc = r.K * std::pow(4.0, 1.0 / mod.p_tilde) * zeta(sx) * zeta(sy);
    r.K1c = r.K1 * std::pow(4.0, 1.0 / mod.p_tilde) * std::pow(d - c, 1.0 / mod.q_tilde) *
            zeta(smx);
    r.K2c = r.K2 * std::pow(4.0, 1.0 / mod.q_tilde) * std::pow(b - a, 1.0 / mod.p_tilde) *
            zeta(smy);
    r.rhs_powerlaw = mod.holder_constant() *
                     (r.Kc * std::pow(norm1p, mod.alpha) * std::pow(norm2q, 1.0 - mod.alpha) +
                      r.K1c * norm1p + r.K2c * norm2q);
    return r;
}

TabulatedBound main_bound_tabulated(double norm1p, double norm2q, double p, double q,
                                    const std::vector<double>& lambda_vals,
                                    const std::vector<double>& mu_vals,
                                    const std::vector<double>& rho_vals,
                                    const std::vector<double>& sigma_vals, double lambda_ba,
                                    double mu_dc) {
    const std::size_t N = lambda_vals.size();
    if (N == 0 || mu_vals.size() != N || rho_vals.size() != N || sigma_vals.size() != N)
        throw hypothesis_error("tabulated moduli must share a nonzero length");
    if (!(p > 0.0 && q > 0.0)) throw hypothesis_error("main_bound requires p, q > 0");
    double X = 0.0, Y = 0.0, MX = 0.0, MY = 0.0;
    double lastX = 0.0, lastY = 0.0, lastMX = 0.0, lastMY = 0.0;
    for (std::size_t m = 1; m <= N; ++m) {
        double inv_p = std::pow(static_cast<double>(m), -1.0 / p);
        double inv_q = std::pow(static_cast<double>(m), -1.0 / q);
        lastX = rho_vals[m - 1] * lambda_vals[m - 1];
        lastY = sigma_vals[m - 1] * mu_vals[m - 1];
        lastMX = norm1p * inv_p * lambda_vals[m - 1];
        lastMY = norm2q * inv_q * mu_vals[m - 1];
        X += lastX;
        Y += lastY;
        MX += lastMX;
        MY += lastMY;
    }
    TabulatedBound r;
    const double K = 16.0;
    r.rhs = K * X * Y + K * mu_dc * MX + K * lambda_ba * MY;
    // no decay model: cap the remainder at N more copies of the last term
    double capX = lastX * double(N), capY = lastY * double(N);
    r.tail_cap = K * (X * capY + capX * Y + capX * capY) + K * mu_dc * lastMX * double(N) +
                 K * lambda_ba * lastMY * double(N);
    return r;
}

double towghi_bound(double VpF, double VqG, double p, double q, double alpha) {
    if (VpF < 0.0 || VqG < 0.0) throw hypothesis_error("joint variations must be nonnegative");
    const double theta = 1.0 / p + 1.0 / q;
    if (!(theta > 1.0)) throw hypothesis_error("towghi bound requires 1/p + 1/q > 1");
    if (!(alpha > 1.0 && alpha < theta))
        throw hypothesis_error("towghi bound requires alpha in (1, 1/p + 1/q)");
    const double coeff =
        std::pow(1.0 + zeta(theta / alpha), alpha) * zeta(alpha) + (1.0 + zeta(theta));
    return coeff * VpF * VqG;
}

BoundReport verify_main_inequality(const SampledFunction2D& F, const SampledFunction2D& G,
                                   double p, double q, const ControlModulus& mod, double tol,
                                   std::size_t max_depth, std::size_t series_terms) {
    if (F.max_abs_on_axes() > 1e-12)
        throw hypothesis_error("integrand must vanish on the low edges x=a and y=c");
    auto hold = check_holder_control(G, mod.holder_constant(), mod.p_tilde, mod.q_tilde);
    if (!hold.holds)
        throw hypothesis_error("integrator fails the rectangle increment bound (worst ratio " +
                               std::to_string(hold.max_ratio) + ")");

    const double a = F.gx.front(), b = F.gx.back(), c = F.gy.front(), d = F.gy.back();
    BoundReport rep;
    rep.p = p;
    rep.q = q;
    rep.holder_ratio = hold.max_ratio;

    auto ir = young_2d(F, G, tol, max_depth);
    rep.integral_value = ir.value;
    rep.integral_converged = ir.converged;
    rep.depth = ir.depth_x;
    rep.corner_term = F.value_at(b, d) * (G.value_at(b, d) - G.value_at(a, d) -
                                          G.value_at(b, c) + G.value_at(a, c));
    rep.lhs = std::fabs(ir.value - rep.corner_term);

    rep.norm_1p = bivariation_x(F, p).value;
    rep.norm_2q = bivariation_y(F, q).value;

    auto mb = main_bound(rep.norm_1p, rep.norm_2q, p, q, mod, a, b, c, d, series_terms);
    rep.main_rhs_general = mb.rhs_scaled;
    rep.truncation_error = mb.tail_scaled;
    rep.main_rhs_general_literal = mb.rhs_literal;
    rep.truncation_error_literal = mb.tail_literal;
    rep.main_rhs_powerlaw = mb.rhs_powerlaw;
    rep.K = mb.K;
    rep.K1 = mb.K1;
    rep.K2 = mb.K2;
    rep.Kc = mb.Kc;
    rep.K1c = mb.K1c;
    rep.K2c = mb.K2c;

    rep.min_rhs = rep.main_rhs_general + rep.truncation_error;
    rep.tightest = "main_series_scaled";
    if (rep.main_rhs_general_literal + rep.truncation_error_literal < rep.min_rhs) {
        rep.min_rhs = rep.main_rhs_general_literal + rep.truncation_error_literal;
        rep.tightest = "main_series_literal";
    }
    if (rep.main_rhs_powerlaw < rep.min_rhs) {
        rep.min_rhs = rep.main_rhs_powerlaw;
        rep.tightest = "main_powerlaw";
    }
    rep.satisfied = rep.lhs <= rep.min_rhs;

    // the joint-variation bound applies when exact joint variations are
    // affordable; it controls |integral| itself, with no corner subtraction
    const double theta = 1.0 / p + 1.0 / q;
    if (theta > 1.0 && F.nx() <= 10 && F.ny() <= 10 && G.nx() <= 10 && G.ny() <= 10) {
        double VpF = joint_variation(F, p, JointMode::Exact).value;
        double VqG = joint_variation(G, q, JointMode::Exact).value;
        double alpha = 0.5 * (1.0 + theta);
        rep.towghi_rhs = towghi_bound(VpF, VqG, p, q, alpha);
        rep.towghi_lhs = std::fabs(ir.value);
        rep.towghi_satisfied = *rep.towghi_lhs <= *rep.towghi_rhs;
    }
    return rep;
}

}  // namespace bivar
