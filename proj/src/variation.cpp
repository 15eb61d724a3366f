#include "bivar/variation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bivar/kernels.hpp"

namespace bivar {
namespace {

void require_p(double p) {
    if (!(p >= 1.0))
        throw hypothesis_error("variation exponent must satisfy p >= 1 (got " + std::to_string(p) +
                               "): grid subsequences only realize the seminorm for p >= 1");
}

double abs_pow(double d, double p) {
    double a = std::fabs(d);
    if (p == 1.0) return a;
    if (p == 2.0) return d * d;
    if (p == 3.0) return a * d * d;
    if (p == 1.5) return a * std::sqrt(a);
    return std::pow(a, p);
}

// collapse monotone runs to their extreme values; output alternates strictly.
// Valid for p >= 1: |a+b|^p >= |a|^p + |b|^p for same-sign a, b.
std::size_t contract_extrema(const double* v, std::size_t n, std::vector<double>& out) {
    out.resize(n);
    std::size_t m = 0;
    out[m++] = v[0];
    int dir = 0;
    for (std::size_t i = 1; i < n; ++i) {
        double dv = v[i] - out[m - 1];
        if (dv == 0.0) continue;
        int s = dv > 0 ? 1 : -1;
        if (s == dir) {
            out[m - 1] = v[i];
        } else {
            out[m++] = v[i];
            dir = s;
        }
    }
    out.resize(m);
    return m;
}

// same contraction but tracking original indices
void contract_extrema_idx(const double* v, std::size_t n, std::vector<std::size_t>& idx) {
    idx.clear();
    idx.push_back(0);
    int dir = 0;
    for (std::size_t i = 1; i < n; ++i) {
        double dv = v[i] - v[idx.back()];
        if (dv == 0.0) continue;
        int s = dv > 0 ? 1 : -1;
        if (s == dir) {
            idx.back() = i;
        } else {
            idx.push_back(i);
            dir = s;
        }
    }
    if (idx.back() != n - 1) idx.push_back(n - 1);  // keep right endpoint even on a plateau
}

}  // namespace

namespace detail {

double pvar_power_sum(const double* v, std::size_t n, double p, PvarScratch& ws) {
    if (n < 2) return 0.0;
    if (p == 1.0) return kern::active().sum_abs_adj_diff(v, n);
    std::size_t m = contract_extrema(v, n, ws.contracted);
    if (m < 2) return 0.0;
    const double* c = ws.contracted.data();
    ws.best.resize(m);
    ws.best[0] = 0.0;
    for (std::size_t i = 1; i < m; ++i)
        ws.best[i] = kern::active().max_plus_pow(ws.best.data(), c, i, c[i], p);
    return ws.best[m - 1];
}

double pvar_power_sum_subset(const double* v, std::size_t n, double p,
                             std::vector<std::size_t>& subset) {
    subset.clear();
    if (n < 2) {
        subset.assign({0});
        return 0.0;
    }
    std::vector<std::size_t> cidx;
    contract_extrema_idx(v, n, cidx);
    std::size_t m = cidx.size();
    std::vector<double> best(m, 0.0);
    std::vector<std::size_t> parent(m, 0);
    for (std::size_t i = 1; i < m; ++i) {
        double b = -1.0;
        std::size_t arg = 0;
        for (std::size_t j = 0; j < i; ++j) {
            double cand = best[j] + abs_pow(v[cidx[i]] - v[cidx[j]], p);
            if (cand > b) {
                b = cand;
                arg = j;
            }
        }
        best[i] = b;
        parent[i] = arg;
    }
    for (std::size_t i = m - 1;; i = parent[i]) {
        subset.push_back(cidx[i]);
        if (i == 0) break;
    }
    std::reverse(subset.begin(), subset.end());
    return best[m - 1];
}

}  // namespace detail

VariationResult p_variation(const SampledFunction1D& f, double p) {
    require_p(p);
    VariationResult r;
    double s = detail::pvar_power_sum_subset(f.v.data(), f.size(), p, r.optimal_subset);
    r.value = p == 1.0 ? s : std::pow(s, 1.0 / p);
    r.exact = true;
    return r;
}

VariationResult p_variation_bruteforce(const SampledFunction1D& f, double p) {
    require_p(p);
    std::size_t n = f.size();
    if (n > 20) throw hypothesis_error("p_variation_bruteforce: n > 20 would enumerate 2^18+ subsets");
    const double* v = f.v.data();
    std::size_t interior = n - 2;
    std::uint64_t best_mask = 0;
    double best = -1.0;
    std::vector<double> pts;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << interior); ++mask) {
        double s = 0.0, prev = v[0];
        for (std::size_t i = 0; i < interior; ++i) {
            if (mask & (std::uint64_t{1} << i)) {
                s += abs_pow(v[i + 1] - prev, p);
                prev = v[i + 1];
            }
        }
        s += abs_pow(v[n - 1] - prev, p);
        if (s > best) {
            best = s;
            best_mask = mask;
        }
    }
    VariationResult r;
    r.optimal_subset.push_back(0);
    for (std::size_t i = 0; i < interior; ++i)
        if (best_mask & (std::uint64_t{1} << i)) r.optimal_subset.push_back(i + 1);
    r.optimal_subset.push_back(n - 1);
    r.value = p == 1.0 ? best : std::pow(best, 1.0 / p);
    r.exact = true;
    return r;
}

namespace {

// shared driver: sup over index pairs of sections along one axis
VariationResult bivariation_impl(const SampledFunction2D& F, double p, bool along_x) {
    require_p(p);
    std::size_t nsec = along_x ? F.ny() : F.nx();   // sections indexed by the other axis
    std::size_t npts = along_x ? F.nx() : F.ny();
    detail::PvarScratch ws;
    ws.diff.resize(npts);
    if (nsec < 2) {
        VariationResult r0;
        r0.optimal_subset = {0, npts - 1};
        return r0;
    }
    double best = -1.0;
    std::size_t b1 = 0, b2 = 1;
    for (std::size_t s1 = 0; s1 + 1 < nsec; ++s1) {
        for (std::size_t s2 = s1 + 1; s2 < nsec; ++s2) {
            double* d = ws.diff.data();
            if (along_x) {
                for (std::size_t i = 0; i < npts; ++i) d[i] = F.at(i, s1) - F.at(i, s2);
            } else {
                const double* r1 = &F.v[s1 * F.ny()];
                const double* r2 = &F.v[s2 * F.ny()];
                for (std::size_t j = 0; j < npts; ++j) d[j] = r1[j] - r2[j];
            }
            double s = detail::pvar_power_sum(d, npts, p, ws);
            if (s > best) {
                best = s;
                b1 = s1;
                b2 = s2;
            }
        }
    }
    VariationResult r;
    if (best < 0.0) best = 0.0;  // degenerate single-section grid
    // reconstruct the realizing subsequence on the winning pair
    double* d = ws.diff.data();
    if (along_x) {
        for (std::size_t i = 0; i < npts; ++i) d[i] = F.at(i, b1) - F.at(i, b2);
    } else {
        for (std::size_t j = 0; j < npts; ++j) d[j] = F.at(b1, j) - F.at(b2, j);
    }
    double s = detail::pvar_power_sum_subset(d, npts, p, r.optimal_subset);
    r.value = p == 1.0 ? s : std::pow(s, 1.0 / p);
    r.exact = true;
    r.section_pair = {b1, b2};
    return r;
}

}  // namespace

VariationResult bivariation_x(const SampledFunction2D& F, double p) {
    return bivariation_impl(F, p, true);
}

VariationResult bivariation_y(const SampledFunction2D& F, double q) {
    return bivariation_impl(F, q, false);
}

namespace {

double joint_sum(const SampledFunction2D& F, const std::vector<std::size_t>& rows,
                 const std::vector<std::size_t>& cols, double p) {
    double s = 0.0;
    for (std::size_t a = 1; a < rows.size(); ++a) {
        std::size_t r0 = rows[a - 1], r1 = rows[a];
        for (std::size_t b = 1; b < cols.size(); ++b) {
            std::size_t c0 = cols[b - 1], c1 = cols[b];
            s += abs_pow(F.at(r1, c1) - F.at(r0, c1) - F.at(r1, c0) + F.at(r0, c0), p);
        }
    }
    return s;
}

void mask_to_subset(std::uint64_t mask, std::size_t n, std::vector<std::size_t>& out) {
    out.clear();
    out.push_back(0);
    for (std::size_t i = 0; i + 2 < n; ++i)
        if (mask & (std::uint64_t{1} << i)) out.push_back(i + 1);
    out.push_back(n - 1);
}

// best increasing chain through `axis_pts` maximizing additive pair weights,
// where the weight of (j -> i) is the double-difference power sum across the
// fixed other-axis subset; standard longest-path DP
double chain_dp(const SampledFunction2D& F, double p, bool rows_free,
                const std::vector<std::size_t>& fixed, std::vector<std::size_t>& out) {
    std::size_t n = rows_free ? F.nx() : F.ny();
    std::vector<double> best(n, 0.0);
    std::vector<std::size_t> parent(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        double b = -1.0;
        std::size_t arg = 0;
        for (std::size_t j = 0; j < i; ++j) {
            double w = 0.0;
            for (std::size_t c = 1; c < fixed.size(); ++c) {
                std::size_t f0 = fixed[c - 1], f1 = fixed[c];
                double v = rows_free
                               ? F.at(i, f1) - F.at(j, f1) - F.at(i, f0) + F.at(j, f0)
                               : F.at(f1, i) - F.at(f1, j) - F.at(f0, i) + F.at(f0, j);
                w += abs_pow(v, p);
            }
            if (best[j] + w > b) {
                b = best[j] + w;
                arg = j;
            }
        }
        best[i] = b;
        parent[i] = arg;
    }
    out.clear();
    for (std::size_t i = n - 1;; i = parent[i]) {
        out.push_back(i);
        if (i == 0) break;
    }
    std::reverse(out.begin(), out.end());
    return best[n - 1];
}

}  // namespace

VariationResult joint_variation(const SampledFunction2D& F, double p, JointMode mode) {
    require_p(p);
    std::size_t nx = F.nx(), ny = F.ny();
    VariationResult r;
    if (mode == JointMode::Exact) {
        if (nx > 10 || ny > 10)
            throw hypothesis_error("joint_variation exact mode enumerates subsets; limited to 10x10 grids");
        std::vector<std::size_t> rows, cols;
        double best = -1.0;
        std::uint64_t brm = 0, bcm = 0;
        for (std::uint64_t rm = 0; rm < (std::uint64_t{1} << (nx - 2)); ++rm) {
            mask_to_subset(rm, nx, rows);
            for (std::uint64_t cm = 0; cm < (std::uint64_t{1} << (ny - 2)); ++cm) {
                mask_to_subset(cm, ny, cols);
                double s = joint_sum(F, rows, cols, p);
                if (s > best) {
                    best = s;
                    brm = rm;
                    bcm = cm;
                }
            }
        }
        mask_to_subset(brm, nx, r.optimal_subset);
        mask_to_subset(bcm, ny, r.optimal_subset_y);
        r.value = p == 1.0 ? best : std::pow(best, 1.0 / p);
        r.exact = true;
        return r;
    }

    // heuristic: alternating row/column ascent from the full grid + 8 restarts
    auto full = [](std::size_t n) {
        std::vector<std::size_t> s(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = i;
        return s;
    };
    double best = -1.0;
    std::vector<std::size_t> best_rows, best_cols;
    for (int restart = 0; restart < 9; ++restart) {
        std::vector<std::size_t> rows = full(nx), cols = full(ny);
        if (restart > 0) {
            std::mt19937_64 rng(0x5EEDULL + static_cast<std::uint64_t>(restart));
            auto rand_subset = [&rng](std::size_t n) {
                std::vector<std::size_t> s{0};
                for (std::size_t i = 1; i + 1 < n; ++i)
                    if (rng() & 1) s.push_back(i);
                s.push_back(n - 1);
                return s;
            };
            rows = rand_subset(nx);
            cols = rand_subset(ny);
        }
        double cur = joint_sum(F, rows, cols, p);
        for (int pass = 0; pass < 50; ++pass) {
            std::vector<std::size_t> nrows, ncols;
            chain_dp(F, p, true, cols, nrows);
            rows = nrows;
            double s2 = chain_dp(F, p, false, rows, ncols);
            cols = ncols;
            if (!(s2 > cur)) break;
            cur = s2;
        }
        cur = joint_sum(F, rows, cols, p);
        if (cur > best) {
            best = cur;
            best_rows = rows;
            best_cols = cols;
        }
    }
    r.optimal_subset = best_rows;
    r.optimal_subset_y = best_cols;
    r.value = p == 1.0 ? best : std::pow(best, 1.0 / p);
    r.exact = false;
    return r;
}

HolderReport check_holder_control(const SampledFunction2D& G, double C, double p_tilde,
                                  double q_tilde) {
    if (!(C > 0.0)) throw hypothesis_error("check_holder_control: C must be positive");
    if (!(p_tilde >= 1.0) || !(q_tilde >= 1.0))
        throw hypothesis_error("check_holder_control: exponents p_tilde, q_tilde must be >= 1");
    std::size_t nx = G.nx(), ny = G.ny();
    double ex = 1.0 / p_tilde, ey = 1.0 / q_tilde;

    // reciprocal |dy|^{1/qt} table so the inner loop is a multiply + max
    std::vector<double> inv_dy(ny * ny, 0.0);
    for (std::size_t j1 = 0; j1 + 1 < ny; ++j1)
        for (std::size_t j2 = j1 + 1; j2 < ny; ++j2)
            inv_dy[j1 * ny + j2] = 1.0 / std::pow(G.gy[j2] - G.gy[j1], ey);

    HolderReport rep;
    std::vector<double> D(ny);
    const auto& k = kern::active();
    for (std::size_t i1 = 0; i1 + 1 < nx; ++i1) {
        for (std::size_t i2 = i1 + 1; i2 < nx; ++i2) {
            const double* r1 = &G.v[i1 * ny];
            const double* r2 = &G.v[i2 * ny];
            for (std::size_t j = 0; j < ny; ++j) D[j] = r2[j] - r1[j];
            double inv_cdx = 1.0 / (C * std::pow(G.gx[i2] - G.gx[i1], ex));
            double block = 0.0;
            for (std::size_t j1 = 0; j1 + 1 < ny; ++j1)
                block = std::fmax(block, k.max_scaled_diff(D.data() + j1 + 1, D[j1],
                                                           inv_dy.data() + j1 * ny + j1 + 1,
                                                           ny - j1 - 1));
            double ratio = block * inv_cdx;
            if (ratio > rep.max_ratio) {
                rep.max_ratio = ratio;
                rep.i1 = i1;
                rep.i2 = i2;
                // rescan this row pair to locate the worst column pair
                double bb = -1.0;
                for (std::size_t j1 = 0; j1 + 1 < ny; ++j1)
                    for (std::size_t j2 = j1 + 1; j2 < ny; ++j2) {
                        double q = std::fabs(D[j2] - D[j1]) * inv_dy[j1 * ny + j2];
                        if (q > bb) {
                            bb = q;
                            rep.j1 = j1;
                            rep.j2 = j2;
                        }
                    }
            }
        }
    }
    rep.holds = rep.max_ratio <= 1.0 + 1e-12;
    return rep;
}

}  // namespace bivar
