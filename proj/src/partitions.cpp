#include "bivar/partitions.hpp"

#include <algorithm>
#include <cmath>

namespace bivar {

namespace {

// exact-point lookup: {true, i} when x == points[i], else {false, i} for the
// cell (x_{i-1}, x_i) strictly containing x
std::pair<bool, std::size_t> classify(const std::vector<double>& pts, double x) {
    if (x < pts.front() || x > pts.back())
        throw hypothesis_error("step function evaluated outside its interval");
    auto it = std::lower_bound(pts.begin(), pts.end(), x);
    std::size_t i = static_cast<std::size_t>(it - pts.begin());
    if (it != pts.end() && *it == x) return {true, i};
    return {false, i};  // pts[i-1] < x < pts[i]
}

}  // namespace

TaggedPartition::TaggedPartition(std::vector<double> pts, std::vector<double> tg)
    : points(std::move(pts)), tags(std::move(tg)) {
    if (points.size() < 2) throw hypothesis_error("partition needs at least two points");
    if (tags.size() != points.size() - 1)
        throw hypothesis_error("partition needs one tag per cell");
    for (double x : points)
        if (!std::isfinite(x)) throw hypothesis_error("partition points must be finite");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i - 1] < points[i]))
            throw hypothesis_error("partition points must be strictly increasing");
    for (std::size_t i = 0; i < tags.size(); ++i)
        if (!(points[i] <= tags[i] && tags[i] <= points[i + 1]))
            throw hypothesis_error("tag outside its cell");
}

TaggedPartition TaggedPartition::with_midpoint_tags(std::vector<double> pts) {
    std::vector<double> tg(pts.size() >= 1 ? pts.size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) tg[i] = 0.5 * (pts[i] + pts[i + 1]);
    return TaggedPartition(std::move(pts), std::move(tg));
}

double StepFunction1D::operator()(double x) const {
    auto [node, i] = classify(partition.points, x);
    return node ? node_values[i] : interior_values[i - 1];
}

SampledFunction1D StepFunction1D::resample() const {
    const auto& p = partition.points;
    std::vector<double> x, v;
    x.reserve(2 * p.size() - 1);
    v.reserve(2 * p.size() - 1);
    for (std::size_t i = 0; i < p.size(); ++i) {
        x.push_back(p[i]);
        v.push_back(node_values[i]);
        if (i + 1 < p.size()) {
            x.push_back(0.5 * (p[i] + p[i + 1]));
            v.push_back(interior_values[i]);
        }
    }
    return SampledFunction1D(std::move(x), std::move(v));
}

double StepFunction2D::operator()(double x, double y) const {
    auto [xn, i] = classify(px.points, x);
    auto [yn, j] = classify(py.points, y);
    const std::size_t ncy = py.points.size();  // corners per row
    if (xn && yn) return corner_values[i * ncy + j];
    if (xn) return edge_values_x[i * (ncy - 1) + (j - 1)];
    if (yn) return edge_values_y[(i - 1) * ncy + j];
    return cell_values[(i - 1) * (ncy - 1) + (j - 1)];
}

StepFunction1D make_step_1d(const SampledFunction1D& f, const TaggedPartition& part) {
    StepFunction1D s{part, {}, {}};
    s.node_values.reserve(part.points.size());
    s.interior_values.reserve(part.tags.size());
    for (double x : part.points) s.node_values.push_back(f.value_at(x));
    for (double t : part.tags) s.interior_values.push_back(f.value_at(t));
    return s;
}

StepFunction2D make_step_2d(const SampledFunction2D& F, const TaggedPartition& px,
                            const TaggedPartition& py) {
    StepFunction2D s{px, py, {}, {}, {}, {}};
    const auto& xs = px.points;
    const auto& ys = py.points;
    s.corner_values.reserve(xs.size() * ys.size());
    for (double x : xs)
        for (double y : ys) s.corner_values.push_back(F.value_at(x, y));
    s.edge_values_x.reserve(xs.size() * py.tags.size());
    for (double x : xs)
        for (double e : py.tags) s.edge_values_x.push_back(F.value_at(x, e));
    s.edge_values_y.reserve(px.tags.size() * ys.size());
    for (double t : px.tags)
        for (double y : ys) s.edge_values_y.push_back(F.value_at(t, y));
    s.cell_values.reserve(px.tags.size() * py.tags.size());
    for (double t : px.tags)
        for (double e : py.tags) s.cell_values.push_back(F.value_at(t, e));
    return s;
}

double mesh(const std::vector<double>& points) {
    double m = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) m = std::max(m, points[i] - points[i - 1]);
    return m;
}

namespace {

// one refinement level: insert a point per cell, preferring target points
// that keep both resulting gaps under the scaled bound
std::vector<double> next_level(const std::vector<double>& prev, std::vector<double>& remaining,
                               double len, std::size_t j_next) {
    const double bound = 4.0 * len * std::ldexp(1.0, -static_cast<int>(j_next));
    std::vector<double> out;
    out.reserve(2 * prev.size() - 1);
    for (std::size_t k = 0; k + 1 < prev.size(); ++k) {
        const double lo = prev[k], hi = prev[k + 1];
        out.push_back(lo);
        const double mid = 0.5 * (lo + hi);
        auto first = std::upper_bound(remaining.begin(), remaining.end(), lo);
        auto last = std::lower_bound(remaining.begin(), remaining.end(), hi);
        auto pick = remaining.end();
        double best = 0.0;
        for (auto it = first; it != last; ++it) {
            if (!(*it - lo < bound && hi - *it < bound)) continue;
            double d = std::fabs(*it - mid);
            if (pick == remaining.end() || d < best) {
                pick = it;
                best = d;
            }
        }
        if (pick != remaining.end()) {
            out.push_back(*pick);
            remaining.erase(pick);
        } else {
            out.push_back(mid);
            // a midpoint can coincide with a target point; absorb it
            auto hit = std::lower_bound(remaining.begin(), remaining.end(), mid);
            if (hit != remaining.end() && *hit == mid) remaining.erase(hit);
        }
    }
    out.push_back(prev.back());
    return out;
}

}  // namespace

RefinementChain build_chain(const TaggedPartition& target, double a, double b) {
    if (!(target.a() == a && target.b() == b))
        throw hypothesis_error("target partition does not span the interval");
    const double len = b - a;
    for (std::size_t i = 1; i < target.points.size(); ++i)
        if (target.points[i] - target.points[i - 1] < std::ldexp(len, -38))
            throw hypothesis_error("target gap below 2^-38 of the interval");

    RefinementChain chain;
    chain.target = target.points;
    chain.levels.push_back({a, b});
    std::vector<double> remaining(target.points.begin() + 1, target.points.end() - 1);
    while (!remaining.empty()) {
        if (chain.levels.size() > 40)
            throw convergence_error("refinement chain exceeded 40 levels");
        chain.levels.push_back(
            next_level(chain.levels.back(), remaining, len, chain.levels.size()));
    }
    return chain;
}

RefinementChain extend_chain(RefinementChain chain, std::size_t new_depth) {
    std::vector<double> none;
    while (chain.depth() < new_depth)
        chain.levels.push_back(next_level(chain.levels.back(), none, 0.0, 0));
    return chain;
}

}  // namespace bivar
