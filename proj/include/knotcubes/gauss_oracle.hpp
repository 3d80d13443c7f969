#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "knotcubes/knot.hpp"
#include "knotcubes/rng.hpp"

namespace knotcubes {

// Knot diagram extracted from a generic projection of a long knot in R^3.
// Positions index the 2C crossing visits in knot order; the closure arc joins
// the last visit back to the first.
struct DiagramCrossing {
    size_t over_pos, under_pos;
    int sign;  // sign(det[d_over, d_under, view])
};

struct KnotDiagram {
    std::vector<DiagramCrossing> crossings;
    size_t visit_count() const { return 2 * crossings.size(); }
};

namespace detail {

struct CrossingEvent {
    size_t seg;
    double s;
    size_t crossing;
    bool over;
};

} // namespace detail

// Project along `view` (unit-ish, near the z-axis) and read off the crossings.
// Returns nullopt when the projection fails a genericity margin.
inline std::optional<KnotDiagram> extract_diagram(const LongKnotPL& f, const V3& view) {
    if (f.ambient_dim != 3) throw DimensionMismatch("extract_diagram: needs a knot in R^3");
    V3 d = v3_scale(view, 1.0 / v3_norm(view));
    V3 e1{1 - d[0] * d[0], -d[0] * d[1], -d[0] * d[2]};  // x-axis made orthogonal to d
    double n1 = v3_norm(e1);
    if (n1 < 0.5) return std::nullopt;  // view too close to the axis direction
    e1 = v3_scale(e1, 1.0 / n1);
    V3 e2 = v3_cross(d, e1);

    // tail stubs keep the whole long-knot picture in play
    std::vector<V3> pts;
    pts.push_back({-2.5, 0.0, 0.0});
    for (const auto& p : f.pd) pts.push_back({p[0], p[1], p[2]});
    pts.push_back({2.5, 0.0, 0.0});
    const size_t m = pts.size() - 1;

    std::vector<double> px(pts.size()), py(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) {
        px[i] = v3_dot(e1, pts[i]);
        py[i] = v3_dot(e2, pts[i]);
    }

    const double margin = 1e-6, depth_tol = 1e-9;
    std::vector<detail::CrossingEvent> events;
    std::vector<DiagramCrossing> crossings;
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i + 2; j < m; ++j) {
            double ax = px[i + 1] - px[i], ay = py[i + 1] - py[i];
            double bx = px[j + 1] - px[j], by = py[j + 1] - py[j];
            double wx = px[j] - px[i], wy = py[j] - py[i];
            double den = ax * by - ay * bx;
            double scale = std::hypot(ax, ay) * std::hypot(bx, by);
            if (std::abs(den) < 1e-12 * scale) {
                // parallel in projection: degenerate only when the images
                // share a line and overlap along it (tail stubs and axis
                // bridges are collinear but disjoint, which is fine)
                double alen = std::hypot(ax, ay);
                double off = (wx * ay - wy * ax) / alen;
                if (std::abs(off) > 1e-9) continue;
                double ux = ax / alen, uy = ay / alen;
                double i0 = px[i] * ux + py[i] * uy, i1 = px[i + 1] * ux + py[i + 1] * uy;
                double j0 = px[j] * ux + py[j] * uy, j1 = px[j + 1] * ux + py[j + 1] * uy;
                double lo = std::max(std::min(i0, i1), std::min(j0, j1));
                double hi = std::min(std::max(i0, i1), std::max(j0, j1));
                if (lo < hi + 1e-9) return std::nullopt;
                continue;
            }
            double s = (wx * by - wy * bx) / den;
            double u = (wx * ay - wy * ax) / den;
            if (s < -margin || s > 1 + margin || u < -margin || u > 1 + margin) continue;
            if (s < margin || s > 1 - margin || u < margin || u > 1 - margin)
                return std::nullopt;  // crossing hugs a vertex
            V3 pi = v3_add(pts[i], v3_scale(v3_sub(pts[i + 1], pts[i]), s));
            V3 pj = v3_add(pts[j], v3_scale(v3_sub(pts[j + 1], pts[j]), u));
            double hi_ = v3_dot(d, pi), hj = v3_dot(d, pj);
            if (std::abs(hi_ - hj) < depth_tol) return std::nullopt;
            bool i_over = hi_ > hj;
            V3 di = v3_sub(pts[i + 1], pts[i]), dj = v3_sub(pts[j + 1], pts[j]);
            V3 dover = i_over ? di : dj, dunder = i_over ? dj : di;
            int sign = v3_det(dover, dunder, d) > 0 ? 1 : -1;
            size_t id = crossings.size();
            crossings.push_back({0, 0, sign});
            events.push_back({i, s, id, i_over});
            events.push_back({j, u, id, !i_over});
        }
    }
    std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
        return a.seg != b.seg ? a.seg < b.seg : a.s < b.s;
    });
    for (size_t k = 0; k + 1 < events.size(); ++k)
        if (events[k].seg == events[k + 1].seg &&
            std::abs(events[k].s - events[k + 1].s) < 1e-9)
            return std::nullopt;
    for (size_t k = 0; k < events.size(); ++k) {
        if (events[k].over)
            crossings[events[k].crossing].over_pos = k;
        else
            crossings[events[k].crossing].under_pos = k;
    }
    KnotDiagram dia;
    dia.crossings = std::move(crossings);
    return dia;
}

// Arrow-pattern count on the Gauss diagram: pairs of chords interleaved as
// p1<p2<p3<p4 with the first chord under at p1 / over at p3 and the second
// over at p2 / under at p4 contribute the product of their signs.
inline long long v2_from_diagram(const KnotDiagram& dia) {
    long long total = 0;
    const auto& cs = dia.crossings;
    for (size_t a = 0; a < cs.size(); ++a) {
        for (size_t b = 0; b < cs.size(); ++b) {
            if (a == b) continue;
            size_t p1 = cs[a].under_pos, p3 = cs[a].over_pos;
            size_t p2 = cs[b].over_pos, p4 = cs[b].under_pos;
            if (p1 < p2 && p2 < p3 && p3 < p4) total += (long long)cs[a].sign * cs[b].sign;
        }
    }
    return total;
}

// Reference finite-type invariant of degree two, computed from several
// independent generic projections that must agree.
inline long long v2_oracle(const LongKnotPL& f, std::uint64_t seed = 2026, size_t directions = 3) {
    Rng rng(seed);
    std::optional<long long> agreed;
    size_t got = 0;
    for (int tries = 0; tries < 400 && got < directions; ++tries) {
        double tilt = 0.04 + 0.12 * rng.u01();
        double phi = 2 * 3.14159265358979323846 * rng.u01();
        V3 view{tilt * std::cos(phi), tilt * std::sin(phi), 1.0};
        auto dia = extract_diagram(f, view);
        if (!dia) continue;
        long long v = v2_from_diagram(*dia);
        if (agreed && *agreed != v)
            throw ValidationError("v2_oracle: projections disagree, geometry too degenerate");
        agreed = v;
        ++got;
    }
    if (got < directions) throw DegenerateInput("v2_oracle: could not find generic projections");
    return *agreed;
}

} // namespace knotcubes
