#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "knotcubes/errors.hpp"
#include "knotcubes/rng.hpp"
#include "knotcubes/vec.hpp"

namespace knotcubes {

// Long PL knot: PL interpolation of (t_k, p_k) inside [t_0, t_m], the standard
// inclusion t -> (t,0,...,0) outside. Coordinates are kept exact so splicing
// and conjugation are bit-reproducible; doubles are mirrored for evaluation.
struct LongKnotPL {
    size_t ambient_dim = 3;
    std::vector<Scalar> ts;
    std::vector<QVec> points;

    // double mirrors of ts/points, rebuilt by finalize()
    std::vector<double> td;
    std::vector<DVec> pd;

    size_t segment_count() const { return ts.empty() ? 0 : ts.size() - 1; }

    void finalize() {
        td.resize(ts.size());
        for (size_t i = 0; i < ts.size(); ++i) td[i] = to_double(ts[i]);
        pd.resize(points.size());
        for (size_t i = 0; i < points.size(); ++i) pd[i] = to_dvec(points[i]);
    }

    void validate_structure() const {
        if (ambient_dim < 2) throw ValidationError("LongKnotPL: ambient_dim must be >= 2");
        if (ts.size() < 2) throw ValidationError("LongKnotPL: need at least two vertices");
        if (ts.size() != points.size()) throw ValidationError("LongKnotPL: ts/points size mismatch");
        for (const auto& p : points)
            if (p.size() != ambient_dim) throw DimensionMismatch("LongKnotPL: point dim mismatch");
        for (size_t i = 0; i + 1 < ts.size(); ++i)
            if (!(ts[i] < ts[i + 1])) throw ValidationError("LongKnotPL: ts not strictly increasing");
        if (ts.front() < Scalar(-1) || ts.back() > Scalar(1))
            throw ValidationError("LongKnotPL: parameter range leaves [-1,1]");
        auto on_axis_at = [&](size_t k) {
            if (points[k][0] != ts[k]) return false;
            for (size_t i = 1; i < ambient_dim; ++i)
                if (points[k][i] != 0) return false;
            return true;
        };
        if (!on_axis_at(0) || !on_axis_at(points.size() - 1))
            throw ValidationError("LongKnotPL: endpoints must sit on the axis at their parameter");
        for (const auto& p : points)
            for (const auto& c : p)
                if (abs_rat(c) > 1) throw ValidationError("LongKnotPL: vertex leaves [-1,1]^n");
        for (size_t i = 0; i + 1 < points.size(); ++i)
            if (points[i] == points[i + 1])
                throw ValidationError("LongKnotPL: consecutive vertices coincide");
    }
};

inline LongKnotPL make_knot(size_t n, std::vector<Scalar> ts, std::vector<QVec> pts) {
    LongKnotPL k;
    k.ambient_dim = n;
    k.ts = std::move(ts);
    k.points = std::move(pts);
    k.validate_structure();
    k.finalize();
    return k;
}

inline LongKnotPL straight_knot(size_t n) {
    QVec a(n, Scalar(0)), b(n, Scalar(0));
    a[0] = Scalar(-1);
    b[0] = Scalar(1);
    return make_knot(n, {Scalar(-1), Scalar(1)}, {a, b});
}

inline DVec standard_point(size_t n, double t) {
    DVec p(n, 0.0);
    p[0] = t;
    return p;
}

inline DVec eval_knot(const LongKnotPL& f, double t) {
    if (f.td.empty()) throw ValidationError("eval_knot: knot not finalized");
    if (t <= f.td.front() || t >= f.td.back()) {
        if (t == f.td.front()) return f.pd.front();
        if (t == f.td.back()) return f.pd.back();
        return standard_point(f.ambient_dim, t);
    }
    size_t hi = std::upper_bound(f.td.begin(), f.td.end(), t) - f.td.begin();
    size_t lo = hi - 1;
    double w = (t - f.td[lo]) / (f.td[hi] - f.td[lo]);
    DVec p(f.ambient_dim);
    for (size_t i = 0; i < f.ambient_dim; ++i) p[i] = f.pd[lo][i] + w * (f.pd[hi][i] - f.pd[lo][i]);
    return p;
}

inline QVec eval_knot_exact(const LongKnotPL& f, const Scalar& t) {
    if (t <= f.ts.front() || t >= f.ts.back()) {
        if (t == f.ts.front()) return f.points.front();
        if (t == f.ts.back()) return f.points.back();
        QVec p(f.ambient_dim, Scalar(0));
        p[0] = t;
        return p;
    }
    size_t hi = std::upper_bound(f.ts.begin(), f.ts.end(), t) - f.ts.begin();
    size_t lo = hi - 1;
    Scalar w = (t - f.ts[lo]) / (f.ts[hi] - f.ts[lo]);
    QVec p(f.ambient_dim);
    for (size_t i = 0; i < f.ambient_dim; ++i)
        p[i] = f.points[lo][i] + w * (f.points[hi][i] - f.points[lo][i]);
    return p;
}

// ---------------------------------------------------------------------------
// exact segment predicates

struct SegmentMeet {
    bool touches = false;   // nonempty intersection
    bool overlap = false;   // shares more than one point (collinear overlap)
    Scalar s{0}, u{0};      // params on [0,1] for a single-point meet
};

// Exact intersection of closed segments [A,B] and [C,D] in R^n.
inline SegmentMeet segment_meet_exact(const QVec& A, const QVec& B, const QVec& C, const QVec& D) {
    const size_t n = A.size();
    QVec dP(n), dQ(n), W(n);
    for (size_t i = 0; i < n; ++i) {
        dP[i] = B[i] - A[i];
        dQ[i] = D[i] - C[i];
        W[i] = C[i] - A[i];
    }
    auto zero = [](const QVec& v) {
        for (const auto& c : v)
            if (c != 0) return false;
        return true;
    };
    if (zero(dP) || zero(dQ)) throw DegenerateInput("segment_meet_exact: zero-length segment");

    // look for an axis pair where [dP | -dQ] is invertible
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            Scalar det = dP[i] * (-dQ[j]) - (-dQ[i]) * dP[j];
            if (det == 0) continue;
            Scalar s = (W[i] * (-dQ[j]) - (-dQ[i]) * W[j]) / det;
            Scalar u = (dP[i] * W[j] - dP[j] * W[i]) / det;
            for (size_t k = 0; k < n; ++k)
                if (s * dP[k] - u * dQ[k] != W[k]) return {};  // skew, no meet
            SegmentMeet m;
            m.s = s;
            m.u = u;
            m.touches = (s >= 0 && s <= 1 && u >= 0 && u <= 1);
            return m;
        }
    }

    // directions parallel; W must be parallel too or the lines are distinct
    size_t ax = 0;
    while (dP[ax] == 0) ++ax;
    for (size_t i = 0; i < n; ++i)
        if (W[i] * dP[ax] != W[ax] * dP[i]) return {};  // parallel distinct lines
    Scalar u0 = W[ax] / dP[ax];                              // C along [A,B]
    Scalar u1 = (W[ax] + dQ[ax]) / dP[ax];                   // D along [A,B]
    Scalar lo = std::min(u0, u1), hi = std::max(u0, u1);
    Scalar a = std::max(lo, Scalar(0)), b = std::min(hi, Scalar(1));
    SegmentMeet m;
    if (a > b) return m;
    m.touches = true;
    m.overlap = (a < b);
    if (!m.overlap) {
        m.s = a;
        m.u = (a - u0) / (u1 - u0);
    }
    return m;
}

struct PairTouch {
    size_t seg_a, seg_b;
    Scalar ta, tb;  // knot parameters of the meet
    QVec point;
};

// All intersections between non-adjacent segments plus any improper adjacent
// overlaps. For an embedding this list must be empty.
inline std::vector<PairTouch> self_intersections_exact(const LongKnotPL& f) {
    std::vector<PairTouch> out;
    const size_t m = f.segment_count();
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = i + 1; j < m; ++j) {
            SegmentMeet meet =
                segment_meet_exact(f.points[i], f.points[i + 1], f.points[j], f.points[j + 1]);
            if (!meet.touches) continue;
            if (j == i + 1 && !meet.overlap && meet.s == 1 && meet.u == 0) continue;  // shared vertex
            PairTouch t;
            t.seg_a = i;
            t.seg_b = j;
            if (meet.overlap) {
                t.ta = f.ts[i];
                t.tb = f.ts[j];
                t.point = f.points[i];
            } else {
                t.ta = f.ts[i] + meet.s * (f.ts[i + 1] - f.ts[i]);
                t.tb = f.ts[j] + meet.u * (f.ts[j + 1] - f.ts[j]);
                t.point = QVec(f.ambient_dim);
                for (size_t k = 0; k < f.ambient_dim; ++k)
                    t.point[k] = f.points[i][k] + meet.s * (f.points[i + 1][k] - f.points[i][k]);
            }
            out.push_back(std::move(t));
        }
    }
    // interior segments must avoid the two tail rays
    QVec left_far(f.ambient_dim, Scalar(0)), right_far(f.ambient_dim, Scalar(0));
    left_far[0] = Scalar(-3);
    right_far[0] = Scalar(3);
    for (size_t i = 0; i < m; ++i) {
        SegmentMeet ml = segment_meet_exact(f.points[i], f.points[i + 1], left_far, f.points.front());
        bool ok_l = !ml.touches || (i == 0 && !ml.overlap && ml.u == 1 && ml.s == 0);
        if (!ok_l) out.push_back({i, size_t(-1), f.ts[i], Scalar(-1), f.points[i]});
        SegmentMeet mr = segment_meet_exact(f.points[i], f.points[i + 1], f.points.back(), right_far);
        bool ok_r = !mr.touches || (i + 1 == m && !mr.overlap && mr.u == 0 && mr.s == 1);
        if (!ok_r) out.push_back({i, size_t(-2), f.ts[i], Scalar(1), f.points[i]});
    }
    return out;
}

inline bool validate_embedded_exact(const LongKnotPL& f) {
    f.validate_structure();
    return self_intersections_exact(f).empty();
}

// ---------------------------------------------------------------------------
// metric helpers (double precision)

inline double segment_point_distance(const DVec& a, const DVec& b, const DVec& p) {
    DVec d = dvec_sub(b, a);
    double len2 = dvec_dot(d, d);
    if (len2 == 0) return dvec_dist(a, p);
    double w = dvec_dot(dvec_sub(p, a), d) / len2;
    w = std::clamp(w, 0.0, 1.0);
    DVec q = a;
    dvec_axpy(q, w, d);
    return dvec_dist(q, p);
}

inline double segment_segment_distance(const DVec& A, const DVec& B, const DVec& C, const DVec& D) {
    DVec u = dvec_sub(B, A), v = dvec_sub(D, C), w = dvec_sub(A, C);
    double a = dvec_dot(u, u), b = dvec_dot(u, v), c = dvec_dot(v, v);
    double d = dvec_dot(u, w), e = dvec_dot(v, w);
    double den = a * c - b * b;
    double s, t;
    if (den > 1e-14 * a * c) {
        s = std::clamp((b * e - c * d) / den, 0.0, 1.0);
    } else {
        s = 0.0;  // nearly parallel
    }
    t = (b * s + e) / (c > 0 ? c : 1);
    if (t < 0) {
        t = 0;
        s = std::clamp(-d / (a > 0 ? a : 1), 0.0, 1.0);
    } else if (t > 1) {
        t = 1;
        s = std::clamp((b - d) / (a > 0 ? a : 1), 0.0, 1.0);
    }
    DVec P = A, Q = C;
    dvec_axpy(P, s, u);
    dvec_axpy(Q, t, v);
    double best = dvec_dist(P, Q);
    // clamped critical point can miss edge minima; sweep the four endpoint cases
    best = std::min(best, segment_point_distance(A, B, C));
    best = std::min(best, segment_point_distance(A, B, D));
    best = std::min(best, segment_point_distance(C, D, A));
    best = std::min(best, segment_point_distance(C, D, B));
    return best;
}

// Skip list for segment pairs whose proximity is intentional (double points).
using PairSkip = std::vector<std::pair<size_t, size_t>>;

// Reach proxy: clearance between distant strands plus a turning-angle local
// feature size at the vertices. Infinity for a straight knot.
inline double reach_estimate(const LongKnotPL& f, const PairSkip& skip = {}) {
    const size_t m = f.segment_count();
    double reach = std::numeric_limits<double>::infinity();
    auto skipped = [&](size_t i, size_t j) {
        for (const auto& [a, b] : skip)
            if ((a == i && b == j) || (a == j && b == i)) return true;
        return false;
    };
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 2; j < m; ++j) {
            if (skipped(i, j)) continue;
            reach = std::min(reach, segment_segment_distance(f.pd[i], f.pd[i + 1], f.pd[j],
                                                             f.pd[j + 1]));
        }
    // tails
    DVec lfar = standard_point(f.ambient_dim, -3), rfar = standard_point(f.ambient_dim, 3);
    for (size_t i = 1; i < m; ++i)
        reach = std::min(reach, segment_segment_distance(f.pd[i], f.pd[i + 1], lfar, f.pd.front()));
    for (size_t i = 0; i + 1 < m; ++i)
        reach = std::min(reach, segment_segment_distance(f.pd[i], f.pd[i + 1], f.pd.back(), rfar));
    // vertex turning
    for (size_t k = 1; k + 1 < f.pd.size(); ++k) {
        DVec u = dvec_sub(f.pd[k], f.pd[k - 1]);
        DVec v = dvec_sub(f.pd[k + 1], f.pd[k]);
        double nu = dvec_norm(u), nv = dvec_norm(v);
        double cosang = std::clamp(dvec_dot(u, v) / (nu * nv), -1.0, 1.0);
        double theta = std::acos(cosang);
        if (theta < 1e-12) continue;
        if (theta > 3.14159) {
            reach = 0;
            continue;
        }
        reach = std::min(reach, std::min(nu, nv) / (2.0 * std::tan(theta / 2.0)));
    }
    return reach;
}

// Sampled injectivity proxy; for PL knots the exact certificate runs as well.
inline bool is_embedding_sampled(const LongKnotPL& f, size_t samples, double delta, double eps) {
    if (samples < 2) throw ValidationError("is_embedding_sampled: need samples >= 2");
    std::vector<double> tv(samples);
    std::vector<DVec> pv(samples);
    double lo = f.td.front(), hi = f.td.back();
    for (size_t i = 0; i < samples; ++i) {
        tv[i] = lo + (hi - lo) * double(i) / double(samples - 1);
        pv[i] = eval_knot(f, tv[i]);
    }
    for (size_t i = 0; i < samples; ++i)
        for (size_t j = i + 1; j < samples; ++j) {
            if (tv[j] - tv[i] < delta) continue;
            if (dvec_dist(pv[i], pv[j]) < eps) return false;
        }
    return validate_embedded_exact(f);
}

// Seeded vertex jiggle keeping the combinatorics and the exact embedding
// certificate. Cap eps below reach/10 before calling. The displacement is
// compactly supported: vertices on the leading and trailing axis runs stay
// pinned, so the knot's support interval does not grow.
inline LongKnotPL perturb(const LongKnotPL& f, double eps, std::uint64_t seed) {
    if (eps < 0) throw ValidationError("perturb: negative magnitude");
    if (eps == 0) return f;
    auto off_axis = [&](size_t k) {
        for (size_t i = 1; i < f.ambient_dim; ++i)
            if (f.points[k][i] != 0) return true;
        return false;
    };
    size_t a = 0;
    while (a < f.points.size() && !off_axis(a)) ++a;
    if (a == f.points.size()) return f;  // straight: nothing to move
    size_t b = f.points.size() - 1;
    while (!off_axis(b)) --b;
    Rng rng(seed);
    for (int attempt = 0; attempt < 24; ++attempt) {
        LongKnotPL g = f;
        for (size_t k = a; k <= b; ++k) {
            DVec d = rng.in_ball(f.ambient_dim);
            for (size_t i = 0; i < f.ambient_dim; ++i) {
                Scalar moved = g.points[k][i] + exact(eps * d[i]);
                if (abs_rat(moved) <= 1) g.points[k][i] = moved;
            }
        }
        g.finalize();
        if (validate_embedded_exact(g)) return g;
    }
    throw DegenerateInput("perturb: could not keep the embedding certificate");
}

// Closed parameter interval outside which f is the standard inclusion.
inline std::optional<std::pair<Scalar, Scalar>> knot_support(const LongKnotPL& f) {
    auto standard_vertex = [&](size_t k) {
        if (f.points[k][0] != f.ts[k]) return false;
        for (size_t i = 1; i < f.ambient_dim; ++i)
            if (f.points[k][i] != 0) return false;
        return true;
    };
    size_t a = 0, b = f.points.size();
    while (a < f.points.size() && standard_vertex(a)) ++a;
    while (b > 0 && standard_vertex(b - 1)) --b;
    if (a >= b) return std::nullopt;  // straight
    size_t lo = a > 0 ? a - 1 : 0;
    size_t hi = b < f.points.size() ? b : f.points.size() - 1;
    return std::make_pair(f.ts[lo], f.ts[hi]);
}

inline LongKnotPL mirror_knot(const LongKnotPL& f, size_t axis) {
    if (axis == 0 || axis >= f.ambient_dim)
        throw ValidationError("mirror_knot: axis must be a transverse coordinate");
    LongKnotPL g = f;
    for (auto& p : g.points) p[axis] = -p[axis];
    g.finalize();
    return g;
}

inline LongKnotPL mirror_knot(const LongKnotPL& f) { return mirror_knot(f, f.ambient_dim - 1); }

// Append zero coordinates (e.g. view a knot in R^3 inside R^4).
inline LongKnotPL include_in_dim(const LongKnotPL& f, size_t n) {
    if (n < f.ambient_dim) throw ValidationError("include_in_dim: cannot drop coordinates");
    if (n == f.ambient_dim) return f;
    LongKnotPL g;
    g.ambient_dim = n;
    g.ts = f.ts;
    g.points.reserve(f.points.size());
    for (const auto& p : f.points) {
        QVec q = p;
        q.resize(n, Scalar(0));
        g.points.push_back(std::move(q));
    }
    g.finalize();
    return g;
}

// ---------------------------------------------------------------------------
// immersed curves

struct ImmersedKnotPL {
    LongKnotPL curve;  // structure-valid but deliberately not embedded
    std::vector<std::pair<Scalar, Scalar>> double_points;
};

// The listed double points must be exactly the self-meeting locus, each one a
// transverse single-point touch.
inline void validate_immersed(const ImmersedKnotPL& k) {
    k.curve.validate_structure();
    auto touches = self_intersections_exact(k.curve);
    std::vector<std::pair<Scalar, Scalar>> found;
    for (const auto& t : touches) {
        if (t.seg_b == size_t(-1) || t.seg_b == size_t(-2))
            throw ValidationError("validate_immersed: curve meets a tail ray");
        std::pair<Scalar, Scalar> pr{std::min(t.ta, t.tb), std::max(t.ta, t.tb)};
        if (pr.first == pr.second)
            throw ValidationError("validate_immersed: self-meet with equal parameters");
        if (std::find(found.begin(), found.end(), pr) == found.end()) found.push_back(pr);
    }
    std::sort(found.begin(), found.end());
    auto declared = k.double_points;
    for (auto& d : declared)
        if (d.second < d.first) std::swap(d.first, d.second);
    std::sort(declared.begin(), declared.end());
    if (found != declared)
        throw ValidationError("validate_immersed: double point list does not match the geometry");
    for (const auto& [ta, tb] : declared) {
        QVec pa = eval_knot_exact(k.curve, ta), pb = eval_knot_exact(k.curve, tb);
        if (pa != pb) throw ValidationError("validate_immersed: declared parameters do not meet");
    }
}

} // namespace knotcubes
