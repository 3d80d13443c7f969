#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "knotcubes/cube.hpp"
#include "knotcubes/knot.hpp"

namespace knotcubes {

namespace tdetail {

// Expression-tree node for a compactly supported self-embedding of
// R^j x D^k. The support ranges cover the j cube coordinates; the disk
// factor is never restricted. Evaluation short-circuits to the identity
// outside the box, which keeps the support invariant exact rather than
// merely approximate.
struct TubeNode {
    size_t j = 0, k = 0;
    std::vector<double> lo, hi;  // size j

    virtual ~TubeNode() = default;
    virtual DVec apply(const DVec& x) const = 0;
    virtual const char* tag() const = 0;
    virtual void breakpoints(std::vector<double>&) const {}

    DVec eval(const DVec& x) const {
        for (size_t i = 0; i < lo.size(); ++i)
            if (x[i] <= lo[i] || x[i] >= hi[i]) return x;
        return apply(x);
    }
};

using NodePtr = std::shared_ptr<const TubeNode>;

inline V3 rodrigues(const V3& axis, double angle, const V3& v) {
    double c = std::cos(angle), s = std::sin(angle);
    V3 w = v3_cross(axis, v);
    double d = v3_dot(axis, v);
    return v3_add(v3_add(v3_scale(v, c), v3_scale(w, s)), v3_scale(axis, d * (1 - c)));
}

struct IdentityNode final : TubeNode {
    IdentityNode(size_t jj, size_t kk) {
        j = jj;
        k = kk;
        lo.assign(j, 0.0);  // empty box: the shortcut always fires
        hi.assign(j, 0.0);
    }
    DVec apply(const DVec& x) const override { return x; }
    const char* tag() const override { return "identity"; }
};

// Tube re-embedding following a PL knot. The straight unit tube around the
// axis is carried onto a tube of the given radius around the knot by a
// parallel-transported frame; collars spread each corner's frame rotation
// over a short parameter window, a seam twist near the right tail returns
// the frame to standard, and the radius ramps back to 1 before |t| = 0.98
// so the map is the identity outside its box.
struct KnotTubeNode final : TubeNode {
    std::vector<double> tv;              // trimmed vertex parameters
    std::vector<V3> pv;                  // vertex positions
    std::vector<double> h;               // collar half-widths per vertex
    std::vector<double> rhedge;          // tv[q] + h[q], for region lookup
    std::vector<V3> axis;                // frame rotation axis per vertex
    std::vector<double> angle;           // frame rotation angle per vertex
    std::vector<std::array<V3, 2>> before;  // frame left of each vertex
    std::array<V3, 2> tail;              // frame right of the last vertex
    double seam_theta = 0;               // residual frame angle at the right tail
    double radius = 0;

    KnotTubeNode(const LongKnotPL& f, double rad) {
        j = 1;
        k = 2;
        lo = {-0.98};
        hi = {0.98};
        radius = rad;

        auto on_axis = [&](size_t i) {
            return f.points[i][1] == 0 && f.points[i][2] == 0;
        };
        size_t count = f.points.size();
        size_t a = 0;
        while (a < count && on_axis(a)) ++a;
        if (a == count) throw ValidationError("tube: knot has no off-axis vertices");
        size_t b = count;
        while (b > 0 && on_axis(b - 1)) --b;
        for (size_t i = a - 1; i <= b; ++i) {
            tv.push_back(f.td[i]);
            pv.push_back({f.pd[i][0], f.pd[i][1], f.pd[i][2]});
        }
        if (tv.front() < -0.96 || tv.back() > 0.96)
            throw ValidationError(
                "tube_from_knot: knot support must stay within |t| <= 0.96 to leave room for the end ramps");

        size_t m = tv.size() - 1;
        std::vector<V3> T(m);
        for (size_t i = 0; i < m; ++i) {
            V3 d = v3_sub(pv[i + 1], pv[i]);
            double len = v3_norm(d);
            if (len == 0) throw ValidationError("tube: zero-length segment");
            T[i] = v3_scale(d, 1.0 / len);
        }

        std::array<V3, 2> cur = {v3(0, 1, 0), v3(0, 0, 1)};
        const V3 xhat = v3(1, 0, 0);
        for (size_t q = 0; q <= m; ++q) {
            V3 prev = (q == 0) ? xhat : T[q - 1];
            V3 next = (q == m) ? xhat : T[q];
            double c = v3_dot(prev, next);
            V3 ax = v3_cross(prev, next);
            double s = v3_norm(ax);
            if (c < -0.999999)
                throw ValidationError("tube frames: tangent reversal at a vertex");
            double ang = std::atan2(s, c);
            ax = (s > 1e-14) ? v3_scale(ax, 1.0 / s) : v3(0, 0, 1);
            axis.push_back(ax);
            angle.push_back(s > 1e-14 ? ang : 0.0);
            before.push_back(cur);
            if (angle[q] != 0) {
                cur = {rodrigues(ax, ang, cur[0]), rodrigues(ax, ang, cur[1])};
                // re-orthonormalize against the new tangent to stop drift
                cur[0] = v3_sub(cur[0], v3_scale(next, v3_dot(cur[0], next)));
                cur[0] = v3_scale(cur[0], 1.0 / v3_norm(cur[0]));
                cur[1] = v3_cross(next, cur[0]);
            }
        }
        tail = cur;
        seam_theta = std::atan2(tail[0][2], tail[0][1]);

        for (size_t q = 0; q <= m; ++q) {
            double left = (q == 0) ? tv[0] + 0.98 : tv[q] - tv[q - 1];
            double right = (q == m) ? 0.98 - tv[m] : tv[q + 1] - tv[q];
            h.push_back(std::min(std::min(left, right) / 3.0, 0.02));
            rhedge.push_back(tv[q] + h.back());
        }
    }

    V3 centerline(double t) const {
        if (t <= tv.front() || t >= tv.back()) return v3(t, 0, 0);
        size_t i = size_t(std::upper_bound(tv.begin(), tv.end(), t) - tv.begin()) - 1;
        double lam = (t - tv[i]) / (tv[i + 1] - tv[i]);
        return v3_add(pv[i], v3_scale(v3_sub(pv[i + 1], pv[i]), lam));
    }

    std::array<V3, 2> frame(double t) const {
        size_t m = tv.size() - 1;
        size_t q = size_t(std::upper_bound(rhedge.begin(), rhedge.end(), t) - rhedge.begin());
        if (q > m) {
            double w0 = tv[m] + h[m];
            double u = std::clamp((t - w0) / (0.98 - w0), 0.0, 1.0);
            double phi = -seam_theta * u;
            return {rodrigues(v3(1, 0, 0), phi, tail[0]), rodrigues(v3(1, 0, 0), phi, tail[1])};
        }
        if (t <= tv[q] - h[q] || angle[q] == 0) return before[q];
        double s = (t - (tv[q] - h[q])) / (2 * h[q]);
        double phi = angle[q] * std::clamp(s, 0.0, 1.0);
        return {rodrigues(axis[q], phi, before[q][0]), rodrigues(axis[q], phi, before[q][1])};
    }

    double rho(double t) const {
        double l0 = tv.front() - h.front(), r0 = tv.back() + h.back();
        if (t < l0) {
            double u = (t + 0.98) / (l0 + 0.98);
            return 1.0 + std::clamp(u, 0.0, 1.0) * (radius - 1.0);
        }
        if (t > r0) {
            double u = (t - r0) / (0.98 - r0);
            return radius + std::clamp(u, 0.0, 1.0) * (1.0 - radius);
        }
        return radius;
    }

    DVec apply(const DVec& x) const override {
        double t = x[0];
        V3 c = centerline(t);
        auto fr = frame(t);
        double r = rho(t);
        V3 p = v3_add(c, v3_add(v3_scale(fr[0], r * x[1]), v3_scale(fr[1], r * x[2])));
        return {p[0], p[1], p[2]};
    }
    const char* tag() const override { return "knot_tube"; }
    void breakpoints(std::vector<double>& out) const override {
        out.insert(out.end(), tv.begin(), tv.end());
        out.push_back(tv.front() - h.front());
        out.push_back(tv.back() + h.back());
        out.push_back(-0.98);
        out.push_back(0.98);
    }
};

// Axial twist: rotate the disk fiber by an angle that ramps up toward the
// middle of the interval and vanishes for |t| >= 0.9.
struct TwistNode final : TubeNode {
    double turns;
    explicit TwistNode(double tu) : turns(tu) {
        j = 1;
        k = 2;
        lo = {-0.9};
        hi = {0.9};
    }
    DVec apply(const DVec& x) const override {
        double a = std::abs(x[0]);
        double w = a >= 0.9 ? 0.0 : (a <= 0.7 ? 1.0 : (0.9 - a) / 0.2);
        double phi = 2.0 * 3.14159265358979323846 * turns * w;
        double c = std::cos(phi), s = std::sin(phi);
        return {x[0], c * x[1] - s * x[2], s * x[1] + c * x[2]};
    }
    const char* tag() const override { return "twist"; }
    void breakpoints(std::vector<double>& out) const override {
        out.insert(out.end(), {-0.9, -0.7, 0.7, 0.9});
    }
};

// Constant rotation of the disk: an embedding of D^2 with no cube factor.
struct DiskRotNode final : TubeNode {
    double theta;
    explicit DiskRotNode(double th) : theta(th) {
        j = 0;
        k = 2;
    }
    DVec apply(const DVec& x) const override {
        double c = std::cos(theta), s = std::sin(theta);
        return {c * x[0] - s * x[1], s * x[0] + c * x[1]};
    }
    const char* tag() const override { return "disk_rotation"; }
};

// mu(L, E) = (L x Id) o E o (L^{-1} x Id); the support box moves to L(box).
struct ConjugateNode final : TubeNode {
    LittleCube L;
    NodePtr inner;
    std::vector<double> la, lb, ia, ib;  // forward and inverse factors, as doubles

    ConjugateNode(LittleCube cube, NodePtr in) : L(std::move(cube)), inner(std::move(in)) {
        j = inner->j;
        k = inner->k;
        if (L.dim() != j) throw DimensionMismatch("conjugate: cube dimension must match the tube's");
        for (size_t i = 0; i < j; ++i) {
            const AffineInc& f = L.factors[i];
            AffineInc g = f.inverse();
            la.push_back(to_double(f.a));
            lb.push_back(to_double(f.b));
            ia.push_back(to_double(g.a));
            ib.push_back(to_double(g.b));
            lo.push_back(la[i] * inner->lo[i] + lb[i]);
            hi.push_back(la[i] * inner->hi[i] + lb[i]);
        }
    }
    DVec apply(const DVec& x) const override {
        DVec y = x;
        for (size_t i = 0; i < j; ++i) y[i] = ia[i] * x[i] + ib[i];
        DVec z = inner->eval(y);
        for (size_t i = 0; i < j; ++i) z[i] = la[i] * z[i] + lb[i];
        return z;
    }
    const char* tag() const override { return "conjugate"; }
    void breakpoints(std::vector<double>& out) const override {
        std::vector<double> in;
        inner->breakpoints(in);
        for (double t : in) out.push_back(la[0] * t + lb[0]);
        out.push_back(lb[0] - la[0]);
        out.push_back(lb[0] + la[0]);
    }
};

struct ComposeNode final : TubeNode {
    NodePtr first, second;  // evaluates first(second(x))
    ComposeNode(NodePtr a, NodePtr b) : first(std::move(a)), second(std::move(b)) {
        if (first->j != second->j || first->k != second->k)
            throw DimensionMismatch("compose: tube dimensions differ");
        j = first->j;
        k = first->k;
        for (size_t i = 0; i < j; ++i) {
            lo.push_back(std::min(first->lo[i], second->lo[i]));
            hi.push_back(std::max(first->hi[i], second->hi[i]));
        }
    }
    DVec apply(const DVec& x) const override { return first->eval(second->eval(x)); }
    const char* tag() const override { return "compose"; }
    void breakpoints(std::vector<double>& out) const override {
        first->breakpoints(out);
        second->breakpoints(out);
    }
};

// Graphing node: a loop of embeddings one dimension down, sampled on a grid
// in the new first coordinate and interpolated linearly between samples.
// The loop is based at the identity, so the node is the identity outside
// the grid range.
struct Gr1Node final : TubeNode {
    std::vector<double> grid;
    std::vector<NodePtr> samples;

    Gr1Node(std::vector<double> g, std::vector<NodePtr> s)
        : grid(std::move(g)), samples(std::move(s)) {
        if (grid.size() < 2 || grid.size() != samples.size())
            throw ValidationError("gr1: need matching grid and samples, at least two");
        for (size_t i = 0; i + 1 < grid.size(); ++i)
            if (!(grid[i] < grid[i + 1])) throw ValidationError("gr1: grid must increase strictly");
        if (grid.front() < -0.98 || grid.back() > 0.98)
            throw ValidationError("gr1: grid must stay within |t| <= 0.98");
        j = samples[0]->j + 1;
        k = samples[0]->k;
        for (const auto& sm : samples)
            if (sm->j + 1 != j || sm->k != k)
                throw DimensionMismatch("gr1: sample dimensions differ");
        lo.push_back(grid.front());
        hi.push_back(grid.back());
        for (size_t i = 0; i + 1 < j; ++i) {
            double a = samples[0]->lo[i], b = samples[0]->hi[i];
            for (const auto& sm : samples) {
                a = std::min(a, sm->lo[i]);
                b = std::max(b, sm->hi[i]);
            }
            lo.push_back(a);
            hi.push_back(b);
        }
    }
    DVec apply(const DVec& x) const override {
        DVec rest(x.begin() + 1, x.end());
        size_t i = size_t(std::upper_bound(grid.begin(), grid.end(), x[0]) - grid.begin());
        if (i == 0 || i == grid.size()) return x;
        double lam = (x[0] - grid[i - 1]) / (grid[i] - grid[i - 1]);
        DVec a = samples[i - 1]->eval(rest);
        DVec b = samples[i]->eval(rest);
        DVec out(x.size());
        out[0] = x[0];
        for (size_t c = 0; c < rest.size(); ++c) out[c + 1] = (1 - lam) * a[c] + lam * b[c];
        return out;
    }
    const char* tag() const override { return "gr1"; }
    void breakpoints(std::vector<double>& out) const override {
        out.insert(out.end(), grid.begin(), grid.end());
    }
};

}  // namespace tdetail

struct TubeEmbedding {
    tdetail::NodePtr root;

    size_t cube_dim() const { return root->j; }
    size_t disk_dim() const { return root->k; }
    const std::vector<double>& support_lo() const { return root->lo; }
    const std::vector<double>& support_hi() const { return root->hi; }
};

inline DVec eval_tube(const TubeEmbedding& E, const DVec& x) {
    if (!E.root) throw ValidationError("eval_tube: empty tube");
    if (x.size() != E.root->j + E.root->k)
        throw DimensionMismatch("eval_tube: point has wrong dimension");
    return E.root->eval(x);
}

inline TubeEmbedding identity_tube(size_t j, size_t k) {
    return {std::make_shared<tdetail::IdentityNode>(j, k)};
}

inline TubeEmbedding twist_tube(double turns) {
    return {std::make_shared<tdetail::TwistNode>(turns)};
}

inline TubeEmbedding disk_rotation(double theta) {
    return {std::make_shared<tdetail::DiskRotNode>(theta)};
}

// Composition as maps: result(x) = f(g(x)).
inline TubeEmbedding compose_tubes(const TubeEmbedding& f, const TubeEmbedding& g) {
    return {std::make_shared<tdetail::ComposeNode>(f.root, g.root)};
}

inline TubeEmbedding tube_from_knot(const LongKnotPL& f, double radius) {
    if (f.ambient_dim != 3)
        throw ValidationError("tube_from_knot: ambient dimension must be 3");
    if (!(radius > 0)) throw ValidationError("tube_from_knot: radius must be positive");
    if (!knot_support(f)) return identity_tube(1, 2);
    double r = reach_estimate(f);
    if (!(radius < r / 2))
        throw ValidationError("tube_from_knot: radius must stay below reach/2; larger tubes self-overlap");
    return {std::make_shared<tdetail::KnotTubeNode>(f, radius)};
}

// Restrict a one-parameter tube to its core line and refit a PL knot.
// Samples the tree's breakpoints plus a uniform grid with midpoints, then
// drops vertices that are affinely redundant within 1e-12.
inline LongKnotPL knot_from_tube(const TubeEmbedding& E) {
    if (E.cube_dim() != 1) throw ValidationError("knot_from_tube: tube must have one cube coordinate");
    const size_t n = 1 + E.disk_dim();

    std::vector<double> params;
    E.root->breakpoints(params);
    const size_t grid = 256;
    for (size_t i = 0; i <= grid; ++i) params.push_back(-1.0 + 2.0 * double(i) / double(grid));
    std::sort(params.begin(), params.end());
    params.erase(std::remove_if(params.begin(), params.end(),
                                [](double t) { return t < -1.0 || t > 1.0; }),
                 params.end());
    std::vector<double> ts;
    for (double t : params)
        if (ts.empty() || t - ts.back() > 1e-12) ts.push_back(t);
    for (size_t i = ts.size() - 1; i > 0; --i) ts.insert(ts.begin() + i, (ts[i - 1] + ts[i]) / 2);

    std::vector<DVec> ys;
    ys.reserve(ts.size());
    for (double t : ts) {
        DVec x(n, 0.0);
        x[0] = t;
        ys.push_back(E.root->eval(x));
    }

    // greedy simplification: extend each kept segment while every skipped
    // vertex stays within 1e-12 of the straight interpolant
    std::vector<size_t> keep = {0};
    size_t anchor = 0;
    while (anchor + 1 < ts.size()) {
        size_t cand = anchor + 1;
        for (size_t next = anchor + 2; next < ts.size(); ++next) {
            bool ok = true;
            for (size_t mid = anchor + 1; mid < next && ok; ++mid) {
                double lam = (ts[mid] - ts[anchor]) / (ts[next] - ts[anchor]);
                for (size_t c = 0; c < n; ++c) {
                    double lin = ys[anchor][c] + lam * (ys[next][c] - ys[anchor][c]);
                    if (std::abs(ys[mid][c] - lin) > 1e-12) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) break;
            cand = next;
        }
        keep.push_back(cand);
        anchor = cand;
    }

    std::vector<Scalar> kts;
    std::vector<QVec> kpts;
    for (size_t i : keep) {
        kts.push_back(exact(ts[i]));
        QVec p(n);
        for (size_t c = 0; c < n; ++c) p[c] = exact(ys[i][c]);
        kpts.push_back(std::move(p));
    }
    LongKnotPL out;
    try {
        out = make_knot(n, std::move(kts), std::move(kpts));
    } catch (const ValidationError&) {
        throw ValidationError("knot_from_tube: sampled core fails the embedding checks");
    }
    if (!validate_embedded_exact(out))
        throw ValidationError("knot_from_tube: sampled core fails the embedding checks");
    return out;
}

// Injectivity proxy for tubes: sample a grid over the domain and demand that
// points at domain distance >= delta keep image distance >= eps. The first
// cube coordinate gets `samples` points, further cube coordinates 8 each,
// and the disk is covered by rings of 8 angles at 8 radii.
inline bool is_embedding_sampled(const TubeEmbedding& E, size_t samples, double delta, double eps) {
    if (samples < 2) throw ValidationError("is_embedding_sampled: need samples >= 2");
    if (!(delta > 0) || !(eps > 0)) throw ValidationError("is_embedding_sampled: need positive tolerances");
    const size_t j = E.cube_dim(), k = E.disk_dim();

    std::vector<DVec> domain = {DVec{}};
    auto extend = [&](const std::vector<double>& vals) {
        std::vector<DVec> next;
        next.reserve(domain.size() * vals.size());
        for (const auto& d : domain)
            for (double v : vals) {
                DVec e = d;
                e.push_back(v);
                next.push_back(std::move(e));
            }
        domain = std::move(next);
    };
    for (size_t c = 0; c < j; ++c) {
        size_t m = (c == 0) ? samples : 8;
        std::vector<double> vals(m);
        for (size_t i = 0; i < m; ++i) vals[i] = -1.0 + 2.0 * double(i) / double(m - 1);
        extend(vals);
    }
    if (k == 2) {
        std::vector<DVec> next;
        const double pi = 3.14159265358979323846;
        for (const auto& d : domain)
            for (size_t ri = 1; ri <= 8; ++ri)
                for (size_t ai = 0; ai < 8; ++ai) {
                    double r = double(ri) / 8.0, th = 2 * pi * double(ai) / 8.0;
                    DVec e = d;
                    e.push_back(r * std::cos(th));
                    e.push_back(r * std::sin(th));
                    next.push_back(std::move(e));
                }
        domain = std::move(next);
    } else {
        for (size_t c = 0; c < k; ++c) {
            std::vector<double> vals(5);
            for (size_t i = 0; i < 5; ++i) vals[i] = -1.0 + 2.0 * double(i) / 4.0;
            extend(vals);
        }
    }

    std::vector<DVec> image;
    image.reserve(domain.size());
    for (const auto& x : domain) image.push_back(E.root->eval(x));

    for (size_t a = 0; a < domain.size(); ++a)
        for (size_t b = a + 1; b < domain.size(); ++b) {
            if (dvec_dist(domain[a], domain[b]) < delta) continue;
            if (dvec_dist(image[a], image[b]) < eps) return false;
        }
    return true;
}

}  // namespace knotcubes
