#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "knotcubes/knot.hpp"

namespace knotcubes {

// A line meeting the knot in four points whose order along the line
// interleaves with their order along the knot as x3 x1 x4 x2.
struct Quadrisecant {
    std::array<double, 4> params;    // knot parameters, increasing
    std::array<V3, 4> points;
    double residual = 0;             // max distance to the common line
    int sign = 0;
};

struct QuadsecOptions {
    bool prune = true;
    size_t threads = 0;              // 0: KNOTCUBES_THREADS or 1
    double residual_tol = 1e-10;     // relative to the knot diameter
    double merge_tol = 1e-8;         // parameter-space dedupe radius
    std::uint64_t perturb_seed = 0x5ec4e7u;
    int max_perturb_retries = 5;
};

struct QuadsecReport {
    std::vector<Quadrisecant> secants;
    long long signed_total = 0;
    size_t quadruples_checked = 0;
    int perturb_retries = 0;
    LongKnotPL geometry;             // the geometry actually enumerated
};

namespace qdetail {

struct Seg {
    V3 p, d;        // support line point and direction (unnormalized)
    V3 lo, hi;      // axis-aligned box
    double t0, t1;  // knot parameters of the endpoints
};

inline std::vector<Seg> segments_of(const LongKnotPL& f) {
    std::vector<Seg> segs(f.segment_count());
    for (size_t i = 0; i < segs.size(); ++i) {
        V3 a{f.pd[i][0], f.pd[i][1], f.pd[i][2]};
        V3 b{f.pd[i + 1][0], f.pd[i + 1][1], f.pd[i + 1][2]};
        segs[i].p = a;
        segs[i].d = v3_sub(b, a);
        for (int k = 0; k < 3; ++k) {
            segs[i].lo[k] = std::min(a[k], b[k]);
            segs[i].hi[k] = std::max(a[k], b[k]);
        }
        segs[i].t0 = f.td[i];
        segs[i].t1 = f.td[i + 1];
    }
    return segs;
}

inline bool boxes_meet(const V3& lo1, const V3& hi1, const V3& lo2, const V3& hi2, double pad) {
    for (int k = 0; k < 3; ++k)
        if (lo1[k] > hi2[k] + pad || lo2[k] > hi1[k] + pad) return false;
    return true;
}

// Lines through four lines in general position: parametrize candidates by a
// point X on line a and Y on line b; meeting line i is the bilinear condition
// G_i(s,u) = A_i + B_i u + C_i s + E_i s u = 0, giving a quadratic in s.
struct Transversal {
    std::array<double, 4> w;  // parameters on the four segment lines
};

inline double tri_det(const V3& a, const V3& b, const V3& c) { return v3_det(a, b, c); }

inline std::vector<Transversal> line_transversals(const std::array<Seg, 4>& L) {
    const V3& P1 = L[0].p;
    const V3& D1 = L[0].d;
    const V3& P2 = L[1].p;
    const V3& D2 = L[1].d;
    V3 W = v3_sub(P2, P1);
    double A[4], B[4], C[4], E[4];
    for (int i = 2; i < 4; ++i) {
        V3 Vi = v3_sub(L[i].p, P1);
        const V3& Di = L[i].d;
        A[i] = tri_det(W, Vi, Di);
        B[i] = tri_det(D2, Vi, Di);
        C[i] = -tri_det(W, D1, Di) - tri_det(D1, Vi, Di);
        E[i] = -tri_det(D2, D1, Di);
    }
    double q2 = C[3] * E[2] - C[2] * E[3];
    double q1 = A[3] * E[2] + C[3] * B[2] - A[2] * E[3] - C[2] * B[3];
    double q0 = A[3] * B[2] - A[2] * B[3];
    double qscale = std::abs(A[3] * E[2]) + std::abs(C[3] * B[2]) + std::abs(A[2] * E[3]) +
                    std::abs(C[2] * B[3]) + std::abs(A[3] * B[2]) + std::abs(A[2] * B[3]) +
                    std::abs(C[3] * E[2]) + std::abs(C[2] * E[3]) + 1e-300;
    if (std::max({std::abs(q2), std::abs(q1), std::abs(q0)}) < 1e-10 * qscale)
        throw DegenerateInput("line_transversals: quadruple admits a transversal family");

    std::vector<double> roots;
    if (std::abs(q2) < 1e-13 * qscale) {
        if (std::abs(q1) > 1e-13 * qscale) roots.push_back(-q0 / q1);
    } else {
        double disc = q1 * q1 - 4 * q2 * q0;
        if (disc >= 0) {
            double sq = std::sqrt(disc);
            // stable pairing: compute the larger-magnitude root first
            double r1 = (q1 >= 0) ? (-q1 - sq) / (2 * q2) : (-q1 + sq) / (2 * q2);
            roots.push_back(r1);
            if (disc > 0) {
                double prod = q0 / q2;
                roots.push_back(std::abs(r1) > 1e-300 ? prod / r1 : (-q1 + sq) / (2 * q2));
            }
        }
    }

    std::vector<Transversal> out;
    for (double s : roots) {
        if (!std::isfinite(s)) continue;
        double den2 = B[2] + E[2] * s, den3 = B[3] + E[3] * s;
        double u;
        if (std::abs(den2) >= std::abs(den3)) {
            if (std::abs(den2) < 1e-300) continue;
            u = -(A[2] + C[2] * s) / den2;
        } else {
            u = -(A[3] + C[3] * s) / den3;
        }
        if (!std::isfinite(u)) continue;
        V3 X = v3_add(P1, v3_scale(D1, s));
        V3 Y = v3_add(P2, v3_scale(D2, u));
        V3 dir = v3_sub(Y, X);
        double dn = v3_norm(dir);
        // X == Y: the root passes through an intersection of the first two
        // carrier lines and cannot carry four distinct secant points
        if (dn < 1e-12) continue;
        Transversal tr;
        tr.w[0] = s;
        tr.w[1] = u;
        for (int i = 2; i < 4; ++i) {
            // closest-point parameter of the candidate line on line i
            const V3& Di = L[i].d;
            V3 R = v3_sub(L[i].p, X);
            double dd = v3_dot(Di, Di), ll = v3_dot(dir, dir), dl = v3_dot(Di, dir);
            double det = dd * ll - dl * dl;
            if (std::abs(det) < 1e-14 * dd * ll)
                throw DegenerateInput("line_transversals: transversal parallel to a carrier");
            tr.w[i] = (dl * v3_dot(R, dir) - ll * v3_dot(R, Di)) / det;
        }
        out.push_back(tr);
    }
    return out;
}

// Divided-difference collinearity functional. Points ordered by knot
// parameter; components vanish exactly on collinear configurations and the
// normalization makes the Jacobian determinant's sign frame-independent.
inline std::array<double, 4> colin_F(const std::array<V3, 4>& x) {
    V3 u = v3_sub(x[3], x[0]);
    double un = v3_norm(u);
    u = v3_scale(u, 1.0 / un);
    // deterministic orthonormal completion
    V3 seed = std::abs(u[0]) < 0.9 ? V3{1, 0, 0} : V3{0, 1, 0};
    V3 e1 = v3_sub(seed, v3_scale(u, v3_dot(seed, u)));
    e1 = v3_scale(e1, 1.0 / v3_norm(e1));
    V3 e2 = v3_cross(u, e1);
    double s[4], p1[4], p2[4];
    for (int i = 0; i < 4; ++i) {
        V3 r = v3_sub(x[i], x[0]);
        s[i] = v3_dot(r, u);
        p1[i] = v3_dot(r, e1);
        p2[i] = v3_dot(r, e2);
    }
    auto dd = [&](int a, int b, int c, const double* g) {
        return g[a] / ((s[a] - s[b]) * (s[a] - s[c])) + g[b] / ((s[b] - s[a]) * (s[b] - s[c])) +
               g[c] / ((s[c] - s[a]) * (s[c] - s[b]));
    };
    return {dd(0, 1, 2, p1), dd(0, 1, 2, p2), dd(1, 2, 3, p1), dd(1, 2, 3, p2)};
}

struct FJet {
    std::array<double, 4> F;
    std::array<std::array<double, 4>, 4> J;  // dF_i / dw_j, central differences
};

inline std::array<V3, 4> eval_points(const std::array<Seg, 4>& segs,
                                     const std::array<double, 4>& w) {
    std::array<V3, 4> x;
    for (int i = 0; i < 4; ++i) x[i] = v3_add(segs[i].p, v3_scale(segs[i].d, w[i]));
    return x;
}

inline FJet colin_jet(const std::array<Seg, 4>& segs, const std::array<double, 4>& w) {
    FJet jet;
    jet.F = colin_F(eval_points(segs, w));
    const double h = 1e-6;
    for (int j = 0; j < 4; ++j) {
        auto wp = w, wm = w;
        wp[j] += h;
        wm[j] -= h;
        auto Fp = colin_F(eval_points(segs, wp));
        auto Fm = colin_F(eval_points(segs, wm));
        for (int i = 0; i < 4; ++i) jet.J[i][j] = (Fp[i] - Fm[i]) / (2 * h);
    }
    return jet;
}

// Solve J dx = -F in place; returns the determinant (0 on pivot failure).
inline double solve4(std::array<std::array<double, 4>, 4> J, std::array<double, 4> rhs,
                     std::array<double, 4>& dx) {
    std::array<int, 4> piv{0, 1, 2, 3};
    double det = 1;
    for (int c = 0; c < 4; ++c) {
        int best = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(J[piv[r]][c]) > std::abs(J[piv[best]][c])) best = r;
        if (best != c) {
            std::swap(piv[best], piv[c]);
            det = -det;
        }
        double p = J[piv[c]][c];
        if (std::abs(p) < 1e-300) return 0;
        det *= p;
        for (int r = c + 1; r < 4; ++r) {
            double f = J[piv[r]][c] / p;
            for (int k = c; k < 4; ++k) J[piv[r]][k] -= f * J[piv[c]][k];
            rhs[piv[r]] -= f * rhs[piv[c]];
        }
    }
    for (int c = 3; c >= 0; --c) {
        double acc = rhs[piv[c]];
        for (int k = c + 1; k < 4; ++k) acc -= J[piv[c]][k] * dx[k];
        dx[c] = acc / J[piv[c]][c];
    }
    return det;
}

inline double det4(const std::array<std::array<double, 4>, 4>& Jin) {
    auto J = Jin;
    double det = 1;
    for (int c = 0; c < 4; ++c) {
        int best = c;
        for (int r = c + 1; r < 4; ++r)
            if (std::abs(J[r][c]) > std::abs(J[best][c])) best = r;
        if (best != c) {
            std::swap(J[best], J[c]);
            det = -det;
        }
        if (std::abs(J[c][c]) < 1e-300) return 0;
        det *= J[c][c];
        for (int r = c + 1; r < 4; ++r) {
            double f = J[r][c] / J[c][c];
            for (int k = c; k < 4; ++k) J[r][k] -= f * J[c][k];
        }
    }
    return det;
}

// scale-free conditioning measure: |det| relative to the Hadamard bound
inline double det4_relative(const std::array<std::array<double, 4>, 4>& J, double& det_out) {
    det_out = det4(J);
    double bound = 1;
    for (int i = 0; i < 4; ++i) {
        double rn = 0;
        for (int j = 0; j < 4; ++j) rn += J[i][j] * J[i][j];
        bound *= std::sqrt(rn);
    }
    if (bound < 1e-300) return 0;
    return std::abs(det_out) / bound;
}

inline double line_residual(const std::array<V3, 4>& x) {
    V3 dir = v3_sub(x[3], x[0]);
    double dn = v3_norm(dir);
    if (dn < 1e-300) return 1e300;
    dir = v3_scale(dir, 1.0 / dn);
    double worst = 0;
    for (int i = 1; i < 3; ++i) {
        V3 r = v3_sub(x[i], x[0]);
        V3 perp = v3_sub(r, v3_scale(dir, v3_dot(r, dir)));
        worst = std::max(worst, v3_norm(perp));
    }
    return worst;
}

// Orientation of the collinearity Jacobian is conventional; the factor is
// frozen so the right-handed trefoil's alternating quadrisecant counts +1.
inline constexpr int kSignCalibration = -1;

} // namespace qdetail

inline size_t quadsec_thread_count(const QuadsecOptions& opts) {
    if (opts.threads > 0) return opts.threads;
    if (const char* env = std::getenv("KNOTCUBES_THREADS")) {
        long n = std::atol(env);
        if (n >= 1 && n <= 256) return size_t(n);
    }
    return 1;
}

namespace qdetail {

struct EnumPass {
    std::vector<Quadrisecant> found;
    size_t checked = 0;
};

inline EnumPass enumerate_once(const LongKnotPL& knot, const QuadsecOptions& opts) {
    auto segs = segments_of(knot);
    const size_t m = segs.size();
    V3 glo = segs.empty() ? V3{0, 0, 0} : segs[0].lo, ghi = segs.empty() ? V3{0, 0, 0} : segs[0].hi;
    for (const auto& s : segs)
        for (int k = 0; k < 3; ++k) {
            glo[k] = std::min(glo[k], s.lo[k]);
            ghi[k] = std::max(ghi[k], s.hi[k]);
        }
    const double diameter = v3_norm(v3_sub(ghi, glo)) + 1e-30;
    const double res_tol = opts.residual_tol * diameter;
    const double box_pad = 1e-7 * diameter;
    const double vertex_margin = 1e-9;

    // middle pair list drives both the pruned and the exhaustive scan
    std::vector<std::pair<size_t, size_t>> mids;
    for (size_t i2 = 0; i2 + 1 < m; ++i2)
        for (size_t i3 = i2 + 1; i3 < m; ++i3) mids.emplace_back(i2, i3);

    const size_t nthreads = std::min(quadsec_thread_count(opts), std::max<size_t>(mids.size(), 1));
    std::atomic<size_t> cursor{0};
    std::vector<EnumPass> locals(nthreads);
    std::vector<std::string> degenerate(nthreads);

    auto worker = [&](size_t tid) {
        EnumPass& acc = locals[tid];
        try {
            for (;;) {
                size_t k = cursor.fetch_add(1);
                if (k >= mids.size()) break;
                auto [i2, i3] = mids[k];
                V3 ulo = segs[i2].lo, uhi = segs[i2].hi;
                for (int c = 0; c < 3; ++c) {
                    ulo[c] = std::min(ulo[c], segs[i3].lo[c]);
                    uhi[c] = std::max(uhi[c], segs[i3].hi[c]);
                }
                for (size_t i1 = 0; i1 < i2; ++i1) {
                    if (opts.prune && !boxes_meet(segs[i1].lo, segs[i1].hi, ulo, uhi, box_pad))
                        continue;
                    for (size_t i4 = i3 + 1; i4 < m; ++i4) {
                        if (opts.prune && !boxes_meet(segs[i4].lo, segs[i4].hi, ulo, uhi, box_pad))
                            continue;
                        ++acc.checked;
                        std::array<Seg, 4> quad{segs[i1], segs[i2], segs[i3], segs[i4]};
                        auto candidates = line_transversals(quad);
                        for (const auto& cand : candidates) {
                            std::array<double, 4> w = cand.w;
                            bool near = true;
                            for (int i = 0; i < 4; ++i)
                                if (w[i] < -0.05 || w[i] > 1.05) near = false;
                            if (!near) continue;
                            // Newton polish on the collinearity system
                            bool polished = true;
                            for (int it = 0; it < 12; ++it) {
                                auto jet = colin_jet(quad, w);
                                std::array<double, 4> dx;
                                double d = solve4(
                                    jet.J, {-jet.F[0], -jet.F[1], -jet.F[2], -jet.F[3]}, dx);
                                if (d == 0) {
                                    polished = false;
                                    break;
                                }
                                double step = 0;
                                for (int i = 0; i < 4; ++i) {
                                    w[i] += dx[i];
                                    step = std::max(step, std::abs(dx[i]));
                                }
                                if (step < 1e-13) break;
                            }
                            if (!polished) continue;

                            // keep only solutions landing on all four segments;
                            // w within vertex_margin of an endpoint is ambiguous
                            bool on_segments = true, hugs_vertex = false;
                            for (int i = 0; i < 4; ++i) {
                                if (w[i] < -vertex_margin || w[i] > 1 + vertex_margin)
                                    on_segments = false;
                                else if (w[i] < vertex_margin || w[i] > 1 - vertex_margin)
                                    hugs_vertex = true;
                            }
                            if (!on_segments) continue;
                            auto pts = eval_points(quad, w);
                            double res = line_residual(pts);
                            if (res > res_tol) continue;
                            // lines through a shared vertex meet the knot in
                            // fewer than four distinct points; not secants
                            double min_gap = 1e300;
                            for (int i = 0; i < 4; ++i)
                                for (int j = i + 1; j < 4; ++j)
                                    min_gap = std::min(min_gap,
                                                       v3_norm(v3_sub(pts[i], pts[j])));
                            if (min_gap < 1e-9 * diameter) continue;
                            if (hugs_vertex)
                                throw DegenerateInput("enumerate: secant point at a vertex");
                            // order along the line, measured from x1 toward x4
                            V3 u = v3_sub(pts[3], pts[0]);
                            double s2 = v3_dot(v3_sub(pts[1], pts[0]), u);
                            double s3 = v3_dot(v3_sub(pts[2], pts[0]), u);
                            double s4 = v3_dot(u, u);
                            bool alternating = (s3 < 0.0) && (0.0 < s4) && (s4 < s2);
                            if (!alternating) continue;
                            auto jet = colin_jet(quad, w);
                            double dj = 0;
                            if (det4_relative(jet.J, dj) < 1e-8)
                                throw DegenerateInput("enumerate: non-transverse quadrisecant");
                            Quadrisecant q;
                            for (int i = 0; i < 4; ++i) {
                                q.params[i] = quad[i].t0 + w[i] * (quad[i].t1 - quad[i].t0);
                                q.points[i] = pts[i];
                            }
                            q.residual = res;
                            q.sign = (dj > 0 ? 1 : -1) * kSignCalibration;
                            acc.found.push_back(q);
                        }
                    }
                }
            }
        } catch (const DegenerateInput& e) {
            degenerate[tid] = e.what();
            cursor.store(mids.size());
        }
    };

    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (const auto& msg : degenerate)
        if (!msg.empty()) throw DegenerateInput(msg);

    EnumPass merged;
    for (auto& loc : locals) {
        merged.checked += loc.checked;
        merged.found.insert(merged.found.end(), loc.found.begin(), loc.found.end());
    }
    std::sort(merged.found.begin(), merged.found.end(),
              [](const Quadrisecant& a, const Quadrisecant& b) { return a.params < b.params; });
    // merge duplicates within the parameter tolerance
    std::vector<Quadrisecant> dedup;
    for (const auto& q : merged.found) {
        if (!dedup.empty()) {
            double gap = 0;
            for (int i = 0; i < 4; ++i)
                gap = std::max(gap, std::abs(dedup.back().params[i] - q.params[i]));
            if (gap < opts.merge_tol) continue;
        }
        dedup.push_back(q);
    }
    merged.found = std::move(dedup);
    return merged;
}

} // namespace qdetail

// Enumerate the alternating quadrisecants of a generic long knot, retrying
// with seeded perturbations when the geometry is degenerate.
inline QuadsecReport enumerate_alternating_quadrisecants(const LongKnotPL& knot,
                                                         const QuadsecOptions& opts = {}) {
    if (knot.ambient_dim != 3)
        throw DimensionMismatch("enumerate_alternating_quadrisecants: knot must live in R^3");
    LongKnotPL geom = knot;
    double reach = reach_estimate(knot);
    std::string last;
    for (int attempt = 0; attempt <= opts.max_perturb_retries; ++attempt) {
        if (attempt > 0) {
            if (!std::isfinite(reach) || reach <= 0)
                throw DegenerateInput("enumerate_alternating_quadrisecants: no reach to perturb");
            double eps = std::min(reach / 400.0 * std::pow(2.0, attempt - 1), reach / 10.0);
            geom = perturb(knot, eps, opts.perturb_seed + std::uint64_t(attempt));
        }
        try {
            auto pass = qdetail::enumerate_once(geom, opts);
            QuadsecReport rep;
            rep.secants = std::move(pass.found);
            rep.quadruples_checked = pass.checked;
            rep.perturb_retries = attempt;
            rep.geometry = geom;
            for (const auto& q : rep.secants) rep.signed_total += q.sign;
            return rep;
        } catch (const DegenerateInput& e) {
            last = e.what();
        }
    }
    throw DegenerateInput("enumerate_alternating_quadrisecants: still degenerate after retries (" +
                          last + ")");
}

// Signed alternating-quadrisecant count; equals the degree-two invariant.
inline long long v2(const LongKnotPL& knot, const QuadsecOptions& opts = {}) {
    return enumerate_alternating_quadrisecants(knot, opts).signed_total;
}

} // namespace knotcubes
