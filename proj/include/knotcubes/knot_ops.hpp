#pragma once

#include <utility>
#include <vector>

#include "knotcubes/knot.hpp"
#include "knotcubes/operad.hpp"

namespace knotcubes {

namespace detail {

struct KnotPiece {
    Scalar lo, hi;               // parameter range occupied on the axis
    std::vector<Scalar> ts;
    std::vector<QVec> points;
};

// Conjugation by an increasing interval l: the knot is replayed inside the
// image of l with its transverse coordinates shrunk by the slope, which keeps
// the result inside the unit tube around the axis.
inline KnotPiece conjugate_piece(const AffineInc& l, const LongKnotPL& f) {
    KnotPiece piece;
    piece.lo = l.lo();
    piece.hi = l.hi();
    piece.ts.reserve(f.ts.size());
    piece.points.reserve(f.points.size());
    for (size_t k = 0; k < f.ts.size(); ++k) {
        piece.ts.push_back(l.eval(f.ts[k]));
        QVec p(f.ambient_dim);
        p[0] = l.eval(f.points[k][0]);
        for (size_t i = 1; i < f.ambient_dim; ++i) p[i] = l.a * f.points[k][i];
        piece.points.push_back(std::move(p));
    }
    return piece;
}

// Stitch parameter-disjoint pieces into one long knot on [-1,1], bridging the
// gaps along the axis.
inline LongKnotPL assemble_pieces(size_t n, std::vector<KnotPiece> pieces) {
    std::sort(pieces.begin(), pieces.end(),
              [](const KnotPiece& a, const KnotPiece& b) { return a.lo < b.lo; });
    for (size_t i = 0; i + 1 < pieces.size(); ++i)
        if (pieces[i].hi > pieces[i + 1].lo)
            throw ValidationError("assemble_pieces: pieces overlap on the axis");
    LongKnotPL out;
    out.ambient_dim = n;
    auto push = [&](const Scalar& t, QVec p) {
        if (!out.ts.empty() && out.ts.back() == t) {
            if (out.points.back() != p)
                throw ValidationError("assemble_pieces: conflicting vertices at one parameter");
            return;
        }
        out.ts.push_back(t);
        out.points.push_back(std::move(p));
    };
    auto axis_at = [&](const Scalar& t) {
        QVec p(n, Scalar(0));
        p[0] = t;
        return p;
    };
    push(Scalar(-1), axis_at(Scalar(-1)));
    for (const auto& piece : pieces) {
        if (piece.ts.front() > out.ts.back()) push(piece.ts.front(), axis_at(piece.ts.front()));
        for (size_t k = 0; k < piece.ts.size(); ++k) push(piece.ts[k], piece.points[k]);
    }
    push(Scalar(1), axis_at(Scalar(1)));
    out.validate_structure();
    out.finalize();
    return out;
}

} // namespace detail

// mu(l, f): replay f inside the interval l, standard outside.
inline LongKnotPL mu_knot(const AffineInc& l, const LongKnotPL& f) {
    if (!(l.a > 0) || l.a > 1 || l.lo() < Scalar(-1) || l.hi() > Scalar(1))
        throw ValidationError("mu_knot: interval must be an admissible little 1-cube");
    std::vector<detail::KnotPiece> pieces;
    pieces.push_back(detail::conjugate_piece(l, f));
    return detail::assemble_pieces(f.ambient_dim, std::move(pieces));
}

// Interval-operad action: plug one knot into each little interval.
inline LongKnotPL kappa_axis(const CubeConfig& c, const std::vector<LongKnotPL>& fs) {
    if (c.n != 1) throw ValidationError("kappa_axis: configuration must live in dimension 1");
    if (c.arity() != fs.size()) throw ValidationError("kappa_axis: arity mismatch");
    size_t n = fs.empty() ? 3 : fs[0].ambient_dim;
    for (const auto& f : fs)
        if (f.ambient_dim != n) throw DimensionMismatch("kappa_axis: mixed ambient dimensions");
    if (fs.empty()) return straight_knot(n);
    std::vector<detail::KnotPiece> pieces;
    pieces.reserve(fs.size());
    for (size_t i = 0; i < fs.size(); ++i)
        pieces.push_back(detail::conjugate_piece(c.cubes[i].factors[0], fs[i]));
    return detail::assemble_pieces(n, std::move(pieces));
}

// Splice two knots whose nonstandard parts occupy disjoint parameter ranges.
inline LongKnotPL disjoint_support_compose(const LongKnotPL& f, const LongKnotPL& g) {
    if (f.ambient_dim != g.ambient_dim)
        throw DimensionMismatch("disjoint_support_compose: ambient dims differ");
    auto sf = knot_support(f), sg = knot_support(g);
    if (!sf) return g;
    if (!sg) return f;
    if (std::max(sf->first, sg->first) < std::min(sf->second, sg->second))
        throw ValidationError("disjoint_support_compose: supports overlap");
    auto trim = [&](const LongKnotPL& k, const std::pair<Scalar, Scalar>& sup) {
        detail::KnotPiece piece;
        size_t a = 0;
        while (k.ts[a] < sup.first) ++a;
        size_t b = k.ts.size() - 1;
        while (k.ts[b] > sup.second) --b;
        piece.lo = k.ts[a];
        piece.hi = k.ts[b];
        piece.ts.assign(k.ts.begin() + a, k.ts.begin() + b + 1);
        piece.points.assign(k.points.begin() + a, k.points.begin() + b + 1);
        return piece;
    };
    std::vector<detail::KnotPiece> pieces{trim(f, *sf), trim(g, *sg)};
    return detail::assemble_pieces(f.ambient_dim, std::move(pieces));
}

// Connect sum along the axis: f in [-1,0], g in [0,1].
inline LongKnotPL connect_sum(const LongKnotPL& f, const LongKnotPL& g) {
    CubeConfig c{1, {LittleCube{{AffineInc{rat(1, 2), rat(-1, 2)}}},
                     LittleCube{{AffineInc{rat(1, 2), rat(1, 2)}}}}};
    return kappa_axis(c, {f, g});
}

// PL maps agree exactly: compare at the union of breakpoints (and midpoints,
// which pins the straight pieces between them).
inline bool knots_equal_exact(const LongKnotPL& f, const LongKnotPL& g) {
    if (f.ambient_dim != g.ambient_dim) return false;
    std::vector<Scalar> knots = f.ts;
    knots.insert(knots.end(), g.ts.begin(), g.ts.end());
    knots.push_back(Scalar(-1));
    knots.push_back(Scalar(1));
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<Scalar> probe = knots;
    for (size_t i = 0; i + 1 < knots.size(); ++i) probe.push_back((knots[i] + knots[i + 1]) / 2);
    for (const auto& t : probe)
        if (eval_knot_exact(f, t) != eval_knot_exact(g, t)) return false;
    return true;
}

} // namespace knotcubes
