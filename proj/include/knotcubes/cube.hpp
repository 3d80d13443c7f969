#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "knotcubes/errors.hpp"
#include "knotcubes/rational.hpp"
#include "knotcubes/vec.hpp"

namespace knotcubes {

// One increasing affine factor t -> a*t + b.
struct AffineInc {
    Scalar a{1};
    Scalar b{0};

    Scalar eval(const Scalar& t) const { return a * t + b; }
    double eval(double t) const { return to_double(a) * t + to_double(b); }

    Scalar lo() const { return b - a; }  // image of -1
    Scalar hi() const { return b + a; }  // image of +1

    // this∘other, i.e. t -> this(other(t))
    AffineInc compose(const AffineInc& other) const { return {a * other.a, a * other.b + b}; }

    AffineInc inverse() const {
        if (a == 0) throw ValidationError("AffineInc::inverse: zero slope");
        return {Scalar(1) / a, -b / a};
    }

    bool operator==(const AffineInc& o) const { return a == o.a && b == o.b; }
    bool operator!=(const AffineInc& o) const { return !(*this == o); }
};

// Product of increasing affine factors, one per axis. Slopes lie in (0,1]
// and the image of I^n stays inside I^n, so the identity cube is admissible
// and every cube is invertible as an affine map.
struct LittleCube {
    std::vector<AffineInc> factors;

    LittleCube() = default;
    explicit LittleCube(std::vector<AffineInc> f) : factors(std::move(f)) { validate(); }

    static LittleCube identity(size_t n) {
        LittleCube c;
        c.factors.assign(n, AffineInc{});
        return c;
    }

    size_t dim() const { return factors.size(); }

    void validate() const {
        if (factors.empty()) throw ValidationError("LittleCube: zero factors");
        for (size_t i = 0; i < factors.size(); ++i) {
            const auto& f = factors[i];
            if (!(f.a > 0) || f.a > 1)
                throw ValidationError("LittleCube: slope out of (0,1] on axis " + std::to_string(i));
            if (f.lo() < -1 || f.hi() > 1)
                throw ValidationError("LittleCube: image leaves [-1,1] on axis " + std::to_string(i));
        }
    }

    bool operator==(const LittleCube& o) const { return factors == o.factors; }
    bool operator!=(const LittleCube& o) const { return !(*this == o); }
};

// Increasing factorwise affine automorphisms taking I^n inside itself form
// a monoid under composition; the element data coincides with LittleCube.
using CAutElement = LittleCube;

inline QVec cube_apply(const LittleCube& c, const QVec& x) {
    if (x.size() != c.dim()) throw DimensionMismatch("cube_apply: point dim != cube dim");
    QVec y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = c.factors[i].eval(x[i]);
    return y;
}

inline DVec cube_apply(const LittleCube& c, const DVec& x) {
    if (x.size() != c.dim()) throw DimensionMismatch("cube_apply: point dim != cube dim");
    DVec y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = c.factors[i].eval(x[i]);
    return y;
}

// Factorwise composition L∘M (apply M first).
inline LittleCube cube_compose(const LittleCube& L, const LittleCube& M) {
    if (L.dim() != M.dim()) throw DimensionMismatch("cube_compose: dim mismatch");
    LittleCube r;
    r.factors.reserve(L.dim());
    for (size_t i = 0; i < L.dim(); ++i) r.factors.push_back(L.factors[i].compose(M.factors[i]));
    r.validate();
    return r;
}

// Affine inverse per factor. Slopes 1/a may exceed 1, so the result is a bare
// factor list rather than a LittleCube; it is what conjugation needs.
inline std::vector<AffineInc> cube_inverse(const LittleCube& c) {
    std::vector<AffineInc> inv;
    inv.reserve(c.dim());
    for (const auto& f : c.factors) inv.push_back(f.inverse());
    return inv;
}

inline QVec apply_factors(const std::vector<AffineInc>& fs, const QVec& x) {
    if (x.size() != fs.size()) throw DimensionMismatch("apply_factors: dim mismatch");
    QVec y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = fs[i].eval(x[i]);
    return y;
}

inline DVec apply_factors(const std::vector<AffineInc>& fs, const DVec& x) {
    if (x.size() != fs.size()) throw DimensionMismatch("apply_factors: dim mismatch");
    DVec y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = fs[i].eval(x[i]);
    return y;
}

// Open images disjoint: some axis separates them (shared boundary allowed).
inline bool cubes_disjoint(const LittleCube& L, const LittleCube& M) {
    if (L.dim() != M.dim()) throw DimensionMismatch("cubes_disjoint: dim mismatch");
    for (size_t i = 0; i < L.dim(); ++i) {
        if (L.factors[i].hi() <= M.factors[i].lo() || M.factors[i].hi() <= L.factors[i].lo())
            return true;
    }
    return false;
}

// Drop one factor (by default the last) and report its height, the image of -1.
struct CubeProjection {
    LittleCube base;
    Scalar height;
};

inline CubeProjection cube_project(const LittleCube& c, size_t axis) {
    if (c.dim() < 2) throw ValidationError("cube_project: need dim >= 2");
    if (axis >= c.dim()) throw ValidationError("cube_project: axis out of range");
    CubeProjection p;
    p.height = c.factors[axis].eval(Scalar(-1));
    p.base.factors.reserve(c.dim() - 1);
    for (size_t i = 0; i < c.dim(); ++i)
        if (i != axis) p.base.factors.push_back(c.factors[i]);
    p.base.validate();
    return p;
}

inline CubeProjection cube_project(const LittleCube& c) { return cube_project(c, c.dim() - 1); }

} // namespace knotcubes
