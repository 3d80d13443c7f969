#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "knotcubes/cube.hpp"

namespace knotcubes {

// Ordered tuple of pairwise disjoint little n-cubes. The empty tuple is the
// single point of the arity-0 space, so the ambient dimension is stored.
struct CubeConfig {
    size_t n = 0;
    std::vector<LittleCube> cubes;

    CubeConfig() = default;
    CubeConfig(size_t dim, std::vector<LittleCube> cs) : n(dim), cubes(std::move(cs)) { validate(); }

    static CubeConfig empty(size_t dim) { return CubeConfig(dim, {}); }

    static CubeConfig single_identity(size_t dim) {
        return CubeConfig(dim, {LittleCube::identity(dim)});
    }

    size_t arity() const { return cubes.size(); }

    void validate() const {
        if (n == 0) throw ValidationError("CubeConfig: ambient dimension must be positive");
        for (size_t i = 0; i < cubes.size(); ++i) {
            cubes[i].validate();
            if (cubes[i].dim() != n)
                throw DimensionMismatch("CubeConfig: cube " + std::to_string(i) + " has wrong dimension");
        }
        for (size_t i = 0; i < cubes.size(); ++i)
            for (size_t j = i + 1; j < cubes.size(); ++j)
                if (!cubes_disjoint(cubes[i], cubes[j]))
                    throw ValidationError("CubeConfig: cubes " + std::to_string(i) + " and " +
                                          std::to_string(j) + " have overlapping interiors");
    }

    bool operator==(const CubeConfig& o) const { return n == o.n && cubes == o.cubes; }
    bool operator!=(const CubeConfig& o) const { return !(*this == o); }
};

// Operadic composition: plug inners[i] into the i-th cube of outer.
inline CubeConfig operad_compose(const CubeConfig& outer, const std::vector<CubeConfig>& inners) {
    if (inners.size() != outer.arity())
        throw ValidationError("operad_compose: need one inner configuration per outer cube");
    CubeConfig r;
    r.n = outer.n;
    for (size_t i = 0; i < outer.arity(); ++i) {
        if (inners[i].n != outer.n) throw DimensionMismatch("operad_compose: inner dimension mismatch");
        for (const auto& c : inners[i].cubes) r.cubes.push_back(cube_compose(outer.cubes[i], c));
    }
    r.validate();
    return r;
}

inline bool is_permutation(const std::vector<size_t>& p) {
    std::vector<bool> seen(p.size(), false);
    for (size_t v : p) {
        if (v >= p.size() || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

// Right action by reindexing: result cube i is cubes[sigma[i]].
inline CubeConfig symmetric_action(const std::vector<size_t>& sigma, const CubeConfig& c) {
    if (sigma.size() != c.arity()) throw ValidationError("symmetric_action: permutation size mismatch");
    if (!is_permutation(sigma)) throw ValidationError("symmetric_action: not a permutation");
    CubeConfig r;
    r.n = c.n;
    r.cubes.reserve(c.arity());
    for (size_t i = 0; i < sigma.size(); ++i) r.cubes.push_back(c.cubes[sigma[i]]);
    return r;
}

// sigma with sigma[k] = index of the k-th lowest cube by height on the given
// axis (image of -1). Stable: ties keep original order; tied cubes overlap in
// that axis interval, hence are disjoint in the others and commute downstream.
inline std::vector<size_t> height_permutation(const CubeConfig& c, size_t axis) {
    if (c.arity() > 0 && axis >= c.n) throw ValidationError("height_permutation: axis out of range");
    std::vector<size_t> idx(c.arity());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](size_t i, size_t j) {
        return c.cubes[i].factors[axis].eval(Scalar(-1)) < c.cubes[j].factors[axis].eval(Scalar(-1));
    });
    return idx;
}

inline std::vector<size_t> height_permutation(const CubeConfig& c) {
    if (c.arity() == 0) return {};
    return height_permutation(c, c.n - 1);
}

// Permutation of sum(sizes) elements that permutes blocks by sigma while
// keeping each block internally ordered; the equivariance law needs it.
inline std::vector<size_t> block_permutation(const std::vector<size_t>& sigma,
                                             const std::vector<size_t>& sizes) {
    if (sigma.size() != sizes.size()) throw ValidationError("block_permutation: size mismatch");
    std::vector<size_t> offset(sizes.size(), 0);
    for (size_t i = 1; i < sizes.size(); ++i) offset[i] = offset[i - 1] + sizes[i - 1];
    std::vector<size_t> out;
    for (size_t i = 0; i < sigma.size(); ++i)
        for (size_t k = 0; k < sizes[sigma[i]]; ++k) out.push_back(offset[sigma[i]] + k);
    return out;
}

} // namespace knotcubes
