#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "knotcubes/operad.hpp"
#include "knotcubes/rng.hpp"

namespace knotcubes {

namespace detail {

struct RatBox {
    std::vector<Scalar> lo, hi;
};

// Random sub-cube of the box: per axis pick [u,v] in sixteenths with v-u >= 1/8.
inline LittleCube cube_in_box(Rng& rng, const RatBox& box) {
    std::vector<AffineInc> fs;
    const size_t n = box.lo.size();
    fs.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        long long ku = static_cast<long long>(rng.index(7));                  // 0..6
        long long kw = 2 + static_cast<long long>(rng.index(15 - ku));        // v = (ku+kw)/16 <= 1
        Scalar u = rat(ku, 16), v = rat(ku + kw, 16);
        Scalar w = box.hi[i] - box.lo[i];
        Scalar lo = box.lo[i] + u * w;
        Scalar hi = box.lo[i] + v * w;
        fs.push_back(AffineInc{(hi - lo) / 2, (hi + lo) / 2});
    }
    return LittleCube(std::move(fs));
}

inline void place_cubes(Rng& rng, const RatBox& box, size_t count, std::vector<LittleCube>& out) {
    if (count == 0) return;
    if (count == 1) {
        out.push_back(cube_in_box(rng, box));
        return;
    }
    size_t axis = rng.index(box.lo.size());
    Scalar phi = rat(4 + static_cast<long long>(rng.index(9)), 16);  // [1/4, 3/4]
    Scalar mid = box.lo[axis] + phi * (box.hi[axis] - box.lo[axis]);
    size_t left = 1 + rng.index(count - 1);
    RatBox lbox = box, rbox = box;
    lbox.hi[axis] = mid;
    rbox.lo[axis] = mid;
    place_cubes(rng, lbox, left, out);
    place_cubes(rng, rbox, count - left, out);
}

} // namespace detail

inline CubeConfig random_config(Rng& rng, size_t n, size_t arity) {
    detail::RatBox box;
    box.lo.assign(n, Scalar(-1));
    box.hi.assign(n, Scalar(1));
    std::vector<LittleCube> cubes;
    detail::place_cubes(rng, box, arity, cubes);
    return CubeConfig(n, std::move(cubes));
}

inline std::vector<size_t> compose_perm(const std::vector<size_t>& s, const std::vector<size_t>& t) {
    std::vector<size_t> r(t.size());
    for (size_t i = 0; i < t.size(); ++i) r[i] = s[t[i]];
    return r;
}

struct LawReport {
    const char* name = "";
    size_t cases = 0;
    size_t failures = 0;
    double seconds = 0;
    bool ok() const { return failures == 0 && cases > 0; }
};

// Unit law: composing with identity configurations changes nothing.
inline LawReport check_operad_unit(std::uint64_t seed, size_t cases, size_t max_dim = 3) {
    LawReport rep{"unit"};
    Rng rng(seed);
    auto t0 = std::chrono::steady_clock::now();
    for (size_t k = 0; k < cases; ++k) {
        size_t n = 1 + rng.index(max_dim);
        size_t j = 1 + rng.index(4);
        CubeConfig c = random_config(rng, n, j);
        std::vector<CubeConfig> ids(j, CubeConfig::single_identity(n));
        bool good = operad_compose(c, ids) == c &&
                    operad_compose(CubeConfig::single_identity(n), {c}) == c;
        ++rep.cases;
        if (!good) ++rep.failures;
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// Associativity of nested composition, checked bit-exactly.
inline LawReport check_operad_associativity(std::uint64_t seed, size_t cases, size_t max_dim = 3) {
    LawReport rep{"associativity"};
    Rng rng(seed);
    auto t0 = std::chrono::steady_clock::now();
    for (size_t k = 0; k < cases; ++k) {
        size_t n = 1 + rng.index(max_dim);
        size_t j = 1 + rng.index(3);
        CubeConfig a = random_config(rng, n, j);
        std::vector<CubeConfig> b;
        std::vector<CubeConfig> inner_flat;
        std::vector<CubeConfig> b_into_c;
        for (size_t i = 0; i < j; ++i) b.push_back(random_config(rng, n, 1 + rng.index(3)));
        for (size_t i = 0; i < j; ++i) {
            std::vector<CubeConfig> ci;
            for (size_t s = 0; s < b[i].arity(); ++s) {
                ci.push_back(random_config(rng, n, 1 + rng.index(2)));
                inner_flat.push_back(ci.back());
            }
            b_into_c.push_back(operad_compose(b[i], ci));
        }
        CubeConfig lhs = operad_compose(operad_compose(a, b), inner_flat);
        CubeConfig rhs = operad_compose(a, b_into_c);
        ++rep.cases;
        if (!(lhs == rhs)) ++rep.failures;
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// Equivariance: outer reindexing matches the induced block permutation, inner
// reindexing matches the direct sum; also the right-action composition law.
inline LawReport check_operad_equivariance(std::uint64_t seed, size_t cases, size_t max_dim = 3) {
    LawReport rep{"equivariance"};
    Rng rng(seed);
    auto t0 = std::chrono::steady_clock::now();
    for (size_t k = 0; k < cases; ++k) {
        size_t n = 1 + rng.index(max_dim);
        size_t j = 1 + rng.index(3);
        CubeConfig c = random_config(rng, n, j);
        std::vector<CubeConfig> d;
        for (size_t i = 0; i < j; ++i) d.push_back(random_config(rng, n, 1 + rng.index(3)));
        std::vector<size_t> sigma = rng.permutation(j);
        std::vector<size_t> sigma_inv(j);
        for (size_t i = 0; i < j; ++i) sigma_inv[sigma[i]] = i;

        // gamma(c.sigma; d) == block_perm(sigma) applied to gamma(c; d_{sigma^{-1}(.)})
        std::vector<CubeConfig> e(j);
        std::vector<size_t> sizes(j);
        for (size_t p = 0; p < j; ++p) {
            e[p] = d[sigma_inv[p]];
            sizes[p] = e[p].arity();
        }
        CubeConfig lhs = operad_compose(symmetric_action(sigma, c), d);
        CubeConfig rhs = symmetric_action(block_permutation(sigma, sizes), operad_compose(c, e));
        bool good = lhs == rhs;

        // inner equivariance: permuting one inner block permutes the slice
        size_t pick = rng.index(j);
        std::vector<size_t> tau = rng.permutation(d[pick].arity());
        std::vector<CubeConfig> d2 = d;
        d2[pick] = symmetric_action(tau, d[pick]);
        std::vector<size_t> direct_sum;
        size_t off = 0;
        for (size_t i = 0; i < j; ++i) {
            for (size_t s = 0; s < d[i].arity(); ++s)
                direct_sum.push_back(off + (i == pick ? tau[s] : s));
            off += d[i].arity();
        }
        good = good && operad_compose(c, d2) == symmetric_action(direct_sum, operad_compose(c, d));

        // right action composes contravariantly on indices: (c.s).t = c.(s∘t)
        std::vector<size_t> tau2 = rng.permutation(j);
        good = good && symmetric_action(tau2, symmetric_action(sigma, c)) ==
                           symmetric_action(compose_perm(sigma, tau2), c);

        ++rep.cases;
        if (!good) ++rep.failures;
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

struct OperadSelfcheck {
    LawReport unit, associativity, equivariance;
    bool ok() const { return unit.ok() && associativity.ok() && equivariance.ok(); }
    double seconds() const { return unit.seconds + associativity.seconds + equivariance.seconds; }
};

inline OperadSelfcheck run_operad_selfcheck(std::uint64_t seed, size_t cases_per_law) {
    OperadSelfcheck s;
    s.unit = check_operad_unit(seed ^ 0x9e3779b97f4a7c15ull, cases_per_law);
    s.associativity = check_operad_associativity(seed ^ 0xbf58476d1ce4e5b9ull, cases_per_law);
    s.equivariance = check_operad_equivariance(seed ^ 0x94d049bb133111ebull, cases_per_law);
    return s;
}

} // namespace knotcubes
