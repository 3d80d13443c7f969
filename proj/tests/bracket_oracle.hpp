#pragma once

// Test-only reference: Kauffman bracket state sum over diagrams produced by
// extract_diagram, normalized to the Jones polynomial in the variable A.
// Independent of everything the quadrisecant pipeline does; used to pin knot
// types, handedness, and the degree-two coefficient.

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "knotcubes/gauss_oracle.hpp"
#include "knotcubes/knot.hpp"

namespace knotcubes::testoracle {

using Laurent = std::map<int, long long>;  // exponent of A -> integer coeff

inline void laurent_add(Laurent& p, int e, long long c) {
    auto it = p.emplace(e, 0).first;
    it->second += c;
    if (it->second == 0) p.erase(it);
}

inline Laurent laurent_mul(const Laurent& p, const Laurent& q) {
    Laurent r;
    for (const auto& [e1, c1] : p)
        for (const auto& [e2, c2] : q) laurent_add(r, e1 + e2, c1 * c2);
    return r;
}

struct UnionFind {
    std::vector<size_t> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    size_t find(size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

// Bracket of the closed-up diagram. Ends per crossing c: 4c+0 in_over,
// 4c+1 out_over, 4c+2 in_under, 4c+3 out_under.
inline Laurent kauffman_bracket(const KnotDiagram& dia) {
    const size_t C = dia.crossings.size();
    if (C == 0) return {{0, 1}};
    if (C > 20) throw std::runtime_error("kauffman_bracket: diagram too large for the state sum");
    const size_t visits = 2 * C;
    std::vector<std::pair<size_t, bool>> evt(visits);  // (crossing, over?)
    for (size_t c = 0; c < C; ++c) {
        evt[dia.crossings[c].over_pos] = {c, true};
        evt[dia.crossings[c].under_pos] = {c, false};
    }
    // d^k with d = -A^2 - A^-2
    std::vector<Laurent> dpow(visits + 1);
    dpow[0] = {{0, 1}};
    Laurent d{{2, -1}, {-2, -1}};
    for (size_t k = 1; k <= visits; ++k) dpow[k] = laurent_mul(dpow[k - 1], d);

    Laurent bracket;
    for (std::uint64_t state = 0; state < (std::uint64_t(1) << C); ++state) {
        UnionFind uf(4 * C);
        for (size_t k = 0; k < visits; ++k) {
            auto [c1, over1] = evt[k];
            auto [c2, over2] = evt[(k + 1) % visits];
            size_t out1 = 4 * c1 + (over1 ? 1 : 3);
            size_t in2 = 4 * c2 + (over2 ? 0 : 2);
            uf.unite(out1, in2);
        }
        int a_count = 0;
        for (size_t c = 0; c < C; ++c) {
            bool pick_a = ((state >> c) & 1) == 0;
            if (pick_a) ++a_count;
            bool oriented = pick_a == (dia.crossings[c].sign > 0);
            if (oriented) {
                uf.unite(4 * c + 0, 4 * c + 3);  // in_over - out_under
                uf.unite(4 * c + 2, 4 * c + 1);  // in_under - out_over
            } else {
                uf.unite(4 * c + 0, 4 * c + 2);  // in_over - in_under
                uf.unite(4 * c + 1, 4 * c + 3);  // out_over - out_under
            }
        }
        size_t loops = 0;
        for (size_t x = 0; x < 4 * C; ++x)
            if (uf.find(x) == x) ++loops;
        int exp = a_count - int(C - a_count);
        for (const auto& [e, cf] : dpow[loops - 1]) laurent_add(bracket, e + exp, cf);
    }
    return bracket;
}

// Jones polynomial in A: (-A^3)^{-w} <K|.
inline Laurent jones_in_a(const KnotDiagram& dia) {
    int w = 0;
    for (const auto& c : dia.crossings) w += c.sign;
    Laurent f;
    long long sign = (w % 2 == 0) ? 1 : -1;
    for (const auto& [e, cf] : kauffman_bracket(dia)) laurent_add(f, e - 3 * w, sign * cf);
    return f;
}

struct JonesReport {
    Laurent f;
    long long a2 = 0;
};

// Evaluate on agreeing generic projections; P(1)=1 and P'(1)=0 are hard
// sanity checks, and a2 = -P''(1)/96 must come out integral.
inline JonesReport jones_report(const LongKnotPL& knot, std::uint64_t seed = 77,
                                size_t directions = 2) {
    Rng rng(seed);
    std::optional<Laurent> agreed;
    size_t got = 0;
    for (int tries = 0; tries < 400 && got < directions; ++tries) {
        double tilt = 0.04 + 0.10 * rng.u01();
        double phi = 2 * 3.14159265358979323846 * rng.u01();
        V3 view{tilt * std::cos(phi), tilt * std::sin(phi), 1.0};
        auto dia = extract_diagram(knot, view);
        if (!dia) continue;
        if (dia->crossings.size() > 20) continue;
        Laurent f = jones_in_a(*dia);
        if (agreed && *agreed != f)
            throw std::runtime_error("jones_report: projections disagree");
        agreed = f;
        ++got;
    }
    if (got < directions) throw std::runtime_error("jones_report: no generic projection found");
    long long p1 = 0, dp1 = 0, ddp1 = 0;
    for (const auto& [e, c] : *agreed) {
        p1 += c;
        dp1 += (long long)e * c;
        ddp1 += (long long)e * (e - 1) * c;
    }
    if (p1 != 1) throw std::runtime_error("jones_report: P(1) != 1");
    if (dp1 != 0) throw std::runtime_error("jones_report: P'(1) != 0");
    if (ddp1 % 96 != 0) throw std::runtime_error("jones_report: P''(1) not divisible by 96");
    JonesReport rep;
    rep.f = *agreed;
    rep.a2 = -ddp1 / 96;
    return rep;
}

} // namespace knotcubes::testoracle
