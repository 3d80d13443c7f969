#pragma once

#include <cstdint>
#include <random>

#include "knotcubes/rational.hpp"
#include "knotcubes/vec.hpp"

namespace knotcubes {

// Seeded generator with hand-rolled draws; std distributions are
// implementation-defined, these are reproducible everywhere.
struct Rng {
    std::mt19937_64 eng;

    explicit Rng(std::uint64_t seed) : eng(seed) {}

    std::uint64_t bits() { return eng(); }

    // uniform in [0,1)
    double u01() { return static_cast<double>(eng() >> 11) * 0x1p-53; }

    // uniform in [lo,hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // uniform integer in [0,n)
    std::uint64_t index(std::uint64_t n) { return eng() % n; }

    // uniform rational p/q with 1 <= q <= max_den, |p/q| <= 1
    Scalar rational_unit(unsigned max_den) {
        unsigned q = 1 + static_cast<unsigned>(index(max_den));
        long long p = static_cast<long long>(index(2 * q + 1)) - static_cast<long long>(q);
        return rat(p, q);
    }

    // uniform rational in (0,1]
    Scalar rational_pos_unit(unsigned max_den) {
        unsigned q = 1 + static_cast<unsigned>(index(max_den));
        long long p = 1 + static_cast<long long>(index(q));
        return rat(p, q);
    }

    DVec in_ball(size_t dim) {
        // rejection from the cube
        while (true) {
            DVec v(dim);
            double s = 0;
            for (auto& x : v) {
                x = uniform(-1.0, 1.0);
                s += x * x;
            }
            if (s <= 1.0 && s > 1e-12) return v;
        }
    }

    std::vector<size_t> permutation(size_t n) {
        std::vector<size_t> p(n);
        for (size_t i = 0; i < n; ++i) p[i] = i;
        for (size_t i = n; i > 1; --i) std::swap(p[i - 1], p[index(i)]);
        return p;
    }
};

} // namespace knotcubes
