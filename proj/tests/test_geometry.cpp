#include <catch2/catch_amalgamated.hpp>

#include "knotcubes/cube.hpp"
#include "knotcubes/operad.hpp"
#include "knotcubes/operad_laws.hpp"

using namespace knotcubes;

TEST_CASE("rational parse and format round-trip", "[geometry]") {
    CHECK(parse_rational("3/4") == rat(3, 4));
    CHECK(parse_rational("-3/4") == rat(-3, 4));
    CHECK(parse_rational("6/8") == rat(3, 4));
    CHECK(parse_rational("2") == Scalar(2));
    CHECK(format_rational(rat(-6, 8)) == "-3/4");
    CHECK(format_rational(Scalar(5)) == "5");
    CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
    CHECK_THROWS_AS(parse_rational("a/b"), ValidationError);
    CHECK_THROWS_AS(parse_rational(""), ValidationError);
}

TEST_CASE("doubles convert to rationals exactly", "[geometry]") {
    double x = 0.1 + 0.2;
    CHECK(to_double(exact(x)) == x);
    CHECK(exact(0.5) == rat(1, 2));
    CHECK(exact(-0.375) == rat(-3, 8));
}

TEST_CASE("affine factor algebra", "[geometry]") {
    AffineInc f{rat(1, 2), rat(1, 4)};
    CHECK(f.eval(Scalar(1)) == rat(3, 4));
    CHECK(f.eval(Scalar(-1)) == rat(-1, 4));
    AffineInc g{rat(1, 3), rat(-1, 3)};
    AffineInc fg = f.compose(g);
    Scalar t = rat(2, 7);
    CHECK(fg.eval(t) == f.eval(g.eval(t)));
    AffineInc finv = f.inverse();
    CHECK(finv.compose(f).eval(t) == t);
    CHECK(f.compose(finv).eval(t) == t);
}

TEST_CASE("little cube validation enforces slopes and image", "[geometry]") {
    CHECK_NOTHROW(LittleCube({AffineInc{Scalar(1), Scalar(0)}}));        // identity is admissible
    CHECK_NOTHROW(LittleCube({AffineInc{rat(1, 2), rat(1, 2)}}));        // touches the boundary
    CHECK_THROWS_AS(LittleCube({AffineInc{Scalar(0), Scalar(0)}}), ValidationError);
    CHECK_THROWS_AS(LittleCube({AffineInc{rat(-1, 2), Scalar(0)}}), ValidationError);
    CHECK_THROWS_AS(LittleCube({AffineInc{rat(3, 2), Scalar(0)}}), ValidationError);
    CHECK_THROWS_AS(LittleCube({AffineInc{rat(1, 2), rat(3, 4)}}), ValidationError);
}

TEST_CASE("cube apply maps corners of I^n into I^n", "[geometry]") {
    Rng rng(7);
    for (int k = 0; k < 50; ++k) {
        size_t n = 1 + rng.index(3);
        CubeConfig c = random_config(rng, n, 1);
        const LittleCube& L = c.cubes[0];
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            QVec corner(n);
            for (size_t i = 0; i < n; ++i) corner[i] = (mask >> i) & 1 ? Scalar(1) : Scalar(-1);
            QVec img = cube_apply(L, corner);
            for (size_t i = 0; i < n; ++i) {
                CHECK(img[i] >= Scalar(-1));
                CHECK(img[i] <= Scalar(1));
            }
        }
    }
}

TEST_CASE("cube compose and inverse cancel exactly", "[geometry]") {
    Rng rng(11);
    for (int k = 0; k < 50; ++k) {
        size_t n = 1 + rng.index(3);
        LittleCube L = random_config(rng, n, 1).cubes[0];
        LittleCube M = random_config(rng, n, 1).cubes[0];
        LittleCube LM = cube_compose(L, M);
        QVec x(n);
        for (size_t i = 0; i < n; ++i) x[i] = rng.rational_unit(9);
        CHECK(cube_apply(LM, x) == cube_apply(L, cube_apply(M, x)));
        auto Linv = cube_inverse(L);
        CHECK(apply_factors(Linv, cube_apply(L, x)) == x);
    }
}

TEST_CASE("monoid composition stays in the monoid", "[geometry]") {
    // slopes multiply and images nest, so composites validate
    Rng rng(13);
    for (int k = 0; k < 30; ++k) {
        LittleCube L = random_config(rng, 2, 1).cubes[0];
        LittleCube M = random_config(rng, 2, 1).cubes[0];
        CHECK_NOTHROW(cube_compose(L, M).validate());
    }
}

TEST_CASE("disjointness detects separation and sharing an edge is fine", "[geometry]") {
    LittleCube A({AffineInc{rat(1, 4), rat(-1, 2)}, AffineInc{rat(1, 4), Scalar(0)}});
    LittleCube B({AffineInc{rat(1, 4), rat(1, 2)}, AffineInc{rat(1, 4), Scalar(0)}});
    CHECK(cubes_disjoint(A, B));  // separated on axis 0
    LittleCube C({AffineInc{rat(1, 4), Scalar(0)}, AffineInc{rat(1, 4), Scalar(0)}});
    CHECK(cubes_disjoint(A, C));  // images touch at x = -1/4 only
    LittleCube D({AffineInc{rat(1, 2), rat(-1, 4)}, AffineInc{rat(1, 2), Scalar(0)}});
    CHECK_FALSE(cubes_disjoint(A, D));
}

TEST_CASE("cube projection drops a factor and reports its height", "[geometry]") {
    LittleCube L({AffineInc{rat(1, 2), rat(1, 4)}, AffineInc{rat(1, 3), rat(-1, 6)},
                  AffineInc{rat(1, 5), rat(2, 5)}});
    auto pr = cube_project(L);
    CHECK(pr.base.dim() == 2);
    CHECK(pr.base.factors[0] == L.factors[0]);
    CHECK(pr.base.factors[1] == L.factors[1]);
    CHECK(pr.height == rat(1, 5));  // 2/5 - 1/5
    auto pr0 = cube_project(L, 0);
    CHECK(pr0.height == rat(-1, 4));
    CHECK(pr0.base.factors[0] == L.factors[1]);
}

TEST_CASE("config validation rejects overlaps", "[operad]") {
    LittleCube A({AffineInc{rat(1, 2), Scalar(0)}});
    LittleCube B({AffineInc{rat(1, 2), rat(1, 4)}});
    CHECK_THROWS_AS(CubeConfig(1, {A, B}), ValidationError);
    LittleCube C({AffineInc{rat(1, 4), rat(3, 4)}});
    CHECK_NOTHROW(CubeConfig(1, {LittleCube({AffineInc{rat(1, 2), rat(-1, 2)}}), C}));
    CHECK_NOTHROW(CubeConfig::empty(2));
}

TEST_CASE("height permutation sorts by the last-axis bottom, stably", "[operad]") {
    // heights -1/2, 1/4, -1/8  ->  order 0, 2, 1
    auto mk = [](Scalar lo, Scalar hi, Scalar xlo, Scalar xhi) {
        return LittleCube({AffineInc{(xhi - xlo) / 2, (xhi + xlo) / 2},
                           AffineInc{(hi - lo) / 2, (hi + lo) / 2}});
    };
    CubeConfig c(2, {mk(rat(-1, 2), rat(0, 1), rat(-1, 1), rat(-1, 2)),
                     mk(rat(1, 4), rat(3, 4), rat(-1, 4), rat(1, 4)),
                     mk(rat(-1, 8), rat(1, 8), rat(1, 2), rat(1, 1))});
    auto sigma = height_permutation(c);
    CHECK(sigma == std::vector<size_t>{0, 2, 1});

    // ties keep original order
    CubeConfig tied(2, {mk(rat(-1, 2), rat(0, 1), rat(-1, 1), rat(-1, 2)),
                        mk(rat(-1, 2), rat(0, 1), rat(0, 1), rat(1, 2))});
    CHECK(height_permutation(tied) == std::vector<size_t>{0, 1});
}

TEST_CASE("operad laws hold bit-exactly on seeded configurations", "[operad]") {
    auto s = run_operad_selfcheck(20260822, 60);
    CHECK(s.unit.ok());
    CHECK(s.associativity.ok());
    CHECK(s.equivariance.ok());
}

TEST_CASE("symmetric action needs a genuine permutation", "[operad]") {
    Rng rng(3);
    CubeConfig c = random_config(rng, 2, 3);
    CHECK_THROWS_AS(symmetric_action({0, 0, 1}, c), ValidationError);
    CHECK_THROWS_AS(symmetric_action({0, 1}, c), ValidationError);
    CHECK(symmetric_action({2, 0, 1}, c).cubes[0] == c.cubes[2]);
}
