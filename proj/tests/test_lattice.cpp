#include <catch2/catch_amalgamated.hpp>

#include "wittrace/abelian.hpp"
#include "wittrace/rng.hpp"
#include "wittrace/snf.hpp"

#include "oracles.hpp"

using namespace wittrace;

namespace {

IntMat random_matrix(Rng& rng, std::size_t rows, std::size_t cols, long lo, long hi) {
    IntMat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform_int(lo, hi);
    return m;
}

}  // namespace

TEST_CASE("smith normal form: pinned examples") {
    SECTION("diag(2,3) has invariant factors 1, 6") {
        IntMat a{{2, 0}, {0, 3}};
        auto s = smith_normal_form(a);
        REQUIRE(s.D(0, 0) == 1);
        REQUIRE(s.D(1, 1) == 6);
        REQUIRE(s.U * a * s.V == s.D);
        // independent oracle: gcds of i x i minors
        auto inv = oracles::invariant_factors_by_minors(a);
        REQUIRE(inv == std::vector<Int>{1, 6});
    }
    SECTION("zero matrix is fixed") {
        IntMat a(2, 2);
        auto s = smith_normal_form(a);
        REQUIRE(s.D == a);
    }
    SECTION("identity 1x1") {
        IntMat a{{1}};
        auto s = smith_normal_form(a);
        REQUIRE(s.D == IntMat{{1}});
        REQUIRE(s.U == IntMat{{1}});
        REQUIRE(s.V == IntMat{{1}});
    }
}

TEST_CASE("smith normal form: round trip and divisibility on random matrices") {
    Rng rng(20240811);
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t m = static_cast<std::size_t>(rng.uniform(0, 8));
        std::size_t n = static_cast<std::size_t>(rng.uniform(0, 8));
        IntMat a = random_matrix(rng, m, n, -50, 50);
        auto s = smith_normal_form(a);
        REQUIRE(s.U * a * s.V == s.D);
        REQUIRE(s.U * s.U_inv == IntMat::identity(m));
        auto d = s.diagonal();
        for (std::size_t i = 0; i + 1 < d.size(); ++i) {
            REQUIRE(d[i] >= 0);
            if (d[i + 1] != 0) {
                REQUIRE(d[i] != 0);
                REQUIRE(d[i + 1] % d[i] == 0);
            }
        }
        for (std::size_t i = 0; i < s.D.rows(); ++i)
            for (std::size_t j = 0; j < s.D.cols(); ++j)
                if (i != j) REQUIRE(s.D(i, j) == 0);
    }
}

TEST_CASE("smith normal form agrees with the determinant-divisor oracle") {
    Rng rng(7);
    for (int trial = 0; trial < 80; ++trial) {
        std::size_t m = static_cast<std::size_t>(rng.uniform(1, 5));
        std::size_t n = static_cast<std::size_t>(rng.uniform(1, 5));
        IntMat a = random_matrix(rng, m, n, -9, 9);
        auto inv = oracles::invariant_factors_by_minors(a);
        auto d = smith_normal_form(a).diagonal();
        REQUIRE(d == inv);
    }
}

TEST_CASE("cokernel: pinned examples") {
    SECTION("Z/4") {
        auto p = cokernel(IntMat{{4}});
        REQUIRE(p.group.factors() == std::vector<Int>{4});
    }
    SECTION("Z/6 from diag(2,3)") {
        auto p = cokernel(IntMat{{2, 0}, {0, 3}});
        REQUIRE(p.group.factors() == std::vector<Int>{6});
    }
    SECTION("free of rank 2 from no relations") {
        auto p = cokernel(IntMat(2, 0));
        REQUIRE(p.group.factors() == std::vector<Int>(2, Int(0)));
    }
}

TEST_CASE("cokernel conversion matrices round trip") {
    Rng rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t m = static_cast<std::size_t>(rng.uniform(1, 6));
        std::size_t n = static_cast<std::size_t>(rng.uniform(0, 6));
        IntMat a = random_matrix(rng, m, n, -12, 12);
        Presentation p = cokernel(a);

        // to_normal ∘ from_normal = identity exactly
        REQUIRE(p.to_normal * p.from_normal == IntMat::identity(p.group.rank()));

        // from_normal ∘ to_normal = identity modulo the relation lattice
        LinearSolver membership(a);
        for (int k = 0; k < 10; ++k) {
            std::vector<Int> x(m);
            for (auto& c : x) c = rng.uniform_int(-20, 20);
            std::vector<Int> y = p.lift(p.project(x));
            std::vector<Int> diff(m);
            for (std::size_t i = 0; i < m; ++i) diff[i] = x[i] - y[i];
            REQUIRE(membership.contains(diff));
        }
    }
}

TEST_CASE("solve: pinned examples") {
    SECTION("2x = 1 over Z has no solution") {
        auto r = solve_modular(IntMat{{2}}, {Int(1)}, {Int(0)});
        REQUIRE(!r.solution.has_value());
    }
    SECTION("2x = 0 mod 4 has solutions {0, 2}") {
        // exhaustive oracle over Z/4
        std::vector<Int> expected;
        for (int x = 0; x < 4; ++x)
            if ((2 * x) % 4 == 0) expected.push_back(x);
        REQUIRE(expected == std::vector<Int>{0, 2});

        LinearSolver s(IntMat{{2}}, {Int(4)});
        auto sol = s.solve({Int(0)});
        REQUIRE(sol.has_value());
        // the solution set mod 4 spanned by the lattice must be {0, 2}
        std::vector<Int> seen;
        const IntMat& lat = s.lattice();
        REQUIRE(lat.rows() == 1);
        Int g = 0;
        for (std::size_t j = 0; j < lat.cols(); ++j) g = gcd(g, lat(0, j));
        REQUIRE(mod_reduce(g, Int(4)) == 2);
    }
    SECTION("identity system returns b") {
        LinearSolver s(IntMat::identity(3));
        auto sol = s.solve({Int(5), Int(-7), Int(0)});
        REQUIRE(sol.has_value());
        REQUIRE(*sol == std::vector<Int>{5, -7, 0});
    }
}

TEST_CASE("solve: random modular systems verified by substitution") {
    Rng rng(4242);
    for (int trial = 0; trial < 120; ++trial) {
        std::size_t m = static_cast<std::size_t>(rng.uniform(1, 4));
        std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
        IntMat a = random_matrix(rng, m, n, -6, 6);
        std::vector<Int> moduli(m);
        for (auto& x : moduli) x = rng.coin() ? Int(0) : rng.uniform_int(2, 9);

        // build a guaranteed-solvable rhs
        std::vector<Int> x0(n);
        for (auto& c : x0) c = rng.uniform_int(-5, 5);
        std::vector<Int> b = a * x0;

        LinearSolver s(a, moduli);
        auto sol = s.solve(b);
        REQUIRE(sol.has_value());
        std::vector<Int> lhs = a * *sol;
        for (std::size_t i = 0; i < m; ++i) REQUIRE(mod_reduce(lhs[i] - b[i], moduli[i]) == 0);

        // every lattice column is a homogeneous solution
        const IntMat& lat = s.lattice();
        for (std::size_t j = 0; j < lat.cols(); ++j) {
            std::vector<Int> h = a * lat.column(j);
            for (std::size_t i = 0; i < m; ++i) REQUIRE(mod_reduce(h[i], moduli[i]) == 0);
        }
    }
}

TEST_CASE("hermite form canonicalizes lattices") {
    Rng rng(555);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = static_cast<std::size_t>(rng.uniform(1, 5));
        std::size_t k = static_cast<std::size_t>(rng.uniform(1, 5));
        IntMat gens = random_matrix(rng, n, k, -8, 8);

        // shuffle generators and mix by unimodular column tricks
        IntMat mixed = gens;
        for (int step = 0; step < 6; ++step) {
            std::size_t c1 = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(k) - 1));
            std::size_t c2 = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(k) - 1));
            if (c1 == c2) continue;
            Int q = rng.uniform_int(-3, 3);
            for (std::size_t i = 0; i < n; ++i) mixed(i, c1) += q * mixed(i, c2);
        }
        REQUIRE(lattice_equal(gens, mixed));
        REQUIRE(lattice_canonical(gens) == lattice_canonical(mixed));
    }
}
