#include <catch2/catch_amalgamated.hpp>

#include "wittrace/algebra.hpp"

using namespace wittrace;

TEST_CASE("cyclic ring Z/6 is a valid commutative algebra") {
    FinAlgebra r = catalog::cyclic(6);
    REQUIRE(r.rank() == 1);
    REQUIRE(r.is_commutative());
    REQUIRE(r.multiply({Int(4)}, {Int(5)}) == std::vector<Int>{2});
}

TEST_CASE("matrix ring M_2(Z/5) is valid and noncommutative") {
    FinAlgebra r = catalog::matrix_ring(2, 5);
    REQUIRE(r.rank() == 4);
    REQUIRE_FALSE(r.is_commutative());
    // E_12 E_21 = E_11 but E_21 E_12 = E_22
    auto e12 = r.basis_element(1), e21 = r.basis_element(2);
    REQUIRE(r.multiply(e12, e21) == r.basis_element(0));
    REQUIRE(r.multiply(e21, e12) == r.basis_element(3));
}

TEST_CASE("broken matrix units are rejected as non-associative") {
    FinAlgebra good = catalog::matrix_ring(2, 5);
    auto mul = good.structure_constants();
    mul[1][2] = std::vector<Int>(4, Int(0));  // force E_12 E_21 = 0
    REQUIRE_THROWS_WITH(make_algebra(good.additive(), mul, good.one()),
                        Catch::Matchers::ContainsSubstring("not associative"));
}

TEST_CASE("group algebra (Z/4)[C_2] is commutative") {
    FinAlgebra r = catalog::group_algebra(4, 2);
    REQUIRE(r.is_commutative());
    // (1 + g)^2 = 1 + 2g + g^2 = 2 + 2g
    auto x = std::vector<Int>{1, 1};
    REQUIRE(r.multiply(x, x) == std::vector<Int>{2, 2});
}

TEST_CASE("catalog shapes all validate") {
    REQUIRE(catalog::by_name("cyclic", {Int(6)}).rank() == 1);
    REQUIRE(catalog::by_name("matrix", {Int(2), Int(3)}).additive().factors() == std::vector<Int>(4, Int(3)));
    REQUIRE(catalog::by_name("group-algebra", {Int(2), Int(3)}).rank() == 3);
    REQUIRE(catalog::by_name("upper-triangular", {Int(4)}).rank() == 3);
    REQUIRE(catalog::by_name("integers", {}).additive().factors() == std::vector<Int>{0});
    REQUIRE_THROWS(catalog::by_name("nonsense", {}));
    REQUIRE_THROWS(catalog::by_name("cyclic", {Int(1)}));
}

TEST_CASE("opposite algebra is an involution and preserves validity") {
    for (auto r : {catalog::matrix_ring(2, 4), catalog::upper_triangular(3), catalog::group_algebra(2, 4)}) {
        FinAlgebra op = r.opposite();       // validates on construction
        FinAlgebra opop = op.opposite();
        REQUIRE(opop == r);
        REQUIRE(op.is_commutative() == r.is_commutative());
    }
}

TEST_CASE("unit laws and inverses") {
    FinAlgebra r = catalog::matrix_ring(2, 5);
    auto u = r.one();
    REQUIRE(r.inverse(u).has_value());
    // E_11 is a zero divisor, not invertible
    REQUIRE_FALSE(r.inverse(r.basis_element(0)).has_value());
    // [[0,1],[1,0]] is invertible (its own inverse)
    std::vector<Int> swp = {Int(0), Int(1), Int(1), Int(0)};
    auto inv = r.inverse(swp);
    REQUIRE(inv.has_value());
    REQUIRE(r.multiply(*inv, swp) == r.one());
}

TEST_CASE("center of a matrix ring is the scalars") {
    FinAlgebra r = catalog::matrix_ring(2, 3);
    IntMat z = center_generators(r);
    // every generator must be central and a multiple of the identity
    for (std::size_t j = 0; j < z.cols(); ++j) {
        auto v = r.reduce(z.column(j));
        REQUIRE(v[0] == v[3]);
        REQUIRE(v[1] == 0);
        REQUIRE(v[2] == 0);
    }
    // and the scalars are reachable: identity is in the lattice
    LinearSolver member(z, r.additive().factors());
    REQUIRE(member.contains(r.one()));
}
