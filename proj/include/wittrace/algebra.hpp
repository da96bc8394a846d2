#pragma once

#include "wittrace/abelian.hpp"

#include <atomic>
#include <memory>
#include <sstream>

namespace wittrace {

inline std::uint64_t next_object_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

/// Ring with unit presented over its additive group by structure
/// constants: mul[i][j] holds the coordinates of basis_i * basis_j.
/// Validation is eager; everything downstream assumes lawful rings.
class FinAlgebra {
  public:
    using StructureConstants = std::vector<std::vector<std::vector<Int>>>;

    FinAlgebra() = default;
    FinAlgebra(FinAbGroup additive, StructureConstants mul, std::vector<Int> one) {
        auto d = std::make_shared<Data>();
        d->add = std::move(additive);
        d->mul = std::move(mul);
        d->one = std::move(one);
        d->id = next_object_id();
        const std::size_t k = d->add.rank();
        if (d->mul.size() != k || d->one.size() != k)
            throw std::runtime_error("make_algebra: ill-defined structure constants (dimension mismatch)");
        for (auto& row : d->mul) {
            if (row.size() != k) throw std::runtime_error("make_algebra: ill-defined structure constants (dimension mismatch)");
            for (auto& v : row) v = d->add.reduce(v);
        }
        d->one = d->add.reduce(d->one);
        d_ = std::move(d);
        validate();
    }

    bool valid() const { return d_ != nullptr; }
    std::uint64_t id() const { return d_->id; }
    const FinAbGroup& additive() const { return d_->add; }
    std::size_t rank() const { return d_->add.rank(); }
    const std::vector<Int>& one() const { return d_->one; }
    const StructureConstants& structure_constants() const { return d_->mul; }

    /// Structural equality (same presentation, not just isomorphism).
    bool operator==(const FinAlgebra& o) const {
        if (d_ == o.d_) return true;
        return d_->add == o.d_->add && d_->mul == o.d_->mul && d_->one == o.d_->one;
    }
    bool operator!=(const FinAlgebra& o) const { return !(*this == o); }

    std::vector<Int> reduce(std::vector<Int> v) const { return d_->add.reduce(std::move(v)); }

    std::vector<Int> multiply(const std::vector<Int>& x, const std::vector<Int>& y) const {
        const std::size_t k = rank();
        std::vector<Int> out(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < k; ++j) {
                if (y[j] == 0) continue;
                const auto& c = d_->mul[i][j];
                Int coeff = x[i] * y[j];
                for (std::size_t t = 0; t < k; ++t) out[t] += coeff * c[t];
            }
        }
        return reduce(std::move(out));
    }

    /// Matrix of left multiplication by x on additive coordinates.
    IntMat left_multiplication(const std::vector<Int>& x) const {
        const std::size_t k = rank();
        IntMat m(k, k);
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<Int> col(k);
            for (std::size_t i = 0; i < k; ++i) {
                if (x[i] == 0) continue;
                for (std::size_t t = 0; t < k; ++t) col[t] += x[i] * d_->mul[i][j][t];
            }
            m.set_column(j, reduce(std::move(col)));
        }
        return m;
    }
    /// Matrix of right multiplication by x.
    IntMat right_multiplication(const std::vector<Int>& x) const {
        const std::size_t k = rank();
        IntMat m(k, k);
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<Int> col(k);
            for (std::size_t i = 0; i < k; ++i) {
                if (x[i] == 0) continue;
                for (std::size_t t = 0; t < k; ++t) col[t] += x[i] * d_->mul[j][i][t];
            }
            m.set_column(j, reduce(std::move(col)));
        }
        return m;
    }

    std::vector<Int> basis_element(std::size_t i) const {
        std::vector<Int> v(rank());
        v[i] = 1;
        return v;
    }
    std::vector<Int> zero_element() const { return std::vector<Int>(rank(), Int(0)); }
    std::vector<Int> power(std::vector<Int> x, unsigned long n) const {
        std::vector<Int> acc = one();
        for (unsigned long i = 0; i < n; ++i) acc = multiply(acc, x);
        return acc;
    }

    bool is_commutative() const {
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = i + 1; j < rank(); ++j)
                if (d_->mul[i][j] != d_->mul[j][i]) return false;
        return true;
    }

    /// Two-sided inverse, when one exists.
    std::optional<std::vector<Int>> inverse(const std::vector<Int>& x) const {
        LinearSolver s(left_multiplication(x), additive().factors());
        auto y = s.solve_canonical(one());
        if (!y) return std::nullopt;
        if (multiply(*y, x) != one()) return std::nullopt;
        return reduce(std::move(*y));
    }

    FinAlgebra opposite() const {
        StructureConstants op(rank(), std::vector<std::vector<Int>>(rank()));
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < rank(); ++j) op[i][j] = d_->mul[j][i];
        return FinAlgebra(additive(), std::move(op), one());
    }

  private:
    struct Data {
        FinAbGroup add;
        StructureConstants mul;
        std::vector<Int> one;
        std::uint64_t id = 0;
    };

    void validate() const {
        const std::size_t k = rank();
        const auto& factors = d_->add.factors();
        // torsion respects multiplication: d_i b_i = 0 forces d_i (b_i b_j) = 0
        for (std::size_t i = 0; i < k; ++i) {
            if (factors[i] == 0) continue;
            for (std::size_t j = 0; j < k; ++j) {
                if (!d_->add.is_zero_element(factors[i] * d_->mul[i][j]) ||
                    !d_->add.is_zero_element(factors[i] * d_->mul[j][i])) {
                    std::ostringstream os;
                    os << "make_algebra: ill-defined structure constants at basis pair (" << i << ", " << j << ")";
                    throw std::runtime_error(os.str());
                }
            }
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                for (std::size_t l = 0; l < k; ++l) {
                    auto lhs = multiply(d_->mul[i][j], basis_element(l));
                    auto rhs = multiply(basis_element(i), d_->mul[j][l]);
                    if (lhs != rhs) {
                        std::ostringstream os;
                        os << "make_algebra: not associative at basis triple (" << i << ", " << j << ", " << l << ")";
                        throw std::runtime_error(os.str());
                    }
                }
        for (std::size_t i = 0; i < k; ++i) {
            auto b = basis_element(i);
            if (multiply(d_->one, b) != b || multiply(b, d_->one) != b) {
                std::ostringstream os;
                os << "make_algebra: unit law fails at basis element " << i;
                throw std::runtime_error(os.str());
            }
        }
    }

    std::shared_ptr<const Data> d_;
};

inline FinAlgebra make_algebra(FinAbGroup additive, FinAlgebra::StructureConstants mul, std::vector<Int> one) {
    return FinAlgebra(std::move(additive), std::move(mul), std::move(one));
}

/// Element with its owning algebra; coordinates kept reduced.
struct RingElement {
    FinAlgebra owner;
    std::vector<Int> coords;

    RingElement() = default;
    RingElement(FinAlgebra alg, std::vector<Int> c) : owner(std::move(alg)), coords(owner.reduce(std::move(c))) {}

    RingElement operator+(const RingElement& o) const { return {owner, coords + o.coords}; }
    RingElement operator-(const RingElement& o) const { return {owner, coords - o.coords}; }
    RingElement operator*(const RingElement& o) const { return {owner, owner.multiply(coords, o.coords)}; }
    bool operator==(const RingElement& o) const { return coords == o.coords; }
    bool is_zero() const { return owner.additive().is_zero_element(coords); }
};

// ----- catalog ------------------------------------------------------------

namespace catalog {

/// Z/m as a ring (m >= 2).
inline FinAlgebra cyclic(const Int& m) {
    if (m < 2) throw std::runtime_error("catalog: cyclic modulus must be >= 2");
    return make_algebra(FinAbGroup::cyclic(m), {{{Int(1)}}}, {Int(1)});
}

/// The integers, modeled as the infinite cyclic group with d = 0.
inline FinAlgebra integers() {
    return make_algebra(FinAbGroup::free(1), {{{Int(1)}}}, {Int(1)});
}

/// k x k matrices over Z/m via the matrix-unit basis E_11, E_12, ...
inline FinAlgebra matrix_ring(std::size_t k, const Int& m) {
    if (k == 0) throw std::runtime_error("catalog: matrix size must be positive");
    const std::size_t n = k * k;
    auto idx = [k](std::size_t i, std::size_t j) { return i * k + j; };
    FinAlgebra::StructureConstants mul(n, std::vector<std::vector<Int>>(n, std::vector<Int>(n)));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t p = 0; p < k; ++p)
                for (std::size_t q = 0; q < k; ++q)
                    if (j == p) mul[idx(i, j)][idx(p, q)][idx(i, q)] = 1;
    std::vector<Int> one(n);
    for (std::size_t i = 0; i < k; ++i) one[idx(i, i)] = 1;
    return make_algebra(FinAbGroup(std::vector<Int>(n, m)), std::move(mul), std::move(one));
}

/// Group algebra (Z/m)[C_k]; basis g^0, ..., g^{k-1}.
inline FinAlgebra group_algebra(const Int& m, std::size_t k) {
    if (k == 0) throw std::runtime_error("catalog: group order must be positive");
    FinAlgebra::StructureConstants mul(k, std::vector<std::vector<Int>>(k, std::vector<Int>(k)));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) mul[i][j][(i + j) % k] = 1;
    std::vector<Int> one(k);
    one[0] = 1;
    return make_algebra(FinAbGroup(std::vector<Int>(k, m)), std::move(mul), std::move(one));
}

/// Upper-triangular 2x2 matrices over Z/m; basis E_11, E_12, E_22.
inline FinAlgebra upper_triangular(const Int& m) {
    FinAlgebra::StructureConstants mul(3, std::vector<std::vector<Int>>(3, std::vector<Int>(3)));
    // E_11 E_11 = E_11, E_11 E_12 = E_12, E_12 E_22 = E_12, E_22 E_22 = E_22
    mul[0][0][0] = 1;
    mul[0][1][1] = 1;
    mul[1][2][1] = 1;
    mul[2][2][2] = 1;
    std::vector<Int> one = {Int(1), Int(0), Int(1)};
    return make_algebra(FinAbGroup(std::vector<Int>(3, m)), std::move(mul), std::move(one));
}

/// Named lookup used by the instance generator and the CLI.
inline FinAlgebra by_name(const std::string& name, const std::vector<Int>& params) {
    auto want = [&](std::size_t n) {
        if (params.size() != n) throw std::runtime_error("catalog: wrong parameter count for " + name);
    };
    if (name == "cyclic") {
        want(1);
        return cyclic(params[0]);
    }
    if (name == "integers" || name == "integers-truncated") {
        want(0);
        return integers();
    }
    if (name == "matrix") {
        want(2);
        return matrix_ring(static_cast<std::size_t>(params[0]), params[1]);
    }
    if (name == "group-algebra") {
        want(2);
        return group_algebra(params[0], static_cast<std::size_t>(params[1]));
    }
    if (name == "upper-triangular") {
        want(1);
        return upper_triangular(params[0]);
    }
    throw std::runtime_error("catalog: unknown ring name '" + name + "'");
}

}  // namespace catalog

/// Generating set for the center {z : bz = zb for all b}, as columns.
inline IntMat center_generators(const FinAlgebra& a) {
    const std::size_t k = a.rank();
    IntMat sys(k * k, k);
    std::vector<Int> moduli(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        IntMat diff = a.left_multiplication(a.basis_element(i)) - a.right_multiplication(a.basis_element(i));
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t c = 0; c < k; ++c) sys(i * k + r, c) = diff(r, c);
            moduli[i * k + r] = a.additive().factors()[r];
        }
    }
    return LinearSolver(sys, moduli).lattice();
}

}  // namespace wittrace
