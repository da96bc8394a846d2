#pragma once

#include "wittrace/snf.hpp"

#include <numeric>

namespace wittrace {

/// Finitely generated abelian group in invariant-factor normal form:
/// factors d_1 | d_2 | ... | d_t followed by zeros (infinite cyclic
/// factors). Unit factors never appear. Elements are integer vectors of
/// length rank(), reduced coordinatewise.
class FinAbGroup {
  public:
    FinAbGroup() = default;
    explicit FinAbGroup(std::vector<Int> factors) : factors_(std::move(factors)) {
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (factors_[i] < 0 || factors_[i] == 1)
                throw std::runtime_error("FinAbGroup: factors must be 0 or >= 2");
            if (i + 1 < factors_.size()) {
                const Int &a = factors_[i], &b = factors_[i + 1];
                if (a == 0 && b != 0) throw std::runtime_error("FinAbGroup: zero factors must come last");
                if (a != 0 && b != 0 && b % a != 0)
                    throw std::runtime_error("FinAbGroup: divisibility chain violated");
            }
        }
    }

    static FinAbGroup zero() { return FinAbGroup{}; }
    static FinAbGroup free(std::size_t rank) { return FinAbGroup(std::vector<Int>(rank, Int(0))); }
    static FinAbGroup cyclic(const Int& m) {
        if (m == 1) return zero();
        return FinAbGroup({m});
    }

    std::size_t rank() const { return factors_.size(); }
    const std::vector<Int>& factors() const { return factors_; }
    bool operator==(const FinAbGroup& o) const { return factors_ == o.factors_; }
    bool operator!=(const FinAbGroup& o) const { return !(*this == o); }

    bool is_finite() const { return factors_.empty() || factors_.back() != 0; }
    /// Number of elements; 0 denotes infinite.
    Int order() const {
        Int n = 1;
        for (const auto& d : factors_) {
            if (d == 0) return 0;
            n *= d;
        }
        return n;
    }
    /// Exponent of the torsion part (largest finite factor), 1 if free/trivial.
    Int torsion_exponent() const {
        Int e = 1;
        for (const auto& d : factors_)
            if (d != 0) e = d;
        return e;
    }

    std::vector<Int> reduce(std::vector<Int> v) const {
        if (v.size() != factors_.size()) throw std::runtime_error("FinAbGroup: wrong coordinate length");
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = mod_reduce(v[i], factors_[i]);
        return v;
    }
    bool is_zero_element(const std::vector<Int>& v) const {
        auto r = reduce(v);
        for (const auto& x : r)
            if (x != 0) return false;
        return true;
    }
    bool congruent(const std::vector<Int>& a, const std::vector<Int>& b) const {
        return reduce(a) == reduce(b);
    }
    /// Columnwise congruence of two matrices mapping into this group.
    bool congruent(const IntMat& a, const IntMat& b) const {
        if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!congruent(a.column(j), b.column(j))) return false;
        return true;
    }
    IntMat reduce(const IntMat& m) const {
        IntMat r = m;
        for (std::size_t j = 0; j < r.cols(); ++j) r.set_column(j, reduce(r.column(j)));
        return r;
    }

    std::vector<Int> zero_element() const { return std::vector<Int>(rank(), Int(0)); }

    /// In-place successor for exhaustive enumeration of a finite group;
    /// returns false after wrapping past the last element.
    bool next_element(std::vector<Int>& v) const {
        for (std::size_t i = 0; i < rank(); ++i) {
            if (factors_[i] == 0) throw std::runtime_error("FinAbGroup: cannot enumerate free factors");
            if (++v[i] < factors_[i]) return true;
            v[i] = 0;
        }
        return false;
    }

  private:
    std::vector<Int> factors_;
};

/// A group presented as coker(relation_matrix) together with the exact
/// change of coordinates between ambient presentation space Z^m and the
/// normal form. to_normal * from_normal = I holds on the nose;
/// from_normal * to_normal = I holds modulo the relation lattice.
struct Presentation {
    IntMat relations;  // columns are relations in Z^m
    FinAbGroup group;
    IntMat to_normal;    // rank(group) x m
    IntMat from_normal;  // m x rank(group)

    std::vector<Int> project(const std::vector<Int>& ambient) const {
        return group.reduce(to_normal * ambient);
    }
    std::vector<Int> lift(const std::vector<Int>& normal) const { return from_normal * normal; }
};

/// Cokernel of an integer matrix (columns = relations on Z^rows), with
/// unit invariant factors dropped from the group but retained in the
/// conversion data.
inline Presentation cokernel(const IntMat& a) {
    SmithForm s = smith_normal_form(a);
    std::vector<Int> diag = s.diagonal();
    const std::size_t m = a.rows();
    std::vector<std::size_t> keep;
    std::vector<Int> factors;
    for (std::size_t i = 0; i < m; ++i) {
        Int d = i < diag.size() ? diag[i] : Int(0);
        if (d == 1) continue;
        keep.push_back(i);
        factors.push_back(d);
    }
    // SNF emits torsion factors in divisibility order then zeros
    Presentation p;
    p.relations = a;
    p.group = FinAbGroup(std::move(factors));
    p.to_normal = s.U.submatrix_rows(keep);
    p.from_normal = s.U_inv.submatrix_cols(keep);
    return p;
}

/// Presentation of Z^m itself (no relations).
inline Presentation free_presentation(std::size_t m) {
    Presentation p;
    p.relations = IntMat(m, 0);
    p.group = FinAbGroup::free(m);
    p.to_normal = IntMat::identity(m);
    p.from_normal = IntMat::identity(m);
    return p;
}

/// The subgroup generated by the columns of `gens` inside an ambient
/// coordinate space Z^m / (moduli), presented abstractly with its
/// embedding. The ambient moduli need not form a divisibility chain
/// (coordinate spaces like S^k repeat factors). express() rewrites an
/// ambient element as a normal-form element of the subgroup, when it
/// lies there.
class SubgroupEmbedding {
  public:
    SubgroupEmbedding(std::vector<Int> ambient_moduli, IntMat gens)
        : moduli_(std::move(ambient_moduli)),
          gens_(std::move(gens)),
          membership_(gens_, moduli_) {
        // relations among the generators: g z ≡ 0 in the ambient group
        quotient_ = cokernel(membership_.lattice());
    }

    const FinAbGroup& group() const { return quotient_.group; }
    const std::vector<Int>& ambient_moduli() const { return moduli_; }

    std::vector<Int> ambient_reduce(std::vector<Int> v) const {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = mod_reduce(v[i], moduli_[i]);
        return v;
    }

    /// Matrix of the inclusion subgroup -> ambient coordinates.
    IntMat embedding() const {
        IntMat e = gens_ * quotient_.from_normal;
        for (std::size_t j = 0; j < e.cols(); ++j) e.set_column(j, ambient_reduce(e.column(j)));
        return e;
    }

    /// Normal coordinates of an ambient element known to lie in the
    /// subgroup; nullopt otherwise.
    std::optional<std::vector<Int>> express(const std::vector<Int>& ambient_elt) const {
        auto z = membership_.solve(ambient_elt);
        if (!z) return std::nullopt;
        return quotient_.project(*z);
    }

  private:
    std::vector<Int> moduli_;
    IntMat gens_;
    LinearSolver membership_;  // gens * z ≡ v (mod ambient moduli)
    Presentation quotient_;
};

}  // namespace wittrace
