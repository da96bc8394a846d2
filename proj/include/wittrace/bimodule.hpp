#pragma once

#include "wittrace/algebra.hpp"

namespace wittrace {

/// R-S-bimodule with explicit actions on additive coordinates. Matrices
/// act on the left of coordinate columns throughout; consequently the
/// stored right-action matrices compose contravariantly,
/// Rt(s s') = Rt(s') Rt(s).
class Bimodule {
  public:
    Bimodule() = default;
    Bimodule(FinAlgebra left_ring, FinAlgebra right_ring, FinAbGroup additive,
             std::vector<IntMat> left_action, std::vector<IntMat> right_action, bool check = true) {
        auto d = std::make_shared<Data>();
        d->R = std::move(left_ring);
        d->S = std::move(right_ring);
        d->add = std::move(additive);
        d->left = std::move(left_action);
        d->right = std::move(right_action);
        d->id = next_object_id();
        for (auto& m : d->left) m = d->add.reduce(m);
        for (auto& m : d->right) m = d->add.reduce(m);
        d_ = std::move(d);
        if (check) validate();
    }

    bool valid() const { return d_ != nullptr; }
    std::uint64_t id() const { return d_->id; }
    const FinAlgebra& left_ring() const { return d_->R; }
    const FinAlgebra& right_ring() const { return d_->S; }
    const FinAbGroup& additive() const { return d_->add; }
    std::size_t rank() const { return d_->add.rank(); }

    /// Action matrix of an arbitrary ring element (additive extension).
    IntMat left_action(const std::vector<Int>& r) const { return combine(d_->left, r); }
    IntMat right_action(const std::vector<Int>& s) const { return combine(d_->right, s); }
    const IntMat& left_action_basis(std::size_t i) const { return d_->left[i]; }
    const IntMat& right_action_basis(std::size_t i) const { return d_->right[i]; }

    bool same_presentation(const Bimodule& o) const {
        if (d_ == o.d_) return true;
        return d_->R == o.d_->R && d_->S == o.d_->S && d_->add == o.d_->add && d_->left == o.d_->left &&
               d_->right == o.d_->right;
    }
    bool identical(const Bimodule& o) const { return d_ == o.d_; }

    std::vector<Int> reduce(std::vector<Int> v) const { return d_->add.reduce(std::move(v)); }

  private:
    struct Data {
        FinAlgebra R, S;
        FinAbGroup add;
        std::vector<IntMat> left, right;
        std::uint64_t id = 0;
    };

    IntMat combine(const std::vector<IntMat>& basis_action, const std::vector<Int>& x) const {
        IntMat acc(rank(), rank());
        for (std::size_t i = 0; i < basis_action.size(); ++i) {
            if (x[i] == 0) continue;
            acc = acc + basis_action[i] * x[i];
        }
        return d_->add.reduce(acc);
    }

    void validate() const {
        const std::size_t k = rank();
        const auto& fac = d_->add.factors();
        if (d_->left.size() != d_->R.rank() || d_->right.size() != d_->S.rank())
            throw std::runtime_error("bimodule: action count does not match ring rank");
        auto check_descends = [&](const IntMat& t, const char* what) {
            if (t.rows() != k || t.cols() != k) throw std::runtime_error(std::string("bimodule: bad action shape in ") + what);
            for (std::size_t j = 0; j < k; ++j)
                if (fac[j] != 0 && !d_->add.is_zero_element(fac[j] * t.column(j)))
                    throw std::runtime_error(std::string("bimodule: action does not descend to the quotient in ") + what);
        };
        for (const auto& t : d_->left) check_descends(t, "left action");
        for (const auto& t : d_->right) check_descends(t, "right action");

        // ring-order compatibility: (d_i b_i) acts as zero
        const auto& rfac = d_->R.additive().factors();
        for (std::size_t i = 0; i < d_->left.size(); ++i)
            if (rfac[i] != 0 && !d_->add.congruent(d_->left[i] * rfac[i], IntMat(k, k)))
                throw std::runtime_error("bimodule: left action ignores ring torsion");
        const auto& sfac = d_->S.additive().factors();
        for (std::size_t i = 0; i < d_->right.size(); ++i)
            if (sfac[i] != 0 && !d_->add.congruent(d_->right[i] * sfac[i], IntMat(k, k)))
                throw std::runtime_error("bimodule: right action ignores ring torsion");

        if (!d_->add.congruent(left_action(d_->R.one()), IntMat::identity(k)))
            throw std::runtime_error("bimodule: left action is not unital");
        if (!d_->add.congruent(right_action(d_->S.one()), IntMat::identity(k)))
            throw std::runtime_error("bimodule: right action is not unital");
        const auto& rc = d_->R.structure_constants();
        for (std::size_t i = 0; i < d_->left.size(); ++i)
            for (std::size_t j = 0; j < d_->left.size(); ++j)
                if (!d_->add.congruent(left_action(rc[i][j]), d_->left[i] * d_->left[j]))
                    throw std::runtime_error("bimodule: left action is not multiplicative");
        const auto& sc = d_->S.structure_constants();
        for (std::size_t i = 0; i < d_->right.size(); ++i)
            for (std::size_t j = 0; j < d_->right.size(); ++j)
                if (!d_->add.congruent(right_action(sc[i][j]), d_->right[j] * d_->right[i]))
                    throw std::runtime_error("bimodule: right action is not multiplicative");
        for (const auto& l : d_->left)
            for (const auto& r : d_->right)
                if (!d_->add.congruent(l * r, r * l))
                    throw std::runtime_error("bimodule: left and right actions do not commute");
    }

    std::shared_ptr<const Data> d_;
};

/// R as an R-R-bimodule.
inline Bimodule regular_bimodule(const FinAlgebra& r) {
    std::vector<IntMat> left, right;
    for (std::size_t i = 0; i < r.rank(); ++i) {
        left.push_back(r.left_multiplication(r.basis_element(i)));
        right.push_back(r.right_multiplication(r.basis_element(i)));
    }
    return Bimodule(r, r, r.additive(), std::move(left), std::move(right));
}

/// R twisted on the left by alpha and on the right by beta (matrices of
/// ring automorphisms): r . x . s = alpha(r) x beta(s).
inline Bimodule twisted_bimodule(const FinAlgebra& r, const IntMat& alpha, const IntMat& beta) {
    std::vector<IntMat> left, right;
    for (std::size_t i = 0; i < r.rank(); ++i) {
        left.push_back(r.left_multiplication(r.reduce(alpha.column(i))));
        right.push_back(r.right_multiplication(r.reduce(beta.column(i))));
    }
    return Bimodule(r, r, r.additive(), std::move(left), std::move(right));
}

inline Bimodule zero_bimodule(const FinAlgebra& r, const FinAlgebra& s) {
    return Bimodule(r, s, FinAbGroup::zero(), std::vector<IntMat>(r.rank()), std::vector<IntMat>(s.rank()));
}

/// Additive map of bimodules; the matrix lives on normal coordinates.
class BimoduleMap {
  public:
    BimoduleMap() = default;
    BimoduleMap(Bimodule source, Bimodule target, IntMat matrix, bool check = true)
        : src_(std::move(source)), tgt_(std::move(target)), mat_(tgt_.additive().reduce(matrix)) {
        if (mat_.rows() != tgt_.rank() || mat_.cols() != src_.rank())
            throw std::runtime_error("bimodule map: matrix shape mismatch");
        if (check) validate();
    }

    static BimoduleMap identity(const Bimodule& m) {
        return BimoduleMap(m, m, IntMat::identity(m.rank()), false);
    }
    static BimoduleMap zero(const Bimodule& src, const Bimodule& tgt) {
        return BimoduleMap(src, tgt, IntMat(tgt.rank(), src.rank()), false);
    }

    const Bimodule& source() const { return src_; }
    const Bimodule& target() const { return tgt_; }
    const IntMat& matrix() const { return mat_; }

    std::vector<Int> apply(const std::vector<Int>& v) const { return tgt_.reduce(mat_ * v); }

    BimoduleMap compose_after(const BimoduleMap& first) const {
        if (first.tgt_.additive() != src_.additive())
            throw std::runtime_error("bimodule map: composition shape mismatch");
        return BimoduleMap(first.src_, tgt_, mat_ * first.mat_, false);
    }

    BimoduleMap operator+(const BimoduleMap& o) const {
        return BimoduleMap(src_, tgt_, mat_ + o.mat_, false);
    }
    BimoduleMap operator-(const BimoduleMap& o) const {
        return BimoduleMap(src_, tgt_, mat_ - o.mat_, false);
    }

    bool equals(const BimoduleMap& o) const {
        return src_.additive() == o.src_.additive() && tgt_.additive() == o.tgt_.additive() &&
               tgt_.additive().congruent(mat_, o.mat_);
    }
    bool is_zero_map() const { return tgt_.additive().reduce(mat_).is_zero(); }

    /// Two-sided inverse as a bimodule map, when the matrix is invertible
    /// on the quotients.
    std::optional<BimoduleMap> inverse() const {
        LinearSolver s(mat_, tgt_.additive().factors());
        IntMat inv(src_.rank(), tgt_.rank());
        for (std::size_t j = 0; j < tgt_.rank(); ++j) {
            std::vector<Int> e(tgt_.rank());
            e[j] = 1;
            auto col = s.solve_canonical(e);
            if (!col) return std::nullopt;
            inv.set_column(j, src_.reduce(*col));
        }
        BimoduleMap cand(tgt_, src_, inv, false);
        if (!src_.additive().congruent(inv * mat_, IntMat::identity(src_.rank()))) return std::nullopt;
        return cand;
    }

    void validate() const {
        const auto& sfac = src_.additive().factors();
        for (std::size_t j = 0; j < src_.rank(); ++j)
            if (sfac[j] != 0 && !tgt_.additive().is_zero_element(sfac[j] * mat_.column(j)))
                throw std::runtime_error("bimodule map: does not descend to the quotient");
        for (std::size_t i = 0; i < src_.left_ring().rank(); ++i)
            if (!tgt_.additive().congruent(mat_ * src_.left_action_basis(i), tgt_.left_action_basis(i) * mat_))
                throw std::runtime_error("bimodule map: not left-linear");
        for (std::size_t i = 0; i < src_.right_ring().rank(); ++i)
            if (!tgt_.additive().congruent(mat_ * src_.right_action_basis(i), tgt_.right_action_basis(i) * mat_))
                throw std::runtime_error("bimodule map: not right-linear");
    }

  private:
    Bimodule src_, tgt_;
    IntMat mat_;
};

struct ConstraintSystem {
    IntMat sys;
    std::vector<Int> moduli;
};

/// Constraint system whose solutions are exactly the matrices of bimodule
/// maps source -> target (unknowns = vec(T), row-major). Used for
/// sampling random maps and for Hom computations.
inline ConstraintSystem bimodule_map_system(const Bimodule& src, const Bimodule& tgt) {
    const std::size_t rows = tgt.rank(), cols = src.rank();
    const std::size_t unknowns = rows * cols;  // vec(T), row-major
    const auto& tfac = tgt.additive().factors();
    const auto& sfac = src.additive().factors();

    std::size_t torsion_cols = 0;
    for (const auto& f : sfac)
        if (f != 0) ++torsion_cols;
    const std::size_t n_intertwine = src.left_ring().rank() + src.right_ring().rank();
    IntMat sys(n_intertwine * rows * cols + torsion_cols * rows, unknowns);
    std::vector<Int> moduli(sys.rows());
    std::size_t at = 0;

    // T * A ≡ B * T for each action pair (A on src, B on tgt)
    auto add_intertwine = [&](const IntMat& a, const IntMat& b) {
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                for (std::size_t k = 0; k < cols; ++k) sys(at, r * cols + k) += a(k, c);
                for (std::size_t k = 0; k < rows; ++k) sys(at, k * cols + c) -= b(r, k);
                moduli[at] = tfac[r];
                ++at;
            }
    };
    for (std::size_t i = 0; i < src.left_ring().rank(); ++i)
        add_intertwine(src.left_action_basis(i), tgt.left_action_basis(i));
    for (std::size_t i = 0; i < src.right_ring().rank(); ++i)
        add_intertwine(src.right_action_basis(i), tgt.right_action_basis(i));

    // descent: d_j * column j of T vanishes in the target
    for (std::size_t j = 0; j < cols; ++j) {
        if (sfac[j] == 0) continue;
        for (std::size_t r = 0; r < rows; ++r) {
            sys(at, r * cols + j) = sfac[j];
            moduli[at] = tfac[r];
            ++at;
        }
    }
    return {std::move(sys), std::move(moduli)};
}

inline LinearSolver bimodule_map_solver(const Bimodule& src, const Bimodule& tgt) {
    ConstraintSystem cs = bimodule_map_system(src, tgt);
    return LinearSolver(cs.sys, cs.moduli);
}

inline IntMat unvec(const std::vector<Int>& v, std::size_t rows, std::size_t cols) {
    IntMat t(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) t(r, c) = v[r * cols + c];
    return t;
}

/// Direct sum, renormalized to invariant-factor form, with the four
/// canonical maps tracked as bimodule maps.
struct DirectSum {
    Bimodule module;
    BimoduleMap inj1, inj2, proj1, proj2;
};

inline DirectSum direct_sum(const Bimodule& m, const Bimodule& n) {
    if (!(m.left_ring() == n.left_ring()) || !(m.right_ring() == n.right_ring()))
        throw std::runtime_error("direct_sum: ring mismatch");
    const std::size_t km = m.rank(), kn = n.rank();
    std::vector<Int> stacked;
    for (const auto& f : m.additive().factors()) stacked.push_back(f);
    for (const auto& f : n.additive().factors()) stacked.push_back(f);
    Presentation p = cokernel(IntMat::diagonal(stacked));

    auto induce = [&](const IntMat& a, const IntMat& b) {
        return p.to_normal * IntMat::block_diag(a, b) * p.from_normal;
    };
    std::vector<IntMat> left, right;
    for (std::size_t i = 0; i < m.left_ring().rank(); ++i)
        left.push_back(induce(m.left_action_basis(i), n.left_action_basis(i)));
    for (std::size_t i = 0; i < m.right_ring().rank(); ++i)
        right.push_back(induce(m.right_action_basis(i), n.right_action_basis(i)));
    Bimodule sum(m.left_ring(), m.right_ring(), p.group, std::move(left), std::move(right), false);

    IntMat lift1(km + kn, km), lift2(km + kn, kn);
    for (std::size_t i = 0; i < km; ++i) lift1(i, i) = 1;
    for (std::size_t i = 0; i < kn; ++i) lift2(km + i, i) = 1;
    IntMat drop1 = lift1.transpose(), drop2 = lift2.transpose();
    return DirectSum{
        sum,
        BimoduleMap(m, sum, p.to_normal * lift1, false),
        BimoduleMap(n, sum, p.to_normal * lift2, false),
        BimoduleMap(sum, m, drop1 * p.from_normal, false),
        BimoduleMap(sum, n, drop2 * p.from_normal, false),
    };
}

/// Kernel as a bimodule with its inclusion; computed from the solution
/// lattice of matrix * x ≡ 0 against the target torsion.
struct KernelData {
    Bimodule module;
    BimoduleMap inclusion;
    /// Factor a map g with h∘g = 0 through the kernel.
    SubgroupEmbedding embedding;
};

inline KernelData kernel(const BimoduleMap& h) {
    const Bimodule& m = h.source();
    LinearSolver sol(h.matrix(), h.target().additive().factors());
    SubgroupEmbedding emb(m.additive().factors(), sol.lattice());
    IntMat inc = emb.embedding();
    const FinAbGroup& kg = emb.group();

    auto restrict_action = [&](const IntMat& a) {
        IntMat out(kg.rank(), kg.rank());
        for (std::size_t j = 0; j < kg.rank(); ++j) {
            auto img = m.reduce(a * inc.column(j));
            auto coords = emb.express(img);
            if (!coords) throw std::runtime_error("kernel: action does not preserve the kernel");
            out.set_column(j, *coords);
        }
        return out;
    };
    std::vector<IntMat> left, right;
    for (std::size_t i = 0; i < m.left_ring().rank(); ++i) left.push_back(restrict_action(m.left_action_basis(i)));
    for (std::size_t i = 0; i < m.right_ring().rank(); ++i) right.push_back(restrict_action(m.right_action_basis(i)));
    Bimodule ker(m.left_ring(), m.right_ring(), kg, std::move(left), std::move(right), false);
    return KernelData{ker, BimoduleMap(ker, m, inc, false), std::move(emb)};
}

/// Cokernel with its projection.
struct CokernelData {
    Bimodule module;
    BimoduleMap projection;
};

inline CokernelData cokernel(const BimoduleMap& h) {
    const Bimodule& n = h.target();
    IntMat rel = IntMat::hstack(h.matrix(), IntMat::diagonal(n.additive().factors()));
    Presentation p = cokernel(rel);  // on Z^{rank N} = normal coords of N
    auto induce = [&](const IntMat& a) { return p.to_normal * a * p.from_normal; };
    std::vector<IntMat> left, right;
    for (std::size_t i = 0; i < n.left_ring().rank(); ++i) left.push_back(induce(n.left_action_basis(i)));
    for (std::size_t i = 0; i < n.right_ring().rank(); ++i) right.push_back(induce(n.right_action_basis(i)));
    Bimodule cok(n.left_ring(), n.right_ring(), p.group, std::move(left), std::move(right), false);
    return CokernelData{cok, BimoduleMap(n, cok, p.to_normal, false)};
}

/// Image of h as a sublattice of the target's coordinates (columns),
/// torsion included; used for exactness checks.
inline IntMat image_lattice(const BimoduleMap& h) {
    return IntMat::hstack(h.matrix(), IntMat::diagonal(h.target().additive().factors()));
}

inline IntMat kernel_lattice(const BimoduleMap& h) {
    LinearSolver sol(h.matrix(), h.target().additive().factors());
    IntMat lat = sol.lattice();
    return IntMat::hstack(lat, IntMat::diagonal(h.source().additive().factors()));
}

/// Exactness at the middle of  a --f--> b --g--> c : im f = ker g.
inline bool is_exact_pair(const BimoduleMap& f, const BimoduleMap& g) {
    if (!g.compose_after(f).is_zero_map()) return false;
    return lattice_equal(image_lattice(f), kernel_lattice(g));
}

}  // namespace wittrace
