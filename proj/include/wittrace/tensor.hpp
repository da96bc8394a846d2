#pragma once

#include "wittrace/bimodule.hpp"

#include <map>
#include <mutex>

namespace wittrace {

/// A balanced tensor M ⊙_S N, materialized: the additive group is the
/// cokernel of torsion and balancing relations on the generator lattice
/// Z^{rank M * rank N}, generator (i, j) at index i * rank(N) + j. pure()
/// pushes coordinate pairs into the quotient.
struct TensorWitness {
    Bimodule left_factor, right_factor;
    Bimodule module;
    Presentation pres;  // ambient = generator lattice

    std::vector<Int> pure(const std::vector<Int>& x, const std::vector<Int>& y) const {
        const std::size_t kn = right_factor.rank();
        std::vector<Int> gen(left_factor.rank() * kn);
        for (std::size_t i = 0; i < left_factor.rank(); ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < kn; ++j)
                if (y[j] != 0) gen[i * kn + j] = x[i] * y[j];
        }
        return pres.project(gen);
    }
};

namespace detail {

inline TensorWitness compute_tensor(const Bimodule& m, const Bimodule& n) {
    if (!(m.right_ring() == n.left_ring())) throw std::runtime_error("tensor: ring mismatch");
    const FinAlgebra& s = m.right_ring();
    const std::size_t km = m.rank(), kn = n.rank(), ks = s.rank();
    const std::size_t gens = km * kn;

    const auto& mfac = m.additive().factors();
    const auto& nfac = n.additive().factors();
    std::size_t n_torsion = 0;
    for (std::size_t i = 0; i < km; ++i)
        if (mfac[i] != 0) n_torsion += kn;
    for (std::size_t j = 0; j < kn; ++j)
        if (nfac[j] != 0) n_torsion += km;

    IntMat rel(gens, n_torsion + km * ks * kn);
    std::size_t at = 0;
    for (std::size_t i = 0; i < km; ++i)
        if (mfac[i] != 0)
            for (std::size_t j = 0; j < kn; ++j) rel(i * kn + j, at++) = mfac[i];
    for (std::size_t j = 0; j < kn; ++j)
        if (nfac[j] != 0)
            for (std::size_t i = 0; i < km; ++i) rel(i * kn + j, at++) = nfac[j];
    // balancing: (m_i · b_s) ⊗ n_j  −  m_i ⊗ (b_s · n_j)
    for (std::size_t i = 0; i < km; ++i)
        for (std::size_t t = 0; t < ks; ++t) {
            const IntMat& right_t = m.right_action_basis(t);
            const IntMat& left_t = n.left_action_basis(t);
            for (std::size_t j = 0; j < kn; ++j) {
                for (std::size_t a = 0; a < km; ++a) rel(a * kn + j, at) += right_t(a, i);
                for (std::size_t b = 0; b < kn; ++b) rel(i * kn + b, at) -= left_t(b, j);
                ++at;
            }
        }

    Presentation pres = cokernel(rel);
    auto induce = [&](const IntMat& raw) { return pres.to_normal * raw * pres.from_normal; };
    std::vector<IntMat> left, right;
    for (std::size_t i = 0; i < m.left_ring().rank(); ++i)
        left.push_back(induce(IntMat::kronecker(m.left_action_basis(i), IntMat::identity(kn))));
    for (std::size_t i = 0; i < n.right_ring().rank(); ++i)
        right.push_back(induce(IntMat::kronecker(IntMat::identity(km), n.right_action_basis(i))));
    Bimodule mod(m.left_ring(), n.right_ring(), pres.group, std::move(left), std::move(right), false);
    return TensorWitness{m, n, std::move(mod), std::move(pres)};
}

template <typename Key, typename Value>
class ConcurrentCache {
  public:
    template <typename F>
    const Value& get_or_compute(const Key& key, F&& compute) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return *it->second;
        }
        auto value = std::make_shared<Value>(compute());
        std::lock_guard<std::mutex> lock(mu_);
        auto [it, inserted] = cache_.emplace(key, std::move(value));
        return *it->second;
    }

  private:
    std::mutex mu_;
    std::map<Key, std::shared_ptr<Value>> cache_;
};

inline ConcurrentCache<std::pair<std::uint64_t, std::uint64_t>, TensorWitness>& tensor_cache() {
    static ConcurrentCache<std::pair<std::uint64_t, std::uint64_t>, TensorWitness> cache;
    return cache;
}

inline ConcurrentCache<std::uint64_t, Bimodule>& unit_cache() {
    static ConcurrentCache<std::uint64_t, Bimodule> cache;
    return cache;
}

}  // namespace detail

inline const TensorWitness& tensor(const Bimodule& m, const Bimodule& n) {
    return detail::tensor_cache().get_or_compute({m.id(), n.id()},
                                                 [&] { return detail::compute_tensor(m, n); });
}

/// The unit 1-cell U_R (the regular bimodule), memoized per ring so that
/// repeated uses share one materialization.
inline const Bimodule& unit_bimodule(const FinAlgebra& r) {
    return detail::unit_cache().get_or_compute(r.id(), [&] { return regular_bimodule(r); });
}

/// f ⊙ g on materialized tensors (middle ring fixed).
inline BimoduleMap tensor_map(const BimoduleMap& f, const BimoduleMap& g) {
    const TensorWitness& src = tensor(f.source(), g.source());
    const TensorWitness& tgt = tensor(f.target(), g.target());
    IntMat raw = IntMat::kronecker(f.matrix(), g.matrix());
    return BimoduleMap(src.module, tgt.module, tgt.pres.to_normal * raw * src.pres.from_normal, false);
}

/// Left unitor U_R ⊙ M -> M, r ⊗ m ↦ r·m.
inline BimoduleMap left_unitor(const Bimodule& m) {
    const Bimodule& u = unit_bimodule(m.left_ring());
    const TensorWitness& t = tensor(u, m);
    IntMat raw(m.rank(), u.rank() * m.rank());
    for (std::size_t i = 0; i < u.rank(); ++i)
        for (std::size_t j = 0; j < m.rank(); ++j) {
            auto col = m.left_action_basis(i).column(j);
            for (std::size_t r = 0; r < m.rank(); ++r) raw(r, i * m.rank() + j) = col[r];
        }
    return BimoduleMap(t.module, m, raw * t.pres.from_normal, false);
}

inline BimoduleMap left_unitor_inverse(const Bimodule& m) {
    const Bimodule& u = unit_bimodule(m.left_ring());
    const TensorWitness& t = tensor(u, m);
    IntMat raw(t.module.rank(), m.rank());
    for (std::size_t j = 0; j < m.rank(); ++j) {
        std::vector<Int> e(m.rank());
        e[j] = 1;
        raw.set_column(j, t.pure(m.left_ring().one(), e));
    }
    return BimoduleMap(m, t.module, raw, false);
}

/// Right unitor M ⊙ U_S -> M, m ⊗ s ↦ m·s.
inline BimoduleMap right_unitor(const Bimodule& m) {
    const Bimodule& u = unit_bimodule(m.right_ring());
    const TensorWitness& t = tensor(m, u);
    IntMat raw(m.rank(), m.rank() * u.rank());
    for (std::size_t j = 0; j < m.rank(); ++j)
        for (std::size_t i = 0; i < u.rank(); ++i) {
            auto col = m.right_action_basis(i).column(j);
            for (std::size_t r = 0; r < m.rank(); ++r) raw(r, j * u.rank() + i) = col[r];
        }
    return BimoduleMap(t.module, m, raw * t.pres.from_normal, false);
}

inline BimoduleMap right_unitor_inverse(const Bimodule& m) {
    const Bimodule& u = unit_bimodule(m.right_ring());
    const TensorWitness& t = tensor(m, u);
    IntMat raw(t.module.rank(), m.rank());
    for (std::size_t j = 0; j < m.rank(); ++j) {
        std::vector<Int> e(m.rank());
        e[j] = 1;
        raw.set_column(j, t.pure(e, m.right_ring().one()));
    }
    return BimoduleMap(m, t.module, raw, false);
}

// ----- tensor words and coherence ------------------------------------------

/// Binary tensor word; the shape directory for associator bookkeeping.
/// Materializations of structurally equal words built from identical
/// leaf objects coincide (tensors are memoized by object identity).
class TensorWord {
  public:
    static TensorWord leaf(Bimodule m) {
        TensorWord w;
        w.node_ = std::make_shared<Node>(Node{std::move(m), nullptr, nullptr});
        return w;
    }
    static TensorWord pair(TensorWord l, TensorWord r) {
        TensorWord w;
        w.node_ = std::make_shared<Node>(
            Node{Bimodule{}, std::make_shared<TensorWord>(std::move(l)), std::make_shared<TensorWord>(std::move(r))});
        return w;
    }
    /// Fully right-associated word of a nonempty list.
    static TensorWord right_comb(const std::vector<Bimodule>& list) {
        if (list.empty()) throw std::runtime_error("TensorWord: empty list");
        TensorWord w = leaf(list.back());
        for (std::size_t i = list.size() - 1; i-- > 0;) w = pair(leaf(list[i]), std::move(w));
        return w;
    }

    bool is_leaf() const { return node_->left == nullptr; }
    const Bimodule& leaf_module() const { return node_->m; }
    const TensorWord& left() const { return *node_->left; }
    const TensorWord& right() const { return *node_->right; }

    void collect_leaves(std::vector<Bimodule>& out) const {
        if (is_leaf()) {
            out.push_back(node_->m);
        } else {
            node_->left->collect_leaves(out);
            node_->right->collect_leaves(out);
        }
    }
    std::vector<Bimodule> leaves() const {
        std::vector<Bimodule> out;
        collect_leaves(out);
        return out;
    }

    Bimodule materialize() const {
        if (is_leaf()) return node_->m;
        return tensor(node_->left->materialize(), node_->right->materialize()).module;
    }

  private:
    struct Node {
        Bimodule m;  // leaves only
        std::shared_ptr<TensorWord> left, right;
    };
    std::shared_ptr<const Node> node_;
};

/// Right-normalized materialization of a composable chain.
inline Bimodule materialize_chain(const std::vector<Bimodule>& list) {
    return TensorWord::right_comb(list).materialize();
}

namespace detail {

/// Three-leaf eval matrices give the associator without touching any
/// larger generator lattice: both bracketings are quotients of the same
/// triple-generator lattice, so the iso is "solve through one eval, push
/// through the other".
inline BimoduleMap compute_associator(const Bimodule& a, const Bimodule& b, const Bimodule& c) {
    const TensorWitness& ab = tensor(a, b);
    const TensorWitness& ab_c = tensor(ab.module, c);
    const TensorWitness& bc = tensor(b, c);
    const TensorWitness& a_bc = tensor(a, bc.module);

    // eval: Z^{ka*kb*kc} -> each side
    IntMat eval_left = ab_c.pres.to_normal * IntMat::kronecker(ab.pres.to_normal, IntMat::identity(c.rank()));
    IntMat eval_right = a_bc.pres.to_normal * IntMat::kronecker(IntMat::identity(a.rank()), bc.pres.to_normal);

    LinearSolver solver(eval_left, ab_c.module.additive().factors());
    IntMat iso(a_bc.module.rank(), ab_c.module.rank());
    for (std::size_t q = 0; q < ab_c.module.rank(); ++q) {
        std::vector<Int> e(ab_c.module.rank());
        e[q] = 1;
        auto pre = solver.solve(e);
        if (!pre) throw std::runtime_error("associator: eval not surjective (internal error)");
        iso.set_column(q, a_bc.module.reduce(eval_right * *pre));
    }
    return BimoduleMap(ab_c.module, a_bc.module, iso, false);
}

struct AssociatorKey {
    std::uint64_t a, b, c;
    bool operator<(const AssociatorKey& o) const {
        return std::tie(a, b, c) < std::tie(o.a, o.b, o.c);
    }
};

inline ConcurrentCache<AssociatorKey, BimoduleMap>& associator_cache() {
    static ConcurrentCache<AssociatorKey, BimoduleMap> cache;
    return cache;
}

}  // namespace detail

/// Associator (A ⊙ B) ⊙ C -> A ⊙ (B ⊙ C) on materialized tensors.
inline const BimoduleMap& associator(const Bimodule& a, const Bimodule& b, const Bimodule& c) {
    return detail::associator_cache().get_or_compute(
        detail::AssociatorKey{a.id(), b.id(), c.id()},
        [&] { return detail::compute_associator(a, b, c); });
}

namespace detail {

struct Normalized {
    std::vector<Bimodule> leaves;
    BimoduleMap iso;  // materialize(word) -> materialize(right_comb(leaves))
};

/// (comb of ls) ⊙ (comb of rs)  ->  comb of ls ++ rs, by associator folding.
inline BimoduleMap prepend_comb(const std::vector<Bimodule>& ls, const std::vector<Bimodule>& rs) {
    Bimodule right = TensorWord::right_comb(rs).materialize();
    if (ls.size() == 1) {
        // already the comb of ls ++ rs
        const Bimodule whole = tensor(ls[0], right).module;
        return BimoduleMap::identity(whole);
    }
    std::vector<Bimodule> tail(ls.begin() + 1, ls.end());
    Bimodule tail_mat = TensorWord::right_comb(tail).materialize();
    // (l0 ⊙ tail) ⊙ right -> l0 ⊙ (tail ⊙ right) -> l0 ⊙ comb(tail ++ rs)
    const BimoduleMap& assoc = associator(ls[0], tail_mat, right);
    BimoduleMap rec = prepend_comb(tail, rs);
    BimoduleMap whisker = tensor_map(BimoduleMap::identity(ls[0]), rec);
    return whisker.compose_after(assoc);
}

inline Normalized right_normalize(const TensorWord& w) {
    if (w.is_leaf()) return {w.leaves(), BimoduleMap::identity(w.leaf_module())};
    Normalized l = right_normalize(w.left());
    Normalized r = right_normalize(w.right());
    BimoduleMap to_pair = tensor_map(l.iso, r.iso);
    BimoduleMap flat = prepend_comb(l.leaves, r.leaves);
    std::vector<Bimodule> leaves = l.leaves;
    leaves.insert(leaves.end(), r.leaves.begin(), r.leaves.end());
    return {std::move(leaves), flat.compose_after(to_pair)};
}

}  // namespace detail

/// The canonical isomorphism between two bracketings of the same
/// composable chain: both sides are normalized to the right comb and the
/// isos composed. Every structural identification in the calculus goes
/// through this one routine, which is what makes the coherence lemmas
/// literal matrix equalities.
inline BimoduleMap canonical_iso(const TensorWord& from, const TensorWord& to) {
    detail::Normalized a = detail::right_normalize(from);
    detail::Normalized b = detail::right_normalize(to);
    if (a.leaves.size() != b.leaves.size()) throw std::runtime_error("canonical_iso: leaf lists differ");
    for (std::size_t i = 0; i < a.leaves.size(); ++i)
        if (!a.leaves[i].identical(b.leaves[i]) && !a.leaves[i].same_presentation(b.leaves[i]))
            throw std::runtime_error("canonical_iso: leaf lists differ");
    auto inv = b.iso.inverse();
    if (!inv) throw std::runtime_error("canonical_iso: normalization iso not invertible (internal error)");
    return inv->compose_after(a.iso);
}

}  // namespace wittrace
