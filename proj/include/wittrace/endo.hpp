#pragma once

#include "wittrace/dualizable.hpp"
#include "wittrace/rng.hpp"

namespace wittrace {

/// The ambient data of a twisted endomorphism category: rings R, S and
/// twist bimodules M (R-R) and N (S-S). G = M⊙-, H = -⊙N.
struct EndoContext {
    FinAlgebra R, S;
    Bimodule M, N;

    void check() const {
        if (!(M.left_ring() == R) || !(M.right_ring() == R)) throw std::runtime_error("context: M must be an R-R-bimodule");
        if (!(N.left_ring() == S) || !(N.right_ring() == S)) throw std::runtime_error("context: N must be an S-S-bimodule");
    }
    bool same(const EndoContext& o) const {
        return R == o.R && S == o.S && M.same_presentation(o.M) && N.same_presentation(o.N);
    }
};

namespace shapes {

/// Right-normalized M^{⊙i} ⊙ X (i copies of the twist applied to X).
inline Bimodule g_power(const EndoContext& ctx, std::size_t i, const Bimodule& x) {
    Bimodule acc = x;
    for (std::size_t k = 0; k < i; ++k) acc = tensor(ctx.M, acc).module;
    return acc;
}
inline TensorWord g_power_word(const EndoContext& ctx, std::size_t i, TensorWord x) {
    for (std::size_t k = 0; k < i; ++k) x = TensorWord::pair(TensorWord::leaf(ctx.M), std::move(x));
    return x;
}

/// The power N^{⊙i} as a right comb (i >= 1).
inline Bimodule n_power(const EndoContext& ctx, std::size_t i) {
    return TensorWord::right_comb(std::vector<Bimodule>(i, ctx.N)).materialize();
}
inline TensorWord n_power_word(const EndoContext& ctx, std::size_t i) {
    return TensorWord::right_comb(std::vector<Bimodule>(i, ctx.N));
}

/// Right-normalized X ⊙ N^{⊙i}.
inline Bimodule h_power(const EndoContext& ctx, std::size_t i, const Bimodule& x) {
    if (i == 0) return x;
    return tensor(x, n_power(ctx, i)).module;
}
inline TensorWord h_power_word(const EndoContext& ctx, std::size_t i, TensorWord x) {
    if (i == 0) return x;
    return TensorWord::pair(std::move(x), n_power_word(ctx, i));
}

inline BimoduleMap g_map(const EndoContext& ctx, std::size_t i, BimoduleMap f) {
    for (std::size_t k = 0; k < i; ++k) f = tensor_map(BimoduleMap::identity(ctx.M), std::move(f));
    return f;
}
inline BimoduleMap h_map(const EndoContext& ctx, std::size_t i, BimoduleMap f) {
    if (i == 0) return f;
    return tensor_map(std::move(f), BimoduleMap::identity(n_power(ctx, i)));
}

}  // namespace shapes

/// Object of the twisted endomorphism category with exponent vector
/// (1,...,1,n) compressed to one slot: a map M^{⊙n} ⊙ P -> P ⊙ N^{⊙n} on
/// right-normalized tensors, with duality data attached to the carrier.
struct TwistedEndo {
    EndoContext ctx;
    std::size_t exponent = 1;
    DualityData carrier;
    BimoduleMap map;

    void check_shapes() const {
        Bimodule src = shapes::g_power(ctx, exponent, carrier.P);
        Bimodule tgt = shapes::h_power(ctx, exponent, carrier.P);
        if (!(map.source().additive() == src.additive()) || !(map.target().additive() == tgt.additive()))
            throw std::runtime_error("twisted endo: map shape mismatch");
    }
};

/// Object of End(C;G,H;n,1): carriers P_0..P_{n-1} and maps
/// f_j : M ⊙ P_{j+1 mod n} -> P_j ⊙ N.
struct TwistedTuple {
    EndoContext ctx;
    std::vector<DualityData> carriers;
    std::vector<BimoduleMap> maps;

    std::size_t length() const { return carriers.size(); }

    void check_shapes() const {
        if (maps.size() != carriers.size() || carriers.empty())
            throw std::runtime_error("twisted tuple: length mismatch");
        for (std::size_t j = 0; j < maps.size(); ++j) {
            const Bimodule& next = carriers[(j + 1) % carriers.size()].P;
            if (!(maps[j].source().additive() == tensor(ctx.M, next).module.additive()) ||
                !(maps[j].target().additive() == tensor(carriers[j].P, ctx.N).module.additive()))
                throw std::runtime_error("twisted tuple: slot shape mismatch");
        }
    }
};

/// Morphism of tuples: components h_j making the n squares commute.
struct TupleMorphism {
    TwistedTuple source, target;
    std::vector<BimoduleMap> components;

    bool squares_commute() const {
        const std::size_t n = components.size();
        for (std::size_t j = 0; j < n; ++j) {
            const BimoduleMap& h_next = components[(j + 1) % n];
            BimoduleMap lhs = target.maps[j].compose_after(shapes::g_map(source.ctx, 1, h_next));
            BimoduleMap rhs = shapes::h_map(source.ctx, 1, components[j]).compose_after(source.maps[j]);
            if (!lhs.equals(rhs)) return false;
        }
        return true;
    }
};

// ----- Γ' and Γ -------------------------------------------------------------

/// A composable chain in Mor(C;G,H;(i_0,...,i_{n-1})): slot j carries
/// f_j : G^{i_j}(c_{j+1}) -> H^{i_j}(c_j). carriers has n+1 entries
/// c_0..c_n (cyclic callers pass c_n = c_0).
struct OpChain {
    EndoContext ctx;
    std::vector<std::size_t> exponents;
    std::vector<Bimodule> carriers;  // length = exponents.size() + 1
    std::vector<BimoduleMap> maps;
};

/// Γ' on an adjacent pair: composes G^{i0}(f1) with H^{i1}(f0) through
/// the interchange of G and H, right-normalizing at every step.
inline BimoduleMap gamma_prime_pair(const EndoContext& ctx, std::size_t i0, const BimoduleMap& f0,
                                    std::size_t i1, const BimoduleMap& f1, const Bimodule& c0,
                                    const Bimodule& c1, const Bimodule& c2) {
    using namespace shapes;
    (void)c2;  // shape documentation: f1 sources at G^{i1}(c2)
    // G^{i0}(f1) : G^{i0+i1}(c2) -> G^{i0}(H^{i1}(c1))
    BimoduleMap step1 = g_map(ctx, i0, f1);
    // interchange G^{i0} H^{i1}(c1) ≅ H^{i1} G^{i0}(c1)
    TensorWord from = g_power_word(ctx, i0, h_power_word(ctx, i1, TensorWord::leaf(c1)));
    TensorWord to = h_power_word(ctx, i1, g_power_word(ctx, i0, TensorWord::leaf(c1)));
    BimoduleMap inter = canonical_iso(from, to);
    // H^{i1}(f0) : H^{i1}(G^{i0} c1) -> H^{i1}(H^{i0} c0)
    BimoduleMap step3 = h_map(ctx, i1, f0);
    // renormalize H^{i1} H^{i0}(c0) ≅ H^{i0+i1}(c0)
    TensorWord tail_from = h_power_word(ctx, i1, h_power_word(ctx, i0, TensorWord::leaf(c0)));
    TensorWord tail_to = h_power_word(ctx, i0 + i1, TensorWord::leaf(c0));
    BimoduleMap renorm = canonical_iso(tail_from, tail_to);
    return renorm.compose_after(step3).compose_after(inter).compose_after(step1);
}

/// Γ'(f_0, ..., f_{n-1}) by the right-nested recursion
/// Γ'(f_0, Γ'(f_1, ...)). Returns the single composite slot.
inline BimoduleMap gamma_prime(const OpChain& chain) {
    const std::size_t n = chain.maps.size();
    if (n == 0) throw std::runtime_error("gamma_prime: empty chain");
    BimoduleMap acc = chain.maps[n - 1];
    std::size_t acc_exp = chain.exponents[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) {
        acc = gamma_prime_pair(chain.ctx, chain.exponents[j], chain.maps[j], acc_exp, acc, chain.carriers[j],
                               chain.carriers[j + 1], chain.carriers.back());
        acc_exp += chain.exponents[j];
    }
    return acc;
}

/// Γ: compose an n-tuple into a single twisted endomorphism on P_0.
inline TwistedEndo gamma(const TwistedTuple& t) {
    const std::size_t n = t.length();
    OpChain chain;
    chain.ctx = t.ctx;
    chain.exponents.assign(n, 1);
    for (std::size_t j = 0; j <= n; ++j) chain.carriers.push_back(t.carriers[j % n].P);
    chain.maps = t.maps;
    return TwistedEndo{t.ctx, n, t.carriers[0], gamma_prime(chain)};
}

/// Diagonal: k copies of an exponent-1 endomorphism.
inline TwistedTuple diagonal(const TwistedEndo& f, std::size_t k) {
    if (f.exponent != 1) throw std::runtime_error("diagonal: exponent must be 1");
    if (k == 0) throw std::runtime_error("diagonal: count must be positive");
    TwistedTuple t;
    t.ctx = f.ctx;
    t.carriers.assign(k, f.carrier);
    t.maps.assign(k, f.map);
    return t;
}

/// F^k(f) = Γ(f, ..., f); carrier stays P.
inline TwistedEndo frobenius(const TwistedEndo& f, std::size_t k) {
    if (k == 1) return f;
    return gamma(diagonal(f, k));
}

/// Cyclic rotation (f_0, ..., f_{n-1}) ↦ (f_1, ..., f_{n-1}, f_0).
inline TwistedTuple rotate(const TwistedTuple& t) {
    const std::size_t n = t.length();
    TwistedTuple r;
    r.ctx = t.ctx;
    for (std::size_t j = 0; j < n; ++j) {
        r.carriers.push_back(t.carriers[(j + 1) % n]);
        r.maps.push_back(t.maps[(j + 1) % n]);
    }
    return r;
}

// ----- sums -----------------------------------------------------------------

/// n-ary direct sum of dualizable carriers with the canonical maps on
/// the underlying modules (left-fold of the binary construction).
struct MultiSumDuality {
    DualityData total;
    std::vector<BimoduleMap> inj, proj;
};

inline MultiSumDuality multi_sum_duality(const std::vector<DualityData>& parts) {
    if (parts.empty()) throw std::runtime_error("multi_sum_duality: empty");
    MultiSumDuality acc;
    acc.total = parts[0];
    acc.inj = {BimoduleMap::identity(parts[0].P)};
    acc.proj = {BimoduleMap::identity(parts[0].P)};
    for (std::size_t i = 1; i < parts.size(); ++i) {
        SumDuality s = sum_duality(acc.total, parts[i]);
        for (auto& m : acc.inj) m = s.carrier.inj1.compose_after(m);
        for (auto& m : acc.proj) m = m.compose_after(s.carrier.proj1);
        acc.inj.push_back(s.carrier.inj2);
        acc.proj.push_back(s.carrier.proj2);
        acc.total = s.dual;
    }
    return acc;
}

/// Pointwise biproduct of tuples (eq. "sandwich" of projections and
/// inclusions), with the two injections as tuple morphisms.
struct TupleSum {
    TwistedTuple sum;
    TupleMorphism inj1, inj2, proj1, proj2;
    std::vector<MultiSumDuality> sums;  // per slot: sum of the two carriers
};

inline TupleSum tuple_sum(const TwistedTuple& a, const TwistedTuple& b) {
    if (a.length() != b.length() || !a.ctx.same(b.ctx)) throw std::runtime_error("tuple_sum: shape mismatch");
    const std::size_t n = a.length();
    TupleSum out;
    out.sum.ctx = a.ctx;
    out.sums.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.sums.push_back(multi_sum_duality({a.carriers[j], b.carriers[j]}));
        out.sum.carriers.push_back(out.sums[j].total);
    }
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jn = (j + 1) % n;
        BimoduleMap fa = shapes::h_map(a.ctx, 1, out.sums[j].inj[0])
                             .compose_after(a.maps[j])
                             .compose_after(shapes::g_map(a.ctx, 1, out.sums[jn].proj[0]));
        BimoduleMap fb = shapes::h_map(a.ctx, 1, out.sums[j].inj[1])
                             .compose_after(b.maps[j])
                             .compose_after(shapes::g_map(a.ctx, 1, out.sums[jn].proj[1]));
        out.sum.maps.push_back(fa + fb);
    }
    auto morphism = [&](const TwistedTuple& part, std::size_t which, bool into) {
        TupleMorphism m;
        m.source = into ? part : out.sum;
        m.target = into ? out.sum : part;
        for (std::size_t j = 0; j < n; ++j)
            m.components.push_back(into ? out.sums[j].inj[which] : out.sums[j].proj[which]);
        return m;
    };
    out.inj1 = morphism(a, 0, true);
    out.inj2 = morphism(b, 1, true);
    out.proj1 = morphism(a, 0, false);
    out.proj2 = morphism(b, 1, false);
    return out;
}

inline TwistedEndo endo_sum(const TwistedEndo& a, const TwistedEndo& b) {
    if (a.exponent != b.exponent || !a.ctx.same(b.ctx)) throw std::runtime_error("endo_sum: shape mismatch");
    MultiSumDuality s = multi_sum_duality({a.carrier, b.carrier});
    BimoduleMap fa = shapes::h_map(a.ctx, a.exponent, s.inj[0])
                         .compose_after(a.map)
                         .compose_after(shapes::g_map(a.ctx, a.exponent, s.proj[0]));
    BimoduleMap fb = shapes::h_map(a.ctx, a.exponent, s.inj[1])
                         .compose_after(b.map)
                         .compose_after(shapes::g_map(a.ctx, a.exponent, s.proj[1]));
    return TwistedEndo{a.ctx, a.exponent, s.total, fa + fb};
}

// ----- σ, rotation, Verschiebung --------------------------------------------

/// σ in exponent m: G^m(⊕_j src_j) -> ⊕ -> ⊕ -> H^m(⊕_j tgt_j), where
/// block j is the given map G^m(src_j) -> H^m(tgt_j). The distributivity
/// isomorphisms are the projection/inclusion sandwich.
inline BimoduleMap sigma_blocks(const EndoContext& ctx, std::size_t m, const MultiSumDuality& src,
                                const MultiSumDuality& tgt, const std::vector<BimoduleMap>& blocks) {
    BimoduleMap acc = BimoduleMap::zero(shapes::g_power(ctx, m, src.total.P), shapes::h_power(ctx, m, tgt.total.P));
    for (std::size_t j = 0; j < blocks.size(); ++j)
        acc = acc + shapes::h_map(ctx, m, tgt.inj[j]).compose_after(blocks[j]).compose_after(
                        shapes::g_map(ctx, m, src.proj[j]));
    return acc;
}

/// σ of a tuple: carrier blocks in index order, domain rotated by one.
inline BimoduleMap sigma(const TwistedTuple& t, const MultiSumDuality& straight, const MultiSumDuality& rotated) {
    return sigma_blocks(t.ctx, 1, rotated, straight, t.maps);
}

/// The rotation t : ⊕_{j} c_{σ(j)} -> ⊕_{j} c_{σ(j)+s} by s steps, built
/// from inclusions and projections. src slot j holds carriers[off_src+j],
/// dst slot j holds carriers[off_src+j+s] (indices mod n).
inline BimoduleMap rotation_map(const std::vector<DualityData>& carriers, const MultiSumDuality& src,
                                const MultiSumDuality& dst, std::size_t steps) {
    const std::size_t n = carriers.size();
    BimoduleMap acc = BimoduleMap::zero(src.total.P, dst.total.P);
    for (std::size_t j = 0; j < n; ++j)
        acc = acc + dst.inj[j].compose_after(src.proj[(j + steps) % n]);
    return acc;
}

/// V on a tuple: σ(f_0,...,f_{n-1}) ∘ G(t); carrier ⊕ P_j in index order.
inline TwistedEndo verschiebung_tuple(const TwistedTuple& t) {
    const std::size_t n = t.length();
    MultiSumDuality straight = multi_sum_duality(t.carriers);
    if (n == 1) return TwistedEndo{t.ctx, 1, straight.total, t.maps[0]};
    std::vector<DualityData> rot(t.carriers.begin() + 1, t.carriers.end());
    rot.push_back(t.carriers[0]);
    MultiSumDuality rotated = multi_sum_duality(rot);

    // twist: ⊕_j c_j -> ⊕_j c_{j+1}, component j of the image is p_{j+1}
    BimoduleMap twist = BimoduleMap::zero(straight.total.P, rotated.total.P);
    for (std::size_t j = 0; j < n; ++j) twist = twist + rotated.inj[j].compose_after(straight.proj[(j + 1) % n]);

    BimoduleMap v = sigma(t, straight, rotated).compose_after(shapes::g_map(t.ctx, 1, twist));
    return TwistedEndo{t.ctx, 1, straight.total, v};
}

namespace detail {

inline ConcurrentCache<std::uint64_t, std::optional<DualityData>>& generic_duality_cache() {
    static ConcurrentCache<std::uint64_t, std::optional<DualityData>> cache;
    return cache;
}

}  // namespace detail

/// generic_duality with a per-module memo (keyed by object identity).
inline const std::optional<DualityData>& cached_duality(const Bimodule& p) {
    return detail::generic_duality_cache().get_or_compute(p.id(), [&] { return generic_duality(p); });
}

inline bool twist_is_left_unit(const EndoContext& ctx) {
    return ctx.M.same_presentation(unit_bimodule(ctx.R));
}
inline bool twist_is_right_unit(const EndoContext& ctx) {
    return ctx.N.same_presentation(unit_bimodule(ctx.S));
}

/// Rewrap a map whose endpoints have the same presentation as the stated
/// modules (materializations are deterministic, so equal presentations
/// carry identical matrices).
inline BimoduleMap cast_map(const BimoduleMap& f, const Bimodule& src, const Bimodule& tgt) {
    if (!f.source().same_presentation(src) || !f.target().same_presentation(tgt))
        throw std::runtime_error("cast_map: presentations differ");
    return BimoduleMap(src, tgt, f.matrix(), false);
}

/// The preimage tuple (f, id, ..., id) of an exponent-n endomorphism
/// under Γ, available when M = R or N = S (the identity-padding inverse).
inline TwistedTuple uncompose(const TwistedEndo& f) {
    const std::size_t n = f.exponent;
    const EndoContext& ctx = f.ctx;
    TwistedTuple t;
    t.ctx = ctx;
    if (n == 1) {
        t.carriers = {f.carrier};
        t.maps = {f.map};
        return t;
    }
    auto carrier_duality = [&](const Bimodule& p) {
        const std::optional<DualityData>& d = cached_duality(p);
        if (!d) throw std::runtime_error("uncompose: padded carrier is not dualizable here");
        return *d;
    };
    if (twist_is_right_unit(ctx)) {
        // carriers (P, G^{n-1}P, ..., G P); maps (f~, ρ⁻¹, ..., ρ⁻¹)
        t.carriers.push_back(f.carrier);
        for (std::size_t j = 1; j < n; ++j)
            t.carriers.push_back(carrier_duality(shapes::g_power(ctx, n - j, f.carrier.P)));
        // N^{⊙k} -> N by iterated multiplication (N = U_S)
        std::function<BimoduleMap(std::size_t)> collapse = [&](std::size_t k) -> BimoduleMap {
            if (k == 1) return BimoduleMap::identity(ctx.N);
            BimoduleMap inner = tensor_map(BimoduleMap::identity(ctx.N), collapse(k - 1));
            BimoduleMap mult = cast_map(left_unitor(ctx.N), tensor(ctx.N, ctx.N).module, ctx.N);
            return mult.compose_after(inner);
        };
        // f_0 = (id_P ⊙ collapse) ∘ f.map : G^n(P) -> P ⊙ N
        t.maps.push_back(
            tensor_map(BimoduleMap::identity(f.carrier.P), collapse(n)).compose_after(f.map));
        for (std::size_t j = 1; j < n; ++j) {
            // f_j = ρ⁻¹ : G(c_{j+1}) = c_j -> c_j ⊙ N
            const Bimodule& cj = t.carriers[j].P;
            t.maps.push_back(cast_map(right_unitor_inverse(cj), cj, tensor(cj, ctx.N).module));
        }
        return t;
    }
    if (twist_is_left_unit(ctx)) {
        // carriers (P, H P, ..., H^{n-1} P); maps (λ-id, ..., λ-id, f~)
        t.carriers.push_back(f.carrier);
        for (std::size_t j = 1; j < n; ++j)
            t.carriers.push_back(carrier_duality(shapes::h_power(ctx, j, f.carrier.P)));
        for (std::size_t j = 0; j + 1 < n; ++j) {
            // f_j : G(c_{j+1}) -> H(c_j);  λ then re-bracket H^{j+1}P ≅ H(H^j P)
            const Bimodule& next = t.carriers[j + 1].P;
            BimoduleMap lam = cast_map(left_unitor(next), tensor(ctx.M, next).module, next);
            BimoduleMap re = canonical_iso(
                shapes::h_power_word(ctx, j + 1, TensorWord::leaf(f.carrier.P)),
                TensorWord::pair(shapes::h_power_word(ctx, j, TensorWord::leaf(f.carrier.P)),
                                 TensorWord::leaf(ctx.N)));
            t.maps.push_back(re.compose_after(lam));
        }
        // f_{n-1} : G(c_0) -> H(c_{n-1});  collapse one unitor, insert n of
        // them, apply f, re-bracket the outermost N
        BimoduleMap expand = cast_map(left_unitor(f.carrier.P), tensor(ctx.M, f.carrier.P).module, f.carrier.P);
        for (std::size_t k = 0; k < n; ++k) {
            Bimodule cur = expand.target();
            expand = cast_map(left_unitor_inverse(cur), cur, tensor(ctx.M, cur).module).compose_after(expand);
        }
        BimoduleMap re = canonical_iso(
            shapes::h_power_word(ctx, n, TensorWord::leaf(f.carrier.P)),
            TensorWord::pair(shapes::h_power_word(ctx, n - 1, TensorWord::leaf(f.carrier.P)),
                             TensorWord::leaf(ctx.N)));
        t.maps.push_back(re.compose_after(f.map).compose_after(expand));
        return t;
    }
    throw std::runtime_error("verschiebung: Γ-inverse unavailable (need M = R or N = S); supply a tuple instead");
}

/// V^n on a single twisted endomorphism via identity padding.
inline TwistedEndo verschiebung(const TwistedEndo& f) {
    if (f.exponent == 1) return f;
    return verschiebung_tuple(uncompose(f));
}

/// The F^m∘V^n normal form: G^m(t^m) followed by σ of the Γ'-blocks
/// Γ'(f_i, ..., f_{i+m-1}). Exponent-m endomorphism on ⊕ P_j.
inline TwistedEndo fv_formula(const TwistedTuple& t, std::size_t m) {
    const std::size_t n = t.length();
    MultiSumDuality straight = multi_sum_duality(t.carriers);
    std::vector<DualityData> shifted;
    for (std::size_t j = 0; j < n; ++j) shifted.push_back(t.carriers[(j + m) % n]);
    MultiSumDuality rotated = (m % n == 0) ? straight : multi_sum_duality(shifted);

    BimoduleMap tw = rotation_map(t.carriers, straight, rotated, m % n);

    std::vector<BimoduleMap> blocks;
    for (std::size_t i = 0; i < n; ++i) {
        OpChain chain;
        chain.ctx = t.ctx;
        chain.exponents.assign(m, 1);
        for (std::size_t k = 0; k <= m; ++k) chain.carriers.push_back(t.carriers[(i + k) % n].P);
        for (std::size_t k = 0; k < m; ++k) chain.maps.push_back(t.maps[(i + k) % n]);
        blocks.push_back(gamma_prime(chain));
    }
    BimoduleMap v = sigma_blocks(t.ctx, m, rotated, straight, blocks)
                        .compose_after(shapes::g_map(t.ctx, m, tw));
    return TwistedEndo{t.ctx, m, straight.total, v};
}

// ----- exact sequences ------------------------------------------------------

/// Exactness of tuple morphisms, checked componentwise on the underlying
/// additive groups by lattice comparison.
inline bool is_exact(const TupleMorphism& phi, const TupleMorphism& psi) {
    if (phi.components.size() != psi.components.size()) return false;
    for (std::size_t j = 0; j < phi.components.size(); ++j)
        if (!(phi.components[j].target().additive() == psi.components[j].source().additive())) return false;
    if (!phi.squares_commute() || !psi.squares_commute()) return false;
    for (std::size_t j = 0; j < phi.components.size(); ++j)
        if (!is_exact_pair(phi.components[j], psi.components[j])) return false;
    return true;
}

/// Short exact sequence of tuples built block-upper-triangularly: the
/// middle endomorphism is [[a, c],[0, b]] on P' ⊕ P'' (split as right
/// modules), with c drawn from the linearity lattice.
struct TupleSES {
    TwistedTuple sub, middle, quotient;
    TupleMorphism inclusion, projection;
};

inline BimoduleMap random_bimodule_map(Rng& rng, const Bimodule& src, const Bimodule& tgt, long span = 3) {
    LinearSolver solver = bimodule_map_solver(src, tgt);
    const IntMat& lat = solver.lattice();
    std::vector<Int> v(solver.unknowns());
    for (std::size_t j = 0; j < lat.cols(); ++j) {
        Int c = rng.uniform_int(-span, span);
        if (c == 0) continue;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * lat(i, j);
    }
    return BimoduleMap(src, tgt, unvec(v, tgt.rank(), src.rank()), false);
}

inline TupleSES make_ses(const TwistedTuple& a, const TwistedTuple& b, Rng& rng) {
    TupleSES out;
    out.sub = a;
    out.quotient = b;
    out.sum = std::make_shared<TupleSum>(tuple_sum(a, b));
    out.middle = out.sum->sum.sum;  // start от the block-diagonal part
    const std::size_t n = a.length();
    // add a strictly upper-triangular corner: G(P''_{j+1}) -> H(P'_j)
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jn = (j + 1) % n;
        BimoduleMap corner = random_bimodule_map(rng, tensor(a.ctx.M, b.carriers[jn].P).module,
                                                 tensor(a.carriers[j].P, a.ctx.N).module);
        BimoduleMap lift = shapes::h_map(a.ctx, 1, out.sum->sums[j].inj[0])
                               .compose_after(corner)
                               .compose_after(shapes::g_map(a.ctx, 1, out.sum->sums[jn].proj[1]));
        out.middle.maps[j] = out.middle.maps[j] + lift;
    }
    out.inclusion = out.sum->inj1;
    out.inclusion.source = &out.sub;
    out.inclusion.target = &out.middle;
    out.projection = out.sum->proj2;
    out.projection.source = &out.middle;
    out.projection.target = &out.quotient;
    return out;
}

/// Reinterpret an exponent-n endomorphism as an exponent-1 object over
/// the materialized twists (M^{⊙n}, N^{⊙n}).
inline TwistedEndo as_exponent_one(const TwistedEndo& f) {
    if (f.exponent == 1) return f;
    const EndoContext& ctx = f.ctx;
    Bimodule mn = shapes::n_power(ctx, f.exponent);
    Bimodule mm = TensorWord::right_comb(std::vector<Bimodule>(f.exponent, ctx.M)).materialize();
    EndoContext big{ctx.R, ctx.S, mm, mn};
    TensorWord src_flat = shapes::g_power_word(ctx, f.exponent, TensorWord::leaf(f.carrier.P));
    TensorWord src_pair = TensorWord::pair(
        TensorWord::right_comb(std::vector<Bimodule>(f.exponent, ctx.M)), TensorWord::leaf(f.carrier.P));
    BimoduleMap in = canonical_iso(src_pair, src_flat);
    // target words coincide: comb([P, N...]) = pair(leaf P, comb(N...))
    return TwistedEndo{big, 1, f.carrier, f.map.compose_after(in)};
}

}  // namespace wittrace
