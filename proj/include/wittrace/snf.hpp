#pragma once

#include "wittrace/matrix.hpp"

#include <algorithm>
#include <optional>
#include <utility>

namespace wittrace {

/// Smith normal form D = U * A * V with U, V unimodular and the diagonal
/// of D nonnegative with d_1 | d_2 | ... (zeros trailing). U_inv is the
/// exact inverse of U, maintained during elimination.
struct SmithForm {
    IntMat U, U_inv, D, V;

    std::vector<Int> diagonal() const {
        std::size_t n = std::min(D.rows(), D.cols());
        std::vector<Int> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = D(i, i);
        return d;
    }
};

/// Deterministic SNF by alternating row and column echelon reduction with
/// full above-pivot reduction (the naive single-pivot scheme suffers
/// catastrophic entry growth already on random 8x8 inputs). Pivot choice:
/// smallest nonzero absolute value, ties by position. Ends with a 2x2 gcd
/// pass enforcing the divisibility chain.
inline SmithForm smith_normal_form(const IntMat& a) {
    const std::size_t m = a.rows(), n = a.cols();
    SmithForm s{IntMat::identity(m), IntMat::identity(m), a, IntMat::identity(n)};
    IntMat& D = s.D;
    IntMat& U = s.U;
    IntMat& Ui = s.U_inv;
    IntMat& V = s.V;

    auto swap_rows = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < n; ++c) std::swap(D(i, c), D(j, c));
        for (std::size_t c = 0; c < m; ++c) std::swap(U(i, c), U(j, c));
        for (std::size_t r = 0; r < m; ++r) std::swap(Ui(r, i), Ui(r, j));
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < m; ++r) std::swap(D(r, i), D(r, j));
        for (std::size_t r = 0; r < n; ++r) std::swap(V(r, i), V(r, j));
    };
    // row_i -= q * row_t  (and U <- E U, U_inv <- U_inv E^{-1})
    auto add_row = [&](std::size_t i, std::size_t t, const Int& q) {
        if (q == 0) return;
        for (std::size_t c = 0; c < n; ++c) D(i, c) -= q * D(t, c);
        for (std::size_t c = 0; c < m; ++c) U(i, c) -= q * U(t, c);
        for (std::size_t r = 0; r < m; ++r) Ui(r, t) += q * Ui(r, i);
    };
    auto add_col = [&](std::size_t j, std::size_t t, const Int& q) {
        if (q == 0) return;
        for (std::size_t r = 0; r < m; ++r) D(r, j) -= q * D(r, t);
        for (std::size_t r = 0; r < n; ++r) V(r, j) -= q * V(r, t);
    };
    auto negate_row = [&](std::size_t i) {
        for (std::size_t c = 0; c < n; ++c) D(i, c) = -D(i, c);
        for (std::size_t c = 0; c < m; ++c) U(i, c) = -U(i, c);
        for (std::size_t r = 0; r < m; ++r) Ui(r, i) = -Ui(r, i);
    };
    auto negate_col = [&](std::size_t j) {
        for (std::size_t r = 0; r < m; ++r) D(r, j) = -D(r, j);
        for (std::size_t r = 0; r < n; ++r) V(r, j) = -V(r, j);
    };

    // One row-echelon sweep: staircase pivots at (0,0), (1,1), ...; below-
    // pivot entries cleared, above-pivot entries reduced into [0, pivot).
    auto row_sweep = [&]() {
        std::size_t r = 0;
        for (std::size_t c = 0; c < n && r < m; ++c) {
            for (;;) {
                std::size_t best = m;
                for (std::size_t i = r; i < m; ++i)
                    if (D(i, c) != 0 && (best == m || abs(D(i, c)) < abs(D(best, c)))) best = i;
                if (best == m) break;
                swap_rows(r, best);
                bool stable = true;
                for (std::size_t i = r + 1; i < m; ++i)
                    if (D(i, c) != 0) {
                        add_row(i, r, rounded_div(D(i, c), D(r, c)));
                        if (D(i, c) != 0) stable = false;
                    }
                if (stable) break;
            }
            if (D(r, c) == 0) continue;
            if (D(r, c) < 0) negate_row(r);
            for (std::size_t i = 0; i < r; ++i) add_row(i, r, floor_div(D(i, c), D(r, c)));
            swap_cols(r, c);  // pull the pivot column into staircase position
            ++r;
        }
    };
    auto col_sweep = [&]() {
        std::size_t c = 0;
        for (std::size_t r = 0; r < m && c < n; ++r) {
            for (;;) {
                std::size_t best = n;
                for (std::size_t j = c; j < n; ++j)
                    if (D(r, j) != 0 && (best == n || abs(D(r, j)) < abs(D(r, best)))) best = j;
                if (best == n) break;
                swap_cols(c, best);
                bool stable = true;
                for (std::size_t j = c + 1; j < n; ++j)
                    if (D(r, j) != 0) {
                        add_col(j, c, rounded_div(D(r, j), D(r, c)));
                        if (D(r, j) != 0) stable = false;
                    }
                if (stable) break;
            }
            if (D(r, c) == 0) continue;
            if (D(r, c) < 0) negate_col(c);
            for (std::size_t j = 0; j < c; ++j) add_col(j, c, floor_div(D(r, j), D(r, c)));
            swap_rows(c, r);
            ++c;
        }
    };
    auto off_diagonal_zero = [&]() {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && D(i, j) != 0) return false;
        return true;
    };

    row_sweep();
    for (int pass = 0; !off_diagonal_zero(); ++pass) {
        if (pass > 1000) throw std::runtime_error("smith_normal_form: sweep alternation failed to converge");
        col_sweep();
        if (off_diagonal_zero()) break;
        row_sweep();
    }

    // Normalize: positive diagonal, zeros pushed last.
    const std::size_t rank = std::min(m, n);
    for (std::size_t i = 0; i < rank; ++i)
        if (D(i, i) < 0) negate_row(i);
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = i + 1; j < rank; ++j)
            if (D(i, i) == 0 && D(j, j) != 0) {
                swap_rows(i, j);
                swap_cols(i, j);
            }

    // Divisibility chain via 2x2 gcd steps, diag(a,b) -> diag(gcd, ±lcm).
    // All other entries in rows/cols i, j vanish, so the Euclid loop stays
    // confined to the four block positions.
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = i + 1; j < rank; ++j) {
            if (D(i, i) == 0) continue;  // everything after is zero too
            if (D(j, j) % D(i, i) == 0) continue;
            add_row(i, j, Int(-1));  // row_i += row_j: block [[a,b],[0,b]]
            while (D(i, j) != 0 || D(j, i) != 0 || D(j, j) % D(i, i) != 0) {
                if (D(i, j) == 0 && D(j, i) == 0) {
                    add_row(i, j, Int(-1));  // re-expose the non-dividing entry
                    continue;
                }
                // move the smallest-magnitude nonzero entry to (i,i)
                auto better = [&](const Int& x) { return x != 0 && (D(i, i) == 0 || abs(x) < abs(D(i, i))); };
                if (better(D(j, j))) {
                    swap_rows(i, j);
                    swap_cols(i, j);
                }
                if (better(D(i, j))) swap_cols(i, j);
                if (better(D(j, i))) swap_rows(i, j);
                if (D(i, j) != 0) add_col(j, i, rounded_div(D(i, j), D(i, i)));
                if (D(j, i) != 0) add_row(j, i, rounded_div(D(j, i), D(i, i)));
            }
            if (D(i, i) < 0) negate_row(i);
            if (D(j, j) < 0) negate_row(j);
        }
    return s;
}

/// Row-style Hermite normal form: the unique canonical basis (as rows) of
/// the row lattice of A. Pivots positive, entries above each pivot reduced
/// into [0, pivot). Zero rows dropped.
inline IntMat hermite_rows(IntMat a) {
    const std::size_t m = a.rows(), n = a.cols();
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < n; ++c) std::swap(a(i, c), a(j, c));
    };
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        // clear column c below row r, leaving the gcd at (r, c)
        for (;;) {
            std::size_t best = m;
            for (std::size_t i = r; i < m; ++i)
                if (a(i, c) != 0 && (best == m || abs(a(i, c)) < abs(a(best, c)))) best = i;
            if (best == m) break;
            swap_rows(r, best);
            bool stable = true;
            for (std::size_t i = r + 1; i < m; ++i)
                if (a(i, c) != 0) {
                    Int q = rounded_div(a(i, c), a(r, c));
                    for (std::size_t k = 0; k < n; ++k) a(i, k) -= q * a(r, k);
                    if (a(i, c) != 0) stable = false;
                }
            if (stable) break;
        }
        if (a(r, c) == 0) continue;
        if (a(r, c) < 0)
            for (std::size_t k = 0; k < n; ++k) a(r, k) = -a(r, k);
        for (std::size_t i = 0; i < r; ++i) {
            Int q = floor_div(a(i, c), a(r, c));
            if (q != 0)
                for (std::size_t k = 0; k < n; ++k) a(i, k) -= q * a(r, k);
        }
        ++r;
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < r; ++i) keep.push_back(i);
    return a.submatrix_rows(keep);
}

/// Canonical form of the lattice spanned by the COLUMNS of A. Two
/// generating sets span the same lattice iff their canonical forms match.
inline IntMat lattice_canonical(const IntMat& columns) {
    return hermite_rows(columns.transpose());
}

inline bool lattice_equal(const IntMat& cols_a, const IntMat& cols_b) {
    return lattice_canonical(cols_a) == lattice_canonical(cols_b);
}

/// Reduce x to the canonical coset representative modulo the lattice
/// spanned by the columns of `lattice` (via the Hermite basis).
inline std::vector<Int> reduce_mod_lattice(std::vector<Int> x, const IntMat& lattice) {
    IntMat h = lattice_canonical(lattice);  // rows are basis vectors
    for (std::size_t i = 0; i < h.rows(); ++i) {
        std::size_t c = 0;
        while (c < h.cols() && h(i, c) == 0) ++c;
        if (c == h.cols()) continue;
        Int q = floor_div(x[c], h(i, c));
        if (q != 0)
            for (std::size_t k = 0; k < h.cols(); ++k) x[k] -= q * h(i, k);
    }
    return x;
}

/// Exact solver for A x ≡ b (mod m_i row-wise); modulus 0 means an
/// equation over Z. Factors once; solves many right-hand sides. Also
/// exposes a generating set of the homogeneous solution lattice in x.
class LinearSolver {
  public:
    LinearSolver(const IntMat& a, const std::vector<Int>& moduli) : n_(a.cols()) {
        // append one column m_i * e_i per nonzero modulus; solve over Z
        std::vector<std::size_t> mod_rows;
        for (std::size_t i = 0; i < moduli.size(); ++i)
            if (moduli[i] != 0) mod_rows.push_back(i);
        IntMat aug(a.rows(), a.cols() + mod_rows.size());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        for (std::size_t k = 0; k < mod_rows.size(); ++k) aug(mod_rows[k], a.cols() + k) = moduli[mod_rows[k]];
        snf_ = smith_normal_form(aug);

        // homogeneous lattice: x-parts of the free columns of V
        std::vector<Int> diag = snf_.diagonal();
        std::size_t cols = aug.cols();
        std::vector<std::size_t> free_cols;
        for (std::size_t j = 0; j < cols; ++j)
            if (j >= diag.size() || diag[j] == 0) free_cols.push_back(j);
        IntMat basis(n_, free_cols.size());
        for (std::size_t k = 0; k < free_cols.size(); ++k)
            for (std::size_t i = 0; i < n_; ++i) basis(i, k) = snf_.V(i, free_cols[k]);
        lattice_ = hermite_rows(basis.transpose()).transpose();
    }

    explicit LinearSolver(const IntMat& a) : LinearSolver(a, std::vector<Int>(a.rows(), Int(0))) {}

    std::size_t unknowns() const { return n_; }

    /// Columns generate all homogeneous solutions (already Hermite-reduced).
    const IntMat& lattice() const { return lattice_; }

    /// A particular solution, or nullopt when the system is inconsistent.
    std::optional<std::vector<Int>> solve(const std::vector<Int>& b) const {
        std::vector<Int> c = snf_.U * b;
        std::vector<Int> diag = snf_.diagonal();
        std::vector<Int> y(snf_.V.rows());
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i < diag.size() && diag[i] != 0) {
                if (c[i] % diag[i] != 0) return std::nullopt;
                y[i] = c[i] / diag[i];
            } else if (c[i] != 0) {
                return std::nullopt;
            }
        }
        std::vector<Int> z = snf_.V * y;
        z.resize(n_);
        return z;
    }

    /// Deterministic canonical solution: particular solution reduced
    /// modulo the homogeneous lattice.
    std::optional<std::vector<Int>> solve_canonical(const std::vector<Int>& b) const {
        auto x = solve(b);
        if (!x) return std::nullopt;
        return reduce_mod_lattice(*x, lattice_);
    }

    bool contains(const std::vector<Int>& b) const { return solve(b).has_value(); }

  private:
    std::size_t n_;
    SmithForm snf_;
    IntMat lattice_;
};

/// Convenience wrapper matching the one-shot signature used by callers
/// that need a single system: particular solution plus solution lattice.
struct SolveResult {
    std::optional<std::vector<Int>> solution;
    IntMat lattice;
};

inline SolveResult solve_modular(const IntMat& a, const std::vector<Int>& b, const std::vector<Int>& moduli) {
    LinearSolver s(a, moduli);
    return {s.solve(b), s.lattice()};
}

}  // namespace wittrace
