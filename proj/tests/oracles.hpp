#pragma once

// Test-only oracles, independent of the library's computational paths.

#include "wittrace/matrix.hpp"

#include <vector>

namespace oracles {

using wittrace::Int;
using wittrace::IntMat;

// Determinant by Laplace expansion; fine for the small sizes oracles use.
inline Int det_expand(const IntMat& a) {
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    if (n == 1) return a(0, 0);
    Int d = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (a(0, j) == 0) continue;
        IntMat minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor(r - 1, cc++) = a(r, c);
            }
        }
        Int term = a(0, j) * det_expand(minor);
        d += (j % 2 == 0) ? term : -term;
    }
    return d;
}

// k-th determinant divisor: gcd of all k x k minors (0 when all vanish).
inline Int determinant_divisor(const IntMat& a, std::size_t k) {
    std::vector<std::size_t> ri(k), ci(k);
    Int g = 0;
    // enumerate k-subsets of rows and columns
    std::vector<std::size_t> rows(k), cols(k);
    auto next_subset = [](std::vector<std::size_t>& s, std::size_t n) {
        std::size_t k2 = s.size();
        for (std::size_t i = k2; i-- > 0;) {
            if (s[i] + (k2 - i) < n) {
                ++s[i];
                for (std::size_t j = i + 1; j < k2; ++j) s[j] = s[j - 1] + 1;
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < k; ++i) rows[i] = i;
    do {
        for (std::size_t i = 0; i < k; ++i) cols[i] = i;
        do {
            IntMat sub(k, k);
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t c = 0; c < k; ++c) sub(r, c) = a(rows[r], cols[c]);
            g = wittrace::gcd(g, det_expand(sub));
        } while (next_subset(cols, a.cols()));
    } while (next_subset(rows, a.rows()));
    return g;
}

// Invariant factors of coker(A) restricted to the diagonal length, via
// determinant-divisor ratios d_k = D_k / D_{k-1}.
inline std::vector<Int> invariant_factors_by_minors(const IntMat& a) {
    std::size_t n = std::min(a.rows(), a.cols());
    std::vector<Int> out;
    Int prev = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        Int dk = determinant_divisor(a, k);
        if (dk == 0) {
            out.push_back(0);
            continue;  // all later divisors vanish too
        }
        out.push_back(dk / prev);
        prev = dk;
    }
    return out;
}

}  // namespace oracles
