#pragma once

// Shared construction helpers for the test suites.

#include "wittrace/bimodule.hpp"
#include "wittrace/rng.hpp"
#include "wittrace/tensor.hpp"

namespace helpers {

using namespace wittrace;

// Z/m (or Z for m = 0) as a bimodule over the integers.
inline Bimodule cyclic_over_z(const Int& m) {
    FinAlgebra z = catalog::integers();
    FinAbGroup g = (m == 0) ? FinAbGroup::free(1) : FinAbGroup::cyclic(m);
    std::vector<IntMat> act{IntMat::identity(g.rank())};
    return Bimodule(z, z, g, act, act);
}

// A random bimodule map drawn from the linearity solution lattice with
// small integer coefficients.
inline BimoduleMap random_map(Rng& rng, const Bimodule& src, const Bimodule& tgt) {
    LinearSolver solver = bimodule_map_solver(src, tgt);
    const IntMat& lat = solver.lattice();
    std::vector<Int> v(solver.unknowns());
    for (std::size_t j = 0; j < lat.cols(); ++j) {
        Int c = rng.uniform_int(-3, 3);
        if (c == 0) continue;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * lat(i, j);
    }
    return BimoduleMap(src, tgt, unvec(v, tgt.rank(), src.rank()));
}

inline std::vector<Int> random_element(Rng& rng, const FinAbGroup& g, long span = 9) {
    std::vector<Int> v(g.rank());
    for (auto& x : v) x = rng.uniform_int(-span, span);
    return g.reduce(v);
}

}  // namespace helpers
