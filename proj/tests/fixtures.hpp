#pragma once

#include <random>
#include <vector>

#include "flatforge/catalog.hpp"

namespace fixtures {

using namespace flatforge;

struct Coextension {
    Matroid m;
    Subset j;
    Subset a;
};

// [I B; 0 D] with D an AG(3,2) representation, |J| = 1 or 2 and B random
// (or zero). Elements of J come first.
inline Coextension ag32_coextension(std::mt19937_64& rng, bool zero) {
    const auto ag = affine_geometry(3, 2);
    const int jn = 1 + static_cast<int>(rng() % 2);
    const int dim = jn + 4;
    std::vector<VecGF> cols;
    for (int i = 0; i < jn; ++i) {
        VecGF v(2, std::vector<Residue>(static_cast<std::size_t>(dim), 0));
        v[static_cast<std::size_t>(i)] = 1;
        cols.push_back(v);
    }
    for (std::size_t x = 0; x < ag.size(); ++x) {
        VecGF v(2, std::vector<Residue>(static_cast<std::size_t>(dim), 0));
        for (int i = 0; i < jn; ++i) v[static_cast<std::size_t>(i)] = zero ? 0 : static_cast<Residue>(rng() & 1U);
        for (int i = 0; i < 4; ++i) v[static_cast<std::size_t>(jn + i)] = ag.vector(x)[static_cast<std::size_t>(i)];
        cols.push_back(v);
    }
    Matroid m(2, dim, cols);
    Subset j(m.size());
    for (int i = 0; i < jn; ++i) j.set(static_cast<std::size_t>(i));
    Subset a = m.ground() - j;
    return {std::move(m), j, a};
}

}  // namespace fixtures
