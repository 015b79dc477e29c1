#pragma once

#include <random>

#include "qsetk/core.hpp"

namespace qsetk::oracle {

// Ground-truth element count at the carrier level: |m| + |c| + |nested|.
// The counting machinery must never call this; tests compare against it.
Nat card(const Qset& x);

// Kind-preserving token renaming: maps[k] is a bijection on kind k's pool.
struct Permutation {
  std::vector<std::vector<std::uint32_t>> maps;
};

Permutation identity_permutation(const UniversePtr& u);
Permutation random_permutation(const UniversePtr& u, std::mt19937_64& rng);

// X with every token renamed through pi, recursively through nested qsets.
Qset permute(const Qset& x, const Permutation& pi);

}  // namespace qsetk::oracle
