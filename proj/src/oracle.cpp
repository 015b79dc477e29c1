#include "qsetk/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace qsetk::oracle {

Nat card(const Qset& x) {
  return x.tokens().size() + x.classical_part().size() + x.nested_part().size();
}

Permutation identity_permutation(const UniversePtr& u) {
  Permutation pi;
  pi.maps.resize(u->kind_count());
  for (std::size_t k = 0; k < u->kind_count(); ++k) {
    pi.maps[k].resize(u->pool_size(k));
    std::iota(pi.maps[k].begin(), pi.maps[k].end(), 0);
  }
  return pi;
}

Permutation random_permutation(const UniversePtr& u, std::mt19937_64& rng) {
  Permutation pi = identity_permutation(u);
  for (auto& map : pi.maps) std::shuffle(map.begin(), map.end(), rng);
  return pi;
}

namespace {

void validate(const Qset& x, const Permutation& pi) {
  const auto& u = *x.universe();
  if (pi.maps.size() != u.kind_count())
    throw Error(ErrorCode::KindViolation, "permutation covers wrong number of kinds");
  for (std::size_t k = 0; k < u.kind_count(); ++k) {
    if (pi.maps[k].size() != u.pool_size(k))
      throw Error(ErrorCode::KindViolation,
                  "permutation map size differs from pool of kind " + u.kind(k).label);
    std::vector<bool> hit(pi.maps[k].size(), false);
    for (auto s : pi.maps[k]) {
      if (s >= hit.size() || hit[s])
        throw Error(ErrorCode::KindViolation,
                    "permutation is not a bijection on kind " + u.kind(k).label);
      hit[s] = true;
    }
  }
}

Qset apply(const Qset& x, const Permutation& pi) {
  std::vector<Token> m;
  m.reserve(x.tokens().size());
  for (const auto& t : x.tokens()) m.push_back(Token{t.kind, pi.maps[t.kind][t.serial]});
  std::vector<Qset> nested;
  nested.reserve(x.nested_part().size());
  for (const auto& n : x.nested_part()) nested.push_back(apply(n, pi));
  return Qset::from_parts(x.universe(),
                          std::move(m),
                          {x.classical_part().begin(), x.classical_part().end()},
                          std::move(nested));
}

}  // namespace

Qset permute(const Qset& x, const Permutation& pi) {
  validate(x, pi);
  return apply(x, pi);
}

}  // namespace qsetk::oracle
