#pragma once

#include <complex>
#include <map>
#include <variant>

#include "qsetk/counting.hpp"

namespace qsetk {

inline constexpr Nat kFockDim = 8;
inline constexpr double kFockEps = 1e-9;

// Single-mode state truncated to number basis 0..dim-1.
struct FockState {
  std::vector<std::complex<double>> amps;
  bool normalization_applied = false;
  Nat dim() const { return amps.size(); }
};

// Row-major dim x dim matrix in the number basis.
struct DensityMatrix {
  std::vector<std::complex<double>> entries;
  Nat dim = 0;
  std::complex<double>& at(Nat r, Nat c) { return entries[r * dim + c]; }
  const std::complex<double>& at(Nat r, Nat c) const { return entries[r * dim + c]; }
};

struct Eigenstate {
  Nat n = 0;
};
struct IgnoranceMixture {
  std::map<Nat, double> dist;
};
struct UndefinedParticleNumber {
  double off_diag_norm = 0.0;
};
using NumberVerdict = std::variant<Eigenstate, IgnoranceMixture, UndefinedParticleNumber>;

FockState make_state(const std::vector<std::pair<Nat, std::complex<double>>>& amps,
                     Nat dim = kFockDim);
DensityMatrix density_of(const FockState& s);
DensityMatrix mixture(const std::vector<std::pair<Nat, double>>& ps, Nat dim = kFockDim);

double off_diagonal_norm(const DensityMatrix& rho);

// Eigenstate if rho is diagonal with one support point, IgnoranceMixture if
// diagonal with several, UndefinedParticleNumber otherwise. Validates rho
// first: Hermitian, trace 1, positive semidefinite, all within eps.
NumberVerdict number_verdict(const DensityMatrix& rho, double eps = kFockEps);

struct WeightedQset {
  double probability = 0.0;
  Qset qset;
};

// Eigenstate(n) becomes the pure qset of n m-atoms with probability 1; a
// mixture becomes one entry per support point. An undefined particle number
// has no quasiset at all and throws.
std::vector<WeightedQset> to_qset(const NumberVerdict& verdict, const UniversePtr& u,
                                  const std::string& kind_label);

struct IonizationRun {
  Chain chain;
  std::vector<std::string> extracted_kinds;
};

// Extracts one m-atom at a time (kind picked with probability proportional to
// remaining multiplicity) until nothing is left. The seed decides which
// tokens go first, which no observable depends on.
IonizationRun ionization_experiment(const Qset& x, Nat seed);

}  // namespace qsetk
