#include "qsetk/fock.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

namespace qsetk {

FockState make_state(const std::vector<std::pair<Nat, std::complex<double>>>& amps,
                     Nat dim) {
  FockState s;
  s.amps.assign(dim, {0.0, 0.0});
  for (const auto& [n, a] : amps) {
    if (n >= dim)
      throw Error(ErrorCode::IndexOutOfRange,
                  "number index " + std::to_string(n) + " outside truncation " +
                      std::to_string(dim));
    s.amps[n] += a;
  }
  double norm2 = 0.0;
  for (const auto& a : s.amps) norm2 += std::norm(a);
  if (norm2 <= 0.0)
    throw Error(ErrorCode::ZeroVector, "state has no nonzero amplitude");
  if (std::abs(norm2 - 1.0) > kFockEps) {
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& a : s.amps) a *= scale;
    s.normalization_applied = true;
  }
  return s;
}

DensityMatrix density_of(const FockState& s) {
  DensityMatrix rho;
  rho.dim = s.dim();
  rho.entries.assign(rho.dim * rho.dim, {0.0, 0.0});
  for (Nat r = 0; r < rho.dim; ++r)
    for (Nat c = 0; c < rho.dim; ++c)
      rho.at(r, c) = s.amps[r] * std::conj(s.amps[c]);
  return rho;
}

DensityMatrix mixture(const std::vector<std::pair<Nat, double>>& ps, Nat dim) {
  DensityMatrix rho;
  rho.dim = dim;
  rho.entries.assign(dim * dim, {0.0, 0.0});
  double total = 0.0;
  for (const auto& [n, p] : ps) {
    if (n >= dim)
      throw Error(ErrorCode::IndexOutOfRange,
                  "number index " + std::to_string(n) + " outside truncation " +
                      std::to_string(dim));
    if (p < 0.0)
      throw Error(ErrorCode::BadDistribution,
                  "negative probability " + std::to_string(p));
    rho.at(n, n) += p;
    total += p;
  }
  if (std::abs(total - 1.0) > kFockEps)
    throw Error(ErrorCode::BadDistribution,
                "probabilities sum to " + std::to_string(total));
  return rho;
}

double off_diagonal_norm(const DensityMatrix& rho) {
  double sum = 0.0;
  for (Nat r = 0; r < rho.dim; ++r)
    for (Nat c = 0; c < rho.dim; ++c)
      if (r != c) sum += std::norm(rho.at(r, c));
  return std::sqrt(sum);
}

namespace {

void validate_density(const DensityMatrix& rho, double eps) {
  if (rho.dim == 0 || rho.entries.size() != rho.dim * rho.dim)
    throw Error(ErrorCode::InvalidDensity, "malformed matrix");
  std::complex<double> trace = 0.0;
  for (Nat r = 0; r < rho.dim; ++r) {
    trace += rho.at(r, r);
    for (Nat c = 0; c < rho.dim; ++c)
      if (std::abs(rho.at(r, c) - std::conj(rho.at(c, r))) > eps)
        throw Error(ErrorCode::InvalidDensity, "matrix is not Hermitian");
  }
  if (std::abs(trace - std::complex<double>(1.0)) > eps)
    throw Error(ErrorCode::InvalidDensity,
                "trace is " + std::to_string(trace.real()) + " rather than 1");
  Eigen::MatrixXcd m(rho.dim, rho.dim);
  for (Nat r = 0; r < rho.dim; ++r)
    for (Nat c = 0; c < rho.dim; ++c) m(r, c) = rho.at(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::InvalidDensity, "eigenvalue computation failed");
  if (solver.eigenvalues().minCoeff() < -eps)
    throw Error(ErrorCode::InvalidDensity,
                "matrix is not positive semidefinite; lowest eigenvalue " +
                    std::to_string(solver.eigenvalues().minCoeff()));
}

}  // namespace

NumberVerdict number_verdict(const DensityMatrix& rho, double eps) {
  if (eps <= 0.0)
    throw Error(ErrorCode::InvalidDensity, "tolerance must be positive");
  validate_density(rho, eps);
  const double off = off_diagonal_norm(rho);
  if (off > eps) return UndefinedParticleNumber{off};
  std::map<Nat, double> support;
  for (Nat n = 0; n < rho.dim; ++n) {
    const double p = rho.at(n, n).real();
    if (p > eps) support[n] = p;
  }
  if (support.size() == 1) return Eigenstate{support.begin()->first};
  return IgnoranceMixture{std::move(support)};
}

std::vector<WeightedQset> to_qset(const NumberVerdict& verdict, const UniversePtr& u,
                                  const std::string& kind_label) {
  if (const auto* undef = std::get_if<UndefinedParticleNumber>(&verdict))
    throw Error(ErrorCode::NoQuasisetRepresentation,
                "particle number is undefined; off-diagonal norm " +
                    std::to_string(undef->off_diag_norm));
  std::vector<WeightedQset> out;
  if (const auto* eigen = std::get_if<Eigenstate>(&verdict)) {
    out.push_back({1.0, make_qset(u, QsetSpec{{{kind_label, eigen->n}}, {}})});
    return out;
  }
  for (const auto& [n, p] : std::get<IgnoranceMixture>(verdict).dist)
    out.push_back({p, make_qset(u, QsetSpec{{{kind_label, n}}, {}})});
  return out;
}

IonizationRun ionization_experiment(const Qset& x, Nat seed) {
  if (!x.is_pure())
    throw Error(ErrorCode::NotPure,
                "ionization needs a pure qset; got " + x.canonical_form());
  std::mt19937_64 rng(seed);
  IonizationRun run;
  run.chain.members.push_back(x);
  Qset cur = x;
  while (!cur.is_empty()) {
    auto tokens = cur.tokens();
    const std::size_t pick = rng() % tokens.size();
    const Token chosen = tokens[pick];
    run.extracted_kinds.push_back(cur.universe()->kind(chosen.kind).label);
    Qset extracted = Qset::from_parts(cur.universe(), {chosen}, {}, {});
    cur = qset_difference(cur, extracted);
    run.chain.members.push_back(cur);
  }
  return run;
}

}  // namespace qsetk
