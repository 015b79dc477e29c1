#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsetk/counting.hpp"

namespace qsetk {

struct Bounds {
  Nat max_kinds = 2;
  Nat max_total_matoms = 4;
  Nat max_classical = 2;
  Nat max_nesting = 1;
  Nat powerset_card_cap = 4;
};

using QcardFn = std::function<QcardResult(const Qset&)>;

struct CheckOptions {
  bool kind_symmetry = true;
  QcardFn qcard_fn;  // test hook; empty means the derived qcard
};

struct Counterexample {
  std::string universe;
  std::vector<std::string> forms;
  std::string detail;
  nlohmann::json replay;  // token-level payload; enough to rebuild and re-run
};

struct Verdict {
  std::string id;
  bool holds = true;
  Nat universes_checked = 0;
  Nat instances_checked = 0;
  std::optional<Counterexample> counterexample;
  std::vector<std::string> notes;
};

struct Report {
  Bounds bounds;
  bool kind_symmetry = true;
  std::vector<Verdict> verdicts;
  double elapsed_ms = 0.0;
};

// The seven theorem labels, in report order.
const std::vector<std::string>& theorem_ids();

// Every universe shape within bounds exactly once, deterministic order.
// Kind-symmetric mode keeps one representative per pool multiset.
std::vector<UniversePtr> enumerate_universes(const Bounds& b, bool kind_symmetry = true);

// Every qset of u built from token subsets and classical subsets, in mask
// order. The counterexample "first in canonical order" rule refers to this
// order.
std::vector<Qset> enumerate_qsets(const UniversePtr& u);

std::string universe_display(const Universe& u);

std::vector<Verdict> check_axioms(const UniversePtr& u, const CheckOptions& opts = {});
Verdict check_theorem(const std::string& id, const UniversePtr& u, const Bounds& b,
                      const CheckOptions& opts = {});
Report run_suite(const Bounds& b, const CheckOptions& opts = {});

nlohmann::json verdict_json(const Verdict& v);
nlohmann::json report_json(const Report& r);

// Rebuilds the counterexample's universe and qsets from the replay payload
// and re-evaluates the violated property; true when the violation reproduces
// under the given qcard (empty = the derived one).
bool replay_counterexample(const Verdict& v, const QcardFn& fn = {});

}  // namespace qsetk
