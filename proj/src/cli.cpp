#include "qsetk/cli.hpp"

#include <complex>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsetk/checker.hpp"
#include "qsetk/dsl.hpp"
#include "qsetk/fock.hpp"

namespace qsetk {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream stream(s);
  while (std::getline(stream, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

Nat parse_nat(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    Nat n = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return n;
  } catch (const std::exception&) {
    throw Error(ErrorCode::EvalError, "cannot read " + what + " from '" + s + "'");
  }
}

double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::EvalError, "cannot read " + what + " from '" + s + "'");
  }
}

// "n:re[,im];..." with entries separated by ';'
std::vector<std::pair<Nat, std::complex<double>>> parse_amps(const std::string& s) {
  std::vector<std::pair<Nat, std::complex<double>>> out;
  for (const auto& entry : split(s, ';')) {
    auto colon = entry.find(':');
    if (colon == std::string::npos)
      throw Error(ErrorCode::EvalError, "amplitude entry '" + entry + "' lacks ':'");
    Nat n = parse_nat(entry.substr(0, colon), "a number index");
    std::string rest = entry.substr(colon + 1);
    auto comma = rest.find(',');
    double re = 0.0, im = 0.0;
    if (comma == std::string::npos) {
      re = parse_real(rest, "an amplitude");
    } else {
      re = parse_real(rest.substr(0, comma), "an amplitude");
      im = parse_real(rest.substr(comma + 1), "an amplitude");
    }
    out.emplace_back(n, std::complex<double>(re, im));
  }
  return out;
}

// "n:p;..."
std::vector<std::pair<Nat, double>> parse_probs(const std::string& s) {
  std::vector<std::pair<Nat, double>> out;
  for (const auto& entry : split(s, ';')) {
    auto colon = entry.find(':');
    if (colon == std::string::npos)
      throw Error(ErrorCode::EvalError, "mixture entry '" + entry + "' lacks ':'");
    out.emplace_back(parse_nat(entry.substr(0, colon), "a number index"),
                     parse_real(entry.substr(colon + 1), "a probability"));
  }
  return out;
}

// "e*2,f*1" or "e"
QsetSpec parse_content(const std::string& s) {
  QsetSpec spec;
  for (const auto& entry : split(s, ',')) {
    auto star = entry.find('*');
    if (star == std::string::npos)
      spec.matoms.emplace_back(entry, 1);
    else
      spec.matoms.emplace_back(entry.substr(0, star),
                               parse_nat(entry.substr(star + 1), "a multiplicity"));
  }
  return spec;
}

int cmd_check(const Bounds& bounds, bool symmetry, const std::string& theorem,
              bool json_mode, std::ostream& out) {
  CheckOptions opts;
  opts.kind_symmetry = symmetry;
  if (!theorem.empty()) {
    std::vector<std::string> known = {"H1", "H2"};
    for (const auto& id : theorem_ids()) known.push_back(id);
    if (std::find(known.begin(), known.end(), theorem) == known.end())
      throw Error(ErrorCode::UnknownTheorem, "no theorem named " + theorem);
  }
  Report report = run_suite(bounds, opts);
  std::vector<Verdict> shown;
  for (const auto& v : report.verdicts)
    if (theorem.empty() || v.id == theorem) shown.push_back(v);
  bool all_hold = true;
  for (const auto& v : shown) all_hold = all_hold && v.holds;

  if (json_mode) {
    if (theorem.empty()) {
      out << report_json(report).dump() << "\n";
    } else {
      out << verdict_json(shown.front()).dump() << "\n";
    }
  } else {
    for (const auto& v : shown) {
      out << v.id << ": " << (v.holds ? "holds" : "FAILS") << " ("
          << v.universes_checked << " universes, " << v.instances_checked
          << " instances)\n";
      if (v.counterexample) {
        out << "  counterexample in " << v.counterexample->universe << "\n";
        for (const auto& form : v.counterexample->forms) out << "    " << form << "\n";
        out << "  " << v.counterexample->detail << "\n";
      }
      for (const auto& note : v.notes) out << "  note: " << note << "\n";
    }
    out << "elapsed: " << report.elapsed_ms << " ms\n";
  }
  return all_hold ? 0 : 1;
}

json verdict_to_json(const NumberVerdict& verdict, const DensityMatrix& rho) {
  json j;
  if (const auto* eigen = std::get_if<Eigenstate>(&verdict)) {
    j["verdict"] = "eigenstate";
    j["n"] = eigen->n;
  } else if (const auto* mix = std::get_if<IgnoranceMixture>(&verdict)) {
    j["verdict"] = "ignorance_mixture";
    json dist = json::object();
    for (const auto& [n, p] : mix->dist) dist[std::to_string(n)] = p;
    j["distribution"] = dist;
  } else {
    j["verdict"] = "undefined_particle_number";
  }
  j["off_diag_norm"] = off_diagonal_norm(rho);
  return j;
}

int cmd_fock(const std::string& amps, const std::string& mix,
             const std::string& ionize, Nat seed, bool json_mode, std::ostream& out) {
  if (!ionize.empty()) {
    QsetSpec spec = parse_content(ionize);
    std::vector<KindSpec> kinds;
    for (const auto& [label, mult] : spec.matoms) {
      bool found = false;
      for (auto& k : kinds)
        if (k.label == label) {
          k.pool_size += mult;
          found = true;
        }
      if (!found) kinds.push_back(KindSpec{label, mult, ""});
    }
    UniversePtr u = make_universe(kinds);
    Qset x = make_qset(u, spec);
    IonizationRun run = ionization_experiment(x, seed);
    if (json_mode) {
      json j{{"seed", seed},
             {"extracted", run.extracted_kinds},
             {"chain", chain_forms(run.chain)},
             {"steps", run.extracted_kinds.size()}};
      out << j.dump() << "\n";
    } else {
      out << "chain: " << chain_display(run.chain) << "\n";
      std::string log;
      for (const auto& k : run.extracted_kinds) log += (log.empty() ? "" : ", ") + k;
      out << "extracted: " << (log.empty() ? "(nothing)" : log) << "\n";
      out << "steps: " << run.extracted_kinds.size() << "\n";
    }
    return 0;
  }

  DensityMatrix rho;
  if (!amps.empty()) {
    rho = density_of(make_state(parse_amps(amps)));
  } else if (!mix.empty()) {
    rho = mixture(parse_probs(mix));
  } else {
    throw Error(ErrorCode::EvalError, "fock needs --amps, --mixture, or --ionize");
  }
  NumberVerdict verdict = number_verdict(rho);

  UniversePtr u = make_universe({KindSpec{"e", kFockDim, ""}});
  json qsets = nullptr;
  std::string bridge_note;
  try {
    json arr = json::array();
    for (const auto& w : to_qset(verdict, u, "e")) {
      QcardResult qc = qcard(w.qset);
      arr.push_back(json{{"probability", w.probability},
                         {"qset", w.qset.canonical_form()},
                         {"qcard", qc.value}});
    }
    qsets = arr;
  } catch (const Error& e) {
    bridge_note = e.what();
  }

  if (json_mode) {
    json j = verdict_to_json(verdict, rho);
    j["qsets"] = qsets;
    if (!bridge_note.empty()) j["note"] = bridge_note;
    out << j.dump() << "\n";
  } else {
    if (const auto* eigen = std::get_if<Eigenstate>(&verdict)) {
      out << "eigenstate: n = " << eigen->n << "\n";
    } else if (const auto* m = std::get_if<IgnoranceMixture>(&verdict)) {
      out << "ignorance mixture:";
      for (const auto& [n, p] : m->dist) out << " " << n << ":" << p;
      out << "\n";
    } else {
      out << "undefined particle number: off-diagonal norm = "
          << std::get<UndefinedParticleNumber>(verdict).off_diag_norm << "\n";
    }
    if (qsets.is_array())
      for (const auto& entry : qsets)
        out << "qset: " << entry["qset"].get<std::string>() << " (probability "
            << entry["probability"].get<double>() << ", qcard "
            << entry["qcard"].get<Nat>() << ")\n";
    if (!bridge_note.empty()) out << bridge_note << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"quasiset counting kernel"};
  app.require_subcommand(1);

  auto* repl_cmd = app.add_subcommand("repl", "interactive session");

  std::string script_path;
  bool run_json = false;
  Nat run_seed = 0;
  auto* run_cmd = app.add_subcommand("run", "execute a script");
  run_cmd->add_option("file", script_path, "script path")->required();
  run_cmd->add_flag("--json", run_json, "one JSON record per statement");
  run_cmd->add_option("--seed", run_seed, "RNG seed");

  Bounds bounds;
  bool no_symmetry = false;
  bool check_json = false;
  std::string theorem;
  auto* check_cmd = app.add_subcommand("check", "verify axioms and theorems");
  check_cmd->add_option("--theorem", theorem, "single theorem id");
  check_cmd->add_option("--max-kinds", bounds.max_kinds, "kinds per universe");
  check_cmd->add_option("--max-atoms", bounds.max_total_matoms, "total m-atom pool");
  check_cmd->add_option("--max-classical", bounds.max_classical, "classical elements");
  check_cmd->add_option("--max-nesting", bounds.max_nesting, "classical nesting depth");
  check_cmd->add_option("--pow-cap", bounds.powerset_card_cap, "powerset theorem cap");
  check_cmd->add_flag("--json", check_json, "JSON report");
  check_cmd->add_flag("--no-symmetry", no_symmetry, "enumerate all kind orderings");

  std::string amps, mix, ionize;
  Nat fock_seed = 0;
  bool fock_json = false;
  auto* fock_cmd = app.add_subcommand("fock", "number-state classification");
  fock_cmd->add_option("--amps", amps, "state amplitudes 'n:re[,im];...'");
  fock_cmd->add_option("--mixture", mix, "diagonal mixture 'n:p;...'");
  fock_cmd->add_option("--ionize", ionize, "pure qset content 'e*2'");
  fock_cmd->add_option("--seed", fock_seed, "RNG seed");
  fock_cmd->add_flag("--json", fock_json, "JSON record");

  std::vector<std::string> argv_store = {"qsetk"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(argv_store.size());
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (repl_cmd->parsed()) {
      dsl::repl(in, out);
      return 0;
    }
    if (run_cmd->parsed()) {
      std::ifstream file(script_path);
      if (!file) {
        err << "cannot open " << script_path << "\n";
        return 1;
      }
      std::ostringstream text;
      text << file.rdbuf();
      dsl::Env env;
      env.set_seed(run_seed);
      return dsl::run_program(text.str(), env, out, err, run_json);
    }
    if (check_cmd->parsed())
      return cmd_check(bounds, !no_symmetry, theorem, check_json, out);
    if (fock_cmd->parsed())
      return cmd_fock(amps, mix, ionize, fock_seed, fock_json, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace qsetk
