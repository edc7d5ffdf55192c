// Copyright 2026 The Dephaser Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dephaser/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>

#include "CLI11.hpp"

#include "dephaser/channels.hpp"
#include "dephaser/coherence.hpp"
#include "dephaser/io.hpp"
#include "dephaser/superchannels.hpp"
#include "dephaser/verify.hpp"

#ifndef DEPHASER_FIXTURE_DIR
#define DEPHASER_FIXTURE_DIR "fixtures"
#endif

namespace dephaser::cli {

namespace {

using io::json;

constexpr int kSchemaVersion = 1;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = 0;
  int dim = 2;
  int n = 1;
  int rank = 0;
  std::string kind = "superchannel";
  std::optional<int> trials;
  std::vector<double> eps = {0.0};
  int restarts = 32;
  std::vector<std::string> inputs;
  std::string out;
  std::string fixtures = DEPHASER_FIXTURE_DIR;
  bool timing = false;
  Tolerances tol;
  std::map<std::string, double> overrides;
};

struct Outcome {
  json results;
  json summary;
  int code = kOk;
};

double* tolerance_slot(Tolerances& tol, const std::string& name) {
  static const std::map<std::string, double Tolerances::*> slots = {
      {"herm", &Tolerances::herm},   {"eig", &Tolerances::eig},
      {"unit", &Tolerances::unit},   {"psd", &Tolerances::psd},
      {"tp", &Tolerances::tp},       {"gram", &Tolerances::gram},
      {"pivot", &Tolerances::pivot}, {"kraus_prune", &Tolerances::kraus_prune},
  };
  const auto it = slots.find(name);
  return it == slots.end() ? nullptr : &(tol.*(it->second));
}

json tolerance_table(const Tolerances& tol) {
  Tolerances copy = tol;
  json out = json::object();
  for (const char* name :
       {"herm", "eig", "unit", "psd", "tp", "gram", "pivot", "kraus_prune"}) {
    out[name] = *tolerance_slot(copy, name);
  }
  return out;
}

// Pulls --tol.NAME VALUE and --tol.NAME=VALUE out of the argument list.
std::vector<std::string> extract_tolerances(
    const std::vector<std::string>& args, RunConfig& cfg) {
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (arg.rfind("--tol.", 0) != 0) {
      rest.push_back(arg);
      continue;
    }
    std::string name = arg.substr(6);
    std::string value;
    if (const auto eq = name.find('='); eq != std::string::npos) {
      value = name.substr(eq + 1);
      name = name.substr(0, eq);
    } else if (i + 1 < args.size()) {
      value = args[++i];
    } else {
      throw UsageError("missing value for --tol." + name);
    }
    double* slot = tolerance_slot(cfg.tol, name);
    if (slot == nullptr) throw UsageError("unknown tolerance '" + name + "'");
    char* end = nullptr;
    const double parsed = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || !(parsed >= 0.0) ||
        !std::isfinite(parsed)) {
      throw UsageError("invalid value for --tol." + name + ": " + value);
    }
    *slot = parsed;
    cfg.overrides[name] = parsed;
  }
  return rest;
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text[0] == '-') {
    throw UsageError("invalid seed '" + text + "'");
  }
  return value;
}

json config_echo(const RunConfig& cfg) {
  json eps = json::array();
  for (double e : cfg.eps) eps.push_back(e);
  return {{"seed", cfg.seed},
          {"dim", cfg.dim},
          {"n", cfg.n},
          {"rank", cfg.rank},
          {"kind", cfg.kind},
          {"trials", cfg.trials ? json(*cfg.trials) : json(nullptr)},
          {"eps", eps},
          {"restarts", cfg.restarts},
          {"inputs", cfg.inputs},
          {"out", cfg.out},
          {"tolerances", tolerance_table(cfg.tol)},
          {"tolerance_overrides", cfg.overrides}};
}

superchannels::DephasingSuperchannel read_superchannel(
    const std::string& path, const Tolerances& tol) {
  const auto [c, d] = io::correlation_from_json(io::read_file(path));
  return superchannels::make_superchannel(c, d, tol);
}

/********************************* commands *********************************/

Outcome cmd_sample(const RunConfig& cfg) {
  Rng rng(cfg.seed);
  json objects = json::array();
  for (int i = 0; i < cfg.n; ++i) {
    if (cfg.kind == "superchannel") {
      objects.push_back(io::to_json(superchannels::sample(rng, cfg.dim)));
    } else if (cfg.kind == "channel") {
      const int rank = cfg.rank > 0 ? cfg.rank : cfg.dim;
      objects.push_back(
          io::to_json(channels::random_channel(rng, cfg.dim, rank)));
    } else {
      objects.push_back(
          io::to_json(channels::random_dephasing(rng, cfg.dim)));
    }
  }
  return {{{"kind", cfg.kind}, {"objects", objects}},
          {{"count", cfg.n}},
          kOk};
}

Outcome cmd_classify(const RunConfig& cfg) {
  const auto [c, d] = io::correlation_from_json(io::read_file(cfg.inputs[0]));
  const auto validation = superchannels::validate(c, d, cfg.tol);
  json violations = json::array();
  for (const auto& v : validation.violations) violations.push_back(io::to_json(v));
  if (!validation.ok()) {
    json results = {{"valid", false}, {"violations", violations}};
    results["witness"] =
        validation.witness ? io::to_json(*validation.witness) : json(nullptr);
    return {results, {{"valid", false}}, kSemantic};
  }
  const auto& sc = *validation.superchannel;
  const auto mc = superchannels::memory_class(sc, cfg.tol);
  json results = {{"valid", true},
                  {"dim", d},
                  {"memory_class", io::to_json(mc)},
                  {"tilde_c", io::to_json(superchannels::tilde_c(sc).correlation())}};
  return {results,
          {{"valid", true}, {"label", superchannels::to_string(mc.label)}},
          kOk};
}

Outcome cmd_apply(const RunConfig& cfg) {
  const auto sc = read_superchannel(cfg.inputs[0], cfg.tol);
  const auto ch = io::channel_from_json(io::read_file(cfg.inputs[1]), cfg.tol);
  const auto image = superchannels::apply(sc, ch, cfg.tol);
  const RealMatrix before = channels::transition_matrix(ch).matrix();
  const RealMatrix after = channels::transition_matrix(image).matrix();
  const double change = (after - before).cwiseAbs().maxCoeff();
  json results = {{"channel", io::to_json(image)},
                  {"input_transition_matrix", io::to_json(before)},
                  {"output_transition_matrix", io::to_json(after)},
                  {"transition_max_change", io::number(change)}};
  return {results, {{"transition_preserved", change < 1e-12}}, kOk};
}

Outcome cmd_realize(const RunConfig& cfg) {
  const auto sc = read_superchannel(cfg.inputs[0], cfg.tol);
  const auto r = superchannels::realize(sc, cfg.tol);
  double unitarity = 0.0;
  for (const auto* family : {&r.us, &r.vs}) {
    for (const Matrix& u : *family) {
      unitarity = std::max(
          unitarity,
          max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())));
    }
  }
  const auto back = superchannels::from_unitaries(r.us, r.vs, cfg.tol);
  const double residual = max_abs(back.correlation() - sc.correlation());
  json results = {{"realization", io::to_json(r)},
                  {"round_trip_residual", io::number(residual)},
                  {"unitarity_defect", io::number(unitarity)},
                  {"unitary", unitarity <= cfg.tol.unit}};
  return {results,
          {{"round_trip_residual", io::number(residual)},
           {"unitary", unitarity <= cfg.tol.unit}},
          kOk};
}

Outcome cmd_coherence(const RunConfig& cfg) {
  const auto ch = io::channel_from_json(io::read_file(cfg.inputs[0]), cfg.tol);
  const auto classical = channels::classical_version(ch);
  const auto cert = coherence::robustness(ch, cfg.tol);
  json power = json::object();
  for (auto m : {coherence::CoherenceMeasure::kL1,
                 coherence::CoherenceMeasure::kRelEnt}) {
    power[coherence::to_string(m)] =
        io::number(coherence::cohering_power(ch, m, cfg.tol));
  }
  json divergences = json::array();
  for (double eps : cfg.eps) {
    Rng rng(cfg.seed);
    const double dh = coherence::dh_channel_divergence_lower(
        ch, classical, eps, cfg.restarts, rng, cfg.tol);
    divergences.push_back(
        {{"eps", eps},
         {"dh_lower_bound", io::number(dh)},
         {"image_count_bound", io::number(std::exp2(dh))},
         {"discrimination_count_bound",
          io::number((1.0 + cert.value) / (1.0 - eps))}});
  }
  json results = {{"cohering_power", power},
                  {"robustness", io::to_json(cert)},
                  {"certificate_feasible",
                   !coherence::certificate_violation(ch, cert).has_value()},
                  {"divergence_vs_classical_version", divergences}};
  return {results, {{"robustness", io::number(cert.value)}}, kOk};
}

Outcome cmd_distinguish(const RunConfig& cfg) {
  const auto gate = io::channel_from_json(io::read_file(cfg.inputs[0]), cfg.tol);
  std::vector<superchannels::DephasingSuperchannel> scs;
  for (std::size_t i = 1; i < cfg.inputs.size(); ++i) {
    scs.push_back(read_superchannel(cfg.inputs[i], cfg.tol));
  }
  Rng rng(cfg.seed);
  const auto inst =
      coherence::discrimination_seesaw(gate, scs, cfg.restarts, rng, cfg.tol);
  const auto cert = coherence::robustness(gate, cfg.tol);
  const auto check = coherence::robustness_bound_check(inst, cert);
  json results = {{"instance", io::to_json(inst)},
                  {"robustness", io::to_json(cert)},
                  {"bound_check", io::to_json(check)}};
  return {results,
          {{"p_succ", io::number(inst.p_succ)}, {"bound_holds", check.holds}},
          check.holds ? kOk : kCheckFailed};
}

Outcome cmd_verify(const RunConfig& cfg) {
  verify::AcceptanceConfig acceptance;
  acceptance.seed = cfg.seed;
  acceptance.trials = cfg.trials;
  acceptance.tol = cfg.tol;
  acceptance.fixture_dir = cfg.fixtures;
  const auto criteria = verify::run_acceptance(acceptance);
  json list = json::array();
  int failed = 0;
  for (const auto& c : criteria) {
    if (!c.passed) ++failed;
    list.push_back({{"id", c.id},
                    {"name", c.name},
                    {"passed", c.passed},
                    {"trials", c.trials},
                    {"worst", io::number(c.worst)},
                    {"threshold", io::number(c.threshold)},
                    {"detail", c.detail}});
  }
  return {{{"criteria", list}},
          {{"passed", failed == 0},
           {"failed", failed},
           {"total", static_cast<int>(criteria.size())}},
          failed == 0 ? kOk : kCheckFailed};
}

void emit(const json& report, const RunConfig& cfg, std::ostream& out) {
  const std::string text = io::dump(report);
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out);
  if (!file) throw UsageError("cannot write " + cfg.out);
  file << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  RunConfig cfg;
  std::vector<std::string> rest;
  try {
    rest = extract_tolerances(args, cfg);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  CLI::App app{"Dephasing superchannels: sampling, classification and "
               "coherence bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string seed_text;
  app.add_option("--seed", seed_text,
                 "Random seed (falls back to DEPHASER_SEED, then 0)");
  app.add_option("--out", cfg.out, "Write the report to this file");
  app.add_flag("--timing", cfg.timing, "Add wall time to the report");

  auto* sample = app.add_subcommand("sample", "Sample random objects");
  sample->add_option("--kind", cfg.kind)
      ->check(CLI::IsMember({"superchannel", "channel", "dephasing-channel"}));
  sample->add_option("--dim", cfg.dim)->check(CLI::Range(2, 8));
  sample->add_option("--n", cfg.n)->check(CLI::Range(1, 100000));
  sample->add_option("--rank", cfg.rank, "Kraus rank for --kind channel")
      ->check(CLI::Range(1, 64));

  auto* classify = app.add_subcommand("classify", "Validate and classify C");
  classify->add_option("superchannel", cfg.inputs)->required()->expected(1);

  auto* apply = app.add_subcommand("apply", "Apply a superchannel to a channel");
  apply->add_option("files", cfg.inputs, "superchannel then channel")
      ->required()
      ->expected(2);

  auto* realize = app.add_subcommand("realize", "Synthesize a realization");
  realize->add_option("superchannel", cfg.inputs)->required()->expected(1);

  auto* coherence_cmd =
      app.add_subcommand("coherence", "Coherence analysis of a channel");
  coherence_cmd->add_option("channel", cfg.inputs)->required()->expected(1);
  coherence_cmd->add_option("--eps", cfg.eps)
      ->delimiter(',')
      ->check(CLI::Range(0.0, 0.999999));
  coherence_cmd->add_option("--restarts", cfg.restarts)
      ->check(CLI::Range(0, 100000));

  auto* distinguish = app.add_subcommand(
      "distinguish", "Seesaw discrimination of superchannels on a gate");
  distinguish->add_option("files", cfg.inputs, "gate then superchannels")
      ->required()
      ->expected(3, 64);
  distinguish->add_option("--restarts", cfg.restarts)
      ->check(CLI::Range(1, 100000));

  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite");
  int trials = 0;
  auto* trials_opt =
      verify_cmd->add_option("--trials", trials)->check(CLI::Range(1, 1000000));
  verify_cmd->add_option("--fixtures", cfg.fixtures, "Fixture directory");

  std::vector<std::string> reversed(rest.rbegin(), rest.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (trials_opt->count() > 0) cfg.trials = trials;

  try {
    if (!seed_text.empty()) {
      cfg.seed = parse_seed(seed_text);
    } else if (const char* env = std::getenv("DEPHASER_SEED")) {
      cfg.seed = parse_seed(env);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    if (command == "sample") {
      outcome = cmd_sample(cfg);
    } else if (command == "classify") {
      outcome = cmd_classify(cfg);
    } else if (command == "apply") {
      outcome = cmd_apply(cfg);
    } else if (command == "realize") {
      outcome = cmd_realize(cfg);
    } else if (command == "coherence") {
      outcome = cmd_coherence(cfg);
    } else if (command == "distinguish") {
      outcome = cmd_distinguish(cfg);
    } else {
      outcome = cmd_verify(cfg);
    }
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kUsage;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolver;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kSemantic;
  }

  json report = {{"schema_version", kSchemaVersion},
                 {"command", command},
                 {"config", config_echo(cfg)},
                 {"results", outcome.results},
                 {"summary", outcome.summary}};
  if (cfg.timing) {
    report["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
  }
  try {
    emit(report, cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  if (outcome.code == kSemantic) {
    err << "error: input is not a valid dephasing superchannel\n";
  }
  return outcome.code;
}

}  // namespace dephaser::cli
