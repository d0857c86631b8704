// Copyright 2026 The ldpres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "ldpres.hpp"
#include "run_config.hpp"

namespace ldpres::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kResource = 3,
  kInternal = 4,
};

// Thrown when a verify-style command finds a counterexample; carries the witness report.
struct VerificationFailure {
  Json report;
};

namespace detail {

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ArgumentError("invalid JSON in " + path + ": " + e.what());
  }
}

template <class T>
T need(const std::optional<T>& value, const std::string& flag, const std::string& context) {
  if (!value) throw ArgumentError(flag + " is required for " + context);
  return *value;
}

inline IncidenceStructure load_design(const DesignSpec& spec, const Caps& caps) {
  const std::string& kind = spec.kind;
  if (kind == "complete") {
    return complete_design(need(spec.v, "--v", "complete designs"), need(spec.k, "--k", "complete designs"),
                           caps);
  }
  if (kind == "ag") {
    return affine_geometry_design(need(spec.d, "--d", "ag designs"), need(spec.m, "--m", "ag designs"),
                                  need(spec.q, "--q", "ag designs"), caps);
  }
  if (kind == "hadamard3") {
    const int t = need(spec.t, "--t", "hadamard3 designs");
    require(t >= 1, "--t must be positive");
    if (8LL * t - 2 > caps.max_blocks) throw ResourceError("hadamard3 design exceeds --cap-blocks");
    return hadamard3_design(t);
  }
  if (kind == "roundrobin") {
    const int v = need(spec.v, "--v", "roundrobin designs");
    const int lambda = spec.lambda.value_or(1);
    require(v >= 2 && lambda >= 1, "roundrobin needs --v >= 2 and --lambda >= 1");
    if (static_cast<std::int64_t>(lambda) * v * (v - 1) / 2 > caps.max_blocks) {
      throw ResourceError("roundrobin design exceeds --cap-blocks");
    }
    return round_robin_design(v, lambda);
  }
  if (kind == "file") return json::design_from_json(read_json_file(need(spec.file, "--design-file", "file designs")));
  if (kind.empty()) throw ArgumentError("a design is required (--design or --design-file)");
  throw ArgumentError("unknown design kind " + kind);
}

// (v, k) of a complete design whose blocks are the k-subsets in lexicographic order.
inline std::pair<int, int> complete_shape(const IncidenceStructure& design, const Caps& caps,
                                          const std::string& what) {
  const auto params = design_params_or_throw(design);
  const auto reference = complete_design(params.v, params.k, caps);
  if (reference.blocks() != design.blocks()) {
    throw ArgumentError(what + " resolution needs a complete design with blocks in lexicographic order");
  }
  return {params.v, params.k};
}

inline Json failure_to_json(const ResolutionFailure& f) {
  Json j;
  j["message"] = f.message;
  j["classIndex"] = f.class_index + 1;
  j["pointA"] = f.point_a + 1;
  j["pointB"] = f.point_b + 1;
  j["countA"] = f.count_a;
  j["countB"] = f.count_b;
  return j;
}

inline Resolution build_resolution(const RunConfig& c, const IncidenceStructure& design) {
  const std::string& kind = c.resolution;
  if (kind == "cyclic") {
    const auto [v, k] = complete_shape(design, c.caps, "cyclic");
    return cyclic_shift_resolution(v, k, c.caps);
  }
  if (kind == "baranyai") {
    const auto [v, k] = complete_shape(design, c.caps, "baranyai");
    if (c.sizes.empty()) return baranyai_resolution(v, k, c.seed, c.caps);
    return baranyai_resolution(v, k, c.sizes, c.seed, c.caps);
  }
  if (kind == "parallel") return parallel_class_resolution(design);
  if (kind == "h3") return h3_resolution(design);
  if (kind == "file") {
    const auto path = need(c.resolution_file, "--resolution-file", "file resolutions");
    auto check = verify_resolution(design, json::partition_from_json(read_json_file(path)));
    if (auto* failure = std::get_if<ResolutionFailure>(&check)) {
      Json report;
      report["valid"] = false;
      report["failure"] = failure_to_json(*failure);
      throw VerificationFailure{std::move(report)};
    }
    return std::get<Resolution>(check);
  }
  if (kind == "none") throw ArgumentError("a resolution is required (--resolution or --resolution-file)");
  throw ArgumentError("unknown resolution kind " + kind);
}

struct LoadedMechanism {
  std::optional<BlockDesignMechanism> mech;
  std::optional<DecomposedMechanism> dec;
};

inline LoadedMechanism load_mechanism(const RunConfig& c) {
  LoadedMechanism out;
  if (c.mechanism_file) {
    const Json j = read_json_file(*c.mechanism_file);
    if (j.contains("resolution")) {
      auto [mech, dec] = json::decomposed_from_json(j);
      out.mech.emplace(std::move(mech));
      out.dec.emplace(std::move(dec));
    } else {
      out.mech.emplace(json::mechanism_from_json(j));
    }
    return out;
  }
  const auto design = load_design(c.design, c.caps);
  out.mech.emplace(design, need(c.epsilon, "--eps", "mechanisms"));
  if (c.resolution != "none") out.dec.emplace(decompose(*out.mech, build_resolution(c, design)));
  return out;
}

inline Json matrix_to_json(const std::vector<std::vector<double>>& m) {
  Json out = Json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

inline void check_matrix_cap(std::int64_t rows, std::int64_t cols, const Caps& caps) {
  if (rows * cols > caps.max_blocks) throw ResourceError("materialized channel exceeds --cap-blocks entries");
}

inline Json run_design(const RunConfig& c) {
  DesignSpec spec = c.design;
  spec.kind = c.action;
  const auto design = load_design(spec, c.caps);
  Json out = json::design_to_json(design);
  out["params"] = json::params_to_json(design_params_or_throw(design));
  return out;
}

inline Json run_resolve(const RunConfig& c) {
  const auto design = load_design(c.design, c.caps);
  Json out;
  if (c.action == "verify") {
    RunConfig file_config = c;
    file_config.resolution = "file";
    const auto res = build_resolution(file_config, design);
    out["valid"] = true;
    const Json body = json::resolution_to_json(design, res);
    for (const auto& [key, value] : body.items()) out[key] = value;
    out["commCostBits"] = comm_cost(res);
    return out;
  }
  RunConfig kind_config = c;
  kind_config.resolution = c.action;
  const auto res = build_resolution(kind_config, design);
  out = json::resolution_to_json(design, res);
  out["commCostBits"] = comm_cost(res);
  return out;
}

inline Json ldp_report_to_json(const LdpReport& r, double bound) {
  Json out;
  out["pass"] = r.pass;
  out["maxRatio"] = r.max_ratio;
  out["bound"] = std::exp(bound);
  Json w;
  w["u"] = r.u + 1;
  w["y"] = r.y + 1;
  w["x"] = r.x + 1;
  w["xPrime"] = r.x_prime + 1;
  out["witness"] = std::move(w);
  return out;
}

inline Json run_mech(const RunConfig& c) {
  if (c.action == "build") {
    const auto design = load_design(c.design, c.caps);
    const BlockDesignMechanism mech(design, need(c.epsilon, "--eps", "mech build"));
    Json out = json::mechanism_to_json(mech);
    out["params"] = json::params_to_json(mech.params());
    if (c.materialize) {
      check_matrix_cap(mech.v(), mech.b(), c.caps);
      out["channel"] = matrix_to_json(mech.channel());
    }
    return out;
  }
  if (c.action == "decompose") {
    const auto design = load_design(c.design, c.caps);
    const BlockDesignMechanism mech(design, need(c.epsilon, "--eps", "mech decompose"));
    const auto dec = decompose(mech, build_resolution(c, design));
    Json out = json::decomposed_to_json(mech, dec);
    out["commCostBits"] = comm_cost(dec);
    if (c.materialize) {
      check_matrix_cap(mech.v(), mech.b(), c.caps);
      Json channels = Json::array();
      for (std::size_t u = 0; u < dec.shared_symbols(); ++u) channels.push_back(matrix_to_json(dec.channel(u)));
      out["subchannels"] = std::move(channels);
    }
    return out;
  }
  const auto loaded = load_mechanism(c);
  if (c.action == "verify-ldp") {
    const double bound = c.check_epsilon.value_or(loaded.mech->epsilon());
    const auto report = loaded.dec ? verify_ldp(*loaded.dec, bound) : verify_ldp(*loaded.mech, bound);
    Json out = ldp_report_to_json(report, bound);
    if (!report.pass) throw VerificationFailure{std::move(out)};
    return out;
  }
  if (c.action == "verify-decomp") {
    if (!loaded.dec) throw ArgumentError("verify-decomp needs a resolution or a decomposed mechanism file");
    const auto report = verify_decomposition(*loaded.mech, *loaded.dec);
    Json out;
    out["pass"] = report.pass;
    out["maxDeviation"] = report.max_deviation;
    Json w;
    w["x"] = report.x + 1;
    w["z"] = report.z + 1;
    out["witness"] = std::move(w);
    if (!report.pass) throw VerificationFailure{std::move(out)};
    return out;
  }
  throw ArgumentError("unknown mech action " + c.action);
}

inline Json run_put(const RunConfig& c) {
  const int v = need(c.design.v, "--v", "put");
  const double eps = need(c.epsilon, "--eps", "put");
  require(v >= 2, "--v must be at least 2");
  ldpres::detail::require_epsilon(eps);
  Json out;
  if (c.action == "kopt") {
    out["v"] = v;
    out["epsilon"] = eps;
    out["kOpt"] = k_opt_set(v, eps);
  } else if (c.action == "kstar") {
    const auto put = put_analysis(v, eps);
    out["kStar"] = put.k_star;
    out["kOpt"] = put.k_opt;
    out["minCostBits"] = put.min_cost_bits;
  } else if (c.action == "loss") {
    const int k = c.design.k.value_or(k_star(v, eps));
    const std::int64_t n = c.n.value_or(1);
    out["v"] = v;
    out["k"] = k;
    out["epsilon"] = eps;
    out["n"] = n;
    out["closedForm"] = closed_form_loss(n, v, k, eps);
  } else if (c.action == "mincost") {
    out["v"] = v;
    out["epsilon"] = eps;
    out["kStar"] = k_star(v, eps);
    out["minCostBits"] = baranyai_min_cost(v, eps);
  } else {
    throw ArgumentError("unknown put action " + c.action);
  }
  return out;
}

inline Json run_cost(const RunConfig& c) {
  Json out;
  if (c.action == "generic") {
    const auto design = load_design(c.design, c.caps);
    const auto res = build_resolution(c, design);
    const double log2b = std::log2(static_cast<double>(design.b()));
    const double bits = comm_cost(res);
    out["b"] = design.b();
    out["log2b"] = log2b;
    out["entropyPU"] = log2b - bits;
    out["commCostBits"] = bits;
  } else if (c.action == "cyclic") {
    const int v = need(c.design.v, "--v", "cost cyclic");
    const int k = need(c.design.k, "--k", "cost cyclic");
    out["v"] = v;
    out["k"] = k;
    out["commCostBits"] = cyclic_cost_closed_form(v, k);
  } else if (c.action == "alpha") {
    const int v = need(c.design.v, "--v", "cost alpha");
    const int k = need(c.design.k, "--k", "cost alpha");
    const std::int64_t alpha = need(c.alpha, "--alpha", "cost alpha");
    out["v"] = v;
    out["k"] = k;
    out["alpha"] = alpha;
    out["commCostBits"] = alpha_resolution_cost(v, k, alpha);
  } else {
    throw ArgumentError("unknown cost action " + c.action);
  }
  return out;
}

inline Json run_simulate(const RunConfig& c) {
  const auto loaded = load_mechanism(c);
  const auto& mech = *loaded.mech;
  std::vector<double> p = c.p_true;
  if (p.empty()) p.assign(static_cast<std::size_t>(mech.v()), 1.0 / mech.v());
  SimulationOptions opt;
  opt.n = c.n.value_or(opt.n);
  opt.trials = c.trials.value_or(opt.trials);
  opt.seed = c.seed;
  opt.workers = c.workers;
  require(opt.n >= 1 && opt.trials >= 2, "simulate needs --n >= 1 and --trials >= 2");
  require(opt.workers >= 1, "--workers must be positive");
  const auto result = loaded.dec ? simulate_loss(*loaded.dec, mech, p, opt) : simulate_loss(mech, p, opt);
  Json out;
  out["estimate"] = result.mean_estimate;
  out["empiricalMSE"] = result.mean_mse;
  out["stdErr"] = result.std_err;
  out["closedForm"] = closed_form_loss(opt.n, mech.v(), mech.params().k, mech.epsilon());
  out["commCostBits"] = loaded.dec ? comm_cost(*loaded.dec) : std::log2(static_cast<double>(mech.b()));
  out["n"] = opt.n;
  out["trials"] = opt.trials;
  out["seed"] = opt.seed;
  return out;
}

inline std::string format_scalar(const Json& value) {
  return value.is_string() ? value.get<std::string>() : value.dump();
}

// One "key<TAB>value" line per top-level field; keys ending in Bits get a ceiling column.
inline std::string to_table(const Json& report) {
  std::ostringstream out;
  for (const auto& [key, value] : report.items()) {
    out << key << '\t' << format_scalar(value);
    const bool bits = key.size() > 4 && key.compare(key.size() - 4, 4, "Bits") == 0;
    if (bits && value.is_number()) out << '\t' << "ceil=" << static_cast<std::int64_t>(std::ceil(value.get<double>() - 1e-12));
    out << '\n';
  }
  return out.str();
}

inline std::string render(const Json& report, const std::string& format) {
  if (format == "table") return to_table(report);
  return report.dump() + "\n";
}

inline void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output) {
    std::ofstream file(*c.output, std::ios::binary);
    if (!file) throw ArgumentError("cannot write " + *c.output);
    file << text;
    return;
  }
  out << text;
}

inline Json error_json(const char* kind, const std::string& message) {
  Json j;
  j["error"] = kind;
  j["message"] = message;
  return j;
}

}  // namespace detail

// Produces the report for a config (without the "config" key).
inline Json report_for(const RunConfig& c) {
  if (c.command == "design") return detail::run_design(c);
  if (c.command == "resolve") return detail::run_resolve(c);
  if (c.command == "mech") return detail::run_mech(c);
  if (c.command == "put") return detail::run_put(c);
  if (c.command == "cost") return detail::run_cost(c);
  if (c.command == "simulate") return detail::run_simulate(c);
  throw ArgumentError("unknown command " + c.command);
}

// Runs a config, writes the report (with the config embedded) and returns the exit code.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    Json report;
    int code = kOk;
    try {
      report = report_for(c);
    } catch (const VerificationFailure& failure) {
      report = failure.report;
      code = kVerificationFailed;
    }
    report["config"] = to_json(c);
    detail::emit(c, detail::render(report, c.format), out);
    return code;
  } catch (const ResourceError& e) {
    err << detail::error_json("resource", e.what()).dump() << '\n';
    return kResource;
  } catch (const ArgumentError& e) {
    err << detail::error_json("usage", e.what()).dump() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << detail::error_json("internal", e.what()).dump() << '\n';
    return kInternal;
  }
}

namespace detail {

template <class T>
void optional_flag(CLI::App* app, const std::string& name, std::optional<T>& dst, const std::string& help) {
  app->add_option_function<T>(name, [&dst](const T& value) { dst = value; }, help);
}

inline void add_common(CLI::App* app, RunConfig& c) {
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  optional_flag(app, "--output", c.output, "Write the report to this file");
  app->add_option("--cap-blocks", c.caps.max_blocks, "Largest number of blocks (or matrix entries) to build");
  app->add_option("--cap-points", c.caps.max_points, "Largest number of points to build");
  app->add_option("--seed", c.seed, "64-bit seed for all randomness");
}

inline void add_design_params(CLI::App* app, RunConfig& c) {
  optional_flag(app, "--v", c.design.v, "Number of points");
  optional_flag(app, "--k", c.design.k, "Block size");
  optional_flag(app, "--d", c.design.d, "Affine dimension");
  optional_flag(app, "--m", c.design.m, "Flat dimension");
  optional_flag(app, "--q", c.design.q, "Field order");
  optional_flag(app, "--t", c.design.t, "Hadamard parameter (order 4t)");
  optional_flag(app, "--lambda", c.design.lambda, "Round robin multiplicity");
}

inline void add_design_source(CLI::App* app, RunConfig& c) {
  app->add_option("--design", c.design.kind, "Design construction")
      ->check(CLI::IsMember({"complete", "ag", "hadamard3", "roundrobin"}));
  optional_flag(app, "--design-file", c.design.file, "Design JSON file");
  add_design_params(app, c);
}

inline void add_resolution_source(CLI::App* app, RunConfig& c) {
  app->add_option("--resolution", c.resolution, "Resolution construction")
      ->check(CLI::IsMember({"none", "cyclic", "baranyai", "parallel", "h3", "file"}));
  optional_flag(app, "--resolution-file", c.resolution_file, "Resolution JSON file");
  app->add_option("--sizes", c.sizes, "Baranyai class sizes")->delimiter(',');
}

}  // namespace detail

// Parses argv into a config. Returns an exit code instead when parsing ends the run
// (help output or a usage error).
inline std::variant<RunConfig, int> parse_args(int argc, const char* const* argv, std::ostream& out,
                                               std::ostream& err) {
  RunConfig c;
  CLI::App app{"Block design LDP mechanisms, resolutions and their costs", "ldpres"};
  app.require_subcommand(1);

  auto* design = app.add_subcommand("design", "Build a block design");
  design->add_option("kind", c.action, "Construction")
      ->required()
      ->check(CLI::IsMember({"complete", "ag", "hadamard3", "roundrobin"}));
  detail::add_design_params(design, c);

  auto* resolve = app.add_subcommand("resolve", "Build or verify a resolution");
  resolve->add_option("kind", c.action, "Construction or verify")
      ->required()
      ->check(CLI::IsMember({"cyclic", "baranyai", "parallel", "h3", "verify"}));
  detail::add_design_source(resolve, c);
  detail::optional_flag(resolve, "--resolution-file", c.resolution_file, "Resolution JSON file to verify");
  resolve->add_option("--sizes", c.sizes, "Baranyai class sizes")->delimiter(',');

  auto* mech = app.add_subcommand("mech", "Build, decompose or verify a mechanism");
  mech->add_option("action", c.action, "Action")
      ->required()
      ->check(CLI::IsMember({"build", "decompose", "verify-ldp", "verify-decomp"}));
  detail::add_design_source(mech, c);
  detail::add_resolution_source(mech, c);
  detail::optional_flag(mech, "--eps", c.epsilon, "Privacy level");
  detail::optional_flag(mech, "--check-eps", c.check_epsilon, "Privacy level to verify against");
  detail::optional_flag(mech, "--mechanism-file", c.mechanism_file, "Mechanism JSON file");
  mech->add_flag("--materialize", c.materialize, "Include channel matrices");

  auto* put = app.add_subcommand("put", "Privacy-utility trade-off analysis");
  put->add_option("action", c.action, "Action")->required()->check(CLI::IsMember({"kopt", "kstar", "loss", "mincost"}));
  detail::optional_flag(put, "--v", c.design.v, "Number of points");
  detail::optional_flag(put, "--k", c.design.k, "Block size (loss; defaults to the optimal k)");
  detail::optional_flag(put, "--eps", c.epsilon, "Privacy level");
  detail::optional_flag(put, "--n", c.n, "Number of users (loss)");

  auto* cost = app.add_subcommand("cost", "Communication cost");
  cost->add_option("kind", c.action, "Formula")->required()->check(CLI::IsMember({"generic", "cyclic", "alpha"}));
  detail::add_design_source(cost, c);
  detail::add_resolution_source(cost, c);
  detail::optional_flag(cost, "--alpha", c.alpha, "Points per class (alpha)");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimation loss");
  detail::add_design_source(simulate, c);
  detail::add_resolution_source(simulate, c);
  detail::optional_flag(simulate, "--eps", c.epsilon, "Privacy level");
  detail::optional_flag(simulate, "--mechanism-file", c.mechanism_file, "Mechanism JSON file");
  detail::optional_flag(simulate, "--n", c.n, "Users per trial");
  detail::optional_flag(simulate, "--trials", c.trials, "Number of trials");
  simulate->add_option("--p-true", c.p_true, "True distribution")->delimiter(',');
  simulate->add_option("--workers", c.workers, "Worker threads");

  for (auto* sub : {design, resolve, mech, put, cost, simulate}) detail::add_common(sub, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(kUsage);
  }

  for (auto* sub : {design, resolve, mech, put, cost, simulate}) {
    if (sub->parsed()) c.command = sub->get_name();
  }
  if (c.design.file) {
    if (!c.design.kind.empty()) {
      err << detail::error_json("usage", "--design and --design-file are exclusive").dump() << '\n';
      return static_cast<int>(kUsage);
    }
    c.design.kind = "file";
  }
  if (c.resolution_file && c.resolution == "none") c.resolution = "file";
  if (c.command == "design") c.design.kind = c.action;
  if (c.command == "simulate") {
    if (!c.n) c.n = 10'000;
    if (!c.trials) c.trials = 200;
  }
  return c;
}

}  // namespace ldpres::cli
