// Copyright 2026 The ensdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENSDIST_TOOLS_CLI_HPP_
#define ENSDIST_TOOLS_CLI_HPP_

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ensdist/ensdist.hpp"

namespace ensdist::cli {

using Json = nlohmann::ordered_json;

enum class ExitCode : int { kOk = 0, kConsistency = 1, kParameter = 2 };

/// Every flag of every subcommand; unused ones keep their defaults.
struct RunConfig {
  std::string subcommand;
  std::string ensemble = "laguerre";
  std::string metric = "tv";
  std::string regime = "A2";
  std::string mode = "u";
  std::string format = "json";
  std::string out;
  double beta = 1.0;
  int m = 1;
  double a1 = 0.0;
  std::optional<double> a2;
  std::size_t n = 1;
  std::size_t replicates = 2000;
  std::uint64_t seed = 1;
  unsigned shards = 1;
  std::size_t trace_draws = 0;
  // scan
  double rho = 0.5;
  double sigma = 1.0;
  double x = 1.0;
  double y = 1.0;
  int steps = 3;
  double a2_low = 1e4;
  double a2_high = 1e6;
};

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Json params_json(const EnsembleParams &p) {
  Json j;
  j["beta"] = p.beta();
  j["m"] = p.m();
  j["a1"] = p.a1();
  if (p.has_a2()) j["a2"] = p.a2();
  return j;
}

inline Json estimate_json(const Estimate &e, const EnsembleParams &p) {
  Json j;
  j["metric"] = to_string(e.metric);
  j["value"] = e.value;
  j["std_error"] = e.std_error;
  j["n"] = e.n_samples;
  j["seed"] = e.seed;
  j["shards"] = e.shards;
  j["params"] = params_json(p);
  j["flagged"] = e.flagged;
  return j;
}

inline Json clt_json(const CltReport &r, const EnsembleParams &p, const std::string &mode) {
  Json j;
  j["metric"] = "clt";
  j["regime"] = to_string(r.regime);
  j["mode"] = mode;
  j["value"] = r.statistic_samples.mean();
  j["std_error"] = r.statistic_samples.std_error();
  j["n"] = r.replicates;
  j["variance"] = r.statistic_samples.variance();
  j["target_mean"] = r.target_mean;
  j["target_variance"] = r.target_variance;
  j["ks_statistic"] = r.ks.statistic_d;
  j["p_value"] = r.ks.p_value;
  j["seed"] = r.seed;
  j["shards"] = r.shards;
  j["params"] = params_json(p);
  return j;
}

/// Flat CSV rendering of an array of flat JSON objects; nested objects are
/// expanded with dotted keys.
inline void flatten(const Json &j, const std::string &prefix, Json &out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else {
      out[key] = *it;
    }
  }
}

inline std::string csv_cell(const Json &v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return v.dump();
}

inline std::string records_csv(const std::vector<Json> &records) {
  std::vector<Json> flat;
  std::vector<std::string> header;
  for (const auto &r : records) {
    Json f = Json::object();
    flatten(r, "", f);
    for (auto it = f.begin(); it != f.end(); ++it) {
      if (std::find(header.begin(), header.end(), it.key()) == header.end()) {
        header.push_back(it.key());
      }
    }
    flat.push_back(std::move(f));
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto &f : flat) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      os << (i ? "," : "");
      if (f.contains(header[i])) os << csv_cell(f[header[i]]);
    }
    os << "\n";
  }
  return os.str();
}

inline std::string render(const std::vector<Json> &records, const RunConfig &cfg,
                          bool single) {
  if (cfg.format == "csv") return records_csv(records);
  Json doc = single ? records.front() : Json(records);
  return doc.dump(2) + "\n";
}

inline EnsembleParams make_params(const RunConfig &cfg, bool need_a2) {
  if (need_a2 && !cfg.a2) throw ParameterError("--a2 is required for this command");
  return EnsembleParams(cfg.beta, cfg.m, cfg.a1, cfg.a2);
}

inline RngStream make_rng(const RunConfig &cfg) { return RngStream(cfg.seed); }

inline std::string cmd_sample(const RunConfig &cfg) {
  SpectrumKind kind;
  if (cfg.ensemble == "laguerre") {
    kind = SpectrumKind::kLaguerre;
  } else if (cfg.ensemble == "jacobi") {
    kind = SpectrumKind::kJacobiUnit;
  } else {
    kind = SpectrumKind::kJacobiScaled;
  }
  const auto p = make_params(cfg, kind != SpectrumKind::kLaguerre);
  const auto spectra = collect_sharded(make_rng(cfg), ShardPlan{cfg.n, cfg.shards},
                                       [&](RngStream &s) { return sample_spectrum(kind, p, s); });
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "draw";
    for (int i = 1; i <= p.m(); ++i) os << ",eig" << i;
    os << "\n";
    for (std::size_t d = 0; d < spectra.size(); ++d) {
      os << d;
      for (double v : spectra[d].values) os << "," << num(v);
      os << "\n";
    }
    return os.str();
  }
  Json j;
  j["ensemble"] = to_string(kind);
  j["n"] = cfg.n;
  j["seed"] = cfg.seed;
  j["shards"] = cfg.shards;
  j["params"] = params_json(p);
  Json draws = Json::array();
  for (const auto &s : spectra) draws.push_back(s.values);
  j["draws"] = std::move(draws);
  return j.dump(2) + "\n";
}

inline Json value_with_error_json(const ValueWithError &v, double target) {
  Json j;
  j["value"] = v.value;
  j["std_error"] = v.std_error;
  j["target"] = target;
  j["z"] = v.z_score(target);
  return j;
}

inline std::string cmd_moments(const RunConfig &cfg) {
  const auto p = make_params(cfg, false);
  const auto stats = laguerre_exact_stats(p);
  Json j;
  j["params"] = params_json(p);
  j["var_sum"] = stats.var_sum;
  j["e_sq"] = stats.e_sq;
  j["var_sq"] = stats.var_sq;
  j["cov_lin_sq"] = stats.cov_lin_sq;
  j["e_cube"] = stats.e_cube;
  if (p.has_a2()) {
    const auto jm = jacobi_moment_estimates(p);
    j["jacobi_s1"] = jm.s1;
    j["jacobi_s2"] = jm.s2;
    j["jacobi_s3"] = jm.s3;
  }
  if (cfg.trace_draws > 0) {
    RngStream rng = make_rng(cfg).substream(1);
    for (std::size_t d = 0; d < cfg.trace_draws; ++d) {
      const auto a = sample_laguerre_bidiagonal(p, rng);
      for (int k = 1; k <= 3; ++k) trace_power_oracle(a, k, k == 1 ? 0.0 : 2.0 * p.a1());
    }
    j["trace_draws_checked"] = cfg.trace_draws;
  }
  if (cfg.n > 1) {
    const auto probe = laguerre_stats_probe(p, cfg.n, make_rng(cfg), cfg.shards);
    Json mc;
    mc["n"] = cfg.n;
    mc["seed"] = cfg.seed;
    mc["shards"] = cfg.shards;
    mc["var_sum"] = value_with_error_json(probe.var_sum, stats.var_sum);
    mc["e_sq"] = value_with_error_json(probe.e_sq, stats.e_sq);
    mc["var_sq"] = value_with_error_json(probe.var_sq, stats.var_sq);
    mc["cov_lin_sq"] = value_with_error_json(probe.cov_lin_sq, stats.cov_lin_sq);
    mc["e_cube"] = value_with_error_json(probe.e_cube, stats.e_cube);
    j["monte_carlo"] = std::move(mc);
  }
  return render({j}, cfg, true);
}

inline std::string cmd_distance(const RunConfig &cfg) {
  const auto p = make_params(cfg, true);
  const auto rng = make_rng(cfg);
  const Estimate e = cfg.metric == "kl" ? kl_estimate(p, cfg.n, rng, cfg.shards)
                                        : tv_estimate(p, cfg.n, rng, cfg.shards);
  return render({estimate_json(e, p)}, cfg, true);
}

inline std::string cmd_clt(const RunConfig &cfg) {
  const auto p = make_params(cfg, true);
  const auto rng = make_rng(cfg);
  const CltRegime regime = cfg.regime == "A3" ? CltRegime::kA3 : CltRegime::kA2;
  CltReport rep;
  if (cfg.mode == "quadratic") {
    rep = quadratic_clt_check(p, cfg.replicates, rng, cfg.shards);
  } else {
    const CltMode mode = cfg.mode == "log_lm_prime" ? CltMode::kLogLmPrime : CltMode::kU;
    rep = clt_harness(p, regime, cfg.replicates, rng, mode, cfg.shards);
  }
  return render({clt_json(rep, p, cfg.mode)}, cfg, true);
}

inline std::string cmd_scan(const RunConfig &cfg) {
  RegimeSpec spec;
  if (cfg.regime == "A1") {
    spec = RegimeSpec::a1_regime(cfg.rho);
  } else if (cfg.regime == "A2") {
    spec = RegimeSpec::a2_regime(cfg.sigma);
  } else if (cfg.regime == "A3") {
    spec = RegimeSpec::a3_regime(cfg.x, cfg.y);
  } else {
    spec = RegimeSpec::vanishing(cfg.a1, cfg.m);
  }
  const auto schedule = make_schedule(spec, cfg.beta, cfg.steps, cfg.a2_low, cfg.a2_high);
  ScanMetric metric = ScanMetric::kTv;
  if (cfg.metric == "kl") metric = ScanMetric::kKl;
  if (cfg.metric == "clt") metric = ScanMetric::kClt;
  const std::size_t n = metric == ScanMetric::kClt ? cfg.replicates : cfg.n;
  const auto entries = scan(schedule, metric, n, make_rng(cfg), cfg.shards);
  std::vector<Json> records;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto &e = entries[i];
    Json j;
    j["point"] = i;
    j["regime"] = to_string(spec.kind);
    j["sigma_proxy"] = e.point.sigma_proxy;
    j["x_proxy"] = e.point.x_proxy;
    j["y_proxy"] = e.point.y_proxy;
    j["gamma_proxy"] = e.point.gamma_proxy;
    j["failed"] = e.failed;
    if (e.estimate || e.clt) {
      const Json body = e.estimate ? estimate_json(*e.estimate, e.point.params)
                                   : clt_json(*e.clt, e.point.params, "u");
      for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
    } else {
      j["metric"] = to_string(metric);
      j["seed"] = cfg.seed;
      j["shards"] = cfg.shards;
      j["params"] = params_json(e.point.params);
      j["error"] = e.error;
    }
    records.push_back(std::move(j));
  }
  return render(records, cfg, false);
}

inline void add_common(CLI::App *sub, RunConfig &cfg, bool estimator) {
  sub->add_option("--beta", cfg.beta, "Dyson index beta > 0")->check(CLI::PositiveNumber);
  sub->add_option("--m", cfg.m, "number of eigenvalues")->check(CLI::PositiveNumber);
  sub->add_option("--a1", cfg.a1, "first shape parameter");
  sub->add_option("--a2", cfg.a2, "second shape parameter (Jacobi)");
  sub->add_option("--seed", cfg.seed, "base seed");
  sub->add_option("--shards", cfg.shards, "worker shards")->check(CLI::PositiveNumber);
  sub->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", cfg.out, "output file (default stdout)");
  if (estimator) {
    sub->add_option("--n", cfg.n, "number of Monte Carlo draws");
  }
}

/// Runs the command line and returns the exit code: 0 on success, 2 when a
/// flag or parameter constraint is violated, 1 on an internal consistency
/// failure.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  RunConfig cfg;
  CLI::App app{"Monte Carlo tools for beta-Jacobi and beta-Laguerre ensembles", "ensdist"};
  app.require_subcommand(1);

  auto *sample = app.add_subcommand("sample", "draw ensemble spectra");
  add_common(sample, cfg, true);
  sample->add_option("--ensemble", cfg.ensemble, "laguerre | jacobi | jacobi-scaled")
      ->check(CLI::IsMember({"laguerre", "jacobi", "jacobi-scaled"}));

  auto *moments = app.add_subcommand("moments", "closed-form and Monte Carlo moments");
  add_common(moments, cfg, true);
  moments->add_option("--trace-draws", cfg.trace_draws, "draws checked by the trace oracle");

  auto *distance = app.add_subcommand("distance", "TV or KL distance estimate");
  add_common(distance, cfg, true);
  distance->add_option("--metric", cfg.metric, "tv | kl")->check(CLI::IsMember({"tv", "kl"}));

  auto *clt = app.add_subcommand("clt", "central limit check of U_m");
  add_common(clt, cfg, false);
  clt->add_option("--regime", cfg.regime, "A2 | A3")->check(CLI::IsMember({"A2", "A3"}));
  clt->add_option("--mode", cfg.mode, "u | log_lm_prime | quadratic")
      ->check(CLI::IsMember({"u", "log_lm_prime", "quadratic"}));
  clt->add_option("--replicates", cfg.replicates, "independent replicates");

  auto *scan_cmd = app.add_subcommand("scan", "estimates along a regime schedule");
  add_common(scan_cmd, cfg, true);
  scan_cmd->add_option("--regime", cfg.regime, "A1 | A2 | A3 | vanishing")
      ->check(CLI::IsMember({"A1", "A2", "A3", "vanishing"}));
  scan_cmd->add_option("--metric", cfg.metric, "tv | kl | clt")
      ->check(CLI::IsMember({"tv", "kl", "clt"}));
  scan_cmd->add_option("--rho", cfg.rho, "A1 ratio a1/a2");
  scan_cmd->add_option("--sigma", cfg.sigma, "A2 constant a1 m / a2");
  scan_cmd->add_option("--x", cfg.x, "A3 constant a1 / sqrt(a2)");
  scan_cmd->add_option("--y", cfg.y, "A3 constant m / sqrt(a2)");
  scan_cmd->add_option("--steps", cfg.steps, "schedule points");
  scan_cmd->add_option("--a2-low", cfg.a2_low, "first a2");
  scan_cmd->add_option("--a2-high", cfg.a2_high, "last a2");
  scan_cmd->add_option("--replicates", cfg.replicates, "replicates per point for clt");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kParameter);
  }

  try {
    std::string text;
    if (sample->parsed()) {
      cfg.subcommand = "sample";
      text = cmd_sample(cfg);
    } else if (moments->parsed()) {
      cfg.subcommand = "moments";
      text = cmd_moments(cfg);
    } else if (distance->parsed()) {
      cfg.subcommand = "distance";
      text = cmd_distance(cfg);
    } else if (clt->parsed()) {
      cfg.subcommand = "clt";
      text = cmd_clt(cfg);
    } else {
      cfg.subcommand = "scan";
      text = cmd_scan(cfg);
    }
    if (cfg.out.empty()) {
      out << text;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw ParameterError("cannot open output file " + cfg.out);
      f << text;
    }
  } catch (const ParameterError &e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kParameter);
  } catch (const DomainError &e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kParameter);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kConsistency);
  }
  return 0;
}

}  // namespace ensdist::cli

#endif  // ENSDIST_TOOLS_CLI_HPP_
