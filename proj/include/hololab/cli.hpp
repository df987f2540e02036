#pragma once

// Experiment driver behind the holo-lwe-lab binary. Each subcommand turns a
// validated config section into CSV/JSON files under the output directory,
// plus a manifest naming the run (config hash, seed, artifact version).
// Identical config + seed must reproduce every file byte for byte, so all
// randomness flows through derive_seed and all serialization goes through
// report.hpp. Every emitted record names the model formula it instantiates
// in an "anchor" field; the anchor strings are part of the output schema.
//
// Exit-code contract (see run_cli): 0 success, 2 config error, 3 runtime
// failure. Expected per-experiment failures (e.g. infeasible attack
// parameters) are recorded in the output instead of failing the run.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hololab/ads_geometry.hpp"
#include "hololab/common.hpp"
#include "hololab/cost_models.hpp"
#include "hololab/gaussian_bulk.hpp"
#include "hololab/lwe_etcf.hpp"
#include "hololab/probe_measurement.hpp"
#include "hololab/report.hpp"
#include "hololab/state_entropy.hpp"

namespace hololab::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// config schema

namespace detail {

inline void require_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& path) {
  if (!j.is_object())
    throw ConfigError("config: '" + path + "' must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key))
      throw ConfigError("config: unknown key '" + path + key + "'");
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: key '" + key + "' has the wrong type");
  }
}

// z is either a number or "auto", which matches the detection threshold to
// the configured target error
inline double resolve_z(const json& section, double target_error,
                        double fallback) {
  if (!section.contains("z")) return fallback;
  const json& z = section.at("z");
  if (z.is_string()) {
    if (z.get<std::string>() != "auto")
      throw ConfigError("config: z must be a number or \"auto\"");
    return probe::z_for_target_error(target_error);
  }
  if (!z.is_number()) throw ConfigError("config: z must be a number or \"auto\"");
  return z.get<double>();
}

}  // namespace detail

struct EtcfGridPoint {
  int n = 2, m_rows = 3, k = 1;
  std::int64_t q = 3;
  double sigma = 0.0;
  bool noiseless = true;

  lwe::LweParams params() const {
    lwe::LweParams p;
    p.n = n;
    p.m_rows = m_rows;
    p.q = q;
    p.sigma = sigma;
    p.k = k;
    p.noiseless = noiseless;
    return p;
  }
};

struct RunConfig {
  std::uint64_t master_seed = 20260814;
  std::string output_dir = "out";
  std::string format = "both";  // json | csv | both

  std::vector<EtcfGridPoint> etcf_grid;
  std::vector<EtcfGridPoint> entropy_grid;

  struct {
    double kappa = 1.0, dS_bits = 1.0;
    std::vector<int> N_list = {6, 16, 64, 100, 256};
    std::vector<double> ell_over_eps = {2.0, 10.0, 100.0, 1000.0};
  } geodesic;

  struct {
    std::vector<double> m_list = {1.0, 2.0, 3.0, 4.0};
    double L = 1.0, dL = 0.5, sigma_shot = 1.0;
    double target_error = 1.0 / 3.0;
    int trials = 400;
    double z = 0.0;  // resolved in parse_config
    std::int64_t shots_cap = 1'000'000'000;
    int N = 64;
    double kappa = 1.0, dS_bits = 1.0, alpha_exp = 2.0;
  } probe;

  struct {
    int D = 64;
    double mass0 = 1e-3, coupling = 1.0;
    std::vector<int> lengths = {4, 8, 16, 32};
    double flm_s_cl = 25.0, flm_delta_area = 0.8, flm_wald_like = 0.3,
           flm_counterterms = -0.1;
  } bulk;

  struct {
    std::vector<int> N_list = {96, 128, 160, 192, 224, 256};
    cost::LweFamily family;
    cost::HoloCostParams holo;
  } costs;

  struct {
    std::int64_t q = 3;
    int n = 2, m_rows = 3, k = 1;
    int N = 64;
    double kappa = 1.0, m = 2.0, sigma_shot = 1.0, z = 2.0;
    double ell_over_eps = 3.0;
    std::int64_t budget = 0;  // 0: twice the predicted M_exact
    int reps = 500;
  } protocol;

  json normalized;  // fully resolved config, hashed into the manifest
};

inline RunConfig parse_config(const json& user) {
  using detail::get_or;
  using detail::require_keys;

  require_keys(user, {"master_seed", "output_dir", "format", "etcf", "entropy",
                      "geodesic", "probe", "bulk", "costs", "protocol"},
               "");
  RunConfig cfg;
  cfg.master_seed = get_or<std::uint64_t>(user, "master_seed", cfg.master_seed);
  cfg.output_dir = get_or<std::string>(user, "output_dir", cfg.output_dir);
  cfg.format = get_or<std::string>(user, "format", cfg.format);
  if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "both")
    throw ConfigError("config: format must be json, csv or both");

  const auto parse_grid_point = [](const json& p, const std::string& path,
                                   bool with_sigma) {
    std::set<std::string> allowed = {"n", "m_rows", "q", "k"};
    if (with_sigma) {
      allowed.insert("sigma");
      allowed.insert("noiseless");
    }
    require_keys(p, allowed, path);
    EtcfGridPoint g;
    g.n = get_or<int>(p, "n", g.n);
    g.m_rows = get_or<int>(p, "m_rows", g.m_rows);
    g.q = get_or<std::int64_t>(p, "q", g.q);
    g.k = get_or<int>(p, "k", g.k);
    if (with_sigma) {
      g.sigma = get_or<double>(p, "sigma", g.sigma);
      g.noiseless = get_or<bool>(p, "noiseless", g.sigma == 0.0);
    }
    g.params().validate();
    return g;
  };

  if (user.contains("etcf")) {
    require_keys(user.at("etcf"), {"grid"}, "etcf.");
    if (user.at("etcf").contains("grid")) {
      const json& grid = user.at("etcf").at("grid");
      if (!grid.is_array()) throw ConfigError("config: etcf.grid must be a list");
      for (const auto& p : grid)
        cfg.etcf_grid.push_back(parse_grid_point(p, "etcf.grid.", true));
    }
  }
  if (cfg.etcf_grid.empty()) {
    cfg.etcf_grid = {{2, 3, 1, 3, 0.0, true},
                     {2, 3, 1, 5, 0.0, true},
                     {2, 4, 2, 2, 0.0, true},
                     {2, 5, 1, 11, 0.5, false}};
  }

  if (user.contains("entropy")) {
    require_keys(user.at("entropy"), {"grid"}, "entropy.");
    if (user.at("entropy").contains("grid")) {
      const json& grid = user.at("entropy").at("grid");
      if (!grid.is_array())
        throw ConfigError("config: entropy.grid must be a list");
      for (const auto& p : grid)
        cfg.entropy_grid.push_back(parse_grid_point(p, "entropy.grid.", false));
    }
  }
  if (cfg.entropy_grid.empty()) {
    cfg.entropy_grid = {{2, 3, 1, 3, 0.0, true},
                        {2, 4, 2, 2, 0.0, true},
                        {2, 3, 1, 5, 0.0, true}};
  }

  if (user.contains("geodesic")) {
    const json& g = user.at("geodesic");
    require_keys(g, {"kappa", "dS_bits", "N_list", "ell_over_eps"}, "geodesic.");
    cfg.geodesic.kappa = get_or<double>(g, "kappa", cfg.geodesic.kappa);
    cfg.geodesic.dS_bits = get_or<double>(g, "dS_bits", cfg.geodesic.dS_bits);
    cfg.geodesic.N_list =
        get_or<std::vector<int>>(g, "N_list", cfg.geodesic.N_list);
    cfg.geodesic.ell_over_eps = get_or<std::vector<double>>(
        g, "ell_over_eps", cfg.geodesic.ell_over_eps);
  }

  {
    const json p = user.contains("probe") ? user.at("probe") : json::object();
    detail::require_keys(p,
                         {"m_list", "L", "dL", "sigma_shot", "target_error",
                          "trials", "z", "shots_cap", "N", "kappa", "dS_bits",
                          "alpha_exp"},
                         "probe.");
    auto& c = cfg.probe;
    c.m_list = get_or<std::vector<double>>(p, "m_list", c.m_list);
    c.L = get_or<double>(p, "L", c.L);
    c.dL = get_or<double>(p, "dL", c.dL);
    c.sigma_shot = get_or<double>(p, "sigma_shot", c.sigma_shot);
    c.target_error = get_or<double>(p, "target_error", c.target_error);
    c.trials = get_or<int>(p, "trials", c.trials);
    c.shots_cap = get_or<std::int64_t>(p, "shots_cap", c.shots_cap);
    c.N = get_or<int>(p, "N", c.N);
    c.kappa = get_or<double>(p, "kappa", c.kappa);
    c.dS_bits = get_or<double>(p, "dS_bits", c.dS_bits);
    c.alpha_exp = get_or<double>(p, "alpha_exp", c.alpha_exp);
    // default "auto": the predictor is compared against the empirical search,
    // so its error budget must match the search target
    c.z = detail::resolve_z(p, c.target_error,
                            probe::z_for_target_error(c.target_error));
  }

  if (user.contains("bulk")) {
    const json& b = user.at("bulk");
    require_keys(b,
                 {"D", "mass0", "coupling", "lengths", "flm_s_cl",
                  "flm_delta_area", "flm_wald_like", "flm_counterterms"},
                 "bulk.");
    auto& c = cfg.bulk;
    c.D = get_or<int>(b, "D", c.D);
    c.mass0 = get_or<double>(b, "mass0", c.mass0);
    c.coupling = get_or<double>(b, "coupling", c.coupling);
    c.lengths = get_or<std::vector<int>>(b, "lengths", c.lengths);
    c.flm_s_cl = get_or<double>(b, "flm_s_cl", c.flm_s_cl);
    c.flm_delta_area = get_or<double>(b, "flm_delta_area", c.flm_delta_area);
    c.flm_wald_like = get_or<double>(b, "flm_wald_like", c.flm_wald_like);
    c.flm_counterterms =
        get_or<double>(b, "flm_counterterms", c.flm_counterterms);
    for (int ell : c.lengths)
      if (ell < 1 || ell > c.D)
        throw ConfigError("config: bulk.lengths entries must lie in [1, D]");
  }

  if (user.contains("costs")) {
    const json& c = user.at("costs");
    require_keys(c,
                 {"N_list", "q", "sigma", "m_ratio", "sieve", "alpha",
                  "poly_degree", "bulk_exponent", "bandwidth"},
                 "costs.");
    auto& s = cfg.costs;
    s.N_list = get_or<std::vector<int>>(c, "N_list", s.N_list);
    s.family.q = get_or<std::int64_t>(c, "q", s.family.q);
    s.family.sigma = get_or<double>(c, "sigma", s.family.sigma);
    s.family.m_ratio = get_or<double>(c, "m_ratio", s.family.m_ratio);
    const std::string sieve = get_or<std::string>(c, "sieve", "classical");
    if (sieve == "classical")
      s.family.sieve = cost::SieveModel::ClassicalSieve;
    else if (sieve == "quantum")
      s.family.sieve = cost::SieveModel::QuantumSieve;
    else if (sieve == "enumeration")
      s.family.sieve = cost::SieveModel::Enumeration;
    else
      throw ConfigError("config: costs.sieve must be classical, quantum or "
                        "enumeration");
    s.holo.alpha = get_or<double>(c, "alpha", s.holo.alpha);
    s.holo.poly_degree = get_or<double>(c, "poly_degree", s.holo.poly_degree);
    s.holo.bulk_exponent =
        get_or<double>(c, "bulk_exponent", s.holo.bulk_exponent);
    s.holo.bandwidth = get_or<int>(c, "bandwidth", s.holo.bandwidth);
  }

  if (user.contains("protocol")) {
    const json& p = user.at("protocol");
    require_keys(p,
                 {"q", "n", "m_rows", "k", "N", "kappa", "m", "sigma_shot",
                  "z", "ell_over_eps", "budget", "reps"},
                 "protocol.");
    auto& c = cfg.protocol;
    c.q = get_or<std::int64_t>(p, "q", c.q);
    c.n = get_or<int>(p, "n", c.n);
    c.m_rows = get_or<int>(p, "m_rows", c.m_rows);
    c.k = get_or<int>(p, "k", c.k);
    c.N = get_or<int>(p, "N", c.N);
    c.kappa = get_or<double>(p, "kappa", c.kappa);
    c.m = get_or<double>(p, "m", c.m);
    c.sigma_shot = get_or<double>(p, "sigma_shot", c.sigma_shot);
    c.z = detail::resolve_z(p, 1.0 / 3.0, c.z);
    c.ell_over_eps = get_or<double>(p, "ell_over_eps", c.ell_over_eps);
    c.budget = get_or<std::int64_t>(p, "budget", c.budget);
    c.reps = get_or<int>(p, "reps", c.reps);
  }

  // the resolved view that the manifest hashes
  json norm;
  norm["master_seed"] = cfg.master_seed;
  norm["output_dir"] = cfg.output_dir;
  norm["format"] = cfg.format;
  const auto grid_json = [](const std::vector<EtcfGridPoint>& grid) {
    json a = json::array();
    for (const auto& g : grid)
      a.push_back({{"n", g.n},
                   {"m_rows", g.m_rows},
                   {"q", g.q},
                   {"k", g.k},
                   {"sigma", g.sigma},
                   {"noiseless", g.noiseless}});
    return a;
  };
  norm["etcf"] = {{"grid", grid_json(cfg.etcf_grid)}};
  norm["entropy"] = {{"grid", grid_json(cfg.entropy_grid)}};
  norm["geodesic"] = {{"kappa", cfg.geodesic.kappa},
                      {"dS_bits", cfg.geodesic.dS_bits},
                      {"N_list", cfg.geodesic.N_list},
                      {"ell_over_eps", cfg.geodesic.ell_over_eps}};
  norm["probe"] = {{"m_list", cfg.probe.m_list},
                   {"L", cfg.probe.L},
                   {"dL", cfg.probe.dL},
                   {"sigma_shot", cfg.probe.sigma_shot},
                   {"target_error", cfg.probe.target_error},
                   {"trials", cfg.probe.trials},
                   {"z", cfg.probe.z},
                   {"shots_cap", cfg.probe.shots_cap},
                   {"N", cfg.probe.N},
                   {"kappa", cfg.probe.kappa},
                   {"dS_bits", cfg.probe.dS_bits},
                   {"alpha_exp", cfg.probe.alpha_exp}};
  norm["bulk"] = {{"D", cfg.bulk.D},
                  {"mass0", cfg.bulk.mass0},
                  {"coupling", cfg.bulk.coupling},
                  {"lengths", cfg.bulk.lengths},
                  {"flm_s_cl", cfg.bulk.flm_s_cl},
                  {"flm_delta_area", cfg.bulk.flm_delta_area},
                  {"flm_wald_like", cfg.bulk.flm_wald_like},
                  {"flm_counterterms", cfg.bulk.flm_counterterms}};
  norm["costs"] = {{"N_list", cfg.costs.N_list},
                   {"q", cfg.costs.family.q},
                   {"sigma", cfg.costs.family.sigma},
                   {"m_ratio", cfg.costs.family.m_ratio},
                   {"sieve", std::string(cost::to_string(cfg.costs.family.sieve))},
                   {"alpha", cfg.costs.holo.alpha},
                   {"poly_degree", cfg.costs.holo.poly_degree},
                   {"bulk_exponent", cfg.costs.holo.bulk_exponent},
                   {"bandwidth", cfg.costs.holo.bandwidth}};
  norm["protocol"] = {{"q", cfg.protocol.q},
                      {"n", cfg.protocol.n},
                      {"m_rows", cfg.protocol.m_rows},
                      {"k", cfg.protocol.k},
                      {"N", cfg.protocol.N},
                      {"kappa", cfg.protocol.kappa},
                      {"m", cfg.protocol.m},
                      {"sigma_shot", cfg.protocol.sigma_shot},
                      {"z", cfg.protocol.z},
                      {"ell_over_eps", cfg.protocol.ell_over_eps},
                      {"budget", cfg.protocol.budget},
                      {"reps", cfg.protocol.reps}};
  cfg.normalized = std::move(norm);
  return cfg;
}

// ---------------------------------------------------------------------------
// experiments

struct OutFile {
  std::string name;
  std::string content;
};

namespace detail {

inline std::string mode_label(EtcfMode m) { return std::string(to_string(m)); }

inline json fit_json(const LinearFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
}

}  // namespace detail

inline std::vector<OutFile> run_etcf(const RunConfig& cfg) {
  constexpr const char* kAnchor = "Eq-ETCFfunction";
  report::CsvWriter csv({"anchor", "q", "n", "m_rows", "k", "sigma",
                         "noiseless", "mode", "domain", "distinct_outputs",
                         "count1", "count2", "max_count", "fraction_count2",
                         "all_counts_one", "seed"});
  json records = json::array();
  json instances = json::array();

  std::uint64_t idx = 0;
  for (const auto& point : cfg.etcf_grid) {
    for (EtcfMode mode : {EtcfMode::Injective, EtcfMode::Degenerate}) {
      const std::uint64_t seed =
          derive_seed(cfg.master_seed, "etcf-sample", idx++);
      const auto inst = lwe::sample_instance(point.params(), mode, seed);
      const auto summary = lwe::summarize(lwe::preimage_census(inst));
      const std::uint64_t c1 = summary.histogram.contains(1)
                                   ? summary.histogram.at(1)
                                   : 0;
      const std::uint64_t c2 = summary.histogram.contains(2)
                                   ? summary.histogram.at(2)
                                   : 0;
      const std::uint64_t cmax =
          summary.histogram.empty() ? 0 : summary.histogram.rbegin()->first;
      csv.add_row({std::string(kAnchor), point.q,
                   static_cast<std::int64_t>(point.n),
                   static_cast<std::int64_t>(point.m_rows),
                   static_cast<std::int64_t>(point.k), point.sigma,
                   point.noiseless, detail::mode_label(mode), summary.total,
                   summary.distinct, c1, c2, cmax, summary.fraction_with(2),
                   summary.counts_within(1, 1), report::hex64(seed)});
      records.push_back({{"anchor", kAnchor},
                         {"q", point.q},
                         {"n", point.n},
                         {"m_rows", point.m_rows},
                         {"k", point.k},
                         {"sigma", point.sigma},
                         {"noiseless", point.noiseless},
                         {"mode", detail::mode_label(mode)},
                         {"domain", summary.total},
                         {"distinct_outputs", summary.distinct},
                         {"fraction_count2", summary.fraction_with(2)},
                         {"all_counts_one", summary.counts_within(1, 1)},
                         {"seed", report::hex64(seed)}});
      instances.push_back(lwe::to_json(inst));
    }
  }
  return {{"etcf_census.csv", csv.str()},
          {"etcf_census.json", json{{"records", records}}.dump(2) + "\n"},
          {"etcf_instances.json", instances.dump(2) + "\n"}};
}

inline std::vector<OutFile> run_entropy(const RunConfig& cfg) {
  constexpr const char* kAnchor = "QED-EntropyGap";
  report::CsvWriter csv(
      {"anchor", "mode", "q", "n", "k", "entropy_bits"});
  report::CsvWriter spectra(
      {"anchor", "q", "n", "k", "mode", "register", "index", "eigenvalue"});
  json records = json::array();
  json gaps = json::array();

  std::uint64_t idx = 0;
  for (const auto& point : cfg.entropy_grid) {
    const auto inst_f = lwe::sample_instance(
        point.params(), EtcfMode::Injective,
        derive_seed(cfg.master_seed, "entropy-injective", idx));
    const auto inst_g = lwe::sample_instance(
        point.params(), EtcfMode::Degenerate,
        derive_seed(cfg.master_seed, "entropy-degenerate", idx));
    ++idx;

    double bits[2];
    const lwe::EtcfInstance* insts[2] = {&inst_f, &inst_g};
    state::DensityMatrix rho_f{Eigen::MatrixXcd::Identity(1, 1)},
        rho_g{Eigen::MatrixXcd::Identity(1, 1)};
    for (int side = 0; side < 2; ++side) {
      const auto psi = state::build_function_state(*insts[side]);
      auto rho = state::reduce_density_matrix(psi, state::Register::Input);
      bits[side] = state::von_neumann_entropy(rho, EntropyUnit::Bits);
      const std::string mode = detail::mode_label(insts[side]->mode);
      csv.add_row({std::string(kAnchor), mode, point.q,
                   static_cast<std::int64_t>(point.n),
                   static_cast<std::int64_t>(point.k), bits[side]});
      records.push_back({{"anchor", kAnchor},
                         {"mode", mode},
                         {"q", point.q},
                         {"n", point.n},
                         {"k", point.k},
                         {"entropy_bits", bits[side]}});
      for (auto reg : {state::Register::Input, state::Register::Output}) {
        const auto red = state::reduce_density_matrix(psi, reg);
        const auto eigs = state::spectrum(red);
        for (std::size_t i = 0; i < eigs.size(); ++i)
          spectra.add_row({std::string(kAnchor), point.q,
                           static_cast<std::int64_t>(point.n),
                           static_cast<std::int64_t>(point.k), mode,
                           std::string(reg == state::Register::Input
                                           ? "input"
                                           : "output"),
                           static_cast<std::int64_t>(i), eigs[i]});
      }
      if (side == 0)
        rho_f = std::move(rho);
      else
        rho_g = std::move(rho);
    }
    const double gap = state::entropy_gap(inst_f, inst_g);
    const auto side = state::qed_decide(rho_f, rho_g, 0.5 * point.k);
    gaps.push_back({{"anchor", kAnchor},
                    {"q", point.q},
                    {"n", point.n},
                    {"k", point.k},
                    {"gap_bits", gap},
                    {"expected_gap_bits", point.k},
                    {"decision", side == state::LargerSide::FirstLarger
                                     ? "first-larger"
                                     : "second-larger"}});
  }
  return {{"entropy_report.csv", csv.str()},
          {"entropy_report.json",
           json{{"records", records}, {"gaps", gaps}}.dump(2) + "\n"},
          {"entropy_spectra.csv", spectra.str()}};
}

inline std::vector<OutFile> run_geodesic(const RunConfig& cfg) {
  constexpr const char* kAnchor = "RT-BrownHenneaux";
  report::CsvWriter csv({"anchor", "N", "kappa", "R", "G_N", "epsilon",
                         "central_charge", "ell_over_eps", "L_RT", "S_nats",
                         "S_bits", "identity_residual", "dS_bits", "delta_L",
                         "inverse_residual"});
  json records = json::array();
  for (int N : cfg.geodesic.N_list) {
    const auto geom = ads::geometry_from_qubits(N, cfg.geodesic.kappa);
    const double c = ads::brown_henneaux_central_charge(geom);
    const double dL =
        ads::entropy_gap_to_length_gap(geom, cfg.geodesic.dS_bits);
    for (double ratio : cfg.geodesic.ell_over_eps) {
      const double ell = ratio * geom.epsilon;
      const double L = ads::rt_geodesic_length(geom, ell);
      const double s_nats = ads::rt_entropy(geom, L, EntropyUnit::Nats);
      const double s_bits = ads::rt_entropy(geom, L, EntropyUnit::Bits);
      // S = (c/3) ln(ell/eps) is the closed-form composition of the two maps
      const double identity = std::abs(s_nats - c / 3.0 * std::log(ratio)) /
                              std::max(1.0, std::abs(s_nats));
      const double inverse = std::abs(
          ads::rt_entropy(geom, L + dL, EntropyUnit::Bits) - s_bits -
          cfg.geodesic.dS_bits);
      csv.add_row({std::string(kAnchor), static_cast<std::int64_t>(N),
                   cfg.geodesic.kappa, geom.R, geom.G_N, geom.epsilon, c,
                   ratio, L, s_nats, s_bits, identity, cfg.geodesic.dS_bits,
                   dL, inverse});
      records.push_back({{"anchor", kAnchor},
                         {"N", N},
                         {"kappa", cfg.geodesic.kappa},
                         {"central_charge", c},
                         {"ell_over_eps", ratio},
                         {"L_RT", L},
                         {"S_bits", s_bits},
                         {"identity_residual", identity},
                         {"delta_L", dL}});
    }
  }
  return {{"geodesic_grid.csv", csv.str()},
          {"geodesic_grid.json", json{{"records", records}}.dump(2) + "\n"}};
}

inline std::vector<OutFile> run_probe(const RunConfig& cfg) {
  constexpr const char* kAnchor = "Eq-MeasureGeodesicCom";
  const auto& pc = cfg.probe;
  report::CsvWriter csv({"anchor", "m", "L", "dL", "sigma_shot", "z",
                         "target_error", "trials", "M_exact", "M_paper",
                         "M_emp", "capped", "emp_over_exact", "err_short",
                         "err_long", "seed"});
  std::vector<double> ln_exact, ln_emp, ms, ln_paper;
  json records = json::array();
  for (std::size_t i = 0; i < pc.m_list.size(); ++i) {
    probe::ProbeConfig pcfg;
    pcfg.m = pc.m_list[i];
    pcfg.sigma_shot = pc.sigma_shot;
    pcfg.z = pc.z;
    pcfg.N_qubits = pc.N;
    pcfg.alpha_exp = pc.alpha_exp;
    const auto pred = probe::predicted_sample_complexity(pcfg, pc.L, pc.dL);
    const std::uint64_t seed = derive_seed(cfg.master_seed, "probe-search", i);
    const auto emp = probe::empirical_min_shots(
        pcfg, pc.L, pc.dL, pc.target_error, pc.trials, seed, pc.shots_cap);
    const double ratio = static_cast<double>(emp.shots) /
                         static_cast<double>(pred.m_exact);
    csv.add_row({std::string(kAnchor), pcfg.m, pc.L, pc.dL, pc.sigma_shot,
                 pc.z, pc.target_error,
                 static_cast<std::int64_t>(pc.trials), pred.m_exact,
                 pred.m_paper, emp.shots, emp.capped, ratio, emp.err_short,
                 emp.err_long, report::hex64(seed)});
    records.push_back({{"anchor", kAnchor},
                       {"m", pcfg.m},
                       {"L", pc.L},
                       {"dL", pc.dL},
                       {"M_exact", pred.m_exact},
                       {"M_paper", pred.m_paper},
                       {"M_emp", emp.shots},
                       {"capped", emp.capped},
                       {"emp_over_exact", ratio},
                       {"seed", report::hex64(seed)}});
    ms.push_back(pcfg.m);
    ln_exact.push_back(std::log(pred.m_exact_real));
    ln_emp.push_back(std::log(static_cast<double>(emp.shots)));
    ln_paper.push_back(std::log(pred.m_paper));
  }
  json fitj;
  fitj["anchor"] = kAnchor;
  if (ms.size() >= 2) {  // fits are undefined for a single-mass grid
    fitj["lnM_emp_vs_lnM_exact"] =
        detail::fit_json(fit_linear(ln_exact, ln_emp));
    fitj["lnM_emp_vs_m"] = detail::fit_json(fit_linear(ms, ln_emp));
    fitj["lnM_exact_vs_m"] = detail::fit_json(fit_linear(ms, ln_exact));
    fitj["lnM_paper_vs_m"] = detail::fit_json(fit_linear(ms, ln_paper));
  } else {
    fitj["lnM_emp_vs_lnM_exact"] = nullptr;
    fitj["lnM_emp_vs_m"] = nullptr;
    fitj["lnM_exact_vs_m"] = nullptr;
    fitj["lnM_paper_vs_m"] = nullptr;
  }

  probe::ProbeConfig rcfg;
  rcfg.m = 1.0;  // overridden per regime inside the report
  rcfg.sigma_shot = pc.sigma_shot;
  rcfg.z = pc.z;
  rcfg.alpha_exp = pc.alpha_exp;
  const auto regimes =
      probe::regime_report(pc.N, pc.kappa, rcfg, pc.dS_bits);
  const auto entry_json = [](const probe::RegimeEntry& e) {
    return json{{"regime", e.regime},
                {"system_size", e.system_size},
                {"m", e.m},
                {"G_N", e.G_N},
                {"backreaction_ratio", e.backreaction_ratio},
                {"regime_valid", e.regime_valid},
                {"base_length", e.base_length},
                {"wkb_valid", e.wkb_valid},
                {"delta_length", e.delta_length},
                {"ln_M_sql", e.ln_M_sql},
                {"ln_M_paper", e.ln_M_paper},
                {"ln_M_heisenberg", e.ln_M_heisenberg},
                {"ln_M_shadow", e.ln_M_shadow},
                {"alpha_scaling", e.alpha_scaling},
                {"state_blowup", e.state_blowup}};
  };
  json regimej;
  regimej["anchor"] = "SQL-HeavyLightProbes";
  regimej["N"] = regimes.N;
  regimej["kappa"] = regimes.kappa;
  regimej["dS_bits"] = regimes.dS_bits;
  regimej["heavy"] = entry_json(regimes.heavy);
  regimej["light"] = entry_json(regimes.light);

  return {{"probe_points.csv", csv.str()},
          {"probe_fit.json", fitj.dump(2) + "\n"},
          {"probe_regimes.json", regimej.dump(2) + "\n"}};
}

inline std::vector<OutFile> run_bulk(const RunConfig& cfg) {
  constexpr const char* kAnchor = "Eq-FLMCorrections";
  const auto& bc = cfg.bulk;
  const auto cov =
      bulk::build_chain_ground_covariance(bc.D, bc.mass0, bc.coupling);

  const auto full_spec = bulk::symplectic_spectrum(cov);
  double purity_residual = 0.0;
  for (double nu : full_spec.nu)
    purity_residual = std::max(purity_residual, std::abs(nu - 0.5));

  report::CsvWriter entropies({"anchor", "D", "mass0", "coupling", "ell",
                               "S_nats", "S_bits", "S_complement_nats",
                               "complement_residual"});
  std::vector<double> ln_ell, s_nats_list;
  for (int ell : bc.lengths) {
    std::vector<int> region(ell), complement;
    for (int i = 0; i < ell; ++i) region[i] = i;
    for (int i = ell; i < bc.D; ++i) complement.push_back(i);
    const double s = bulk::bulk_entanglement_entropy(
        bulk::restrict_covariance(cov, region), EntropyUnit::Nats);
    double s_comp = s;
    if (!complement.empty())
      s_comp = bulk::bulk_entanglement_entropy(
          bulk::restrict_covariance(cov, complement), EntropyUnit::Nats);
    entropies.add_row({std::string(kAnchor),
                       static_cast<std::int64_t>(bc.D), bc.mass0, bc.coupling,
                       static_cast<std::int64_t>(ell), s,
                       s / std::numbers::ln2, s_comp, std::abs(s - s_comp)});
    ln_ell.push_back(std::log(static_cast<double>(ell)));
    s_nats_list.push_back(s);
  }

  const int ell_max = *std::max_element(bc.lengths.begin(), bc.lengths.end());
  std::vector<int> region(ell_max);
  for (int i = 0; i < ell_max; ++i) region[i] = i;
  const auto cov_region = bulk::restrict_covariance(cov, region);
  const double s_region_nats =
      bulk::bulk_entanglement_entropy(cov_region, EntropyUnit::Nats);

  report::CsvWriter trunc({"anchor", "ell", "J", "value_nats", "dropped_nats",
                           "identity_residual"});
  for (int J = 0; J <= ell_max; ++J) {
    const auto t = bulk::truncated_entropy(cov_region, J, EntropyUnit::Nats);
    trunc.add_row({std::string(kAnchor), static_cast<std::int64_t>(ell_max),
                   static_cast<std::int64_t>(J), t.value, t.dropped_bound,
                   std::abs(t.value + t.dropped_bound - s_region_nats)});
  }

  // covariance export: region block, row-major, layout named in the preamble
  report::CsvWriter cov_csv([&] {
    std::vector<std::string> cols;
    for (int j = 0; j < 2 * ell_max; ++j) cols.push_back("c" + std::to_string(j));
    return cols;
  }());
  cov_csv.set_preamble("# D=" + std::to_string(ell_max) +
                       " ordering=phi_1..phi_D,pi_1..pi_D row-major");
  for (int i = 0; i < 2 * ell_max; ++i) {
    std::vector<report::CsvValue> row;
    for (int j = 0; j < 2 * ell_max; ++j) row.push_back(cov_region.gamma(i, j));
    cov_csv.add_row(row);
  }

  const auto flm = bulk::flm_assemble(
      bc.flm_s_cl, s_region_nats / std::numbers::ln2, bc.flm_delta_area,
      bc.flm_wald_like, bc.flm_counterterms);
  const auto fit = fit_linear(ln_ell, s_nats_list);

  json rep;
  rep["anchor"] = kAnchor;
  rep["D"] = bc.D;
  rep["mass0"] = bc.mass0;
  rep["coupling"] = bc.coupling;
  rep["purity_residual"] = purity_residual;
  rep["pairing_residual"] = full_spec.pairing_residual;
  rep["entropy_fit_vs_ln_ell"] = detail::fit_json(fit);
  rep["phi_decay_exponent"] = bulk::phi_correlation_decay_exponent(cov);
  rep["region_ell"] = ell_max;
  rep["region_entropy_nats"] = s_region_nats;
  rep["region_nu_max"] = bulk::symplectic_spectrum(cov_region).nu.front();
  rep["flm"] = {{"s_cl", flm.s_cl},
                {"s_bulk_ent_bits", flm.s_bulk_ent},
                {"delta_area_term", flm.delta_area_term},
                {"wald_like", flm.wald_like},
                {"counterterms", flm.counterterms},
                {"total", flm.total}};

  return {{"bulk_entropies.csv", entropies.str()},
          {"bulk_truncation.csv", trunc.str()},
          {"bulk_covariance.csv", cov_csv.str()},
          {"bulk_report.json", rep.dump(2) + "\n"}};
}

inline std::vector<OutFile> run_costs(const RunConfig& cfg) {
  const auto table =
      cost::comparison_table(cfg.costs.N_list, cfg.costs.family, cfg.costs.holo);
  const auto anchor_for = [](const std::string& label) -> std::string {
    if (label.rfind("bkz-", 0) == 0) return "BKZ-Lambda1";
    if (label == "holographic-simulation") return "Thm-2";
    if (label == "holographic-no-bulk-overhead") return "Corollary-1";
    return "CovarianceBuild";
  };

  report::CsvWriter csv({"anchor", "label", "N", "log2_cost", "model_params"});
  json records = json::array();
  for (const auto& rec : table.records) {
    json params;
    for (const auto& [k, v] : rec.model_params) params[k] = v;
    csv.add_row({anchor_for(rec.label), rec.label,
                 static_cast<std::int64_t>(rec.N), rec.log2_cost,
                 params.dump()});
    records.push_back({{"anchor", anchor_for(rec.label)},
                       {"label", rec.label},
                       {"N", rec.N},
                       {"log2_cost", rec.log2_cost},
                       {"model_params", params}});
  }
  json fits;
  for (const auto& [label, fit] : table.fits)
    fits[label] = detail::fit_json(fit);
  const json out = {{"records", records}, {"fits", fits}};
  return {{"costs_table.csv", csv.str()},
          {"costs_table.json", out.dump(2) + "\n"}};
}

inline std::vector<OutFile> run_protocol(const RunConfig& cfg) {
  constexpr const char* kAnchor = "Protocol-EntropyToGeodesic";
  const auto& pr = cfg.protocol;

  lwe::LweParams params;
  params.n = pr.n;
  params.m_rows = pr.m_rows;
  params.q = pr.q;
  params.k = pr.k;
  params.sigma = 0.0;
  params.noiseless = true;
  const auto inst_f =
      lwe::sample_instance(params, EtcfMode::Injective,
                           derive_seed(cfg.master_seed, "protocol-injective"));
  const auto inst_g =
      lwe::sample_instance(params, EtcfMode::Degenerate,
                           derive_seed(cfg.master_seed, "protocol-degenerate"));
  const double gap_bits = state::entropy_gap(inst_f, inst_g);

  const auto geom = ads::geometry_from_qubits(pr.N, pr.kappa);
  const double delta_L = ads::entropy_gap_to_length_gap(geom, gap_bits);
  const double ell = pr.ell_over_eps * geom.epsilon;
  const double L0 = ads::rt_geodesic_length(geom, ell);

  probe::ProbeConfig pcfg;
  pcfg.m = pr.m;
  pcfg.sigma_shot = pr.sigma_shot;
  pcfg.z = pr.z;
  pcfg.N_qubits = pr.N;
  const auto pred =
      probe::predicted_sample_complexity(pcfg, L0 - delta_L, delta_L);
  const std::int64_t budget =
      pr.budget > 0 ? pr.budget : 2 * pred.m_exact;

  const auto run_truth = [&](EtcfMode truth, std::string_view label) {
    return probe::holographic_distinguisher(
        geom, pcfg, truth, gap_bits, budget,
        derive_seed(cfg.master_seed, label), ell, pr.reps);
  };
  const auto inj = run_truth(EtcfMode::Injective, "protocol-truth-injective");
  const auto deg = run_truth(EtcfMode::Degenerate, "protocol-truth-degenerate");

  json rep;
  rep["anchor"] = kAnchor;
  rep["lwe"] = {{"q", pr.q}, {"n", pr.n}, {"m_rows", pr.m_rows}, {"k", pr.k}};
  rep["gap_bits"] = gap_bits;
  rep["expected_gap_bits"] = pr.k;
  rep["N"] = pr.N;
  rep["kappa"] = pr.kappa;
  rep["G_N"] = geom.G_N;
  rep["ell_over_eps"] = pr.ell_over_eps;
  rep["base_length"] = L0;
  rep["delta_length"] = delta_L;
  rep["m"] = pr.m;
  rep["backreaction_ratio"] = inj.backreaction_ratio;
  rep["regime_valid"] = inj.regime_valid;
  rep["M_exact"] = pred.m_exact;
  rep["budget"] = budget;
  rep["repetitions"] = pr.reps;
  rep["success_injective"] = inj.success_estimate;
  rep["success_degenerate"] = deg.success_estimate;
  rep["decision_injective"] = detail::mode_label(inj.decision);
  rep["decision_degenerate"] = detail::mode_label(deg.decision);

  report::CsvWriter csv({"anchor", "q", "n", "k", "gap_bits", "N", "kappa",
                         "G_N", "base_length", "delta_length", "m",
                         "backreaction_ratio", "regime_valid", "M_exact",
                         "budget", "reps", "success_injective",
                         "success_degenerate"});
  csv.add_row({std::string(kAnchor), pr.q, static_cast<std::int64_t>(pr.n),
               static_cast<std::int64_t>(pr.k), gap_bits,
               static_cast<std::int64_t>(pr.N), pr.kappa, geom.G_N, L0,
               delta_L, pr.m, inj.backreaction_ratio, inj.regime_valid,
               pred.m_exact, budget, static_cast<std::int64_t>(pr.reps),
               inj.success_estimate, deg.success_estimate});

  return {{"protocol.csv", csv.str()},
          {"protocol.json", rep.dump(2) + "\n"}};
}

// ---------------------------------------------------------------------------
// dispatch

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {
      "etcf", "entropy", "geodesic", "probe", "bulk", "costs", "protocol",
      "all"};
  return names;
}

inline report::Manifest run(const std::string& subcommand,
                            const json& user_config) {
  const RunConfig cfg = parse_config(user_config);

  std::vector<OutFile> files;
  const auto extend = [&](std::vector<OutFile> more) {
    for (auto& f : more) files.push_back(std::move(f));
  };
  if (subcommand == "etcf")
    extend(run_etcf(cfg));
  else if (subcommand == "entropy")
    extend(run_entropy(cfg));
  else if (subcommand == "geodesic")
    extend(run_geodesic(cfg));
  else if (subcommand == "probe")
    extend(run_probe(cfg));
  else if (subcommand == "bulk")
    extend(run_bulk(cfg));
  else if (subcommand == "costs")
    extend(run_costs(cfg));
  else if (subcommand == "protocol")
    extend(run_protocol(cfg));
  else if (subcommand == "all") {
    extend(run_etcf(cfg));
    extend(run_entropy(cfg));
    extend(run_geodesic(cfg));
    extend(run_probe(cfg));
    extend(run_bulk(cfg));
    extend(run_costs(cfg));
    extend(run_protocol(cfg));
  } else {
    throw ConfigError("unknown subcommand '" + subcommand + "'");
  }

  const bool keep_json = cfg.format != "csv";
  const bool keep_csv = cfg.format != "json";
  report::Manifest manifest;
  manifest.subcommand = subcommand;
  manifest.seed = cfg.master_seed;
  manifest.cfg_hash = report::config_hash(cfg.normalized);

  const std::filesystem::path out_dir(cfg.output_dir);
  for (const auto& f : files) {
    const bool is_json = f.name.ends_with(".json");
    if ((is_json && !keep_json) || (!is_json && !keep_csv)) continue;
    report::write_file_atomic(out_dir / f.name, f.content);
    manifest.files.push_back(f.name);
  }
  std::sort(manifest.files.begin(), manifest.files.end());
  report::write_file_atomic(out_dir / "manifest.json",
                            manifest.to_json().dump(2) + "\n");
  return manifest;
}

// argv-level entry point shared by the binary and the tests;
// returns the process exit code
inline int run_cli(const std::string& subcommand, const std::string& config_path,
                   const std::optional<std::uint64_t>& seed_override,
                   const std::optional<std::string>& out_override,
                   const std::optional<std::string>& format_override,
                   std::ostream& err) {
  try {
    json user = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file " + config_path);
      try {
        in >> user;
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse failure: ") + e.what());
      }
    }
    if (!user.is_object()) throw ConfigError("config root must be an object");
    if (seed_override) user["master_seed"] = *seed_override;
    if (out_override) user["output_dir"] = *out_override;
    if (format_override) user["format"] = *format_override;
    run(subcommand, user);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace hololab::cli
