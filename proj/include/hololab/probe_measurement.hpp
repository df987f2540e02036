#pragma once

// Shot-noise model for reading a geodesic length out of boundary two-point
// functions: the WKB correlator e^{-mL}, Monte-Carlo estimates under the
// standard quantum limit, predicted and empirically searched sample
// complexities, and the end-to-end threshold distinguisher between the
// injective and degenerate bulk geometries.
//
// All Monte-Carlo draws sample the shot-averaged estimator directly:
// the per-shot model is Gaussian with spread sigma_shot, so the M-shot mean
// is exactly Gaussian with spread sigma_shot / sqrt(M). Per-trial streams
// derive from a master seed (see common.hpp), making every search
// reproducible and order-independent.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "hololab/ads_geometry.hpp"
#include "hololab/common.hpp"
#include "hololab/cost_models.hpp"

namespace hololab::probe {

struct ProbeConfig {
  double m = 1.0;           // probe mass
  double sigma_shot = 1.0;  // per-shot standard deviation of the observable
  int N_qubits = 0;         // boundary system size, 0 when not tied to one
  double z = 2.0;           // detection threshold in standard deviations
  double alpha_exp = 2.0;   // stretched-exponential exponent alpha

  void validate() const {
    if (!(m > 0.0)) throw std::invalid_argument("ProbeConfig: m > 0");
    if (!(sigma_shot > 0.0))
      throw std::invalid_argument("ProbeConfig: sigma_shot > 0");
    if (!(z > 0.0)) throw std::invalid_argument("ProbeConfig: z > 0");
    if (!(alpha_exp >= 1.0))
      throw std::invalid_argument("ProbeConfig: alpha_exp >= 1");
    if (N_qubits < 0) throw std::invalid_argument("ProbeConfig: N_qubits >= 0");
  }
};

// detection-threshold z matched to a target error probability of the
// midpoint test: with M = ceil(2 z^2 sigma^2 / dG^2) shots the per-hypothesis
// error is Phi(-z / sqrt(2)), so z = sqrt(2) * probit(1 - target) makes the
// predictor and the empirical search agree on the error budget
inline double z_for_target_error(double target_error) {
  if (!(target_error > 0.0 && target_error <= 0.5))
    throw std::invalid_argument("z_for_target_error: target in (0, 1/2]");
  return std::numbers::sqrt2 * probit(1.0 - target_error);
}

struct TwoPointValue {
  double value = 0.0;
  bool wkb_valid = false;  // geodesic approximation trusted when m*L >= threshold
};

inline TwoPointValue two_point_expectation(double m, double L,
                                           double wkb_threshold = 3.0) {
  if (!(m > 0.0) || L < 0.0)
    throw std::domain_error("two_point_expectation: need m > 0, L >= 0");
  return {std::exp(-m * L), m * L >= wkb_threshold};
}

struct EstimateResult {
  double g_hat = 0.0;
  std::optional<double> l_hat;  // empty when the noisy estimate is <= 0
};

inline EstimateResult simulate_estimate(const ProbeConfig& cfg, double L_true,
                                        std::int64_t M, RngStream& rng) {
  cfg.validate();
  if (M < 1) throw std::invalid_argument("simulate_estimate: M >= 1");
  if (L_true < 0.0) throw std::domain_error("simulate_estimate: L_true >= 0");
  EstimateResult r;
  r.g_hat = std::exp(-cfg.m * L_true) +
            rng.gaussian(0.0, cfg.sigma_shot / std::sqrt(static_cast<double>(M)));
  if (r.g_hat > 0.0) r.l_hat = -std::log(r.g_hat) / cfg.m;
  return r;
}

struct SampleComplexity {
  std::int64_t m_exact = 0;   // ceil(2 z^2 sigma^2 / dG^2)
  double m_exact_real = 0.0;  // same before rounding
  double m_paper = 0.0;       // e^{2 m dL}, the scaling-level bound
  double delta_g = 0.0;       // e^{-mL} (1 - e^{-m dL})
};

inline SampleComplexity predicted_sample_complexity(const ProbeConfig& cfg,
                                                    double L, double dL) {
  cfg.validate();
  if (L < 0.0 || !(dL > 0.0))
    throw std::domain_error("predicted_sample_complexity: L >= 0, dL > 0");
  SampleComplexity sc;
  sc.delta_g = std::exp(-cfg.m * L) * (1.0 - std::exp(-cfg.m * dL));
  sc.m_exact_real = 2.0 * cfg.z * cfg.z * cfg.sigma_shot * cfg.sigma_shot /
                    (sc.delta_g * sc.delta_g);
  if (sc.m_exact_real > 9.0e18)
    throw CapExceeded("predicted_sample_complexity: shot count overflows");
  sc.m_exact = static_cast<std::int64_t>(std::ceil(sc.m_exact_real));
  sc.m_paper = std::exp(2.0 * cfg.m * dL);
  return sc;
}

struct MinShotsResult {
  std::int64_t shots = 0;
  bool capped = false;       // search hit the expense cap; shots == cap
  double err_short = 0.0;    // error rate at `shots` when the truth is L
  double err_long = 0.0;     // error rate at `shots` when the truth is L + dL
};

namespace detail {

struct ErrorRates {
  double err_short, err_long;
};

inline ErrorRates threshold_error_rates(const ProbeConfig& cfg, double g_short,
                                        double g_long, std::int64_t M,
                                        int trials, std::uint64_t master_seed) {
  const double tau = 0.5 * (g_short + g_long);
  const double spread = cfg.sigma_shot / std::sqrt(static_cast<double>(M));
  int wrong_short = 0, wrong_long = 0;
  for (int t = 0; t < trials; ++t) {
    RngStream rng = RngStream::derive(
        master_seed, "min-shots", (static_cast<std::uint64_t>(M) << 20) + t);
    // truth = L: declaring "longer" is the error
    if (rng.gaussian(g_short, spread) < tau) ++wrong_short;
    // truth = L + dL: declaring "shorter" is the error
    if (rng.gaussian(g_long, spread) >= tau) ++wrong_long;
  }
  return {static_cast<double>(wrong_short) / trials,
          static_cast<double>(wrong_long) / trials};
}

}  // namespace detail

// smallest M for which the midpoint threshold test errs with frequency at
// most target_error under both hypotheses; doubling then bisection to a
// multiplicative resolution of 1.1. Per-M results are seeded by (master, M)
// so the search path cannot change the answer at a given M.
inline MinShotsResult empirical_min_shots(const ProbeConfig& cfg, double L,
                                          double dL, double target_error,
                                          int trials,
                                          std::uint64_t master_seed,
                                          std::int64_t cap = 1'000'000'000) {
  cfg.validate();
  if (L < 0.0 || !(dL > 0.0))
    throw std::domain_error("empirical_min_shots: L >= 0, dL > 0");
  if (!(target_error > 0.0 && target_error <= 0.5))
    throw std::invalid_argument("empirical_min_shots: target in (0, 1/2]");
  if (trials < 1) throw std::invalid_argument("empirical_min_shots: trials >= 1");

  const double g_short = std::exp(-cfg.m * L);
  const double g_long = std::exp(-cfg.m * (L + dL));

  const auto passes = [&](std::int64_t M) {
    const auto r = detail::threshold_error_rates(cfg, g_short, g_long, M,
                                                 trials, master_seed);
    return r.err_short <= target_error && r.err_long <= target_error;
  };

  std::int64_t lo = 0, hi = 1;  // lo always failing (0 = "no shots"), hi candidate
  while (!passes(hi)) {
    lo = hi;
    if (hi > cap / 2) {
      const auto r = detail::threshold_error_rates(cfg, g_short, g_long, cap,
                                                   trials, master_seed);
      return {cap, true, r.err_short, r.err_long};
    }
    hi *= 2;
  }
  while (hi > lo + 1 &&
         static_cast<double>(hi) > 1.1 * static_cast<double>(lo)) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (passes(mid))
      hi = mid;
    else
      lo = mid;
  }
  const auto r =
      detail::threshold_error_rates(cfg, g_short, g_long, hi, trials, master_seed);
  return {hi, false, r.err_short, r.err_long};
}

// ---------------------------------------------------------------------------
// end-to-end distinguisher

struct DistinguisherOutcome {
  EtcfMode decision = EtcfMode::Injective;  // majority call across repetitions
  double success_estimate = 0.0;
  std::int64_t shots_used = 0;
  int repetitions = 0;
  bool regime_valid = true;        // false once backreaction m G_N >= 0.1
  double backreaction_ratio = 0.0;
  double base_length = 0.0;        // L0 for the injective geometry
  double delta_length = 0.0;       // geodesic shortening in the degenerate case
};

inline constexpr double kBackreactionLimit = 0.1;

// The injective instance keeps the reference geodesic L0 (higher entropy);
// the degenerate one sits at L0 - deltaL with deltaL set by the k-bit gap.
// Declaring "injective" on a sub-threshold correlator is the detection rule.
// ell defaults to 100 UV cutoffs when not supplied.
inline DistinguisherOutcome holographic_distinguisher(
    const ads::AdsGeometry& geom, const ProbeConfig& cfg, EtcfMode truth,
    double dS_bits, std::int64_t budget_M, std::uint64_t master_seed,
    double ell = -1.0, int repetitions = 500) {
  geom.validate();
  cfg.validate();
  if (budget_M < 1)
    throw std::invalid_argument("holographic_distinguisher: budget >= 1");
  if (dS_bits < 0.0)
    throw std::domain_error("holographic_distinguisher: dS_bits >= 0");
  if (repetitions < 100)
    throw std::invalid_argument(
        "holographic_distinguisher: success estimates need >= 100 repetitions");
  if (ell <= 0.0) ell = 100.0 * geom.epsilon;

  DistinguisherOutcome out;
  out.backreaction_ratio = cfg.m * geom.G_N;
  out.regime_valid = out.backreaction_ratio < kBackreactionLimit;
  out.base_length = ads::rt_geodesic_length(geom, ell);
  out.delta_length = ads::entropy_gap_to_length_gap(geom, dS_bits);
  if (!(out.delta_length < out.base_length))
    throw std::domain_error(
        "holographic_distinguisher: length gap swallows the whole geodesic");
  out.shots_used = budget_M;
  out.repetitions = repetitions;

  const double g_inj = std::exp(-cfg.m * out.base_length);
  const double g_deg = std::exp(-cfg.m * (out.base_length - out.delta_length));
  const double tau = 0.5 * (g_inj + g_deg);
  const double spread =
      cfg.sigma_shot / std::sqrt(static_cast<double>(budget_M));
  const double g_true = truth == EtcfMode::Injective ? g_inj : g_deg;

  int correct = 0, said_injective = 0;
  for (int rep = 0; rep < repetitions; ++rep) {
    RngStream rng = RngStream::derive(master_seed, "distinguisher", rep);
    const double g_hat = rng.gaussian(g_true, spread);
    const EtcfMode call =
        g_hat < tau ? EtcfMode::Injective : EtcfMode::Degenerate;
    if (call == EtcfMode::Injective) ++said_injective;
    if (call == truth) ++correct;
  }
  out.success_estimate = static_cast<double>(correct) / repetitions;
  out.decision = 2 * said_injective >= repetitions ? EtcfMode::Injective
                                                   : EtcfMode::Degenerate;
  return out;
}

// ---------------------------------------------------------------------------
// probe-mass regimes

struct RegimeEntry {
  std::string regime;           // "heavy" or "light"
  double system_size = 0.0;     // N, or N' = e^{sqrt N} for the light probe
  double m = 0.0;
  double G_N = 0.0;
  double backreaction_ratio = 0.0;
  bool regime_valid = true;
  double base_length = 0.0;
  bool wkb_valid = true;
  double delta_length = 0.0;
  double ln_delta_g = 0.0;
  double ln_M_sql = 0.0;        // predictor, log scale, floored at 0
  double ln_M_paper = 0.0;      // 2 m deltaL
  double ln_M_heisenberg = 0.0; // quadratic improvement over SQL
  double ln_M_shadow = 0.0;     // classical-shadow bound with K = 1
  double alpha_scaling = 0.0;   // N^{1/alpha}, the stretched-exponential scale
  double state_blowup = 1.0;    // N'/N for the light regime
};

struct RegimeReport {
  int N = 0;
  double kappa = 0.0;
  double dS_bits = 0.0;
  RegimeEntry heavy;
  RegimeEntry light;
};

namespace detail {

inline RegimeEntry regime_entry(std::string name, double system_size,
                                double probe_mass, double kappa, int N_base,
                                const ProbeConfig& cfg, double dS_bits,
                                double ell, double wkb_threshold) {
  ads::AdsGeometry geom;
  geom.R = 1.0;
  geom.G_N = kappa / system_size;
  geom.epsilon = 1e-3;
  geom.validate();
  if (ell <= 0.0) ell = 100.0 * geom.epsilon;

  RegimeEntry e;
  e.regime = std::move(name);
  e.system_size = system_size;
  e.m = probe_mass;
  e.G_N = geom.G_N;
  e.backreaction_ratio = probe_mass * geom.G_N;
  e.regime_valid = e.backreaction_ratio < kBackreactionLimit;
  e.base_length = ads::rt_geodesic_length(geom, ell);
  e.wkb_valid = probe_mass * e.base_length >= wkb_threshold;
  e.delta_length = ads::entropy_gap_to_length_gap(geom, dS_bits);

  // log-space evaluation throughout: e^{-mL} underflows long before the
  // logs stop being informative
  const double x = probe_mass * e.delta_length;
  const double ln_one_minus = x > 0.0
                                  ? std::log1p(-std::exp(-x))
                                  : -std::numeric_limits<double>::infinity();
  e.ln_delta_g = -probe_mass * e.base_length + ln_one_minus;
  const double ln_sql =
      std::log(2.0 * cfg.z * cfg.z * cfg.sigma_shot * cfg.sigma_shot) -
      2.0 * e.ln_delta_g;
  e.ln_M_sql = std::max(ln_sql, 0.0);
  e.ln_M_paper = 2.0 * probe_mass * e.delta_length;
  e.ln_M_heisenberg = e.ln_M_sql / 2.0;
  // classical-shadow bound with K = 1 and eps = delta_g; delegate to
  // cost_models while exp(ln_delta_g) is representable, otherwise evaluate
  // the same expression in log space
  const double var = cfg.sigma_shot * cfg.sigma_shot;
  if (e.ln_delta_g > -350.0 && -2.0 * e.ln_delta_g + std::log(var) < 700.0)
    e.ln_M_shadow =
        std::log(cost::shadow_cost(1.0, std::exp(e.ln_delta_g), var));
  else
    e.ln_M_shadow = std::log(var) - 2.0 * e.ln_delta_g;
  e.alpha_scaling =
      std::pow(static_cast<double>(N_base), 1.0 / cfg.alpha_exp);
  return e;
}

}  // namespace detail

// heavy probe m = sqrt(N) on the N-qubit system; light probe of the same
// mass scale realized as m = ln N' inside the enlarged system N' = e^{sqrt N},
// whose price is the reported state-space blow-up
inline RegimeReport regime_report(int N, double kappa, const ProbeConfig& cfg,
                                  double dS_bits, double ell = -1.0,
                                  double wkb_threshold = 3.0) {
  if (N < 1) throw std::invalid_argument("regime_report: N >= 1");
  if (!(kappa > 0.0)) throw std::invalid_argument("regime_report: kappa > 0");
  if (dS_bits < 0.0) throw std::domain_error("regime_report: dS_bits >= 0");
  cfg.validate();

  RegimeReport rep;
  rep.N = N;
  rep.kappa = kappa;
  rep.dS_bits = dS_bits;
  const double root_n = std::sqrt(static_cast<double>(N));
  const double n_prime = std::exp(root_n);
  rep.heavy = detail::regime_entry("heavy", static_cast<double>(N), root_n,
                                   kappa, N, cfg, dS_bits, ell, wkb_threshold);
  rep.heavy.state_blowup = 1.0;
  rep.light = detail::regime_entry("light", n_prime, std::log(n_prime), kappa,
                                   N, cfg, dS_bits, ell, wkb_threshold);
  rep.light.state_blowup = n_prime / static_cast<double>(N);
  return rep;
}

}  // namespace hololab::probe
