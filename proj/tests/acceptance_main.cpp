// Acceptance gate: one line per criterion, [PASS] or [FAIL], nonzero exit if
// anything fails. Tolerances and runtime limits are pinned here and nowhere
// else; the per-module suites cover the same ground at finer grain.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hololab/cli.hpp"

using namespace hololab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool ok,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", idx,
              name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(
    const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

lwe::LweParams noiseless_params(std::int64_t q, int n, int m_rows, int k) {
  lwe::LweParams p;
  p.q = q;
  p.n = n;
  p.m_rows = m_rows;
  p.k = k;
  p.sigma = 0.0;
  p.noiseless = true;
  return p;
}

// ---------------------------------------------------------------------------

void criterion_1_entropy_gap() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (auto [q, n, k] :
       std::vector<std::array<int, 3>>{{3, 2, 1}, {2, 2, 2}, {5, 2, 1}}) {
    const auto p = noiseless_params(q, n, n + 1 + k, k);
    const auto f = lwe::sample_instance(p, EtcfMode::Injective,
                                        derive_seed(20260814, "acc1-f", k));
    const auto g = lwe::sample_instance(p, EtcfMode::Degenerate,
                                        derive_seed(20260814, "acc1-g", k));
    const double gap = state::entropy_gap(f, g);
    if (std::abs(gap - k) > 1e-9) {
      ok = false;
      detail += "(q=" + std::to_string(q) + ",k=" + std::to_string(k) +
                ") gap=" + fmt(gap) + " ";
    }
  }
  const double dt = seconds_since(t0);
  if (dt >= 5.0) {
    ok = false;
    detail += "runtime " + fmt(dt) + "s >= 5s";
  } else {
    detail += "gap = k within 1e-9; " + fmt(dt) + "s";
  }
  report(1, "entropy gap exactness", ok, detail);
}

void criterion_2_rt_identity() {
  const auto geom = ads::geometry_from_qubits(64, 1.0);
  const double c = ads::brown_henneaux_central_charge(geom);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double ratio = std::exp(0.05 * (i + 1));
    const double s = ads::rt_entropy(
        geom, ads::rt_geodesic_length(geom, ratio * geom.epsilon),
        EntropyUnit::Nats);
    const double expected = c / 3.0 * std::log(ratio);
    worst = std::max(worst, std::abs(s - expected) / std::abs(expected));
  }
  report(2, "RT/CFT identity on 100-point grid", worst <= 1e-12,
         "max relative error " + fmt(worst));
}

void criterion_3_measurement_scaling() {
  const auto t0 = std::chrono::steady_clock::now();
  const double target = 1.0 / 3.0;
  probe::ProbeConfig cfg;
  cfg.sigma_shot = 1.0;
  cfg.z = probe::z_for_target_error(target);

  bool ok = true;
  std::string detail;
  std::vector<double> ln_exact, ln_emp;
  const std::vector<double> masses = {1.0, 2.0, 3.0, 4.0};
  for (std::size_t i = 0; i < masses.size(); ++i) {
    cfg.m = masses[i];
    const auto pred = probe::predicted_sample_complexity(cfg, 1.0, 0.5);
    const auto emp = probe::empirical_min_shots(
        cfg, 1.0, 0.5, target, 400, derive_seed(20260814, "acc3", i));
    const double ratio = static_cast<double>(emp.shots) /
                         static_cast<double>(pred.m_exact);
    if (!(ratio >= 1.0 / 3.0 && ratio <= 3.0)) {
      ok = false;
      detail += "m=" + fmt(cfg.m) + " ratio=" + fmt(ratio) + " ";
    }
    ln_exact.push_back(std::log(pred.m_exact_real));
    ln_emp.push_back(std::log(static_cast<double>(emp.shots)));
  }
  const auto fit = fit_linear(ln_exact, ln_emp);
  if (std::abs(fit.slope - 1.0) > 0.25) {
    ok = false;
    detail += "slope=" + fmt(fit.slope) + " outside 1 +- 0.25 ";
  }
  const double dt = seconds_since(t0);
  if (dt >= 600.0) {
    ok = false;
    detail += "runtime " + fmt(dt) + "s >= 600s";
  } else if (ok) {
    detail = "ratios in [1/3,3], slope " + fmt(fit.slope) + ", " + fmt(dt) + "s";
  }
  report(3, "measurement-cost scaling", ok, detail);
}

void criterion_4_gaussian_oracle() {
  const std::vector<std::pair<double, double>> frozen = {
      {0.25, 0.241407530763}, {0.5, 0.659452959168}, {1.0, 1.619822092898}};
  bool ok = true;
  std::string detail;
  for (const auto& [r, s_oracle] : frozen) {
    const std::vector<int> first = {0};
    const auto reduced = bulk::restrict_covariance(
        bulk::two_mode_squeezed_covariance(r), first);
    const double s = bulk::bulk_entanglement_entropy(reduced, EntropyUnit::Nats);
    if (std::abs(s - s_oracle) > 1e-6) {
      ok = false;
      detail += "r=" + fmt(r) + " S=" + fmt(s) + " ";
    }
    if (r == 1.0) {
      const double nu = bulk::symplectic_spectrum(reduced).nu.front();
      if (std::abs(nu - std::cosh(2.0) / 2.0) > 1e-6) {
        ok = false;
        detail += "nu(r=1)=" + fmt(nu) + " ";
      }
    }
  }
  if (ok) detail = "symplectic path matches Fock cutoff-60 oracle within 1e-6";
  report(4, "Gaussian oracle equivalence", ok, detail);
}

void criterion_5_chain_purity() {
  const auto cov = bulk::build_chain_ground_covariance(64, 1e-3, 1.0);
  bool ok = true;
  std::string detail;

  const double total = bulk::bulk_entanglement_entropy(cov, EntropyUnit::Nats);
  if (!(total < 1e-6)) {
    ok = false;
    detail += "total entropy " + fmt(total) + " ";
  }
  for (double nu : bulk::symplectic_spectrum(cov).nu)
    if (nu < 0.5 - 1e-8) {
      ok = false;
      detail += "nu=" + fmt(nu) + " below floor ";
    }
  for (int cut : {1, 8, 16, 32, 55, 63}) {
    std::vector<int> left(cut), right(64 - cut);
    for (int i = 0; i < cut; ++i) left[i] = i;
    for (int i = cut; i < 64; ++i) right[i - cut] = i;
    const double sl = bulk::bulk_entanglement_entropy(
        bulk::restrict_covariance(cov, left), EntropyUnit::Nats);
    const double sr = bulk::bulk_entanglement_entropy(
        bulk::restrict_covariance(cov, right), EntropyUnit::Nats);
    if (std::abs(sl - sr) > 1e-8) {
      ok = false;
      detail += "cut=" + std::to_string(cut) + " asym=" + fmt(sl - sr) + " ";
    }
  }
  if (ok)
    detail = "pure within 1e-6, complements symmetric within 1e-8, nu floor ok";
  report(5, "chain purity and complement symmetry", ok, detail);
}

void criterion_6_log_growth() {
  const auto cov = bulk::build_chain_ground_covariance(64, 1e-3, 1.0);
  const std::vector<std::pair<int, double>> frozen = {{4, 0.335797365443},
                                                      {8, 0.437875911030},
                                                      {16, 0.534913295313},
                                                      {32, 0.590630281943}};
  bool ok = true;
  std::string detail;
  std::vector<double> ln_ell, s_vals;
  for (const auto& [ell, s_oracle] : frozen) {
    std::vector<int> region(ell);
    for (int i = 0; i < ell; ++i) region[i] = i;
    const double s = bulk::bulk_entanglement_entropy(
        bulk::restrict_covariance(cov, region), EntropyUnit::Nats);
    if (std::abs(s - s_oracle) > 1e-6) {
      ok = false;
      detail += "ell=" + std::to_string(ell) + " S=" + fmt(s) + " vs " +
                fmt(s_oracle) + " ";
    }
    ln_ell.push_back(std::log(static_cast<double>(ell)));
    s_vals.push_back(s);
  }
  const auto fit = fit_linear(ln_ell, s_vals);
  if (!(fit.slope >= 0.12 && fit.slope <= 0.22)) {
    ok = false;
    detail += "slope=" + fmt(fit.slope) + " outside [0.12, 0.22] ";
  } else if (ok) {
    detail = "slope " + fmt(fit.slope) +
             " in [0.12, 0.22], oracle match within 1e-6";
  }
  report(6, "logarithmic entropy growth", ok, detail);
}

void criterion_7_truncation() {
  std::vector<int> region(32);
  for (int i = 0; i < 32; ++i) region[i] = i;
  const auto cov = bulk::restrict_covariance(
      bulk::build_chain_ground_covariance(64, 1e-3, 1.0), region);
  const double full = bulk::bulk_entanglement_entropy(cov, EntropyUnit::Nats);
  double worst = 0.0;
  for (int J = 1; J <= 32; ++J) {
    const auto t = bulk::truncated_entropy(cov, J, EntropyUnit::Nats);
    worst = std::max(worst, std::abs(t.value + t.dropped_bound - full));
  }
  report(7, "truncation soundness", worst <= 1e-12,
         "max |value + bound - full| = " + fmt(worst));
}

void criterion_8_cost_models() {
  bool ok = true;
  std::string detail;

  const double d100 = cost::bkz_root_hermite(100);
  if (std::abs(d100 - 1.0093) > 5e-4) {
    ok = false;
    detail += "delta(100)=" + fmt(d100) + " ";
  }

  cost::LweFamily family;
  int prev = 0;
  for (int n = 40; n <= 120; n += 8) {
    const auto rec =
        cost::bkz_attack_estimate(family.at(n), cost::SieveModel::ClassicalSieve);
    const int beta = std::stoi(rec.model_params.at("beta"));
    if (beta < prev) {
      ok = false;
      detail += "beta decreases at n=" + std::to_string(n) + " ";
    }
    prev = beta;
  }

  const auto hc = cost::holographic_cost(64, 2.0, 1.0, 1.0);
  if (std::abs(hc.full.log2_cost - 81.54) > 0.01) {
    ok = false;
    detail += "holographic=" + fmt(hc.full.log2_cost) + " ";
  }

  const std::vector<int> N_list = {96, 128, 160, 192, 224, 256};
  const auto table = cost::comparison_table(N_list, family, {});
  for (const auto& [label, fit] : table.fits)
    if (!(fit.slope > 0.0 && fit.r2 >= 0.99)) {
      ok = false;
      detail += label + " slope=" + fmt(fit.slope) + " r2=" + fmt(fit.r2) + " ";
    }
  if (ok)
    detail = "delta(100)=" + fmt(d100) +
             ", beta ladder nondecreasing, holographic 81.54, fits R2 >= 0.99";
  report(8, "cost-model sanity", ok, detail);
}

void criterion_9_shadow_composition() {
  const double m = 2.0, dl = 0.25;
  std::vector<double> x, y;
  for (double L : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
    const double dg = std::exp(-m * L) * (1.0 - std::exp(-m * dl));
    x.push_back(2.0 * m * L);
    y.push_back(std::log(cost::shadow_cost(1.0, dg, 1.0)));
  }
  const auto fit = fit_linear(x, y);
  report(9, "shadow-cost exponential composition",
         std::abs(fit.slope - 1.0) <= 1e-6,
         "slope " + fmt(fit.slope) + " vs 1 within 1e-6");
}

void criterion_10_protocol() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;

  const auto geom = ads::geometry_from_qubits(64, 1.0);
  probe::ProbeConfig cfg;
  cfg.m = 2.0;
  cfg.sigma_shot = 1.0;
  cfg.z = 2.0;
  const double ell = 3.0 * geom.epsilon;
  const double dS = 1.0;
  const double dL = ads::entropy_gap_to_length_gap(geom, dS);
  const double L0 = ads::rt_geodesic_length(geom, ell);
  const auto pred = probe::predicted_sample_complexity(cfg, L0 - dL, dL);

  for (EtcfMode truth : {EtcfMode::Injective, EtcfMode::Degenerate}) {
    const auto out = probe::holographic_distinguisher(
        geom, cfg, truth, dS, 2 * pred.m_exact,
        derive_seed(20260814, "acc10", truth == EtcfMode::Injective ? 0 : 1),
        ell, 500);
    if (out.success_estimate < 0.9) {
      ok = false;
      detail += std::string(to_string(truth)) + " success " +
                fmt(out.success_estimate) + " < 0.9 ";
    }
  }

  const auto coin = probe::holographic_distinguisher(
      geom, cfg, EtcfMode::Injective, 1e-9, 1,
      derive_seed(20260814, "acc10-coin"), ell, 500);
  if (std::abs(coin.success_estimate - 0.5) > 0.1) {
    ok = false;
    detail += "degenerate-limit success " + fmt(coin.success_estimate) +
              " departs from 0.5 ";
  }

  const double dt = seconds_since(t0);
  if (dt >= 300.0) {
    ok = false;
    detail += "runtime " + fmt(dt) + "s >= 300s";
  } else if (ok) {
    detail = "success >= 0.9 at budget 2*M_exact, coin-flip limit ok, " +
             fmt(dt) + "s";
  }
  report(10, "end-to-end protocol", ok, detail);
}

void criterion_11_determinism() {
  const fs::path base = fs::temp_directory_path() / "hololab-acceptance";
  const fs::path dir_a = base / "run-a", dir_b = base / "run-b";
  fs::remove_all(base);

  nlohmann::json cfg_a, cfg_b;
  cfg_a["master_seed"] = 20260814;
  cfg_b["master_seed"] = 20260814;
  cfg_a["output_dir"] = dir_a.string();
  cfg_b["output_dir"] = dir_b.string();

  bool ok = true;
  std::string detail;
  try {
    const auto manifest_a = cli::run("all", cfg_a);
    const auto manifest_b = cli::run("all", cfg_b);
    if (manifest_a.files != manifest_b.files) {
      ok = false;
      detail = "file lists differ";
    } else {
      std::vector<std::string> names = manifest_a.files;
      names.push_back("manifest.json");
      for (const auto& name : names) {
        std::ifstream fa(dir_a / name, std::ios::binary);
        std::ifstream fb(dir_b / name, std::ios::binary);
        std::ostringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        if (sa.str() != sb.str()) {
          ok = false;
          detail += name + " differs ";
        }
      }
      if (ok)
        detail = std::to_string(names.size()) +
                 " files byte-identical across reruns";
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  fs::remove_all(base);
  report(11, "rerun determinism of `all`", ok, detail);
}

}  // namespace

int main() {
  criterion_1_entropy_gap();
  criterion_2_rt_identity();
  criterion_3_measurement_scaling();
  criterion_4_gaussian_oracle();
  criterion_5_chain_purity();
  criterion_6_log_growth();
  criterion_7_truncation();
  criterion_8_cost_models();
  criterion_9_shadow_composition();
  criterion_10_protocol();
  criterion_11_determinism();

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 11 acceptance criteria passed\n");
  return 0;
}
