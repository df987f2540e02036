#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "hololab/cost_models.hpp"

using namespace hololab;

// frozen values from tests/oracles/bkz_oracle.py, an independent scripted
// evaluation of the same closed forms
namespace oracle {
constexpr double kDelta50 = 1.012064863554853;
constexpr double kDelta100 = 1.0092587210363348;
// anchor n=72, m_rows=87, q=97, sigma=1.0
constexpr int kAnchorBeta = 61;
constexpr int kAnchorD = 160;
constexpr double kAnchorClassical = 25.133928094887359;
constexpr double kAnchorQuantum = 23.486928094887361;
constexpr double kAnchorEnumeration = 21.592920809579859;
// beta over n in {40, 48, ..., 120} for the same family
constexpr std::array<int, 11> kBetaLadder = {2,  21, 36, 49,  61, 73,
                                             84, 96, 107, 118, 130};
constexpr double kHolo64 = 81.541560327111711;
constexpr double kHolo64Leading = 17.541560327111707;
}  // namespace oracle

namespace {

lwe::LweParams family_params(int n) {
  cost::LweFamily family;
  return family.at(n);
}

}  // namespace

TEST_CASE("root-Hermite factor matches the scripted oracle") {
  CHECK(cost::bkz_root_hermite(50) ==
        Catch::Approx(oracle::kDelta50).epsilon(1e-12));
  CHECK(cost::bkz_root_hermite(100) ==
        Catch::Approx(oracle::kDelta100).epsilon(1e-12));
  CHECK(cost::bkz_root_hermite(100) == Catch::Approx(1.0093).margin(5e-4));
  CHECK(cost::bkz_root_hermite(2) == Catch::Approx(1.0219).epsilon(1e-12));
  CHECK_THROWS_AS(cost::bkz_root_hermite(1), std::invalid_argument);
}

TEST_CASE("root-Hermite factor decreases and joins the branches continuously") {
  double prev = cost::bkz_root_hermite(2);
  for (int beta = 3; beta <= 200; ++beta) {
    const double d = cost::bkz_root_hermite(beta);
    INFO("beta=" << beta);
    CHECK(d < prev);
    CHECK(d > 1.0);
    prev = d;
  }
  // table-to-formula seam
  CHECK(std::abs(cost::bkz_root_hermite(49) - cost::bkz_root_hermite(50)) <
        2e-4);
}

TEST_CASE("attack estimate reproduces the frozen anchor point") {
  lwe::LweParams p;
  p.n = 72;
  p.m_rows = 87;
  p.q = 97;
  p.sigma = 1.0;
  p.noiseless = false;
  p.domain_cap = ~0ull;

  const auto classical =
      cost::bkz_attack_estimate(p, cost::SieveModel::ClassicalSieve);
  CHECK(classical.label == "bkz-classical-sieve");
  CHECK(classical.model_params.at("beta") ==
        std::to_string(oracle::kAnchorBeta));
  CHECK(classical.model_params.at("d") == std::to_string(oracle::kAnchorD));
  CHECK(classical.log2_cost ==
        Catch::Approx(oracle::kAnchorClassical).epsilon(1e-12));

  const auto quantum =
      cost::bkz_attack_estimate(p, cost::SieveModel::QuantumSieve);
  CHECK(quantum.log2_cost ==
        Catch::Approx(oracle::kAnchorQuantum).epsilon(1e-12));

  const auto enumeration =
      cost::bkz_attack_estimate(p, cost::SieveModel::Enumeration);
  CHECK(enumeration.log2_cost ==
        Catch::Approx(oracle::kAnchorEnumeration).epsilon(1e-12));

  // records carry their full parameterization
  for (const char* key : {"beta", "d", "delta_beta", "q", "m_rows", "sigma"})
    CHECK(classical.model_params.count(key) == 1);
}

TEST_CASE("required block size is nondecreasing in the dimension") {
  int prev = 0;
  for (int i = 0; i < 11; ++i) {
    const int n = 40 + 8 * i;
    const auto rec = cost::bkz_attack_estimate(family_params(n),
                                               cost::SieveModel::ClassicalSieve);
    const int beta = std::stoi(rec.model_params.at("beta"));
    INFO("n=" << n);
    CHECK(beta == oracle::kBetaLadder[i]);
    CHECK(beta >= prev);
    prev = beta;
  }
}

TEST_CASE("infeasible attack parameters are reported, not silently clamped") {
  lwe::LweParams p;
  p.n = 4;
  p.m_rows = 4;
  p.q = 2;  // tiny modulus: the intersection condition never holds
  p.sigma = 40.0;
  p.noiseless = false;
  p.domain_cap = ~0ull;
  CHECK_THROWS_AS(
      cost::bkz_attack_estimate(p, cost::SieveModel::ClassicalSieve),
      InfeasibleParameters);
}

TEST_CASE("shadow cost worked examples") {
  // K = 8, eps = 0.1, var = 2: ln(8)/0.01 * 2
  CHECK(cost::shadow_cost(8.0, 0.1, 2.0) ==
        Catch::Approx(std::log(8.0) * 100.0 * 2.0).epsilon(1e-12));
  // ln K floor at K = 1
  CHECK(cost::shadow_cost(1.0, 0.5, 1.0) == Catch::Approx(4.0).epsilon(1e-12));
  CHECK_THROWS_AS(cost::shadow_cost(0.5, 0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(cost::shadow_cost(2.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("shadow cost composes exponentially in the correlator depth") {
  // criterion: ln shadow_cost vs 2 m L has unit slope at fixed m dL when
  // eps is the correlator gap dG(m, L, dL)
  const double m = 2.0, dl = 0.25;
  std::vector<double> x, y;
  for (double L : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    const double dg = std::exp(-m * L) * (1.0 - std::exp(-m * dl));
    x.push_back(2.0 * m * L);
    y.push_back(std::log(cost::shadow_cost(1.0, dg, 1.0)));
  }
  const auto fit = fit_linear(x, y);
  CHECK(fit.slope == Catch::Approx(1.0).margin(1e-6));
  CHECK(fit.r2 == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("phase-estimation cost worked example") {
  // s = 1, eps = 0.5, N = 4: (4 / 0.5) * (8 ln 2)^2
  const double expected = 8.0 * std::pow(8.0 * std::numbers::ln2, 2.0);
  CHECK(cost::qpe_cost(1.0, 0.5, 4) == Catch::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(cost::qpe_cost(-1.0, 0.5, 4), std::invalid_argument);
  CHECK_THROWS_AS(cost::qpe_cost(1.0, 0.5, 0), std::invalid_argument);
}

TEST_CASE("covariance build cost: exact at small N, linear in the exponent at large N") {
  // N = 3: D = 8, modes 2D = 16, pairs 16*17/2 = 136, log2 = 7.0874...
  const auto c3 = cost::covariance_build_cost(3);
  CHECK(c3.log2_full == Catch::Approx(std::log2(136.0)).epsilon(1e-12));
  CHECK(c3.bandwidth == 3);
  CHECK(c3.log2_banded == Catch::Approx(4.0 + std::log2(3.0)).epsilon(1e-12));

  // far beyond exact arithmetic the +1 is invisible: log2_full = 2(N+1) - 1
  const auto c200 = cost::covariance_build_cost(200);
  CHECK(c200.log2_full == Catch::Approx(2.0 * 201.0 - 1.0).epsilon(1e-12));

  const auto banded = cost::covariance_build_cost(200, 8);
  CHECK(banded.log2_banded == Catch::Approx(201.0 + 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(cost::covariance_build_cost(0), std::invalid_argument);
  CHECK_THROWS_AS(cost::covariance_build_cost(4, 0), std::invalid_argument);
}

TEST_CASE("holographic cost matches the frozen decomposition") {
  const auto hc = cost::holographic_cost(64, 2.0, 1.0, 1.0);
  CHECK(hc.full.log2_cost == Catch::Approx(oracle::kHolo64).epsilon(1e-12));
  CHECK(hc.full.log2_cost == Catch::Approx(81.54).margin(0.01));
  CHECK(hc.leading_only.log2_cost ==
        Catch::Approx(oracle::kHolo64Leading).epsilon(1e-12));
  // removing the bulk overhead subtracts exactly bulk_exponent * N bits
  CHECK(hc.full.log2_cost - hc.leading_only.log2_cost ==
        Catch::Approx(64.0).epsilon(1e-12));
  CHECK(hc.full.label == "holographic-simulation");
  CHECK(hc.leading_only.label == "holographic-no-bulk-overhead");
  CHECK_THROWS_AS(cost::holographic_cost(64, 0.5, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("comparison table lines up all routes with tight linear fits") {
  const std::vector<int> N_list = {96, 128, 160, 192, 224, 256};
  cost::LweFamily family;
  cost::HoloCostParams holo;
  const auto table = cost::comparison_table(N_list, family, holo);

  // 4 labels x 6 sizes
  CHECK(table.records.size() == 24);
  CHECK(table.fits.size() == 4);
  for (const auto& [label, fit] : table.fits) {
    INFO(label);
    CHECK(fit.slope > 0.0);
    CHECK(fit.r2 >= 0.99);
  }
  // frozen endpoints of the bkz series
  CHECK(table.records.front().label == "bkz-classical-sieve");
  CHECK(table.records.front().N == 96);
  CHECK(table.records.front().log2_cost ==
        Catch::Approx(35.766709620225832).epsilon(1e-12));
  CHECK(table.records[5].log2_cost ==
        Catch::Approx(104.62610705730255).epsilon(1e-12));
  CHECK(table.fits.at("bkz-classical-sieve").slope ==
        Catch::Approx(0.43050759842226244).epsilon(1e-9));
  CHECK(table.fits.at("bkz-classical-sieve").r2 ==
        Catch::Approx(0.9999738891005121).margin(1e-9));

  // every record embeds its model parameters
  for (const auto& rec : table.records) CHECK_FALSE(rec.model_params.empty());

  CHECK_THROWS_AS(cost::comparison_table(std::vector<int>{64}, family, holo),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      cost::comparison_table(std::vector<int>{64, 64}, family, holo),
      std::invalid_argument);
}
