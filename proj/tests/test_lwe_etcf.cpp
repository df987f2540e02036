#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "hololab/lwe_etcf.hpp"

using namespace hololab;
using lwe::EtcfInstance;
using lwe::LweParams;

namespace {

LweParams noiseless_params(std::int64_t q, int n, int m_rows, int k) {
  LweParams p;
  p.q = q;
  p.n = n;
  p.m_rows = m_rows;
  p.k = k;
  p.sigma = 0.0;
  p.noiseless = true;
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  LweParams p = noiseless_params(3, 2, 3, 1);
  CHECK_NOTHROW(p.validate());
  p.q = 4;  // composite
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.q = 3;
  p.k = 21;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.k = 1;
  p.sigma = 0.5;  // sigma > 0 contradicts noiseless
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.noiseless = false;
  CHECK_NOTHROW(p.validate());

  LweParams big = noiseless_params(1031, 4, 5, 0);  // q^n far beyond the cap
  CHECK_THROWS_AS(big.validate(), CapExceeded);
}

TEST_CASE("injective mode census: every image point has one preimage") {
  for (auto [q, n, m, k] :
       std::vector<std::array<int, 4>>{{3, 2, 3, 1}, {5, 2, 3, 1}, {2, 2, 4, 2}}) {
    const auto inst =
        lwe::sample_instance(noiseless_params(q, n, m, k), EtcfMode::Injective,
                             derive_seed(99, "inj", q * 100 + k));
    const auto s = lwe::summarize(lwe::preimage_census(inst));
    INFO("q=" << q << " n=" << n << " k=" << k);
    CHECK(s.total == inst.params.domain_size());
    CHECK(s.distinct == s.total);
    CHECK(s.counts_within(1, 1));
  }
}

TEST_CASE("degenerate mode census: exactly 2^k-to-1") {
  for (auto [q, n, m, k] :
       std::vector<std::array<int, 4>>{{3, 2, 3, 1}, {5, 2, 3, 1}, {2, 2, 4, 2}}) {
    const auto inst =
        lwe::sample_instance(noiseless_params(q, n, m, k), EtcfMode::Degenerate,
                             derive_seed(99, "deg", q * 100 + k));
    const auto s = lwe::summarize(lwe::preimage_census(inst));
    const std::uint64_t fold = 1ull << k;
    INFO("q=" << q << " n=" << n << " k=" << k);
    CHECK(s.total == inst.params.domain_size());
    CHECK(s.distinct * fold == s.total);
    CHECK(s.counts_within(fold, fold));
    CHECK(s.fraction_with(fold) == 1.0);
  }
}

TEST_CASE("k = 0 degenerate collapses to a plain injective function") {
  const auto inst = lwe::sample_instance(noiseless_params(5, 2, 3, 0),
                                         EtcfMode::Degenerate, 7);
  const auto s = lwe::summarize(lwe::preimage_census(inst));
  CHECK(s.counts_within(1, 1));
  const std::vector<std::int64_t> x0 = {0, 0};
  CHECK_FALSE(lwe::collision_partner(inst, 0, x0).has_value());
}

TEST_CASE("no injective instance exists when shifts cannot leave the column span") {
  // q = 2, n = 1, m_rows = 1: a full-rank A spans all of F_2^1, leaving no
  // room for an out-of-span branch shift
  CHECK_THROWS_AS(lwe::sample_instance(noiseless_params(2, 1, 1, 1),
                                       EtcfMode::Injective, 3),
                  GenerationError);
}

TEST_CASE("collision partner reproduces the image") {
  const auto inst = lwe::sample_instance(noiseless_params(3, 2, 3, 2),
                                         EtcfMode::Degenerate, 2025);
  const std::uint64_t dom = inst.params.domain_size();
  for (std::uint64_t idx = 0; idx < dom; ++idx) {
    const auto [b, x] = inst.input_from_index(idx);
    const auto partner = lwe::collision_partner(inst, b, x);
    REQUIRE(partner.has_value());
    CHECK(partner->first != b);
    CHECK(lwe::eval(inst, partner->first, partner->second) ==
          lwe::eval(inst, b, x));
  }

  const auto inj = lwe::sample_instance(noiseless_params(3, 2, 3, 1),
                                        EtcfMode::Injective, 2025);
  const auto [b0, x0] = inj.input_from_index(0);
  CHECK_FALSE(lwe::collision_partner(inj, b0, x0).has_value());
}

TEST_CASE("input indexing is a bijection") {
  const auto inst = lwe::sample_instance(noiseless_params(5, 2, 3, 2),
                                         EtcfMode::Degenerate, 11);
  const std::uint64_t dom = inst.params.domain_size();
  REQUIRE(dom == 4ull * 25ull);
  for (std::uint64_t idx = 0; idx < dom; ++idx) {
    const auto [b, x] = inst.input_from_index(idx);
    CHECK(inst.input_index(b, x) == idx);
  }
}

TEST_CASE("noisy degenerate census stays a partition of the domain") {
  LweParams p;
  p.q = 11;
  p.n = 2;
  p.m_rows = 5;
  p.k = 1;
  p.sigma = 0.5;
  p.noiseless = false;
  const auto inst = lwe::sample_instance(p, EtcfMode::Degenerate, 31337);
  const auto s = lwe::summarize(lwe::preimage_census(inst));
  CHECK(s.total == p.domain_size());
  std::uint64_t mass = 0;
  for (const auto& [count, cells] : s.histogram) mass += count * cells;
  CHECK(mass == s.total);

  // exact trapdoor collisions only exist noiselessly
  const auto [b0, x0] = inst.input_from_index(0);
  CHECK_THROWS_AS(lwe::collision_partner(inst, b0, x0), UnsupportedMode);
}

TEST_CASE("discrete gaussian noise matches the target distribution") {
  const double sigma = 2.0;
  const std::int64_t q = 101;
  lwe::DiscreteGaussian dg(sigma, q);
  RngStream rng(555);

  const int n = 20000;
  std::map<std::int64_t, int> counts;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::int64_t v = dg.sample(rng);
    REQUIRE(v >= 0);
    REQUIRE(v < q);
    ++counts[v];
    mean += static_cast<double>(lwe::DiscreteGaussian::centered_lift(v, q));
  }
  mean /= n;

  // exact pmf over the support used by the sampler
  const std::int64_t tail = static_cast<std::int64_t>(std::ceil(6.0 * sigma));
  std::map<std::int64_t, double> pmf;
  double norm = 0.0;
  for (std::int64_t v = -tail; v <= tail; ++v) {
    const double w = std::exp(-0.5 * v * v / (sigma * sigma));
    pmf[(v % q + q) % q] += w;
    norm += w;
  }
  double tv = 0.0;
  for (auto& [v, w] : pmf) {
    const double emp = counts.count(v) ? counts[v] / static_cast<double>(n) : 0.0;
    tv += std::abs(w / norm - emp);
  }
  tv /= 2.0;
  CHECK(tv < 0.02);
  CHECK(std::abs(mean) < 4.0 * sigma / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("sampling is reproducible and seed-sensitive") {
  const auto p = noiseless_params(5, 2, 4, 1);
  const auto a = lwe::sample_instance(p, EtcfMode::Degenerate, 1);
  const auto b = lwe::sample_instance(p, EtcfMode::Degenerate, 1);
  const auto c = lwe::sample_instance(p, EtcfMode::Degenerate, 2);
  CHECK(lwe::to_json(a) == lwe::to_json(b));
  CHECK(lwe::to_json(a) != lwe::to_json(c));
}

TEST_CASE("JSON round trip preserves the instance bit for bit") {
  LweParams p;
  p.q = 7;
  p.n = 2;
  p.m_rows = 4;
  p.k = 2;
  p.sigma = 0.7;
  p.noiseless = false;
  const auto inst = lwe::sample_instance(p, EtcfMode::Degenerate, 909);
  const auto j = lwe::to_json(inst);
  const auto back = lwe::instance_from_json(j);
  CHECK(lwe::to_json(back) == j);
  CHECK(j.at("schema") == "etcf-instance/1");
  for (std::uint64_t idx = 0; idx < inst.params.domain_size(); idx += 17) {
    const auto [b, x] = inst.input_from_index(idx);
    CHECK(lwe::eval(inst, b, x) == lwe::eval(back, b, x));
  }
}

TEST_CASE("eval rejects out-of-range inputs") {
  const auto inst = lwe::sample_instance(noiseless_params(3, 2, 3, 1),
                                         EtcfMode::Injective, 5);
  const std::vector<std::int64_t> ok = {0, 0};
  const std::vector<std::int64_t> bad_entry = {3, 0};
  const std::vector<std::int64_t> bad_arity = {0};
  CHECK_THROWS_AS(lwe::eval(inst, 2, ok), std::invalid_argument);
  CHECK_THROWS_AS(lwe::eval(inst, 0, bad_entry), std::invalid_argument);
  CHECK_THROWS_AS(lwe::eval(inst, 0, bad_arity), std::invalid_argument);
}
