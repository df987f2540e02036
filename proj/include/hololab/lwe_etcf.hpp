#pragma once

// Desk-scale LWE claw-free function pairs: instance sampling, evaluation,
// brute-force preimage census and trapdoor collision lookup.
//
// The pair over Z_q, with branch bits b in {0,1}^k and x in Z_q^n:
//
//   f(b, x) = A x + sum_i b_i u_i         + e(b, x)   injective branch
//   g(b, x) = A x + sum_i b_i (A s_i + e'_i) + e(b, x)   2^k-to-1 branch
//
// Degeneracy k > 1 is realized with k independent secrets s_1..s_k, one per
// branch bit. Noise e is materialized as a fixed table indexed by the input,
// so a noisy g is still a function; noiseless instances carry no table.
// q is restricted to primes so Z_q^n is a vector space and rank/solve
// arguments apply exactly.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hololab/common.hpp"
#include "hololab/zq.hpp"

namespace hololab::lwe {

struct LweParams {
  int n = 2;                // secret dimension
  int m_rows = 3;           // rows of A
  std::int64_t q = 3;       // prime modulus
  double sigma = 0.0;       // discrete-Gaussian width; 0 forces noiseless
  int k = 1;                // collision exponent: g is 2^k-to-1
  bool noiseless = true;
  std::uint64_t domain_cap = 1ull << 20;  // brute-force enumeration cap

  std::uint64_t branch_count() const { return 1ull << k; }

  std::uint64_t q_pow_n() const {
    std::uint64_t v = 1;
    for (int i = 0; i < n; ++i) v *= static_cast<std::uint64_t>(q);
    return v;
  }

  std::uint64_t domain_size() const { return branch_count() * q_pow_n(); }

  void validate() const {
    if (n < 1 || m_rows < 1) throw std::invalid_argument("n, m_rows >= 1");
    if (k < 0 || k > 20) throw std::invalid_argument("k in [0, 20]");
    if (!zq::is_prime(q)) throw std::invalid_argument("q must be prime");
    if (sigma < 0.0) throw std::invalid_argument("sigma >= 0");
    if (!noiseless && sigma == 0.0)
      throw std::invalid_argument("noisy instance needs sigma > 0");
    if (noiseless && sigma != 0.0)
      throw std::invalid_argument("noiseless instance needs sigma == 0");
    // overflow-safe cap check before q_pow_n() is ever used
    double dom = static_cast<double>(branch_count());
    for (int i = 0; i < n; ++i) dom *= static_cast<double>(q);
    if (dom > static_cast<double>(domain_cap))
      throw CapExceeded("domain 2^k * q^n exceeds the enumeration cap");
  }

  bool operator==(const LweParams&) const = default;
};

// Exact sampler for the discrete Gaussian on Z truncated at +-ceil(6 sigma),
// pmf proportional to exp(-v^2 / (2 sigma^2)); results reduced into [0, q).
// Deterministic given the stream state: one uniform per sample.
class DiscreteGaussian {
 public:
  DiscreteGaussian(double sigma, std::int64_t q) : q_(q) {
    if (sigma < 0.0) throw std::invalid_argument("sigma >= 0");
    if (sigma == 0.0) return;
    const std::int64_t tail = static_cast<std::int64_t>(std::ceil(6.0 * sigma));
    double mass = 0.0;
    for (std::int64_t v = -tail; v <= tail; ++v) {
      mass += std::exp(-0.5 * v * v / (sigma * sigma));
      support_.push_back(v);
      cdf_.push_back(mass);
    }
    for (double& c : cdf_) c /= mass;
  }

  std::int64_t sample(RngStream& rng) const {
    if (support_.empty()) return 0;
    const double u = rng.uniform();
    std::size_t lo = 0, hi = cdf_.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cdf_[mid] < u)
        lo = mid + 1;
      else
        hi = mid;
    }
    return zq::mod_reduce(support_[lo], q_);
  }

  // lift of the sampled residue back to the centered interval, for tests
  static std::int64_t centered_lift(std::int64_t v, std::int64_t q) {
    return v > q / 2 ? v - q : v;
  }

 private:
  std::int64_t q_;
  std::vector<std::int64_t> support_;
  std::vector<double> cdf_;
};

struct EtcfInstance {
  LweParams params;
  EtcfMode mode = EtcfMode::Injective;
  std::uint64_t seed = 0;
  zq::Matrix A;  // m_rows x n
  std::vector<std::vector<std::int64_t>> secrets;    // k secrets, length n
  std::vector<std::vector<std::int64_t>> u_vectors;  // k shifts, length m_rows
  std::vector<std::vector<std::int64_t>> e_prime;    // k noise vectors, length m_rows
  std::vector<std::int64_t> e_table;  // domain * m_rows, empty when noiseless

  // derived: per-branch-bit additive shift (u_i or A s_i + e'_i)
  std::vector<std::vector<std::int64_t>> branch_shift;

  // input indexing: idx = b * q^n + sum_j x_j q^j (x little-endian)
  std::uint64_t input_index(std::uint64_t b,
                            std::span<const std::int64_t> x) const {
    std::uint64_t xi = 0;
    for (int j = params.n - 1; j >= 0; --j)
      xi = xi * static_cast<std::uint64_t>(params.q) +
           static_cast<std::uint64_t>(x[j]);
    return b * params.q_pow_n() + xi;
  }

  std::pair<std::uint64_t, std::vector<std::int64_t>> input_from_index(
      std::uint64_t idx) const {
    const std::uint64_t qn = params.q_pow_n();
    std::uint64_t b = idx / qn;
    std::uint64_t xi = idx % qn;
    std::vector<std::int64_t> x(params.n);
    for (int j = 0; j < params.n; ++j) {
      x[j] = static_cast<std::int64_t>(xi % params.q);
      xi /= params.q;
    }
    return {b, std::move(x)};
  }
};

namespace detail {

inline std::vector<std::int64_t> uniform_vector(int len, std::int64_t q,
                                                RngStream& rng) {
  std::vector<std::int64_t> v(len);
  for (auto& e : v) e = rng.uniform_int(0, q - 1);
  return v;
}

inline bool all_zero(const std::vector<std::int64_t>& v) {
  for (auto e : v)
    if (e != 0) return false;
  return true;
}

// Noiseless injectivity of f over all branch pairs: f(b,x) = f(b',x') would
// force sum_i db_i u_i into the column span of A with db = b - b' nonzero in
// {-1,0,1}^k. Checking every such db against zq::solve is equivalent to an
// all-preimage-counts-one census when A has full column rank, and is what
// the sampler uses; tests re-verify with the literal census.
inline bool injective_shifts(const zq::Matrix& A,
                             const std::vector<std::vector<std::int64_t>>& us) {
  const int k = static_cast<int>(us.size());
  const std::int64_t q = A.q;
  std::int64_t combos = 1;
  for (int i = 0; i < k; ++i) combos *= 3;
  for (std::int64_t c = 1; c < combos; ++c) {
    std::int64_t t = c;
    std::vector<std::int64_t> target(A.rows, 0);
    for (int i = 0; i < k; ++i) {
      const int digit = static_cast<int>(t % 3);  // 0, +1, -1
      t /= 3;
      if (digit == 0) continue;
      const std::int64_t sign = digit == 1 ? 1 : q - 1;
      for (int r = 0; r < A.rows; ++r)
        target[r] = zq::mod_reduce(target[r] + sign * us[i][r], q);
    }
    if (all_zero(target)) return false;  // shifts collide among themselves
    if (zq::solve(A, target).has_value()) return false;
  }
  return true;
}

}  // namespace detail

inline EtcfInstance sample_instance(const LweParams& params, EtcfMode mode,
                                    std::uint64_t seed) {
  params.validate();
  EtcfInstance inst;
  inst.params = params;
  inst.mode = mode;
  inst.seed = seed;

  constexpr int kMaxResamples = 100;
  RngStream rng = RngStream::derive(seed, "etcf-instance");

  // A with full column rank
  bool rank_ok = false;
  for (int attempt = 0; attempt < kMaxResamples && !rank_ok; ++attempt) {
    inst.A = zq::Matrix(params.m_rows, params.n, params.q);
    for (auto& e : inst.A.data) e = rng.uniform_int(0, params.q - 1);
    rank_ok = zq::rank(inst.A) == params.n;
  }
  if (!rank_ok)
    throw GenerationError("no full-column-rank A after 100 resamples");

  const DiscreteGaussian noise(params.noiseless ? 0.0 : params.sigma,
                               params.q);

  if (mode == EtcfMode::Degenerate) {
    for (int i = 0; i < params.k; ++i) {
      std::vector<std::int64_t> s;
      do {
        s = detail::uniform_vector(params.n, params.q, rng);
      } while (detail::all_zero(s));  // zero secret makes a vacuous trapdoor
      inst.secrets.push_back(std::move(s));
    }
    for (int i = 0; i < params.k; ++i) {
      std::vector<std::int64_t> ep(params.m_rows, 0);
      if (!params.noiseless)
        for (auto& e : ep) e = noise.sample(rng);
      std::vector<std::int64_t> shift = inst.A.mul_vec(inst.secrets[i]);
      for (int r = 0; r < params.m_rows; ++r)
        shift[r] = zq::mod_reduce(shift[r] + ep[r], params.q);
      if (!params.noiseless) inst.e_prime.push_back(std::move(ep));
      inst.branch_shift.push_back(std::move(shift));
    }
  } else {
    bool injective = false;
    for (int attempt = 0; attempt < kMaxResamples && !injective; ++attempt) {
      inst.u_vectors.clear();
      for (int i = 0; i < params.k; ++i)
        inst.u_vectors.push_back(
            detail::uniform_vector(params.m_rows, params.q, rng));
      // noisy injective instances are only approximately injective; the
      // span test applies to the noiseless construction
      injective =
          !params.noiseless || detail::injective_shifts(inst.A, inst.u_vectors);
    }
    if (!injective)
      throw GenerationError(
          "injective branch: no shift family outside the column span of A "
          "after 100 resamples");
    inst.branch_shift = inst.u_vectors;
  }

  if (!params.noiseless) {
    const std::uint64_t dom = params.domain_size();
    inst.e_table.resize(dom * static_cast<std::uint64_t>(params.m_rows));
    for (std::uint64_t idx = 0; idx < dom; ++idx)
      for (int r = 0; r < params.m_rows; ++r)
        inst.e_table[idx * params.m_rows + r] = noise.sample(rng);
  }
  return inst;
}

inline std::vector<std::int64_t> eval(const EtcfInstance& inst,
                                      std::uint64_t b,
                                      std::span<const std::int64_t> x) {
  const LweParams& p = inst.params;
  if (b >= p.branch_count())
    throw std::invalid_argument("eval: branch index out of range");
  if (static_cast<int>(x.size()) != p.n)
    throw std::invalid_argument("eval: x has wrong dimension");
  for (auto v : x)
    if (v < 0 || v >= p.q)
      throw std::invalid_argument("eval: x entry outside [0, q)");

  std::vector<std::int64_t> y(p.m_rows, 0);
  for (int r = 0; r < p.m_rows; ++r) {
    std::int64_t acc = 0;
    for (int c = 0; c < p.n; ++c) acc += inst.A(r, c) * x[c] % p.q;
    y[r] = zq::mod_reduce(acc, p.q);
  }
  for (int i = 0; i < p.k; ++i) {
    if (!((b >> i) & 1)) continue;
    for (int r = 0; r < p.m_rows; ++r)
      y[r] = zq::mod_reduce(y[r] + inst.branch_shift[i][r], p.q);
  }
  if (!inst.e_table.empty()) {
    const std::uint64_t idx = inst.input_index(b, x);
    for (int r = 0; r < p.m_rows; ++r)
      y[r] = zq::mod_reduce(y[r] + inst.e_table[idx * p.m_rows + r], p.q);
  }
  return y;
}

// output vector -> number of preimages, by full enumeration of the domain
using PreimageCensus = std::map<std::vector<std::int64_t>, std::uint64_t>;

inline PreimageCensus preimage_census(const EtcfInstance& inst) {
  inst.params.validate();  // re-checks the enumeration cap
  PreimageCensus counts;
  const std::uint64_t dom = inst.params.domain_size();
  for (std::uint64_t idx = 0; idx < dom; ++idx) {
    auto [b, x] = inst.input_from_index(idx);
    ++counts[eval(inst, b, x)];
  }
  return counts;
}

struct CensusSummary {
  std::uint64_t total = 0;
  std::uint64_t distinct = 0;
  std::map<std::uint64_t, std::uint64_t> histogram;  // count -> multiplicity

  double fraction_with(std::uint64_t c) const {
    const auto it = histogram.find(c);
    if (it == histogram.end() || total == 0) return 0.0;
    return static_cast<double>(it->second * c) / static_cast<double>(total);
  }
  bool counts_within(std::uint64_t lo, std::uint64_t hi) const {
    for (const auto& [count, mult] : histogram)
      if (count < lo || count > hi) return false;
    return true;
  }
};

inline CensusSummary summarize(const PreimageCensus& census) {
  CensusSummary s;
  for (const auto& [value, count] : census) {
    s.total += count;
    ++s.distinct;
    ++s.histogram[count];
  }
  return s;
}

// Trapdoor lookup for the canonical colliding preimage: complement every
// branch bit and shift x by the corresponding signed combination of secrets.
// For k = 1: (b, x) -> (1 - b, x + (2b - 1) s). Injective instances have no
// partner; k = 0 degenerates to the identity class and returns empty.
inline std::optional<std::pair<std::uint64_t, std::vector<std::int64_t>>>
collision_partner(const EtcfInstance& inst, std::uint64_t b,
                  std::span<const std::int64_t> x) {
  const LweParams& p = inst.params;
  if (b >= p.branch_count())
    throw std::invalid_argument("collision_partner: branch out of range");
  if (static_cast<int>(x.size()) != p.n)
    throw std::invalid_argument("collision_partner: x has wrong dimension");
  if (inst.mode == EtcfMode::Injective) return std::nullopt;
  if (!p.noiseless)
    throw UnsupportedMode(
        "collision_partner: exact collisions exist only noiselessly");
  if (p.k == 0) return std::nullopt;

  const std::uint64_t bp = b ^ (p.branch_count() - 1);
  std::vector<std::int64_t> xp(x.begin(), x.end());
  for (int i = 0; i < p.k; ++i) {
    const std::int64_t bi = (b >> i) & 1;
    const std::int64_t bpi = (bp >> i) & 1;
    const std::int64_t diff = bi - bpi;  // +1 or -1, never 0
    for (int j = 0; j < p.n; ++j)
      xp[j] = zq::mod_reduce(xp[j] + diff * inst.secrets[i][j], p.q);
  }
  return std::make_pair(bp, std::move(xp));
}

// ---------------------------------------------------------------------------
// JSON round trip (schema: params, matrices as row-major integer arrays, seed)

inline nlohmann::json to_json(const EtcfInstance& inst) {
  nlohmann::json j;
  j["schema"] = "etcf-instance/1";
  j["params"] = {{"n", inst.params.n},
                 {"m_rows", inst.params.m_rows},
                 {"q", inst.params.q},
                 {"sigma", inst.params.sigma},
                 {"k", inst.params.k},
                 {"noiseless", inst.params.noiseless},
                 {"domain_cap", inst.params.domain_cap}};
  j["mode"] = std::string(to_string(inst.mode));
  j["seed"] = inst.seed;
  j["A"] = inst.A.data;
  j["secrets"] = inst.secrets;
  j["u_vectors"] = inst.u_vectors;
  j["e_prime"] = inst.e_prime;
  j["e_table"] = inst.e_table;
  return j;
}

inline EtcfInstance instance_from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "etcf-instance/1")
    throw ConfigError("instance_from_json: unknown schema");
  EtcfInstance inst;
  const auto& p = j.at("params");
  inst.params.n = p.at("n").get<int>();
  inst.params.m_rows = p.at("m_rows").get<int>();
  inst.params.q = p.at("q").get<std::int64_t>();
  inst.params.sigma = p.at("sigma").get<double>();
  inst.params.k = p.at("k").get<int>();
  inst.params.noiseless = p.at("noiseless").get<bool>();
  inst.params.domain_cap = p.at("domain_cap").get<std::uint64_t>();
  inst.params.validate();
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "injective")
    inst.mode = EtcfMode::Injective;
  else if (mode == "degenerate")
    inst.mode = EtcfMode::Degenerate;
  else
    throw ConfigError("instance_from_json: bad mode '" + mode + "'");
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.A = zq::Matrix(inst.params.m_rows, inst.params.n, inst.params.q);
  inst.A.data = j.at("A").get<std::vector<std::int64_t>>();
  if (inst.A.data.size() !=
      static_cast<std::size_t>(inst.params.m_rows) * inst.params.n)
    throw ConfigError("instance_from_json: A has wrong size");
  inst.secrets = j.at("secrets").get<std::vector<std::vector<std::int64_t>>>();
  inst.u_vectors =
      j.at("u_vectors").get<std::vector<std::vector<std::int64_t>>>();
  inst.e_prime = j.at("e_prime").get<std::vector<std::vector<std::int64_t>>>();
  inst.e_table = j.at("e_table").get<std::vector<std::int64_t>>();

  // rebuild the derived shifts from canonical fields
  if (inst.mode == EtcfMode::Degenerate) {
    if (static_cast<int>(inst.secrets.size()) != inst.params.k)
      throw ConfigError("instance_from_json: secrets do not match k");
    for (int i = 0; i < inst.params.k; ++i) {
      std::vector<std::int64_t> shift = inst.A.mul_vec(inst.secrets[i]);
      if (!inst.e_prime.empty())
        for (int r = 0; r < inst.params.m_rows; ++r)
          shift[r] =
              zq::mod_reduce(shift[r] + inst.e_prime[i][r], inst.params.q);
      inst.branch_shift.push_back(std::move(shift));
    }
  } else {
    if (static_cast<int>(inst.u_vectors.size()) != inst.params.k)
      throw ConfigError("instance_from_json: u_vectors do not match k");
    inst.branch_shift = inst.u_vectors;
  }
  return inst;
}

}  // namespace hololab::lwe
