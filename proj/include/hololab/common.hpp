#pragma once

// Shared plumbing for the lab: entropy units, error types, deterministic
// RNG streams with a documented seed-splitting rule, and small numeric
// helpers (ordinary least squares, inverse normal CDF).

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hololab {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

enum class EntropyUnit { Bits, Nats };

// entropies are accumulated in nats and converted at reporting boundaries
inline double from_nats(double s_nats, EntropyUnit unit) {
  return unit == EntropyUnit::Bits ? s_nats / std::numbers::ln2 : s_nats;
}

// shared vocabulary: injective branch f vs 2^k-to-1 branch g
enum class EtcfMode { Injective, Degenerate };

inline std::string_view to_string(EtcfMode m) {
  return m == EtcfMode::Injective ? "injective" : "degenerate";
}

// ---------------------------------------------------------------------------
// error taxonomy

class GenerationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class CapExceeded : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class UnsupportedMode : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class InvalidState : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class NumericalDegeneracy : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class UnphysicalMode : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class InfeasibleParameters : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// raised when two states violate the promised entropy separation;
// carries the gap actually measured
class PromiseViolation : public std::runtime_error {
 public:
  PromiseViolation(const std::string& what, double measured_gap_bits)
      : std::runtime_error(what), measured_gap_bits_(measured_gap_bits) {}
  double measured_gap_bits() const { return measured_gap_bits_; }

 private:
  double measured_gap_bits_;
};

// ---------------------------------------------------------------------------
// deterministic RNG
//
// Seed-splitting rule, used everywhere a trial or experiment needs its own
// stream:
//   seed(master, label, index) = mix64(mix64(master ^ fnv1a64(label)) + index)
// Streams are therefore independent of the order in which trials run.

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index = 0) {
  return mix64(mix64(master ^ fnv1a64(label)) + index);
}

// mt19937_64 plus hand-rolled uniform/gaussian transforms, so every drawn
// value is fixed by the standard and not by the host libstdc++
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  static RngStream derive(std::uint64_t master, std::string_view label,
                          std::uint64_t index = 0) {
    return RngStream(derive_seed(master, label, index));
  }

  std::uint64_t next_u64() { return gen_(); }

  // [0, 1) with 53-bit resolution
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // standard normal, Box-Muller cosine branch; consumes exactly two uniforms
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double gaussian(double mean, double stddev) {
    return mean + stddev * gaussian();
  }

  // unbiased integer in [lo, hi] by rejection
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t range =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (range == 1) return lo;
    const std::uint64_t limit =
        (std::numeric_limits<std::uint64_t>::max() / range) * range;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % range);
  }

 private:
  std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// numeric helpers

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

inline LinearFit fit_linear(std::span<const double> x,
                            std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_linear: need >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_linear: degenerate x grid");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r2 = 1.0;  // constant y is fit exactly
  } else {
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (fit.intercept + fit.slope * x[i]);
      ss_res += r * r;
    }
    fit.r2 = 1.0 - ss_res / syy;
  }
  return fit;
}

// standard normal CDF
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// inverse standard normal CDF: Acklam's rational approximation followed by
// one Halley step against normal_cdf, machine-accurate away from the extreme
// tails
inline double probit(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("probit: p must lie in (0, 1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double u = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double u = p - 0.5;
    const double r = u * u;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        u /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double u = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  }
  if (std::abs(x) < 37.0) {  // exp(x^2/2) stays finite, erfc keeps precision
    const double e = normal_cdf(x) - p;
    const double g = e * std::sqrt(2.0 * std::numbers::pi) *
                     std::exp(0.5 * x * x);
    x -= g / (1.0 + 0.5 * x * g);
  }
  return x;
}

}  // namespace hololab
