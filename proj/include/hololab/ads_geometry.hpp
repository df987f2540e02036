#pragma once

// AdS3/CFT2 dictionary at the bookkeeping level: central charge, geodesic
// lengths for boundary intervals, geodesic-length entropy, and the inverse
// map from an entropy difference to a length difference. Lengths are in AdS
// units, entropies internally in nats.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hololab/common.hpp"

namespace hololab::ads {

struct AdsGeometry {
  double R = 1.0;        // AdS radius
  double G_N = 0.25;     // Newton constant
  double epsilon = 1e-3; // UV cutoff
  int N_qubits = 0;      // 0 when the geometry was given directly

  void validate() const {
    if (!(R > 0.0) || !(G_N > 0.0) || !(epsilon > 0.0))
      throw std::invalid_argument("AdsGeometry: R, G_N, epsilon must be > 0");
    if (!(epsilon < R))
      throw std::invalid_argument("AdsGeometry: cutoff must sit below R");
  }
};

inline double brown_henneaux_central_charge(const AdsGeometry& geom) {
  geom.validate();
  return 3.0 * geom.R / (2.0 * geom.G_N);
}

// qubit-count calibration: R = 1, G_N = kappa / N, epsilon = 1e-3 R,
// so the central charge scales linearly in N with slope 3 / (2 kappa)
inline AdsGeometry geometry_from_qubits(int N, double kappa) {
  if (N < 1) throw std::invalid_argument("geometry_from_qubits: N >= 1");
  if (!(kappa > 0.0))
    throw std::invalid_argument("geometry_from_qubits: kappa > 0");
  AdsGeometry geom;
  geom.R = 1.0;
  geom.G_N = kappa / static_cast<double>(N);
  geom.epsilon = 1e-3 * geom.R;
  geom.N_qubits = N;
  geom.validate();
  return geom;
}

// boundary interval ell -> regulated geodesic length 2 R ln(ell / epsilon)
inline double rt_geodesic_length(const AdsGeometry& geom, double ell) {
  geom.validate();
  if (!(ell > geom.epsilon))
    throw std::domain_error("rt_geodesic_length: interval inside the cutoff");
  return 2.0 * geom.R * std::log(ell / geom.epsilon);
}

// minimal-surface entropy L / (4 G_N), natural units, converted on request
inline double rt_entropy(const AdsGeometry& geom, double length,
                         EntropyUnit unit) {
  geom.validate();
  if (length < 0.0)
    throw std::domain_error("rt_entropy: negative geodesic length");
  return from_nats(length / (4.0 * geom.G_N), unit);
}

// inverse dictionary: an entropy difference in bits buys a length difference
// of 4 G_N ln2 per bit
inline double entropy_gap_to_length_gap(const AdsGeometry& geom,
                                        double dS_bits) {
  geom.validate();
  return 4.0 * geom.G_N * dS_bits * std::numbers::ln2;
}

}  // namespace hololab::ads
