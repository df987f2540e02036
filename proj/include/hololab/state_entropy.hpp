#pragma once

// Quantum bookkeeping for function superpositions: sparse pure states over
// (input register) x (output register), partial trace to either side, exact
// diagonalization and von Neumann entropy, and the entropy-gap decision
// between an injective and a 2^k-to-1 instance.
//
// The output register is indexed sparsely: only image values that actually
// occur get a basis index (dense indexing over Z_q^m would be astronomically
// wasteful). Output indices are assigned in lexicographic order of the image
// vectors, so states are reproducible across runs.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "hololab/common.hpp"
#include "hololab/lwe_etcf.hpp"

namespace hololab::state {

enum class Register { Input, Output };
enum class LargerSide { FirstLarger, SecondLarger };

struct PureState {
  struct Entry {
    std::size_t in = 0;
    std::size_t out = 0;
    std::complex<double> amp;
  };

  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<Entry> entries;
  // image vector behind each output index, in index order
  std::vector<std::vector<std::int64_t>> output_values;

  double norm() const {
    double n2 = 0;
    for (const auto& e : entries) n2 += std::norm(e.amp);
    return std::sqrt(n2);
  }

  void validate() const {
    if (in_dim == 0 || out_dim == 0)
      throw InvalidState("PureState: empty register");
    for (const auto& e : entries)
      if (e.in >= in_dim || e.out >= out_dim)
        throw InvalidState("PureState: entry index out of range");
    if (std::abs(norm() - 1.0) > 1e-12)
      throw InvalidState("PureState: norm departs from 1 beyond 1e-12");
  }
};

// equal superposition over the domain, output register entangled through
// the function table: sum_{b,x} |b,x>|h(b,x)> / sqrt(|domain|)
inline PureState build_function_state(const lwe::EtcfInstance& inst) {
  inst.params.validate();
  const std::uint64_t dom = inst.params.domain_size();

  std::vector<std::vector<std::int64_t>> images(dom);
  std::map<std::vector<std::int64_t>, std::size_t> dictionary;
  for (std::uint64_t idx = 0; idx < dom; ++idx) {
    auto [b, x] = inst.input_from_index(idx);
    images[idx] = lwe::eval(inst, b, x);
    dictionary.emplace(images[idx], 0);
  }
  std::size_t next = 0;
  for (auto& [value, out_idx] : dictionary) out_idx = next++;

  PureState psi;
  psi.in_dim = dom;
  psi.out_dim = dictionary.size();
  psi.output_values.resize(dictionary.size());
  for (const auto& [value, out_idx] : dictionary)
    psi.output_values[out_idx] = value;
  const double amp = 1.0 / std::sqrt(static_cast<double>(dom));
  psi.entries.reserve(dom);
  for (std::uint64_t idx = 0; idx < dom; ++idx)
    psi.entries.push_back({idx, dictionary.at(images[idx]), {amp, 0.0}});
  psi.validate();
  return psi;
}

struct DensityMatrix {
  Eigen::MatrixXcd rho;

  explicit DensityMatrix(Eigen::MatrixXcd m) : rho(std::move(m)) {
    if (rho.rows() != rho.cols()) throw InvalidState("DensityMatrix: not square");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw InvalidState("DensityMatrix: not Hermitian within 1e-12");
    if (std::abs(rho.trace().real() - 1.0) > 1e-12 ||
        std::abs(rho.trace().imag()) > 1e-12)
      throw InvalidState("DensityMatrix: trace departs from 1 beyond 1e-12");
  }

  Eigen::Index dim() const { return rho.rows(); }
};

// partial trace of |psi><psi| onto the kept register; the dense result is
// guarded by dense_cap since the input register can be far larger than any
// matrix we want to diagonalize
inline DensityMatrix reduce_density_matrix(const PureState& psi, Register keep,
                                           std::size_t dense_cap = 4096) {
  psi.validate();
  const std::size_t d = keep == Register::Input ? psi.in_dim : psi.out_dim;
  if (d > dense_cap)
    throw CapExceeded("reduce_density_matrix: kept register exceeds cap");

  // group entries by the traced-out index; every pair in a group contributes
  std::map<std::size_t, std::vector<const PureState::Entry*>> groups;
  for (const auto& e : psi.entries)
    groups[keep == Register::Input ? e.out : e.in].push_back(&e);

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [traced, group] : groups)
    for (const auto* a : group)
      for (const auto* b : group) {
        const std::size_t i = keep == Register::Input ? a->in : a->out;
        const std::size_t j = keep == Register::Input ? b->in : b->out;
        rho(i, j) += a->amp * std::conj(b->amp);
      }
  return DensityMatrix(std::move(rho));
}

// ascending eigenvalues; exact diagonalization of the Hermitian matrix
inline std::vector<double> spectrum(const DensityMatrix& dm) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      dm.rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalDegeneracy("spectrum: eigensolver failed");
  std::vector<double> eigs(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + dm.dim());
  return eigs;
}

inline double von_neumann_entropy(const DensityMatrix& dm, EntropyUnit unit) {
  double s_nats = 0.0;
  for (double lambda : spectrum(dm)) {
    if (lambda < -1e-10)
      throw InvalidState(
          "von_neumann_entropy: negative eigenvalue beyond tolerance");
    if (lambda <= 0.0) continue;  // clamp [-1e-10, 0) to zero mass
    s_nats -= lambda * std::log(lambda);
  }
  return from_nats(s_nats, unit);
}

// S(input reduction of f-state) - S(input reduction of g-state), in bits.
// Noiselessly this equals the collision exponent k exactly.
inline double entropy_gap(const lwe::EtcfInstance& inst_f,
                          const lwe::EtcfInstance& inst_g) {
  if (!(inst_f.params == inst_g.params))
    throw std::invalid_argument("entropy_gap: instances disagree on params");
  if (!inst_f.params.noiseless || !inst_g.params.noiseless)
    throw UnsupportedMode("entropy_gap: defined for noiseless instances only");
  const auto rho_f =
      reduce_density_matrix(build_function_state(inst_f), Register::Input);
  const auto rho_g =
      reduce_density_matrix(build_function_state(inst_g), Register::Input);
  return von_neumann_entropy(rho_f, EntropyUnit::Bits) -
         von_neumann_entropy(rho_g, EntropyUnit::Bits);
}

// decides which state carries more entropy under a promised separation of
// delta_bits; a measured gap below the promise is a promise violation
inline LargerSide qed_decide(const DensityMatrix& rho1,
                             const DensityMatrix& rho2, double delta_bits) {
  if (delta_bits <= 0.0)
    throw std::invalid_argument("qed_decide: delta_bits must be positive");
  const double s1 = von_neumann_entropy(rho1, EntropyUnit::Bits);
  const double s2 = von_neumann_entropy(rho2, EntropyUnit::Bits);
  const double gap = s1 - s2;
  if (std::abs(gap) < delta_bits)
    throw PromiseViolation("qed_decide: entropy separation below promise",
                           gap);
  return gap > 0 ? LargerSide::FirstLarger : LargerSide::SecondLarger;
}

}  // namespace hololab::state
