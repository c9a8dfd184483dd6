#pragma once

#include <Eigen/Dense>
#include <vector>

#include "frustra/projectors.hpp"
#include "frustra/tensor3.hpp"

namespace frustra {

// Vidal-form matrix product state: per-site tensors (chi_{k-1}, d, chi_k) with
// chi_0 = chi_N = 1 and one Schmidt vector per interior bond, descending and
// normalized to sum(lambda^2) = 1.
class MpsState {
 public:
  MpsState() = default;
  MpsState(int n_sites, int local_dim);

  int n_sites() const { return static_cast<int>(site_tensors_.size()); }
  int local_dim() const { return local_dim_; }

  Tensor3& gamma(int site) { return site_tensors_[site]; }
  const Tensor3& gamma(int site) const { return site_tensors_[site]; }

  // Interior bond k couples sites k and k+1, k in [0, N-2].
  Eigen::VectorXd& lambda(int bond) { return bond_weights_[bond]; }
  const Eigen::VectorXd& lambda(int bond) const { return bond_weights_[bond]; }

  int bond_dim(int bond) const { return static_cast<int>(bond_weights_[bond].size()); }
  int max_bond_dim() const;

  double norm() const;  // sqrt(<psi|psi>), exact transfer contraction
  void normalize();     // rescales the first tensor so <psi|psi> = 1

  // Dense amplitudes in row-major site order; throws past the cap.
  Eigen::VectorXcd densify(std::size_t dense_cap = std::size_t{1} << 20) const;

 private:
  int local_dim_ = 0;
  std::vector<Tensor3> site_tensors_;
  std::vector<Eigen::VectorXd> bond_weights_;
};

// Product state with every site vector (1, ..., 1)/sqrt(d).
MpsState uniform_initial_state(const ChainSpec& spec);

// Product state from explicit unit site vectors (chi = 1 everywhere).
MpsState mps_from_product(const std::vector<Eigen::VectorXcd>& site_vectors);

// Vidal form of a dense state via successive Schmidt decompositions.
MpsState mps_from_dense(const Eigen::VectorXcd& psi, int local_dim, int n_sites,
                        int chi_max = 1 << 20);

// exp(-tau P) = I + (e^-tau - 1) P, from projector idempotence.
Eigen::MatrixXcd two_site_imaginary_gate(const BondProjector& bond, double tau);

// Two-site update: absorbs the neighboring weights, applies the gate,
// refactors by SVD keeping at most chi_max values, renormalizes the retained
// weights. Returns the discarded Schmidt weight relative to the total.
double apply_gate_and_truncate(MpsState& state, int bond_index, const Eigen::MatrixXcd& gate,
                               int chi_max);

struct TraceRow {
  int sweep = 0;
  double tau = 0.0;
  double energy = 0.0;
  double max_truncation_error = 0.0;
  double min_bond_entropy = 0.0;
  double max_bond_entropy = 0.0;
};
using ConvergenceTrace = std::vector<TraceRow>;

// One Trotter step: gates on odd pairs (bonds 0, 2, ...) then even pairs
// (bonds 1, 3, ...), then one global normalization. Second order splits the
// odd half-sweeps at tau/2 around the even one.
TraceRow sweep(MpsState& state, const std::vector<BondProjector>& bonds, double tau, int chi_max,
               int sweep_index = 0, bool second_order = false);

// sum_k <psi| P_k |psi> by local contraction; each term is computed as a
// squared norm, so the result is exactly real and nonnegative.
double energy(const MpsState& state, const std::vector<BondProjector>& bonds);

// -sum lambda^2 ln lambda^2 per interior bond.
std::vector<double> bond_entropies(const MpsState& state);

struct TauSchedule {
  std::vector<double> stages{0.5, 0.1, 0.02};
  double advance_tol = 1e-3;  // advance when per-sweep relative improvement drops below
};

struct StopRule {
  double stop_tol = 1e-9;  // on |dE| / max(|E|, 1), final stage only
  int patience = 10;       // consecutive sweeps below stop_tol
  int max_sweeps = 5000;
};

struct GroundSearchResult {
  MpsState state;
  ConvergenceTrace trace;
  bool converged = false;
  double final_energy = 0.0;
};

// Imaginary-time minimization from the uniform superposition under the staged
// tau schedule. Deterministic given (spec, bonds, chi_max, schedule, stop);
// hitting max_sweeps is reported, not thrown.
GroundSearchResult ground_search(const ChainSpec& spec, const std::vector<BondProjector>& bonds,
                                 const TauSchedule& schedule, int chi_max, const StopRule& stop,
                                 bool second_order = false);

}  // namespace frustra
