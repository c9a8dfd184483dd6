#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <vector>

#include "frustra/projectors.hpp"

namespace frustra {

// Full Hamiltonian sum_k I (x) P_k (x) I at small sizes, with cached
// eigenvalues for kernel counting and ground energy.
class DenseHamiltonian {
 public:
  DenseHamiltonian(ChainSpec spec, std::vector<BondProjector> bonds,
                   std::size_t dense_cap = std::size_t{1} << 14);

  std::size_t dimension() const { return dim_; }
  const ChainSpec& spec() const { return spec_; }
  const std::vector<BondProjector>& bonds() const { return bonds_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  // Eigenvalues ascending, computed once on first use (values only).
  const Eigen::VectorXd& eigenvalues() const;

 private:
  ChainSpec spec_;
  std::vector<BondProjector> bonds_;
  std::size_t dim_ = 0;
  Eigen::MatrixXcd matrix_;
  mutable std::optional<Eigen::VectorXd> eigenvalues_;
};

// Matrix-free H |psi>; works past the dense cap (up to ~2^20 amplitudes).
Eigen::VectorXcd apply_hamiltonian(const ChainSpec& spec, const std::vector<BondProjector>& bonds,
                                   const Eigen::VectorXcd& psi);

// Applies a two-site operator on sites (k, k+1), 0-based, to a dense state.
Eigen::VectorXcd apply_two_site(const Eigen::MatrixXcd& op, int bond, int local_dim, int n_sites,
                                const Eigen::VectorXcd& psi);

struct KernelReport {
  int dimension = 0;        // eigenvalues below tol
  int ambiguous = 0;        // eigenvalues in [tol, 100 tol)
  double largest_kernel_eigenvalue = 0.0;
  double smallest_excited_eigenvalue = 0.0;
};

KernelReport kernel_report(const DenseHamiltonian& h, double tol = 1e-8);

// Count of eigenvalues below tol; warns on stderr when the gap is ambiguous.
int kernel_dimension(const DenseHamiltonian& h, double tol = 1e-8);

double ground_energy(const DenseHamiltonian& h);

struct EvolutionResult {
  Eigen::VectorXcd state;
  std::vector<double> energy_trace;  // energy after each step; [0] is the initial energy
};

// Imaginary-time evolution of the uniform superposition (or a caller-supplied
// start). Trotterized mode applies exp(-tau P) to odd bonds (0, 2, ...) then
// even bonds (1, 3, ...) and normalizes once per step, matching the MPS sweep
// exactly; exact mode applies exp(-tau H) through the eigendecomposition.
EvolutionResult dense_imaginary_evolution(const DenseHamiltonian& h, double tau, int steps,
                                          bool trotterized,
                                          const Eigen::VectorXcd* initial = nullptr);

}  // namespace frustra
