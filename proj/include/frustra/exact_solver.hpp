#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "frustra/counting.hpp"
#include "frustra/projectors.hpp"
#include "frustra/tensor3.hpp"

namespace frustra {

// Zero-energy solution space built by left-to-right kernel propagation.
// site_tensors[k] has shape (s_k, d, s_{k+1}) with s_0 = 1; the states on the
// first k+1 sites are psi_alpha = Gamma[0] ... Gamma[k] contracted over bond
// indices, one independent state per value of the last bond index.
struct SolutionStack {
  std::vector<Tensor3> site_tensors;
  std::vector<int> solution_counts;  // s_0..s_N

  struct StepDiagnostics {
    int new_site = 0;          // 0-based site whose tensor the step produced
    int constraint_rank = 0;   // numerical rank of C
    double sigma_gap = 0.0;    // smallest retained / largest discarded singular value
    int at_threshold = 0;      // singular values sitting exactly on the cut
  };
  std::vector<StepDiagnostics> diagnostics;
  bool frustrated = false;  // propagation hit an empty kernel
};

// Constraint matrix C of shape (r s_{n-1}) x (d s_n):
//   C[(p, a), (j, b)] = sum_i conj(V[p, (i, j)]) Gamma[a, i, b]
// with row index p * s_{n-1} + a and column index j * s_n + b.
Eigen::MatrixXcd build_constraint_matrix(const Tensor3& gamma, const BondProjector& bond);

struct KernelBasis {
  Eigen::MatrixXcd basis;   // orthonormal columns spanning ker(c), most-null first
  int rank = 0;             // numerical rank of c
  double sigma_gap = 0.0;
  int at_threshold = 0;
};

// Orthonormal kernel basis via SVD. Numerical rank counts singular values
// strictly above rank_tol * sigma_max; a zero matrix yields the identity.
// Columns are ordered by ascending singular value so a leading subset is the
// most reliably null one.
KernelBasis kernel_basis(const Eigen::MatrixXcd& c, double rank_tol = 1e-10);

// Left-to-right propagation. Gamma[0] is the identity embedding (s_1 = d);
// each later tensor is the full kernel of the constraint matrix, or its first
// `subset` columns when a smaller solution family is requested. Terminates
// early (frustrated = true) when a kernel is empty.
SolutionStack propagate_solutions(const ChainSpec& spec, const std::vector<BondProjector>& bonds,
                                  double rank_tol = 1e-10,
                                  std::optional<int> subset = std::nullopt);

// Dense amplitudes of every solution: column t is the state selected by
// terminal bond index t, length d^N in row-major site order.
Eigen::MatrixXcd assemble_all_states(const SolutionStack& stack, int local_dim,
                                     std::size_t dense_cap = std::size_t{1} << 20,
                                     bool normalize = false);

Eigen::VectorXcd assemble_state(const SolutionStack& stack, int local_dim, int terminal_index,
                                std::size_t dense_cap = std::size_t{1} << 20,
                                bool normalize = false);

// The r < d fast path: one unit vector per site, each next vector chosen in
// the kernel of M[p, j] = sum_i conj(V[p, (i, j)]) psi_i as the right singular
// vector with the smallest singular value, phase-fixed so the largest entry
// is real positive.
std::vector<Eigen::VectorXcd> product_state_solve(const ChainSpec& spec,
                                                  const std::vector<BondProjector>& bonds);

// Energy sum_k |<v_k^p | psi_k psi_{k+1}>|^2 of a product state.
double product_state_energy(const std::vector<Eigen::VectorXcd>& site_vectors,
                            const std::vector<BondProjector>& bonds);

// Executable verification of the structured construction: rank(C) = r D_{n-1}
// and s_n = D_n at every step, plus the explicit sparse tensors lying inside
// each kernel. Steps whose constraint matrix fits dense_entry_budget entries
// are checked by dense SVD; beyond that the same facts follow from the
// block-diagonal structure of C, whose premises (support pattern, restricted
// rank, index-map consistency) are checked numerically.
struct AppendixStep {
  int new_site = 0;               // 1-based site added
  BigInt expected_rank;           // r * D_{n-1}
  BigInt expected_count;          // D_{n+1}
  bool dense_checked = false;
  bool rank_ok = false;
  bool count_ok = false;
  bool explicit_kernel_ok = false;     // dense tier only
  double explicit_residual = 0.0;      // max column norm of C on the free block
};

struct AppendixReport {
  int d = 0, r = 0, n_sites = 0;
  bool support_ok = false;        // vectors vanish outside the allowed block
  bool orthonormal_ok = false;
  bool restricted_rank_ok = false;  // the r x (block) restriction has rank r
  std::vector<AppendixStep> steps;
  bool pass = false;
  std::string detail;
};

AppendixReport appendix_construction_check(int d, int r, int n_sites,
                                           std::size_t dense_entry_budget = 4000000);

}  // namespace frustra
