#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "frustra/rng.hpp"

namespace frustra {

enum class Field { Complex, Real };

// Problem instance descriptor for a chain of qudits with one rank-r projector
// per nearest-neighbor pair.
struct ChainSpec {
  int n_sites = 2;
  int local_dim = 2;
  int rank = 1;
  std::uint64_t seed = 0;
  Field field = Field::Complex;

  int n_bonds() const { return n_sites - 1; }
  void validate() const;  // throws std::invalid_argument
};

// One interaction term: r orthonormal vectors in the two-site space. Row p of
// `vectors` holds the ket components <i j|v^p> in the product basis, column
// index packed as i * d + j with i the left site. The induced projector is
// sum_p |v^p><v^p| = V^T conj(V).
struct BondProjector {
  int bond_index = 0;  // 0-based; couples sites (bond_index, bond_index + 1)
  int local_dim = 0;
  Eigen::MatrixXcd vectors;

  int rank() const { return static_cast<int>(vectors.rows()); }
};

// Spectral decomposition of a two-site term: ascending energies with the
// matching orthogonal projectors.
struct LocalTermSpectrum {
  std::vector<double> energies;
  std::vector<Eigen::MatrixXcd> projectors;
};

// Haar-random r-dimensional subspace of the d^2-dimensional two-site space:
// iid Gaussian entries, rows orthonormalized by two-pass Gram-Schmidt.
BondProjector sample_bond_projector(int local_dim, int rank, RandomStream& rng,
                                    Field field = Field::Complex);

// All N-1 bonds of an instance, bond k drawn from substream k of the master seed.
std::vector<BondProjector> sample_chain(const ChainSpec& spec);

// The deterministic construction with support only on |i j> having
// i <= floor(d/2) < j (1-based): the first r standard basis vectors of that
// block in lexicographic order. Requires r <= floor(d/2) * ceil(d/2).
BondProjector structured_bond_vectors(int local_dim, int rank);

// Groups the eigenvalues of a dense Hermitian two-site term into degenerate
// levels and returns energies plus projectors.
LocalTermSpectrum term_spectrum(const Eigen::MatrixXcd& term, double degeneracy_tol = 1e-9);

// Projector onto everything above the ground level, as an orthonormal row
// basis. Levels within |E - E0| <= tol * max(1, |E0|) count as ground.
// Throws if the term is a multiple of the identity (no constraint).
BondProjector reduce_to_projector(const LocalTermSpectrum& spectrum,
                                  double degeneracy_tol = 1e-9);

// Materializes the induced projector sum_p |v^p><v^p|.
Eigen::MatrixXcd projector_matrix(const BondProjector& bp);

}  // namespace frustra
