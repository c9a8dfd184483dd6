#include "frustra/projectors.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

#include "frustra/linalg.hpp"

namespace frustra {

void ChainSpec::validate() const {
  if (n_sites < 2) throw std::invalid_argument("ChainSpec: n_sites must be >= 2");
  if (local_dim < 2) throw std::invalid_argument("ChainSpec: local_dim must be >= 2");
  if (rank < 1 || rank > local_dim * local_dim) {
    throw std::invalid_argument("ChainSpec: rank must satisfy 1 <= rank <= local_dim^2");
  }
}

BondProjector sample_bond_projector(int local_dim, int rank, RandomStream& rng, Field field) {
  const int d2 = local_dim * local_dim;
  if (rank < 1 || rank > d2) {
    throw std::invalid_argument("sample_bond_projector: rank must satisfy 1 <= rank <= d^2");
  }
  Eigen::MatrixXcd v(rank, d2);
  for (int p = 0; p < rank; ++p) {
    for (int c = 0; c < d2; ++c) {
      v(p, c) = field == Field::Complex
                    ? rng.next_complex_gaussian()
                    : std::complex<double>(rng.next_gaussian(), 0.0);
    }
  }
  orthonormalize_rows(v);
  BondProjector bp;
  bp.local_dim = local_dim;
  bp.vectors = std::move(v);
  return bp;
}

std::vector<BondProjector> sample_chain(const ChainSpec& spec) {
  spec.validate();
  std::vector<BondProjector> bonds;
  bonds.reserve(spec.n_bonds());
  for (int k = 0; k < spec.n_bonds(); ++k) {
    RandomStream rng(spec.seed, static_cast<std::uint64_t>(k));
    BondProjector bp = sample_bond_projector(spec.local_dim, spec.rank, rng, spec.field);
    bp.bond_index = k;
    bonds.push_back(std::move(bp));
  }
  return bonds;
}

BondProjector structured_bond_vectors(int local_dim, int rank) {
  const int d = local_dim;
  const int half = d / 2;          // left site support: i < half (0-based)
  const int upper = d - half;      // right site support: j >= half
  const int block = half * upper;
  if (rank < 1 || rank > block) {
    throw std::invalid_argument("structured_bond_vectors: rank exceeds the " +
                                std::to_string(block) + "-dimensional allowed block");
  }
  BondProjector bp;
  bp.local_dim = d;
  bp.vectors = Eigen::MatrixXcd::Zero(rank, d * d);
  int p = 0;
  for (int i = 0; i < half && p < rank; ++i) {
    for (int j = half; j < d && p < rank; ++j) {
      bp.vectors(p, i * d + j) = 1.0;
      ++p;
    }
  }
  return bp;
}

LocalTermSpectrum term_spectrum(const Eigen::MatrixXcd& term, double degeneracy_tol) {
  if (term.rows() != term.cols()) throw std::invalid_argument("term_spectrum: square matrix required");
  if (max_abs(term - term.adjoint()) > 1e-10) {
    throw std::invalid_argument("term_spectrum: Hermitian matrix required");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(term);
  const Eigen::VectorXd& evals = es.eigenvalues();
  const Eigen::MatrixXcd& evecs = es.eigenvectors();

  LocalTermSpectrum out;
  const Eigen::Index n = evals.size();
  Eigen::Index begin = 0;
  while (begin < n) {
    Eigen::Index end = begin + 1;
    const double scale = std::max(1.0, std::abs(evals(begin)));
    while (end < n && std::abs(evals(end) - evals(begin)) <= degeneracy_tol * scale) ++end;
    const auto block = evecs.middleCols(begin, end - begin);
    out.energies.push_back(evals.segment(begin, end - begin).mean());
    out.projectors.push_back(block * block.adjoint());
    begin = end;
  }
  return out;
}

BondProjector reduce_to_projector(const LocalTermSpectrum& spectrum, double degeneracy_tol) {
  if (spectrum.energies.empty()) throw std::invalid_argument("reduce_to_projector: empty spectrum");
  const double e0 = spectrum.energies.front();
  const double scale = std::max(1.0, std::abs(e0));

  const Eigen::Index dim = spectrum.projectors.front().rows();
  Eigen::MatrixXcd excited = Eigen::MatrixXcd::Zero(dim, dim);
  bool any = false;
  for (std::size_t p = 0; p < spectrum.energies.size(); ++p) {
    if (std::abs(spectrum.energies[p] - e0) <= degeneracy_tol * scale) continue;
    excited += spectrum.projectors[p];
    any = true;
  }
  if (!any) {
    throw std::invalid_argument("reduce_to_projector: term is a multiple of the identity");
  }

  // Orthonormal basis of the excited range: eigenvectors with eigenvalue ~ 1.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(excited);
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 0.5) ++rank;
  }
  BondProjector bp;
  bp.local_dim = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
  // rows carry ket components, so transpose without conjugation
  bp.vectors = es.eigenvectors().rightCols(rank).transpose();
  return bp;
}

Eigen::MatrixXcd projector_matrix(const BondProjector& bp) {
  // sum_p |v^p><v^p| with row p holding the ket components <m|v^p>.
  return bp.vectors.transpose() * bp.vectors.conjugate();
}

}  // namespace frustra
