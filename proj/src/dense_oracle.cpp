#include "frustra/dense_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace frustra {

namespace {

std::size_t pow_size(int base, int exp) {
  std::size_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > (std::size_t{1} << 40) / static_cast<std::size_t>(base)) {
      throw std::invalid_argument("dense_oracle: d^N overflows the supported range");
    }
    v *= static_cast<std::size_t>(base);
  }
  return v;
}

}  // namespace

DenseHamiltonian::DenseHamiltonian(ChainSpec spec, std::vector<BondProjector> bonds,
                                   std::size_t dense_cap)
    : spec_(std::move(spec)), bonds_(std::move(bonds)) {
  spec_.validate();
  if (static_cast<int>(bonds_.size()) != spec_.n_bonds()) {
    throw std::invalid_argument("DenseHamiltonian: expected N-1 bonds");
  }
  dim_ = pow_size(spec_.local_dim, spec_.n_sites);
  if (dim_ > dense_cap) {
    throw std::invalid_argument("DenseHamiltonian: d^N exceeds the dense cap");
  }
  const int d = spec_.local_dim;
  const int d2 = d * d;
  matrix_ = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (int k = 0; k < spec_.n_bonds(); ++k) {
    const Eigen::MatrixXcd p = projector_matrix(bonds_[k]);
    const std::size_t left = pow_size(d, k);
    const std::size_t right = pow_size(d, spec_.n_sites - k - 2);
    for (std::size_t a = 0; a < left; ++a) {
      for (int m = 0; m < d2; ++m) {
        for (int m2 = 0; m2 < d2; ++m2) {
          if (p(m, m2) == std::complex<double>(0.0, 0.0)) continue;
          const std::size_t row0 = (a * d2 + m) * right;
          const std::size_t col0 = (a * d2 + m2) * right;
          for (std::size_t b = 0; b < right; ++b) {
            matrix_(row0 + b, col0 + b) += p(m, m2);
          }
        }
      }
    }
  }
}

const Eigen::VectorXd& DenseHamiltonian::eigenvalues() const {
  if (!eigenvalues_) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
    eigenvalues_ = es.eigenvalues();
  }
  return *eigenvalues_;
}

Eigen::VectorXcd apply_two_site(const Eigen::MatrixXcd& op, int bond, int local_dim, int n_sites,
                                const Eigen::VectorXcd& psi) {
  const int d = local_dim;
  const int d2 = d * d;
  if (op.rows() != d2 || op.cols() != d2) {
    throw std::invalid_argument("apply_two_site: operator must be d^2 x d^2");
  }
  const std::size_t left = pow_size(d, bond);
  const std::size_t right = pow_size(d, n_sites - bond - 2);
  if (static_cast<std::size_t>(psi.size()) != left * d2 * right) {
    throw std::invalid_argument("apply_two_site: state size mismatch");
  }
  Eigen::VectorXcd out(psi.size());
  Eigen::VectorXcd x(d2), y(d2);
  for (std::size_t a = 0; a < left; ++a) {
    for (std::size_t b = 0; b < right; ++b) {
      for (int m = 0; m < d2; ++m) x(m) = psi((a * d2 + m) * right + b);
      y.noalias() = op * x;
      for (int m = 0; m < d2; ++m) out((a * d2 + m) * right + b) = y(m);
    }
  }
  return out;
}

Eigen::VectorXcd apply_hamiltonian(const ChainSpec& spec, const std::vector<BondProjector>& bonds,
                                   const Eigen::VectorXcd& psi) {
  spec.validate();
  const std::size_t dim = pow_size(spec.local_dim, spec.n_sites);
  if (dim > (std::size_t{1} << 20)) {
    throw std::invalid_argument("apply_hamiltonian: d^N exceeds the matrix-free cap");
  }
  if (static_cast<std::size_t>(psi.size()) != dim) {
    throw std::invalid_argument("apply_hamiltonian: state size mismatch");
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (int k = 0; k < spec.n_bonds(); ++k) {
    out += apply_two_site(projector_matrix(bonds[k]), k, spec.local_dim, spec.n_sites, psi);
  }
  return out;
}

KernelReport kernel_report(const DenseHamiltonian& h, double tol) {
  if (tol <= 0) throw std::invalid_argument("kernel_report: tol > 0 required");
  const Eigen::VectorXd& evals = h.eigenvalues();
  KernelReport rep;
  rep.smallest_excited_eigenvalue = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    const double e = evals(i);
    if (e < tol) {
      ++rep.dimension;
      rep.largest_kernel_eigenvalue = std::max(rep.largest_kernel_eigenvalue, e);
    } else {
      if (e < 100 * tol) ++rep.ambiguous;
      rep.smallest_excited_eigenvalue = std::min(rep.smallest_excited_eigenvalue, e);
    }
  }
  return rep;
}

int kernel_dimension(const DenseHamiltonian& h, double tol) {
  const KernelReport rep = kernel_report(h, tol);
  if (rep.ambiguous > 0) {
    std::cerr << "kernel_dimension: " << rep.ambiguous << " eigenvalue(s) in the ambiguous band ["
              << tol << ", " << 100 * tol << ")\n";
  }
  return rep.dimension;
}

double ground_energy(const DenseHamiltonian& h) {
  return h.eigenvalues()(0);
}

EvolutionResult dense_imaginary_evolution(const DenseHamiltonian& h, double tau, int steps,
                                          bool trotterized, const Eigen::VectorXcd* initial) {
  if (tau < 0) throw std::invalid_argument("dense_imaginary_evolution: tau >= 0 required");
  const std::size_t dim = h.dimension();
  Eigen::VectorXcd psi;
  if (initial) {
    if (static_cast<std::size_t>(initial->size()) != dim) {
      throw std::invalid_argument("dense_imaginary_evolution: initial state size mismatch");
    }
    psi = initial->normalized();
  } else {
    psi = Eigen::VectorXcd::Constant(dim, std::complex<double>(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  }

  EvolutionResult out;
  auto record = [&](const Eigen::VectorXcd& v) {
    out.energy_trace.push_back((v.adjoint() * h.matrix() * v).real()(0, 0));
  };
  record(psi);

  const int d = h.spec().local_dim;
  const int n = h.spec().n_sites;
  if (trotterized) {
    std::vector<Eigen::MatrixXcd> gates;
    for (const auto& bond : h.bonds()) {
      const Eigen::MatrixXcd p = projector_matrix(bond);
      gates.push_back(Eigen::MatrixXcd::Identity(d * d, d * d) + (std::exp(-tau) - 1.0) * p);
    }
    for (int step = 0; step < steps; ++step) {
      for (int k = 0; k < n - 1; k += 2) psi = apply_two_site(gates[k], k, d, n, psi);
      for (int k = 1; k < n - 1; k += 2) psi = apply_two_site(gates[k], k, d, n, psi);
      psi /= psi.norm();
      record(psi);
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix());
    const Eigen::VectorXd decay = (-tau * es.eigenvalues().array()).exp();
    Eigen::VectorXcd coeff = es.eigenvectors().adjoint() * psi;
    for (int step = 0; step < steps; ++step) {
      coeff.array() *= decay.array();
      coeff /= coeff.norm();
      psi = es.eigenvectors() * coeff;
      record(psi);
    }
  }
  out.state = std::move(psi);
  return out;
}

}  // namespace frustra
