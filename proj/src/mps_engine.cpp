#include "frustra/mps_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frustra/linalg.hpp"

namespace frustra {

namespace {

constexpr double kWeightFloor = 1e-12;  // weights below this invert as exact zeros
constexpr double kDeadSigma = 1e-14;    // relative cut for numerically dead directions

Eigen::VectorXd unit_weight() {
  return Eigen::VectorXd::Ones(1);
}

}  // namespace

MpsState::MpsState(int n_sites, int local_dim) : local_dim_(local_dim) {
  if (n_sites < 2) throw std::invalid_argument("MpsState: n_sites >= 2 required");
  site_tensors_.assign(n_sites, Tensor3(1, local_dim, 1));
  bond_weights_.assign(n_sites - 1, unit_weight());
}

int MpsState::max_bond_dim() const {
  int chi = 1;
  for (const auto& w : bond_weights_) chi = std::max(chi, static_cast<int>(w.size()));
  return chi;
}

double MpsState::norm() const {
  const int n = n_sites();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Ones(1, 1);
  for (int k = 0; k < n; ++k) {
    const Tensor3& g = site_tensors_[k];
    const int right = g.right();
    Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(right, right);
    for (int i = 0; i < local_dim_; ++i) {
      Eigen::MatrixXcd b = g.slice(i);
      if (k < n - 1) b *= bond_weights_[k].asDiagonal();
      next.noalias() += b.adjoint() * rho * b;
    }
    rho = std::move(next);
  }
  return std::sqrt(std::abs(rho(0, 0).real()));
}

void MpsState::normalize() {
  const double nrm = norm();
  if (nrm <= 0) throw std::runtime_error("MpsState::normalize: zero state");
  for (int i = 0; i < local_dim_; ++i) site_tensors_[0].slice(i) /= nrm;
}

Eigen::VectorXcd MpsState::densify(std::size_t dense_cap) const {
  const int n = n_sites();
  std::size_t dim = 1;
  for (int k = 0; k < n; ++k) {
    dim *= static_cast<std::size_t>(local_dim_);
    if (dim > dense_cap) throw std::invalid_argument("MpsState::densify: d^N exceeds the cap");
  }
  Eigen::MatrixXcd amps = Eigen::MatrixXcd::Ones(1, 1);
  for (int k = 0; k < n; ++k) {
    const Tensor3& g = site_tensors_[k];
    Eigen::MatrixXcd next(amps.rows() * local_dim_, g.right());
    for (int i = 0; i < local_dim_; ++i) {
      Eigen::MatrixXcd b = g.slice(i);
      if (k < n - 1) b *= bond_weights_[k].asDiagonal();
      const Eigen::MatrixXcd tmp = amps * b;
      for (Eigen::Index p = 0; p < amps.rows(); ++p) next.row(p * local_dim_ + i) = tmp.row(p);
    }
    amps = std::move(next);
  }
  return amps.col(0);
}

MpsState uniform_initial_state(const ChainSpec& spec) {
  spec.validate();
  MpsState state(spec.n_sites, spec.local_dim);
  const double amp = 1.0 / std::sqrt(static_cast<double>(spec.local_dim));
  for (int k = 0; k < spec.n_sites; ++k) {
    for (int i = 0; i < spec.local_dim; ++i) state.gamma(k).at(0, i, 0) = amp;
  }
  return state;
}

MpsState mps_from_product(const std::vector<Eigen::VectorXcd>& site_vectors) {
  if (site_vectors.size() < 2) throw std::invalid_argument("mps_from_product: need >= 2 sites");
  const int d = static_cast<int>(site_vectors[0].size());
  MpsState state(static_cast<int>(site_vectors.size()), d);
  for (std::size_t k = 0; k < site_vectors.size(); ++k) {
    if (site_vectors[k].size() != d) throw std::invalid_argument("mps_from_product: ragged vectors");
    const double nrm = site_vectors[k].norm();
    for (int i = 0; i < d; ++i) state.gamma(static_cast<int>(k)).at(0, i, 0) = site_vectors[k](i) / nrm;
  }
  return state;
}

MpsState mps_from_dense(const Eigen::VectorXcd& psi, int local_dim, int n_sites, int chi_max) {
  std::size_t dim = 1;
  for (int k = 0; k < n_sites; ++k) dim *= static_cast<std::size_t>(local_dim);
  if (static_cast<std::size_t>(psi.size()) != dim) {
    throw std::invalid_argument("mps_from_dense: state size mismatch");
  }
  const int d = local_dim;
  MpsState state(n_sites, d);
  Eigen::MatrixXcd remainder = psi.transpose() / psi.norm();  // 1 x d^N
  Eigen::VectorXd lambda_prev = unit_weight();
  for (int k = 0; k < n_sites - 1; ++k) {
    const Eigen::Index chi_prev = remainder.rows();
    const Eigen::Index rest = remainder.cols() / d;
    Eigen::MatrixXcd m(chi_prev * d, rest);
    // remainder columns are (i, rest) with i the slow index of the d^... block
    for (Eigen::Index a = 0; a < chi_prev; ++a) {
      for (int i = 0; i < d; ++i) {
        m.row(a * d + i) = remainder.row(a).segment(i * rest, rest);
      }
    }
    const ThinSvd svd = thin_svd(m);
    int keep = 0;
    const double smax = svd.singular_values.size() ? svd.singular_values(0) : 0.0;
    for (Eigen::Index t = 0; t < svd.singular_values.size(); ++t) {
      if (svd.singular_values(t) > kDeadSigma * smax && keep < chi_max) ++keep;
    }
    keep = std::max(keep, 1);
    Tensor3 g(static_cast<int>(chi_prev), d, keep);
    for (int i = 0; i < d; ++i) {
      for (Eigen::Index a = 0; a < chi_prev; ++a) {
        const double lp = lambda_prev(a);
        for (int b = 0; b < keep; ++b) {
          g.slice(i)(a, b) = lp < kWeightFloor ? 0.0 : svd.u(a * d + i, b) / lp;
        }
      }
    }
    state.gamma(k) = std::move(g);
    Eigen::VectorXd lam = svd.singular_values.head(keep);
    lam /= lam.norm();
    state.lambda(k) = lam;
    remainder = svd.singular_values.head(keep).asDiagonal() * svd.v.leftCols(keep).adjoint();
    remainder /= remainder.norm();
    lambda_prev = state.lambda(k);
  }
  Tensor3 last(static_cast<int>(remainder.rows()), d, 1);
  for (int i = 0; i < d; ++i) {
    for (Eigen::Index a = 0; a < remainder.rows(); ++a) {
      const double lp = lambda_prev(a);
      last.slice(i)(a, 0) = lp < kWeightFloor ? 0.0 : remainder(a, i) / lp;
    }
  }
  state.gamma(n_sites - 1) = std::move(last);
  state.normalize();
  return state;
}

Eigen::MatrixXcd two_site_imaginary_gate(const BondProjector& bond, double tau) {
  if (tau < 0) throw std::invalid_argument("two_site_imaginary_gate: tau >= 0 required");
  const int d2 = bond.local_dim * bond.local_dim;
  return Eigen::MatrixXcd::Identity(d2, d2) + (std::exp(-tau) - 1.0) * projector_matrix(bond);
}

namespace {

// Two-site wavefunction with all neighboring weights absorbed, as a
// d^2 x (chiL chiR) matrix indexed by (i*d + j, a*chiR + b).
Eigen::MatrixXcd two_site_theta(const MpsState& state, int k) {
  const int d = state.local_dim();
  const Tensor3& g1 = state.gamma(k);
  const Tensor3& g2 = state.gamma(k + 1);
  const int chi_l = g1.left();
  const int chi_r = g2.right();
  const Eigen::VectorXd lambda_l = k > 0 ? state.lambda(k - 1) : Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd& lambda_c = state.lambda(k);
  const Eigen::VectorXd lambda_r =
      k + 1 < state.n_sites() - 1 ? state.lambda(k + 1) : Eigen::VectorXd::Ones(1);

  Eigen::MatrixXcd theta(d * d, static_cast<Eigen::Index>(chi_l) * chi_r);
  std::vector<Eigen::MatrixXcd> left(d), right(d);
  for (int i = 0; i < d; ++i) {
    left[i] = lambda_l.asDiagonal() * g1.slice(i) * lambda_c.asDiagonal();
  }
  for (int j = 0; j < d; ++j) right[j] = g2.slice(j) * lambda_r.asDiagonal();
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const Eigen::MatrixXcd w = left[i] * right[j];
      for (int a = 0; a < chi_l; ++a) {
        theta.row(i * d + j).segment(static_cast<Eigen::Index>(a) * chi_r, chi_r) = w.row(a);
      }
    }
  }
  return theta;
}

}  // namespace

double apply_gate_and_truncate(MpsState& state, int bond_index, const Eigen::MatrixXcd& gate,
                               int chi_max) {
  const int d = state.local_dim();
  if (gate.rows() != d * d || gate.cols() != d * d) {
    throw std::invalid_argument("apply_gate_and_truncate: gate must be d^2 x d^2");
  }
  if (bond_index < 0 || bond_index >= state.n_sites() - 1) {
    throw std::invalid_argument("apply_gate_and_truncate: bond index out of range");
  }
  if (chi_max < 1) throw std::invalid_argument("apply_gate_and_truncate: chi_max >= 1 required");

  const int k = bond_index;
  const int chi_l = state.gamma(k).left();
  const int chi_r = state.gamma(k + 1).right();
  const Eigen::VectorXd lambda_l = k > 0 ? state.lambda(k - 1) : Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd lambda_r =
      k + 1 < state.n_sites() - 1 ? state.lambda(k + 1) : Eigen::VectorXd::Ones(1);

  const Eigen::MatrixXcd theta = gate * two_site_theta(state, k);

  // Reshape to (chiL d) x (d chiR) for the Schmidt split.
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(chi_l) * d, static_cast<Eigen::Index>(d) * chi_r);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      for (int a = 0; a < chi_l; ++a) {
        m.row(static_cast<Eigen::Index>(a) * d + i)
            .segment(static_cast<Eigen::Index>(j) * chi_r, chi_r) =
            theta.row(i * d + j).segment(static_cast<Eigen::Index>(a) * chi_r, chi_r);
      }
    }
  }

  const ThinSvd svd = thin_svd(m);
  const double total_weight = svd.singular_values.squaredNorm();
  if (total_weight <= 0) throw std::runtime_error("apply_gate_and_truncate: zero state after gate");
  const double smax = svd.singular_values(0);
  int keep = 0;
  for (Eigen::Index t = 0; t < svd.singular_values.size(); ++t) {
    if (svd.singular_values(t) > kDeadSigma * smax && keep < chi_max) ++keep;
  }
  keep = std::max(keep, 1);
  const double kept_weight = svd.singular_values.head(keep).squaredNorm();
  const double truncation_error = 1.0 - kept_weight / total_weight;

  Eigen::VectorXd lam = svd.singular_values.head(keep);
  lam /= std::sqrt(kept_weight);

  Tensor3 g1(chi_l, d, keep);
  for (int i = 0; i < d; ++i) {
    for (int a = 0; a < chi_l; ++a) {
      const double inv = lambda_l(a) < kWeightFloor ? 0.0 : 1.0 / lambda_l(a);
      for (int t = 0; t < keep; ++t) {
        g1.slice(i)(a, t) = svd.u(static_cast<Eigen::Index>(a) * d + i, t) * inv;
      }
    }
  }
  Tensor3 g2(keep, d, chi_r);
  for (int j = 0; j < d; ++j) {
    for (int b = 0; b < chi_r; ++b) {
      const double inv = lambda_r(b) < kWeightFloor ? 0.0 : 1.0 / lambda_r(b);
      for (int t = 0; t < keep; ++t) {
        g2.slice(j)(t, b) = std::conj(svd.v(static_cast<Eigen::Index>(j) * chi_r + b, t)) * inv;
      }
    }
  }
  state.gamma(k) = std::move(g1);
  state.gamma(k + 1) = std::move(g2);
  state.lambda(k) = std::move(lam);
  return truncation_error;
}

double energy(const MpsState& state, const std::vector<BondProjector>& bonds) {
  if (static_cast<int>(bonds.size()) != state.n_sites() - 1) {
    throw std::invalid_argument("energy: expected N-1 bonds");
  }
  const int n = state.n_sites();
  const int d = state.local_dim();

  // Exact expectation through left/right transfer environments, so the value
  // is correct even when truncation has degraded the canonical form. Each
  // bond term is a sum of PSD traces, hence nonnegative by construction.
  auto weighted = [&](int k, int i) -> Eigen::MatrixXcd {
    if (k < n - 1) return state.gamma(k).slice(i) * state.lambda(k).asDiagonal();
    return state.gamma(k).slice(i);
  };

  std::vector<Eigen::MatrixXcd> left(n + 1);
  left[0] = Eigen::MatrixXcd::Ones(1, 1);
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(state.gamma(k).right(), state.gamma(k).right());
    for (int i = 0; i < d; ++i) {
      const Eigen::MatrixXcd b = weighted(k, i);
      next.noalias() += b.adjoint() * left[k] * b;
    }
    left[k + 1] = 0.5 * (next + next.adjoint());
  }
  std::vector<Eigen::MatrixXcd> right(n + 1);
  right[n] = Eigen::MatrixXcd::Ones(1, 1);
  for (int k = n - 1; k >= 0; --k) {
    Eigen::MatrixXcd prev = Eigen::MatrixXcd::Zero(state.gamma(k).left(), state.gamma(k).left());
    for (int i = 0; i < d; ++i) {
      const Eigen::MatrixXcd b = weighted(k, i);
      prev.noalias() += b * right[k + 1] * b.adjoint();
    }
    right[k] = 0.5 * (prev + prev.adjoint());
  }
  const double norm_sq = left[n](0, 0).real();
  if (norm_sq <= 0) throw std::runtime_error("energy: zero state");

  double total = 0.0;
  std::vector<Eigen::MatrixXcd> pair(d * d);
  for (int k = 0; k < n - 1; ++k) {
    for (int i = 0; i < d; ++i) {
      const Eigen::MatrixXcd bi = weighted(k, i);
      for (int j = 0; j < d; ++j) {
        pair[i * d + j].noalias() = bi * weighted(k + 1, j);
      }
    }
    for (int p = 0; p < bonds[k].rank(); ++p) {
      Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(state.gamma(k).left(), state.gamma(k + 1).right());
      for (int m = 0; m < d * d; ++m) {
        const std::complex<double> coeff = std::conj(bonds[k].vectors(p, m));
        if (coeff != std::complex<double>(0.0, 0.0)) t.noalias() += coeff * pair[m];
      }
      total += (left[k] * t * right[k + 2] * t.adjoint()).trace().real();
    }
  }
  return std::max(total / norm_sq, 0.0);
}

std::vector<double> bond_entropies(const MpsState& state) {
  std::vector<double> out;
  out.reserve(state.n_sites() - 1);
  for (int k = 0; k < state.n_sites() - 1; ++k) {
    const Eigen::VectorXd& lam = state.lambda(k);
    double s = 0.0;
    for (Eigen::Index t = 0; t < lam.size(); ++t) {
      const double p = lam(t) * lam(t);
      if (p > 0) s -= p * std::log(p);
    }
    out.push_back(s);
  }
  return out;
}

TraceRow sweep(MpsState& state, const std::vector<BondProjector>& bonds, double tau, int chi_max,
               int sweep_index, bool second_order) {
  if (static_cast<int>(bonds.size()) != state.n_sites() - 1) {
    throw std::invalid_argument("sweep: expected N-1 bonds");
  }
  const int n_bonds = static_cast<int>(bonds.size());
  double max_trunc = 0.0;
  auto half_sweep = [&](int start, double step_tau) {
    for (int k = start; k < n_bonds; k += 2) {
      const Eigen::MatrixXcd gate = two_site_imaginary_gate(bonds[k], step_tau);
      max_trunc = std::max(max_trunc, apply_gate_and_truncate(state, k, gate, chi_max));
    }
  };
  if (second_order) {
    half_sweep(0, tau / 2);
    half_sweep(1, tau);
    half_sweep(0, tau / 2);
  } else {
    half_sweep(0, tau);
    half_sweep(1, tau);
  }
  state.normalize();

  TraceRow row;
  row.sweep = sweep_index;
  row.tau = tau;
  row.energy = energy(state, bonds);
  row.max_truncation_error = max_trunc;
  const std::vector<double> entropies = bond_entropies(state);
  row.min_bond_entropy = *std::min_element(entropies.begin(), entropies.end());
  row.max_bond_entropy = *std::max_element(entropies.begin(), entropies.end());
  return row;
}

GroundSearchResult ground_search(const ChainSpec& spec, const std::vector<BondProjector>& bonds,
                                 const TauSchedule& schedule, int chi_max, const StopRule& stop,
                                 bool second_order) {
  if (schedule.stages.empty()) throw std::invalid_argument("ground_search: empty tau schedule");
  GroundSearchResult result;
  result.state = uniform_initial_state(spec);

  TraceRow initial;
  initial.sweep = 0;
  initial.tau = schedule.stages[0];
  initial.energy = energy(result.state, bonds);
  initial.min_bond_entropy = 0.0;
  initial.max_bond_entropy = 0.0;
  result.trace.push_back(initial);

  std::size_t stage = 0;
  int sweeps_in_stage = 0;
  int quiet_sweeps = 0;
  double prev_energy = initial.energy;

  for (int sw = 1; sw <= stop.max_sweeps; ++sw) {
    TraceRow row = sweep(result.state, bonds, schedule.stages[stage], chi_max, sw, second_order);
    result.trace.push_back(row);
    ++sweeps_in_stage;

    const double improvement = prev_energy - row.energy;
    const double rel_improvement = improvement / std::max(std::abs(prev_energy), 1e-12);
    const double rel_change = std::abs(improvement) / std::max(std::abs(row.energy), 1.0);
    prev_energy = row.energy;

    if (stage + 1 < schedule.stages.size()) {
      if (sweeps_in_stage >= 2 && rel_improvement < schedule.advance_tol) {
        ++stage;
        sweeps_in_stage = 0;
        quiet_sweeps = 0;
      }
      continue;
    }
    // Final stage: the stop rule watches for a sustained plateau.
    if (rel_change < stop.stop_tol) {
      if (++quiet_sweeps >= stop.patience) {
        result.converged = true;
        break;
      }
    } else {
      quiet_sweeps = 0;
    }
  }
  result.final_energy = result.trace.back().energy;
  return result;
}

}  // namespace frustra
