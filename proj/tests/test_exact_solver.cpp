#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>

#include "frustra/dense_oracle.hpp"
#include "frustra/exact_solver.hpp"
#include "frustra/linalg.hpp"

using namespace frustra;

namespace {

Tensor3 identity_embedding(int d) {
  Tensor3 t(1, d, d);
  for (int i = 0; i < d; ++i) t.at(0, i, i) = 1.0;
  return t;
}

int dense_svd_rank(const Eigen::MatrixXcd& m, double tol = 1e-10) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * sv(0)) ++rank;
  }
  return rank;
}

}  // namespace

TEST_CASE("first-step constraint matrix is the conjugated vector matrix") {
  ChainSpec spec;
  spec.local_dim = 3;
  spec.rank = 2;
  spec.seed = 4;
  const auto bonds = sample_chain(spec);
  const Tensor3 gamma = identity_embedding(3);
  const Eigen::MatrixXcd c = build_constraint_matrix(gamma, bonds[0]);
  REQUIRE(c.rows() == 2);
  REQUIRE(c.cols() == 9);
  for (int p = 0; p < 2; ++p) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        // row (p, a=i), column (j, b=i-th alpha): entry conj(V[p, (i, j)])
        CHECK(c(p, j * 3 + i) == std::conj(bonds[0].vectors(p, i * 3 + j)));
      }
    }
  }
}

TEST_CASE("kernel basis") {
  SUBCASE("zero matrix returns the identity") {
    const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(3, 5);
    const KernelBasis kb = kernel_basis(zero);
    CHECK(kb.rank == 0);
    CHECK(max_abs(kb.basis - Eigen::MatrixXcd::Identity(5, 5)) == 0.0);
  }
  SUBCASE("orthonormal rows leave an (n - m)-dimensional kernel") {
    RandomStream rng(3, 0);
    const BondProjector bp = sample_bond_projector(3, 4, rng);
    const KernelBasis kb = kernel_basis(bp.vectors);  // 4 x 9, orthonormal rows
    CHECK(kb.rank == 4);
    CHECK(kb.basis.cols() == 5);
    CHECK(max_abs(kb.basis.adjoint() * kb.basis - Eigen::MatrixXcd::Identity(5, 5)) < 1e-12);
    for (Eigen::Index t = 0; t < kb.basis.cols(); ++t) {
      CHECK((bp.vectors * kb.basis.col(t)).norm() <= 10 * 1e-10 * 1.0);
    }
  }
  SUBCASE("kernel dimension matches a dense SVD oracle on a propagation step") {
    ChainSpec spec;
    spec.n_sites = 4;
    spec.local_dim = 4;
    spec.rank = 4;
    spec.seed = 11;
    const auto bonds = sample_chain(spec);
    const SolutionStack stack = propagate_solutions(spec, bonds);
    const Eigen::MatrixXcd c = build_constraint_matrix(stack.site_tensors[1], bonds[1]);
    const KernelBasis kb = kernel_basis(c);
    CHECK(kb.rank == dense_svd_rank(c));
    CHECK(kb.basis.cols() == c.cols() - dense_svd_rank(c));
  }
}

TEST_CASE("propagation on random instances") {
  SUBCASE("d=2 r=1 N=3: counts 1,2,3,4 and a 4-dimensional dense kernel") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
      ChainSpec spec;
      spec.n_sites = 3;
      spec.local_dim = 2;
      spec.rank = 1;
      spec.seed = seed;
      const auto bonds = sample_chain(spec);
      const SolutionStack stack = propagate_solutions(spec, bonds);
      CHECK(stack.solution_counts == std::vector<int>{1, 2, 3, 4});
      CHECK(!stack.frustrated);

      const DenseHamiltonian h(spec, bonds);
      CHECK(kernel_dimension(h) == 4);
    }
  }
  SUBCASE("d=2 r=2 N=3 is frustrated with positive ground energy") {
    ChainSpec spec;
    spec.n_sites = 3;
    spec.local_dim = 2;
    spec.rank = 2;
    spec.seed = 7;
    const auto bonds = sample_chain(spec);
    const SolutionStack stack = propagate_solutions(spec, bonds);
    CHECK(stack.frustrated);
    CHECK(stack.solution_counts.back() == 0);
    const DenseHamiltonian h(spec, bonds);
    CHECK(ground_energy(h) > 1e-6);
  }
  SUBCASE("structured d=4 r=4 instance reaches s_n = 2^n (n+1)") {
    ChainSpec spec;
    spec.n_sites = 6;
    spec.local_dim = 4;
    spec.rank = 4;
    std::vector<BondProjector> bonds;
    for (int k = 0; k < 5; ++k) {
      BondProjector bp = structured_bond_vectors(4, 4);
      bp.bond_index = k;
      bonds.push_back(std::move(bp));
    }
    const SolutionStack stack = propagate_solutions(spec, bonds);
    CHECK(stack.solution_counts == std::vector<int>{1, 4, 12, 32, 80, 192, 448});
    for (const auto& diag : stack.diagnostics) CHECK(diag.sigma_gap > 1e4);
  }
  SUBCASE("counts never exceed D_n and tensors keep full column rank") {
    for (std::uint64_t seed : {10ull, 11ull, 12ull}) {
      ChainSpec spec;
      spec.n_sites = 6;
      spec.local_dim = 3;
      spec.rank = 2;
      spec.seed = seed;
      const auto bonds = sample_chain(spec);
      const SolutionStack stack = propagate_solutions(spec, bonds);
      const auto counts = solution_count_sequence(3, 2, 6);
      for (std::size_t n = 0; n < stack.solution_counts.size(); ++n) {
        CHECK(BigInt(stack.solution_counts[n]) <= counts[n]);
      }
      for (const auto& gamma : stack.site_tensors) {
        CHECK(dense_svd_rank(gamma.flattened_rows()) == gamma.right());
      }
    }
  }
}

TEST_CASE("assembled states solve the instance") {
  ChainSpec spec;
  spec.n_sites = 3;
  spec.local_dim = 2;
  spec.rank = 1;
  spec.seed = 21;
  const auto bonds = sample_chain(spec);
  const SolutionStack stack = propagate_solutions(spec, bonds);
  const Eigen::MatrixXcd states = assemble_all_states(stack, 2);
  REQUIRE(states.cols() == 4);

  SUBCASE("every state is annihilated by the dense Hamiltonian") {
    for (Eigen::Index t = 0; t < states.cols(); ++t) {
      const Eigen::VectorXcd hx = apply_hamiltonian(spec, bonds, states.col(t));
      CHECK(hx.norm() / states.col(t).norm() < 1e-9);
    }
  }
  SUBCASE("states are linearly independent") {
    const Eigen::MatrixXcd gram = states.adjoint() * states;
    CHECK(dense_svd_rank(gram) == 4);
  }
  SUBCASE("single-state assembly matches the batch and can normalize") {
    const Eigen::VectorXcd x = assemble_state(stack, 2, 1, 1 << 20, true);
    CHECK(std::abs(x.norm() - 1.0) < 1e-12);
    CHECK(max_abs(x - states.col(1) / states.col(1).norm()) < 1e-12);
    CHECK_THROWS_AS(assemble_state(stack, 2, 4), std::invalid_argument);
  }
  SUBCASE("the dense cap is enforced") {
    CHECK_THROWS_AS(assemble_all_states(stack, 2, 4), std::invalid_argument);
  }
}

TEST_CASE("two-site kernel states are annihilated by the bond") {
  ChainSpec spec;
  spec.n_sites = 2;
  spec.local_dim = 3;
  spec.rank = 4;
  spec.seed = 2;
  const auto bonds = sample_chain(spec);
  const SolutionStack stack = propagate_solutions(spec, bonds);
  CHECK(stack.solution_counts.back() == 5);  // d^2 - r
  const Eigen::MatrixXcd states = assemble_all_states(stack, 3);
  for (Eigen::Index t = 0; t < states.cols(); ++t) {
    // <v^p|psi> = conj(V) psi must vanish for every p
    CHECK((bonds[0].vectors.conjugate() * states.col(t)).norm() < 1e-10);
    CHECK((projector_matrix(bonds[0]) * states.col(t)).norm() < 1e-10);
  }
}

TEST_CASE("subset selection keeps a smaller valid family") {
  ChainSpec spec;
  spec.n_sites = 5;
  spec.local_dim = 3;
  spec.rank = 1;
  spec.seed = 31;
  const auto bonds = sample_chain(spec);
  const SolutionStack stack = propagate_solutions(spec, bonds, 1e-10, 2);
  CHECK(stack.solution_counts == std::vector<int>{1, 3, 2, 2, 2, 2});
  const Eigen::MatrixXcd states = assemble_all_states(stack, 3);
  for (Eigen::Index t = 0; t < states.cols(); ++t) {
    const Eigen::VectorXcd hx = apply_hamiltonian(spec, bonds, states.col(t));
    CHECK(hx.norm() / states.col(t).norm() < 1e-9);
  }
}

TEST_CASE("product state fast path") {
  SUBCASE("singlet bonds pin every site to the first basis state") {
    ChainSpec spec;
    spec.n_sites = 6;
    spec.local_dim = 2;
    spec.rank = 1;
    std::vector<BondProjector> bonds;
    for (int k = 0; k < 5; ++k) {
      BondProjector bp;
      bp.bond_index = k;
      bp.local_dim = 2;
      bp.vectors = Eigen::MatrixXcd::Zero(1, 4);
      bp.vectors(0, 1) = 1.0 / std::sqrt(2.0);
      bp.vectors(0, 2) = -1.0 / std::sqrt(2.0);
      bonds.push_back(std::move(bp));
    }
    const auto psi = product_state_solve(spec, bonds);
    REQUIRE(psi.size() == 6);
    for (const auto& v : psi) {
      CHECK(std::abs(v(0) - std::complex<double>(1.0, 0.0)) < 1e-12);
      CHECK(std::abs(v(1)) < 1e-12);
    }
    CHECK(product_state_energy(psi, bonds) < 1e-20);
  }
  SUBCASE("random d=3 r=2 chains of 20 sites have negligible residual") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      ChainSpec spec;
      spec.n_sites = 20;
      spec.local_dim = 3;
      spec.rank = 2;
      spec.seed = seed;
      const auto bonds = sample_chain(spec);
      const auto psi = product_state_solve(spec, bonds);
      CHECK(product_state_energy(psi, bonds) < 1e-10);
      for (const auto& v : psi) {
        CHECK(std::abs(v.norm() - 1.0) < 1e-12);
        // phase convention: the dominant entry is real positive
        Eigen::Index imax = 0;
        v.cwiseAbs().maxCoeff(&imax);
        CHECK(v(imax).imag() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(v(imax).real() > 0);
      }
    }
  }
  SUBCASE("rejects r >= d") {
    ChainSpec spec;
    spec.n_sites = 3;
    spec.local_dim = 2;
    spec.rank = 2;
    const auto bonds = sample_chain(spec);
    CHECK_THROWS_AS(product_state_solve(spec, bonds), std::invalid_argument);
  }
}

TEST_CASE("structured-construction verification") {
  SUBCASE("d=2 r=1 chains grow linearly, all steps dense") {
    const AppendixReport rep = appendix_construction_check(2, 1, 10);
    CHECK(rep.pass);
    CHECK(rep.support_ok);
    CHECK(rep.orthonormal_ok);
    CHECK(rep.restricted_rank_ok);
    for (const auto& step : rep.steps) {
      CHECK(step.dense_checked);
      CHECK(step.expected_count == BigInt(step.new_site + 1));
    }
  }
  SUBCASE("d=4 r=4 critical growth") {
    const AppendixReport rep = appendix_construction_check(4, 4, 8);
    CHECK(rep.pass);
    const auto counts = solution_count_sequence(4, 4, 8);
    for (const auto& step : rep.steps) {
      CHECK(step.expected_count == counts[step.new_site]);
      CHECK(step.expected_rank == 4 * counts[step.new_site - 2]);
    }
    CHECK(rep.steps.front().dense_checked);
  }
  SUBCASE("d=6 r=9 critical point with odd-step handoff to structural checks") {
    const AppendixReport rep = appendix_construction_check(6, 9, 6, 500000);
    CHECK(rep.pass);
    bool saw_structural = false;
    for (const auto& step : rep.steps) saw_structural = saw_structural || !step.dense_checked;
    CHECK(saw_structural);
  }
  SUBCASE("precondition") {
    CHECK_THROWS_AS(appendix_construction_check(2, 2, 4), std::invalid_argument);
  }
}
