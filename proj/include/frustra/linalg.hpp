#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace frustra {

struct ThinSvd {
  Eigen::MatrixXcd u;
  Eigen::VectorXd singular_values;
  Eigen::MatrixXcd v;  // a = u * diag(s) * v.adjoint()
};

// Thin SVD; BDCSVD for anything but tiny matrices, Jacobi below that.
ThinSvd thin_svd(const Eigen::MatrixXcd& a);

struct FullSvd {
  Eigen::VectorXd singular_values;
  Eigen::MatrixXcd v;  // full n x n right singular vectors
};

// Singular values plus full V, for kernel extraction.
FullSvd full_right_svd(const Eigen::MatrixXcd& a);

// In-place two-pass modified Gram-Schmidt on the rows. Two passes keep the
// rows orthonormal to ~1e-14 even when the row count approaches the column
// count. Throws if a row collapses to zero (linearly dependent input).
void orthonormalize_rows(Eigen::MatrixXcd& m);

// max |a_ij|
double max_abs(const Eigen::MatrixXcd& a);

}  // namespace frustra
