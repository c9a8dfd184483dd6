#include "frustra/linalg.hpp"

#include <stdexcept>

namespace frustra {

ThinSvd thin_svd(const Eigen::MatrixXcd& a) {
  ThinSvd out;
  if (a.rows() >= 16 && a.cols() >= 16) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = svd.matrixU();
    out.singular_values = svd.singularValues();
    out.v = svd.matrixV();
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = svd.matrixU();
    out.singular_values = svd.singularValues();
    out.v = svd.matrixV();
  }
  return out;
}

FullSvd full_right_svd(const Eigen::MatrixXcd& a) {
  FullSvd out;
  if (a.rows() >= 16 && a.cols() >= 16) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
    out.singular_values = svd.singularValues();
    out.v = svd.matrixV();
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
    out.singular_values = svd.singularValues();
    out.v = svd.matrixV();
  }
  return out;
}

void orthonormalize_rows(Eigen::MatrixXcd& m) {
  const Eigen::Index r = m.rows();
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index k = 0; k < i; ++k) {
        const std::complex<double> overlap = m.row(k).dot(m.row(i));
        m.row(i) -= overlap * m.row(k);
      }
      const double norm = m.row(i).norm();
      if (norm < 1e-300) {
        throw std::runtime_error("orthonormalize_rows: linearly dependent rows");
      }
      m.row(i) /= norm;
    }
  }
}

double max_abs(const Eigen::MatrixXcd& a) {
  return a.cwiseAbs().maxCoeff();
}

}  // namespace frustra
