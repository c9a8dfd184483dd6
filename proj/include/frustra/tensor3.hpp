#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace frustra {

// Rank-3 complex tensor with index order (left, phys, right), stored as one
// (left x right) matrix per physical index.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int left, int phys, int right)
      : left_(left), phys_(phys), right_(right),
        slices_(phys, Eigen::MatrixXcd::Zero(left, right)) {}

  int left() const { return left_; }
  int phys() const { return phys_; }
  int right() const { return right_; }

  Eigen::MatrixXcd& slice(int i) { return slices_[i]; }
  const Eigen::MatrixXcd& slice(int i) const { return slices_[i]; }

  std::complex<double>& at(int a, int i, int b) { return slices_[i](a, b); }
  std::complex<double> at(int a, int i, int b) const { return slices_[i](a, b); }

  // Flattens (phys, left) rows against right columns; row index = i * left + a.
  Eigen::MatrixXcd flattened_rows() const {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(phys_) * left_, right_);
    for (int i = 0; i < phys_; ++i) m.middleRows(static_cast<Eigen::Index>(i) * left_, left_) = slices_[i];
    return m;
  }

  // Inverse of flattened_rows: columns of k become the right index.
  static Tensor3 from_flattened_rows(const Eigen::MatrixXcd& k, int left, int phys) {
    Tensor3 t(left, phys, static_cast<int>(k.cols()));
    for (int i = 0; i < phys; ++i) t.slices_[i] = k.middleRows(static_cast<Eigen::Index>(i) * left, left);
    return t;
  }

  // Row-major (left, phys, right) flat data, for serialization.
  std::vector<std::complex<double>> to_row_major() const {
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<std::size_t>(left_) * phys_ * right_);
    for (int a = 0; a < left_; ++a)
      for (int i = 0; i < phys_; ++i)
        for (int b = 0; b < right_; ++b) out.push_back(slices_[i](a, b));
    return out;
  }

  static Tensor3 from_row_major(const std::vector<std::complex<double>>& data,
                                int left, int phys, int right) {
    Tensor3 t(left, phys, right);
    std::size_t idx = 0;
    for (int a = 0; a < left; ++a)
      for (int i = 0; i < phys; ++i)
        for (int b = 0; b < right; ++b) t.slices_[i](a, b) = data[idx++];
    return t;
  }

 private:
  int left_ = 0;
  int phys_ = 0;
  int right_ = 0;
  std::vector<Eigen::MatrixXcd> slices_;
};

}  // namespace frustra
