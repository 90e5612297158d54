// Copyright 2026 The dualgeom Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DUALGEOM_TENSOR_HPP
#define DUALGEOM_TENSOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace dualgeom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense rank-3 array with all extents equal to n. Index order is the order
/// of the arguments, e.g. Christoffel symbols gamma(k, i, j) = Γ^k_ij.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(std::size_t n) : n_(n), data_(n * n * n, 0.0) {}

  std::size_t dim() const { return n_; }
  double& operator()(std::size_t a, std::size_t b, std::size_t c) {
    return data_[(a * n_ + b) * n_ + c];
  }
  double operator()(std::size_t a, std::size_t b, std::size_t c) const {
    return data_[(a * n_ + b) * n_ + c];
  }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Dense rank-4 array with all extents equal to n.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(std::size_t n) : n_(n), data_(n * n * n * n, 0.0) {}

  std::size_t dim() const { return n_; }
  double& operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return data_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  double operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return data_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <class T>
double max_abs_diff(const T& a, const T& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace dualgeom

#endif  // DUALGEOM_TENSOR_HPP
