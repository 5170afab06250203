#ifndef TWCTV_TENSOR_HPP
#define TWCTV_TENSOR_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "twctv/errors.hpp"

namespace twctv {

// Extents (n1, ..., nd). Entries are positive; d >= 3 for all solver-facing
// tensors. Element indices are 0-based everywhere in this library; mode
// numbers stay 1-based to match the usual tensor-algebra convention
// (mode-1 product, Gamma subset of {1,2,3} and so on). This is the single
// 0-based/1-based boundary.
using Shape = std::vector<int64_t>;

int64_t shape_numel(const Shape& shape);
bool same_shape(const Shape& a, const Shape& b);
std::string shape_to_string(const Shape& shape);

// Dense d-order tensor, row-major values. Value semantics; operations never
// mutate their inputs.
template <typename T>
class TensorT {
public:
  TensorT() = default;
  explicit TensorT(Shape shape)
      : shape_(std::move(shape)), values_(static_cast<size_t>(shape_numel(shape_)), T(0)) {}
  TensorT(Shape shape, std::vector<T> values) : shape_(std::move(shape)), values_(std::move(values)) {
    if (static_cast<int64_t>(values_.size()) != shape_numel(shape_))
      throw ShapeError("tensor values length does not match shape " + shape_to_string(shape_));
  }

  const Shape& shape() const { return shape_; }
  int order() const { return static_cast<int>(shape_.size()); }
  int64_t numel() const { return static_cast<int64_t>(values_.size()); }
  int64_t extent(int mode) const { return shape_.at(static_cast<size_t>(mode - 1)); }

  T* data() { return values_.data(); }
  const T* data() const { return values_.data(); }
  std::vector<T>& values() { return values_; }
  const std::vector<T>& values() const { return values_; }

  T& operator[](int64_t i) { return values_[static_cast<size_t>(i)]; }
  const T& operator[](int64_t i) const { return values_[static_cast<size_t>(i)]; }

private:
  Shape shape_;
  std::vector<T> values_;
};

using Tensor = TensorT<double>;
using CTensor = TensorT<std::complex<double>>;

// Boolean observation set; true = observed.
class ObservationMask {
public:
  ObservationMask() = default;
  ObservationMask(Shape shape, std::vector<uint8_t> bits) : shape_(std::move(shape)), bits_(std::move(bits)) {
    if (static_cast<int64_t>(bits_.size()) != shape_numel(shape_))
      throw ShapeError("mask bits length does not match shape");
  }
  static ObservationMask all_observed(const Shape& shape);
  static ObservationMask none_observed(const Shape& shape);

  const Shape& shape() const { return shape_; }
  int64_t numel() const { return static_cast<int64_t>(bits_.size()); }
  bool observed(int64_t i) const { return bits_[static_cast<size_t>(i)] != 0; }
  void set(int64_t i, bool v) { bits_[static_cast<size_t>(i)] = v ? 1 : 0; }
  int64_t count_observed() const;
  bool is_full() const { return count_observed() == numel(); }
  const std::vector<uint8_t>& bits() const { return bits_; }

private:
  Shape shape_;
  std::vector<uint8_t> bits_;
};

// Number of frontal slices n3*...*nd.
int64_t num_frontal_slices(const Shape& shape);

// Flattened frontal-slice index of the trailing multi-index (i3,...,id),
// 0-based, with i3 varying fastest:  j = i3 + n3*i4 + n3*n4*i5 + ...
int64_t frontal_index(const Shape& shape, const std::vector<int64_t>& trailing);

// Row-major offset of the (0,0) element of frontal slice j, where j follows
// the frontal_index enumeration above.
int64_t frontal_slice_offset(const Shape& shape, int64_t slice);

// Strided Eigen view of frontal slice j (n1 x n2).
template <typename T>
using SliceMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>, 0,
                            Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
template <typename T>
using ConstSliceMap = Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>, 0,
                                 Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;

template <typename T>
SliceMap<T> frontal_slice(TensorT<T>& x, int64_t slice);
template <typename T>
ConstSliceMap<T> frontal_slice(const TensorT<T>& x, int64_t slice);

// Mode-k product X x_k U: contracts mode k against the columns of U,
// (X x_k U)(..., i_k, ...) = sum_l X(..., l, ...) U(i_k, l).
Tensor mode_k_product(const Tensor& x, const Eigen::MatrixXd& u, int mode);
CTensor mode_k_product(const Tensor& x, const Eigen::MatrixXcd& u, int mode);
CTensor mode_k_product(const CTensor& x, const Eigen::MatrixXcd& u, int mode);
CTensor mode_k_product(const CTensor& x, const Eigen::MatrixXd& u, int mode);

// P_Omega: observed entries copied, unobserved zeroed.
Tensor project(const Tensor& x, const ObservationMask& omega);

double frobenius_norm(const Tensor& x);
double frobenius_norm(const CTensor& x);
double l1_norm(const Tensor& x);
double linf_norm(const Tensor& x);
double dot(const Tensor& a, const Tensor& b);

// Deterministic pairwise sum (used for all norm/inner-product reductions).
double pairwise_sum(const double* v, int64_t n);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
// a + s*b
Tensor axpy(const Tensor& a, double s, const Tensor& b);
double max_abs_diff(const Tensor& a, const Tensor& b);
bool all_finite(const Tensor& x);

// Drops imaginary parts; throws NumericError when the imaginary residue
// exceeds rel_tol * ||x||_F.
Tensor realify(const CTensor& x, double rel_tol = 1e-9);
CTensor complexify(const Tensor& x);

}  // namespace twctv

#endif
