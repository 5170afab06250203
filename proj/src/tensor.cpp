#include "twctv/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace twctv {

int64_t shape_numel(const Shape& shape) {
  if (shape.empty()) return 0;
  int64_t n = 1;
  for (int64_t e : shape) {
    if (e <= 0) throw ShapeError("tensor extents must be positive");
    if (n > (int64_t(1) << 42) / e) throw ShapeError("tensor too large");
    n *= e;
  }
  return n;
}

bool same_shape(const Shape& a, const Shape& b) { return a == b; }

std::string shape_to_string(const Shape& shape) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ")";
  return os.str();
}

ObservationMask ObservationMask::all_observed(const Shape& shape) {
  return ObservationMask(shape, std::vector<uint8_t>(static_cast<size_t>(shape_numel(shape)), 1));
}

ObservationMask ObservationMask::none_observed(const Shape& shape) {
  return ObservationMask(shape, std::vector<uint8_t>(static_cast<size_t>(shape_numel(shape)), 0));
}

int64_t ObservationMask::count_observed() const {
  int64_t c = 0;
  for (uint8_t b : bits_) c += b != 0;
  return c;
}

int64_t num_frontal_slices(const Shape& shape) {
  if (shape.size() < 3) throw ShapeError("frontal slices need order >= 3");
  int64_t n = 1;
  for (size_t a = 2; a < shape.size(); ++a) n *= shape[a];
  return n;
}

int64_t frontal_index(const Shape& shape, const std::vector<int64_t>& trailing) {
  if (trailing.size() + 2 != shape.size()) throw ShapeError("trailing multi-index has wrong length");
  int64_t j = 0;
  int64_t stride = 1;
  for (size_t a = 0; a < trailing.size(); ++a) {
    int64_t extent = shape[a + 2];
    if (trailing[a] < 0 || trailing[a] >= extent) throw ShapeError("trailing index out of range");
    j += trailing[a] * stride;
    stride *= extent;
  }
  return j;
}

int64_t frontal_slice_offset(const Shape& shape, int64_t slice) {
  // Decompose slice (i3 fastest) and re-linearize row-major (id fastest).
  const int d = static_cast<int>(shape.size());
  int64_t offset = 0;
  int64_t row_stride = 1;
  std::vector<int64_t> strides(static_cast<size_t>(d));
  for (int a = d - 1; a >= 0; --a) {
    strides[static_cast<size_t>(a)] = row_stride;
    row_stride *= shape[static_cast<size_t>(a)];
  }
  int64_t rem = slice;
  for (int a = 2; a < d; ++a) {
    int64_t extent = shape[static_cast<size_t>(a)];
    offset += (rem % extent) * strides[static_cast<size_t>(a)];
    rem /= extent;
  }
  if (rem != 0) throw ShapeError("frontal slice index out of range");
  return offset;
}

namespace {

template <typename T>
SliceMap<T> make_slice(TensorT<T>& x, int64_t slice) {
  const Shape& s = x.shape();
  const int64_t nt = num_frontal_slices(s);
  const int64_t off = frontal_slice_offset(s, slice);
  return SliceMap<T>(x.data() + off, s[0], s[1], Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(s[1] * nt, nt));
}

template <typename T>
ConstSliceMap<T> make_slice(const TensorT<T>& x, int64_t slice) {
  const Shape& s = x.shape();
  const int64_t nt = num_frontal_slices(s);
  const int64_t off = frontal_slice_offset(s, slice);
  return ConstSliceMap<T>(x.data() + off, s[0], s[1],
                          Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(s[1] * nt, nt));
}

// Shared mode-k contraction. The tensor is viewed as [outer, n_k, inner]
// blocks; each block is a contiguous n_k x inner row-major matrix, so the
// contraction is a plain GEMM per block.
template <typename TOut, typename TIn, typename TMat>
TensorT<TOut> mode_k_product_impl(const TensorT<TIn>& x, const TMat& u, int mode) {
  const Shape& s = x.shape();
  const int d = static_cast<int>(s.size());
  if (mode < 1 || mode > d) throw ShapeError("mode out of range");
  const int64_t n = s[static_cast<size_t>(mode - 1)];
  if (u.rows() != n || u.cols() != n) throw ShapeError("transform matrix side does not match mode extent");

  int64_t inner = 1;
  for (int a = mode; a < d; ++a) inner *= s[static_cast<size_t>(a)];
  const int64_t outer = x.numel() / (n * inner);

  TensorT<TOut> out(s);
  using MatOut = Eigen::Matrix<TOut, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using MatIn = Eigen::Matrix<TIn, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
#pragma omp parallel for schedule(static)
  for (int64_t o = 0; o < outer; ++o) {
    Eigen::Map<const MatIn> in_block(x.data() + o * n * inner, n, inner);
    Eigen::Map<MatOut> out_block(out.data() + o * n * inner, n, inner);
    out_block.noalias() = u.template cast<TOut>() * in_block.template cast<TOut>();
  }
  return out;
}

}  // namespace

template <>
SliceMap<double> frontal_slice(Tensor& x, int64_t slice) {
  return make_slice(x, slice);
}
template <>
ConstSliceMap<double> frontal_slice(const Tensor& x, int64_t slice) {
  return make_slice(x, slice);
}
template <>
SliceMap<std::complex<double>> frontal_slice(CTensor& x, int64_t slice) {
  return make_slice(x, slice);
}
template <>
ConstSliceMap<std::complex<double>> frontal_slice(const CTensor& x, int64_t slice) {
  return make_slice(x, slice);
}

Tensor mode_k_product(const Tensor& x, const Eigen::MatrixXd& u, int mode) {
  return mode_k_product_impl<double>(x, u, mode);
}
CTensor mode_k_product(const Tensor& x, const Eigen::MatrixXcd& u, int mode) {
  return mode_k_product_impl<std::complex<double>>(x, u, mode);
}
CTensor mode_k_product(const CTensor& x, const Eigen::MatrixXcd& u, int mode) {
  return mode_k_product_impl<std::complex<double>>(x, u, mode);
}
CTensor mode_k_product(const CTensor& x, const Eigen::MatrixXd& u, int mode) {
  return mode_k_product_impl<std::complex<double>>(x, u, mode);
}

Tensor project(const Tensor& x, const ObservationMask& omega) {
  if (!same_shape(x.shape(), omega.shape())) throw ShapeError("mask shape does not match tensor");
  Tensor out(x.shape());
  const int64_t n = x.numel();
  for (int64_t i = 0; i < n; ++i) out[i] = omega.observed(i) ? x[i] : 0.0;
  return out;
}

double pairwise_sum(const double* v, int64_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (int64_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const int64_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

namespace {

template <typename F>
double pairwise_map_sum(int64_t n, F f) {
  // Pairwise over mapped values without materializing a buffer.
  if (n <= 8) {
    double s = 0.0;
    for (int64_t i = 0; i < n; ++i) s += f(i);
    return s;
  }
  struct Rec {
    static double go(int64_t lo, int64_t hi, F& f) {
      if (hi - lo <= 8) {
        double s = 0.0;
        for (int64_t i = lo; i < hi; ++i) s += f(i);
        return s;
      }
      const int64_t mid = lo + (hi - lo) / 2;
      return go(lo, mid, f) + go(mid, hi, f);
    }
  };
  return Rec::go(0, n, f);
}

}  // namespace

double frobenius_norm(const Tensor& x) {
  const double* p = x.data();
  return std::sqrt(pairwise_map_sum(x.numel(), [p](int64_t i) { return p[i] * p[i]; }));
}

double frobenius_norm(const CTensor& x) {
  const std::complex<double>* p = x.data();
  return std::sqrt(pairwise_map_sum(x.numel(), [p](int64_t i) { return std::norm(p[i]); }));
}

double l1_norm(const Tensor& x) {
  const double* p = x.data();
  return pairwise_map_sum(x.numel(), [p](int64_t i) { return std::abs(p[i]); });
}

double linf_norm(const Tensor& x) {
  double m = 0.0;
  for (int64_t i = 0; i < x.numel(); ++i) m = std::max(m, std::abs(x[i]));
  return m;
}

double dot(const Tensor& a, const Tensor& b) {
  if (!same_shape(a.shape(), b.shape())) throw ShapeError("dot: shape mismatch");
  const double* pa = a.data();
  const double* pb = b.data();
  return pairwise_map_sum(a.numel(), [pa, pb](int64_t i) { return pa[i] * pb[i]; });
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (!same_shape(a.shape(), b.shape())) throw ShapeError("add: shape mismatch");
  Tensor out(a.shape());
  for (int64_t i = 0; i < a.numel(); ++i) out[i] = a[i] + b[i];
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  if (!same_shape(a.shape(), b.shape())) throw ShapeError("sub: shape mismatch");
  Tensor out(a.shape());
  for (int64_t i = 0; i < a.numel(); ++i) out[i] = a[i] - b[i];
  return out;
}

Tensor scale(const Tensor& a, double s) {
  Tensor out(a.shape());
  for (int64_t i = 0; i < a.numel(); ++i) out[i] = a[i] * s;
  return out;
}

Tensor axpy(const Tensor& a, double s, const Tensor& b) {
  if (!same_shape(a.shape(), b.shape())) throw ShapeError("axpy: shape mismatch");
  Tensor out(a.shape());
  for (int64_t i = 0; i < a.numel(); ++i) out[i] = a[i] + s * b[i];
  return out;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (!same_shape(a.shape(), b.shape())) throw ShapeError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (int64_t i = 0; i < a.numel(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool all_finite(const Tensor& x) {
  for (int64_t i = 0; i < x.numel(); ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

Tensor realify(const CTensor& x, double rel_tol) {
  Tensor out(x.shape());
  double imag_sq = 0.0;
  double full_sq = 0.0;
  for (int64_t i = 0; i < x.numel(); ++i) {
    out[i] = x[i].real();
    imag_sq += x[i].imag() * x[i].imag();
    full_sq += std::norm(x[i]);
  }
  if (full_sq > 0.0 && std::sqrt(imag_sq) > rel_tol * std::sqrt(full_sq))
    throw NumericError("imaginary residue above tolerance after inverse transform");
  return out;
}

CTensor complexify(const Tensor& x) {
  CTensor out(x.shape());
  for (int64_t i = 0; i < x.numel(); ++i) out[i] = std::complex<double>(x[i], 0.0);
  return out;
}

}  // namespace twctv
