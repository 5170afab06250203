#ifndef TWCTV_GRADIENT_HPP
#define TWCTV_GRADIENT_HPP

#include <memory>
#include <vector>

#include "twctv/tensor.hpp"

namespace twctv {

// Cyclic forward difference along mode k: out(i) = x(i_k + 1 mod n_k) - x(i).
// This is the mode-k product with the row-circulant matrix of (-1, 1, 0, ...).
Tensor grad(const Tensor& x, int mode);

// Adjoint (transpose of the difference matrix): out(i) = x(i_k - 1 mod n_k) - x(i).
Tensor grad_adjoint(const Tensor& x, int mode);

// |F(D)|^2 for a circulant difference of extent n: 2 - 2 cos(2 pi j / n).
double circulant_symbol(int64_t n, int64_t j);

// Fourier-domain data for the X-subproblem: the denominator field
// 1 + sum_{k in modes} |F(D_k)|^2 broadcast over the full shape, plus FFT
// plans for the shape. Built once per solve; not safe for concurrent solves.
class SpectrumCache {
public:
  SpectrumCache(const Shape& shape, const std::vector<int>& modes);
  ~SpectrumCache();
  SpectrumCache(const SpectrumCache&) = delete;
  SpectrumCache& operator=(const SpectrumCache&) = delete;

  const Shape& shape() const { return shape_; }
  const std::vector<int>& modes() const { return modes_; }
  const std::vector<double>& denominator() const { return denom_; }

  struct Fft;
  Fft& fft() const { return *fft_; }

private:
  Shape shape_;
  std::vector<int> modes_;
  std::vector<double> denom_;
  std::unique_ptr<Fft> fft_;
};

// Closed-form minimizer of sum_k ||grad_k(X) - T_k||_F^2 / 2 + ||X - R||_F^2 / 2:
// X = F^{-1}( F(R + sum_k grad_k^T(T_k)) / (1 + sum_k |F(D_k)|^2) ).
// grad_targets must follow the order of cache.modes().
Tensor solve_x_subproblem(const Tensor& rhs_data, const std::vector<Tensor>& grad_targets,
                          const SpectrumCache& cache);

}  // namespace twctv

#endif
