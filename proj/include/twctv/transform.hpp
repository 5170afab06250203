#ifndef TWCTV_TRANSFORM_HPP
#define TWCTV_TRANSFORM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "twctv/tensor.hpp"

namespace twctv {

enum class TransformFamily { Dct, Dft, Haar, RandomOrthogonal };

TransformFamily transform_family_from_string(const std::string& name);
std::string to_string(TransformFamily family);

// Invertible linear transform along modes 3..d. Every matrix satisfies
// M M^H = alpha I; c = prod(alpha_k). DCT/Haar/random-orthogonal matrices are
// orthonormal (alpha = 1); the DFT matrix is unnormalized (alpha = n).
struct TransformSpec {
  TransformFamily family = TransformFamily::Dct;
  std::vector<Eigen::MatrixXd> mats;        // real families
  std::vector<Eigen::MatrixXcd> cmats;      // DFT
  std::vector<double> alphas;               // one per trailing mode
  double norm_constant = 1.0;               // c
  uint64_t seed = 0;

  bool is_complex() const { return family == TransformFamily::Dft; }
  int trailing_modes() const { return static_cast<int>(alphas.size()); }
};

TransformSpec build_transform(TransformFamily family, const Shape& shape, uint64_t seed = 0);

// L and L^{-1}. The real overloads require a real family; the DFT path goes
// through the complex overloads. inverse_transform of a complex tensor checks
// the imaginary residue (<= 1e-9 relative) before discarding it.
Tensor apply_transform(const Tensor& x, const TransformSpec& spec);
CTensor apply_transform_complex(const Tensor& x, const TransformSpec& spec);
Tensor inverse_transform(const Tensor& xhat, const TransformSpec& spec);
Tensor inverse_transform(const CTensor& xhat, const TransformSpec& spec);

// X *_M Y: facewise product of the transformed slices, inverse-transformed.
Tensor m_product(const Tensor& x, const Tensor& y, const TransformSpec& spec);

// Identity element of *_M (inverse transform of per-slice identities).
Tensor m_identity(int64_t n, const Shape& shape_like, const TransformSpec& spec);

// Tensor transpose under *_M: transform-domain slices are conjugate-transposed.
Tensor tensor_transpose(const Tensor& x, const TransformSpec& spec);

struct MSvdFactors {
  Tensor u;  // n1 x n1 x trailing
  Tensor s;  // n1 x n2 x trailing, f-diagonal
  Tensor v;  // n2 x n2 x trailing
  int tubal_rank = 0;
};

MSvdFactors m_svd(const Tensor& x, const TransformSpec& spec);
Tensor msvd_reconstruct(const MSvdFactors& f, const TransformSpec& spec);

// Transform-domain singular values for every frontal slice, non-increasing.
std::vector<Eigen::VectorXd> slice_singular_values(const Tensor& x, const TransformSpec& spec);

// Tubes of S with any singular value above rel_tol * sigma_max count as
// nonzero.
int tubal_rank_from_singular_values(const std::vector<Eigen::VectorXd>& sigmas, double rel_tol = 1e-9);

// ((1/sqrt(c)) sum_l sum_i W(i,i,l) |sigma_i^(l)|^p)^(1/p). An empty weight
// tensor means W == 1. Requires p in (0,1] and weight entries in (0,1].
double weighted_schatten_p_norm(const Tensor& x, const Tensor& weights, double p, const TransformSpec& spec);

// sum_{k in modes} ||grad_k(X)||_1.
double tv_norm(const Tensor& x, const std::vector<int>& modes);

// (1/gamma) sum_{k in modes} ||grad_k(X)||_{W,S_p}. With an empty weight
// tensor the per-gradient weights are built adaptively from the slice
// singular values with the given sigmoid scale.
double twctv_norm(const Tensor& x, const Tensor& weights, double p, const std::vector<int>& modes,
                  const TransformSpec& spec, double sigmoid_m = 10.0);

}  // namespace twctv

#endif
