#ifndef TWCTV_SHRINKAGE_HPP
#define TWCTV_SHRINKAGE_HPP

#include <Eigen/Dense>

#include "twctv/tensor.hpp"
#include "twctv/transform.hpp"

namespace twctv {

// Threshold below which the proximal map of w|x|^p is exactly zero:
// delta = [2w(1-p)]^{1/(2-p)} + w p [2w(1-p)]^{(p-1)/(2-p)}.
// Requires w > 0 and p in (0,1); p = 1 is handled by soft thresholding.
double gst_threshold(double w, double p);

// Proximal map of w|x|^p: argmin_x w|x|^p + (x - y)^2 / 2. Zero when
// |y| <= delta, otherwise sign(y) times the stable root of
// x - |y| + w p x^(p-1) = 0.
double gst_scalar(double y, double w, double p);

// Sigmoid weights for one slice of non-increasing singular values:
// S1_i = sigma_i * m / sigma_max, W_i = sigmoid(S1 at the reversed index).
// An all-zero slice gets the uniform weight 0.5. Weights are non-descending
// in i and lie strictly in (0,1).
Eigen::VectorXd sv_sigmoid_weights(const Eigen::VectorXd& sigma_desc, double m);

// f-diagonal weight tensor for all frontal slices; shape gives the target
// tensor layout (n1 x n2 x trailing).
Tensor compute_sv_weights(const std::vector<Eigen::VectorXd>& slice_sigmas, const Shape& shape, double m);

// Generalized tensor singular value thresholding: per transform-domain slice,
// shrink each singular value by the GST map with weight tau * W(i,i,l), where
// W comes from sv_sigmoid_weights of the slice itself (or W == 1 when
// use_sv_weights is false). p = 1 falls back to plain soft thresholding of
// the singular values.
Tensor gtsvt(const Tensor& x, double tau, double p, const TransformSpec& spec, double sigmoid_m = 10.0,
             bool use_sv_weights = true);

// Entrywise sign(x) * max(|x| - tau, 0) with a per-entry threshold tensor.
Tensor soft_threshold_weighted(const Tensor& x, const Tensor& thresholds);

struct SparseWeights {
  Tensor w;
  double eta = 0.0;
};

// W_E = exp(-|E| / eta) with eta = c_E * mean(|E|); W_E == 1 when E == 0.
SparseWeights sparse_weights(const Tensor& e, double c_e);

}  // namespace twctv

#endif
