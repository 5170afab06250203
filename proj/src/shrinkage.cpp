#include "twctv/shrinkage.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "svd_kernels.hpp"

namespace twctv {

double gst_threshold(double w, double p) {
  if (!(w > 0.0)) throw ParamError("gst_threshold: weight must be positive");
  if (!(p > 0.0 && p < 1.0)) throw ParamError("gst_threshold: p must lie in (0,1)");
  const double base = std::pow(2.0 * w * (1.0 - p), 1.0 / (2.0 - p));
  return base + w * p * std::pow(2.0 * w * (1.0 - p), (p - 1.0) / (2.0 - p));
}

double gst_scalar(double y, double w, double p) {
  if (!std::isfinite(y) || !std::isfinite(w)) throw NumericError("gst_scalar: non-finite input");
  const double delta = gst_threshold(w, p);
  const double ay = std::abs(y);
  if (ay <= delta) return 0.0;

  // Fixed point x <- |y| - w p x^(p-1), monotone from x0 = |y| toward the
  // stable root; the root lies in (x_min, |y|) with x_min the coincidence
  // point [2w(1-p)]^{1/(2-p)}.
  const double x_min = std::pow(2.0 * w * (1.0 - p), 1.0 / (2.0 - p));
  double x = ay;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    const double next = ay - w * p * std::pow(x, p - 1.0);
    if (!(next > x_min)) {
      break;  // left the contraction region, bisect instead
    }
    if (std::abs(next - x) <= 1e-10) {
      x = next;
      converged = true;
      break;
    }
    x = next;
  }
  if (!converged) {
    double lo = x_min, hi = ay;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * ay; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double h = mid - ay + w * p * std::pow(mid, p - 1.0);
      (h < 0.0 ? lo : hi) = mid;
    }
    x = 0.5 * (lo + hi);
  }
  return y < 0.0 ? -x : x;
}

Eigen::VectorXd sv_sigmoid_weights(const Eigen::VectorXd& sigma_desc, double m) {
  if (!(m > 0.0)) throw ParamError("sigmoid scale must be positive");
  const int64_t n = sigma_desc.size();
  Eigen::VectorXd w(n);
  const double sigma_max = n > 0 ? sigma_desc(0) : 0.0;
  if (sigma_max <= 0.0) {
    w.setConstant(0.5);  // shrinking zeros is a no-op anyway
    return w;
  }
  for (int64_t i = 0; i < n; ++i) {
    const double s1_rev = sigma_desc(n - 1 - i) * m / sigma_max;
    w(i) = 1.0 / (1.0 + std::exp(-s1_rev));
  }
  return w;
}

Tensor compute_sv_weights(const std::vector<Eigen::VectorXd>& slice_sigmas, const Shape& shape, double m) {
  Tensor w(shape);
  const int64_t nslices = num_frontal_slices(shape);
  if (static_cast<int64_t>(slice_sigmas.size()) != nslices)
    throw ShapeError("compute_sv_weights: slice count mismatch");
  for (int64_t l = 0; l < nslices; ++l) {
    const Eigen::VectorXd wl = sv_sigmoid_weights(slice_sigmas[size_t(l)], m);
    auto slice = frontal_slice(w, l);
    for (int64_t i = 0; i < wl.size(); ++i) slice(i, i) = wl(i);
  }
  return w;
}

namespace {

Eigen::VectorXd shrink_singular_values(const Eigen::VectorXd& sigma, const Eigen::VectorXd& w, double tau,
                                       double p) {
  Eigen::VectorXd out(sigma.size());
  for (int64_t i = 0; i < sigma.size(); ++i) {
    if (p >= 1.0)
      out(i) = std::max(sigma(i) - tau * w(i), 0.0);
    else
      out(i) = gst_scalar(sigma(i), tau * w(i), p);
  }
  return out;
}

}  // namespace

Tensor gtsvt(const Tensor& x, double tau, double p, const TransformSpec& spec, double sigmoid_m,
             bool use_sv_weights) {
  if (!(tau > 0.0)) throw ParamError("gtsvt: tau must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw ParamError("gtsvt: p must lie in (0,1]");
  const Shape& s = x.shape();
  const int64_t nslices = num_frontal_slices(s);

  if (!spec.is_complex()) {
    const Tensor xh = apply_transform(x, spec);
    Tensor ch(s);
#pragma omp parallel for schedule(dynamic)
    for (int64_t l = 0; l < nslices; ++l) {
      const detail::RealSvd f = detail::svd_real(frontal_slice(xh, l), true);
      const Eigen::VectorXd w =
          use_sv_weights ? sv_sigmoid_weights(f.s, sigmoid_m) : Eigen::VectorXd::Ones(f.s.size());
      const Eigen::VectorXd shrunk = shrink_singular_values(f.s, w, tau, p);
      frontal_slice(ch, l) = f.u * shrunk.asDiagonal() * f.v.transpose();
    }
    return inverse_transform(ch, spec);
  }

  const CTensor xh = apply_transform_complex(x, spec);
  CTensor ch(s);
  // The shrunk slice is a function of the slice alone, so conjugate-paired
  // slices stay conjugates and the inverse transform is real; computing the
  // canonical half explicitly avoids paying two SVDs for the pair.
  std::vector<int64_t> canonical;
  canonical.reserve(size_t(nslices));
  std::vector<int64_t> partner(static_cast<size_t>(nslices));
  for (int64_t l = 0; l < nslices; ++l) {
    std::vector<int64_t> idx(s.size() - 2);
    int64_t rem = l;
    for (size_t a = 0; a < idx.size(); ++a) {
      idx[a] = rem % s[a + 2];
      rem /= s[a + 2];
    }
    for (size_t a = 0; a < idx.size(); ++a) idx[a] = (s[a + 2] - idx[a]) % s[a + 2];
    partner[size_t(l)] = frontal_index(s, idx);
    if (partner[size_t(l)] >= l) canonical.push_back(l);
  }
#pragma omp parallel for schedule(dynamic)
  for (size_t ci = 0; ci < canonical.size(); ++ci) {
    const int64_t l = canonical[ci];
    const detail::ComplexSvd f = detail::svd_complex(frontal_slice(xh, l), true);
    const Eigen::VectorXd w =
        use_sv_weights ? sv_sigmoid_weights(f.s, sigmoid_m) : Eigen::VectorXd::Ones(f.s.size());
    const Eigen::VectorXd shrunk = shrink_singular_values(f.s, w, tau, p);
    const Eigen::MatrixXcd c = f.u * shrunk.asDiagonal() * f.v.adjoint();
    frontal_slice(ch, l) = c;
    if (partner[size_t(l)] != l) frontal_slice(ch, partner[size_t(l)]) = c.conjugate();
  }
  return inverse_transform(ch, spec);
}

Tensor soft_threshold_weighted(const Tensor& x, const Tensor& thresholds) {
  if (!same_shape(x.shape(), thresholds.shape())) throw ShapeError("soft threshold: shape mismatch");
  Tensor out(x.shape());
  for (int64_t i = 0; i < x.numel(); ++i) {
    const double tau = thresholds[i];
    if (tau < 0.0) throw ParamError("soft threshold: negative threshold entry");
    const double mag = std::abs(x[i]) - tau;
    out[i] = mag > 0.0 ? (x[i] > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

SparseWeights sparse_weights(const Tensor& e, double c_e) {
  if (!(c_e > 0.0)) throw ParamError("sparse_weights: c_E must be positive");
  const int64_t n = e.numel();
  double mean_abs = l1_norm(e) / double(n);
  SparseWeights out;
  out.eta = c_e * mean_abs;
  Tensor w(e.shape());
  if (out.eta == 0.0) {
    for (int64_t i = 0; i < n; ++i) w[i] = 1.0;
  } else {
    for (int64_t i = 0; i < n; ++i) w[i] = std::exp(-std::abs(e[i]) / out.eta);
  }
  out.w = std::move(w);
  return out;
}

}  // namespace twctv
