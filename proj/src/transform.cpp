#include "twctv/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "svd_kernels.hpp"
#include "twctv/gradient.hpp"
#include "twctv/shrinkage.hpp"

namespace twctv {

namespace {

Eigen::MatrixXd dct_matrix(int64_t n) {
  // Orthonormal DCT-II.
  Eigen::MatrixXd m(n, n);
  const double pi = std::numbers::pi;
  for (int64_t i = 0; i < n; ++i) {
    const double s = (i == 0) ? std::sqrt(1.0 / double(n)) : std::sqrt(2.0 / double(n));
    for (int64_t j = 0; j < n; ++j) m(i, j) = s * std::cos(pi * (2.0 * double(j) + 1.0) * double(i) / (2.0 * double(n)));
  }
  return m;
}

Eigen::MatrixXcd dft_matrix(int64_t n) {
  Eigen::MatrixXcd m(n, n);
  const double pi = std::numbers::pi;
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < n; ++j) {
      const double ang = -2.0 * pi * double(i) * double(j) / double(n);
      m(i, j) = std::complex<double>(std::cos(ang), std::sin(ang));
    }
  return m;
}

Eigen::MatrixXd haar_matrix(int64_t n) {
  Eigen::MatrixXd h(1, 1);
  h(0, 0) = 1.0;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int64_t m = 1; m < n; m *= 2) {
    Eigen::MatrixXd next(2 * m, 2 * m);
    for (int64_t i = 0; i < m; ++i) {
      for (int64_t j = 0; j < m; ++j) {
        next(i, 2 * j) = h(i, j) * inv_sqrt2;
        next(i, 2 * j + 1) = h(i, j) * inv_sqrt2;
      }
      for (int64_t j = 0; j < 2 * m; ++j) next(m + i, j) = 0.0;
      next(m + i, 2 * i) = inv_sqrt2;
      next(m + i, 2 * i + 1) = -inv_sqrt2;
    }
    h = std::move(next);
  }
  return h;
}

Eigen::MatrixXd random_orthogonal_matrix(int64_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int64_t i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

bool is_power_of_two(int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

void check_alpha_orthogonality(const Eigen::MatrixXcd& m, double alpha) {
  const int64_t n = m.rows();
  const Eigen::MatrixXcd gram = m * m.adjoint();
  const double dev = (gram - alpha * Eigen::MatrixXcd::Identity(n, n)).norm();
  if (dev > 1e-10 * alpha * double(n)) throw ParamError("transform matrix violates alpha-orthogonality");
}

// Trailing multi-index of a frontal slice, i3 fastest.
std::vector<int64_t> trailing_of_slice(const Shape& shape, int64_t slice) {
  std::vector<int64_t> idx(shape.size() - 2);
  int64_t rem = slice;
  for (size_t a = 0; a < idx.size(); ++a) {
    idx[a] = rem % shape[a + 2];
    rem /= shape[a + 2];
  }
  return idx;
}

// DFT-domain conjugate partner of a slice: every trailing index is negated
// modulo its extent.
int64_t conjugate_partner(const Shape& shape, int64_t slice) {
  std::vector<int64_t> idx = trailing_of_slice(shape, slice);
  for (size_t a = 0; a < idx.size(); ++a) {
    const int64_t n = shape[a + 2];
    idx[a] = (n - idx[a]) % n;
  }
  return frontal_index(shape, idx);
}

template <typename T>
TensorT<T> facewise_product(const TensorT<T>& xh, const TensorT<T>& yh) {
  const Shape& sx = xh.shape();
  const Shape& sy = yh.shape();
  Shape so = sx;
  so[1] = sy[1];
  TensorT<T> out(so);
  const int64_t nslices = num_frontal_slices(sx);
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
#pragma omp parallel for schedule(static)
  for (int64_t l = 0; l < nslices; ++l) {
    const Mat prod = frontal_slice(xh, l) * frontal_slice(yh, l);
    frontal_slice(out, l) = prod;
  }
  return out;
}

}  // namespace

TransformFamily transform_family_from_string(const std::string& name) {
  if (name == "dct") return TransformFamily::Dct;
  if (name == "dft") return TransformFamily::Dft;
  if (name == "haar") return TransformFamily::Haar;
  if (name == "rot") return TransformFamily::RandomOrthogonal;
  throw ParamError("unknown transform family: " + name);
}

std::string to_string(TransformFamily family) {
  switch (family) {
    case TransformFamily::Dct: return "dct";
    case TransformFamily::Dft: return "dft";
    case TransformFamily::Haar: return "haar";
    case TransformFamily::RandomOrthogonal: return "rot";
  }
  return "?";
}

TransformSpec build_transform(TransformFamily family, const Shape& shape, uint64_t seed) {
  if (shape.size() < 3) throw ParamError("transforms need order >= 3");
  TransformSpec spec;
  spec.family = family;
  spec.seed = seed;
  std::mt19937_64 rng(seed);
  double c = 1.0;
  for (size_t a = 2; a < shape.size(); ++a) {
    const int64_t n = shape[a];
    double alpha = 1.0;
    switch (family) {
      case TransformFamily::Dct:
        spec.mats.push_back(dct_matrix(n));
        break;
      case TransformFamily::Dft:
        spec.cmats.push_back(dft_matrix(n));
        alpha = double(n);
        break;
      case TransformFamily::Haar:
        if (!is_power_of_two(n))
          throw ParamError("haar transform needs power-of-two trailing extents, got " + std::to_string(n));
        spec.mats.push_back(haar_matrix(n));
        break;
      case TransformFamily::RandomOrthogonal:
        spec.mats.push_back(random_orthogonal_matrix(n, rng));
        break;
    }
    if (family == TransformFamily::Dft)
      check_alpha_orthogonality(spec.cmats.back(), alpha);
    else
      check_alpha_orthogonality(spec.mats.back().cast<std::complex<double>>(), alpha);
    spec.alphas.push_back(alpha);
    c *= alpha;
  }
  spec.norm_constant = c;
  return spec;
}

Tensor apply_transform(const Tensor& x, const TransformSpec& spec) {
  if (spec.is_complex()) throw ParamError("complex transform family needs apply_transform_complex");
  if (x.order() - 2 != spec.trailing_modes()) throw ShapeError("transform order mismatch");
  Tensor out = x;
  for (int k = 0; k < spec.trailing_modes(); ++k) out = mode_k_product(out, spec.mats[size_t(k)], k + 3);
  return out;
}

CTensor apply_transform_complex(const Tensor& x, const TransformSpec& spec) {
  if (x.order() - 2 != spec.trailing_modes()) throw ShapeError("transform order mismatch");
  CTensor out = complexify(x);
  for (int k = 0; k < spec.trailing_modes(); ++k) {
    if (spec.is_complex())
      out = mode_k_product(out, spec.cmats[size_t(k)], k + 3);
    else
      out = mode_k_product(out, spec.mats[size_t(k)], k + 3);
  }
  return out;
}

Tensor inverse_transform(const Tensor& xhat, const TransformSpec& spec) {
  if (spec.is_complex()) throw ParamError("complex transform family needs the complex inverse");
  if (xhat.order() - 2 != spec.trailing_modes()) throw ShapeError("transform order mismatch");
  Tensor out = xhat;
  for (int k = 0; k < spec.trailing_modes(); ++k) {
    const Eigen::MatrixXd inv = spec.mats[size_t(k)].transpose() / spec.alphas[size_t(k)];
    out = mode_k_product(out, inv, k + 3);
  }
  return out;
}

Tensor inverse_transform(const CTensor& xhat, const TransformSpec& spec) {
  if (xhat.order() - 2 != spec.trailing_modes()) throw ShapeError("transform order mismatch");
  CTensor out = xhat;
  for (int k = 0; k < spec.trailing_modes(); ++k) {
    if (spec.is_complex()) {
      const Eigen::MatrixXcd inv = spec.cmats[size_t(k)].adjoint() / spec.alphas[size_t(k)];
      out = mode_k_product(out, inv, k + 3);
    } else {
      const Eigen::MatrixXd inv = spec.mats[size_t(k)].transpose() / spec.alphas[size_t(k)];
      out = mode_k_product(out, inv, k + 3);
    }
  }
  return realify(out);
}

Tensor m_product(const Tensor& x, const Tensor& y, const TransformSpec& spec) {
  const Shape& sx = x.shape();
  const Shape& sy = y.shape();
  if (sx.size() != sy.size() || sx.size() < 3) throw ShapeError("m_product: order mismatch");
  if (sx[1] != sy[0]) throw ShapeError("m_product: inner dimension mismatch");
  for (size_t a = 2; a < sx.size(); ++a)
    if (sx[a] != sy[a]) throw ShapeError("m_product: trailing extent mismatch");

  if (spec.is_complex()) {
    const CTensor zh = facewise_product(apply_transform_complex(x, spec), apply_transform_complex(y, spec));
    return inverse_transform(zh, spec);
  }
  const Tensor zh = facewise_product(apply_transform(x, spec), apply_transform(y, spec));
  return inverse_transform(zh, spec);
}

Tensor m_identity(int64_t n, const Shape& shape_like, const TransformSpec& spec) {
  Shape s(shape_like);
  s[0] = n;
  s[1] = n;
  Tensor ihat(s);
  const int64_t nslices = num_frontal_slices(s);
  for (int64_t l = 0; l < nslices; ++l) frontal_slice(ihat, l) = Eigen::MatrixXd::Identity(n, n);
  if (spec.is_complex()) return inverse_transform(complexify(ihat), spec);
  return inverse_transform(ihat, spec);
}

Tensor tensor_transpose(const Tensor& x, const TransformSpec& spec) {
  Shape st = x.shape();
  std::swap(st[0], st[1]);
  const int64_t nslices = num_frontal_slices(x.shape());
  if (spec.is_complex()) {
    const CTensor xh = apply_transform_complex(x, spec);
    CTensor out(st);
    for (int64_t l = 0; l < nslices; ++l) {
      const Eigen::MatrixXcd t = frontal_slice(xh, l).adjoint();
      frontal_slice(out, l) = t;
    }
    return inverse_transform(out, spec);
  }
  const Tensor xh = apply_transform(x, spec);
  Tensor out(st);
  for (int64_t l = 0; l < nslices; ++l) {
    const Eigen::MatrixXd t = frontal_slice(xh, l).transpose();
    frontal_slice(out, l) = t;
  }
  return inverse_transform(out, spec);
}

namespace {

}  // namespace

MSvdFactors m_svd(const Tensor& x, const TransformSpec& spec) {
  const Shape& s = x.shape();
  const int64_t n1 = s[0], n2 = s[1];
  const int64_t nslices = num_frontal_slices(s);
  Shape su = s, sv = s;
  su[1] = n1;
  sv[0] = n2;

  std::vector<Eigen::VectorXd> sigmas(static_cast<size_t>(nslices));
  MSvdFactors out;

  if (!spec.is_complex()) {
    const Tensor xh = apply_transform(x, spec);
    Tensor uh(su), sh(s), vh(sv);
#pragma omp parallel for schedule(dynamic)
    for (int64_t l = 0; l < nslices; ++l) {
      const detail::RealSvd f = detail::svd_real(frontal_slice(xh, l), false);
      frontal_slice(uh, l) = f.u;
      frontal_slice(vh, l) = f.v;
      Eigen::MatrixXd sd = Eigen::MatrixXd::Zero(n1, n2);
      for (int64_t i = 0; i < f.s.size(); ++i) sd(i, i) = f.s(i);
      frontal_slice(sh, l) = sd;
      sigmas[size_t(l)] = f.s;
    }
    out.u = inverse_transform(uh, spec);
    out.s = inverse_transform(sh, spec);
    out.v = inverse_transform(vh, spec);
  } else {
    const CTensor xh = apply_transform_complex(x, spec);
    CTensor uh(su), sh(s), vh(sv);
    // SVD only the canonical half of the conjugate-paired slices; the partner
    // factors are the conjugates, which keeps the inverse transform real.
    std::vector<int64_t> canonical;
    canonical.reserve(size_t(nslices));
    for (int64_t l = 0; l < nslices; ++l)
      if (conjugate_partner(s, l) >= l) canonical.push_back(l);
#pragma omp parallel for schedule(dynamic)
    for (size_t ci = 0; ci < canonical.size(); ++ci) {
      const int64_t l = canonical[ci];
      const int64_t lp = conjugate_partner(s, l);
      detail::ComplexSvd f;
      if (lp == l) {
        // Self-paired slices are real up to rounding; a real SVD avoids the
        // arbitrary unit phases a complex SVD would attach to the factors.
        const detail::RealSvd fr = detail::svd_real(frontal_slice(xh, l).real(), false);
        f.u = fr.u.cast<std::complex<double>>();
        f.v = fr.v.cast<std::complex<double>>();
        f.s = fr.s;
      } else {
        f = detail::svd_complex(frontal_slice(xh, l), false);
      }
      Eigen::MatrixXcd sd = Eigen::MatrixXcd::Zero(n1, n2);
      for (int64_t i = 0; i < f.s.size(); ++i) sd(i, i) = f.s(i);
      frontal_slice(uh, l) = f.u;
      frontal_slice(vh, l) = f.v;
      frontal_slice(sh, l) = sd;
      sigmas[size_t(l)] = f.s;
      if (lp != l) {
        frontal_slice(uh, lp) = f.u.conjugate();
        frontal_slice(vh, lp) = f.v.conjugate();
        frontal_slice(sh, lp) = sd;
        sigmas[size_t(lp)] = f.s;
      }
    }
    out.u = inverse_transform(uh, spec);
    out.s = inverse_transform(sh, spec);
    out.v = inverse_transform(vh, spec);
  }

  out.tubal_rank = tubal_rank_from_singular_values(sigmas);
  return out;
}

Tensor msvd_reconstruct(const MSvdFactors& f, const TransformSpec& spec) {
  return m_product(m_product(f.u, f.s, spec), tensor_transpose(f.v, spec), spec);
}

std::vector<Eigen::VectorXd> slice_singular_values(const Tensor& x, const TransformSpec& spec) {
  const Shape& s = x.shape();
  const int64_t nslices = num_frontal_slices(s);
  std::vector<Eigen::VectorXd> sigmas(static_cast<size_t>(nslices));
  if (!spec.is_complex()) {
    const Tensor xh = apply_transform(x, spec);
#pragma omp parallel for schedule(dynamic)
    for (int64_t l = 0; l < nslices; ++l)
      sigmas[size_t(l)] = detail::singular_values_real(frontal_slice(xh, l));
  } else {
    const CTensor xh = apply_transform_complex(x, spec);
#pragma omp parallel for schedule(dynamic)
    for (int64_t l = 0; l < nslices; ++l)
      sigmas[size_t(l)] = detail::singular_values_complex(frontal_slice(xh, l));
  }
  return sigmas;
}

int tubal_rank_from_singular_values(const std::vector<Eigen::VectorXd>& sigmas, double rel_tol) {
  double sigma_max = 0.0;
  for (const auto& sig : sigmas)
    if (sig.size() > 0) sigma_max = std::max(sigma_max, sig(0));
  if (sigma_max <= 0.0) return 0;
  const double cut = rel_tol * sigma_max;
  int64_t nmin = sigmas.empty() ? 0 : sigmas.front().size();
  int rank = 0;
  for (int64_t i = 0; i < nmin; ++i) {
    bool nonzero = false;
    for (const auto& sig : sigmas)
      if (i < sig.size() && sig(i) > cut) {
        nonzero = true;
        break;
      }
    rank += nonzero ? 1 : 0;
  }
  return rank;
}

double weighted_schatten_p_norm(const Tensor& x, const Tensor& weights, double p, const TransformSpec& spec) {
  if (!(p > 0.0 && p <= 1.0)) throw ParamError("schatten exponent p must lie in (0,1]");
  const bool unit_weights = weights.numel() == 0;
  if (!unit_weights && !same_shape(weights.shape(), x.shape()))
    throw ShapeError("weight tensor shape mismatch");
  const std::vector<Eigen::VectorXd> sigmas = slice_singular_values(x, spec);
  const int64_t nslices = static_cast<int64_t>(sigmas.size());
  std::vector<double> terms;
  terms.reserve(size_t(nslices));
  for (int64_t l = 0; l < nslices; ++l) {
    const Eigen::VectorXd& sig = sigmas[size_t(l)];
    double acc = 0.0;
    for (int64_t i = 0; i < sig.size(); ++i) {
      double w = 1.0;
      if (!unit_weights) {
        w = frontal_slice(weights, l)(i, i);
        if (!(w > 0.0 && w <= 1.0)) throw ParamError("schatten weights must lie in (0,1]");
      }
      acc += w * std::pow(sig(i), p);
    }
    terms.push_back(acc);
  }
  const double total = pairwise_sum(terms.data(), nslices) / std::sqrt(spec.norm_constant);
  return std::pow(total, 1.0 / p);
}

double tv_norm(const Tensor& x, const std::vector<int>& modes) {
  if (modes.empty()) throw ParamError("tv_norm: empty mode set");
  double total = 0.0;
  for (int k : modes) total += l1_norm(grad(x, k));
  return total;
}

double twctv_norm(const Tensor& x, const Tensor& weights, double p, const std::vector<int>& modes,
                  const TransformSpec& spec, double sigmoid_m) {
  if (modes.empty()) throw ParamError("twctv_norm: empty mode set");
  if (!(p > 0.0 && p <= 1.0)) throw ParamError("schatten exponent p must lie in (0,1]");
  double total = 0.0;
  for (int k : modes) {
    const Tensor g = grad(x, k);
    if (weights.numel() > 0) {
      total += weighted_schatten_p_norm(g, weights, p, spec);
      continue;
    }
    const std::vector<Eigen::VectorXd> sigmas = slice_singular_values(g, spec);
    std::vector<double> terms;
    terms.reserve(sigmas.size());
    for (const auto& sig : sigmas) {
      const Eigen::VectorXd w = sv_sigmoid_weights(sig, sigmoid_m);
      double acc = 0.0;
      for (int64_t i = 0; i < sig.size(); ++i) acc += w(i) * std::pow(sig(i), p);
      terms.push_back(acc);
    }
    const double sum = pairwise_sum(terms.data(), static_cast<int64_t>(terms.size()));
    total += std::pow(sum / std::sqrt(spec.norm_constant), 1.0 / p);
  }
  return total / double(modes.size());
}

}  // namespace twctv
