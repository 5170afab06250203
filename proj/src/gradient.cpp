#include "twctv/gradient.hpp"

#include <cmath>
#include <numbers>

#include <fftw3.h>

namespace twctv {

namespace {

struct ModeView {
  int64_t outer, n, inner;
};

ModeView mode_view(const Shape& s, int mode) {
  const int d = static_cast<int>(s.size());
  if (mode < 1 || mode > d) throw ShapeError("mode out of range");
  ModeView v{1, s[size_t(mode - 1)], 1};
  for (int a = mode; a < d; ++a) v.inner *= s[size_t(a)];
  for (int a = 0; a < mode - 1; ++a) v.outer *= s[size_t(a)];
  return v;
}

template <int Shift>  // +1 forward difference, -1 adjoint
Tensor cyclic_difference(const Tensor& x, int mode) {
  const ModeView v = mode_view(x.shape(), mode);
  Tensor out(x.shape());
  const double* in = x.data();
  double* o = out.data();
#pragma omp parallel for schedule(static)
  for (int64_t b = 0; b < v.outer; ++b) {
    const int64_t base = b * v.n * v.inner;
    for (int64_t r = 0; r < v.n; ++r) {
      const int64_t rs = (r + Shift + v.n) % v.n;
      const double* src = in + base + rs * v.inner;
      const double* cur = in + base + r * v.inner;
      double* dst = o + base + r * v.inner;
      for (int64_t i = 0; i < v.inner; ++i) dst[i] = src[i] - cur[i];
    }
  }
  return out;
}

}  // namespace

Tensor grad(const Tensor& x, int mode) { return cyclic_difference<+1>(x, mode); }

Tensor grad_adjoint(const Tensor& x, int mode) { return cyclic_difference<-1>(x, mode); }

double circulant_symbol(int64_t n, int64_t j) {
  return 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi * double(j) / double(n));
}

struct SpectrumCache::Fft {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<std::complex<double>> buf;

  explicit Fft(const Shape& shape) {
    const int64_t n = shape_numel(shape);
    buf.resize(size_t(n));
    std::vector<int> dims(shape.begin(), shape.end());
    auto* raw = reinterpret_cast<fftw_complex*>(buf.data());
    // FFTW_ESTIMATE keeps planning deterministic and leaves the buffer intact.
    forward = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!forward || !backward) throw NumericError("fftw plan creation failed");
  }
  ~Fft() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

SpectrumCache::SpectrumCache(const Shape& shape, const std::vector<int>& modes)
    : shape_(shape), modes_(modes), denom_(size_t(shape_numel(shape)), 1.0), fft_(std::make_unique<Fft>(shape)) {
  for (int k : modes_) {
    const ModeView v = mode_view(shape_, k);
    for (int64_t b = 0; b < v.outer; ++b)
      for (int64_t r = 0; r < v.n; ++r) {
        const double sym = circulant_symbol(v.n, r);
        double* row = denom_.data() + (b * v.n + r) * v.inner;
        for (int64_t i = 0; i < v.inner; ++i) row[i] += sym;
      }
  }
}

SpectrumCache::~SpectrumCache() = default;

Tensor solve_x_subproblem(const Tensor& rhs_data, const std::vector<Tensor>& grad_targets,
                          const SpectrumCache& cache) {
  if (!same_shape(rhs_data.shape(), cache.shape())) throw ShapeError("x-subproblem: cache shape mismatch");
  if (grad_targets.size() != cache.modes().size())
    throw ShapeError("x-subproblem: one gradient target per cached mode expected");
  if (cache.modes().empty()) return rhs_data;

  Tensor total = rhs_data;
  for (size_t i = 0; i < grad_targets.size(); ++i) {
    const Tensor adj = grad_adjoint(grad_targets[i], cache.modes()[i]);
    for (int64_t j = 0; j < total.numel(); ++j) total[j] += adj[j];
  }

  auto& fft = cache.fft();
  const int64_t n = total.numel();
  for (int64_t j = 0; j < n; ++j) fft.buf[size_t(j)] = total[j];
  fftw_execute(fft.forward);
  const std::vector<double>& denom = cache.denominator();
  for (int64_t j = 0; j < n; ++j) fft.buf[size_t(j)] /= denom[size_t(j)];
  fftw_execute(fft.backward);

  CTensor out(rhs_data.shape());
  const double inv_n = 1.0 / double(n);
  for (int64_t j = 0; j < n; ++j) out[j] = fft.buf[size_t(j)] * inv_n;
  return realify(out);
}

}  // namespace twctv
