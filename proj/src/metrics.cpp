#include "twctv/metrics.hpp"

#include <cmath>
#include <limits>

namespace twctv {

double relative_error(const Tensor& est, const Tensor& ref) {
  if (!same_shape(est.shape(), ref.shape())) throw ShapeError("relative_error: shape mismatch");
  const double ref_norm = frobenius_norm(ref);
  if (ref_norm == 0.0) throw ParamError("relative_error: zero reference tensor");
  return frobenius_norm(sub(est, ref)) / ref_norm;
}

double psnr(const Tensor& est, const Tensor& ref, double peak) {
  if (!same_shape(est.shape(), ref.shape())) throw ShapeError("psnr: shape mismatch");
  if (!(peak > 0.0)) throw ParamError("psnr: peak must be positive");
  const double err = frobenius_norm(sub(est, ref));
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak * double(est.numel()) / (err * err));
}

double ergas(const Tensor& est, const Tensor& ref, int* skipped_bands) {
  if (!same_shape(est.shape(), ref.shape())) throw ShapeError("ergas: shape mismatch");
  const Shape& s = ref.shape();
  if (s.size() < 3) throw ShapeError("ergas needs order >= 3");
  const int64_t bands = s[2];
  int64_t inner = 1;
  for (size_t a = 3; a < s.size(); ++a) inner *= s[a];
  const int64_t outer = s[0] * s[1];
  const int64_t band_count = outer * inner;

  double acc = 0.0;
  int used = 0, skipped = 0;
  for (int64_t b = 0; b < bands; ++b) {
    double sq = 0.0, mean = 0.0;
    for (int64_t o = 0; o < outer; ++o) {
      const int64_t base = (o * bands + b) * inner;
      for (int64_t i = 0; i < inner; ++i) {
        const double d = est[base + i] - ref[base + i];
        sq += d * d;
        mean += ref[base + i];
      }
    }
    mean /= double(band_count);
    if (mean == 0.0) {
      ++skipped;
      continue;
    }
    const double rmse = std::sqrt(sq / double(band_count));
    acc += (rmse / mean) * (rmse / mean);
    ++used;
  }
  if (skipped_bands) *skipped_bands = skipped;
  if (used == 0) throw ParamError("ergas: every band has zero reference mean");
  return 100.0 * std::sqrt(acc / double(used));
}

}  // namespace twctv
