#include "twctv/foreground.hpp"

#include <algorithm>
#include <cmath>

namespace twctv {

Tensor foreground_mask(const Tensor& e, int window) {
  if (window < 1 || window % 2 == 0) throw ParamError("median filter window must be odd");
  const Shape& s = e.shape();
  const int64_t h = s[0], w = s[1];
  const int64_t nslices = num_frontal_slices(s);
  const int r = window / 2;
  const int majority = (window * window) / 2 + 1;

  Tensor out(s);
#pragma omp parallel for schedule(static)
  for (int64_t l = 0; l < nslices; ++l) {
    const auto slice = frontal_slice(e, l);
    double mean = 0.0;
    for (int64_t i = 0; i < h; ++i)
      for (int64_t j = 0; j < w; ++j) mean += slice(i, j);
    mean /= double(h * w);
    double var = 0.0;
    for (int64_t i = 0; i < h; ++i)
      for (int64_t j = 0; j < w; ++j) {
        const double d = slice(i, j) - mean;
        var += d * d;
      }
    const double sd = std::sqrt(var / double(h * w));

    Eigen::Matrix<uint8_t, Eigen::Dynamic, Eigen::Dynamic> binary(h, w);
    for (int64_t i = 0; i < h; ++i)
      for (int64_t j = 0; j < w; ++j) binary(i, j) = std::abs(slice(i, j)) > sd ? 1 : 0;

    auto out_slice = frontal_slice(out, l);
    for (int64_t i = 0; i < h; ++i)
      for (int64_t j = 0; j < w; ++j) {
        int ones = 0;
        for (int di = -r; di <= r; ++di)
          for (int dj = -r; dj <= r; ++dj) {
            const int64_t ii = std::clamp<int64_t>(i + di, 0, h - 1);
            const int64_t jj = std::clamp<int64_t>(j + dj, 0, w - 1);
            ones += binary(ii, jj);
          }
        out_slice(i, j) = ones >= majority ? 1.0 : 0.0;
      }
  }
  return out;
}

PrecisionRecall precision_recall_f(const Tensor& mask, const Tensor& truth) {
  if (!same_shape(mask.shape(), truth.shape())) throw ShapeError("precision/recall: shape mismatch");
  int64_t tp = 0, fp = 0, fn = 0;
  for (int64_t i = 0; i < mask.numel(); ++i) {
    const bool m = mask[i] > 0.5;
    const bool t = truth[i] > 0.5;
    tp += m && t;
    fp += m && !t;
    fn += !m && t;
  }
  PrecisionRecall pr;
  pr.precision = tp + fp > 0 ? double(tp) / double(tp + fp) : 0.0;
  pr.recall = tp + fn > 0 ? double(tp) / double(tp + fn) : 0.0;
  pr.f_measure = pr.precision + pr.recall > 0.0
                     ? 2.0 * pr.precision * pr.recall / (pr.precision + pr.recall)
                     : 0.0;
  return pr;
}

}  // namespace twctv
