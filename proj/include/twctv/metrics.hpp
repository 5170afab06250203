#ifndef TWCTV_METRICS_HPP
#define TWCTV_METRICS_HPP

#include <optional>

#include "twctv/tensor.hpp"

namespace twctv {

// ||est - ref||_F / ||ref||_F; throws on a zero reference.
double relative_error(const Tensor& est, const Tensor& ref);

// 10 log10(peak^2 N / ||est - ref||_F^2); +infinity when the inputs match.
double psnr(const Tensor& est, const Tensor& ref, double peak = 1.0);

// 100 sqrt((1/B) sum_b (RMSE_b / mean_b)^2) over mode-3 bands of the
// reference; bands with zero reference mean are skipped (count reported via
// skipped_bands when given).
double ergas(const Tensor& est, const Tensor& ref, int* skipped_bands = nullptr);

struct MetricsRecord {
  std::optional<double> relative_error;
  std::optional<double> psnr_db;   // unset when infinite
  bool psnr_infinite = false;
  std::optional<double> ergas;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f_measure;
};

}  // namespace twctv

#endif
