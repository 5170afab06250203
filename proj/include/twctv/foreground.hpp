#ifndef TWCTV_FOREGROUND_HPP
#define TWCTV_FOREGROUND_HPP

#include "twctv/tensor.hpp"

namespace twctv {

// Per frontal slice of a sparse component: binary mask |entry| > std(slice),
// followed by a window x window median filter (replicate padding) on the
// binary mask. Returns a 0/1 tensor of the same shape. Window must be odd.
Tensor foreground_mask(const Tensor& e, int window = 5);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

// Entries above 0.5 count as positive; empty denominators yield 0.
PrecisionRecall precision_recall_f(const Tensor& mask, const Tensor& truth);

}  // namespace twctv

#endif
