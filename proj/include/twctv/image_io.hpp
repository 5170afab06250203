#ifndef TWCTV_IMAGE_IO_HPP
#define TWCTV_IMAGE_IO_HPP

#include <string>

#include "twctv/tensor.hpp"

namespace twctv {

// 8-bit PNG in, h x w x channels tensor out with values scaled to [0,1].
// Grayscale reads as h x w x 1; alpha channels are dropped; palettes expand
// to RGB; 16-bit files are rejected.
Tensor read_image(const std::string& path);

// Writes h x w x 1 (grayscale) or h x w x 3 (RGB); values are clamped to
// [0,1] and quantized to 8 bits.
void write_image(const std::string& path, const Tensor& x);

}  // namespace twctv

#endif
