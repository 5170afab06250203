#ifndef TWCTV_TENSOR_IO_HPP
#define TWCTV_TENSOR_IO_HPP

#include <string>

#include "twctv/tensor.hpp"

namespace twctv {

// Flat binary tensor file:
//   bytes 0..3   magic "TLT1"
//   u32 LE       element type: 0 = f64, 1 = f32
//   u64 LE       order d
//   d x u64 LE   extents
//   payload      row-major values, little-endian
// f64 round trips are bitwise exact; f32 files read back as doubles.
Tensor read_tensor(const std::string& path, bool* was_f32 = nullptr);
void write_tensor(const std::string& path, const Tensor& x, bool as_f32 = false);

// FNV-1a 64-bit digest of a file, hex encoded (manifest provenance).
std::string file_digest(const std::string& path);

}  // namespace twctv

#endif
