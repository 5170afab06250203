#include "twctv/tensor_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace twctv {

namespace {

constexpr std::array<char, 4> kMagic = {'T', 'L', 'T', '1'};
constexpr uint32_t kF64 = 0;
constexpr uint32_t kF32 = 1;
constexpr uint64_t kMaxOrder = 16;

void put_u32(std::ostream& os, uint32_t v) {
  std::array<unsigned char, 4> b;
  for (int i = 0; i < 4; ++i) b[size_t(i)] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b.data()), 4);
}

void put_u64(std::ostream& os, uint64_t v) {
  std::array<unsigned char, 8> b;
  for (int i = 0; i < 8; ++i) b[size_t(i)] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b.data()), 8);
}

uint32_t get_u32(std::istream& is) {
  std::array<unsigned char, 4> b;
  if (!is.read(reinterpret_cast<char*>(b.data()), 4)) throw IoError("tensor file truncated in header");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= uint32_t(b[size_t(i)]) << (8 * i);
  return v;
}

uint64_t get_u64(std::istream& is) {
  std::array<unsigned char, 8> b;
  if (!is.read(reinterpret_cast<char*>(b.data()), 8)) throw IoError("tensor file truncated in header");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t(b[size_t(i)]) << (8 * i);
  return v;
}

}  // namespace

Tensor read_tensor(const std::string& path, bool* was_f32) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open tensor file: " + path);
  std::array<char, 4> magic;
  if (!is.read(magic.data(), 4) || magic != kMagic) throw IoError("bad magic in tensor file: " + path);
  const uint32_t dtype = get_u32(is);
  if (dtype != kF64 && dtype != kF32) throw IoError("unknown element type in tensor file: " + path);
  const uint64_t order = get_u64(is);
  if (order < 1 || order > kMaxOrder) throw IoError("implausible tensor order in file: " + path);
  Shape shape(order);
  uint64_t numel = 1;
  for (uint64_t a = 0; a < order; ++a) {
    const uint64_t e = get_u64(is);
    if (e == 0 || e > (uint64_t(1) << 32)) throw IoError("implausible extent in tensor file: " + path);
    if (numel > (uint64_t(1) << 42) / e) throw IoError("tensor file shape overflows: " + path);
    numel *= e;
    shape[a] = static_cast<int64_t>(e);
  }

  std::vector<double> values(numel);
  if (dtype == kF64) {
    if (!is.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(numel * 8)))
      throw IoError("tensor file payload truncated: " + path);
  } else {
    std::vector<float> raw(numel);
    if (!is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(numel * 4)))
      throw IoError("tensor file payload truncated: " + path);
    for (uint64_t i = 0; i < numel; ++i) values[i] = double(raw[i]);
  }
  // Trailing garbage means the writer and reader disagree about the shape.
  is.peek();
  if (!is.eof()) throw IoError("tensor file has trailing bytes: " + path);
  if (was_f32) *was_f32 = dtype == kF32;
  return Tensor(std::move(shape), std::move(values));
}

void write_tensor(const std::string& path, const Tensor& x, bool as_f32) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot create tensor file: " + path);
  os.write(kMagic.data(), 4);
  put_u32(os, as_f32 ? kF32 : kF64);
  put_u64(os, uint64_t(x.order()));
  for (int64_t e : x.shape()) put_u64(os, uint64_t(e));
  if (as_f32) {
    std::vector<float> raw(size_t(x.numel()));
    for (int64_t i = 0; i < x.numel(); ++i) raw[size_t(i)] = static_cast<float>(x[i]);
    os.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * 4));
  } else {
    os.write(reinterpret_cast<const char*>(x.data()), static_cast<std::streamsize>(x.numel() * 8));
  }
  if (!os) throw IoError("failed writing tensor file: " + path);
}

std::string file_digest(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open file for digest: " + path);
  uint64_t h = 0xcbf29ce484222325ULL;
  std::array<char, 65536> buf;
  while (is) {
    is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const std::streamsize got = is.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[size_t(i)]);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace twctv
