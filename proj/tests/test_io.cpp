#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "twctv/image_io.hpp"
#include "twctv/tensor_io.hpp"

using namespace twctv;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("twctv_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

Tensor random_tensor(const Shape& shape, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Tensor t(shape);
  for (int64_t i = 0; i < t.numel(); ++i) t[i] = gauss(rng);
  return t;
}

}  // namespace

TEST_CASE("tensor file round trip is bitwise exact for f64") {
  TempDir tmp;
  const Tensor x = random_tensor({5, 4, 3, 2}, 1);
  write_tensor(tmp.file("x.tlt"), x);
  bool was_f32 = true;
  const Tensor y = read_tensor(tmp.file("x.tlt"), &was_f32);
  CHECK_FALSE(was_f32);
  REQUIRE(y.shape() == x.shape());
  CHECK(std::memcmp(y.data(), x.data(), size_t(x.numel()) * 8) == 0);
}

TEST_CASE("f32 tensor files round and flag") {
  TempDir tmp;
  const Tensor x = random_tensor({4, 4, 2}, 2);
  write_tensor(tmp.file("x32.tlt"), x, /*as_f32=*/true);
  bool was_f32 = false;
  const Tensor y = read_tensor(tmp.file("x32.tlt"), &was_f32);
  CHECK(was_f32);
  for (int64_t i = 0; i < x.numel(); ++i) CHECK(y[i] == doctest::Approx(x[i]).epsilon(1e-6));
}

TEST_CASE("corrupt tensor files are rejected") {
  TempDir tmp;
  const Tensor x = random_tensor({4, 4, 2}, 3);
  write_tensor(tmp.file("x.tlt"), x);

  {
    std::ifstream in(tmp.file("x.tlt"), std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::ofstream out(tmp.file("trunc.tlt"), std::ios::binary);
    out.write(bytes.data(), std::streamsize(bytes.size() - 16));
  }
  CHECK_THROWS_AS(read_tensor(tmp.file("trunc.tlt")), IoError);

  {
    std::ofstream out(tmp.file("magic.tlt"), std::ios::binary);
    out << "NOPE" << std::string(64, '\0');
  }
  CHECK_THROWS_AS(read_tensor(tmp.file("magic.tlt")), IoError);

  {
    std::ifstream in(tmp.file("x.tlt"), std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    bytes.push_back('x');
    std::ofstream out(tmp.file("extra.tlt"), std::ios::binary);
    out.write(bytes.data(), std::streamsize(bytes.size()));
  }
  CHECK_THROWS_AS(read_tensor(tmp.file("extra.tlt")), IoError);

  CHECK_THROWS_AS(read_tensor(tmp.file("missing.tlt")), IoError);
}

TEST_CASE("file digest is stable and content sensitive") {
  TempDir tmp;
  write_tensor(tmp.file("a.tlt"), random_tensor({3, 3, 2}, 4));
  write_tensor(tmp.file("b.tlt"), random_tensor({3, 3, 2}, 5));
  CHECK(file_digest(tmp.file("a.tlt")) == file_digest(tmp.file("a.tlt")));
  CHECK(file_digest(tmp.file("a.tlt")) != file_digest(tmp.file("b.tlt")));
}

TEST_CASE("png round trip stays within quantization error") {
  TempDir tmp;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Tensor img({9, 7, 3});
  for (int64_t i = 0; i < img.numel(); ++i) img[i] = uni(rng);
  write_image(tmp.file("img.png"), img);
  const Tensor back = read_image(tmp.file("img.png"));
  REQUIRE(back.shape() == img.shape());
  for (int64_t i = 0; i < img.numel(); ++i) CHECK(std::abs(back[i] - img[i]) <= 0.5 / 255.0 + 1e-12);
}

TEST_CASE("grayscale png reads as h x w x 1") {
  TempDir tmp;
  Tensor gray({6, 5, 1});
  for (int64_t i = 0; i < gray.numel(); ++i) gray[i] = 0.42;
  write_image(tmp.file("gray.png"), gray);
  const Tensor back = read_image(tmp.file("gray.png"));
  REQUIRE(back.shape() == Shape{6, 5, 1});
  for (int64_t i = 0; i < back.numel(); ++i) CHECK(back[i] == doctest::Approx(0.42).epsilon(0.01));
}

TEST_CASE("image io rejects bad inputs") {
  TempDir tmp;
  CHECK_THROWS_AS(read_image(tmp.file("missing.png")), IoError);
  write_tensor(tmp.file("not_png.png"), random_tensor({3, 3, 3}, 7));
  CHECK_THROWS_AS(read_image(tmp.file("not_png.png")), IoError);
  CHECK_THROWS_AS(write_image(tmp.file("bad.png"), random_tensor({3, 3, 2}, 8)), ParamError);
}
