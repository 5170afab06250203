#include <doctest.h>

#include <random>

#include "twctv/tensor.hpp"

using namespace twctv;

namespace {

Tensor random_tensor(const Shape& shape, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Tensor t(shape);
  for (int64_t i = 0; i < t.numel(); ++i) t[i] = gauss(rng);
  return t;
}

// Direct triple-loop contraction, the independent oracle for mode products.
Tensor mode_product_oracle(const Tensor& x, const Eigen::MatrixXd& u, int mode) {
  const Shape& s = x.shape();
  const int d = static_cast<int>(s.size());
  Tensor out(s);
  std::vector<int64_t> idx(size_t(d), 0);
  for (int64_t flat = 0; flat < x.numel(); ++flat) {
    int64_t rem = flat;
    for (int a = d - 1; a >= 0; --a) {
      idx[size_t(a)] = rem % s[size_t(a)];
      rem /= s[size_t(a)];
    }
    double acc = 0.0;
    std::vector<int64_t> src = idx;
    for (int64_t l = 0; l < s[size_t(mode - 1)]; ++l) {
      src[size_t(mode - 1)] = l;
      int64_t off = 0;
      for (int a = 0; a < d; ++a) off = off * s[size_t(a)] + src[size_t(a)];
      acc += x[off] * u(idx[size_t(mode - 1)], l);
    }
    out[flat] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("mode_k_product identity and permutation") {
  const Tensor x = random_tensor({2, 2, 2}, 1);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
  CHECK(max_abs_diff(mode_k_product(x, eye, 3), x) == 0.0);

  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  const Tensor y = mode_k_product(x, swap, 3);
  for (int64_t i = 0; i < 2; ++i)
    for (int64_t j = 0; j < 2; ++j) {
      CHECK(y[i * 4 + j * 2 + 0] == x[i * 4 + j * 2 + 1]);
      CHECK(y[i * 4 + j * 2 + 1] == x[i * 4 + j * 2 + 0]);
    }
}

TEST_CASE("mode_k_product matches the entrywise oracle") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Tensor x = random_tensor({3, 2, 2}, 2);
  for (int mode = 1; mode <= 3; ++mode) {
    const int64_t n = x.shape()[size_t(mode - 1)];
    Eigen::MatrixXd u(n, n);
    for (int64_t i = 0; i < n; ++i)
      for (int64_t j = 0; j < n; ++j) u(i, j) = gauss(rng);
    const Tensor got = mode_k_product(x, u, mode);
    const Tensor want = mode_product_oracle(x, u, mode);
    CHECK(max_abs_diff(got, want) < 1e-12);
  }
}

TEST_CASE("mode_k_product composes and commutes across modes") {
  const Tensor x = random_tensor({4, 3, 2}, 3);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_matrix = [&](int64_t n) {
    Eigen::MatrixXd m(n, n);
    for (int64_t i = 0; i < n; ++i)
      for (int64_t j = 0; j < n; ++j) m(i, j) = gauss(rng);
    return m;
  };
  const Eigen::MatrixXd a = random_matrix(4), b = random_matrix(4);
  const Tensor lhs = mode_k_product(mode_k_product(x, a, 1), b, 1);
  const Tensor rhs = mode_k_product(x, Eigen::MatrixXd(b * a), 1);
  CHECK(max_abs_diff(lhs, rhs) < 1e-12 * linf_norm(rhs));

  const Eigen::MatrixXd c = random_matrix(3);
  const Tensor order1 = mode_k_product(mode_k_product(x, a, 1), c, 2);
  const Tensor order2 = mode_k_product(mode_k_product(x, c, 2), a, 1);
  CHECK(max_abs_diff(order1, order2) < 1e-12 * linf_norm(order1));
}

TEST_CASE("mode_k_product rejects mismatched matrices") {
  const Tensor x = random_tensor({3, 2, 2}, 4);
  const Eigen::MatrixXd wrong = Eigen::MatrixXd::Identity(4, 4);
  CHECK_THROWS_AS(mode_k_product(x, wrong, 1), ShapeError);
  CHECK_THROWS_AS(mode_k_product(x, wrong, 5), ShapeError);
}

TEST_CASE("project masks entries and is idempotent") {
  const Shape shape{3, 3, 2};
  const Tensor x = random_tensor(shape, 5);
  CHECK(max_abs_diff(project(x, ObservationMask::all_observed(shape)), x) == 0.0);
  CHECK(frobenius_norm(project(x, ObservationMask::none_observed(shape))) == 0.0);

  ObservationMask omega = ObservationMask::none_observed(shape);
  std::mt19937_64 rng(6);
  for (int64_t i = 0; i < omega.numel(); ++i) omega.set(i, rng() % 2 == 0);
  const Tensor once = project(x, omega);
  CHECK(max_abs_diff(project(once, omega), once) == 0.0);

  const Tensor other = random_tensor({3, 3, 3}, 7);
  CHECK_THROWS_AS(project(other, omega), ShapeError);
}

TEST_CASE("norms on a hand-worked tensor") {
  // 2 x 2 x 1 tensor [[3,4],[0,0]]
  const Tensor x({2, 2, 1}, {3, 4, 0, 0});
  CHECK(frobenius_norm(x) == doctest::Approx(5.0));
  CHECK(l1_norm(x) == doctest::Approx(7.0));
  CHECK(linf_norm(x) == doctest::Approx(4.0));

  const Tensor zero({2, 2, 2});
  CHECK(frobenius_norm(zero) == 0.0);
  CHECK(l1_norm(zero) == 0.0);
  CHECK(linf_norm(zero) == 0.0);
}

TEST_CASE("norms are absolutely homogeneous") {
  const Tensor x = random_tensor({4, 3, 2}, 8);
  const double alpha = -2.375;  // exactly representable
  const Tensor ax = scale(x, alpha);
  CHECK(frobenius_norm(ax) == doctest::Approx(std::abs(alpha) * frobenius_norm(x)));
  CHECK(l1_norm(ax) == doctest::Approx(std::abs(alpha) * l1_norm(x)));
  CHECK(linf_norm(ax) == doctest::Approx(std::abs(alpha) * linf_norm(x)));
}

TEST_CASE("frobenius norm equals the sum of squares") {
  const Tensor x = random_tensor({5, 4, 3}, 9);
  double acc = 0.0;
  for (int64_t i = 0; i < x.numel(); ++i) acc += x[i] * x[i];
  CHECK(frobenius_norm(x) * frobenius_norm(x) == doctest::Approx(acc).epsilon(1e-14));
}

TEST_CASE("frontal slice flattening is a bijection") {
  const Shape shape{2, 3, 3, 4, 2};
  const int64_t nslices = num_frontal_slices(shape);
  CHECK(nslices == 24);
  std::vector<int> seen(size_t(nslices), 0);
  for (int64_t i3 = 0; i3 < 3; ++i3)
    for (int64_t i4 = 0; i4 < 4; ++i4)
      for (int64_t i5 = 0; i5 < 2; ++i5) {
        const int64_t j = frontal_index(shape, {i3, i4, i5});
        REQUIRE(j >= 0);
        REQUIRE(j < nslices);
        ++seen[size_t(j)];
      }
  for (int c : seen) CHECK(c == 1);
  // i3 varies fastest
  CHECK(frontal_index(shape, {1, 0, 0}) == 1);
  CHECK(frontal_index(shape, {0, 1, 0}) == 3);
  CHECK(frontal_index(shape, {0, 0, 1}) == 12);
}

TEST_CASE("frontal slice views address the right entries") {
  const Shape shape{2, 3, 2, 2};
  Tensor x(shape);
  for (int64_t i = 0; i < x.numel(); ++i) x[i] = double(i);
  // slice j = (i4)*? -- spec order: j = i3 + n3*i4
  for (int64_t i3 = 0; i3 < 2; ++i3)
    for (int64_t i4 = 0; i4 < 2; ++i4) {
      const auto slice = frontal_slice(x, frontal_index(shape, {i3, i4}));
      for (int64_t a = 0; a < 2; ++a)
        for (int64_t b = 0; b < 3; ++b) {
          const int64_t rowmajor = ((a * 3 + b) * 2 + i3) * 2 + i4;
          CHECK(slice(a, b) == x[rowmajor]);
        }
    }
}

TEST_CASE("tensor constructor validates value length") {
  CHECK_THROWS_AS(Tensor({2, 2, 2}, {1.0, 2.0}), ShapeError);
  CHECK_THROWS_AS(shape_numel({2, 0, 2}), ShapeError);
}

TEST_CASE("realify guards against large imaginary residue") {
  CTensor x({2, 2, 1});
  x[0] = {1.0, 0.0};
  x[1] = {2.0, 1e-12};
  CHECK(realify(x)[1] == doctest::Approx(2.0));
  x[2] = {0.0, 1.0};
  CHECK_THROWS_AS(realify(x), NumericError);
}
