#include "twctv/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "twctv/metrics.hpp"

namespace twctv {

uint64_t mix_seed(uint64_t base, uint64_t a, uint64_t b, uint64_t c) {
  uint64_t z = base;
  for (uint64_t v : {a, b, c}) {
    z += 0x9e3779b97f4a7c15ULL + v;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
  }
  return z;
}

Tensor gen_synthetic(const SyntheticSpec& spec) {
  const Shape& s = spec.shape;
  if (s.size() < 3) throw ParamError("synthetic shape needs order >= 3");
  const int64_t n1 = s[0], n2 = s[1];
  if (spec.rank < 0 || spec.rank > std::min(n1, n2))
    throw ParamError("synthetic rank must lie in [0, min(n1,n2)]");
  if (spec.rank == 0) return Tensor(s);

  Shape sa = s, sb = s;
  sa[1] = spec.rank;
  sb[0] = spec.rank;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(double(n1)));
  Tensor a(sa), b(sb);
  for (int64_t i = 0; i < a.numel(); ++i) a[i] = gauss(rng);
  for (int64_t i = 0; i < b.numel(); ++i) b[i] = gauss(rng);
  const TransformSpec transform = build_transform(spec.family, s, spec.transform_seed);
  return m_product(a, b, transform);
}

namespace {

// First m indices of a seeded partial Fisher-Yates shuffle of 0..n-1.
std::vector<int64_t> sample_without_replacement(int64_t n, int64_t m, std::mt19937_64& rng) {
  std::vector<int64_t> idx(static_cast<size_t>(n));
  std::iota(idx.begin(), idx.end(), int64_t(0));
  for (int64_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<int64_t> pick(i, n - 1);
    std::swap(idx[size_t(i)], idx[size_t(pick(rng))]);
  }
  idx.resize(size_t(m));
  return idx;
}

}  // namespace

ObservationMask gen_bernoulli_mask(const Shape& shape, double rate, uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw ParamError("sampling rate must lie in [0,1]");
  const int64_t n = shape_numel(shape);
  const int64_t m = static_cast<int64_t>(std::floor(rate * double(n)));
  ObservationMask mask = ObservationMask::none_observed(shape);
  std::mt19937_64 rng(seed);
  for (int64_t i : sample_without_replacement(n, m, rng)) mask.set(i, true);
  return mask;
}

Tensor add_salt_pepper(const Tensor& x, double level, uint64_t seed) {
  if (!(level >= 0.0 && level <= 1.0)) throw ParamError("noise level must lie in [0,1]");
  for (int64_t i = 0; i < x.numel(); ++i)
    if (x[i] < 0.0 || x[i] > 1.0) throw ParamError("salt-pepper input must lie in [0,1]; normalize first");
  const int64_t n = x.numel();
  const int64_t m = static_cast<int64_t>(std::llround(level * double(n)));
  Tensor out = x;
  std::mt19937_64 rng(seed);
  const std::vector<int64_t> hit = sample_without_replacement(n, m, rng);
  const int64_t zeros = (m + 1) / 2;  // ties to zeros
  for (int64_t i = 0; i < m; ++i) out[hit[size_t(i)]] = i < zeros ? 0.0 : 1.0;
  return out;
}

Tensor gen_outliers(const Shape& shape, double fraction, double magnitude, uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw ParamError("corruption fraction must lie in [0,1]");
  const int64_t n = shape_numel(shape);
  const int64_t m = static_cast<int64_t>(std::floor(fraction * double(n)));
  Tensor out(shape);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (int64_t i : sample_without_replacement(n, m, rng)) out[i] = coin(rng) ? magnitude : -magnitude;
  return out;
}

int PhaseGrid::total() const {
  int t = 0;
  for (int s : successes) t += s;
  return t;
}

PhaseGrid desk_phase_grid() {
  PhaseGrid g;
  g.ranks = {1, 2, 3, 4, 5, 6, 7, 8};
  g.rates = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  g.trials = 3;
  g.success_threshold = 1e-3;
  g.shape = {20, 20, 10};
  return g;
}

PhaseGrid phase_transition(PhaseGrid grid, uint64_t seed, bool weighted, const SolverConfig& base) {
  grid.successes.assign(grid.ranks.size() * grid.rates.size(), 0);
  SolverConfig cfg = base;
  cfg.mode = SolverMode::Completion;
  if (weighted) {
    cfg.sv_weighting = true;
  } else {
    cfg.sv_weighting = false;
    cfg.p = 1.0;
  }
  for (size_t ri = 0; ri < grid.ranks.size(); ++ri) {
    for (size_t si = 0; si < grid.rates.size(); ++si) {
      for (int trial = 0; trial < grid.trials; ++trial) {
        const uint64_t job = mix_seed(seed, ri, si, uint64_t(trial));
        SyntheticSpec spec{grid.shape, grid.ranks[ri], cfg.family, job, cfg.transform_seed};
        const Tensor m = gen_synthetic(spec);
        const ObservationMask omega = gen_bernoulli_mask(grid.shape, grid.rates[si], mix_seed(job, 1));
        const RecoveryResult res = rlrtc_solve(m, omega, cfg);
        if (relative_error(res.x, m) < grid.success_threshold) ++grid.at(ri, si);
      }
    }
  }
  return grid;
}

std::vector<PSensRow> p_sensitivity(const std::vector<double>& ps, int trials, uint64_t seed, Shape shape,
                                    int rank, double sampling, double corruption, double magnitude) {
  if (trials < 1) throw ParamError("p_sensitivity: trials must be positive");
  std::vector<PSensRow> rows;
  rows.reserve(ps.size());
  for (size_t pi = 0; pi < ps.size(); ++pi) {
    PSensRow row;
    row.p = ps[pi];
    for (int trial = 0; trial < trials; ++trial) {
      const uint64_t job = mix_seed(seed, pi, uint64_t(trial));
      SyntheticSpec spec{shape, rank, TransformFamily::Dct, job, 0};
      const Tensor m = gen_synthetic(spec);
      const Tensor e_true = gen_outliers(shape, corruption, magnitude, mix_seed(job, 2));
      const Tensor corrupted = add(m, e_true);
      const ObservationMask omega = gen_bernoulli_mask(shape, sampling, mix_seed(job, 3));
      SolverConfig cfg;
      cfg.mode = SolverMode::Rlrtc;
      cfg.p = ps[pi];
      const RecoveryResult res = rlrtc_solve(corrupted, omega, cfg);
      const Tensor feas = sub(project(corrupted, omega), add(res.x, res.e));
      row.residual += frobenius_norm(feas);
      row.seconds += res.solve_seconds;
      row.iterations += double(res.iterations);
    }
    row.residual /= double(trials);
    row.seconds /= double(trials);
    row.iterations /= double(trials);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace twctv
