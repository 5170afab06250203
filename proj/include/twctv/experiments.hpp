#ifndef TWCTV_EXPERIMENTS_HPP
#define TWCTV_EXPERIMENTS_HPP

#include <cstdint>
#include <vector>

#include "twctv/solver.hpp"
#include "twctv/tensor.hpp"
#include "twctv/transform.hpp"

namespace twctv {

// Deterministic per-job seed derivation (splitmix-style mixing).
uint64_t mix_seed(uint64_t base, uint64_t a, uint64_t b = 0, uint64_t c = 0);

struct SyntheticSpec {
  Shape shape;
  int rank = 1;
  TransformFamily family = TransformFamily::Dct;
  uint64_t seed = 0;            // factor entries
  uint64_t transform_seed = 0;  // keep aligned with the solver's transform
};

// M = M1 *_M M2 with factor entries drawn i.i.d. from N(0, 1/n1); the result
// has tubal rank equal to spec.rank by construction.
Tensor gen_synthetic(const SyntheticSpec& spec);

// Exactly floor(rate * numel) entries observed, sampled uniformly without
// replacement.
ObservationMask gen_bernoulli_mask(const Shape& shape, double rate, uint64_t seed);

// Replaces round(level * numel) entries, half with 0 and half with 1
// (ties to zeros). Input values must lie in [0,1].
Tensor add_salt_pepper(const Tensor& x, double level, uint64_t seed);

// Sparse corruption tensor with floor(fraction * numel) entries of the given
// magnitude and random sign on a uniform support; all other entries zero.
Tensor gen_outliers(const Shape& shape, double fraction, double magnitude, uint64_t seed);

struct PhaseGrid {
  std::vector<int> ranks;
  std::vector<double> rates;
  int trials = 3;
  double success_threshold = 1e-3;
  Shape shape;
  std::vector<int> successes;  // rank-major: successes[ri * rates.size() + si]

  int& at(size_t ri, size_t si) { return successes[ri * rates.size() + si]; }
  int at(size_t ri, size_t si) const { return successes[ri * rates.size() + si]; }
  int total() const;
};

// Ranks 1..8, rates 0.1..0.9, 3 trials on 20 x 20 x 10 tensors.
PhaseGrid desk_phase_grid();

// Fills the success counts: per cell and trial, generate, mask, run the
// completion solver and count relative errors below the threshold.
// weighted = false runs the unit-weight p = 1 variant.
PhaseGrid phase_transition(PhaseGrid grid, uint64_t seed, bool weighted,
                           const SolverConfig& base = SolverConfig{});

struct PSensRow {
  double p = 0.0;
  double residual = 0.0;  // ||P_Omega(M) - X - E||_F at termination
  double seconds = 0.0;
  double iterations = 0.0;
};

// Schatten-p sweep on synthetic corrupted completions (80 x 80 x 20 tensors at
// 8% sampling, 2% corruption, magnitude 0.4 by default). Values are averaged
// over trials.
std::vector<PSensRow> p_sensitivity(const std::vector<double>& ps, int trials, uint64_t seed,
                                    Shape shape = {80, 80, 20}, int rank = 5, double sampling = 0.08,
                                    double corruption = 0.02, double magnitude = 0.4);

}  // namespace twctv

#endif
