#ifndef TWCTV_SOLVER_HPP
#define TWCTV_SOLVER_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "twctv/tensor.hpp"
#include "twctv/transform.hpp"

namespace twctv {

// Completion: no sparse term, the auxiliary K imputes unobserved entries.
// Trpca: full observation with a sparse corruption term E.
// Rlrtc: partial observation plus sparse E supported on the observed set.
enum class SolverMode { Completion, Trpca, Rlrtc };

SolverMode solver_mode_from_string(const std::string& s);
std::string to_string(SolverMode mode);

struct SolverConfig {
  SolverMode mode = SolverMode::Completion;
  double p = 0.9;                 // Schatten exponent, (0,1]
  double lambda = 0.0;            // <= 0 resolves to default_lambda(shape)
  double mu0 = 1e-4;
  double rho = 1.1;
  double mu_max = 1e10;
  double epsilon = 1e-8;
  int t_max = 500;
  double c_e = 2.0;
  double sigmoid_m = 10.0;
  std::vector<int> smoothness_modes;  // empty resolves via default rule
  TransformFamily family = TransformFamily::Dct;
  uint64_t transform_seed = 0;
  bool sv_weighting = true;       // sigmoid singular-value weights vs W == 1
  bool sparse_weighting = true;   // adaptive W_E vs plain l1
  int threads = 0;                // 0 = leave runtime default
};

struct IterationRecord {
  int t = 0;
  double dx_inf = 0.0, de_inf = 0.0, feas_inf = 0.0;
  double dx_rel_f = 0.0, de_rel_f = 0.0, feas_f = 0.0;
  double mu = 0.0;
  double seconds = 0.0;
};

struct RecoveryResult {
  Tensor x;
  Tensor e;  // K in completion mode
  int iterations = 0;
  bool converged = false;
  std::vector<IterationRecord> history;
  double solve_seconds = 0.0;
};

struct ConvergenceInfo {
  bool converged = false;
  double dx_inf = 0.0, de_inf = 0.0, feas_inf = 0.0;
};

// 1 / sqrt(n1 n2 ... nd / min(n1, n2)).
double default_lambda(const Shape& shape);

// Color images (d == 3, n3 == 3) smooth the two spatial modes; everything
// else also smoothes mode 3.
std::vector<int> default_smoothness_modes(const Shape& shape);

ConvergenceInfo convergence_check(const Tensor& x_prev, const Tensor& x_next, const Tensor& e_prev,
                                  const Tensor& e_next, const Tensor& m, const ObservationMask& omega,
                                  double epsilon);

using ProgressFn = std::function<void(const IterationRecord&)>;

RecoveryResult rlrtc_solve(const Tensor& m, const ObservationMask& omega, const SolverConfig& config,
                           const ProgressFn& progress = {});

}  // namespace twctv

#endif
