#include "twctv/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "twctv/gradient.hpp"
#include "twctv/shrinkage.hpp"

namespace twctv {

SolverMode solver_mode_from_string(const std::string& s) {
  if (s == "completion") return SolverMode::Completion;
  if (s == "trpca") return SolverMode::Trpca;
  if (s == "rlrtc") return SolverMode::Rlrtc;
  throw ParamError("unknown solver mode: " + s);
}

std::string to_string(SolverMode mode) {
  switch (mode) {
    case SolverMode::Completion: return "completion";
    case SolverMode::Trpca: return "trpca";
    case SolverMode::Rlrtc: return "rlrtc";
  }
  return "?";
}

double default_lambda(const Shape& shape) {
  if (shape.size() < 3) throw ParamError("default_lambda needs order >= 3");
  double prod = 1.0;
  for (int64_t e : shape) prod *= double(e);
  return 1.0 / std::sqrt(prod / double(std::min(shape[0], shape[1])));
}

std::vector<int> default_smoothness_modes(const Shape& shape) {
  if (shape.size() == 3 && shape[2] == 3) return {1, 2};
  return {1, 2, 3};
}

namespace {

void validate_config(const SolverConfig& cfg, const Shape& shape, const ObservationMask& omega) {
  if (shape.size() < 3) throw ParamError("solver needs order >= 3");
  if (!same_shape(shape, omega.shape())) throw ShapeError("mask shape does not match tensor");
  if (!(cfg.p > 0.0 && cfg.p <= 1.0)) throw ParamError("p must lie in (0,1]");
  if (!(cfg.mu0 > 0.0) || !(cfg.mu_max > 0.0) || cfg.mu0 >= cfg.mu_max)
    throw ParamError("need 0 < mu0 < mu_max");
  if (!(cfg.rho > 1.0)) throw ParamError("rho must exceed 1");
  if (!(cfg.epsilon > 0.0)) throw ParamError("epsilon must be positive");
  if (cfg.t_max < 1) throw ParamError("t_max must be at least 1");
  if (!(cfg.c_e > 0.0)) throw ParamError("c_E must be positive");
  if (!(cfg.sigmoid_m > 0.0)) throw ParamError("sigmoid scale must be positive");
  for (int k : cfg.smoothness_modes)
    if (k < 1 || k > 3 || k > static_cast<int>(shape.size()))
      throw ParamError("smoothness modes must lie in {1,2,3} and within the order");
  if (cfg.mode == SolverMode::Trpca && !omega.is_full())
    throw ParamError("trpca mode requires a full observation set");
}

double relative_change(const Tensor& next, const Tensor& prev, double prev_norm) {
  if (prev_norm <= 0.0) return 1.0;
  return std::min(1.0, frobenius_norm(sub(next, prev)) / prev_norm);
}

}  // namespace

ConvergenceInfo convergence_check(const Tensor& x_prev, const Tensor& x_next, const Tensor& e_prev,
                                  const Tensor& e_next, const Tensor& m, const ObservationMask& omega,
                                  double epsilon) {
  ConvergenceInfo info;
  info.dx_inf = max_abs_diff(x_next, x_prev);
  info.de_inf = max_abs_diff(e_next, e_prev);
  const Tensor pm = project(m, omega);
  double feas = 0.0;
  for (int64_t i = 0; i < pm.numel(); ++i) feas = std::max(feas, std::abs(pm[i] - x_next[i] - e_next[i]));
  info.feas_inf = feas;
  info.converged = info.dx_inf <= epsilon && info.de_inf <= epsilon && info.feas_inf <= epsilon;
  return info;
}

RecoveryResult rlrtc_solve(const Tensor& m, const ObservationMask& omega, const SolverConfig& config,
                           const ProgressFn& progress) {
  validate_config(config, m.shape(), omega);
#ifdef _OPENMP
  if (config.threads > 0) omp_set_num_threads(config.threads);
#endif

  const Shape& shape = m.shape();
  const std::vector<int> modes =
      config.smoothness_modes.empty() ? default_smoothness_modes(shape) : config.smoothness_modes;
  const double gamma = double(modes.size());
  const double lambda = config.lambda > 0.0 ? config.lambda : default_lambda(shape);
  const TransformSpec spec = build_transform(config.family, shape, config.transform_seed);
  const bool completion = config.mode == SolverMode::Completion;

  const Tensor pm = project(m, omega);
  const int64_t n = pm.numel();

  Tensor x(shape), e(shape), ups(shape);
  std::vector<Tensor> g(modes.size(), Tensor(shape));
  std::vector<Tensor> y(modes.size(), Tensor(shape));
  Tensor w_e;
  if (!completion) {
    w_e = Tensor(shape);
    for (int64_t i = 0; i < n; ++i) w_e[i] = 1.0;
  }

  SpectrumCache cache(shape, modes);
  RecoveryResult result;
  result.history.reserve(size_t(config.t_max));

  const auto solve_start = std::chrono::steady_clock::now();
  for (int t = 0; t < config.t_max; ++t) {
    const auto iter_start = std::chrono::steady_clock::now();
    const double mu = std::min(config.mu0 * std::pow(config.rho, double(t)), config.mu_max);

    // Step 1: X via the FFT closed form.
    Tensor rhs(shape);
    for (int64_t i = 0; i < n; ++i) rhs[i] = pm[i] - e[i] + ups[i] / mu;
    std::vector<Tensor> targets;
    targets.reserve(modes.size());
    for (size_t ki = 0; ki < modes.size(); ++ki) targets.push_back(axpy(g[ki], -1.0 / mu, y[ki]));
    Tensor x_next = solve_x_subproblem(rhs, targets, cache);

    // Step 2: gradient auxiliaries via GTSVT.
    std::vector<Tensor> g_next(modes.size());
    for (size_t ki = 0; ki < modes.size(); ++ki) {
      const Tensor a = axpy(grad(x_next, modes[ki]), 1.0 / mu, y[ki]);
      g_next[ki] = gtsvt(a, 1.0 / (gamma * mu), config.p, spec, config.sigmoid_m, config.sv_weighting);
    }

    // Step 3 / Step 4: sparse term or completion auxiliary.
    Tensor e_next(shape);
    if (completion) {
      for (int64_t i = 0; i < n; ++i)
        e_next[i] = omega.observed(i) ? 0.0 : pm[i] - x_next[i] + ups[i] / mu;
    } else {
      for (int64_t i = 0; i < n; ++i) {
        if (!omega.observed(i)) continue;
        const double b = pm[i] - x_next[i] + ups[i] / mu;
        const double tau = lambda / mu * w_e[i];
        const double mag = std::abs(b) - tau;
        e_next[i] = mag > 0.0 ? (b > 0.0 ? mag : -mag) : 0.0;
      }
      if (config.sparse_weighting) w_e = sparse_weights(e_next, config.c_e).w;
    }

    if (!all_finite(x_next) || !all_finite(e_next))
      throw NumericError("solver diverged: non-finite iterate at iteration " + std::to_string(t));

    // Step 5: multipliers.
    for (size_t ki = 0; ki < modes.size(); ++ki) {
      const Tensor gx = grad(x_next, modes[ki]);
      for (int64_t i = 0; i < n; ++i) y[ki][i] += mu * (gx[i] - g_next[ki][i]);
    }
    Tensor feas(shape);
    for (int64_t i = 0; i < n; ++i) feas[i] = pm[i] - x_next[i] - e_next[i];
    for (int64_t i = 0; i < n; ++i) ups[i] += mu * feas[i];

    IterationRecord rec;
    rec.t = t;
    rec.dx_inf = max_abs_diff(x_next, x);
    rec.de_inf = max_abs_diff(e_next, e);
    rec.feas_inf = linf_norm(feas);
    rec.dx_rel_f = relative_change(x_next, x, frobenius_norm(x));
    rec.de_rel_f = relative_change(e_next, e, frobenius_norm(e));
    rec.feas_f = frobenius_norm(feas);
    rec.mu = mu;

    x = std::move(x_next);
    e = std::move(e_next);
    g = std::move(g_next);

    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - iter_start).count();
    result.history.push_back(rec);
    if (progress) progress(rec);

    if (rec.dx_inf <= config.epsilon && rec.de_inf <= config.epsilon && rec.feas_inf <= config.epsilon) {
      result.converged = true;
      break;
    }
  }

  result.iterations = static_cast<int>(result.history.size());
  result.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - solve_start).count();
  result.x = std::move(x);
  result.e = std::move(e);
  return result;
}

}  // namespace twctv
