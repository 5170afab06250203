#include "twctv/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twctv/experiments.hpp"
#include "twctv/foreground.hpp"
#include "twctv/image_io.hpp"
#include "twctv/metrics.hpp"
#include "twctv/solver.hpp"
#include "twctv/tensor_io.hpp"

namespace twctv {

const char* kToolVersion = "0.1.0";

namespace {

using nlohmann::json;

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_png_path(const std::string& path, const std::string& format_override) {
  if (format_override == "png") return true;
  if (format_override == "tlt") return false;
  return has_suffix(path, ".png");
}

Tensor load_tensor(const std::string& path, const std::string& format_override) {
  if (is_png_path(path, format_override)) return read_image(path);
  return read_tensor(path);
}

void store_tensor(const std::string& path, const Tensor& x, const std::string& format_override) {
  if (is_png_path(path, format_override)) {
    write_image(path, x);
    return;
  }
  write_tensor(path, x);
}

ObservationMask load_mask(const std::string& path, const Shape& expected) {
  Tensor t = has_suffix(path, ".png") ? read_image(path) : read_tensor(path);
  if (!same_shape(t.shape(), expected))
    throw ParamError("mask shape " + shape_to_string(t.shape()) + " does not match input " +
                     shape_to_string(expected));
  ObservationMask mask = ObservationMask::none_observed(expected);
  for (int64_t i = 0; i < t.numel(); ++i) mask.set(i, t[i] > 0.5);
  return mask;
}

struct SolveArgs {
  std::string in_path, out_path, sparse_path, mask_path, history_path, manifest_path, ref_path;
  std::string format;  // "", "tlt", "png"
  std::string transform = "dct";
  std::string lambda = "auto";
  std::string gamma = "auto";
  double p = 0.9;
  double rho = 1.1;
  double mu0 = 1e-4;
  double mu_max = 1e10;
  double tol = 1e-8;
  int max_iters = 500;
  double c_e = 2.0;
  double sigmoid_m = 10.0;
  double sampling_rate = -1.0;
  double noise_level = -1.0;
  double outlier_frac = -1.0;
  double outlier_mag = 0.4;
  uint64_t seed = 0;
  uint64_t transform_seed = 0;
  int threads = 0;
  bool deterministic = false;
  bool plain_l1 = false;
  bool unit_sv_weights = false;
};

void add_solver_flags(CLI::App* cmd, SolveArgs& a, bool wants_mask) {
  cmd->add_option("--in", a.in_path, "input tensor (.tlt) or image (.png)")->required();
  cmd->add_option("--out", a.out_path, "recovered tensor output path")->required();
  cmd->add_option("--out-sparse", a.sparse_path, "sparse/auxiliary component output path");
  cmd->add_option("--history", a.history_path, "per-iteration history CSV path");
  cmd->add_option("--manifest", a.manifest_path, "run manifest JSON path (default <out>.manifest.json)");
  cmd->add_option("--ref", a.ref_path, "reference tensor for metrics");
  cmd->add_option("--format", a.format, "force input/output format")->check(CLI::IsMember({"tlt", "png"}));
  if (wants_mask) {
    cmd->add_option("--mask", a.mask_path, "observation mask (.tlt or .png, >0.5 = observed)");
    cmd->add_option("--sampling-rate", a.sampling_rate, "sample a Bernoulli mask at this rate")
        ->check(CLI::Range(0.0, 1.0));
  }
  cmd->add_option("--noise-level", a.noise_level, "salt-and-pepper fraction applied to the input")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--transform", a.transform, "transform family")
      ->check(CLI::IsMember({"dct", "dft", "haar", "rot"}));
  cmd->add_option("--p", a.p, "Schatten exponent in (0,1]");
  cmd->add_option("--lambda", a.lambda, "sparse weight (number or 'auto')");
  cmd->add_option("--rho", a.rho, "penalty growth factor");
  cmd->add_option("--mu0", a.mu0, "initial penalty");
  cmd->add_option("--mu-max", a.mu_max, "penalty cap");
  cmd->add_option("--tol", a.tol, "stopping tolerance (infinity norms)");
  cmd->add_option("--max-iters", a.max_iters, "iteration cap");
  cmd->add_option("--c-e", a.c_e, "sparse weight scale c_E");
  cmd->add_option("--sigmoid-m", a.sigmoid_m, "sigmoid steepness for singular-value weights");
  cmd->add_option("--gamma", a.gamma, "smoothness modes")->check(CLI::IsMember({"12", "123", "auto"}));
  cmd->add_option("--seed", a.seed, "seed for masks and noise");
  cmd->add_option("--transform-seed", a.transform_seed, "seed for the rot transform matrices");
  cmd->add_option("--threads", a.threads, "cap data parallelism");
  cmd->add_flag("--deterministic", a.deterministic, "record deterministic mode (reductions are always ordered)");
  cmd->add_flag("--plain-l1", a.plain_l1, "disable adaptive sparse weights (plain l1)");
  cmd->add_flag("--unit-sv-weights", a.unit_sv_weights, "disable sigmoid singular-value weights");
}

SolverConfig make_config(const SolveArgs& a, SolverMode mode) {
  SolverConfig cfg;
  cfg.mode = mode;
  cfg.p = a.p;
  if (a.lambda == "auto") {
    cfg.lambda = 0.0;
  } else {
    try {
      cfg.lambda = std::stod(a.lambda);
    } catch (const std::exception&) {
      throw ParamError("--lambda expects a number or 'auto'");
    }
  }
  cfg.mu0 = a.mu0;
  cfg.rho = a.rho;
  cfg.mu_max = a.mu_max;
  cfg.epsilon = a.tol;
  cfg.t_max = a.max_iters;
  cfg.c_e = a.c_e;
  cfg.sigmoid_m = a.sigmoid_m;
  if (a.gamma == "12") cfg.smoothness_modes = {1, 2};
  if (a.gamma == "123") cfg.smoothness_modes = {1, 2, 3};
  cfg.family = transform_family_from_string(a.transform);
  cfg.transform_seed = a.transform_seed;
  cfg.sv_weighting = !a.unit_sv_weights;
  cfg.sparse_weighting = !a.plain_l1;
  cfg.threads = a.threads;
  return cfg;
}

void write_history_csv(const std::string& path, const std::vector<IterationRecord>& history) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot create history file: " + path);
  os << "t,dx_inf,de_inf,feas_inf,mu,seconds,dx_rel_f,de_rel_f,feas_f\n";
  os.precision(17);
  for (const auto& r : history)
    os << r.t << ',' << r.dx_inf << ',' << r.de_inf << ',' << r.feas_inf << ',' << r.mu << ',' << r.seconds
       << ',' << r.dx_rel_f << ',' << r.de_rel_f << ',' << r.feas_f << '\n';
  if (!os) throw IoError("failed writing history file: " + path);
}

json input_record(const std::string& path) {
  json rec;
  rec["path"] = path;
  rec["digest"] = file_digest(path);
  rec["bytes"] = static_cast<uint64_t>(std::filesystem::file_size(path));
  return rec;
}

json metrics_to_json(const MetricsRecord& m) {
  json j = json::object();
  if (m.relative_error) j["relative_error"] = *m.relative_error;
  if (m.psnr_infinite)
    j["psnr_infinite"] = true;
  else if (m.psnr_db)
    j["psnr_db"] = *m.psnr_db;
  if (m.ergas) j["ergas"] = *m.ergas;
  if (m.precision) j["precision"] = *m.precision;
  if (m.recall) j["recall"] = *m.recall;
  if (m.f_measure) j["f_measure"] = *m.f_measure;
  return j;
}

MetricsRecord compute_metrics(const Tensor& est, const Tensor& ref, double peak) {
  MetricsRecord m;
  m.relative_error = relative_error(est, ref);
  const double p = psnr(est, ref, peak);
  if (std::isinf(p))
    m.psnr_infinite = true;
  else
    m.psnr_db = p;
  if (ref.order() >= 3) m.ergas = ergas(est, ref);
  return m;
}

int run_solve(const std::string& name, SolverMode mode, const SolveArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const Tensor input = load_tensor(a.in_path, a.format);
  const Shape& shape = input.shape();

  if (mode == SolverMode::Trpca && (!a.mask_path.empty() || a.sampling_rate >= 0.0))
    throw ParamError("rpca assumes full observation; --mask/--sampling-rate are incompatible");
  if (mode != SolverMode::Trpca && a.mask_path.empty() && a.sampling_rate < 0.0)
    throw ParamError(name + " needs --mask or --sampling-rate");
  if (!a.mask_path.empty() && a.sampling_rate >= 0.0)
    throw ParamError("--mask and --sampling-rate are mutually exclusive");

  ObservationMask omega = ObservationMask::all_observed(shape);
  bool sampled_here = false;
  if (!a.mask_path.empty()) omega = load_mask(a.mask_path, shape);
  if (a.sampling_rate >= 0.0) {
    omega = gen_bernoulli_mask(shape, a.sampling_rate, a.seed);
    sampled_here = true;
  }

  Tensor observed = input;
  bool corrupted_here = false;
  if (a.noise_level >= 0.0) {
    observed = add_salt_pepper(observed, a.noise_level, mix_seed(a.seed, 7));
    corrupted_here = true;
  }
  if (a.outlier_frac >= 0.0) {
    observed = add(observed, gen_outliers(shape, a.outlier_frac, a.outlier_mag, mix_seed(a.seed, 8)));
    corrupted_here = true;
  }

  const SolverConfig cfg = make_config(a, mode);
  int last_printed = -100;
  RecoveryResult res = rlrtc_solve(observed, omega, cfg, [&](const IterationRecord& r) {
    if (r.t - last_printed >= 25) {
      std::cerr << name << " iter " << r.t << " dx=" << r.dx_inf << " de=" << r.de_inf
                << " feas=" << r.feas_inf << " mu=" << r.mu << "\n";
      last_printed = r.t;
    }
  });

  store_tensor(a.out_path, res.x, a.format);
  if (!a.sparse_path.empty()) store_tensor(a.sparse_path, res.e, a.format);
  if (!a.history_path.empty()) write_history_csv(a.history_path, res.history);

  // Metrics when a trustworthy reference exists: an explicit --ref, or the
  // input itself when this run created the degradation.
  MetricsRecord metrics;
  std::optional<MetricsRecord> observed_metrics;
  if (!a.ref_path.empty()) {
    const Tensor ref = load_tensor(a.ref_path, a.format);
    metrics = compute_metrics(res.x, ref, 1.0);
  } else if (sampled_here || corrupted_here) {
    metrics = compute_metrics(res.x, input, 1.0);
    observed_metrics = compute_metrics(project(observed, omega), input, 1.0);
  }

  json manifest;
  manifest["tool"] = "twctv";
  manifest["version"] = kToolVersion;
  manifest["subcommand"] = name;
  manifest["config"] = {
      {"mode", to_string(cfg.mode)},
      {"p", cfg.p},
      {"lambda_resolved", cfg.lambda > 0.0 ? cfg.lambda : default_lambda(shape)},
      {"mu0", cfg.mu0},
      {"rho", cfg.rho},
      {"mu_max", cfg.mu_max},
      {"epsilon", cfg.epsilon},
      {"t_max", cfg.t_max},
      {"c_e", cfg.c_e},
      {"sigmoid_m", cfg.sigmoid_m},
      {"gamma", cfg.smoothness_modes.empty() ? default_smoothness_modes(shape) : cfg.smoothness_modes},
      {"transform", to_string(cfg.family)},
      {"sv_weighting", cfg.sv_weighting},
      {"sparse_weighting", cfg.sparse_weighting},
      {"threads", cfg.threads},
      {"deterministic", a.deterministic},
  };
  manifest["seed"] = a.seed;
  if (sampled_here) manifest["sampling_rate"] = a.sampling_rate;
  if (a.noise_level >= 0.0) manifest["noise_level"] = a.noise_level;
  if (a.outlier_frac >= 0.0) {
    manifest["outlier_frac"] = a.outlier_frac;
    manifest["outlier_mag"] = a.outlier_mag;
  }
  manifest["inputs"] = json::array({input_record(a.in_path)});
  if (!a.mask_path.empty()) manifest["inputs"].push_back(input_record(a.mask_path));
  manifest["outputs"] = {{"x", a.out_path}};
  if (!a.sparse_path.empty()) manifest["outputs"]["e"] = a.sparse_path;
  if (!a.history_path.empty()) manifest["outputs"]["history"] = a.history_path;
  manifest["iterations"] = res.iterations;
  manifest["converged"] = res.converged;
  manifest["timing"] = {
      {"solve_seconds", res.solve_seconds},
      {"total_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  manifest["metrics"] = metrics_to_json(metrics);
  if (observed_metrics) manifest["observed_metrics"] = metrics_to_json(*observed_metrics);

  const std::string manifest_path =
      a.manifest_path.empty() ? a.out_path + ".manifest.json" : a.manifest_path;
  std::ofstream mos(manifest_path, std::ios::trunc);
  if (!mos) throw IoError("cannot create manifest: " + manifest_path);
  mos << manifest.dump(2) << "\n";

  std::cout << name << ": iterations=" << res.iterations << " converged=" << (res.converged ? "yes" : "no");
  if (metrics.relative_error) std::cout << " re=" << *metrics.relative_error;
  if (metrics.psnr_db) std::cout << " psnr=" << *metrics.psnr_db;
  std::cout << "\n";

  if (!res.converged) {
    std::cerr << name << ": iteration cap reached before tolerance; outputs written anyway\n";
    return 5;
  }
  return 0;
}

Shape parse_shape(const std::string& text) {
  Shape shape;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (cur.empty()) throw ParamError("bad shape: " + text);
      try {
        shape.push_back(std::stoll(cur));
      } catch (const std::exception&) {
        throw ParamError("bad shape: " + text);
      }
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (shape.size() < 3) throw ParamError("shape needs at least 3 extents");
  return shape;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Low-rank tensor completion and robust PCA with gradient-domain weighted Schatten-p regularization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SolveArgs complete_args, rpca_args, rlrtc_args;
  auto* complete = app.add_subcommand("complete", "tensor completion from partial observations");
  add_solver_flags(complete, complete_args, true);
  auto* rpca = app.add_subcommand("rpca", "robust PCA on a fully observed tensor");
  add_solver_flags(rpca, rpca_args, false);
  auto* rlrtc = app.add_subcommand("rlrtc", "robust completion: partial observations plus sparse corruption");
  add_solver_flags(rlrtc, rlrtc_args, true);
  rlrtc->add_option("--outlier-frac", rlrtc_args.outlier_frac, "add sparse outliers at this fraction")
      ->check(CLI::Range(0.0, 1.0));
  rlrtc->add_option("--outlier-mag", rlrtc_args.outlier_mag, "outlier magnitude");

  std::string synth_shape = "30,30,20,20", synth_out, synth_transform = "dct";
  int synth_rank = 3;
  uint64_t synth_seed = 0, synth_tseed = 0;
  auto* synth = app.add_subcommand("synth", "generate a synthetic low-tubal-rank tensor");
  synth->add_option("--shape", synth_shape, "comma-separated extents");
  synth->add_option("--rank", synth_rank, "tubal rank")->required();
  synth->add_option("--transform", synth_transform, "transform family")
      ->check(CLI::IsMember({"dct", "dft", "haar", "rot"}));
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--transform-seed", synth_tseed, "seed for the rot transform matrices");
  synth->add_option("--out", synth_out, "output .tlt path")->required();

  std::string phase_out, phase_preset = "desk";
  uint64_t phase_seed = 0;
  int phase_trials = -1;
  double phase_threshold = -1.0;
  auto* phase = app.add_subcommand("phase", "phase-transition success grid (weighted vs unweighted)");
  phase->add_option("--preset", phase_preset, "grid preset")->check(CLI::IsMember({"desk"}));
  phase->add_option("--out", phase_out, "output CSV path")->required();
  phase->add_option("--seed", phase_seed, "base seed");
  phase->add_option("--trials", phase_trials, "override trials per cell");
  phase->add_option("--threshold", phase_threshold, "override success threshold");

  std::string psens_out;
  uint64_t psens_seed = 0;
  int psens_trials = 3;
  auto* psens = app.add_subcommand("psens", "Schatten-p sensitivity sweep on corrupted completions");
  psens->add_option("--out", psens_out, "output CSV path")->required();
  psens->add_option("--seed", psens_seed, "base seed");
  psens->add_option("--trials", psens_trials, "trials per p value");

  std::string met_ref, met_est;
  double met_peak = 1.0;
  auto* metrics_cmd = app.add_subcommand("metrics", "compare two tensors");
  metrics_cmd->add_option("--ref", met_ref, "reference tensor")->required();
  metrics_cmd->add_option("--est", met_est, "estimate tensor")->required();
  metrics_cmd->add_option("--peak", met_peak, "PSNR peak value");

  std::string fg_in, fg_out, fg_truth;
  int fg_window = 5;
  auto* fg = app.add_subcommand("foreground", "binary foreground masks from a sparse component");
  fg->add_option("--in", fg_in, "sparse component tensor (.tlt)")->required();
  fg->add_option("--out", fg_out, "0/1 mask tensor output")->required();
  fg->add_option("--window", fg_window, "median filter window (odd)");
  fg->add_option("--truth", fg_truth, "ground-truth mask for precision/recall");

  try {
    app.parse(argc, argv);

    if (*complete) return run_solve("complete", SolverMode::Completion, complete_args);
    if (*rpca) return run_solve("rpca", SolverMode::Trpca, rpca_args);
    if (*rlrtc) return run_solve("rlrtc", SolverMode::Rlrtc, rlrtc_args);

    if (*synth) {
      SyntheticSpec spec{parse_shape(synth_shape), synth_rank,
                         transform_family_from_string(synth_transform), synth_seed, synth_tseed};
      write_tensor(synth_out, gen_synthetic(spec));
      std::cout << "synth: wrote " << synth_out << " shape=" << shape_to_string(spec.shape)
                << " rank=" << spec.rank << "\n";
      return 0;
    }

    if (*phase) {
      PhaseGrid grid = desk_phase_grid();
      if (phase_trials > 0) grid.trials = phase_trials;
      if (phase_threshold > 0.0) grid.success_threshold = phase_threshold;
      const PhaseGrid weighted = phase_transition(grid, phase_seed, true);
      const PhaseGrid plain = phase_transition(grid, phase_seed, false);
      std::ofstream os(phase_out, std::ios::trunc);
      if (!os) throw IoError("cannot create phase CSV: " + phase_out);
      os << "variant,rank,rate,successes,trials\n";
      for (size_t ri = 0; ri < grid.ranks.size(); ++ri)
        for (size_t si = 0; si < grid.rates.size(); ++si) {
          os << "weighted," << grid.ranks[ri] << ',' << grid.rates[si] << ',' << weighted.at(ri, si) << ','
             << grid.trials << '\n';
          os << "unweighted," << grid.ranks[ri] << ',' << grid.rates[si] << ',' << plain.at(ri, si) << ','
             << grid.trials << '\n';
        }
      std::cout << "phase: weighted total=" << weighted.total() << " unweighted total=" << plain.total()
                << "\n";
      return 0;
    }

    if (*psens) {
      const std::vector<double> ps = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
      const auto rows = p_sensitivity(ps, psens_trials, psens_seed);
      std::ofstream os(psens_out, std::ios::trunc);
      if (!os) throw IoError("cannot create psens CSV: " + psens_out);
      os << "p,residual,seconds,iterations\n";
      os.precision(17);
      for (const auto& r : rows) os << r.p << ',' << r.residual << ',' << r.seconds << ',' << r.iterations << '\n';
      std::cout << "psens: wrote " << psens_out << "\n";
      return 0;
    }

    if (*metrics_cmd) {
      const Tensor ref = load_tensor(met_ref, "");
      const Tensor est = load_tensor(met_est, "");
      std::cout << metrics_to_json(compute_metrics(est, ref, met_peak)).dump(2) << "\n";
      return 0;
    }

    if (*fg) {
      const Tensor e = read_tensor(fg_in);
      const Tensor mask = foreground_mask(e, fg_window);
      write_tensor(fg_out, mask);
      if (!fg_truth.empty()) {
        const PrecisionRecall pr = precision_recall_f(mask, read_tensor(fg_truth));
        json j = {{"precision", pr.precision}, {"recall", pr.recall}, {"f_measure", pr.f_measure}};
        std::cout << j.dump(2) << "\n";
      }
      return 0;
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace twctv
