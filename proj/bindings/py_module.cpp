#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twctv/cli.hpp"
#include "twctv/experiments.hpp"
#include "twctv/foreground.hpp"
#include "twctv/gradient.hpp"
#include "twctv/metrics.hpp"
#include "twctv/shrinkage.hpp"
#include "twctv/solver.hpp"
#include "twctv/tensor_io.hpp"

namespace py = pybind11;
using namespace twctv;

namespace {

Tensor tensor_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  Shape shape(arr.ndim());
  for (py::ssize_t i = 0; i < arr.ndim(); ++i) shape[size_t(i)] = arr.shape(i);
  std::vector<double> values(arr.data(), arr.data() + arr.size());
  return Tensor(std::move(shape), std::move(values));
}

py::array_t<double> array_from_tensor(const Tensor& t) {
  std::vector<py::ssize_t> shape(t.shape().begin(), t.shape().end());
  py::array_t<double> arr(shape);
  std::copy(t.values().begin(), t.values().end(), arr.mutable_data());
  return arr;
}

ObservationMask mask_from_array(const py::array_t<bool, py::array::c_style | py::array::forcecast>& arr) {
  Shape shape(arr.ndim());
  for (py::ssize_t i = 0; i < arr.ndim(); ++i) shape[size_t(i)] = arr.shape(i);
  std::vector<uint8_t> bits(size_t(arr.size()));
  const bool* p = arr.data();
  for (py::ssize_t i = 0; i < arr.size(); ++i) bits[size_t(i)] = p[i] ? 1 : 0;
  return ObservationMask(std::move(shape), std::move(bits));
}

py::array_t<bool> array_from_mask(const ObservationMask& m) {
  std::vector<py::ssize_t> shape(m.shape().begin(), m.shape().end());
  py::array_t<bool> arr(shape);
  bool* p = arr.mutable_data();
  for (int64_t i = 0; i < m.numel(); ++i) p[i] = m.observed(i);
  return arr;
}

SolverConfig config_from_kwargs(const std::string& mode, double p, const py::object& lam, double mu0,
                                double rho, double mu_max, double tol, int max_iters, double c_e,
                                double sigmoid_m, const std::vector<int>& gamma, const std::string& transform,
                                uint64_t seed, bool sv_weights, bool sparse_weights, int threads) {
  SolverConfig cfg;
  cfg.mode = solver_mode_from_string(mode);
  cfg.p = p;
  cfg.lambda = lam.is_none() ? 0.0 : lam.cast<double>();
  cfg.mu0 = mu0;
  cfg.rho = rho;
  cfg.mu_max = mu_max;
  cfg.epsilon = tol;
  cfg.t_max = max_iters;
  cfg.c_e = c_e;
  cfg.sigmoid_m = sigmoid_m;
  cfg.smoothness_modes = gamma;
  cfg.family = transform_family_from_string(transform);
  cfg.transform_seed = seed;
  cfg.sv_weighting = sv_weights;
  cfg.sparse_weighting = sparse_weights;
  cfg.threads = threads;
  return cfg;
}

py::dict result_to_dict(const RecoveryResult& res) {
  py::dict out;
  out["x"] = array_from_tensor(res.x);
  out["e"] = array_from_tensor(res.e);
  out["iterations"] = res.iterations;
  out["converged"] = res.converged;
  out["solve_seconds"] = res.solve_seconds;
  py::array_t<double> hist({py::ssize_t(res.history.size()), py::ssize_t(9)});
  auto h = hist.mutable_unchecked<2>();
  for (size_t i = 0; i < res.history.size(); ++i) {
    const IterationRecord& r = res.history[i];
    h(py::ssize_t(i), 0) = double(r.t);
    h(py::ssize_t(i), 1) = r.dx_inf;
    h(py::ssize_t(i), 2) = r.de_inf;
    h(py::ssize_t(i), 3) = r.feas_inf;
    h(py::ssize_t(i), 4) = r.mu;
    h(py::ssize_t(i), 5) = r.seconds;
    h(py::ssize_t(i), 6) = r.dx_rel_f;
    h(py::ssize_t(i), 7) = r.de_rel_f;
    h(py::ssize_t(i), 8) = r.feas_f;
  }
  out["history"] = hist;
  out["history_columns"] =
      py::make_tuple("t", "dx_inf", "de_inf", "feas_inf", "mu", "seconds", "dx_rel_f", "de_rel_f", "feas_f");
  return out;
}

}  // namespace

PYBIND11_MODULE(_twctv, m) {
  m.doc() = "Low-rank tensor completion and robust PCA under invertible trailing-mode transforms";
  m.attr("__version__") = kToolVersion;

  py::register_exception<ShapeError>(m, "ShapeError");
  py::register_exception<ParamError>(m, "ParamError");
  py::register_exception<IoError>(m, "IoError");
  py::register_exception<NumericError>(m, "NumericError");

  m.def(
      "solve",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& mArr, const py::object& mask,
         const std::string& mode, double p, const py::object& lam, double mu0, double rho, double mu_max,
         double tol, int max_iters, double c_e, double sigmoid_m, const std::vector<int>& gamma,
         const std::string& transform, uint64_t seed, bool sv_weights, bool sparse_weights, int threads) {
        const Tensor t = tensor_from_array(mArr);
        ObservationMask omega = mask.is_none()
                                    ? ObservationMask::all_observed(t.shape())
                                    : mask_from_array(mask.cast<py::array_t<bool, py::array::c_style |
                                                                                      py::array::forcecast>>());
        const SolverConfig cfg = config_from_kwargs(mode, p, lam, mu0, rho, mu_max, tol, max_iters, c_e,
                                                    sigmoid_m, gamma, transform, seed, sv_weights,
                                                    sparse_weights, threads);
        RecoveryResult res;
        {
          py::gil_scoped_release release;
          res = rlrtc_solve(t, omega, cfg);
        }
        return result_to_dict(res);
      },
      py::arg("m"), py::arg("mask") = py::none(), py::arg("mode") = "completion", py::arg("p") = 0.9,
      py::arg("lam") = py::none(), py::arg("mu0") = 1e-4, py::arg("rho") = 1.1, py::arg("mu_max") = 1e10,
      py::arg("tol") = 1e-8, py::arg("max_iters") = 500, py::arg("c_e") = 2.0, py::arg("sigmoid_m") = 10.0,
      py::arg("gamma") = std::vector<int>{}, py::arg("transform") = "dct", py::arg("seed") = 0,
      py::arg("sv_weights") = true, py::arg("sparse_weights") = true, py::arg("threads") = 0,
      "Run the ADMM solver; mode is 'completion', 'trpca' or 'rlrtc'.");

  m.def(
      "gen_synthetic",
      [](const std::vector<int64_t>& shape, int rank, const std::string& transform, uint64_t seed) {
        SyntheticSpec spec{Shape(shape.begin(), shape.end()), rank, transform_family_from_string(transform),
                           seed};
        return array_from_tensor(gen_synthetic(spec));
      },
      py::arg("shape"), py::arg("rank"), py::arg("transform") = "dct", py::arg("seed") = 0);

  m.def(
      "bernoulli_mask",
      [](const std::vector<int64_t>& shape, double rate, uint64_t seed) {
        return array_from_mask(gen_bernoulli_mask(Shape(shape.begin(), shape.end()), rate, seed));
      },
      py::arg("shape"), py::arg("rate"), py::arg("seed") = 0);

  m.def(
      "salt_pepper",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, double level,
         uint64_t seed) { return array_from_tensor(add_salt_pepper(tensor_from_array(x), level, seed)); },
      py::arg("x"), py::arg("level"), py::arg("seed") = 0);

  m.def(
      "m_product",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& y,
         const std::string& transform, uint64_t seed) {
        const Tensor tx = tensor_from_array(x), ty = tensor_from_array(y);
        const TransformSpec spec = build_transform(transform_family_from_string(transform), tx.shape(), seed);
        return array_from_tensor(m_product(tx, ty, spec));
      },
      py::arg("x"), py::arg("y"), py::arg("transform") = "dct", py::arg("seed") = 0);

  m.def(
      "m_svd",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, const std::string& transform,
         uint64_t seed) {
        const Tensor t = tensor_from_array(x);
        const TransformSpec spec = build_transform(transform_family_from_string(transform), t.shape(), seed);
        const MSvdFactors f = m_svd(t, spec);
        return py::make_tuple(array_from_tensor(f.u), array_from_tensor(f.s), array_from_tensor(f.v),
                              f.tubal_rank);
      },
      py::arg("x"), py::arg("transform") = "dct", py::arg("seed") = 0);

  m.def(
      "gtsvt",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, double tau, double p,
         const std::string& transform, double sigmoid_m, uint64_t seed, bool sv_weights) {
        const Tensor t = tensor_from_array(x);
        const TransformSpec spec = build_transform(transform_family_from_string(transform), t.shape(), seed);
        return array_from_tensor(gtsvt(t, tau, p, spec, sigmoid_m, sv_weights));
      },
      py::arg("x"), py::arg("tau"), py::arg("p"), py::arg("transform") = "dct", py::arg("sigmoid_m") = 10.0,
      py::arg("seed") = 0, py::arg("sv_weights") = true);

  m.def(
      "grad",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, int mode) {
        return array_from_tensor(grad(tensor_from_array(x), mode));
      },
      py::arg("x"), py::arg("mode"));
  m.def(
      "grad_adjoint",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x, int mode) {
        return array_from_tensor(grad_adjoint(tensor_from_array(x), mode));
      },
      py::arg("x"), py::arg("mode"));

  m.def(
      "relative_error",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& est,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& ref) {
        return relative_error(tensor_from_array(est), tensor_from_array(ref));
      },
      py::arg("est"), py::arg("ref"));
  m.def(
      "psnr",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& est,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& ref, double peak) {
        return psnr(tensor_from_array(est), tensor_from_array(ref), peak);
      },
      py::arg("est"), py::arg("ref"), py::arg("peak") = 1.0);
  m.def(
      "ergas",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& est,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& ref) {
        return ergas(tensor_from_array(est), tensor_from_array(ref));
      },
      py::arg("est"), py::arg("ref"));

  m.def(
      "foreground_mask",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& e, int window) {
        return array_from_tensor(foreground_mask(tensor_from_array(e), window));
      },
      py::arg("e"), py::arg("window") = 5);
  m.def(
      "precision_recall_f",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& mask,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& truth) {
        const PrecisionRecall pr = precision_recall_f(tensor_from_array(mask), tensor_from_array(truth));
        return py::make_tuple(pr.precision, pr.recall, pr.f_measure);
      },
      py::arg("mask"), py::arg("truth"));

  m.def("default_lambda", [](const std::vector<int64_t>& shape) {
    return default_lambda(Shape(shape.begin(), shape.end()));
  });

  m.def("read_tensor", [](const std::string& path) { return array_from_tensor(read_tensor(path)); });
  m.def(
      "write_tensor",
      [](const std::string& path, const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
         bool as_f32) { write_tensor(path, tensor_from_array(x), as_f32); },
      py::arg("path"), py::arg("x"), py::arg("as_f32") = false);
}
