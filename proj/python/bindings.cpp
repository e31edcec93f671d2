#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>

#include "gces/baselines.hpp"
#include "gces/bench.hpp"
#include "gces/certificates.hpp"
#include "gces/errors.hpp"
#include "gces/libsvm.hpp"
#include "gces/prox.hpp"
#include "gces/solver_gces.hpp"
#include "gces/zoo.hpp"

namespace py = pybind11;
using namespace gces;

namespace {

// A zoo problem as seen from Python: the smooth loss plus the l1 weight.
struct PyProblem {
  ZooProblem zoo;
  std::string kind;

  std::size_t dimension() const { return zoo.smooth->dimension(); }
  double value(const DenseVector& x) const {
    return evaluate(compose(zoo, DenseVector::Zero(x.size())), x).total;
  }
  DenseVector gradient(const DenseVector& x) const { return zoo.smooth->gradient(x); }
};

Gamma0Variant parse_gamma0(const std::string& name) {
  if (name == "proposed1") return Gamma0Variant::Proposed1;
  if (name == "proposed2") return Gamma0Variant::Proposed2;
  if (name == "proposed3") return Gamma0Variant::Proposed3;
  throw InvalidArgument("unknown gamma0 variant '" + name + "'");
}

py::dict trace_to_dict(const SolveResult& r) {
  const auto n = static_cast<Eigen::Index>(r.trace.size());
  DenseVector F(n), gap(n), L(n), alpha(n), gamma(n), lambda(n);
  std::vector<std::uint64_t> grad_calls, prox_calls;
  for (Eigen::Index i = 0; i < n; ++i) {
    const IterationTrace& t = r.trace[static_cast<std::size_t>(i)];
    F[i] = t.F;
    gap[i] = t.gap;
    L[i] = t.L;
    alpha[i] = t.alpha;
    gamma[i] = t.gamma;
    lambda[i] = t.lambda;
    grad_calls.push_back(t.grad_calls);
    prox_calls.push_back(t.prox_calls);
  }
  py::dict trace;
  trace["F"] = F;
  trace["gap"] = gap;
  trace["L"] = L;
  trace["alpha"] = alpha;
  trace["gamma"] = gamma;
  trace["lambda"] = lambda;
  trace["grad_calls"] = grad_calls;
  trace["prox_calls"] = prox_calls;
  py::dict out;
  out["solver"] = r.solver;
  out["solution"] = r.solution;
  out["converged"] = r.converged;
  out["iterations"] = r.trace.size();
  out["trace"] = trace;
  return out;
}

RunOptions options_for(const std::optional<std::pair<DenseVector, double>>& reference) {
  RunOptions o;
  if (reference) o.reference = Reference{reference->first, reference->second, true};
  return o;
}

double default_L0(const CompositeProblem& p, std::optional<double> L0) {
  return L0.value_or(p.lipschitz_hat());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Accelerated composite gradient solvers with certificate checks";

  // Translators are tried newest first, so the base class goes in first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<PyProblem>(m, "Problem")
      .def_property_readonly("dimension", &PyProblem::dimension)
      .def_property_readonly("kind", [](const PyProblem& p) { return p.kind; })
      .def_property_readonly("lipschitz", [](const PyProblem& p) { return p.zoo.smooth->lipschitz_hint(); })
      .def_property_readonly("strong_convexity",
                             [](const PyProblem& p) { return p.zoo.smooth->strong_convexity(); })
      .def_property_readonly("tau", [](const PyProblem& p) { return p.zoo.tau; })
      .def("value", &PyProblem::value, py::arg("x"), "Composite objective F(x).")
      .def("gradient", &PyProblem::gradient, py::arg("x"), "Gradient of the smooth part.");

  m.def(
      "synthetic",
      [](std::size_t m_, int xi, std::uint64_t seed, double tau1, double tau2) {
        SyntheticSpec s{m_, xi, seed, tau1, tau2};
        return PyProblem{quadratic_oracle(make_synthetic(s)), "synthetic"};
      },
      py::arg("m") = 500, py::arg("xi") = 3, py::arg("seed") = 0, py::arg("tau1") = 1e-3,
      py::arg("tau2") = 1e-3, "Diagonal ill-conditioned elastic-net least squares instance.");

  m.def(
      "synthetic_logistic",
      [](std::size_t rows, std::size_t cols, double density, std::uint64_t seed, double tau1, double tau2) {
        SyntheticLogisticSpec s{rows, cols, density, seed, tau1, tau2};
        return PyProblem{logistic_oracle(make_synthetic_logistic(s)), "synthetic_logistic"};
      },
      py::arg("rows") = 200, py::arg("cols") = 100, py::arg("density") = 0.1, py::arg("seed") = 0,
      py::arg("tau1") = 1e-4, py::arg("tau2") = 1e-4, "Sparse elastic-net logistic regression instance.");

  m.def(
      "from_libsvm",
      [](const std::string& path, const std::string& loss, double tau1, double tau2) {
        const LabeledDataset ds = load_libsvm(path);
        if (loss == "quadratic") return PyProblem{quadratic_oracle(quadratic_from_dataset(ds, tau1, tau2)), loss};
        if (loss == "logistic") return PyProblem{logistic_oracle(logistic_from_dataset(ds, tau1, tau2)), loss};
        throw InvalidArgument("loss must be 'quadratic' or 'logistic'");
      },
      py::arg("path"), py::arg("loss") = "quadratic", py::arg("tau1") = 1e-4, py::arg("tau2") = 1e-4);

  m.def(
      "run_gces",
      [](const PyProblem& prob, const DenseVector& x0, const std::string& gamma0, std::optional<double> L0,
         std::size_t max_iters, double tolerance, double eta_u, double eta_d, bool memory,
         std::optional<std::pair<DenseVector, double>> reference) {
        const CompositeProblem p = compose(prob.zoo, x0);
        GcesConfig cfg;
        cfg.gamma0_variant = parse_gamma0(gamma0);
        cfg.L0 = default_L0(p, L0);
        cfg.max_iters = max_iters;
        cfg.tolerance = tolerance;
        cfg.eta_u = eta_u;
        cfg.eta_d = eta_d;
        cfg.memory_policy = memory ? MemoryPolicy::LastIterate : MemoryPolicy::None;
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = run_gces(p, cfg, x0, options_for(reference));
        }
        py::dict out = trace_to_dict(r);
        out["gamma0"] = r.initial.gamma0;
        if (reference) {
          const auto c = certificate_check(r, p, reference->first, reference->second);
          out["certificate_passed"] = c.passed();
          out["gap_violations"] = c.gap_violations;
          out["lambda_violations"] = c.lambda_violations;
        }
        return out;
      },
      py::arg("problem"), py::arg("x0"), py::arg("gamma0") = "proposed1", py::arg("L0") = py::none(),
      py::arg("max_iters") = 1000, py::arg("tolerance") = 1e-10, py::arg("eta_u") = 2.0,
      py::arg("eta_d") = 0.9, py::arg("memory") = true, py::arg("reference") = py::none());

  m.def(
      "run_fista",
      [](const PyProblem& prob, const DenseVector& x0, std::optional<double> L0, std::size_t max_iters,
         double tolerance, std::optional<std::pair<DenseVector, double>> reference) {
        const CompositeProblem p = compose(prob.zoo, x0);
        FistaConfig cfg;
        cfg.L0 = default_L0(p, L0);
        cfg.max_iters = max_iters;
        cfg.tolerance = tolerance;
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = fista_run(p, cfg, x0, options_for(reference));
        }
        return trace_to_dict(r);
      },
      py::arg("problem"), py::arg("x0"), py::arg("L0") = py::none(), py::arg("max_iters") = 1000,
      py::arg("tolerance") = 1e-10, py::arg("reference") = py::none());

  m.def(
      "run_amgs",
      [](const PyProblem& prob, const DenseVector& x0, std::optional<double> L0, std::size_t max_iters,
         double tolerance, std::optional<std::pair<DenseVector, double>> reference) {
        const CompositeProblem p = compose(prob.zoo, x0);
        AmgsConfig cfg;
        cfg.L0 = default_L0(p, L0);
        cfg.max_iters = max_iters;
        cfg.tolerance = tolerance;
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = amgs_run(p, cfg, x0, options_for(reference));
        }
        return trace_to_dict(r);
      },
      py::arg("problem"), py::arg("x0"), py::arg("L0") = py::none(), py::arg("max_iters") = 1000,
      py::arg("tolerance") = 1e-10, py::arg("reference") = py::none());

  m.def(
      "reference_solve",
      [](const PyProblem& prob) {
        ReferenceReport rep;
        {
          py::gil_scoped_release release;
          rep = reference_solve(prob.zoo);
        }
        return py::make_tuple(rep.reference.x_star, rep.reference.f_star, rep.reference.verified);
      },
      py::arg("problem"), "High-accuracy optimum as (x_star, f_star, verified).");

  m.def(
      "prox_l1",
      [](const DenseVector& x, double t) { return prox(ProxSpec::l1(), t, x); }, py::arg("x"), py::arg("t"),
      "Soft-thresholding: argmin_z ||z||_1 + ||z - x||^2 / (2 t).");
  m.def(
      "prox_elastic_net",
      [](const DenseVector& x, double t, double l1_fraction) {
        return prox(ProxSpec::elastic_net(l1_fraction), t, x);
      },
      py::arg("x"), py::arg("t"), py::arg("l1_fraction"));

  m.def(
      "parse_libsvm",
      [](const std::string& text) {
        const LabeledDataset d = parse_libsvm_string(text);
        return py::make_tuple(d.features.to_dense(), d.labels);
      },
      py::arg("text"), "Parses LIBSVM text into (dense features, labels).");

  m.def(
      "run_benchmark",
      [](const std::string& config_path, std::optional<std::string> output_dir, bool offline) {
        RunConfig cfg = load_run_config(config_path);
        if (output_dir) cfg.output_dir = *output_dir;
        BenchOptions opt;
        opt.offline = offline;
        std::string text;
        {
          py::gil_scoped_release release;
          text = run_benchmark(cfg, opt).to_json().dump();
        }
        return py::module_::import("json").attr("loads")(text);
      },
      py::arg("config"), py::arg("output_dir") = py::none(), py::arg("offline") = false,
      "Runs a benchmark config and returns the summary as a dict.");
}
