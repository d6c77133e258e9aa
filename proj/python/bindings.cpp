#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>

#include "onlinecp/dataset.hpp"
#include "onlinecp/diagnostics.hpp"
#include "onlinecp/error.hpp"
#include "onlinecp/predictor.hpp"
#include "onlinecp/protocol.hpp"
#include "onlinecp/student_t.hpp"

namespace py = pybind11;
using namespace onlinecp;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::vector<Observation> to_stream(const RowMatrix& X, const Vector& y) {
  if (X.rows() != y.size()) throw UsageError("X and y must have the same number of rows");
  std::vector<Observation> out(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = {X.row(i).transpose(), y[i]};
  }
  return out;
}

py::tuple from_stream(const std::vector<Observation>& stream, std::size_t features) {
  RowMatrix X(static_cast<Eigen::Index>(stream.size()), static_cast<Eigen::Index>(features));
  Vector y(static_cast<Eigen::Index>(stream.size()));
  for (std::size_t i = 0; i < stream.size(); ++i) {
    X.row(static_cast<Eigen::Index>(i)) = stream[i].x.transpose();
    y[static_cast<Eigen::Index>(i)] = stream[i].y;
  }
  return py::make_tuple(X, y);
}

FeatureSchedule make_schedule(std::size_t features, std::optional<std::size_t> threshold,
                              double ridge) {
  FeatureSchedule s = FeatureSchedule::defaults(features);
  if (threshold) s.threshold = *threshold;
  s.ridge = ridge;
  s.validate();
  return s;
}

// Ledger columns as (steps x epsilons) arrays.
py::dict ledger_arrays(const OnlineLedger& ledger) {
  const auto n = static_cast<Eigen::Index>(ledger.steps());
  const auto m = static_cast<Eigen::Index>(ledger.epsilons().size());
  RowMatrix err(n, m), cumulative(n, m), length(n, m), median(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& c = ledger.at(static_cast<std::size_t>(i + 1), static_cast<std::size_t>(j));
      err(i, j) = c.err;
      cumulative(i, j) = static_cast<double>(c.cumulative);
      length(i, j) = c.length;
      median(i, j) = c.median;
    }
  }
  py::dict d;
  d["epsilons"] = ledger.epsilons();
  d["err"] = err;
  d["cumulative"] = cumulative;
  d["length"] = length;
  d["median"] = median;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "On-line conformal predictors for linear regression";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::class_<Interval>(m, "Interval")
      .def_readonly("lo", &Interval::lo)
      .def_readonly("hi", &Interval::hi)
      .def_readonly("lo_closed", &Interval::lo_closed)
      .def_readonly("hi_closed", &Interval::hi_closed)
      .def("contains", &Interval::contains);

  py::class_<PredictionRegion>(m, "Region")
      .def_property_readonly("pieces", &PredictionRegion::pieces)
      .def_property_readonly("lower", &PredictionRegion::lower)
      .def_property_readonly("upper", &PredictionRegion::upper)
      .def_property_readonly("length", &PredictionRegion::length)
      .def("empty", &PredictionRegion::empty)
      .def("bounded", &PredictionRegion::bounded)
      .def("is_real_line", &PredictionRegion::is_real_line)
      .def("contains", &PredictionRegion::contains)
      .def("convex_hull", &PredictionRegion::convex_hull)
      .def("is_subset_of", &PredictionRegion::is_subset_of)
      .def("__contains__", &PredictionRegion::contains)
      .def("__eq__", [](const PredictionRegion& a, const PredictionRegion& b) { return a == b; })
      .def("__repr__", [](const PredictionRegion& r) { return "Region(" + r.to_string() + ")"; });

  py::class_<StepForecast>(m, "Forecast")
      .def("region", &StepForecast::region, py::arg("epsilon"))
      .def("p_value", &StepForecast::p_value, py::arg("y"));

  py::class_<OnlinePredictor>(m, "Predictor")
      .def(py::init([](const std::string& kind, std::size_t features, std::size_t mc_samples,
                       std::uint64_t seed, std::optional<std::size_t> schedule_threshold,
                       double ridge) {
             PredictorOptions opt;
             opt.schedule = make_schedule(features, schedule_threshold, ridge);
             opt.mc_samples = mc_samples;
             opt.mc_seed = seed;
             return make_predictor(parse_predictor_kind(kind), features, opt);
           }),
           py::arg("kind"), py::arg("features"), py::arg("mc_samples") = 1000,
           py::arg("seed") = 0, py::arg("schedule_threshold") = py::none(),
           py::arg("ridge") = 0.01)
      .def_property_readonly("kind", [](const OnlinePredictor& p) { return std::string(to_string(p.kind())); })
      .def_property_readonly("features", &OnlinePredictor::features)
      .def_property_readonly("count", &OnlinePredictor::count)
      .def("forecast", &OnlinePredictor::forecast, py::arg("x"), py::arg("tau") = 1.0,
           py::keep_alive<0, 1>())
      .def(
          "update",
          [](OnlinePredictor& p, const Vector& x, double y) { p.update({x, y}); },
          py::arg("x"), py::arg("y"))
      .def("validity_start", &OnlinePredictor::validity_start, py::arg("epsilon"));

  m.def(
      "generate",
      [](std::size_t features, std::size_t observations, std::uint64_t seed, double alpha,
         double noise_sd) {
        SyntheticSpec spec;
        spec.features = features;
        spec.observations = observations;
        spec.seed = seed;
        spec.alpha = alpha;
        spec.noise_sd = noise_sd;
        return from_stream(generate(spec), features);
      },
      py::arg("features") = 100, py::arg("observations") = 600, py::arg("seed") = 0,
      py::arg("alpha") = 100.0, py::arg("noise_sd") = 1.0,
      "Synthetic benchmark data as (X, y).");

  m.def(
      "coefficients",
      [](std::size_t features) {
        SyntheticSpec spec;
        spec.features = features;
        return coefficients(spec);
      },
      py::arg("features") = 100);

  m.def(
      "run_online",
      [](const RowMatrix& X, const Vector& y, const std::string& predictor,
         std::vector<double> epsilons, bool smoothed, std::uint64_t seed, std::size_t mc_samples,
         std::optional<std::size_t> schedule_threshold, double ridge) {
        RunConfig config;
        config.predictor = parse_predictor_kind(predictor);
        config.epsilons = std::move(epsilons);
        config.smoothed = smoothed;
        config.seed = seed;
        config.mc_samples = mc_samples;
        const auto k = static_cast<std::size_t>(X.cols());
        if (k > 0) config.schedule = make_schedule(k, schedule_threshold, ridge);
        const auto stream = to_stream(X, y);
        RunResult result;
        {
          py::gil_scoped_release release;
          result = run_online(config, stream);
        }
        py::dict d = ledger_arrays(result.ledger);
        d["p_values"] = result.trace.p_values;
        d["taus"] = result.trace.taus;
        std::ostringstream csv;
        write_ledger(csv, result.ledger);
        d["ledger_csv"] = csv.str();
        return d;
      },
      py::arg("X"), py::arg("y"), py::arg("predictor") = "iid",
      py::arg("epsilons") = std::vector<double>{0.05, 0.01, 0.005}, py::arg("smoothed") = false,
      py::arg("seed") = 0, py::arg("mc_samples") = 1000,
      py::arg("schedule_threshold") = py::none(), py::arg("ridge") = 0.01,
      "Run the on-line protocol; returns per-step arrays and the ledger CSV.");

  m.def(
      "read_stream",
      [](const std::string& path) {
        const auto stream = read_stream(std::filesystem::path(path));
        return from_stream(stream, stream.empty() ? 0 : stream_dimension(stream));
      },
      py::arg("path"));
  m.def(
      "write_stream",
      [](const std::string& path, const RowMatrix& X, const Vector& y) {
        write_stream(std::filesystem::path(path), to_stream(X, y), static_cast<std::size_t>(X.cols()));
      },
      py::arg("path"), py::arg("X"), py::arg("y"));

  m.def(
      "uniformity_test",
      [](std::vector<double> p, std::vector<double> taus, double level) {
        const auto r = uniformity_test(PValueTrace{std::move(p), std::move(taus)}, level);
        return py::make_tuple(std::string(to_string(r.outcome)), r.ks.statistic, r.ks.p_value);
      },
      py::arg("p_values"), py::arg("taus"), py::arg("level") = 0.01,
      "(outcome, KS statistic, KS p-value).");
  m.def(
      "independence_test",
      [](std::vector<double> values, double level) {
        const auto r = independence_test(values, level);
        return py::make_tuple(std::string(to_string(r.outcome)), r.autocorrelation, r.runs_z);
      },
      py::arg("values"), py::arg("level") = 0.01,
      "(outcome, lag-1 autocorrelation, runs-test z).");
  m.def("binomial_band", &binomial_band, py::arg("trials"), py::arg("p"), py::arg("level") = 0.01);

  m.def("t_cdf", &t_cdf, py::arg("x"), py::arg("df"));
  m.def("t_sf", &t_sf, py::arg("x"), py::arg("df"));
  m.def("t_upper_point", &t_upper_point, py::arg("delta"), py::arg("df"));
}
