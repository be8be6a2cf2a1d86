#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fpnet/errors.hpp"
#include "fpnet/experiments.hpp"
#include "fpnet/ffnet.hpp"
#include "fpnet/generators.hpp"
#include "fpnet/io.hpp"
#include "fpnet/linalg.hpp"
#include "fpnet/optim.hpp"
#include "fpnet/presets.hpp"
#include "fpnet/recurrent.hpp"

namespace py = pybind11;
using namespace fpnet;

namespace {

using Rows = std::vector<std::vector<double>>;

Matrix to_matrix(const Rows& rows) {
  const std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
  std::vector<double> flat;
  flat.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionMismatch("ragged matrix");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(flat));
}

Rows to_rows(const Matrix& m) {
  Rows out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r].assign(m.row(r).begin(), m.row(r).end());
  return out;
}

// configs and reports cross the boundary as JSON text; the Python side
// wraps these in dicts
FixedPointConfig fp_config(const std::string& text) {
  return text.empty() ? FixedPointConfig{} : fixed_point_config_from_json(json::parse(text));
}

py::dict report_dict(const ExperimentReport& rep) {
  py::dict d;
  d["name"] = rep.name;
  d["columns"] = rep.columns;
  d["csv"] = to_csv(rep);
  d["summary"] = rep.summary;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linear-threshold recurrent networks and their feed-forward approximations";

  py::register_exception<ComputationError>(m, "ComputationError", PyExc_RuntimeError);

  py::class_<RecurrentNet>(m, "RecurrentNet")
      .def(py::init([](const Rows& w, std::optional<Vector> b, double tau) {
             Matrix mat = to_matrix(w);
             const std::size_t n = mat.rows();
             return RecurrentNet(std::move(mat), b.value_or(Vector(n, 0.0)), tau);
           }),
           py::arg("weights"), py::arg("biases") = py::none(), py::arg("tau") = 1.0)
      .def_property_readonly("weights", [](const RecurrentNet& n) { return to_rows(n.weights()); })
      .def_property_readonly("biases", &RecurrentNet::bias)
      .def_property_readonly("tau", &RecurrentNet::tau)
      .def_property_readonly("size", &RecurrentNet::size)
      .def("to_json", [](const RecurrentNet& n) { return net_to_json(n).dump(); })
      .def_static("from_json", [](const std::string& s) { return recurrent_from_json(json::parse(s)); })
      .def("__eq__", [](const RecurrentNet& a, const RecurrentNet& b) { return a == b; })
      .def("__repr__", [](const RecurrentNet& n) { return "<RecurrentNet n=" + std::to_string(n.size()) + ">"; });

  py::class_<FeedForwardNet>(m, "FeedForwardNet")
      .def(py::init([](const Rows& w1, const Rows& w2, Vector b1, Vector b2) {
             return FeedForwardNet(to_matrix(w1), to_matrix(w2), std::move(b1), std::move(b2));
           }),
           py::arg("w1"), py::arg("w2"), py::arg("b1"), py::arg("b2"))
      .def_property_readonly("w1", [](const FeedForwardNet& n) { return to_rows(n.w1); })
      .def_property_readonly("w2", [](const FeedForwardNet& n) { return to_rows(n.w2); })
      .def_readonly("b1", &FeedForwardNet::b1)
      .def_readonly("b2", &FeedForwardNet::b2)
      .def("__call__", [](const FeedForwardNet& n, const Vector& x) { return forward(n, x).act2; })
      .def("to_json", [](const FeedForwardNet& n) { return net_to_json(n).dump(); })
      .def_static("from_json", [](const std::string& s) { return feedforward_from_json(json::parse(s)); })
      .def("__eq__", [](const FeedForwardNet& a, const FeedForwardNet& b) { return a == b; });

  m.def("init_ffnet", &init_ffnet, py::arg("n"), py::arg("seed"));

  m.def("eigenvalues", [](const Rows& a) { return eigenvalues(to_matrix(a)); }, py::arg("matrix"));

  m.def(
      "_find_fixed_point",
      [](const RecurrentNet& net, const Vector& i, const std::string& cfg) {
        const auto o = find_fixed_point(net, i, fp_config(cfg));
        py::dict d;
        d["verdict"] = to_string(o.verdict);
        d["f"] = o.f;
        d["t_solved"] = o.t_solved;
        d["lambda_plus"] = o.lambda_plus;
        d["diagnostic"] = o.diagnostic;
        return d;
      },
      py::arg("net"), py::arg("input"), py::arg("config") = "");

  m.def(
      "_integrate",
      [](const RecurrentNet& net, const Vector& x0, const Vector& i, double t_end, const std::string& cfg) {
        auto tr = integrate(net, x0, i, t_end, fp_config(cfg));
        return py::make_tuple(tr.t, tr.x);
      },
      py::arg("net"), py::arg("x0"), py::arg("input"), py::arg("t_end"), py::arg("config") = "");

  m.def(
      "stability_report",
      [](const RecurrentNet& net, const Vector& x) {
        const auto s = stability_report(net, x);
        py::dict d;
        d["active"] = s.active_indices;
        d["lambda_plus"] = std::complex<double>(s.lambda_plus, s.lambda_plus_imag);
        d["eigenvector"] = s.v_plus;
        d["unstable"] = s.unstable;
        return d;
      },
      py::arg("net"), py::arg("state"));

  m.def("analytic_partition_fixed_point", &analytic_partition_fixed_point, py::arg("net"), py::arg("input"),
        py::arg("active"));

  m.def("gen_random_net", &gen_random_net, py::arg("n"), py::arg("seed"));
  m.def(
      "gen_partition_net",
      [](std::size_t partitions, std::size_t per_partition, double w_e, double w_i) {
        return gen_partition_net({partitions, per_partition, w_e, w_i});
      },
      py::arg("partitions") = 2, py::arg("per_partition") = 2, py::arg("w_e") = 2.5, py::arg("w_i") = 8.0);
  m.def(
      "gen_ring_net", [](std::size_t n, double w_e, double w_i) { return gen_ring_net({n, w_e, w_i}); },
      py::arg("n") = 40, py::arg("w_e") = 2.0, py::arg("w_i") = 5.0);
  m.def(
      "ring_input",
      [](std::size_t n, double theta, double kappa, double gamma, double zeta, std::uint64_t seed) {
        return ring_input({n, 2.0, 5.0}, {theta, kappa, gamma, zeta, seed});
      },
      py::arg("n"), py::arg("theta"), py::arg("kappa"), py::arg("gamma") = 0.5, py::arg("zeta") = 0.0,
      py::arg("seed") = 0);

  m.def(
      "_train",
      [](const RecurrentNet& net, const FeedForwardNet& ff0, const std::string& sampler, const std::string& tcfg,
         const std::string& acfg, const std::string& fcfg) {
        TrainReport rep;
        {
          py::gil_scoped_release release;
          rep = train(net, ff0, sampler_from_json(json::parse(sampler)), train_config_from_json(json::parse(tcfg)),
                      adam_config_from_json(json::parse(acfg)), fp_config(fcfg));
        }
        py::dict d;
        d["iterations_run"] = rep.iterations_run;
        d["stop_reason"] = to_string(rep.stop_reason);
        d["best_iteration"] = rep.best_iteration;
        d["best_smoothed_loss"] = rep.best_smoothed_loss;
        d["loss_history"] = rep.loss_history;
        return py::make_tuple(rep.best_net, d);
      });

  m.def("_default_train_config", [] { return to_json(TrainConfig{}).dump(); });
  m.def("_default_adam_config", [] { return to_json(AdamConfig{}).dump(); });
  m.def("_default_fixed_point_config", [] { return to_json(FixedPointConfig{}).dump(); });

  m.def("preset_names", &preset_names);
  m.def("_preset_config", [](const std::string& name, const std::string& overrides) {
    return merge_preset_config(name, json::parse(overrides)).dump();
  });
  m.def("_run_preset", [](const std::string& name, const std::string& config) {
    std::optional<PresetOutput> out;
    {
      py::gil_scoped_release release;
      out = run_preset(name, json::parse(config));
    }
    py::dict d;
    d["net"] = out->net;
    d["ff"] = out->ff;
    d["summary"] = out->summary.dump();
    py::list reports;
    for (const auto& r : out->reports) reports.append(report_dict(r));
    d["reports"] = reports;
    return d;
  });
}
