#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "scanorder/chain.hpp"
#include "scanorder/coupling.hpp"
#include "scanorder/errors.hpp"
#include "scanorder/experiment.hpp"
#include "scanorder/lumped.hpp"
#include "scanorder/mixing.hpp"
#include "scanorder/model_io.hpp"
#include "scanorder/spectral.hpp"

namespace py = pybind11;
using namespace scanorder;

namespace {

Eigen::VectorXd pi_of(const StateSpace& s) { return s.pi(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact Markov-chain analysis of random-update and alternating-scan Gibbs samplers";

  auto& error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", error.ptr());

  py::class_<BipartiteModel>(m, "Model")
      .def_property_readonly("size", &BipartiteModel::size)
      .def_property_readonly("n1", &BipartiteModel::n1)
      .def_property_readonly("n2", &BipartiteModel::n2)
      .def_property_readonly("partition", &BipartiteModel::partition)
      .def_property_readonly("edge_count", [](const BipartiteModel& b) { return b.edges().size(); })
      .def("hamiltonian", [](const BipartiteModel& b, const Configuration& c) { return hamiltonian(b, c); })
      .def("weight", [](const BipartiteModel& b, const Configuration& c) { return unnormalized_weight(b, c); })
      .def("conditional", [](const BipartiteModel& b, const Configuration& c, std::size_t x) {
        return conditional_distribution(b, c, x);
      })
      .def("to_json", [](const BipartiteModel& b) { return model_to_json(b).dump(); });

  m.def("rbm", &build_rbm, py::arg("weights"), py::arg("bias1"), py::arg("bias2"));
  m.def("dbm", &build_dbm, py::arg("layer_sizes"), py::arg("weights"), py::arg("biases") = std::vector<Eigen::VectorXd>{});
  m.def("hardcore_knn", &build_hardcore_complete_bipartite, py::arg("n"));
  m.def("random_rbm", &random_bipartite_model, py::arg("n1"), py::arg("n2"), py::arg("m"), py::arg("weight_low"),
        py::arg("weight_high"), py::arg("seed"));
  m.def("zero_rbm", [](std::size_t n1, std::size_t n2) { return random_bipartite_model(n1, n2, 0, 0.0, 0.0, 0); },
        py::arg("n1"), py::arg("n2"));
  m.def("model_from_json", [](const std::string& text) {
    ModelSpec spec = parse_model_json(text);
    return py::make_tuple(std::move(spec.model), spec.id);
  }, py::arg("text"), "Returns (model, model_id).");
  m.def("validate_bipartite", &validate_bipartite);

  py::class_<StateSpace>(m, "StateSpace")
      .def_property_readonly("size", &StateSpace::size)
      .def_property_readonly("configs", &StateSpace::configs)
      .def_property_readonly("pi", &pi_of)
      .def_property_readonly("pi_min", &StateSpace::pi_min)
      .def("index_of", &StateSpace::index_of)
      .def("__len__", &StateSpace::size);
  m.def("enumerate_state_space", &enumerate_state_space, py::arg("model"), py::arg("cap") = kDefaultStateCap);

  py::class_<Kernel>(m, "Kernel")
      .def(py::init([](Eigen::MatrixXd matrix, std::string label) {
             return Kernel{std::move(matrix), StepUnit::composite, std::move(label)};
           }),
           py::arg("matrix"), py::arg("label") = "")
      .def_readonly("matrix", &Kernel::matrix)
      .def_property_readonly("unit", [](const Kernel& k) { return std::string(to_string(k.unit)); })
      .def_readonly("label", &Kernel::label)
      .def_property_readonly("size", &Kernel::size);

  m.def("single_site_kernel", &single_site_kernel, py::arg("model"), py::arg("space"), py::arg("x"));
  m.def("random_update_kernel", &random_update_kernel, py::arg("model"), py::arg("space"), py::arg("lazy") = true);
  m.def("scan_kernels", [](const BipartiteModel& b, const StateSpace& s) {
    ScanKernels k = scan_kernels(b, s);
    py::dict d;
    d["alternating"] = k.alternating;
    d["first_scan"] = k.first_scan;
    d["second_scan"] = k.second_scan;
    d["first_gibbs"] = k.first_gibbs;
    d["second_gibbs"] = k.second_gibbs;
    return d;
  }, py::arg("model"), py::arg("space"));
  m.def("stationary_projector", &stationary_projector, py::arg("pi"));
  m.def("adjoint", py::overload_cast<const Kernel&, const Eigen::VectorXd&>(&adjoint), py::arg("kernel"), py::arg("pi"));
  m.def("reversibilization", py::overload_cast<const Kernel&, const Eigen::VectorXd&>(&reversibilization),
        py::arg("kernel"), py::arg("pi"));
  m.def("is_ergodic", [](const Kernel& k) { return ergodicity_check(k).ergodic(); });

  py::class_<SpectralReport>(m, "SpectralReport")
      .def_readonly("gap", &SpectralReport::gap)
      .def_readonly("second_largest_modulus", &SpectralReport::second_largest_modulus)
      .def_readonly("relaxation_time", &SpectralReport::relaxation_time)
      .def_readonly("reversible", &SpectralReport::reversible)
      .def_readonly("method", &SpectralReport::method);
  m.def("relaxation_time", py::overload_cast<const Kernel&, const Eigen::VectorXd&>(&relaxation_time),
        py::arg("kernel"), py::arg("pi"));
  m.def("deviation_norm", py::overload_cast<const Eigen::MatrixXd&, const Eigen::VectorXd&>(&deviation_norm),
        py::arg("matrix"), py::arg("pi"));
  m.def("general_operator_norm",
        py::overload_cast<const Eigen::MatrixXd&, const Eigen::VectorXd&>(&general_operator_norm), py::arg("op"),
        py::arg("pi"));

  py::class_<RelaxationComparison>(m, "RelaxationComparison")
      .def_readonly("state_count", &RelaxationComparison::state_count)
      .def_readonly("t_rel_as", &RelaxationComparison::t_rel_as)
      .def_readonly("t_rel_ru", &RelaxationComparison::t_rel_ru)
      .def_readonly("holds", &RelaxationComparison::holds)
      .def_readonly("reversibilized_as_norm", &RelaxationComparison::reversibilized_as_norm)
      .def_readonly("random_update_norm", &RelaxationComparison::random_update_norm)
      .def_readonly("contraction_holds", &RelaxationComparison::contraction_holds);
  m.def("compare_relaxation_times", &compare_relaxation_times, py::arg("model"), py::arg("cap") = kDefaultStateCap,
        py::arg("lazy") = true);

  m.attr("DEFAULT_THRESHOLD") = kDefaultThreshold;
  py::class_<MixingReport>(m, "MixingReport")
      .def_readonly("mixing_time", &MixingReport::mixing_time)
      .def_readonly("threshold", &MixingReport::threshold)
      .def_readonly("tv_curve", &MixingReport::tv_curve)
      .def_readonly("truncated", &MixingReport::truncated)
      .def_property_readonly("unit", [](const MixingReport& r) { return std::string(to_string(r.unit)); });
  m.def("tv_distance", [](const std::vector<double>& a, const std::vector<double>& b) { return tv_distance(a, b); });
  m.def("exact_mixing_time",
        py::overload_cast<const Kernel&, const Eigen::VectorXd&, double, std::uint64_t>(&exact_mixing_time),
        py::arg("kernel"), py::arg("pi"), py::arg("threshold") = kDefaultThreshold,
        py::arg("t_max") = kDefaultMaxSteps);
  m.def("mixing_time_by_doubling", &mixing_time_by_doubling, py::arg("kernel"), py::arg("pi"),
        py::arg("threshold") = kDefaultThreshold, py::arg("t_max") = kDefaultMaxSteps);

  py::class_<MixingBoundsReport>(m, "MixingBoundsReport")
      .def_readonly("state_count", &MixingBoundsReport::state_count)
      .def_readonly("pi_min", &MixingBoundsReport::pi_min)
      .def_readonly("t_rel_ru", &MixingBoundsReport::t_rel_ru)
      .def_readonly("t_rel_as", &MixingBoundsReport::t_rel_as)
      .def_readonly("t_mix_ru", &MixingBoundsReport::t_mix_ru)
      .def_readonly("t_mix_as", &MixingBoundsReport::t_mix_as)
      .def_readonly("truncated", &MixingBoundsReport::truncated)
      .def_readonly("relaxation_sandwich", &MixingBoundsReport::relaxation_sandwich)
      .def_readonly("nonreversible_bound", &MixingBoundsReport::nonreversible_bound)
      .def_readonly("mixing_comparison", &MixingBoundsReport::mixing_comparison)
      .def("all_hold", &MixingBoundsReport::all_hold);
  m.def("verify_mixing_bounds", &verify_mixing_bounds, py::arg("model"), py::arg("cap") = kDefaultStateCap,
        py::arg("threshold") = kDefaultThreshold, py::arg("lazy") = true, py::arg("t_max") = kDefaultMaxSteps);

  py::class_<FillReport>(m, "FillReport")
      .def_readonly("reversibilized_gap", &FillReport::reversibilized_gap)
      .def_readonly("min_slack", &FillReport::min_slack)
      .def_readonly("holds", &FillReport::holds)
      .def_property_readonly("point_count", [](const FillReport& r) { return r.points.size(); });
  m.def("verify_fill_inequality", &verify_fill_inequality, py::arg("kernel"), py::arg("pi"), py::arg("t_samples"));

  m.def("lumped_ru_kernel", &lumped_ru_kernel, py::arg("n"), py::arg("lazy") = true);
  m.def("lumped_as_kernel", &lumped_as_kernel, py::arg("n"));
  m.def("lumped_pi", [](std::size_t n) { return LumpedSpace(n).pi(); }, py::arg("n"));

  py::class_<CouplingReport>(m, "CouplingReport")
      .def_property_readonly("sampler", [](const CouplingReport& r) { return std::string(to_string(r.sampler)); })
      .def_readonly("replicates", &CouplingReport::replicates)
      .def_readonly("samples", &CouplingReport::samples)
      .def_readonly("mean", &CouplingReport::mean)
      .def_readonly("median", &CouplingReport::median)
      .def_readonly("q90", &CouplingReport::q90)
      .def_readonly("truncated_count", &CouplingReport::truncated_count)
      .def_readonly("sandwich_violations", &CouplingReport::sandwich_violations);
  m.def("grand_coupling_time",
        [](const BipartiteModel& b, const std::string& sampler, std::uint64_t seed, std::size_t replicates,
           std::uint64_t max_updates, bool lazy) {
          CouplingOptions o;
          o.sampler = parse_sampler(sampler);
          o.seed = seed;
          o.replicates = replicates;
          o.max_updates = max_updates;
          o.lazy = lazy;
          py::gil_scoped_release release;
          return grand_coupling_time(b, o);
        },
        py::arg("model"), py::arg("sampler"), py::arg("seed"), py::arg("replicates") = 50,
        py::arg("max_updates") = 100'000'000, py::arg("lazy") = false);

  m.def("run_experiment", [](const std::string& config_json) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(std::string("config JSON parse error at byte ") + std::to_string(e.byte));
    }
    ExperimentConfig config = config_from_json(doc);
    py::gil_scoped_release release;
    return run_experiment(config).files;
  }, py::arg("config_json"), "Runs a JSON-encoded experiment config; returns the written paths.");
}
