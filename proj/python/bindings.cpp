#include "isingdual/duality.hpp"
#include "isingdual/exact.hpp"
#include "isingdual/experiment.hpp"
#include "isingdual/lattice_model.hpp"
#include "isingdual/sampling.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <stdexcept>

namespace py = pybind11;
using namespace isingdual;

namespace {

Boundary boundary_from(const std::string& name)
{
    if (name == "periodic")
        return Boundary::periodic_1d;
    if (name == "free")
        return Boundary::free_1d;
    throw std::invalid_argument("boundary must be 'periodic' or 'free'");
}

ChainSpec make_spec(const std::string& estimator, const std::string& domain, std::uint64_t samples,
                    std::uint64_t burn_in, std::uint64_t seed, std::uint64_t stride)
{
    ChainSpec spec;
    if (estimator == "uniform")
        spec.estimator = Estimator::uniform;
    else if (estimator == "gibbs-ot")
        spec.estimator = Estimator::gibbs_ot;
    else
        throw std::invalid_argument("estimator must be 'uniform' or 'gibbs-ot'");
    if (domain == "primal")
        spec.domain = Domain::primal;
    else if (domain == "dual")
        spec.domain = Domain::dual;
    else
        throw std::invalid_argument("domain must be 'primal' or 'dual'");
    spec.samples = samples;
    spec.burn_in = burn_in;
    spec.seed = seed;
    spec.record_stride = stride;
    spec.validate();
    return spec;
}

} // namespace

PYBIND11_MODULE(_isingdual, m)
{
    m.doc() = "Ising partition functions on primal and dual factor graphs";
    m.attr("__version__") = std::string(version);

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<IsingModel>(m, "IsingModel")
        .def_property_readonly("site_count", &IsingModel::site_count)
        .def_property_readonly("edge_count", &IsingModel::edge_count)
        .def_property_readonly("size", &IsingModel::size)
        .def_property_readonly("is_grid", &IsingModel::is_grid)
        .def_property_readonly("couplings", [](const IsingModel& model) {
            return std::vector<double>(model.couplings().begin(), model.couplings().end());
        })
        .def_property_readonly("edges", [](const IsingModel& model) {
            std::vector<std::pair<std::size_t, std::size_t>> out;
            for (const auto& e : model.edges())
                out.emplace_back(e.a, e.b);
            return out;
        });

    m.def("build_chain_model",
          [](std::size_t n, const std::string& boundary, std::vector<double> couplings) {
              return build_chain_model(n, boundary_from(boundary), std::move(couplings));
          },
          py::arg("n"), py::arg("boundary"), py::arg("couplings"));
    m.def("build_grid_model", &build_grid_model, py::arg("m"), py::arg("couplings"));
    m.def("sample_couplings_uniform", &sample_couplings_uniform, py::arg("m"), py::arg("lo"),
          py::arg("hi"), py::arg("seed"));
    m.def("kernel_value", &kernel_value, py::arg("coupling"), py::arg("a"), py::arg("b"));
    m.def("energy", [](const IsingModel& model, const Configuration& x) { return energy(model, x); });
    m.def("log_weight", [](const IsingModel& model, const Configuration& x) { return log_weight(model, x); });

    py::class_<DualFactor>(m, "DualFactor")
        .def_readonly("log_even", &DualFactor::log_even)
        .def_readonly("log_odd", &DualFactor::log_odd)
        .def_readonly("odd_sign", &DualFactor::odd_sign);
    m.def("dft_pair_kernel", &dft_pair_kernel, py::arg("coupling"));

    py::class_<ModifiedDualModel>(m, "ModifiedDualModel")
        .def_property_readonly("edge_count", &ModifiedDualModel::edge_count)
        .def_property_readonly("face_count", &ModifiedDualModel::face_count)
        .def_property_readonly("free_dimension", &ModifiedDualModel::free_dimension)
        .def_property_readonly("site_count", &ModifiedDualModel::site_count);
    m.def("build_modified_dual", &build_modified_dual, py::arg("grid"));
    m.def("face_cycle_basis", &face_cycle_basis, py::arg("m"));
    m.def("expand_faces", [](const ModifiedDualModel& dual, const FaceAssignment& faces) {
        return expand_faces(dual, faces);
    });
    m.def("dual_log_weight",
          [](const ModifiedDualModel& dual, const DualConfiguration& edges, bool check) {
              return dual_log_weight(dual, edges, check);
          },
          py::arg("dual"), py::arg("edges"), py::arg("check_parity") = true);
    m.def("recover_log_Z", py::overload_cast<const ModifiedDualModel&, double>(&recover_log_Z));
    m.def("closed_form_ln_Z_1d", [](const std::vector<double>& j, const std::string& boundary) {
        return closed_form_ln_Z_1d(j, boundary_from(boundary));
    });

    m.def("brute_force_ln_Z", [](const IsingModel& model) { return brute_force_ln_Z(model).ln_Z; });
    m.def("brute_force_dual_ln_Zmod",
          [](const ModifiedDualModel& dual) { return brute_force_dual_ln_Zmod(dual).ln_Z; });
    m.def("brute_force_dual_ln_Z",
          [](const IsingModel& grid) { return brute_force_dual_ln_Z(grid).ln_Z; });
    m.def("closed_form_ln_Z", [](const IsingModel& chain) { return closed_form_ln_Z(chain).ln_Z; });
    m.def("transfer_matrix_1d_ln_Z",
          [](const IsingModel& model) { return transfer_matrix_1d_ln_Z(model).ln_Z; });
    m.def("transfer_matrix_2d_ln_Z",
          [](const IsingModel& model) { return transfer_matrix_2d_ln_Z(model).ln_Z; });

    py::class_<SamplePath>(m, "SamplePath")
        .def_readonly("chain_id", &SamplePath::chain_id)
        .def_readonly("ln_z", &SamplePath::ln_z)
        .def_readonly("std_error", &SamplePath::std_error)
        .def_property_readonly("final_per_site", &SamplePath::final_per_site)
        .def_property_readonly("per_site_std_error", &SamplePath::per_site_std_error)
        .def_property_readonly("points", [](const SamplePath& p) {
            std::vector<std::pair<std::uint64_t, double>> out;
            out.reserve(p.points.size());
            for (const auto& pt : p.points)
                out.emplace_back(pt.sample_index, pt.per_site_log2_z);
            return out;
        });

    m.def("run_chains",
          [](const IsingModel& model, const std::string& estimator, const std::string& domain,
             std::uint64_t samples, std::size_t chains, std::uint64_t burn_in, std::uint64_t seed,
             std::uint64_t stride, std::size_t threads) {
              const ChainSpec spec = make_spec(estimator, domain, samples, burn_in, seed, stride);
              py::gil_scoped_release release;
              return run_chains(spec, model, chains, threads);
          },
          py::arg("model"), py::arg("estimator"), py::arg("domain"), py::arg("samples"),
          py::arg("chains") = 1, py::arg("burn_in") = 1000, py::arg("seed") = 0,
          py::arg("stride") = 100, py::arg("threads") = 1);

    m.def("verify",
          [](std::size_t max_m, std::size_t max_n, std::size_t trials, std::uint64_t seed,
             double tamper_bits) {
              VerifyOptions opts;
              opts.max_m = max_m;
              opts.max_n = max_n;
              opts.trials = trials;
              opts.seed = seed;
              opts.tamper_bits = tamper_bits;
              const VerifyReport r = verify(opts);
              return py::make_tuple(r.passed, r.worst_relative, r.comparisons);
          },
          py::arg("max_m") = 4, py::arg("max_n") = 16, py::arg("trials") = 20, py::arg("seed") = 1,
          py::arg("tamper_bits") = 0.0);

    m.def("run_config",
          [](const std::string& text, std::size_t threads) {
              const ExperimentConfig cfg = parse_config(text);
              RunOptions opts;
              opts.threads = threads;
              return run_experiment(cfg, opts).to_json().dump();
          },
          py::arg("config_json"), py::arg("threads") = 1,
          "Runs a JSON config; returns the manifest as a JSON string.");
}
