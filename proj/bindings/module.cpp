#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cspin/chebyshev.hpp"
#include "cspin/dnp.hpp"
#include "cspin/hamiltonian.hpp"
#include "cspin/lattice.hpp"
#include "cspin/observables.hpp"
#include "cspin/runner.hpp"
#include "cspin/sequences.hpp"
#include "cspin/state.hpp"
#include "cspin/theory.hpp"

namespace py = pybind11;
using namespace cspin;

namespace {

StateVector vector_from_array(const py::array_t<cplx>& arr) {
    const auto buf = arr.request();
    const cplx* data = static_cast<const cplx*>(buf.ptr);
    return StateVector(data, data + buf.size);
}

py::array_t<cplx> array_from_vector(const StateVector& v) {
    return py::array_t<cplx>(static_cast<py::ssize_t>(v.size()), v.data());
}

BathPreparation preparation_from_kwargs(const std::string& kind, std::uint64_t seed,
                                        double beta) {
    BathPreparation base;
    if (kind == "haar")
        base = BathPreparation::haar(seed);
    else if (kind == "product-random")
        base = BathPreparation::product_random(seed);
    else if (kind == "product-up")
        base = BathPreparation::product_up();
    else
        throw std::invalid_argument("unknown bath kind: " + kind);
    if (beta > 0.0) return BathPreparation::polarized(base, beta);
    return base;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Central-spin decoupling simulator core";

    py::class_<LatticeSpec>(m, "LatticeSpec")
        .def(py::init<>())
        .def_static("preset", &LatticeSpec::preset, py::arg("name"))
        .def_readwrite("nx", &LatticeSpec::nx)
        .def_readwrite("ny", &LatticeSpec::ny)
        .def_readwrite("width_x", &LatticeSpec::width_x)
        .def_readwrite("width_y", &LatticeSpec::width_y)
        .def_readwrite("shift_x", &LatticeSpec::shift_x)
        .def_readwrite("shift_y", &LatticeSpec::shift_y)
        .def_readwrite("exponent_half", &LatticeSpec::exponent_half)
        .def_readwrite("amplitude", &LatticeSpec::amplitude);

    py::class_<HyperfineSet>(m, "HyperfineSet")
        .def_readonly("couplings", &HyperfineSet::couplings)
        .def_readonly("site_coords", &HyperfineSet::site_coords)
        .def("__len__", &HyperfineSet::size);

    py::class_<CouplingStats>(m, "CouplingStats")
        .def_readonly("min", &CouplingStats::min)
        .def_readonly("max", &CouplingStats::max)
        .def_readonly("sum", &CouplingStats::sum)
        .def_readonly("sum_sq", &CouplingStats::sum_sq)
        .def_readonly("t_star", &CouplingStats::t_star);

    m.def("compute_couplings", &compute_couplings, py::arg("spec"));
    m.def("coupling_stats", &coupling_stats, py::arg("couplings"));

    m.def(
        "prepare_bath",
        [](int n_bath, const HyperfineSet& couplings, const std::string& kind,
           std::uint64_t seed, double beta) {
            const SpinRegister reg{n_bath};
            return array_from_vector(
                prepare_bath(reg, preparation_from_kwargs(kind, seed, beta), couplings));
        },
        py::arg("n_bath"), py::arg("couplings"), py::arg("kind") = "haar",
        py::arg("seed") = 1, py::arg("beta") = 0.0);

    m.def(
        "measure_polarization",
        [](const py::array_t<cplx>& psi, int n_bath) {
            const Polarization p = measure_polarization(vector_from_array(psi),
                                                        SpinRegister{n_bath});
            return py::make_tuple(p.p_k, p.p_mean);
        },
        py::arg("psi"), py::arg("n_bath"));

    m.def(
        "tune_beta_for_p",
        [](double target, const HyperfineSet& couplings, int n_bath,
           const std::string& kind, std::uint64_t seed) {
            const BetaResult r = tune_beta_for_p(
                target, preparation_from_kwargs(kind, seed, 0.0), couplings,
                SpinRegister{n_bath});
            return py::make_tuple(r.beta, r.p_mean);
        },
        py::arg("target"), py::arg("couplings"), py::arg("n_bath"),
        py::arg("kind") = "haar", py::arg("seed") = 1);

    m.def(
        "apply_hamiltonian",
        [](double omega, const HyperfineSet& couplings, const py::array_t<cplx>& psi) {
            return array_from_vector(apply_h({omega, couplings}, vector_from_array(psi)));
        },
        py::arg("omega"), py::arg("couplings"), py::arg("psi"));

    m.def(
        "evolve",
        [](double omega, const HyperfineSet& couplings, py::array_t<cplx> psi, double t,
           double tolerance) {
            const HamiltonianParams params{omega, couplings};
            StateVector v = vector_from_array(psi);
            const Hamiltonian h(params);
            const PropagatorPlan p = plan(h.spectral_bound(), t, tolerance);
            ChebyshevWorkspace ws;
            propagate(p, h, v, &ws);
            return array_from_vector(v);
        },
        py::arg("omega"), py::arg("couplings"), py::arg("psi"), py::arg("t"),
        py::arg("tolerance") = 1e-12);

    py::class_<FidelityTrace>(m, "FidelityTrace")
        .def_readonly("times", &FidelityTrace::times)
        .def_readonly("worst", &FidelityTrace::worst)
        .def_readonly("max_norm_error", &FidelityTrace::max_norm_error)
        .def_property_readonly("per_state", [](const FidelityTrace& t) {
            return py::make_tuple(t.per_state[0], t.per_state[1], t.per_state[2],
                                  t.per_state[3]);
        });

    m.def(
        "run_sequence",
        [](const std::string& kind, double tau, int cycles, double omega,
           const HyperfineSet& couplings, const py::array_t<cplx>& bath, double tolerance,
           int sample_stride, double early_stop_level) {
            SequenceSpec spec{sequence_kind_from_string(kind), tau, cycles, omega};
            RunOptions opts{tolerance, sample_stride, early_stop_level};
            return run_all_states(compile(spec), {omega, couplings},
                                  vector_from_array(bath), opts);
        },
        py::arg("kind"), py::arg("tau"), py::arg("cycles"), py::arg("omega"),
        py::arg("couplings"), py::arg("bath"), py::arg("tolerance") = 1e-12,
        py::arg("sample_stride") = 1, py::arg("early_stop_level") = -1.0);

    m.def(
        "t_threshold",
        [](const std::vector<double>& times, const std::vector<double>& series,
           double level) {
            const Crossing c = t_threshold(times, series, level);
            return py::make_tuple(c.time, c.censored);
        },
        py::arg("times"), py::arg("series"), py::arg("level") = 0.9);

    m.def(
        "spectrum",
        [](const std::vector<double>& times, const std::vector<double>& series,
           bool hann) {
            const Spectrum s = spectrum(times, series,
                                        hann ? SpectrumWindow::Hann : SpectrumWindow::None);
            return py::make_tuple(s.omega, s.magnitude);
        },
        py::arg("times"), py::arg("series"), py::arg("hann") = false);

    m.def(
        "dnp_train",
        [](double p0, double a, double tau_m, double tau_tot, int n_cycles) {
            const DnpTrain t = dnp_train(p0, {a, tau_m, tau_tot, n_cycles});
            return py::make_tuple(t.p_exact, t.p_closed_form);
        },
        py::arg("p0"), py::arg("a"), py::arg("tau_m"), py::arg("tau_tot"),
        py::arg("n_cycles"));

    m.def("polarization_profile", &polarization_profile, py::arg("beta"),
          py::arg("couplings"));

    m.def(
        "predict_magic_peak",
        [](const HyperfineSet& couplings, const std::vector<double>& p_k, double tau) {
            return predict_magic_peak(couplings, p_k, tau);
        },
        py::arg("couplings"), py::arg("p_k"), py::arg("tau"));

    m.def(
        "run_scenario_json",
        [](const std::string& config_json) {
            return run_scenario(ExperimentConfig::from_json_text(config_json));
        },
        py::arg("config_json"));

    m.def("list_scenarios", &list_scenarios);
}
