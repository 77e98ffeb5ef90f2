#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "biphoton/bell.hpp"
#include "biphoton/cli.hpp"
#include "biphoton/mc.hpp"
#include "biphoton/mzi.hpp"
#include "biphoton/optics.hpp"
#include "biphoton/qcore.hpp"
#include "biphoton/rto.hpp"

namespace py = pybind11;
using namespace biphoton;

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Linear-optics interferometry simulator: state vectors and unitary "
        "elements, single-photon fringes, entangled-pair coincidence "
        "statistics, seeded Monte Carlo sampling and a CHSH test harness";

    // qcore
    py::enum_<Subsystem>(m, "Subsystem")
        .value("A", Subsystem::A)
        .value("B", Subsystem::B);

    py::class_<ModeBasis>(m, "ModeBasis")
        .def(py::init<std::vector<std::string>>(), py::arg("labels"))
        .def_static("product", &ModeBasis::product)
        .def_property_readonly("labels", &ModeBasis::labels)
        .def("index_of", &ModeBasis::index_of)
        .def("is_composite", &ModeBasis::is_composite)
        .def("__len__", &ModeBasis::size)
        .def("__eq__", [](const ModeBasis& a, const ModeBasis& b) { return a == b; });

    py::class_<StateVector>(m, "StateVector")
        .def(py::init<ModeBasis, std::vector<complexd>>(), py::arg("basis"),
             py::arg("amplitudes"))
        .def_static("normalized", &StateVector::normalized)
        .def_static("basis_state", &StateVector::basis_state)
        .def_property_readonly("basis", &StateVector::basis)
        .def_property_readonly("amplitudes", &StateVector::amplitudes)
        .def("amplitude", &StateVector::amplitude)
        .def("norm", &StateVector::norm);

    py::class_<Operator>(m, "Operator")
        .def(py::init<ModeBasis, std::vector<complexd>>(), py::arg("basis"),
             py::arg("matrix"))
        .def_static("identity", &Operator::identity)
        .def_property_readonly("basis", &Operator::basis)
        .def_property_readonly("matrix", &Operator::matrix)
        .def("adjoint", &Operator::adjoint)
        .def("is_unitary", &Operator::is_unitary, py::arg("tol") = kAnalyticTol);

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def(py::init<ModeBasis, std::vector<complexd>>(), py::arg("basis"),
             py::arg("matrix"))
        .def_property_readonly("basis", &DensityMatrix::basis)
        .def_property_readonly("matrix", &DensityMatrix::matrix)
        .def("purity", &DensityMatrix::purity)
        .def("eigenvalues", &DensityMatrix::eigenvalues);

    m.def("tensor", &tensor, "Kronecker product of states over disjoint bases");
    m.def("apply", &apply, "Apply an operator to a state");
    m.def("density_from_pure", &density_from_pure);
    m.def("partial_trace", &partial_trace, py::arg("rho"), py::arg("keep"));
    m.def("probabilities", &probabilities,
          "Born-rule probabilities in basis label order");

    // optics
    m.def("beam_splitter", &beam_splitter, "Symmetric 50-50 beam splitter");
    m.def("phase_shifter", &phase_shifter, py::arg("basis"), py::arg("phi"),
          py::arg("target"));
    m.def("mirror", &mirror, py::arg("basis"),
          py::arg("phase") = kMirrorDefaultPhase);
    m.def("lift", &lift, py::arg("op"), py::arg("composite"), py::arg("which"));
    m.def(
        "compose",
        [](const std::vector<Operator>& ops) {
            return compose(std::span<const Operator>(ops.data(), ops.size()));
        },
        "Compose operators; the first listed acts first");
    m.def("wrap_phase", &wrap_phase);
    m.def("phase_distance", &phase_distance);

    // mzi
    py::enum_<BlockedPath>(m, "BlockedPath")
        .value("none", BlockedPath::none)
        .value("path1", BlockedPath::path1)
        .value("path2", BlockedPath::path2);

    py::class_<MziConfig>(m, "MziConfig")
        .def(py::init([](double phi_1, double phi_2, BlockedPath blocked) {
                 return MziConfig{phi_1, phi_2, blocked};
             }),
             py::arg("phi_1") = 0.0, py::arg("phi_2") = 0.0,
             py::arg("blocked") = BlockedPath::none)
        .def_readwrite("phi_1", &MziConfig::phi_1)
        .def_readwrite("phi_2", &MziConfig::phi_2)
        .def_readwrite("blocked", &MziConfig::blocked);

    py::class_<MziOutcome>(m, "MziOutcome")
        .def_readonly("p_d1", &MziOutcome::p_d1)
        .def_readonly("p_d2", &MziOutcome::p_d2)
        .def_readonly("p_absorbed", &MziOutcome::p_absorbed)
        .def("p_d1_given_detected", &MziOutcome::p_d1_given_detected)
        .def("p_d2_given_detected", &MziOutcome::p_d2_given_detected);

    m.def("mz_basis", &mz_basis, py::return_value_policy::reference);
    m.def("prepare_superposition", &prepare_superposition);
    m.def("mz_probabilities", &mz_probabilities);
    m.def("mz_blocked", &mz_blocked);

    // rto
    py::class_<RtoLayout>(m, "RtoLayout")
        .def(py::init([](double w, double x, double y, double z, double mirror) {
                 return RtoLayout{w, x, y, z, mirror};
             }),
             py::arg("phi_w") = 0.0, py::arg("phi_x") = 0.0,
             py::arg("phi_y") = 0.0, py::arg("phi_z") = 0.0,
             py::arg("mirror_phase") = kMirrorDefaultPhase)
        .def_static("calibrated", &RtoLayout::calibrated)
        .def_readwrite("phi_w", &RtoLayout::phi_w)
        .def_readwrite("phi_x", &RtoLayout::phi_x)
        .def_readwrite("phi_y", &RtoLayout::phi_y)
        .def_readwrite("phi_z", &RtoLayout::phi_z)
        .def_readwrite("mirror_phase", &RtoLayout::mirror_phase);

    py::class_<RtoPhases>(m, "RtoPhases")
        .def(py::init([](double phi_a, double phi_b, RtoLayout layout) {
                 return RtoPhases{phi_a, phi_b, layout};
             }),
             py::arg("phi_a") = 0.0, py::arg("phi_b") = 0.0,
             py::arg("layout") = RtoLayout::calibrated())
        .def_readwrite("phi_a", &RtoPhases::phi_a)
        .def_readwrite("phi_b", &RtoPhases::phi_b)
        .def_readwrite("layout", &RtoPhases::layout);

    py::class_<CoincidenceDist>(m, "CoincidenceDist")
        .def_readonly("p11", &CoincidenceDist::p11)
        .def_readonly("p12", &CoincidenceDist::p12)
        .def_readonly("p21", &CoincidenceDist::p21)
        .def_readonly("p22", &CoincidenceDist::p22)
        .def("sum", &CoincidenceDist::sum)
        .def("same", &CoincidenceDist::same)
        .def("different", &CoincidenceDist::different);

    py::class_<FixedPhases>(m, "FixedPhases")
        .def_readonly("phi_u", &FixedPhases::phi_u)
        .def_readonly("phi_v", &FixedPhases::phi_v);

    py::class_<StationMarginals>(m, "StationMarginals")
        .def_readonly("a1", &StationMarginals::a1)
        .def_readonly("a2", &StationMarginals::a2)
        .def_readonly("b1", &StationMarginals::b1)
        .def_readonly("b2", &StationMarginals::b2);

    py::class_<Correlation>(m, "Correlation")
        .def_readonly("p_same", &Correlation::p_same)
        .def_readonly("p_different", &Correlation::p_different)
        .def_readonly("degree", &Correlation::degree);

    m.def("biphoton_basis", &biphoton_basis, py::return_value_policy::reference);
    m.def("prepare_entangled", &prepare_entangled);
    m.def("pipeline_state", &pipeline_state);
    m.def("nonlocal_amplitude", &nonlocal_amplitude, py::arg("i"), py::arg("j"),
          py::arg("phases"));
    m.def("coincidence_probabilities", &coincidence_probabilities);
    m.def("derive_fixed", &derive_fixed);
    m.def("marginals", &marginals);
    m.def("correlation", &correlation);

    // mc
    py::enum_<Experiment>(m, "Experiment")
        .value("mz", Experiment::mz)
        .value("rto", Experiment::rto);

    py::class_<RunSpec>(m, "RunSpec")
        .def(py::init([](Experiment experiment, std::uint64_t n_trials,
                         std::uint64_t seed, MziConfig mz, RtoPhases rto,
                         std::uint32_t chunks) {
                 return RunSpec{experiment, n_trials, seed, mz, rto, chunks};
             }),
             py::arg("experiment") = Experiment::rto, py::arg("n_trials") = 1,
             py::arg("seed") = 0, py::arg("mz") = MziConfig{},
             py::arg("rto") = RtoPhases{}, py::arg("chunks") = 1)
        .def_readwrite("experiment", &RunSpec::experiment)
        .def_readwrite("n_trials", &RunSpec::n_trials)
        .def_readwrite("seed", &RunSpec::seed)
        .def_readwrite("mz", &RunSpec::mz)
        .def_readwrite("rto", &RunSpec::rto)
        .def_readwrite("chunks", &RunSpec::chunks);

    py::class_<TrialTally>(m, "TrialTally")
        .def_readonly("labels", &TrialTally::labels)
        .def_readonly("counts", &TrialTally::counts)
        .def_readonly("n", &TrialTally::n)
        .def("count_of", &TrialTally::count_of);

    py::class_<Estimate>(m, "Estimate")
        .def_readonly("value", &Estimate::value)
        .def_readonly("std_error", &Estimate::std_error);

    m.def("sample_run", &sample_run);
    m.def("merge", &merge);
    m.def("estimate_C", &estimate_C);
    m.def("estimate_probability", &estimate_probability);
    m.def("uniform_at", &uniform_at, py::arg("seed"), py::arg("counter"));
    m.attr("GENERATOR_NAME") = std::string(kGeneratorName);

    // bell
    py::class_<ChshSettings>(m, "ChshSettings")
        .def(py::init([](double a1, double a2, double b1, double b2) {
                 return ChshSettings{a1, a2, b1, b2};
             }),
             py::arg("a1") = 0.0, py::arg("a2") = 0.0, py::arg("b1") = 0.0,
             py::arg("b2") = 0.0)
        .def_static("optimal", &ChshSettings::optimal)
        .def_readwrite("a1", &ChshSettings::a1)
        .def_readwrite("a2", &ChshSettings::a2)
        .def_readwrite("b1", &ChshSettings::b1)
        .def_readwrite("b2", &ChshSettings::b2);

    py::class_<ChshMcResult>(m, "ChshMcResult")
        .def_readonly("s_hat", &ChshMcResult::s_hat)
        .def_readonly("sigma_s", &ChshMcResult::sigma_s)
        .def_readonly("n_sigmas_violation", &ChshMcResult::n_sigmas_violation)
        .def_readonly("per_setting", &ChshMcResult::per_setting);

    m.def("correlation_at", &correlation_at, py::arg("a"), py::arg("b"));
    m.def("chsh_S", &chsh_S);
    m.def("chsh_mc", &chsh_mc, py::arg("settings"), py::arg("n_per_setting"),
          py::arg("seed"));
    m.def("chsh_deterministic_values", &chsh_deterministic_values);
    m.def("chsh_classical_bound", &chsh_classical_bound);
}
