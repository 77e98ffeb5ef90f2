#include "biphoton/mzi.hpp"

#include <array>
#include <stdexcept>

#include "biphoton/optics.hpp"

namespace biphoton {

namespace {

// Port-to-detector map for the symmetric splitter convention: the photon
// enters port 1, and with equal path phases all probability exits port 2.
// That port is therefore labeled D1.
constexpr std::size_t kPortD1 = 1;
constexpr std::size_t kPortD2 = 0;

std::vector<complexd> pipeline_output(const MziConfig& cfg) {
    const ModeBasis& basis = mz_basis();
    const Operator bs = beam_splitter(basis);
    const Operator ps1 = phase_shifter(basis, cfg.phi_1, "A1");
    const Operator ps2 = phase_shifter(basis, cfg.phi_2, "A2");

    std::vector<complexd> amps =
        StateVector::basis_state(basis, "A1").amplitudes();
    amps = apply_raw(bs, amps);
    amps = apply_raw(ps1, amps);
    amps = apply_raw(ps2, amps);
    if (cfg.blocked != BlockedPath::none) {
        const std::size_t gone = cfg.blocked == BlockedPath::path1 ? 0 : 1;
        amps[gone] = complexd(0.0, 0.0);
    }
    return apply_raw(bs, amps);
}

}  // namespace

const ModeBasis& mz_basis() {
    static const ModeBasis basis(std::vector<std::string>{"A1", "A2"});
    return basis;
}

StateVector prepare_superposition() {
    return apply(beam_splitter(mz_basis()),
                 StateVector::basis_state(mz_basis(), "A1"));
}

MziOutcome mz_probabilities(const MziConfig& cfg) {
    if (cfg.blocked != BlockedPath::none)
        throw std::invalid_argument(
            "mz_probabilities requires both paths open; use mz_blocked");
    const auto out = pipeline_output(cfg);
    MziOutcome r;
    r.p_d1 = std::norm(out[kPortD1]);
    r.p_d2 = std::norm(out[kPortD2]);
    r.p_absorbed = 0.0;
    return r;
}

MziOutcome mz_blocked(const MziConfig& cfg) {
    if (cfg.blocked == BlockedPath::none)
        throw std::invalid_argument("mz_blocked requires a blocked path");
    const auto out = pipeline_output(cfg);
    MziOutcome r;
    r.p_d1 = std::norm(out[kPortD1]);
    r.p_d2 = std::norm(out[kPortD2]);
    r.p_absorbed = 1.0 - r.p_d1 - r.p_d2;
    return r;
}

}  // namespace biphoton
