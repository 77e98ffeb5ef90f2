#include "biphoton/rto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace biphoton {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;

double probe_p11(const RtoLayout& layout, double phi_b) {
    return coincidence_probabilities({0.0, phi_b, layout}).p11;
}

double probe_p12(const RtoLayout& layout, double phi_b) {
    return coincidence_probabilities({0.0, phi_b, layout}).p12;
}

// Inverse-cosine extraction of one fringe offset from three probes of a
// [1 + cos(phi_b + offset)]/4 curve at phi_b = 0, pi/2, pi/4.
double fit_offset(double p_at_0, double p_at_half_pi, double p_at_quarter_pi) {
    const double c = std::clamp(4.0 * p_at_0 - 1.0, -1.0, 1.0);
    // cos(pi/2 + offset) = -sin(offset)
    const double s = std::clamp(1.0 - 4.0 * p_at_half_pi, -1.0, 1.0);
    if (std::abs(c * c + s * s - 1.0) > 1e-6)
        throw std::runtime_error("degenerate fringe fit: probes are not on a unit-visibility cosine");

    const double theta = std::acos(c);
    const std::array<double, 2> branches{theta, 2.0 * std::numbers::pi - theta};
    double best = branches[0];
    double best_err = std::numeric_limits<double>::infinity();
    for (const double cand : branches) {
        const double predicted_half = (1.0 + std::cos(std::numbers::pi / 2.0 + cand)) / 4.0;
        const double predicted_quarter = (1.0 + std::cos(std::numbers::pi / 4.0 + cand)) / 4.0;
        const double err = std::abs(predicted_half - p_at_half_pi) +
                           std::abs(predicted_quarter - p_at_quarter_pi);
        if (err < best_err) {
            best_err = err;
            best = cand;
        }
    }
    // acos loses half the working precision near c = +-1; atan2 over the
    // same two probes is the identical branch without that loss.
    const double refined = wrap_phase(std::atan2(s, c));
    if (phase_distance(refined, best) > 1e-6)
        throw std::runtime_error("degenerate fringe fit: branch probes disagree");
    const double check = (1.0 + std::cos(std::numbers::pi / 4.0 + refined)) / 4.0;
    if (std::abs(check - p_at_quarter_pi) > kPhaseTol)
        throw std::runtime_error("degenerate fringe fit: quarter-pi probe mismatch");
    return refined;
}

}  // namespace

RtoLayout RtoLayout::random(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    RtoLayout ly;
    ly.phi_w = u(rng);
    ly.phi_x = u(rng);
    ly.phi_y = u(rng);
    ly.phi_z = u(rng);
    ly.mirror_phase = u(rng);
    return ly;
}

const ModeBasis& station_a_basis() {
    static const ModeBasis basis(std::vector<std::string>{"A1", "A2"});
    return basis;
}

const ModeBasis& station_b_basis() {
    static const ModeBasis basis(std::vector<std::string>{"B1", "B2"});
    return basis;
}

const ModeBasis& biphoton_basis() {
    static const ModeBasis basis =
        ModeBasis::product(station_a_basis(), station_b_basis());
    return basis;
}

StateVector prepare_entangled() {
    return StateVector(biphoton_basis(),
                       {complexd(kInvSqrt2, 0.0), complexd(0.0, 0.0),
                        complexd(0.0, 0.0), complexd(kInvSqrt2, 0.0)});
}

StateVector pipeline_state(const RtoPhases& ph) {
    const ModeBasis& ab = biphoton_basis();
    const ModeBasis& a = station_a_basis();
    const ModeBasis& b = station_b_basis();
    const RtoLayout& ly = ph.layout;

    // Mode 1 of each station carries the solid arm, mode 2 the dashed arm.
    const std::vector<Operator> ops{
        lift(phase_shifter(a, ly.phi_w, "A1"), ab, Subsystem::A),
        lift(phase_shifter(a, ly.phi_y, "A2"), ab, Subsystem::A),
        lift(phase_shifter(b, ly.phi_x, "B1"), ab, Subsystem::B),
        lift(phase_shifter(b, ly.phi_z, "B2"), ab, Subsystem::B),
        lift(mirror(a, ly.mirror_phase), ab, Subsystem::A),
        lift(mirror(b, ly.mirror_phase), ab, Subsystem::B),
        lift(phase_shifter(a, ph.phi_a, "A2"), ab, Subsystem::A),
        lift(phase_shifter(b, ph.phi_b, "B1"), ab, Subsystem::B),
        lift(beam_splitter(a), ab, Subsystem::A),
        lift(beam_splitter(b), ab, Subsystem::B),
    };
    return apply(compose(ops), prepare_entangled());
}

complexd nonlocal_amplitude(int i, int j, const RtoPhases& ph) {
    if (i < 1 || i > 2 || j < 1 || j > 2)
        throw std::invalid_argument("detector indices must be 1 or 2");
    return nonlocal_amplitudes(ph)[static_cast<std::size_t>((i - 1) * 2 + (j - 1))];
}

std::array<complexd, 4> nonlocal_amplitudes(const RtoPhases& ph) {
    const StateVector out = pipeline_state(ph);
    const auto& amps = out.amplitudes();
    return {amps[0], amps[1], amps[2], amps[3]};
}

CoincidenceDist coincidence_probabilities(const RtoPhases& ph) {
    const auto amps = nonlocal_amplitudes(ph);
    CoincidenceDist d;
    d.p11 = std::norm(amps[0]);
    d.p12 = std::norm(amps[1]);
    d.p21 = std::norm(amps[2]);
    d.p22 = std::norm(amps[3]);
    return d;
}

FixedPhases derive_fixed(const RtoPhases& ph) {
    const RtoLayout& ly = ph.layout;
    FixedPhases f;
    f.phi_u = fit_offset(probe_p11(ly, 0.0), probe_p11(ly, std::numbers::pi / 2.0),
                         probe_p11(ly, std::numbers::pi / 4.0));
    f.phi_v = fit_offset(probe_p12(ly, 0.0), probe_p12(ly, std::numbers::pi / 2.0),
                         probe_p12(ly, std::numbers::pi / 4.0));
    return f;
}

StationMarginals marginals(const RtoPhases& ph) {
    const CoincidenceDist d = coincidence_probabilities(ph);
    StationMarginals m;
    m.a1 = d.p11 + d.p12;
    m.a2 = d.p21 + d.p22;
    m.b1 = d.p11 + d.p21;
    m.b2 = d.p12 + d.p22;
    return m;
}

Correlation correlation(const RtoPhases& ph) {
    const CoincidenceDist d = coincidence_probabilities(ph);
    Correlation c;
    c.p_same = d.same();
    c.p_different = d.different();
    c.degree = c.p_same - c.p_different;
    return c;
}

}  // namespace biphoton
