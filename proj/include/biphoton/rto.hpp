#pragma once

#include <array>
#include <numbers>
#include <random>

#include "biphoton/optics.hpp"
#include "biphoton/qcore.hpp"

namespace biphoton {

/// Fixed phase shifts contributed by the interferometer layout: phi_w on
/// station A's solid arm, phi_x on station B's solid arm, phi_y on A's
/// dashed arm, phi_z on B's dashed arm, plus the (globally unobservable)
/// mirror phase applied on every arm.
struct RtoLayout {
    double phi_w = 0.0;
    double phi_x = 0.0;
    double phi_y = 0.0;
    double phi_z = 0.0;
    double mirror_phase = kMirrorDefaultPhase;

    /// Layout calibrated so the same-pair fringe offset phi_u vanishes,
    /// making zero phase difference the perfect-correlation point.
    static RtoLayout calibrated() { return RtoLayout{std::numbers::pi, 0.0, 0.0, 0.0, kMirrorDefaultPhase}; }

    /// Uniformly random fixed phases, for layout-independence properties.
    static RtoLayout random(std::mt19937_64& rng);
};

/// Adjustable station phases phi_a, phi_b plus the fixed layout.
struct RtoPhases {
    double phi_a = 0.0;
    double phi_b = 0.0;
    RtoLayout layout = RtoLayout::calibrated();
};

/// Probabilities for the four coincidence pairs (A_i, B_j).
struct CoincidenceDist {
    double p11 = 0.0;
    double p12 = 0.0;
    double p21 = 0.0;
    double p22 = 0.0;

    double sum() const { return p11 + p12 + p21 + p22; }
    double same() const { return p11 + p22; }
    double different() const { return p12 + p21; }
};

/// Fringe offsets extracted from the pipeline: P(A1,B1) follows
/// [1 + cos(phi_b - phi_a + phi_u)]/4 and P(A1,B2) follows
/// [1 + cos(phi_b - phi_a + phi_v)]/4. Any unitary layout yields
/// phi_v = phi_u + pi (mod 2pi).
struct FixedPhases {
    double phi_u = 0.0;
    double phi_v = 0.0;
};

/// Single-detector probabilities; all equal 1/2 at every phase setting.
struct StationMarginals {
    double a1 = 0.0;
    double a2 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
};

struct Correlation {
    double p_same = 0.0;
    double p_different = 0.0;
    double degree = 0.0;  // p_same - p_different
};

const ModeBasis& station_a_basis();
const ModeBasis& station_b_basis();
/// The composite 4-mode basis {A1B1, A1B2, A2B1, A2B2}, A-index major.
const ModeBasis& biphoton_basis();

/// The entangled pair state (|A1B1> + |A2B2>)/sqrt(2).
StateVector prepare_entangled();

/// Final biphoton state after the full layout: fixed arm phases and
/// mirrors, adjustable shifters (phi_a on A's dashed arm, phi_b on B's
/// solid arm), then one splitter per station.
StateVector pipeline_state(const RtoPhases& ph);

/// Coincidence amplitude for the pair (A_i, B_j), i and j in {1, 2}.
/// Each amplitude is a sum of two paths (solid and dashed), which is what
/// makes the coincidence statistics phase dependent.
complexd nonlocal_amplitude(int i, int j, const RtoPhases& ph);

/// All four coincidence amplitudes in (11, 12, 21, 22) order.
std::array<complexd, 4> nonlocal_amplitudes(const RtoPhases& ph);

/// Squared magnitudes of the four coincidence amplitudes.
CoincidenceDist coincidence_probabilities(const RtoPhases& ph);

/// Extract (phi_u, phi_v) by probing the pipeline at phi_a = phi_b = 0
/// and phi_b = pi/2, with a third probe at phi_b = pi/4 to settle the
/// inverse-cosine branch. Throws on a degenerate fit, which cannot occur
/// for a unitary pipeline.
FixedPhases derive_fixed(const RtoPhases& ph);

/// Single-detector probabilities by summing coincidences over the far
/// station. The two fringe terms cancel, so every marginal is 1/2
/// regardless of phases; any other value would open a signaling channel.
StationMarginals marginals(const RtoPhases& ph);

/// P(same), P(different) and their difference C. For the calibrated
/// layout C = cos(phi_b - phi_a).
Correlation correlation(const RtoPhases& ph);

}  // namespace biphoton
