#pragma once

#include "biphoton/qcore.hpp"

namespace biphoton {

enum class BlockedPath { none, path1, path2 };

struct MziConfig {
    double phi_1 = 0.0;
    double phi_2 = 0.0;
    BlockedPath blocked = BlockedPath::none;
};

/// Detector statistics for one configuration. p_absorbed is nonzero only
/// when a path is blocked; the three entries always sum to 1.
struct MziOutcome {
    double p_d1 = 0.0;
    double p_d2 = 0.0;
    double p_absorbed = 0.0;

    double p_detected() const { return p_d1 + p_d2; }
    double p_d1_given_detected() const { return p_d1 / p_detected(); }
    double p_d2_given_detected() const { return p_d2 / p_detected(); }
};

/// The interferometer's 2-mode path basis {A1, A2}.
const ModeBasis& mz_basis();

/// State just after the input splitter: (|A1> + i|A2>)/sqrt(2), an equal
/// 50-50 superposition of the two paths.
StateVector prepare_superposition();

/// Detector probabilities with both paths open, from the full operator
/// pipeline splitter -> phase shifters -> splitter. Detector D1 is the
/// output port that collects unit probability at phi_2 - phi_1 = 0, so
/// P(D1) = [1 + cos(phi_2 - phi_1)] / 2.
MziOutcome mz_probabilities(const MziConfig& cfg);

/// Detector probabilities with one path blocked: the blocked amplitude is
/// absorbed and the unnormalized remainder propagates to the output
/// splitter. Unconditionally (0.25, 0.25, 0.5); conditioned on detection
/// the two detectors split 50-50 independent of the phases.
MziOutcome mz_blocked(const MziConfig& cfg);

}  // namespace biphoton
