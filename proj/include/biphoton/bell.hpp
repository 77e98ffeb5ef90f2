#pragma once

#include <array>
#include <cstdint>
#include <numbers>

#include "biphoton/mc.hpp"

namespace biphoton {

/// Four-setting CHSH configuration: station A measures at a1 or a2,
/// station B at b1 or b2.
struct ChshSettings {
    double a1 = 0.0;
    double a2 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;

    /// Settings that reach the quantum maximum S = 2*sqrt(2).
    static ChshSettings optimal() {
        return ChshSettings{0.0, std::numbers::pi / 2.0,
                            std::numbers::pi / 4.0,
                            3.0 * std::numbers::pi / 4.0};
    }
};

struct ChshMcResult {
    double s_hat = 0.0;
    double sigma_s = 0.0;
    double n_sigmas_violation = 0.0;
    std::array<Estimate, 4> per_setting{};  // E(a1,b1), E(a1,b2), E(a2,b1), E(a2,b2)
};

/// Correlation E(a, b) evaluated through the calibrated interferometer
/// pipeline; equals cos(b - a).
double correlation_at(double a, double b);

/// S = E(a1,b1) - E(a1,b2) + E(a2,b1) + E(a2,b2) from the analytic
/// correlation. The classical bound is 2; the quantum maximum 2*sqrt(2).
double chsh_S(const ChshSettings& settings);

/// Estimate S from four independent sampled runs of n_per_setting trials
/// each. sigma_s combines the four standard errors in quadrature and
/// n_sigmas_violation = (S_hat - 2)/sigma_s.
ChshMcResult chsh_mc(const ChshSettings& settings,
                     std::uint64_t n_per_setting, std::uint64_t seed);

/// S values of the 16 deterministic local strategies (each station maps
/// its two settings to fixed +-1 outcomes).
std::array<double, 16> chsh_deterministic_values();

/// max over the 16 deterministic strategies; exactly 2.
double chsh_classical_bound();

}  // namespace biphoton
