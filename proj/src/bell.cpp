#include "biphoton/bell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace biphoton {

double correlation_at(double a, double b) {
    RtoPhases ph;
    ph.phi_a = a;
    ph.phi_b = b;
    ph.layout = RtoLayout::calibrated();
    return correlation(ph).degree;
}

double chsh_S(const ChshSettings& s) {
    return correlation_at(s.a1, s.b1) - correlation_at(s.a1, s.b2) +
           correlation_at(s.a2, s.b1) + correlation_at(s.a2, s.b2);
}

ChshMcResult chsh_mc(const ChshSettings& s, std::uint64_t n_per_setting,
                     std::uint64_t seed) {
    if (n_per_setting < 1)
        throw std::invalid_argument("chsh_mc requires n_per_setting >= 1");
    const std::array<std::pair<double, double>, 4> pairs{
        std::pair{s.a1, s.b1}, std::pair{s.a1, s.b2},
        std::pair{s.a2, s.b1}, std::pair{s.a2, s.b2}};
    constexpr std::array<double, 4> signs{+1.0, -1.0, +1.0, +1.0};

    ChshMcResult r;
    double var = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        RunSpec spec;
        spec.experiment = Experiment::rto;
        spec.n_trials = n_per_setting;
        spec.seed = derive_stream_seed(seed, k);
        spec.rto.phi_a = pairs[k].first;
        spec.rto.phi_b = pairs[k].second;
        spec.rto.layout = RtoLayout::calibrated();
        r.per_setting[k] = estimate_C(sample_run(spec));
        r.s_hat += signs[k] * r.per_setting[k].value;
        var += r.per_setting[k].std_error * r.per_setting[k].std_error;
    }
    r.sigma_s = std::sqrt(var);
    r.n_sigmas_violation = (r.s_hat - 2.0) / r.sigma_s;
    return r;
}

std::array<double, 16> chsh_deterministic_values() {
    std::array<double, 16> out{};
    std::size_t k = 0;
    for (const double f1 : {-1.0, 1.0})
        for (const double f2 : {-1.0, 1.0})
            for (const double g1 : {-1.0, 1.0})
                for (const double g2 : {-1.0, 1.0})
                    out[k++] = f1 * g1 - f1 * g2 + f2 * g1 + f2 * g2;
    return out;
}

double chsh_classical_bound() {
    const auto values = chsh_deterministic_values();
    return *std::max_element(values.begin(), values.end());
}

}  // namespace biphoton
