#include "biphoton/mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace biphoton {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

bool is_rto_tally(const TrialTally& t) {
    static const std::vector<std::string> want{"A1B1", "A1B2", "A2B1", "A2B2"};
    return t.labels == want;
}

}  // namespace

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter) {
    return mix(seed + (counter + 1) * kGolden);
}

double uniform_at(std::uint64_t seed, std::uint64_t counter) {
    return static_cast<double>(splitmix64_at(seed, counter) >> 11) * 0x1.0p-53;
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
    // Re-mixing decouples the derived stream from the parent counter walk.
    return mix(mix(seed ^ kGolden) + (stream + 1) * kGolden);
}

Categorical outcome_distribution(const RunSpec& spec) {
    Categorical c;
    if (spec.experiment == Experiment::mz) {
        const MziOutcome out = spec.mz.blocked == BlockedPath::none
                                   ? mz_probabilities(spec.mz)
                                   : mz_blocked(spec.mz);
        c.labels = {"D1", "D2", "absorbed"};
        c.probs = {out.p_d1, out.p_d2, out.p_absorbed};
    } else {
        const CoincidenceDist d = coincidence_probabilities(spec.rto);
        c.labels = {"A1B1", "A1B2", "A2B1", "A2B2"};
        c.probs = {d.p11, d.p12, d.p21, d.p22};
    }
    return c;
}

TrialTally sample_run(const RunSpec& spec) {
    if (spec.n_trials < 1)
        throw std::invalid_argument("sample_run requires n_trials >= 1");
    if (spec.chunks < 1)
        throw std::invalid_argument("sample_run requires chunks >= 1");

    const Categorical dist = outcome_distribution(spec);
    std::vector<double> cum(dist.probs.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < dist.probs.size(); ++k) {
        acc += dist.probs[k];
        cum[k] = acc;
    }
    // Fallback bucket for u landing beyond cum.back() through round-off:
    // the last label with nonzero probability, never a zero-probability one.
    std::size_t last_nonzero = 0;
    for (std::size_t k = 0; k < dist.probs.size(); ++k)
        if (dist.probs[k] > 0.0) last_nonzero = k;

    TrialTally tally;
    tally.labels = dist.labels;
    tally.counts.assign(dist.labels.size(), 0);
    tally.n = spec.n_trials;

    // Trials are partitioned into chunks, but each trial's draw depends
    // only on (seed, trial index), so any chunking merges identically.
    const std::uint64_t per = spec.n_trials / spec.chunks;
    std::uint64_t begin = 0;
    for (std::uint32_t c = 0; c < spec.chunks; ++c) {
        const std::uint64_t end =
            c + 1 == spec.chunks ? spec.n_trials : begin + per;
        for (std::uint64_t t = begin; t < end; ++t) {
            const double u = uniform_at(spec.seed, t);
            std::size_t k = 0;
            while (k < cum.size() && u >= cum[k]) ++k;
            if (k == cum.size()) k = last_nonzero;
            ++tally.counts[k];
        }
        begin = end;
    }
    return tally;
}

TrialTally merge(const TrialTally& a, const TrialTally& b) {
    if (a.labels != b.labels)
        throw std::invalid_argument("cannot merge tallies over different labels");
    TrialTally out = a;
    for (std::size_t k = 0; k < out.counts.size(); ++k)
        out.counts[k] += b.counts[k];
    out.n += b.n;
    return out;
}

std::uint64_t TrialTally::count_of(std::string_view label) const {
    for (std::size_t k = 0; k < labels.size(); ++k)
        if (labels[k] == label) return counts[k];
    throw std::invalid_argument("unknown outcome label '" + std::string(label) + "'");
}

Estimate estimate_C(const TrialTally& tally) {
    if (tally.n == 0) throw std::invalid_argument("empty tally");
    if (!is_rto_tally(tally))
        throw std::invalid_argument("estimate_C requires a coincidence tally");
    const double n = static_cast<double>(tally.n);
    const double same =
        static_cast<double>(tally.counts[0] + tally.counts[3]);
    const double diff =
        static_cast<double>(tally.counts[1] + tally.counts[2]);
    Estimate e;
    e.value = (same - diff) / n;
    e.std_error = std::sqrt(std::max(0.0, 1.0 - e.value * e.value) / n);
    return e;
}

Estimate estimate_probability(const TrialTally& tally, std::string_view label) {
    if (tally.n == 0) throw std::invalid_argument("empty tally");
    const double n = static_cast<double>(tally.n);
    const double c = static_cast<double>(tally.count_of(label));
    Estimate e;
    e.value = c / n;
    e.std_error = std::sqrt(e.value * (1.0 - e.value) / n);
    return e;
}

}  // namespace biphoton
