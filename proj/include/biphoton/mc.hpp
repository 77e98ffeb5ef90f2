#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "biphoton/mzi.hpp"
#include "biphoton/rto.hpp"

namespace biphoton {

/// Name of the pinned trial generator. Golden tallies are regenerated if
/// this algorithm ever changes.
inline constexpr std::string_view kGeneratorName = "splitmix64";

/// splitmix64 output for one counter value. Trial t of a run seeded with
/// s draws its uniform from splitmix64_at(s, t), so the draw depends only
/// on (seed, trial index) and chunked runs merge to the same tally.
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t counter);

/// Uniform double in [0, 1) from the top 53 bits of splitmix64_at.
double uniform_at(std::uint64_t seed, std::uint64_t counter);

/// Derive an independent stream seed for a labeled sub-run.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream);

enum class Experiment { mz, rto };

struct RunSpec {
    Experiment experiment = Experiment::rto;
    std::uint64_t n_trials = 1;
    std::uint64_t seed = 0;
    MziConfig mz;     // used when experiment == mz
    RtoPhases rto;    // used when experiment == rto
    std::uint32_t chunks = 1;  // merge bookkeeping only; the tally is chunk-count independent
};

/// Outcome labels with their analytic probabilities, in draw order.
struct Categorical {
    std::vector<std::string> labels;
    std::vector<double> probs;
};

/// The per-trial outcome distribution for a run spec; mz runs draw over
/// {D1, D2, absorbed}, rto runs over the four coincidence pairs.
Categorical outcome_distribution(const RunSpec& spec);

/// Exclusive per-outcome counts; one outcome per trial, counts sum to n.
struct TrialTally {
    std::vector<std::string> labels;
    std::vector<std::uint64_t> counts;
    std::uint64_t n = 0;

    std::uint64_t count_of(std::string_view label) const;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Draw n_trials outcomes by inverse CDF on the analytic distribution.
/// Identical specs produce byte-identical tallies; outcomes with zero
/// probability are never drawn.
TrialTally sample_run(const RunSpec& spec);

/// Merge two tallies over the same label set (associative, commutative).
TrialTally merge(const TrialTally& a, const TrialTally& b);

/// Degree-of-correlation estimator for an rto tally:
/// C_hat = (n_same - n_different)/n, std error sqrt((1 - C_hat^2)/n).
Estimate estimate_C(const TrialTally& tally);

/// Binomial proportion estimate for one outcome label:
/// p_hat = count/n, std error sqrt(p_hat (1 - p_hat)/n).
Estimate estimate_probability(const TrialTally& tally, std::string_view label);

}  // namespace biphoton
