#include "biphoton/mc.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"

using namespace biphoton;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

RunSpec rto_spec(double dphi, std::uint64_t n, std::uint64_t seed) {
    RunSpec spec;
    spec.experiment = Experiment::rto;
    spec.n_trials = n;
    spec.seed = seed;
    spec.rto.phi_b = dphi;
    return spec;
}

RunSpec mz_spec(double dphi, std::uint64_t n, std::uint64_t seed) {
    RunSpec spec;
    spec.experiment = Experiment::mz;
    spec.n_trials = n;
    spec.seed = seed;
    spec.mz.phi_2 = dphi;
    return spec;
}

}  // namespace

TEST_CASE("the trial generator is the documented splitmix64 walk") {
    // First outputs of the reference implementation seeded with 0 and 42.
    CHECK(splitmix64_at(0, 0) == 0xE220A8397B1DCDAFULL);
    CHECK(splitmix64_at(0, 1) == 0x6E789E6AA1B965F4ULL);
    CHECK(splitmix64_at(42, 0) == 0xBDD732262FEB6E95ULL);
    const double u = uniform_at(7, 0);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
}

TEST_CASE("identical specs give byte-identical tallies") {
    const TrialTally a = sample_run(rto_spec(kPi / 3.0, 20000, 31337));
    const TrialTally b = sample_run(rto_spec(kPi / 3.0, 20000, 31337));
    CHECK(a.counts == b.counts);
    CHECK(a.labels == b.labels);
    CHECK(a.n == b.n);
}

TEST_CASE("chunked sampling merges to the same tally as a single pass") {
    for (const std::uint32_t chunks : {2u, 3u, 7u, 16u}) {
        RunSpec spec = rto_spec(1.1, 9973, 99);
        const TrialTally whole = sample_run(spec);
        spec.chunks = chunks;
        CHECK(sample_run(spec).counts == whole.counts);
    }
}

TEST_CASE("merge adds counts and rejects mismatched label sets") {
    const TrialTally a = sample_run(rto_spec(0.4, 1000, 1));
    const TrialTally b = sample_run(rto_spec(0.4, 1000, 2));
    const TrialTally ab = merge(a, b);
    CHECK(ab.n == 2000);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(ab.counts[k] == a.counts[k] + b.counts[k]);

    const TrialTally mz = sample_run(mz_spec(0.4, 10, 1));
    CHECK_THROWS_AS(merge(a, mz), std::invalid_argument);
}

TEST_CASE("a single trial lands exactly one count") {
    const TrialTally t = sample_run(rto_spec(2.0, 1, 77));
    std::uint64_t total = 0;
    for (const auto c : t.counts) total += c;
    CHECK(total == 1);
    CHECK(t.n == 1);
}

TEST_CASE("zero-probability outcomes are never drawn") {
    // Perfect correlation: the cross pairs have probability exactly zero.
    const TrialTally t = sample_run(rto_spec(0.0, 10000, 5));
    CHECK(t.count_of("A1B2") == 0);
    CHECK(t.count_of("A2B1") == 0);
    CHECK(t.count_of("A1B1") + t.count_of("A2B2") == 10000);

    // Unit probability draws every trial to the bright port.
    const TrialTally m = sample_run(mz_spec(0.0, 10000, 5));
    CHECK(m.count_of("D1") == 10000);
}

TEST_CASE("empirical coincidence frequencies track the analytic values") {
    const RunSpec spec = rto_spec(kPi / 3.0, 100000, 42);
    const TrialTally t = sample_run(spec);
    const Categorical dist = outcome_distribution(spec);
    for (std::size_t k = 0; k < dist.labels.size(); ++k) {
        const double p = dist.probs[k];
        const double p_hat =
            static_cast<double>(t.counts[k]) / static_cast<double>(t.n);
        const double envelope = 4.0 * std::sqrt(p * (1.0 - p) / 100000.0);
        CHECK(std::abs(p_hat - p) <= envelope);
    }
}

TEST_CASE("estimate_C: frozen tallies and the standard error formula") {
    TrialTally perfect;
    perfect.labels = {"A1B1", "A1B2", "A2B1", "A2B2"};
    perfect.counts = {50, 0, 0, 50};
    perfect.n = 100;
    const Estimate e1 = estimate_C(perfect);
    CHECK(e1.value == doctest::Approx(1.0));
    CHECK(e1.std_error == doctest::Approx(0.0));

    TrialTally flat = perfect;
    flat.counts = {25, 25, 25, 25};
    const Estimate e0 = estimate_C(flat);
    CHECK(e0.value == doctest::Approx(0.0));
    CHECK(e0.std_error == doctest::Approx(0.1));

    TrialTally empty = perfect;
    empty.counts = {0, 0, 0, 0};
    empty.n = 0;
    CHECK_THROWS_AS(estimate_C(empty), std::invalid_argument);
    CHECK_THROWS_AS(estimate_C(sample_run(mz_spec(0.0, 10, 1))),
                    std::invalid_argument);
}

TEST_CASE("estimate_C converges to the analytic degree of correlation") {
    const TrialTally t = sample_run(rto_spec(kPi / 4.0, 1000000, 7));
    const Estimate e = estimate_C(t);
    const double envelope = 4.0 * std::sqrt((1.0 - 0.5) / 1000000.0);
    CHECK(std::abs(e.value - 0.7071067811865476) < envelope);
}

TEST_CASE("estimate_probability: degenerate and sampled cases") {
    TrialTally t;
    t.labels = {"D1", "D2", "absorbed"};
    t.counts = {0, 10, 0};
    t.n = 10;
    const Estimate zero = estimate_probability(t, "D1");
    CHECK(zero.value == doctest::Approx(0.0));
    CHECK(zero.std_error == doctest::Approx(0.0));
    const Estimate one = estimate_probability(t, "D2");
    CHECK(one.value == doctest::Approx(1.0));
    CHECK(one.std_error == doctest::Approx(0.0));
    CHECK_THROWS_AS(estimate_probability(t, "D9"), std::invalid_argument);

    const Estimate half =
        estimate_probability(sample_run(mz_spec(kPi / 2.0, 100000, 3)), "D1");
    CHECK(std::abs(half.value - 0.5) <= 4.0 * std::sqrt(0.25 / 100000.0));
}

TEST_CASE("4-sigma envelope convergence across a 16-point phase grid") {
    int hits = 0, points = 0;
    for (int k = 0; k < 16; ++k) {
        const double dphi = kTwoPi * k / 16.0;
        for (const bool is_mz : {true, false}) {
            const RunSpec spec = is_mz ? mz_spec(dphi, 100000, 1000 + k)
                                       : rto_spec(dphi, 100000, 2000 + k);
            const TrialTally t = sample_run(spec);
            const Categorical dist = outcome_distribution(spec);
            bool ok = true;
            for (std::size_t o = 0; o < dist.labels.size(); ++o) {
                const double p = dist.probs[o];
                const double p_hat =
                    static_cast<double>(t.counts[o]) / static_cast<double>(t.n);
                const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(t.n));
                if (std::abs(p_hat - p) > 4.0 * se) ok = false;
            }
            ++points;
            if (ok) ++hits;
        }
    }
    CHECK(static_cast<double>(hits) / points >= 0.99);
}

TEST_CASE("empirical no-signaling: the A marginal ignores the far phase") {
    std::vector<double> p_hat, se;
    for (int k = 0; k < 8; ++k) {
        const TrialTally t = sample_run(rto_spec(kTwoPi * k / 8.0, 1000000, 4000 + k));
        const double a1 = static_cast<double>(t.count_of("A1B1") + t.count_of("A1B2")) /
                          static_cast<double>(t.n);
        p_hat.push_back(a1);
        se.push_back(std::sqrt(a1 * (1.0 - a1) / static_cast<double>(t.n)));
    }
    for (std::size_t i = 0; i < p_hat.size(); ++i) {
        for (std::size_t j = i + 1; j < p_hat.size(); ++j) {
            const double combined = std::sqrt(se[i] * se[i] + se[j] * se[j]);
            CHECK(std::abs(p_hat[i] - p_hat[j]) < 5.0 * combined);
        }
    }
}

TEST_CASE("run spec validation") {
    RunSpec spec = rto_spec(0.0, 1, 0);
    spec.n_trials = 0;
    CHECK_THROWS_AS(sample_run(spec), std::invalid_argument);
    spec.n_trials = 1;
    spec.chunks = 0;
    CHECK_THROWS_AS(sample_run(spec), std::invalid_argument);
}
