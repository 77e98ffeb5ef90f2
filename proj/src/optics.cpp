#include "biphoton/optics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace biphoton {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double wrap_phase(double phi) {
    double w = std::fmod(phi, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    // fmod can land exactly on 2pi after the correction when phi is a
    // tiny negative number.
    if (w >= kTwoPi) w -= kTwoPi;
    return w;
}

double phase_distance(double a, double b) {
    const double d = wrap_phase(a - b);
    return std::min(d, kTwoPi - d);
}

Operator beam_splitter(const ModeBasis& basis) {
    if (basis.size() != 2)
        throw std::invalid_argument("beam splitter acts on a 2-mode basis");
    const double r = 1.0 / std::sqrt(2.0);
    return Operator(basis, {complexd(r, 0.0), complexd(0.0, r),
                            complexd(0.0, r), complexd(r, 0.0)});
}

Operator phase_shifter(const ModeBasis& basis, double phi,
                       std::string_view target) {
    const std::size_t t = basis.index_of(target);
    const std::size_t d = basis.size();
    std::vector<complexd> m(d * d, complexd(0.0, 0.0));
    for (std::size_t i = 0; i < d; ++i) m[i * d + i] = complexd(1.0, 0.0);
    m[t * d + t] = std::polar(1.0, wrap_phase(phi));
    return Operator(basis, std::move(m));
}

Operator mirror(const ModeBasis& basis, double phase) {
    const std::size_t d = basis.size();
    const complexd f = std::polar(1.0, wrap_phase(phase));
    std::vector<complexd> m(d * d, complexd(0.0, 0.0));
    for (std::size_t i = 0; i < d; ++i) m[i * d + i] = f;
    return Operator(basis, std::move(m));
}

Operator element(const ElementSpec& spec, const ModeBasis& basis) {
    switch (spec.kind) {
        case ElementSpec::Kind::beam_splitter:
            return beam_splitter(basis);
        case ElementSpec::Kind::phase_shifter:
            return phase_shifter(basis, spec.phase, spec.target_mode);
        case ElementSpec::Kind::mirror:
            return mirror(basis, spec.phase);
    }
    throw std::invalid_argument("unknown element kind");
}

Operator lift(const Operator& op, const ModeBasis& composite, Subsystem which) {
    if (!composite.is_composite())
        throw std::invalid_argument("lift target is not a composite basis");
    const ModeBasis& slot = composite.factor(which);
    if (!(op.basis() == slot))
        throw std::invalid_argument(
            "operator basis does not match the requested subsystem factor");
    const std::size_t da = composite.factor(Subsystem::A).size();
    const std::size_t db = composite.factor(Subsystem::B).size();
    const std::size_t d = composite.size();
    std::vector<complexd> m(d * d, complexd(0.0, 0.0));
    if (which == Subsystem::A) {
        for (std::size_t i = 0; i < da; ++i)
            for (std::size_t k = 0; k < da; ++k)
                for (std::size_t j = 0; j < db; ++j)
                    m[(i * db + j) * d + (k * db + j)] = op.entry(i, k);
    } else {
        for (std::size_t j = 0; j < db; ++j)
            for (std::size_t l = 0; l < db; ++l)
                for (std::size_t i = 0; i < da; ++i)
                    m[(i * db + j) * d + (i * db + l)] = op.entry(j, l);
    }
    return Operator(composite, std::move(m));
}

Operator compose(std::span<const Operator> ops) {
    if (ops.empty())
        throw std::invalid_argument("compose requires at least one operator");
    Operator acc = ops.front();
    for (std::size_t i = 1; i < ops.size(); ++i) acc = multiply(ops[i], acc);
    return acc;
}

}  // namespace biphoton
