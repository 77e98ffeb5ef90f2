#pragma once

#include <span>
#include <string>
#include <string_view>

#include "biphoton/qcore.hpp"

namespace biphoton {

/// Default global phase contributed by a mirror reflection. Observable
/// statistics never depend on it; it is kept explicit so derived layout
/// phases stay traceable.
inline constexpr double kMirrorDefaultPhase = 1.5707963267948966;  // pi/2

/// Wrap an angle to [0, 2pi).
double wrap_phase(double phi);

/// Distance between two angles modulo 2pi, in [0, pi].
double phase_distance(double a, double b);

/// Description of one optical element.
struct ElementSpec {
    enum class Kind { beam_splitter, phase_shifter, mirror };
    Kind kind = Kind::beam_splitter;
    double phase = 0.0;       // phase_shifter / mirror only; wrapped to [0, 2pi)
    std::string target_mode;  // phase_shifter only
};

/// Symmetric 50-50 beam splitter on a 2-mode basis: transmission 1/sqrt(2),
/// reflection i/sqrt(2).
Operator beam_splitter(const ModeBasis& basis);

/// Diagonal operator multiplying the target mode's amplitude by e^{i phi}.
Operator phase_shifter(const ModeBasis& basis, double phi,
                       std::string_view target);

/// Identity times the global phase factor e^{i phase}.
Operator mirror(const ModeBasis& basis, double phase = kMirrorDefaultPhase);

/// Build the operator described by `spec` over `basis`.
Operator element(const ElementSpec& spec, const ModeBasis& basis);

/// Lift a single-subsystem operator onto the composite basis:
/// U (x) I for subsystem A, I (x) U for subsystem B.
Operator lift(const Operator& op, const ModeBasis& composite, Subsystem which);

/// Product of the listed operators with the first element acting first,
/// i.e. compose({F, G, H}) = H * G * F.
Operator compose(std::span<const Operator> ops);

}  // namespace biphoton
