"""Linear-optics interferometry simulator.

State vectors over labeled mode bases, unitary optical elements,
single-photon interferometer fringes, entangled-pair coincidence
statistics with no-signaling marginals, seeded Monte Carlo sampling and a
CHSH test harness.
"""

from ._core import (
    GENERATOR_NAME,
    BlockedPath,
    ChshMcResult,
    ChshSettings,
    CoincidenceDist,
    Correlation,
    DensityMatrix,
    Estimate,
    Experiment,
    FixedPhases,
    ModeBasis,
    MziConfig,
    MziOutcome,
    Operator,
    RtoLayout,
    RtoPhases,
    RunSpec,
    StateVector,
    StationMarginals,
    Subsystem,
    TrialTally,
    apply,
    beam_splitter,
    biphoton_basis,
    chsh_S,
    chsh_classical_bound,
    chsh_deterministic_values,
    chsh_mc,
    coincidence_probabilities,
    compose,
    correlation,
    correlation_at,
    density_from_pure,
    derive_fixed,
    estimate_C,
    estimate_probability,
    lift,
    marginals,
    merge,
    mirror,
    mz_basis,
    mz_blocked,
    mz_probabilities,
    nonlocal_amplitude,
    partial_trace,
    phase_distance,
    phase_shifter,
    pipeline_state,
    prepare_entangled,
    prepare_superposition,
    probabilities,
    sample_run,
    tensor,
    uniform_at,
    wrap_phase,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
