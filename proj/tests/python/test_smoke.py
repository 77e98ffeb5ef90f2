"""Smoke tests for the python bindings against the built extension."""

import math

import pytest

import biphoton as bp


def test_version_and_generator():
    assert bp.__version__
    assert bp.GENERATOR_NAME == "splitmix64"


def test_state_vector_normalization():
    basis = bp.ModeBasis(["A1", "A2"])
    with pytest.raises(ValueError):
        bp.StateVector(basis, [1.0, 1.0])
    s = bp.StateVector.normalized(basis, [1.0, 1.0])
    assert s.norm() == pytest.approx(1.0)
    assert bp.probabilities(s) == pytest.approx([0.5, 0.5])


def test_tensor_and_partial_trace():
    a = bp.StateVector.basis_state(bp.ModeBasis(["A1", "A2"]), "A1")
    b = bp.StateVector.basis_state(bp.ModeBasis(["B1", "B2"]), "B1")
    joint = bp.tensor(a, b)
    assert joint.amplitude("A1B1") == pytest.approx(1.0)

    rho = bp.density_from_pure(bp.prepare_entangled())
    reduced = bp.partial_trace(rho, bp.Subsystem.A)
    assert reduced.purity() == pytest.approx(0.5, abs=1e-12)


def test_mz_fringe():
    out = bp.mz_probabilities(bp.MziConfig(phi_1=0.0, phi_2=0.0))
    assert out.p_d1 == pytest.approx(1.0, abs=1e-12)
    out = bp.mz_probabilities(bp.MziConfig(phi_1=0.0, phi_2=math.pi))
    assert out.p_d1 == pytest.approx(0.0, abs=1e-12)

    blocked = bp.mz_blocked(bp.MziConfig(phi_2=1.3, blocked=bp.BlockedPath.path2))
    assert blocked.p_absorbed == pytest.approx(0.5, abs=1e-12)
    assert blocked.p_d1_given_detected() == pytest.approx(0.5, abs=1e-12)


def test_rto_correlation_and_marginals():
    for dphi, want in [(0.0, 1.0), (math.pi / 2, 0.0), (math.pi, -1.0)]:
        c = bp.correlation(bp.RtoPhases(phi_a=0.0, phi_b=dphi))
        assert c.degree == pytest.approx(want, abs=1e-12)

    m = bp.marginals(bp.RtoPhases(phi_a=0.7, phi_b=2.1))
    for value in (m.a1, m.a2, m.b1, m.b2):
        assert value == pytest.approx(0.5, abs=1e-12)

    fixed = bp.derive_fixed(bp.RtoPhases())
    assert bp.phase_distance(fixed.phi_v, fixed.phi_u + math.pi) < 1e-9


def test_sampling_is_deterministic():
    spec = bp.RunSpec(
        experiment=bp.Experiment.rto,
        n_trials=5000,
        seed=42,
        rto=bp.RtoPhases(phi_b=math.pi / 3),
    )
    first = bp.sample_run(spec)
    second = bp.sample_run(spec)
    assert first.counts == second.counts
    assert sum(first.counts) == 5000

    est = bp.estimate_C(first)
    assert est.value == pytest.approx(math.cos(math.pi / 3), abs=4 * est.std_error)


def test_chsh_harness():
    assert bp.chsh_S(bp.ChshSettings.optimal()) == pytest.approx(2 * math.sqrt(2))
    assert bp.chsh_classical_bound() == 2.0
    result = bp.chsh_mc(bp.ChshSettings.optimal(), 10000, 42)
    assert result.n_sigmas_violation >= 10.0
