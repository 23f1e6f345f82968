"""Release gate: end-to-end contracts the finished pipeline must honor.

Every test below is a shipping requirement.  The tolerances are part of
the contract; if one fails, fix the code, never the number.  The sweep
tests run the same windowed detection settings the command line uses.
"""

import math
import time

import numpy as np
import pytest
from scipy.linalg import expm

from qdosc import (Gate, MeasurementConfig, ModelParams, PauliCoefficients,
                   build_evolution_block, build_hamiltonian,
                   build_protocol_circuit, circuit_unitary, coeffs_h0,
                   detect_levels, dft_real, evolution_target, evolve_exact,
                   exact_diag, match_levels, model_coefficients,
                   pauli_decompose, phase_aligned_distance, probe_expectation,
                   reconstruct, run_circuit, sample_series, spectrum_h0,
                   spectrum_hho_paper, system_to_wires, total_hamiltonian)
from qdosc.cli import PIPELINE_PROMINENCE, PIPELINE_WINDOW

Q_SIX = (0.5, 0.8, 1.0, 1.2, 1.5, 2.0)
Q_SWEEP = tuple(np.round(np.arange(0.5, 2.0001, 0.1), 12))


def run_pipeline(d, m, cfg=None):
    ts = sample_series(d, m=m, cfg=cfg)
    spec = dft_real(ts, window=PIPELINE_WINDOW)
    return ts, detect_levels(spec, n_expected=4,
                             min_prominence=PIPELINE_PROMINENCE)


def all_models(q):
    yield "h0", model_coefficients("h0", q), build_hamiltonian("h0", 4, q)
    for gamma in (0.1, 0.5, 1.0):
        yield (f"ho:{gamma}", model_coefficients("ho", q, gamma=gamma),
               build_hamiltonian("ho", 4, q, ModelParams(gamma=gamma)))
    for delta in (0.1, 0.5):
        yield (f"ao:{delta}", model_coefficients("ao", q, delta=delta),
               build_hamiltonian("ao", 4, q, ModelParams(delta=delta)))


def test_undeformed_baseline_levels():
    """q = 1, default spacing, 4096 samples: levels to 1e-2 in under 10 s."""
    start = time.perf_counter()
    _, lv = run_pipeline(coeffs_h0(1.0), m=4096)
    elapsed = time.perf_counter() - start
    np.testing.assert_allclose(lv.levels, [0.5, 1.5, 2.5, 3.5], atol=1e-2)
    assert elapsed < 10.0, f"baseline run took {elapsed:.1f}s"


def test_levels_match_closed_form_across_deformation():
    """Detected free-model levels track the closed form within half a bin."""
    for q in Q_SIX:
        ts, lv = run_pipeline(coeffs_h0(q), m=2048)
        tol = math.pi / (len(ts.samples) * ts.dt)
        err = match_levels(lv, spectrum_h0(q)).max_error
        assert err < tol, f"q={q}: {err:.2e} vs half-bin {tol:.2e}"


def test_compiled_block_matches_exponential():
    """The evolution block is exact, not an approximation: compare against
    scipy's matrix exponential at every grid point, up to global phase."""
    worst = 0.0
    for q in Q_SIX:
        for t in (0.1, 0.7, 1.3):
            for tag, d, _ in all_models(q):
                target = expm(-1j * t * np.kron(np.diag([1.0, -1.0]),
                                                system_to_wires(reconstruct(d))))
                got = circuit_unitary(build_evolution_block(d, t))
                dist = phase_aligned_distance(got, target)
                assert dist < 1e-9, f"{tag} q={q} t={t}: {dist:.2e}"
                worst = max(worst, dist)
    assert worst < 1e-9


def test_quadratic_sweep_matches_diagonalization():
    """Quadratic-coupling sweep: detected levels vs the block eigensolve at
    every (gamma, q); the shifted-frequency reference stays within 5% of the
    eigensolve at weak coupling."""
    for gamma in (0.1, 0.5, 1.0):
        for q in Q_SWEEP:
            d = model_coefficients("ho", q, gamma=gamma)
            ts, lv = run_pipeline(d, m=1024)
            ref = exact_diag(build_hamiltonian("ho", 4, q,
                                               ModelParams(gamma=gamma)))
            tol = math.pi / (len(ts.samples) * ts.dt)
            err = match_levels(lv, ref).max_error
            assert err < tol, f"gamma={gamma} q={q}: {err:.2e} vs {tol:.2e}"
    for q in Q_SWEEP:
        ref = exact_diag(build_hamiltonian("ho", 4, q, ModelParams(gamma=0.1)))
        shifted = spectrum_hho_paper(q, 0.1)
        rel = np.abs(shifted.levels - ref.levels) / ref.levels
        assert rel.max() < 0.05, f"q={q}: shifted-reference off by {rel.max():.3f}"


def test_quartic_sweep_matches_diagonalization():
    """Quartic-coupling sweep; no closed form exists, the block eigensolve
    is the only reference."""
    for delta in (0.1, 0.5):
        for q in Q_SWEEP:
            d = model_coefficients("ao", q, delta=delta)
            ts, lv = run_pipeline(d, m=1024)
            ref = exact_diag(build_hamiltonian("ao", 4, q,
                                               ModelParams(delta=delta)))
            tol = math.pi / (len(ts.samples) * ts.dt)
            err = match_levels(lv, ref).max_error
            assert err < tol, f"delta={delta} q={q}: {err:.2e} vs {tol:.2e}"


def test_probe_matches_evolution_oracle():
    """Circuit-evaluated probe signal vs direct eigendecomposition of the
    total generator at random (model, q, t) points."""
    rng = np.random.default_rng(404)
    models = ("h0", "ho", "ao")
    for _ in range(50):
        q = rng.uniform(0.5, 2.0)
        t = rng.uniform(0.0, 2.0)
        model = models[rng.integers(3)]
        d = model_coefficients(model, q, gamma=rng.uniform(0.1, 1.0),
                               delta=rng.uniform(0.1, 0.5))
        assert abs(probe_expectation(d, t) - evolve_exact(d, t)) < 1e-8


def test_projection_round_trip_and_closed_forms():
    """Trace projection inverts reconstruction, and every hand-derived
    coefficient formula matches the projection of the built matrix."""
    rng = np.random.default_rng(777)
    for _ in range(100):
        d = PauliCoefficients(*rng.normal(size=6))
        back = pauli_decompose(reconstruct(d))
        assert np.abs(back.as_array() - d.as_array()).max() < 1e-12
    for q in Q_SIX:
        for tag, d, ham in all_models(q):
            dev = np.abs(pauli_decompose(ham).as_array() - d.as_array()).max()
            assert dev < 1e-10, f"{tag} q={q}: {dev:.2e}"


def test_shot_noise_scale_and_level_recovery():
    """Finite-shot readout: the empirical spread follows sqrt((1-mu^2)/S),
    and 1024-shot spectroscopy still lands within 5e-2 of the true levels."""
    d = coeffs_h0(1.0)
    shots = 1024
    for t in (0.3, 0.7, 1.1):
        mu = evolve_exact(d, t)
        vals = [probe_expectation(d, t, MeasurementConfig.with_shots(shots, s))
                for s in range(20)]
        predicted = math.sqrt((1.0 - mu * mu) / shots)
        ratio = np.std(vals, ddof=1) / predicted
        assert 0.75 < ratio < 1.25, f"t={t}: std ratio {ratio:.3f}"

    cfg = MeasurementConfig.with_shots(shots, seed=0)
    _, lv = run_pipeline(d, m=8192, cfg=cfg)
    np.testing.assert_allclose(lv.levels, [0.5, 1.5, 2.5, 3.5], atol=5e-2)


def test_invariant_suite():
    """Structural invariants: unitarity, norm preservation, spectral
    symmetry, the transform's energy identity, and time-reversal evenness."""
    rng = np.random.default_rng(2718)

    # gate unitarity, all kinds
    for kind, nparams, arity in (("H", 0, 1), ("RZ", 1, 1), ("RY", 1, 1),
                                 ("U", 3, 1), ("ZZ", 1, 2), ("CX", 0, 2),
                                 ("GU", 4, 2)):
        params = tuple(rng.uniform(-math.pi, math.pi, size=nparams))
        m = Gate(kind, params, tuple(range(arity))).local_matrix()
        np.testing.assert_allclose(m @ m.conj().T, np.eye(len(m)), atol=1e-12)

    # norm preservation through a full protocol run
    d = model_coefficients("ao", 1.3, delta=0.5)
    state = run_circuit(build_protocol_circuit(d, 0.9))
    assert abs(state.norm() - 1.0) < 1e-12

    # the probe coupling symmetrizes the 8-level spectrum about zero
    for model, kw in (("h0", {}), ("ho", {"gamma": 1.0}), ("ao", {"delta": 0.5})):
        dd = model_coefficients(model, 1.5, **kw)
        w = np.sort(np.linalg.eigvalsh(total_hamiltonian(reconstruct(dd))))
        np.testing.assert_allclose(w + w[::-1], np.zeros(8), atol=1e-12)

    # energy identity of the rectangular-window transform
    ts = sample_series(model_coefficients("ho", 0.8, gamma=0.5), m=256)
    spec = dft_real(ts)
    folded = ts.samples.copy()
    folded[1:] += ts.samples[:0:-1]
    assert len(ts.samples) * np.sum(spec.values**2) == pytest.approx(
        np.sum(folded**2), rel=1e-8)

    # time reversal: conjugating by the probe flip inverts the evolution,
    # so the probe signal is even in t
    u_fwd = evolution_target(d, 0.7)
    u_bwd = evolution_target(d, -0.7)
    x0 = np.kron(np.array([[0.0, 1.0], [1.0, 0.0]]), np.eye(4))
    np.testing.assert_allclose(x0 @ u_fwd @ x0, u_bwd, atol=1e-12)
    for t in (0.4, 1.2):
        assert probe_expectation(d, -t) == pytest.approx(
            probe_expectation(d, t), abs=1e-12)
