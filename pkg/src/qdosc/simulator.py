"""Statevector engine and the exact-evolution oracle.

Amplitudes are stored with qubit 0 as the most significant bit, matching
the index embedding in the circuit module.  Gates are applied one at a
time directly to the state (cost O(2^n) per gate); the full unitary is
never materialized here.  All functions are pure apart from the explicit
in-place methods on StateVector, so independent runs can proceed
concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate, build_protocol_circuit, system_to_wires
from .qops import as_matrix
from .spinmap import PauliCoefficients, reconstruct


class StateVector:
    """Mutable register state of n qubits."""

    def __init__(self, n_qubits: int, amps: np.ndarray | None = None):
        self.n_qubits = n_qubits
        if amps is None:
            amps = np.zeros(1 << n_qubits, dtype=complex)
            amps[0] = 1.0
        else:
            amps = np.asarray(amps, dtype=complex).reshape(1 << n_qubits).copy()
        self.amps = amps

    @classmethod
    def plus_state(cls, n_qubits: int) -> "StateVector":
        dim = 1 << n_qubits
        return cls(n_qubits, np.full(dim, 1.0 / math.sqrt(dim), dtype=complex))

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def apply(self, gate: Gate) -> None:
        n = self.n_qubits
        psi = self.amps.reshape((2,) * n)
        if gate.kind == "ZZ":
            qa, qb = gate.qubits
            lo, hi = np.exp(-0.5j * gate.params[0]), np.exp(0.5j * gate.params[0])
            phase = np.array([[lo, hi], [hi, lo]])
            shape = [2 if ax in (qa, qb) else 1 for ax in range(n)]
            psi *= phase.reshape(shape)
        elif gate.kind == "CX":
            ctrl, targ = gate.qubits
            sub = np.moveaxis(psi, (ctrl, targ), (0, 1))
            sub[1] = sub[1, ::-1].copy()  # overlapping views, must buffer
        elif gate.kind == "GU":
            ctrl, targ = gate.qubits
            sub = np.moveaxis(psi, (ctrl, targ), (0, 1))[1]
            sub[...] = np.tensordot(gate.local_matrix(), sub, axes=([1], [0]))
        else:
            (targ,) = gate.qubits
            sub = np.moveaxis(psi, targ, 0)
            sub[...] = np.tensordot(gate.local_matrix(), sub, axes=([1], [0]))

    def probability(self, qubit: int, value: int) -> float:
        psi = np.moveaxis(self.amps.reshape((2,) * self.n_qubits), qubit, 0)
        return float(np.sum(np.abs(psi[value]) ** 2))

    def expect_z(self, qubit: int) -> float:
        return self.probability(qubit, 0) - self.probability(qubit, 1)


def run_circuit(circ: Circuit, state: StateVector | None = None) -> StateVector:
    """Apply every gate in order to the given state (default |0...0>)."""
    state = state if state is not None else StateVector(circ.n_qubits)
    if state.n_qubits != circ.n_qubits:
        raise ValueError(f"state has {state.n_qubits} qubits, circuit {circ.n_qubits}")
    for g in circ.gates:
        state.apply(g)
    return state


@dataclass(frozen=True)
class MeasurementConfig:
    """Readout mode: exact probe expectation, or a finite seeded shot count."""

    mode: str = "exact"
    shots: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("exact", "shots"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "shots" and self.shots <= 0:
            raise ValueError("shots mode needs a positive shot count")

    @classmethod
    def exact(cls) -> "MeasurementConfig":
        return cls()

    @classmethod
    def with_shots(cls, shots: int, seed: int = 0) -> "MeasurementConfig":
        return cls(mode="shots", shots=shots, seed=seed)


def probe_expectation(d: PauliCoefficients, t: float,
                      cfg: MeasurementConfig | None = None,
                      rng: np.random.Generator | None = None) -> float:
    """Probe observable at time t, read off the compiled protocol circuit.

    Exact mode returns <Z> of q0 after the final basis rotation, which
    equals the probe x-expectation under the evolution.  Shots mode draws
    the q0 outcome counts from a binomial with the exact probability and
    returns (N0 - N1)/S; a fresh generator is seeded from cfg.seed unless
    one is passed in (sample_series threads a single generator through the
    whole series).
    """
    cfg = cfg or MeasurementConfig.exact()
    state = run_circuit(build_protocol_circuit(d, t))
    if cfg.mode == "exact":
        return state.expect_z(0)
    p0 = min(1.0, max(0.0, state.probability(0, 0)))
    gen = rng if rng is not None else np.random.default_rng(cfg.seed)
    n0 = gen.binomial(cfg.shots, p0)
    return (2.0 * n0 - cfg.shots) / cfg.shots


def total_hamiltonian(h) -> np.ndarray:
    """8x8 generator z0 (x) H in level ordering of the system indices."""
    m = as_matrix(h)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 system matrix, got shape {m.shape}")
    return np.kron(np.diag([1.0, -1.0]), m)


def evolve_exact(h, t: float) -> float:
    """Oracle for the probe expectation, bypassing the circuit entirely.

    Computes <+...+| x0 exp(-2 i t z0 (x) H) |+...+> by eigendecomposition
    of the total generator.  Because x0 flips the probe and anticommutes
    with the generator, the value is a weighted sum of cos(2 w_k t) over
    the generator eigenvalues, hence real; the residual imaginary part is
    asserted away.  Accepts a TruncatedOperator, a bare 4x4 matrix, or
    PauliCoefficients.
    """
    if isinstance(h, PauliCoefficients):
        h = reconstruct(h)
    ht = total_hamiltonian(h)
    w, vecs = np.linalg.eigh(ht)
    psi0 = np.full(8, 1.0 / math.sqrt(8.0))
    overlaps = vecs.T.conj() @ psi0
    val = np.sum(np.abs(overlaps) ** 2 * np.exp(-2j * w * t))
    assert abs(val.imag) < 1e-12, "evolution lost the spectral +/- symmetry"
    return float(val.real)


def evolution_target(d: PauliCoefficients, t: float) -> np.ndarray:
    """Exact 8x8 unitary exp(-i t z0 (x) H) in the circuit wire basis.

    This is the matrix the compiled evolution block must reproduce up to a
    global phase.  Computed by eigendecomposition of the Hermitian
    generator, a route independent of the gate compilation.
    """
    hw = system_to_wires(reconstruct(d))
    ht = np.kron(np.diag([1.0, -1.0]), hw)
    w, vecs = np.linalg.eigh(ht)
    return (vecs * np.exp(-1j * w * t)) @ vecs.T.conj()
