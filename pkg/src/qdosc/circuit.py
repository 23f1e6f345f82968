"""Exact compilation of the probe-spin evolution onto a three-qubit circuit.

Wire layout: q0 is the probe, q1 carries spin 2 (the diagonal spin), q2
carries spin 1 (the rotated spin).  A four-level system state |n> with
bits (n1 n2) is therefore stored as q1 = n2, q2 = n1; see
system_to_wires() for the induced reordering of 4x4 system matrices.

Conditioned on the computational values of q0 and q1, the generator
z0 * H acts on q2 as a pure single-qubit rotation

    exp(-i t s0 [(d3 + s1 d4) Z + (d5 + s1 d6) X]),   s = +1/-1 for bit 0/1,

so the whole evolution block compiles exactly (no product-formula error)
into phase gates plus controlled single-qubit rotations.  The rotation for
each s1 branch is written as a phased standard gate e^{i chi} U(theta, phi,
lambda); conjugated parameter sets (theta, -phi, -lambda, -chi) give the
inverse branch because phi = lambda + pi makes the matrix symmetric.

Gate matrix conventions (bit 0 first):

    RZ(phi)            diag(e^{-i phi/2}, e^{+i phi/2})
    RY(theta)          [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]
    ZZ(phi)            diag(e^{-i phi/2}, e^{+i phi/2}, e^{+i phi/2}, e^{-i phi/2})
    U(theta, phi, lam) [[cos(theta/2), -e^{i lam} sin(theta/2)],
                        [e^{i phi} sin(theta/2), e^{i(phi+lam)} cos(theta/2)]]
    GU(theta, phi, lam, chi)  e^{i chi} U(theta, phi, lam)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .spinmap import PauliCoefficients

#: reordering of four-level matrix indices into the (q1, q2) wire basis
WIRE_PERMUTATION = (0, 2, 1, 3)

GATE_ARITY = {"H": 1, "RZ": 1, "RY": 1, "U": 1, "ZZ": 2, "CX": 2, "GU": 2}
GATE_NPARAMS = {"H": 0, "RZ": 1, "RY": 1, "U": 3, "ZZ": 1, "CX": 0, "GU": 4}
#: two-qubit kinds whose first qubit is a control rather than a coupling
CONTROLLED = {"CX", "GU"}


def system_to_wires(m: np.ndarray) -> np.ndarray:
    """Reorder a 4x4 system matrix from level order to circuit wire order."""
    p = list(WIRE_PERMUTATION)
    return np.asarray(m)[np.ix_(p, p)]


def u_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([
        [c, -np.exp(1j * lam) * s],
        [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c],
    ])


@dataclass(frozen=True)
class Gate:
    """One circuit element: kind, parameter tuple, qubit tuple.

    For controlled kinds (CX, GU) qubits = (control, target); for ZZ the
    two qubits enter symmetrically.
    """

    kind: str
    params: tuple[float, ...]
    qubits: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != GATE_ARITY[self.kind]:
            raise ValueError(f"{self.kind} acts on {GATE_ARITY[self.kind]} qubit(s), "
                             f"got {self.qubits}")
        if len(self.params) != GATE_NPARAMS[self.kind]:
            raise ValueError(f"{self.kind} takes {GATE_NPARAMS[self.kind]} parameter(s), "
                             f"got {self.params}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in {self.qubits}")

    def local_matrix(self) -> np.ndarray:
        """Gate matrix on its own qubits: 2x2, or 4x4 for ZZ; for controlled
        kinds this is the 2x2 applied to the target when the control is 1."""
        k, p = self.kind, self.params
        if k == "H":
            return np.array([[1, 1], [1, -1]]) / np.sqrt(2) + 0j
        if k == "RZ":
            return np.diag([np.exp(-0.5j * p[0]), np.exp(0.5j * p[0])])
        if k == "RY":
            c, s = math.cos(p[0] / 2.0), math.sin(p[0] / 2.0)
            return np.array([[c, -s], [s, c]]) + 0j
        if k == "ZZ":
            lo, hi = np.exp(-0.5j * p[0]), np.exp(0.5j * p[0])
            return np.diag([lo, hi, hi, lo])
        if k == "CX":
            return np.array([[0, 1], [1, 0]]) + 0j
        if k == "U":
            return u_matrix(*p)
        # GU
        return np.exp(1j * p[3]) * u_matrix(p[0], p[1], p[2])


@dataclass
class Circuit:
    n_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def add(self, kind: str, params: tuple[float, ...], qubits: tuple[int, ...]):
        g = Gate(kind, tuple(float(x) for x in params), tuple(qubits))
        if max(g.qubits) >= self.n_qubits:
            raise ValueError(f"gate {g} exceeds register of {self.n_qubits} qubits")
        self.gates.append(g)
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def to_text(self) -> str:
        """Line-oriented serialization: one gate per line,

            KIND(p1,p2,...) q...

        parameters in full double precision (repr), qubits space-separated,
        control first for controlled kinds.  Parameterless kinds omit the
        parentheses.
        """
        lines = [f"qubits {self.n_qubits}"]
        for g in self.gates:
            head = g.kind
            if g.params:
                head += "(" + ",".join(repr(p) for p in g.params) + ")"
            lines.append(head + " " + " ".join(str(qb) for qb in g.qubits))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
        if not lines or not lines[0].startswith("qubits "):
            raise ValueError("first line must declare 'qubits N'")
        circ = cls(n_qubits=int(lines[0].split()[1]))
        for ln in lines[1:]:
            head, *qubits = ln.split()
            if "(" in head:
                kind, rest = head.split("(", 1)
                params = tuple(float(x) for x in rest.rstrip(")").split(","))
            else:
                kind, params = head, ()
            circ.add(kind, params, tuple(int(qb) for qb in qubits))
        return circ


@dataclass(frozen=True)
class ProtocolAngles:
    """All compiled angles for one (coefficients, t) pair.

    The two conditioned branches are labeled _p (s1 = +1, q1 bit 0) and
    _m (s1 = -1, q1 bit 1).  j_* is the branch rotation rate; a branch with
    j_* = 0 evolves trivially and compiles to no gate, in which case its
    angle fields are zeros by convention.
    """

    phi1: float
    phi2: float
    j_p: float
    j_m: float
    alpha_p: float
    alpha_m: float
    beta_p: float
    beta_m: float
    jt_p: float
    jt_m: float
    theta_p: float
    theta_m: float
    lam_p: float
    lam_m: float
    phi_p: float
    phi_m: float
    chi_p: float
    chi_m: float


def _branch_angles(a: float, b: float, t: float) -> tuple[float, ...]:
    """Angles (j, alpha, beta, jt, theta, lam, phi, chi) for one branch.

    Solves e^{i chi} U(theta, phi, lam) = exp(-i jt (alpha Z + beta X))
    exactly:

        theta = 2 asin(beta sin(jt))
        lam

 chosen so that sin(lam) cos(theta/2) = cos(jt) and
        cos(lam) cos(theta/2) = -alpha sin(jt); then phi = lam + pi and
        chi = pi/2 - lam.

    When cos(theta/2) = 0 the rotation is a pure flip and lam drops out of
    the product; it is set to 0.
    """
    j = math.hypot(a, b)
    if j == 0.0:
        return (0.0,) * 8
    alpha, beta = a / j, b / j
    jt = j * t
    sin_jt, cos_jt = math.sin(jt), math.cos(jt)
    theta = 2.0 * math.asin(max(-1.0, min(1.0, beta * sin_jt)))
    half_c = math.cos(theta / 2.0)
    lam = 0.0 if half_c < 1e-12 else math.atan2(cos_jt, -alpha * sin_jt)
    return (j, alpha, beta, jt, theta, lam, lam + math.pi, math.pi / 2.0 - lam)


def protocol_angles(d: PauliCoefficients, t: float) -> ProtocolAngles:
    """Compute every gate angle of the evolution block for time t."""
    jp, ap, bp, jtp, thp, lap, php, chp = _branch_angles(d.d3 + d.d4, d.d5 + d.d6, t)
    jm, am, bm, jtm, thm, lam, phm, chm = _branch_angles(d.d3 - d.d4, d.d5 - d.d6, t)
    return ProtocolAngles(
        phi1=2.0 * d.d1 * t, phi2=2.0 * d.d2 * t,
        j_p=jp, j_m=jm, alpha_p=ap, alpha_m=am, beta_p=bp, beta_m=bm,
        jt_p=jtp, jt_m=jtm, theta_p=thp, theta_m=thm,
        lam_p=lap, lam_m=lam, phi_p=php, phi_m=phm, chi_p=chp, chi_m=chm,
    )


def build_evolution_block(d: PauliCoefficients, t: float) -> Circuit:
    """The standalone evolution block: equals exp(-i t z0 H) up to a global
    phase, with H in the wire basis (see system_to_wires).

    Gate order: probe phase, first-branch rotation, probe/spin-2 coupling
    phase, then the controlled ladder with a CX pair rerouting the controls
    of the middle two rotations through q1.  A branch with j = 0 emits no
    rotation gates.
    """
    ang = protocol_angles(d, t)
    circ = Circuit(3)
    circ.add("RZ", (ang.phi1,), (0,))
    if ang.j_p != 0.0:
        circ.add("U", (ang.theta_p, ang.phi_p, ang.lam_p), (2,))
    circ.add("ZZ", (ang.phi2,), (0, 1))
    if ang.j_p != 0.0:
        circ.add("GU", (ang.theta_p, -ang.phi_p, -ang.lam_p, -ang.chi_p), (0, 2))
    circ.add("CX", (), (0, 1))
    if ang.j_p != 0.0:
        circ.add("GU", (ang.theta_p, -ang.phi_p, -ang.lam_p, -ang.chi_p), (1, 2))
    if ang.j_m != 0.0:
        circ.add("GU", (ang.theta_m, ang.phi_m, ang.lam_m, ang.chi_m), (1, 2))
    circ.add("CX", (), (0, 1))
    if ang.j_m != 0.0:
        circ.add("GU", (ang.theta_m, -ang.phi_m, -ang.lam_m, -ang.chi_m), (0, 2))
    return circ


def build_protocol_circuit(d: PauliCoefficients, t: float) -> Circuit:
    """Full probe protocol: plus-state preparation on all wires, the
    evolution block, and the probe basis rotation before readout."""
    circ = Circuit(3)
    for qb in range(3):
        circ.add("H", (), (qb,))
    circ.gates.extend(build_evolution_block(d, t).gates)
    circ.add("RY", (-math.pi / 2.0,), (0,))
    return circ


def _embed(gate: Gate, n: int) -> np.ndarray:
    """Dense 2^n x 2^n matrix of a gate, bit 0 most significant."""
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    m = gate.local_matrix()
    if gate.kind in CONTROLLED:
        ctrl, targ = gate.qubits
        cbit, tbit = n - 1 - ctrl, n - 1 - targ
        for k in range(dim):
            if (k >> cbit) & 1 == 0:
                out[k, k] = 1.0
            else:
                tv = (k >> tbit) & 1
                for tv2 in (0, 1):
                    out[k ^ ((tv ^ tv2) << tbit), k] = m[tv2, tv]
        return out
    if gate.kind == "ZZ":
        qa, qb = gate.qubits
        abit, bbit = n - 1 - qa, n - 1 - qb
        for k in range(dim):
            out[k, k] = m[((k >> abit) & 1) * 2 + ((k >> bbit) & 1),
                          ((k >> abit) & 1) * 2 + ((k >> bbit) & 1)]
        return out
    (targ,) = gate.qubits
    tbit = n - 1 - targ
    for k in range(dim):
        tv = (k >> tbit) & 1
        for tv2 in (0, 1):
            out[k ^ ((tv ^ tv2) << tbit), k] = m[tv2, tv]
    return out


def circuit_unitary(circ: Circuit) -> np.ndarray:
    """Dense unitary of the whole circuit (application order = left to
    right in the gate list, so later gates multiply from the left).

    Built by explicit index embedding, independently of the statevector
    engine, so the two can be cross-checked.
    """
    u = np.eye(1 << circ.n_qubits, dtype=complex)
    for g in circ.gates:
        u = _embed(g, circ.n_qubits) @ u
    return u


def phase_aligned_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Max entrywise deviation between two matrices after removing the
    global phase (aligned on v's largest entry)."""
    k = int(np.argmax(np.abs(v)))
    phase = u.flat[k] / v.flat[k]
    phase /= abs(phase)
    return float(np.abs(u - phase * v).max())
