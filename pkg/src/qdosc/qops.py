"""Deformed ladder operators and Hamiltonians on a truncated four-level basis.

The deformed number bracket is the geometric sum 1 + q + ... + q**(n-1),
which reduces to n at q = 1.  Ladder matrices live in a finite basis, so
operator products acquire edge defects: the top row/column of b*b+ is cut
off by the truncation.  Powers of the position operator are therefore
evaluated in a padded basis and cropped back, which restores the exact
matrix elements of the infinite-dimensional product on the kept block.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PAD = {"X2": 1, "P2": 1, "X4": 2}


def q_number(n: int, q: float) -> float:
    """Deformed integer bracket of n.

    Evaluated as the finite sum 1 + q + q**2 + ... + q**(n-1) rather than
    the quotient (q**n - 1)/(q - 1), so q = 1 is exact and no special
    casing is needed.

    Parameters
    ----------
    n : non-negative integer order of the bracket
    q : deformation parameter, q > 0

    Returns
    -------
    float
    """
    if n < 0 or n != int(n):
        raise ValueError(f"bracket order must be a non-negative integer, got {n}")
    if q <= 0:
        raise ValueError(f"deformation parameter must be positive, got {q}")
    return float(sum(q**k for k in range(int(n))))


@dataclass(frozen=True)
class DeformationParams:
    """Deformation parameter q with its bounded companion alpha = (q-1)/(q+1)."""

    q: float

    def __post_init__(self):
        if self.q <= 0:
            raise ValueError(f"q must be positive, got {self.q}")

    @property
    def alpha(self) -> float:
        return (self.q - 1.0) / (self.q + 1.0)

    @classmethod
    def from_alpha(cls, alpha: float) -> "DeformationParams":
        if not -1.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (-1, 1), got {alpha}")
        return cls(q=(1.0 + alpha) / (1.0 - alpha))


@dataclass(frozen=True)
class ModelParams:
    """Perturbation strengths for the quadratic (gamma) and quartic (delta) terms.

    Units are hbar = m = omega = 1 throughout, so the dimensionless quadratic
    coupling is gamma_tilde = gamma / 2.
    """

    gamma: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        if self.gamma < 0 or self.delta < 0:
            raise ValueError("perturbation strengths must be non-negative")

    @property
    def gamma_tilde(self) -> float:
        return self.gamma / 2.0


@dataclass(frozen=True)
class TruncatedOperator:
    """A Hermitian (here: real symmetric) operator on the truncated basis."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_symmetric(self, tol: float = 1e-12) -> bool:
        return bool(np.abs(self.matrix - self.matrix.T).max() <= tol)


def as_matrix(op) -> np.ndarray:
    """Accept a TruncatedOperator or a bare ndarray and return the ndarray."""
    return np.asarray(getattr(op, "matrix", op), dtype=float)


def build_ladder(dim: int, q: float) -> tuple[TruncatedOperator, TruncatedOperator]:
    """Lowering and raising matrices on a dim-level basis.

    The lowering matrix has sqrt(bracket(n)) on the superdiagonal,
    b[n-1, n] = sqrt([n]_q) for n = 1 .. dim-1, and the raising matrix is
    its transpose.  The deformed commutation relation
    b b+ - q b+ b = 1 holds exactly on the leading (dim-1) x (dim-1) block;
    the last diagonal entry is a truncation artifact.

    Parameters
    ----------
    dim : number of retained levels, dim >= 2
    q   : deformation parameter, q > 0

    Returns
    -------
    (lowering, raising) : pair of TruncatedOperator
    """
    if dim < 2:
        raise ValueError(f"need at least two levels, got dim={dim}")
    b = np.zeros((dim, dim))
    for n in range(1, dim):
        b[n - 1, n] = np.sqrt(q_number(n, q))
    return TruncatedOperator(b), TruncatedOperator(b.T.copy())


def build_padded_power(kind: str, dim: int, q: float) -> TruncatedOperator:
    """Square or fourth power of the position/momentum quadrature, edge-corrected.

    kind is one of "X2", "P2", "X4".  The product is formed in a basis
    enlarged by one level per squaring (PAD) and then cropped to dim x dim,
    so the retained block is exact; a naive product in dim levels would
    corrupt the last diagonal entries.

    X = sqrt(1+q)/2 (b+ + b) and P = i sqrt(1+q)/2 (b+ - b), hence

        X2 = +((1+q)/4) (b+ + b)^2
        P2 = -((1+q)/4) (b+ - b)^2
        X4 = X2 @ X2 in the padded basis
    """
    if kind not in PAD:
        raise ValueError(f"unknown operator kind {kind!r}, expected one of {sorted(PAD)}")
    if dim < 2:
        raise ValueError(f"need at least two levels, got dim={dim}")
    big = dim + PAD[kind]
    low, high = build_ladder(big, q)
    b, bd = low.matrix, high.matrix
    pref = (1.0 + q) / 4.0
    if kind == "X2":
        m = pref * (bd + b) @ (bd + b)
    elif kind == "P2":
        m = -pref * (bd - b) @ (bd - b)
    else:
        x2 = pref * (bd + b) @ (bd + b)
        m = x2 @ x2
    return TruncatedOperator(m[:dim, :dim])


def build_hamiltonian(model: str, dim: int, q: float,
                      params: ModelParams | None = None) -> TruncatedOperator:
    """Truncated Hamiltonian for one of the three oscillator models.

    model = "h0"  free deformed oscillator, diagonal with entries
                  ((1+q)/4) ([n]_q + [n+1]_q),
    model = "ho"  h0 plus (gamma/2) X2,
    model = "ao"  h0 plus delta X4.

    The diagonal closed form for h0 coincides with (X2 + P2)/2 built from
    the edge-corrected squares.
    """
    if model not in ("h0", "ho", "ao"):
        raise ValueError(f"unknown model {model!r}, expected h0, ho or ao")
    if dim < 2:
        raise ValueError(f"need at least two levels, got dim={dim}")
    params = params or ModelParams()
    h0 = np.diag([(1.0 + q) / 4.0 * (q_number(n, q) + q_number(n + 1, q))
                  for n in range(dim)])
    if model == "h0":
        return TruncatedOperator(h0)
    if model == "ho":
        x2 = build_padded_power("X2", dim, q).matrix
        return TruncatedOperator(h0 + 0.5 * params.gamma * x2)
    x4 = build_padded_power("X4", dim, q).matrix
    return TruncatedOperator(h0 + params.delta * x4)
