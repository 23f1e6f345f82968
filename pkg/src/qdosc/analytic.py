"""Reference energy spectra used as oracles for the detected levels."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qops import as_matrix, q_number

BLOCK_TOL = 1e-12


class NotBlockStructured(ValueError):
    """Raised when a matrix couples the even and odd level-pair blocks."""


@dataclass(frozen=True)
class ReferenceSpectrum:
    """Reference levels with a tag naming the route that produced them."""

    source: str
    levels: np.ndarray

    def __post_init__(self):
        lv = np.asarray(self.levels, dtype=float)
        lv.setflags(write=False)
        object.__setattr__(self, "levels", lv)


def spectrum_h0(q: float, dim: int = 4) -> ReferenceSpectrum:
    """Exact levels of the free deformed oscillator.

    e_n = (q + 1)/4 ([n]_q + [n+1]_q), strictly increasing in n.
    """
    lv = np.array([(q + 1.0) / 4.0 * (q_number(n, q) + q_number(n + 1, q))
                   for n in range(dim)])
    return ReferenceSpectrum(source="h0_closed_form", levels=lv)


def spectrum_hho_paper(q: float, gamma: float, dim: int = 4) -> ReferenceSpectrum:
    """Frequency-shift reference for the quadratically perturbed oscillator.

    Absorbing the X2 term into the quadratic potential rescales the
    oscillator frequency by sqrt(1 + gamma); the deformation parameter is
    held at the supplied q and the levels are reported in the original
    energy units, i.e. sqrt(1 + gamma) * e_n(q).  This is an analytic
    approximation, not the exact spectrum of the truncated matrix; use
    exact_diag for that.
    """
    scale = np.sqrt(1.0 + gamma)
    return ReferenceSpectrum(source="shifted_frequency",
                             levels=scale * spectrum_h0(q, dim).levels)


def _eig2(a: float, b: float, c: float) -> tuple[float, float]:
    # closed-form eigenvalues of [[a, c], [c, b]], ascending
    mid = 0.5 * (a + b)
    rad = np.hypot(0.5 * (a - b), c)
    return mid - rad, mid + rad


def exact_diag(h) -> ReferenceSpectrum:
    """Exact levels of a 4x4 Hamiltonian in the six-string family.

    Such a matrix decouples into the level pairs {0, 2} and {1, 3}; each
    2x2 block is solved in closed form, avoiding any iterative eigensolver.
    Raises NotBlockStructured if cross-block entries exceed BLOCK_TOL.
    """
    m = as_matrix(h)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    off = max(abs(m[0, 1]), abs(m[1, 0]), abs(m[0, 3]), abs(m[3, 0]),
              abs(m[1, 2]), abs(m[2, 1]), abs(m[2, 3]), abs(m[3, 2]))
    if off > BLOCK_TOL:
        raise NotBlockStructured(
            f"cross-block coupling {off:.3e} exceeds {BLOCK_TOL}")
    lo_even, hi_even = _eig2(m[0, 0], m[2, 2], m[0, 2])
    lo_odd, hi_odd = _eig2(m[1, 1], m[3, 3], m[1, 3])
    lv = np.sort([lo_even, hi_even, lo_odd, hi_odd])
    return ReferenceSpectrum(source="exact_diag", levels=lv)
