"""Time-series sampling and level recovery from the probe spectrum.

The probe signal is even in t (a weighted sum of cosines at twice the
level energies), so the transform is taken over the two-sided even
extension of the sampled data: fold the series mod M, then one real FFT.
That keeps every spectral line a symmetric real kernel regardless of
where it falls between bins; the real part of a one-sided transform would
instead carry a phase ramp that can null a half-bin-offset peak.  Bin k
still maps to angular frequency 2 pi k / (M dt), with the upper half
folded to negative frequencies (arrays are stored shifted, ascending).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .simulator import MeasurementConfig, probe_expectation
from .spinmap import PauliCoefficients

DEFAULT_SAMPLES_EXACT = 4096
DEFAULT_SAMPLES_SHOTS = 8192
DEFAULT_PROMINENCE = 0.2
#: fraction of the one-sided bandwidth pi/dt that the default dt leaves to
#: the estimated top frequency 2 * sum|d_i|
NYQUIST_HEADROOM = 0.8


class NyquistViolation(ValueError):
    """Raised when dt cannot resolve the estimated top frequency."""


class InsufficientPeaks(RuntimeError):
    """Raised when fewer peaks qualify than levels were requested."""


@dataclass(frozen=True)
class TimeSeries:
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    def times(self) -> np.ndarray:
        return self.dt * np.arange(len(self.samples))

    def write_csv(self, path) -> None:
        _write_csv(path, "t,value", self.times(), self.samples)


@dataclass(frozen=True)
class Spectrum:
    frequencies: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        for name in ("frequencies", "values"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def bin_width(self) -> float:
        return float(self.frequencies[1] - self.frequencies[0])

    def write_csv(self, path) -> None:
        _write_csv(path, "omega,re_value", self.frequencies, self.values)


@dataclass(frozen=True)
class EnergyLevels:
    """Detected levels (ascending), their peak heights, and the bin width
    of the spectrum they came from."""

    levels: np.ndarray
    heights: np.ndarray
    bin_width: float

    def __post_init__(self):
        for name in ("levels", "heights"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class LevelMatch:
    abs_errors: np.ndarray
    max_error: float

    def __post_init__(self):
        arr = np.asarray(self.abs_errors, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "abs_errors", arr)


def _write_csv(path, header: str, *columns) -> None:
    # repr keeps full double precision in a stable, round-trippable form
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in zip(*columns):
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def energy_scale_estimate(d: PauliCoefficients) -> float:
    """Upper bound sum|d_i| on the top level energy."""
    return float(np.abs(d.as_array()).sum())


def default_dt(d: PauliCoefficients) -> float:
    """Sample spacing placing the estimated top frequency 2 sum|d_i| at
    NYQUIST_HEADROOM of the one-sided bandwidth pi/dt."""
    return NYQUIST_HEADROOM * math.pi / (2.0 * energy_scale_estimate(d))


def sample_series(d: PauliCoefficients, dt: float | None = None,
                  m: int | None = None,
                  cfg: MeasurementConfig | None = None) -> TimeSeries:
    """Probe expectation sampled at t_j = j dt for j = 0 .. m-1.

    Refuses spacings that alias the estimated top frequency: requires
    pi/dt > 2 sum|d_i|.  In shots mode one seeded generator is advanced
    across the series so the draws are independent sample to sample yet
    fully reproducible from cfg.seed.
    """
    cfg = cfg or MeasurementConfig.exact()
    if m is None:
        m = DEFAULT_SAMPLES_EXACT if cfg.mode == "exact" else DEFAULT_SAMPLES_SHOTS
    if m < 16 or m & (m - 1):
        raise ValueError(f"sample count must be a power of two >= 16, got {m}")
    if dt is None:
        dt = default_dt(d)
    top = 2.0 * energy_scale_estimate(d)
    if math.pi / dt <= top:
        raise NyquistViolation(
            f"dt={dt} gives bandwidth {math.pi / dt:.4g} <= estimated top "
            f"frequency {top:.4g}")
    rng = np.random.default_rng(cfg.seed) if cfg.mode == "shots" else None
    samples = np.array([probe_expectation(d, j * dt, cfg, rng=rng)
                        for j in range(m)])
    return TimeSeries(dt=dt, samples=samples)


def _fold_even(samples: np.ndarray, window: str) -> np.ndarray:
    """Fold the even extension s[|j|], j = -(M-1) .. M-1, modulo M."""
    s = np.asarray(samples, dtype=float)
    m = len(s)
    if window == "hann":
        # half window, descending; its even extension is the usual bell
        s = s * np.cos(0.5 * math.pi * np.arange(m) / m) ** 2
    elif window != "rect":
        raise ValueError(f"unknown window {window!r}")
    folded = s.copy()
    folded[1:] += s[:0:-1]
    return folded


def dft_real(ts: TimeSeries, window: str = "rect") -> Spectrum:
    """Real spectrum of the even extension of the series.

    values[k] = (1/M) sum_{j=-(M-1)}^{M-1} w(|j|) s[|j|] cos(w_k j dt)
    at w_k = 2 pi k / (M dt), returned shifted so frequencies ascend from
    -pi/dt.  A unit-amplitude on-bin cosine gives a peak value of 1 - 1/M.
    The imaginary residue of the FFT is discarded (it is zero up to
    rounding because the folded sequence is even modulo M).
    """
    folded = _fold_even(ts.samples, window)
    m = len(folded)
    values = np.fft.fft(folded).real / m
    freqs = 2.0 * math.pi * np.fft.fftfreq(m, d=ts.dt)
    return Spectrum(frequencies=np.fft.fftshift(freqs),
                    values=np.fft.fftshift(values))


def _parabolic_refine(ym: float, y0: float, yp: float) -> float:
    """Vertex offset in bins of the parabola through three equispaced
    points; y0 must be the strict maximum so the result lies in (-1, 1)."""
    denom = 2.0 * (2.0 * y0 - ym - yp)
    return (yp - ym) / denom if denom != 0.0 else 0.0


def detect_levels(spec: Spectrum, n_expected: int = 4,
                  min_prominence: float = DEFAULT_PROMINENCE) -> EnergyLevels:
    """Recover energy levels from positive-frequency spectral peaks.

    A peak is a strict local maximum at w > 0 whose height exceeds
    min_prominence times the tallest positive-frequency value.  Each peak
    frequency is refined by parabolic interpolation through its three
    bins, and the level is half the refined frequency.  If more peaks
    qualify than requested the tallest n_expected are kept; if fewer,
    InsufficientPeaks is raised.
    """
    freqs, vals = spec.frequencies, spec.values
    if n_expected == 0:
        return EnergyLevels(levels=np.array([]), heights=np.array([]),
                            bin_width=spec.bin_width)
    pos = freqs > 0
    floor = min_prominence * vals[pos].max()
    peaks = []
    for k in np.nonzero(pos)[0]:
        if k == 0 or k == len(vals) - 1:
            continue
        if vals[k] > vals[k - 1] and vals[k] > vals[k + 1] and vals[k] > floor:
            shift = _parabolic_refine(vals[k - 1], vals[k], vals[k + 1])
            peaks.append((freqs[k] + shift * spec.bin_width, vals[k]))
    if len(peaks) < n_expected:
        raise InsufficientPeaks(
            f"found {len(peaks)} peak(s) above prominence {min_prominence}, "
            f"needed {n_expected}")
    peaks.sort(key=lambda p: -p[1])
    kept = sorted(peaks[:n_expected])
    return EnergyLevels(levels=np.array([0.5 * w for w, _ in kept]),
                        heights=np.array([h for _, h in kept]),
                        bin_width=spec.bin_width)


def match_levels(detected: EnergyLevels, reference) -> LevelMatch:
    """Pair detected and reference levels in ascending order and report
    absolute errors.  reference may be a ReferenceSpectrum or an array."""
    ref = np.sort(np.asarray(getattr(reference, "levels", reference), dtype=float))
    det = detected.levels
    if len(det) != len(ref):
        raise ValueError(f"{len(det)} detected levels vs {len(ref)} reference")
    errs = np.abs(det - ref)
    return LevelMatch(abs_errors=errs, max_error=float(errs.max()) if len(errs) else 0.0)
