"""Group arithmetic for time-frequency-scale shifts and its sampled action.

Elements are tuples (x, omega, a, tau): a time shift, a frequency shift, a
positive dilation, and a torus phase.  The composition law is

    (x, w, a, t) * (x', w', a', t') = (x + a x', w + w'/a, a a',
                                       t + t' + w a x')

with identity (0, 0, 1, 0).  The unitary action on signals is
pi(x, w, a, tau) = e^{2 pi i tau} T_x M_w D_a, applied here to uniformly
sampled signals via frequency-domain (band-limited) interpolation.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GroupElement",
    "IDENTITY",
    "SampledSignal",
    "GridResolutionError",
    "compose",
    "inverse",
    "apply_pi",
    "save_signal",
    "load_signal",
]


class GridResolutionError(ValueError):
    """The requested operation pushes content past the usable band of the grid."""


@dataclass(frozen=True)
class GroupElement:
    x: float = 0.0
    omega: float = 0.0
    a: float = 1.0
    tau: float = 0.0

    def __post_init__(self):
        a = float(self.a)
        if not (math.isfinite(a) and a > 0.0):
            raise ValueError(f"scale must be a positive finite real, got {self.a!r}")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "tau", float(self.tau))


IDENTITY = GroupElement(0.0, 0.0, 1.0, 0.0)


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """Product g * h under the composition law above."""
    return GroupElement(
        g.x + g.a * h.x,
        g.omega + h.omega / g.a,
        g.a * h.a,
        g.tau + h.tau + g.omega * g.a * h.x,
    )


def inverse(g: GroupElement) -> GroupElement:
    """Group inverse: (-x/a, -omega*a, 1/a, -tau + x*omega)."""
    return GroupElement(-g.x / g.a, -g.omega * g.a, 1.0 / g.a, -g.tau + g.x * g.omega)


@dataclass(frozen=True)
class SampledSignal:
    """A complex signal on a uniform grid t_k = t0 + k*dt."""

    samples: np.ndarray
    t0: float
    dt: float

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.complex128, copy=True)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("samples must be a nonempty 1-d array")
        if not (float(self.dt) > 0.0 and math.isfinite(float(self.dt))):
            raise ValueError("dt must be positive and finite")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("samples must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "dt", float(self.dt))

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.size)

    def energy(self) -> float:
        """dt * sum |samples|^2, the discrete L2 energy."""
        return float(self.dt * np.sum(np.abs(self.samples) ** 2))


def _usable_band(sig: SampledSignal, rel: float = 1e-12) -> float:
    """Largest |frequency| carrying spectral mass above rel * peak."""
    spec = np.abs(np.fft.fft(sig.samples))
    peak = spec.max()
    if peak == 0.0:
        return 0.0
    nu = np.fft.fftfreq(sig.samples.size, d=sig.dt)
    active = spec > rel * peak
    return float(np.abs(nu[active]).max())


def _trig_eval(sig: SampledSignal, s: np.ndarray) -> np.ndarray:
    """Evaluate the band-limited (trigonometric) interpolant of sig at points s.

    The signal is treated as one period of a band-limited periodic function,
    which is exact for content that the resolution check lets through.
    """
    samples = sig.samples
    n = samples.size
    spec = np.fft.fft(samples)
    nu = np.fft.fftfreq(n, d=sig.dt)
    out = np.empty(s.size, dtype=np.complex128)
    step = max(1, 2_000_000 // n)
    for i in range(0, s.size, step):
        block = np.exp(2j * np.pi * np.outer(s[i : i + step] - sig.t0, nu))
        out[i : i + step] = block @ spec / n
    return out


def apply_pi(g: GroupElement, f: SampledSignal) -> SampledSignal:
    """Apply e^{2 pi i tau} T_x M_omega D_a to f, resampled on f's own grid.

    Dilation and off-grid shifts go through the trigonometric interpolant;
    integer-multiples-of-dt shifts reduce to an exact circular roll.  Raises
    GridResolutionError when the dilated and modulated content would land
    outside the usable band of the grid.
    """
    nyquist = 0.5 / f.dt
    band = _usable_band(f)
    if band / g.a + abs(g.omega) > 0.98 * nyquist:
        raise GridResolutionError(
            f"content band {band:.4g}/a + |omega| = "
            f"{band / g.a + abs(g.omega):.4g} exceeds 0.98 * Nyquist = "
            f"{0.98 * nyquist:.4g}"
        )
    t = f.times()
    if g.a == 1.0:
        shift = g.x / f.dt
        k = round(shift)
        if abs(shift - k) < 1e-9:
            vals = np.roll(f.samples, k)
        else:
            vals = _trig_eval(f, t - g.x)
    else:
        vals = _trig_eval(f, (t - g.x) / g.a) / math.sqrt(g.a)
    phase = np.exp(2j * np.pi * (g.tau + g.omega * (t - g.x)))
    return SampledSignal(phase * vals, f.t0, f.dt)


def save_signal(sig: SampledSignal, path) -> None:
    """Write a signal as CSV with header t,re,im (UTF-8, LF endings)."""
    t = sig.times()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "re", "im"])
        for tk, v in zip(t, sig.samples):
            writer.writerow([repr(float(tk)), repr(float(v.real)), repr(float(v.imag))])


def load_signal(path) -> SampledSignal:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [c.strip() for c in header] != ["t", "re", "im"]:
            raise ValueError(f"expected header t,re,im, got {header}")
        rows = [(float(r[0]), float(r[1]), float(r[2])) for r in reader if r]
    if not rows:
        raise ValueError("signal file has no samples")
    t = np.array([r[0] for r in rows])
    vals = np.array([complex(r[1], r[2]) for r in rows])
    if t.size > 1:
        dt = float(t[1] - t[0])
        if dt <= 0 or not np.allclose(np.diff(t), dt, rtol=1e-9, atol=1e-12 * max(1.0, abs(dt))):
            raise ValueError("time column is not a uniform increasing grid")
    else:
        dt = 1.0
    return SampledSignal(vals, float(t[0]), dt)
