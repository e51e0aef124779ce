"""Discrete voice transform built on frequency-scaled modulations.

The analysis map samples inner products against translated, modulated and
dilated copies of a window whose dilation is slaved to the modulation by
a = (1 + |omega|)^(-alpha).  On a sampled signal both analysis and synthesis
collapse to per-omega FFT multiplications.  The frame operator itself acts
as a Fourier multiplier by the admissibility symbol m, so apply/invert
evaluate m directly on the signal's frequency bins; the grid-quadrature
composite synthesize(analyze(.)) realizes the same multiplier with m
replaced by its omega-grid quadrature, and the gap between the two is the
discretization error the reproducing checks measure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .certify import Certificate
from .group import SampledSignal
from .symbol import eval_m
from .windows import AlphaParams, Window

__all__ = [
    "CoefficientGrid",
    "ReproducingCheck",
    "uniform_omega_grid",
    "progressive_omega_grid",
    "analyze",
    "synthesize",
    "frame_multiplier",
    "grid_frame_operator",
    "apply_frame_operator",
    "invert_frame_operator",
    "second_transform",
    "reproducing_check",
    "coefficient_energy",
    "save_coefficients",
    "load_coefficients",
    "gaussian_signal",
    "chirp_signal",
    "bandlimited_noise",
]


@dataclass(frozen=True)
class CoefficientGrid:
    """Voice-transform samples V(x_m, omega_j), stored as columns per omega.

    The x grid always coincides with the time grid of the analyzed signal,
    so t0/dt/n rather than an explicit array define it.
    """

    values: np.ndarray
    t0: float
    dt: float
    omega: np.ndarray
    alpha: float
    window_id: str

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        om = np.asarray(self.omega, dtype=float)
        if vals.ndim != 2 or om.ndim != 1 or vals.shape[1] != om.size:
            raise ValueError("values must be (n_x, n_omega) matching the omega grid")
        if om.size > 1 and np.any(np.diff(om) <= 0.0):
            raise ValueError("omega grid must be strictly increasing")
        if not (np.all(np.isfinite(vals.real)) and np.all(np.isfinite(vals.imag))):
            raise ValueError("coefficients must be finite")
        if not (self.dt > 0 and math.isfinite(self.dt) and math.isfinite(self.t0)):
            raise ValueError("invalid time grid")
        vals = vals.copy()
        vals.setflags(write=False)
        om = om.copy()
        om.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "omega", om)

    @property
    def n_x(self):
        return self.values.shape[0]

    @property
    def n_omega(self):
        return self.omega.size

    def x_values(self):
        return self.t0 + self.dt * np.arange(self.n_x)

    def omega_weights(self):
        """Trapezoid-style cell widths for quadrature over the omega grid."""
        return _omega_weights(self.omega)


def uniform_omega_grid(omega_max: float, step: float) -> np.ndarray:
    """Symmetric uniform modulation grid covering [-omega_max, omega_max]."""
    if omega_max <= 0 or step <= 0:
        raise ValueError("omega_max and step must be positive")
    n = int(math.floor(omega_max / step + 1e-12))
    ks = np.arange(-n, n + 1, dtype=float)
    return ks * step


def progressive_omega_grid(omega_max: float, base_step: float,
                           p: AlphaParams) -> np.ndarray:
    """Symmetric grid with spacing growing like (1 + |omega|)^alpha.

    Matches the natural bandwidth of the dilated windows, so fewer columns
    are spent at high modulation where each window is wider.
    """
    if omega_max <= 0 or base_step <= 0:
        raise ValueError("omega_max and base_step must be positive")
    pts = [0.0]
    while pts[-1] < omega_max:
        pts.append(pts[-1] + base_step * (1.0 + pts[-1]) ** p.alpha)
    pos = np.array(pts[1:])
    return np.concatenate([-pos[::-1], [0.0], pos])


def _omega_weights(omega: np.ndarray) -> np.ndarray:
    om = np.asarray(omega, dtype=float)
    if om.size == 1:
        return np.array([1.0])
    w = np.empty(om.size)
    w[1:-1] = 0.5 * (om[2:] - om[:-2])
    w[0] = 0.5 * (om[1] - om[0])
    w[-1] = 0.5 * (om[-1] - om[-2])
    return w


def analyze(f: SampledSignal, w: Window, p: AlphaParams,
            omega_grid) -> CoefficientGrid:
    """Voice transform of a sampled signal over a modulation grid.

    Column j holds x -> <f, pi(x, omega_j, beta(omega_j), 0) psi>, computed
    spectrally; the offset phases of the time grid cancel identically, so
    the result is independent of t0 up to the labeling of x.
    """
    om = np.asarray(omega_grid, dtype=float)
    if om.ndim != 1 or om.size == 0:
        raise ValueError("omega_grid must be a nonempty 1-d array")
    n = f.samples.size
    F = np.fft.fft(f.samples)
    nu = np.fft.fftfreq(n, d=f.dt)
    V = np.empty((n, om.size), dtype=np.complex128)
    for j, oj in enumerate(om):
        a = float(p.beta(oj))
        G = np.conj(w.eval_freq(a * (nu - oj)))
        V[:, j] = math.sqrt(a) * np.fft.ifft(F * G)
    return CoefficientGrid(V, f.t0, f.dt, om, p.alpha, w.window_id)


def synthesize(grid: CoefficientGrid, w: Window, p: AlphaParams) -> SampledSignal:
    """Adjoint-weighted superposition of the coefficient columns.

    Composing with analyze yields the frame operator, which on the grid acts
    as multiplication by frame_multiplier in frequency.
    """
    if w.window_id != grid.window_id:
        raise ValueError(
            f"grid was produced with window {grid.window_id!r}, got {w.window_id!r}"
        )
    n = grid.n_x
    nu = np.fft.fftfreq(n, d=grid.dt)
    weights = grid.omega_weights()
    acc = np.zeros(n, dtype=np.complex128)
    for j, oj in enumerate(grid.omega):
        a = float(p.beta(oj))
        G = w.eval_freq(a * (nu - oj))
        acc += weights[j] * math.sqrt(a) * G * np.fft.fft(grid.values[:, j])
    return SampledSignal(np.fft.ifft(acc), grid.t0, grid.dt)


def frame_multiplier(nu, w: Window, p: AlphaParams, omega_grid) -> np.ndarray:
    """Fourier multiplier of the discrete frame operator at frequencies nu.

    This is the omega-grid quadrature of the admissibility symbol: as the
    grid refines and widens it converges to m(nu) on compact nu sets.
    """
    nu = np.asarray(nu, dtype=float)
    om = np.asarray(omega_grid, dtype=float)
    weights = _omega_weights(om)
    out = np.zeros(nu.shape, dtype=float)
    for j, oj in enumerate(om):
        a = float(p.beta(oj))
        mag = np.abs(w.eval_freq(a * (nu - oj)))
        out += weights[j] * a * mag * mag
    return out


def grid_frame_operator(f: SampledSignal, w: Window, p: AlphaParams,
                        omega_grid) -> SampledSignal:
    """Direct discretized frame operator: superpose analyzed coefficients.

    This is the quadrature of the defining superposition integral over the
    coefficient grid, i.e. synthesize(analyze(f)).  As the omega grid refines
    and widens it approaches apply_frame_operator, which uses the exact
    symbol; the multiplier-consistency checks quantify the gap.
    """
    return synthesize(analyze(f, w, p, omega_grid), w, p)


_SYMBOL_BIN_CACHE: dict = {}


def _symbol_on_bins(n: int, dt: float, w: Window, p: AlphaParams,
                    tol: float) -> np.ndarray:
    """Admissibility symbol on the FFT bins of an n-point grid with step dt.

    Values are deduplicated (|nu| only, when |psi_hat| is even) and cached
    per (window, alpha, grid, tol) since frame-operator calls tend to repeat
    on one signal geometry.
    """
    key = (w.window_id, p.alpha, int(n), float(dt), float(tol))
    hit = _SYMBOL_BIN_CACHE.get(key)
    if hit is not None:
        return hit
    nu = np.fft.fftfreq(n, d=dt)
    if p.alpha == 0.0:
        m = np.full(n, float(w.l2_norm_sq))
    else:
        targets = np.abs(nu) if w.freq_abs_even else nu
        uniq, inverse = np.unique(targets, return_inverse=True)
        vals = np.array([eval_m(float(x), w, p, tol)[0] for x in uniq])
        m = vals[inverse]
    m.setflags(write=False)
    if len(_SYMBOL_BIN_CACHE) >= 32:
        _SYMBOL_BIN_CACHE.pop(next(iter(_SYMBOL_BIN_CACHE)))
    _SYMBOL_BIN_CACHE[key] = m
    return m


def apply_frame_operator(f: SampledSignal, w: Window, p: AlphaParams,
                         tol: float = 1e-9) -> SampledSignal:
    """Frame operator as the exact Fourier multiplier by the symbol.

    Returns the inverse transform of m(nu) * f_hat(nu), with m evaluated by
    adaptive quadrature at every frequency bin of the signal.
    """
    m = _symbol_on_bins(f.samples.size, f.dt, w, p, tol)
    return SampledSignal(np.fft.ifft(np.fft.fft(f.samples) * m), f.t0, f.dt)


def _require_certificate(certificate: Optional[Certificate], w: Window,
                         p: AlphaParams) -> None:
    if certificate is None:
        raise ValueError("inversion requires a frame-bound certificate")
    if certificate.status != "certified-numerically":
        raise ValueError(
            f"certificate status is {certificate.status!r}; refusing to invert"
        )
    if certificate.alpha != p.alpha:
        raise ValueError("certificate alpha does not match the requested alpha")
    if certificate.window_id != w.window_id:
        raise ValueError("certificate was issued for a different window")


def invert_frame_operator(f: SampledSignal, w: Window, p: AlphaParams,
                          certificate: Optional[Certificate] = None,
                          tol: float = 1e-9) -> SampledSignal:
    """Inverse frame operator: divide the spectrum by the symbol.

    Refuses to run unless a certificate for the same (window, alpha) reports
    certified-numerically, which is what guarantees the divisor stays in the
    certified band [A_est, B_est] away from zero.
    """
    _require_certificate(certificate, w, p)
    m = _symbol_on_bins(f.samples.size, f.dt, w, p, tol)
    if float(m.min()) <= 0.0:
        raise ValueError("symbol evaluation returned a nonpositive value")
    return SampledSignal(np.fft.ifft(np.fft.fft(f.samples) / m), f.t0, f.dt)


def second_transform(f: SampledSignal, w: Window, p: AlphaParams, omega_grid,
                     certificate: Optional[Certificate] = None,
                     tol: float = 1e-9) -> CoefficientGrid:
    """Coefficients of the inverted signal: analyze(invert_frame_operator(f)).

    Pairing these against plain analyze coefficients discretizes the
    reproducing identity, which reproducing_check quantifies.
    """
    return analyze(invert_frame_operator(f, w, p, certificate, tol),
                   w, p, omega_grid)


@dataclass(frozen=True)
class ReproducingCheck:
    """Both sides of the discretized reproducing identity.

    lhs is the time-domain inner product; rhs pairs the second transform of
    f against the coefficients of g over the coefficient grid; rhs_alt is
    the opposite ordering.  The two orderings agree to roundoff, and both
    approach lhs as the omega grid refines and widens.
    """

    lhs: complex
    rhs: complex
    rhs_alt: complex
    relerr: float


def reproducing_check(f: SampledSignal, g: SampledSignal, w: Window,
                      p: AlphaParams, omega_grid,
                      certificate: Optional[Certificate] = None,
                      tol: float = 1e-9) -> ReproducingCheck:
    if f.samples.size != g.samples.size or f.dt != g.dt or f.t0 != g.t0:
        raise ValueError("signals must share one time grid")
    lhs = complex(f.dt * np.sum(f.samples * np.conj(g.samples)))
    wf = second_transform(f, w, p, omega_grid, certificate, tol)
    vg = analyze(g, w, p, omega_grid)
    vf = analyze(f, w, p, omega_grid)
    wg = second_transform(g, w, p, omega_grid, certificate, tol)
    weights = vf.omega_weights()

    def pair(acoef, bcoef):
        cols = np.sum(acoef.values * np.conj(bcoef.values), axis=0)
        return complex(f.dt * np.sum(weights * cols))

    rhs = pair(wf, vg)
    rhs_alt = pair(vf, wg)
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return ReproducingCheck(lhs, rhs, rhs_alt, abs(lhs - rhs) / scale)


def coefficient_energy(grid: CoefficientGrid) -> float:
    """Squared coefficient norm with the grid's quadrature weights."""
    weights = grid.omega_weights()
    col = np.sum(np.abs(grid.values) ** 2, axis=0)
    return float(grid.dt * np.sum(weights * col))


# ---------------------------------------------------------------------------
# serialization


def save_coefficients(grid: CoefficientGrid, path, sidecar_path=None) -> None:
    """CSV in x,omega,re,im columns, omega-major, plus a JSON sidecar."""
    import csv

    xs = grid.x_values()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "omega", "re", "im"])
        for j, oj in enumerate(grid.omega):
            col = grid.values[:, j]
            for m in range(grid.n_x):
                writer.writerow([
                    repr(float(xs[m])), repr(float(oj)),
                    repr(float(col[m].real)), repr(float(col[m].imag)),
                ])
    meta = {
        "alpha": grid.alpha,
        "window_id": grid.window_id,
        "t0": grid.t0,
        "dt": grid.dt,
        "n_x": grid.n_x,
        "omega": [float(v) for v in grid.omega],
    }
    if sidecar_path is None:
        sidecar_path = str(path) + ".json"
    with open(sidecar_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")


def load_coefficients(path, sidecar_path=None) -> CoefficientGrid:
    import csv

    if sidecar_path is None:
        sidecar_path = str(path) + ".json"
    with open(sidecar_path, "r", encoding="utf-8") as fh:
        meta = json.load(fh)
    n_x = int(meta["n_x"])
    omega = np.asarray(meta["omega"], dtype=float)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [c.strip() for c in header] != ["x", "omega", "re", "im"]:
            raise ValueError(f"unexpected header {header}")
        rows = [r for r in reader if r]
    if len(rows) != n_x * omega.size:
        raise ValueError("row count does not match the sidecar dimensions")
    re = np.array([float(r[2]) for r in rows])
    im = np.array([float(r[3]) for r in rows])
    vals = (re + 1j * im).reshape(omega.size, n_x).T
    return CoefficientGrid(vals, float(meta["t0"]), float(meta["dt"]),
                           omega, float(meta["alpha"]), str(meta["window_id"]))


# ---------------------------------------------------------------------------
# test signals


def gaussian_signal(n: int, dt: float, t0: float, center: float = 0.0,
                    width: float = 1.0, freq: float = 0.0) -> SampledSignal:
    """Unit-energy Gaussian bump, optionally modulated."""
    t = t0 + dt * np.arange(n)
    env = 2.0**0.25 / math.sqrt(width) * np.exp(-math.pi * ((t - center) / width) ** 2)
    return SampledSignal(env * np.exp(2j * math.pi * freq * t), t0, dt)


def chirp_signal(n: int, dt: float, t0: float, center: float = 0.0,
                 width: float = 1.0, rate: float = 1.0,
                 freq: float = 0.0) -> SampledSignal:
    """Gaussian-windowed linear chirp; instantaneous frequency freq + rate*(t-c)."""
    t = t0 + dt * np.arange(n)
    u = t - center
    env = 2.0**0.25 / math.sqrt(width) * np.exp(-math.pi * (u / width) ** 2)
    phase = 2.0 * math.pi * (freq * u + 0.5 * rate * u * u)
    return SampledSignal(env * np.exp(1j * phase), t0, dt)


def bandlimited_noise(n: int, dt: float, t0: float, band: Tuple[float, float],
                      seed: int) -> SampledSignal:
    """Unit-energy noise whose spectrum is confined to the given band."""
    lo, hi = band
    if not lo < hi:
        raise ValueError("band must be an increasing pair")
    nu = np.fft.fftfreq(n, d=dt)
    mask = (nu >= lo) & (nu <= hi)
    if not np.any(mask):
        raise ValueError("band contains no grid frequencies")
    rng = np.random.default_rng(seed)
    spec = np.zeros(n, dtype=np.complex128)
    spec[mask] = rng.standard_normal(mask.sum()) + 1j * rng.standard_normal(mask.sum())
    samples = np.fft.ifft(spec)
    energy = dt * float(np.sum(np.abs(samples) ** 2))
    return SampledSignal(samples / math.sqrt(energy), t0, dt)
