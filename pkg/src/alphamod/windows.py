"""Window (atom) families with evaluable time/frequency forms and decay metadata.

Fourier convention throughout:  psi_hat(xi) = int psi(t) e^{-2 pi i xi t} dt,
so frequency shifts act as M_w f(t) = e^{2 pi i w t} f(t).  Every window
carries a polynomial decay certificate (decay_C, decay_r) meaning

    |psi_hat(xi)| <= decay_C * (1 + |xi|)^(-decay_r),

which drives truncation radii and the admissibility tail bounds.  Evaluation
callables are vectorized: arrays in, arrays out.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Tuple

import numpy as np

__all__ = [
    "AlphaParams",
    "Window",
    "HypothesisReport",
    "make_gaussian",
    "make_bspline",
    "make_bandlimited_bump",
    "make_chirped_gaussian",
    "conjugate_window",
    "load_window",
    "check_hypothesis",
]


@dataclass(frozen=True)
class AlphaParams:
    """The modulation parameter alpha in [0, 1) and derived quantities.

    r_threshold = max{1, alpha / (2 (1 - alpha))} is the decay exponent a
    window must strictly exceed for the admissibility certificate to apply.
    """

    alpha: float
    r_threshold: float = field(init=False)

    def __post_init__(self):
        a = float(self.alpha)
        if not (0.0 <= a < 1.0) or not math.isfinite(a):
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)
        thr = 1.0 if a == 0.0 else max(1.0, a / (2.0 * (1.0 - a)))
        object.__setattr__(self, "r_threshold", thr)

    def beta(self, omega):
        """beta(omega) = (1 + |omega|)^(-alpha); equals 1 identically at alpha=0."""
        om = np.asarray(omega, dtype=float)
        if self.alpha == 0.0:
            out = np.ones_like(om)
        else:
            out = (1.0 + np.abs(om)) ** (-self.alpha)
        return out if om.ndim else float(out)


@dataclass(frozen=True)
class Window:
    """An atom psi with evaluable forms and decay/norm metadata.

    freq_abs_even flags |psi_hat| even in frequency; it lets symbol code reuse
    positive-frequency work for the negative axis.  time_support/freq_support
    are closed intervals outside which the respective form vanishes, or None.
    """

    window_id: str
    eval_time: Callable[[np.ndarray], np.ndarray]
    eval_freq: Callable[[np.ndarray], np.ndarray]
    decay_C: float
    decay_r: float
    l2_norm_sq: float
    freq_continuous: bool = True
    time_support: Optional[Tuple[float, float]] = None
    freq_support: Optional[Tuple[float, float]] = None
    freq_abs_even: bool = True

    def __post_init__(self):
        if not (self.decay_C > 0 and self.decay_r > 0 and self.l2_norm_sq > 0):
            raise ValueError("decay_C, decay_r and l2_norm_sq must be positive")


@dataclass(frozen=True)
class HypothesisReport:
    passed: bool
    decay_r: float
    r_threshold: float
    freq_continuous: bool
    detail: str


def check_hypothesis(w: Window, p: AlphaParams) -> HypothesisReport:
    """Gate for the frame-bound certificate: continuity plus decay_r > threshold."""
    if not w.freq_continuous:
        return HypothesisReport(
            False, w.decay_r, p.r_threshold, False,
            "frequency side is not continuous",
        )
    if not w.decay_r > p.r_threshold:
        return HypothesisReport(
            False, w.decay_r, p.r_threshold, True,
            f"decay exponent r={w.decay_r:g} does not exceed "
            f"threshold {p.r_threshold:g} at alpha={p.alpha:g}",
        )
    return HypothesisReport(
        True, w.decay_r, p.r_threshold, True,
        f"r={w.decay_r:g} > threshold {p.r_threshold:g}",
    )


# ---------------------------------------------------------------------------
# concrete families


def _fit_envelope_constant(profile, r, lo, hi, n=20001):
    """sup of profile(x) * (1+|x|)^r over [lo, hi], grid scan + local refine."""
    xs = np.linspace(lo, hi, n)
    vals = profile(xs) * (1.0 + np.abs(xs)) ** r
    k = int(np.argmax(vals))
    a = xs[max(0, k - 1)]
    b = xs[min(n - 1, k + 1)]
    for _ in range(80):
        m1 = a + (b - a) / 3.0
        m2 = b - (b - a) / 3.0
        f1 = float(profile(np.array([m1]))[0] * (1.0 + abs(m1)) ** r)
        f2 = float(profile(np.array([m2]))[0] * (1.0 + abs(m2)) ** r)
        if f1 < f2:
            a = m1
        else:
            b = m2
    x = 0.5 * (a + b)
    return max(float(vals[k]), float(profile(np.array([x]))[0] * (1.0 + abs(x)) ** r))


def make_gaussian(decay_r: float = 8.0) -> Window:
    """The L2-normalized Gaussian psi(t) = 2^{1/4} e^{-pi t^2} (self-dual).

    Super-polynomial decay means any finite exponent works; decay_r picks the
    reported certificate exponent and decay_C is the exact fitted constant
    sup |psi_hat(xi)| (1+|xi|)^r, attained at xi* = (sqrt(1 + 2r/pi) - 1)/2.
    """
    r = float(decay_r)
    if not (0.0 < r <= 64.0):
        raise ValueError("decay_r must lie in (0, 64]")

    def gauss(u):
        u = np.asarray(u, dtype=float)
        return 2.0 ** 0.25 * np.exp(-np.pi * u * u)

    xi_star = 0.5 * (math.sqrt(1.0 + 2.0 * r / math.pi) - 1.0)
    c = 2.0 ** 0.25 * math.exp(-math.pi * xi_star**2) * (1.0 + xi_star) ** r
    return Window(
        window_id="gaussian",
        eval_time=gauss,
        eval_freq=gauss,
        decay_C=c,
        decay_r=r,
        l2_norm_sq=1.0,
    )


def _centered_bspline(order: int, t: np.ndarray) -> np.ndarray:
    """Centered cardinal B-spline built from `order` unit boxes (degree order-1)."""
    t = np.asarray(t, dtype=float)
    acc = np.zeros_like(t)
    shift = 0.5 * order
    deg = order - 1
    for k in range(order + 1):
        acc += (-1.0) ** k * math.comb(order, k) * np.clip(t + shift - k, 0.0, None) ** deg
    return acc / math.factorial(deg)


def _bspline_l2_norm_sq(n: int) -> float:
    # autocorrelation at zero: the double-order spline evaluated at the origin
    return float(_centered_bspline(2 * (n + 1), np.array([0.0]))[0])


_SINC_BASE_SUP = None


def _sinc_envelope_base() -> float:
    """sup over x >= 0 of |sinc(x)| (1+x); the tail is dominated by (1+x)/(pi x)."""
    global _SINC_BASE_SUP
    if _SINC_BASE_SUP is None:
        xs = np.linspace(0.0, 4.0, 400001)
        vals = np.abs(np.sinc(xs)) * (1.0 + xs)
        k = int(np.argmax(vals))
        a, b = xs[max(0, k - 1)], xs[k + 1]
        f = lambda x: abs(float(np.sinc(x))) * (1.0 + x)
        for _ in range(90):
            m1 = a + (b - a) / 3.0
            m2 = b - (b - a) / 3.0
            if f(m1) < f(m2):
                a = m1
            else:
                b = m2
        _SINC_BASE_SUP = max(float(vals[k]), f(0.5 * (a + b)))
    return _SINC_BASE_SUP


def make_bspline(n: int) -> Window:
    """B_n: the n-fold convolution of the unit box, a compactly supported atom.

    Time support is [-(n+1)/2, (n+1)/2]; the frequency side is sinc^{n+1}
    with polynomial decay exponent exactly n+1.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be a positive integer")
    order = n + 1
    sup = 0.5 * order

    def bt(t):
        return _centered_bspline(order, t)

    def bf(z):
        z = np.asarray(z, dtype=float)
        return np.sinc(z) ** order

    c = _sinc_envelope_base() ** order
    return Window(
        window_id=f"bspline:{n}",
        eval_time=bt,
        eval_freq=bf,
        decay_C=c,
        decay_r=float(order),
        l2_norm_sq=_bspline_l2_norm_sq(n),
        time_support=(-sup, sup),
    )


def _gauss_legendre_cached(n=512):
    return np.polynomial.legendre.leggauss(n)


_GL_X, _GL_W = _gauss_legendre_cached()


def make_bandlimited_bump(omega_max: float, decay_r: float = 8.0) -> Window:
    """Smooth bump on the frequency side, hard-supported on [-omega_max, omega_max].

    psi_hat(xi) ~ exp(-1 / (1 - (xi/omega_max)^2)) inside the support, scaled
    to unit L2 norm.  Compact support makes every finite decay pair valid;
    decay_C is fitted for the requested decay_r on the support.
    """
    om = float(omega_max)
    if not (om > 0 and math.isfinite(om)):
        raise ValueError("omega_max must be positive and finite")

    def raw(z):
        z = np.asarray(z, dtype=float)
        u = z / om
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        ui = u[inside]
        out[inside] = np.exp(-1.0 / (1.0 - ui * ui))
        return out

    # L2 normalization by Gauss-Legendre on the support
    nodes = 0.5 * om * (_GL_X + 1.0) * 2.0 - om  # map [-1,1] -> [-om, om]
    norm_sq = float(np.sum(_GL_W * raw(nodes) ** 2) * om)
    scale = 1.0 / math.sqrt(norm_sq)

    def bf(z):
        return scale * raw(z)

    def bt(t):
        # inverse transform, vectorized over t via the same fixed GL rule
        t = np.asarray(t, dtype=float)
        ker = np.exp(2j * np.pi * np.outer(t, nodes))
        return ker @ (_GL_W * bf(nodes)) * om

    r = float(decay_r)
    c = _fit_envelope_constant(bf, r, 0.0, om)
    return Window(
        window_id=f"bump:{om:g}",
        eval_time=bt,
        eval_freq=bf,
        decay_C=c,
        decay_r=r,
        l2_norm_sq=1.0,
        freq_support=(-om, om),
    )


def make_chirped_gaussian(chirp: float = 1.0, center: float = 2.0,
                          decay_r: float = 8.0) -> Window:
    """A complex Gaussian with quadratic chirp and frequency offset.

    psi(t) = 2^{1/4} e^{-pi (1 - i c) t^2} e^{2 pi i f0 t} has unit L2 norm
    and |psi_hat| is a Gaussian centered at f0, so the frequency magnitude is
    genuinely asymmetric about zero when f0 != 0.  Useful for exercising the
    conjugation/reflection symmetry of the symbol.
    """
    c_ = float(chirp)
    f0 = float(center)
    z = 1.0 - 1j * c_

    def et(t):
        t = np.asarray(t, dtype=float)
        return 2.0 ** 0.25 * np.exp(-np.pi * z * t * t) * np.exp(2j * np.pi * f0 * t)

    zinv = 1.0 / z
    pref = 2.0 ** 0.25 / np.sqrt(z)

    def ef(xi):
        xi = np.asarray(xi, dtype=float)
        u = xi - f0
        return pref * np.exp(-np.pi * u * u * zinv)

    r = float(decay_r)
    spread = math.sqrt(1.0 + c_ * c_)
    lo = f0 - 30.0 * spread - 1.0
    hi = f0 + 30.0 * spread + 1.0
    cfit = _fit_envelope_constant(lambda x: np.abs(ef(x)), r, lo, hi)
    return Window(
        window_id=f"chirp:{c_:g}:{f0:g}",
        eval_time=et,
        eval_freq=ef,
        decay_C=cfit,
        decay_r=r,
        l2_norm_sq=1.0,
        freq_abs_even=False,
    )


def conjugate_window(w: Window) -> Window:
    """The window conj(psi); its frequency side is conj(psi_hat(-xi))."""

    def et(t):
        return np.conjugate(w.eval_time(t))

    def ef(xi):
        return np.conjugate(w.eval_freq(-np.asarray(xi, dtype=float)))

    def flip(interval):
        if interval is None:
            return None
        a, b = interval
        return (-b, -a)

    return Window(
        window_id=w.window_id + ":conj",
        eval_time=et,
        eval_freq=ef,
        decay_C=w.decay_C,
        decay_r=w.decay_r,
        l2_norm_sq=w.l2_norm_sq,
        freq_continuous=w.freq_continuous,
        time_support=flip(w.time_support),
        freq_support=flip(w.freq_support),
        freq_abs_even=w.freq_abs_even,
    )


def load_window(csv_path, sidecar_path=None) -> Window:
    """Import a tabulated frequency profile.

    The CSV has header xi,re,im with samples of psi_hat on an increasing
    grid; cubic interpolation applies in between and the profile is zero
    outside the sampled range.  A JSON sidecar (default: csv path + '.json')
    declares {"decay_C", "decay_r", "l2_norm_sq"}, which downstream
    invariant checks then validate rather than trust.
    """
    from scipy.interpolate import CubicSpline

    csv_path = Path(csv_path)
    if sidecar_path is None:
        sidecar_path = csv_path.with_suffix(csv_path.suffix + ".json")
    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        import csv as _csv

        reader = _csv.reader(fh)
        header = next(reader)
        if [c.strip() for c in header] != ["xi", "re", "im"]:
            raise ValueError(f"expected header xi,re,im, got {header}")
        rows = [(float(r[0]), float(r[1]), float(r[2])) for r in reader if r]
    if len(rows) < 4:
        raise ValueError("need at least 4 samples for cubic interpolation")
    xi = np.array([r[0] for r in rows])
    vals = np.array([complex(r[1], r[2]) for r in rows])
    if np.any(np.diff(xi) <= 0):
        raise ValueError("xi column must be strictly increasing")
    meta = json.loads(Path(sidecar_path).read_text(encoding="utf-8"))
    spline_re = CubicSpline(xi, vals.real)
    spline_im = CubicSpline(xi, vals.imag)
    lo, hi = float(xi[0]), float(xi[-1])

    def ef(z):
        z = np.asarray(z, dtype=float)
        out = np.zeros(z.shape, dtype=np.complex128)
        inside = (z >= lo) & (z <= hi)
        out[inside] = spline_re(z[inside]) + 1j * spline_im(z[inside])
        return out

    glx, glw = _GL_X, _GL_W
    nodes = 0.5 * (hi - lo) * (glx + 1.0) + lo
    weights = glw * 0.5 * (hi - lo)
    node_vals = ef(nodes)

    def et(t):
        t = np.asarray(t, dtype=float)
        ker = np.exp(2j * np.pi * np.outer(t, nodes))
        return ker @ (weights * node_vals)

    mags = np.abs(vals)
    even = bool(np.allclose(mags, np.abs(ef(-xi)), rtol=1e-6, atol=1e-9 * mags.max()))
    return Window(
        window_id=f"csv:{csv_path.name}",
        eval_time=et,
        eval_freq=ef,
        decay_C=float(meta["decay_C"]),
        decay_r=float(meta["decay_r"]),
        l2_norm_sq=float(meta["l2_norm_sq"]),
        freq_support=(lo, hi),
        freq_abs_even=even,
    )
