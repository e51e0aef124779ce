"""Scalar machinery for the admissibility symbol.

Everything here revolves around the reparametrized frequency map

    r_xi(omega) = beta(omega) * (xi - omega),   beta(omega) = (1+|omega|)^(-alpha),

whose geometry (one interior critical point omega* on the negative axis once
alpha*xi > 1, monotone branches elsewhere) organizes both the quadrature of

    m(xi) = int |psi_hat(r_xi(omega))|^2 beta(omega) d omega

and the change of variables z = r_xi(omega) used for cross-checking.  The
quadrature engine seeds panel edges at preimages of integer z so that
oscillatory window profiles (sinc powers) are resolved from the start, and
truncates with certified envelope tails built from the window's decay
metadata.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .quadrature import QuadratureError, adaptive_quad
from .windows import AlphaParams, Window, conjugate_window

__all__ = [
    "XiGeometry",
    "SymbolParts",
    "SymbolGrid",
    "eval_r",
    "eval_r_prime",
    "eval_h",
    "geometry",
    "invert_r_branch",
    "eval_m",
    "eval_m_parts",
    "substituted_integral",
    "right_branch_uniform_deviation",
    "sweep_symbol",
    "symbol_grid_to_csv",
    "symbol_grid_from_csv",
]

_SEED_LIMIT = 150_000


def eval_r(xi, omega, p: AlphaParams):
    """r_xi(omega) = (xi - omega) * (1 + |omega|)^(-alpha)."""
    om = np.asarray(omega, dtype=float)
    out = (xi - om) * (1.0 + np.abs(om)) ** (-p.alpha)
    return out if om.ndim else float(out)


def _check_nonzero(omega):
    om = np.asarray(omega, dtype=float)
    if np.any(om == 0.0):
        raise ValueError("omega = 0 is a kink of |omega|; derivative data undefined there")
    return om


def eval_h(xi, omega, p: AlphaParams):
    """h_xi(omega) = 1 + sign(omega) * alpha * (xi - omega) / (1 + |omega|).

    Satisfies r_xi'(omega) = -beta(omega) * h_xi(omega) away from omega = 0.
    """
    om = _check_nonzero(omega)
    out = 1.0 + np.sign(om) * p.alpha * (xi - om) / (1.0 + np.abs(om))
    return out if om.ndim else float(out)


def eval_r_prime(xi, omega, p: AlphaParams):
    """Derivative of r_xi; domain error at the kink omega = 0."""
    om = _check_nonzero(omega)
    beta = (1.0 + np.abs(om)) ** (-p.alpha)
    out = -beta * (1.0 + np.sign(om) * p.alpha * (xi - om) / (1.0 + np.abs(om)))
    return out if om.ndim else float(out)


def _h_signed(xi, omega, p: AlphaParams, sign: float):
    """h_xi with the sign of omega imposed; safe arbitrarily close to 0."""
    om = np.asarray(omega, dtype=float)
    return 1.0 + sign * p.alpha * (xi - om) / (1.0 + np.abs(om))


# ---------------------------------------------------------------------------
# geometry


@dataclass(frozen=True)
class XiGeometry:
    """Critical-point geometry of r_xi for xi > 2/alpha.

    i1..i4 partition the line:  i1 = (-inf, omega_star - half_width],
    i2 the symmetric window around the critical point, i3 up to 0, and
    i4 = [0, inf).  z1/z2 are the r-values at the edges of i2.
    """

    xi: float
    alpha: float
    omega_star: float
    half_width: float
    r_at_star: float
    z1: float
    z2: float
    i1: Tuple[float, float]
    i2: Tuple[float, float]
    i3: Tuple[float, float]
    i4: Tuple[float, float]


def geometry(xi: float, p: AlphaParams) -> XiGeometry:
    a = p.alpha
    if a <= 0.0:
        raise ValueError("geometry requires alpha > 0")
    xi = float(xi)
    if not xi > 2.0 / a:
        raise ValueError(f"geometry is defined only for xi > 2/alpha = {2.0 / a:g}")
    ws = (1.0 - a * xi) / (1.0 - a)
    d = a * xi**a / (2.0 * (1.0 - a))
    rstar = a ** (-a) * ((xi - 1.0) / (1.0 - a)) ** (1.0 - a)
    pref = 1.0 / ((1.0 - a) ** (1.0 - a) * a**a)
    z1 = pref * (xi - 1.0 + 0.5 * a * xi**a) / (xi - 1.0 + 0.5 * xi**a) ** a
    z2 = pref * (xi - 1.0 - 0.5 * a * xi**a) / (xi - 1.0 - 0.5 * xi**a) ** a

    checks = (
        (rstar, float(eval_r(xi, ws, p))),
        (z1, float(eval_r(xi, ws - d, p))),
        (z2, float(eval_r(xi, ws + d, p))),
    )
    for closed, direct in checks:
        if abs(closed - direct) > 1e-10 * (1.0 + abs(closed)):
            raise RuntimeError(
                f"geometry self-check failed at xi={xi:g}, alpha={a:g}: "
                f"{closed!r} vs {direct!r}"
            )
    if not ws + d < 0.0:
        raise RuntimeError(f"critical window leaks onto the positive axis at xi={xi:g}")
    return XiGeometry(
        xi=xi,
        alpha=a,
        omega_star=ws,
        half_width=d,
        r_at_star=rstar,
        z1=z1,
        z2=z2,
        i1=(-math.inf, ws - d),
        i2=(ws - d, ws + d),
        i3=(ws + d, 0.0),
        i4=(0.0, math.inf),
    )


# ---------------------------------------------------------------------------
# monotone pieces and branch inversion


@dataclass(frozen=True)
class _Piece:
    """A maximal omega-interval on which r_xi is strictly monotone."""

    lo: float
    hi: float
    z_at_lo: float
    z_at_hi: float
    increasing: bool
    sign: float  # sign of omega on the (open) piece


def _pieces(xi: float, p: AlphaParams):
    a = p.alpha
    out = []
    if a * xi > 1.0 + 1e-12:
        ws = (1.0 - a * xi) / (1.0 - a)
        rstar = float(eval_r(xi, ws, p))
        out.append(_Piece(-math.inf, ws, math.inf, rstar, False, -1.0))
        out.append(_Piece(ws, 0.0, rstar, xi, True, -1.0))
    else:
        out.append(_Piece(-math.inf, 0.0, math.inf, xi, False, -1.0))
    out.append(_Piece(0.0, math.inf, xi, -math.inf, False, 1.0))
    return out


def _bracket(xi: float, p: AlphaParams, piece: _Piece, z: float):
    """A finite bisection bracket [lo, hi] on the piece containing r = z."""
    lo, hi = piece.lo, piece.hi
    if not math.isinf(lo) and not math.isinf(hi):
        return lo, hi
    if math.isinf(lo):
        dist = max(1.0, abs(hi))
        cand = hi - dist
        for _ in range(600):
            if float(eval_r(xi, cand, p)) >= z:
                return cand, hi
            dist *= 4.0
            cand = hi - dist
        raise QuadratureError(f"failed to bracket z={z:g} on the left branch")
    dist = max(1.0, xi, lo)
    cand = lo + dist
    for _ in range(600):
        if float(eval_r(xi, cand, p)) <= z:
            return lo, cand
        dist *= 4.0
        cand = lo + dist
    raise QuadratureError(f"failed to bracket z={z:g} on the right branch")


def _invert_monotone(xi, p, z, lo, hi, increasing):
    """Vectorized bisection for r_xi(omega) = z on a monotone bracket."""
    z = np.asarray(z, dtype=float)
    lo = np.full(z.shape, lo, dtype=float)
    hi = np.full(z.shape, hi, dtype=float)
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        rm = eval_r(xi, mid, p)
        if increasing:
            take_lo = rm <= z
        else:
            take_lo = rm >= z
        lo = np.where(take_lo, mid, lo)
        hi = np.where(take_lo, hi, mid)
    return 0.5 * (lo + hi)


def _invert_on_piece(xi, p, piece: _Piece, z):
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    zmax = float(z_arr.max())
    zmin = float(z_arr.min())
    # the bracket has to cover both z extremes, and on an infinite piece the
    # finite end depends on which extreme the doubling search chases
    lo, hi = _bracket(xi, p, piece, zmax if not piece.increasing else zmin)
    lo2, hi2 = _bracket(xi, p, piece, zmin if not piece.increasing else zmax)
    lo, hi = min(lo, lo2), max(hi, hi2)
    out = _invert_monotone(xi, p, z_arr, lo, hi, piece.increasing)
    return out if np.ndim(z) else float(out[0])


_BRANCHES = ("left", "middle", "right")


def invert_r_branch(xi: float, z, branch: str, p: AlphaParams):
    """Invert r_xi on one of its monotone branches.

    left:   omega in (-inf, omega_star], valid for z >= r_at_star;
    middle: omega in [omega_star, 0], valid for r_at_star <= z <= xi;
    right:  omega in [0, inf), valid for z <= xi.

    Accepts scalar or array z.  The result satisfies
    |r_xi(omega) - z| <= 1e-10 * (1 + |z|).
    """
    if branch not in _BRANCHES:
        raise ValueError(f"branch must be one of {_BRANCHES}, got {branch!r}")
    a = p.alpha
    xi = float(xi)
    z_arr = np.atleast_1d(np.asarray(z, dtype=float))
    tol_band = 1e-9 * (1.0 + np.abs(z_arr))

    if branch in ("left", "middle"):
        if a * xi <= 1.0:
            raise ValueError(
                "left/middle branches need an interior critical point (alpha*xi > 1)"
            )
        ws = (1.0 - a * xi) / (1.0 - a)
        rstar = float(eval_r(xi, ws, p))
        if np.any(z_arr < rstar - tol_band):
            raise ValueError(f"z below the branch minimum r(omega*) = {rstar:g}")
        if branch == "middle" and np.any(z_arr > xi + tol_band):
            raise ValueError(f"z above the middle-branch maximum r(0) = {xi:g}")
        piece = (
            _Piece(-math.inf, ws, math.inf, rstar, False, -1.0)
            if branch == "left"
            else _Piece(ws, 0.0, rstar, xi, True, -1.0)
        )
    else:
        if np.any(z_arr > xi + tol_band):
            raise ValueError(f"z above the right-branch maximum r(0) = {xi:g}")
        piece = _Piece(0.0, math.inf, xi, -math.inf, False, 1.0)

    om = np.atleast_1d(_invert_on_piece(xi, p, piece, z_arr))

    # one Newton polish where the derivative is usable
    with np.errstate(all="ignore"):
        hvals = _h_signed(xi, om, p, piece.sign)
        beta = (1.0 + np.abs(om)) ** (-a)
        deriv = -beta * hvals
        resid = eval_r(xi, om, p) - z_arr
        ok = (np.abs(deriv) > 1e-12) & (om != 0.0)
        step = np.where(ok, resid / deriv, 0.0)
        cand = om - step
        lo_b = piece.lo if math.isfinite(piece.lo) else -np.inf
        hi_b = piece.hi if math.isfinite(piece.hi) else np.inf
        cand = np.clip(cand, lo_b, hi_b)
        better = np.abs(eval_r(xi, cand, p) - z_arr) < np.abs(resid)
        om = np.where(ok & better, cand, om)

    resid = np.abs(eval_r(xi, om, p) - z_arr)
    bad = resid > 1e-10 * (1.0 + np.abs(z_arr))
    if np.any(bad):
        k = int(np.argmax(resid))
        raise RuntimeError(
            f"branch inversion residual {resid.flat[k]:.3e} at z={z_arr.flat[k]:g} "
            f"exceeds tolerance"
        )
    return om if np.ndim(z) else float(om[0])


# ---------------------------------------------------------------------------
# symbol quadrature


def _mirror_for_negative_xi(w: Window) -> Window:
    # |psi_hat(-.)| is all the integrand sees, and the conjugate window
    # provides exactly that magnitude profile with coherent support metadata.
    return conjugate_window(w)


def _support_clip(w: Window, zmin: float, zmax: float):
    if w.freq_support is not None:
        s_lo, s_hi = w.freq_support
        zmin = max(zmin, s_lo)
        zmax = min(zmax, s_hi)
    return zmin, zmax


def _envelope_tail(C: float, r: float, z_abs: float, hmin: float) -> float:
    """Bound on int_{|z| >= z_abs} |psi_hat|^2 / |h| dz along one side."""
    return C * C * (1.0 + z_abs) ** (1.0 - 2.0 * r) / ((2.0 * r - 1.0) * hmin)


def _upper_cut(xi, p, piece, w, z_lo, z_hi, budget):
    """Find Z <= z_hi with certified mass above Z below budget.

    Returns (Z, bound).  The bound uses the window envelope and the minimum
    of |h| over the far region, which is controlled by |h| at the cut point
    and the limiting value 1 - alpha.
    """
    C, r = w.decay_C, w.decay_r
    z = max(4.0, z_lo + 2.0)
    if z >= z_hi:
        return z_hi, 0.0
    for _ in range(200):
        if z >= z_hi:
            return z_hi, 0.0
        om = _invert_on_piece(xi, p, piece, z)
        hval = abs(float(_h_signed(xi, np.asarray([om]), p, piece.sign)[0]))
        hmin = min(hval, 1.0 - p.alpha)
        if hmin > 1e-300:
            bound = _envelope_tail(C, r, z, hmin)
            if bound <= budget:
                return z, bound
        z = z * 1.8 + 2.0
    raise QuadratureError(
        f"could not certify the large-z tail at xi={xi:g} within the budget"
    )


def _lower_cut(p, w, z_hi, budget):
    """Certified cut on the z -> -inf side (right piece); |h| >= 1 - alpha there."""
    C, r = w.decay_C, w.decay_r
    hmin = 1.0 - p.alpha
    z = min(-4.0, z_hi - 2.0)
    for _ in range(200):
        bound = _envelope_tail(C, r, abs(z), hmin)
        if bound <= budget:
            return z, bound
        z = z * 1.8 - 2.0
    raise QuadratureError("could not certify the negative-z tail within the budget")


def _integer_seeds(zmin: float, zmax: float):
    if zmax - zmin > _SEED_LIMIT:
        raise QuadratureError(
            f"z-window [{zmin:g}, {zmax:g}] needs more than {_SEED_LIMIT} seed panels"
        )
    ks = np.arange(math.ceil(zmin), math.floor(zmax) + 1, dtype=float)
    ks = ks[(ks > zmin) & (ks < zmax)]
    return np.concatenate([[zmin], ks, [zmax]])


def _piece_integral(xi, w, p, piece: _Piece, budget_quad, budget_tail):
    """Integrate |psi_hat(r)|^2 beta over one monotone piece, clipped omega ends allowed."""
    za, zb = piece.z_at_lo, piece.z_at_hi
    zmin, zmax = (za, zb) if za <= zb else (zb, za)
    zmin_c, zmax_c = _support_clip(w, zmin, zmax)
    if zmin_c >= zmax_c:
        return 0.0, 0.0

    tail = 0.0
    if math.isinf(zmax_c) or zmax_c > max(8.0, zmin_c + 4.0):
        zcap = zmax_c if math.isfinite(zmax_c) else math.inf
        zmax_c, b = _upper_cut(xi, p, piece, w, max(zmin_c, 0.0), zcap, 0.5 * budget_tail)
        tail += b
    if math.isinf(zmin_c) or zmin_c < -8.0:
        zmin_c, b = _lower_cut(p, w, zmax_c, 0.5 * budget_tail)
        tail += b
    if zmin_c >= zmax_c:
        return 0.0, tail

    seeds_z = _integer_seeds(zmin_c, zmax_c)
    om_edges = np.sort(np.unique(_invert_on_piece(xi, p, piece, seeds_z)))
    if om_edges.size < 2:
        return 0.0, tail

    def integrand(om):
        z = eval_r(xi, om, p)
        mag = np.abs(w.eval_freq(z))
        return mag * mag * (1.0 + np.abs(om)) ** (-p.alpha)

    val, qerr = adaptive_quad(integrand, om_edges, budget_quad)
    return val, qerr + tail


def eval_m(xi: float, w: Window, p: AlphaParams, tol: float = 1e-8):
    """Adaptive quadrature of the admissibility symbol at xi.

    Returns (value, err) with err a certified bound combining quadrature
    error estimates and envelope tail mass.  At alpha = 0 the symbol is
    exactly the squared norm of the window, independent of xi.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if p.alpha == 0.0:
        return float(w.l2_norm_sq), 0.0
    xi = float(xi)
    if xi < 0.0:
        return eval_m(-xi, _mirror_for_negative_xi(w), p, tol)
    pieces = _pieces(xi, p)
    n = len(pieces)
    total = 0.0
    err = 0.0
    for piece in pieces:
        v, e = _piece_integral(xi, w, p, piece, 0.5 * tol / n, 0.5 * tol / n)
        total += v
        err += e
    if err > tol:
        raise QuadratureError(f"symbol error {err:.3e} exceeds tol {tol:.3e} at xi={xi:g}")
    return float(total), float(err)


@dataclass(frozen=True)
class SymbolParts:
    """Contributions of the four-interval split of the symbol integral."""

    i1: float
    i2: float
    i3: float
    i4: float
    err_i1: float
    err_i2: float
    err_i3: float
    err_i4: float

    @property
    def values(self):
        return (self.i1, self.i2, self.i3, self.i4)

    @property
    def total(self):
        return self.i1 + self.i2 + self.i3 + self.i4

    @property
    def total_err(self):
        return self.err_i1 + self.err_i2 + self.err_i3 + self.err_i4


def eval_m_parts(xi: float, w: Window, p: AlphaParams, tol: float = 1e-8) -> SymbolParts:
    """Per-interval quadratures over the four-way split; needs xi > 2/alpha."""
    if xi < 0.0:
        return eval_m_parts(-xi, _mirror_for_negative_xi(w), p, tol)
    g = geometry(xi, p)
    ws, d = g.omega_star, g.half_width
    budget = tol / 4.0

    p1 = _Piece(-math.inf, ws - d, math.inf, g.z1, False, -1.0)
    v1, e1 = _piece_integral(xi, w, p, p1, 0.5 * budget, 0.5 * budget)

    def integrand(om):
        z = eval_r(xi, om, p)
        mag = np.abs(w.eval_freq(z))
        return mag * mag * (1.0 + np.abs(om)) ** (-p.alpha)

    edges2 = np.array([ws - d, ws - 0.5 * d, ws, ws + 0.5 * d, ws + d])
    v2, e2 = adaptive_quad(integrand, edges2, budget)

    p3 = _Piece(ws + d, 0.0, g.z2, xi, True, -1.0)
    v3, e3 = _piece_integral(xi, w, p, p3, 0.5 * budget, 0.5 * budget)

    p4 = _Piece(0.0, math.inf, xi, -math.inf, False, 1.0)
    v4, e4 = _piece_integral(xi, w, p, p4, 0.5 * budget, 0.5 * budget)

    return SymbolParts(v1, v2, v3, v4, e1, e2, e3, e4)


_PART_BRANCH = {"I1": "left", "I3": "middle", "I4": "right"}


def substituted_integral(xi: float, interval: str, w: Window, p: AlphaParams,
                         tol: float = 1e-8) -> float:
    """z-domain form of the symbol contribution on a monotone interval.

    Evaluates int |psi_hat(z)|^2 / |h_xi(r_xi^{-1}(z))| dz over the image of
    I1, I3 or I4, inverting the branch pointwise.  I2 is excluded: r_xi is
    not monotone there.
    """
    key = str(interval).upper().replace(" ", "")
    if key in ("1", "3", "4"):
        key = "I" + key
    if key not in _PART_BRANCH:
        raise ValueError("interval must be one of I1, I3, I4")
    g = geometry(float(xi), p)
    xi = float(xi)

    if key == "I1":
        piece = _Piece(-math.inf, g.omega_star - g.half_width, math.inf, g.z1, False, -1.0)
        z_lo, z_hi = g.z1, math.inf
    elif key == "I3":
        piece = _Piece(g.omega_star + g.half_width, 0.0, g.z2, xi, True, -1.0)
        z_lo, z_hi = g.z2, xi
    else:
        piece = _Piece(0.0, math.inf, xi, -math.inf, False, 1.0)
        z_lo, z_hi = -math.inf, xi

    z_lo, z_hi = _support_clip(w, z_lo, z_hi)
    if z_lo >= z_hi:
        return 0.0
    tail = 0.0
    if math.isinf(z_hi) or z_hi > max(8.0, z_lo + 4.0):
        zcap = z_hi if math.isfinite(z_hi) else math.inf
        z_hi, b = _upper_cut(xi, p, piece, w, max(z_lo, 0.0), zcap, 0.25 * tol)
        tail += b
    if math.isinf(z_lo) or z_lo < -8.0:
        z_lo, b = _lower_cut(p, w, z_hi, 0.25 * tol)
        tail += b
    if z_lo >= z_hi:
        return 0.0

    om_end_a = _invert_on_piece(xi, p, piece, z_lo)
    om_end_b = _invert_on_piece(xi, p, piece, z_hi)
    br_lo = min(om_end_a, om_end_b)
    br_hi = max(om_end_a, om_end_b)

    def integrand(z):
        om = _invert_monotone(xi, p, z, br_lo, br_hi, piece.increasing)
        hval = np.abs(_h_signed(xi, om, p, piece.sign))
        mag = np.abs(w.eval_freq(z))
        return mag * mag / hval

    edges = _integer_seeds(z_lo, z_hi)
    val, qerr = adaptive_quad(integrand, edges, 0.5 * tol)
    if qerr + tail > tol:
        raise QuadratureError(
            f"substituted integral error {qerr + tail:.3e} exceeds tol {tol:.3e}"
        )
    return float(val)


def right_branch_uniform_deviation(xi: float, half_range: float, p: AlphaParams,
                                   n: int = 1001) -> float:
    """sup over z in [-A, A] of |h_xi(r_xi^{-1}(z)) - 1| on the right branch.

    The composite is monotone in z, so the grid sup is attained at an
    endpoint; n only adds interior confirmation points.
    """
    if not half_range < xi:
        raise ValueError("half_range must be smaller than xi")
    zs = np.linspace(-half_range, half_range, int(n))
    om = invert_r_branch(xi, zs, "right", p)
    return float(np.max(np.abs(eval_h(xi, om, p) - 1.0)))


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class SymbolGrid:
    """Symbol samples over a sorted xi grid, with quadrature error bounds."""

    xi_values: np.ndarray
    m_values: np.ndarray
    quad_err: np.ndarray
    parts: Optional[np.ndarray] = None

    def __post_init__(self):
        xi = np.asarray(self.xi_values, dtype=float)
        m = np.asarray(self.m_values, dtype=float)
        e = np.asarray(self.quad_err, dtype=float)
        if xi.ndim != 1 or xi.shape != m.shape or xi.shape != e.shape:
            raise ValueError("xi, m and err must be 1-d arrays of equal length")
        if xi.size > 1 and np.any(np.diff(xi) <= 0):
            raise ValueError("xi grid must be strictly increasing")
        if np.any(m <= 0.0):
            raise ValueError("the symbol must be strictly positive")
        pr = self.parts
        if pr is not None:
            pr = np.asarray(pr, dtype=float)
            if pr.shape != (xi.size, 4):
                raise ValueError("parts must have shape (len(xi), 4)")
        for name, arr in (("xi_values", xi), ("m_values", m), ("quad_err", e), ("parts", pr)):
            if arr is not None:
                arr = np.array(arr, copy=True)
                arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def sweep_symbol(xi_values, w: Window, p: AlphaParams, tol: float = 1e-8,
                 parts: bool = False, threads: int = 1) -> SymbolGrid:
    """Evaluate the symbol over a xi grid; optionally the four-way split too.

    The per-xi work is pure, so a thread pool only changes wall time: results
    are bitwise identical to the sequential sweep.
    """
    xis = np.unique(np.asarray(xi_values, dtype=float))

    def one(xi):
        v, e = eval_m(xi, w, p, tol)
        row = None
        if parts:
            if p.alpha > 0.0 and abs(xi) > 2.0 / p.alpha:
                pq = eval_m_parts(xi, w, p, tol)
                row = pq.values
            else:
                row = (math.nan,) * 4
        return v, e, row

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as ex:
            results = list(ex.map(one, xis))
    else:
        results = [one(xi) for xi in xis]

    m = np.array([r[0] for r in results])
    e = np.array([r[1] for r in results])
    part_rows = np.array([r[2] for r in results]) if parts else None
    return SymbolGrid(xis, m, e, part_rows)


def symbol_grid_to_csv(grid: SymbolGrid, path) -> None:
    import csv

    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if grid.parts is None:
            writer.writerow(["xi", "m", "err"])
            for xi, m, e in zip(grid.xi_values, grid.m_values, grid.quad_err):
                writer.writerow([repr(float(xi)), repr(float(m)), repr(float(e))])
        else:
            writer.writerow(["xi", "m", "err", "part1", "part2", "part3", "part4"])
            for xi, m, e, row in zip(grid.xi_values, grid.m_values, grid.quad_err,
                                     grid.parts):
                writer.writerow(
                    [repr(float(xi)), repr(float(m)), repr(float(e))]
                    + [repr(float(v)) for v in row]
                )


def symbol_grid_from_csv(path) -> SymbolGrid:
    import csv

    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [r for r in reader if r]
    cols = [c.strip() for c in header]
    if cols[:3] != ["xi", "m", "err"]:
        raise ValueError(f"unexpected header {header}")
    xi = np.array([float(r[0]) for r in rows])
    m = np.array([float(r[1]) for r in rows])
    e = np.array([float(r[2]) for r in rows])
    parts = None
    if len(cols) == 7:
        parts = np.array([[float(v) for v in r[3:7]] for r in rows])
    return SymbolGrid(xi, m, e, parts)
