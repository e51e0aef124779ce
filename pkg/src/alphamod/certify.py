"""Frame-bound certification for the admissibility symbol.

A certificate combines three ingredients: a hypothesis check on the window's
frequency decay, an adaptively refined scan of the symbol over [0, xi_max]
(mirrored for windows without even |psi_hat|), and closed-form tail bounds
that pin m(xi) near its large-xi limit for every xi beyond the scan range.
A_est and B_est then bound the symbol on the whole line, which is exactly a
frame-bound pair for the associated transform.
"""

from __future__ import annotations

import dataclasses
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .quadrature import adaptive_quad
from .symbol import eval_m, geometry, invert_r_branch
from .windows import (
    AlphaParams,
    HypothesisReport,
    Window,
    check_hypothesis,
    conjugate_window,
)

__all__ = [
    "TailReport",
    "Certificate",
    "tail_bounds",
    "certify",
    "save_certificate",
    "load_certificate",
]

_GRID_N0 = 97
_MIN_REL_SPACING = 2.0**-12
_MAX_GRID_POINTS = 20_000


@dataclass(frozen=True)
class TailReport:
    """Certified bounds on the four-interval split at the scan edge.

    i1_bound, i2_bound, i3_bound dominate the negative-axis contributions;
    i4_deviation bounds |I4 - limit_value|.  Each bound is nonincreasing in
    xi, so total bounds |m(xi) - limit| for every xi at or beyond the point
    the report was evaluated at and the symbol stays inside
    [limit - total, limit + total] there.  cutoff_a records the frequency
    radius A at which the i4 deviation balances its near and far terms.
    """

    i1_bound: float
    i2_bound: float
    i3_bound: float
    i4_deviation: float
    total: float
    cutoff_a: float


def _h_inf_bounds(xi: float, p: AlphaParams):
    """Infima of |h| over I1 and I3, attained at the critical-window edges."""
    a = p.alpha
    base = 0.5 * (1.0 - a) * xi**a
    inf_i1 = base / (xi - 1.0 + 0.5 * xi**a)
    inf_i3 = base / (xi - 1.0 - 0.5 * xi**a)
    return inf_i1, inf_i3


def _half_tail_mass(w: Window, A: float, side: float) -> float:
    C, r = w.decay_C, w.decay_r
    hi = math.inf
    if w.freq_support is not None:
        s_lo, s_hi = w.freq_support
        hi = s_hi if side > 0 else -s_lo
        if hi <= A:
            return 0.0
    remainder = 0.0
    if math.isinf(hi):
        # quadrature window capped so oscillatory transforms stay resolvable;
        # the closed-form envelope covers everything beyond the cut
        ratio = 10.0 ** (3.0 / (2.0 * r - 1.0))
        hi = min((1.0 + A) * ratio - 1.0, A + 5000.0)
        remainder = C * C * (1.0 + hi) ** (1.0 - 2.0 * r) / (2.0 * r - 1.0)
    scale = C * C * (1.0 + A) ** (1.0 - 2.0 * r) / (2.0 * r - 1.0)
    n_edges = max(9, int(8.0 * math.log10((1.0 + hi) / (1.0 + A))) + 2)
    edges = np.geomspace(1.0 + A, 1.0 + hi, n_edges) - 1.0
    val, err = adaptive_quad(
        lambda z: np.abs(w.eval_freq(side * z)) ** 2,
        edges, 1e-4 * scale + 1e-300)
    return val + err + remainder


def _freq_tail_mass(w: Window, A: float) -> float:
    """Upper bound on the |psi_hat|^2 mass outside [-A, A], by quadrature.

    Each side is integrated out to its support edge when one exists, else to
    a far cut whose closed-form envelope remainder is added back; quadrature
    error inflates rather than refines the value, keeping it a bound.
    """
    if w.freq_abs_even:
        return 2.0 * _half_tail_mass(w, A, +1.0)
    return _half_tail_mass(w, A, +1.0) + _half_tail_mass(w, A, -1.0)


def _i4_deviation(xi: float, w: Window, p: AlphaParams):
    """Bound on |I4(xi) - l2| with the split radius A balanced by bisection.

    Inside |z| <= A the substitution z = r_xi(omega) turns I4 into
    int |psi_hat|^2 / h dz, contributing at most sup|1/h - 1| * l2 with the
    sup taken over the right branch; the mass outside [-A, A] enters once
    directly and once weighted by sup(1/h) <= 1/(1-alpha).  The h-term grows
    with A while the mass term shrinks, so bisecting their difference to its
    sign change minimizes the sum.
    """
    a = p.alpha
    l2 = w.l2_norm_sq
    lo = 1.0
    hi = max(1.0, min(xi - 1.0, 1e6))
    if w.freq_support is not None:
        s_lo, s_hi = w.freq_support
        hi = min(hi, max(abs(s_lo), abs(s_hi), 1.0))
    zgrid = np.linspace(-1.0, 1.0, 65)

    def h_term(A):
        om = invert_r_branch(xi, A * zgrid, "right", p)
        hvals = 1.0 + a * (xi - om) / (1.0 + om)
        return float(np.max(np.abs(1.0 / hvals - 1.0))) * l2

    def mass_term(A):
        return _freq_tail_mass(w, A) * (1.0 + 1.0 / (1.0 - a))

    if h_term(lo) >= mass_term(lo):
        A = lo
    elif h_term(hi) <= mass_term(hi):
        A = hi
    else:
        # bisection on log A: the difference h_term - mass_term changes sign
        # exactly once, and the radius can span several decades
        va, vb = lo, hi
        for _ in range(48):
            mid = math.sqrt(va * vb)
            if h_term(mid) >= mass_term(mid):
                vb = mid
            else:
                va = mid
        A = vb
    return h_term(A) + mass_term(A), A


def _tail_bounds_one(xi: float, w: Window, p: AlphaParams) -> TailReport:
    a = p.alpha
    g = geometry(xi, p)
    C, r = w.decay_C, w.decay_r
    inf_i1, inf_i3 = _h_inf_bounds(xi, p)
    i1 = C * C * (1.0 + g.z1) ** (1.0 - 2.0 * r) / ((2.0 * r - 1.0) * inf_i1)
    i2 = (a / (1.0 - a)) * C * C * xi**a * (1.0 + g.r_at_star) ** (-2.0 * r)
    i3 = C * C * (1.0 + g.z2) ** (1.0 - 2.0 * r) / ((2.0 * r - 1.0) * inf_i3)
    dev4, cutoff = _i4_deviation(xi, w, p)
    total = i1 + i2 + i3 + dev4
    return TailReport(i1, i2, i3, dev4, total, cutoff)


def tail_bounds(xi: float, w: Window, p: AlphaParams) -> TailReport:
    """Certified deviation of m from its limit for all arguments >= xi.

    Each component bound is decreasing in xi, so evaluating at the scan edge
    covers the whole tail.  Windows without even |psi_hat| are paired with
    their conjugate so the bound also covers the negative axis.
    """
    if p.alpha <= 0.0:
        return TailReport(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    rep = _tail_bounds_one(xi, w, p)
    if not w.freq_abs_even:
        other = _tail_bounds_one(xi, conjugate_window(w), p)
        if other.total > rep.total:
            rep = other
    return rep


@dataclass(frozen=True)
class Certificate:
    """Outcome of a frame-bound certification run."""

    alpha: float
    window_id: str
    hypothesis: HypothesisReport
    A_est: float
    B_est: float
    xi_max: float
    grid_spacing_policy: str
    tail_report: Optional[TailReport]
    limit_value: float
    status: str


def _scan_grid(xi_max: float) -> np.ndarray:
    u = np.linspace(0.0, 1.0, _GRID_N0)
    return (1.0 + xi_max) ** u - 1.0


def _eval_many(xis, w, p, tol, threads):
    def one(xi):
        return eval_m(float(xi), w, p, tol)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as ex:
            res = list(ex.map(one, xis))
    else:
        res = [one(xi) for xi in xis]
    return np.array([v for v, _ in res]), np.array([e for _, e in res])


def certify(w: Window, p: AlphaParams, xi_max: float = 1000.0,
            tol: float = 1e-2, threads: int = 1) -> Certificate:
    """Scan, refine, bound the tail, and certify frame bounds if possible.

    The scan grid is geometric in 1 + xi and refined by midpoint insertion
    until neighboring symbol values differ by less than tol or the spacing
    floor (1 + xi) * 2**-12 is reached.  The status is certified-numerically
    only if the tail deviation closes below half the scanned minimum and the
    resulting lower bound stays positive.
    """
    if xi_max <= 0:
        raise ValueError("xi_max must be positive")
    if tol <= 0:
        raise ValueError("tol must be positive")
    policy = (
        f"geometric in (1+xi), N0={_GRID_N0}, midpoint refinement until "
        f"|dm| <= {tol:g} or dxi <= (1+xi)*2**-12"
    )
    hyp = check_hypothesis(w, p)
    base = dict(
        alpha=p.alpha,
        window_id=w.window_id,
        hypothesis=hyp,
        xi_max=float(xi_max),
        grid_spacing_policy=policy,
        limit_value=float(w.l2_norm_sq),
    )
    if not hyp.passed:
        return Certificate(
            A_est=math.nan, B_est=math.nan, tail_report=None,
            status="hypothesis-failed", **base,
        )

    if p.alpha == 0.0:
        l2 = float(w.l2_norm_sq)
        return Certificate(
            A_est=l2, B_est=l2,
            tail_report=TailReport(0.0, 0.0, 0.0, 0.0, 0.0, 0.0),
            status="certified-numerically", **base,
        )

    eval_tol = tol / 4.0
    xis = _scan_grid(xi_max)
    if not w.freq_abs_even:
        xis = np.unique(np.concatenate([-xis[::-1], xis]))
    m_vals, errs = _eval_many(xis, w, p, eval_tol, threads)

    for _ in range(40):
        gaps = np.abs(np.diff(m_vals))
        spacing = np.diff(xis)
        floor = (1.0 + np.abs(xis[:-1])) * _MIN_REL_SPACING
        need = (gaps > tol) & (spacing > floor)
        budget = _MAX_GRID_POINTS - xis.size
        if not np.any(need) or budget <= 0:
            break
        idx = np.flatnonzero(need)
        if idx.size > budget:
            idx = idx[np.argsort(gaps[idx])[::-1][:budget]]
        left = xis[idx]
        right = xis[idx + 1]
        sgn = np.where(left + right >= 0.0, 1.0, -1.0)
        mids = sgn * (np.sqrt((1.0 + np.abs(left)) * (1.0 + np.abs(right))) - 1.0)
        mids_m, mids_e = _eval_many(mids, w, p, eval_tol, threads)
        order = np.argsort(np.concatenate([xis, mids]))
        xis = np.concatenate([xis, mids])[order]
        m_vals = np.concatenate([m_vals, mids_m])[order]
        errs = np.concatenate([errs, mids_e])[order]

    grid_min = float(m_vals.min())
    grid_max = float(m_vals.max())
    margin = tol + 2.0 * float(errs.max())

    if p.alpha * xi_max <= 2.0:
        return Certificate(
            A_est=max(grid_min - margin, 0.0), B_est=grid_max + margin,
            tail_report=None, status="inconclusive", **base,
        )

    tail = tail_bounds(xi_max, w, p)
    limit = float(w.l2_norm_sq)
    a_est = min(grid_min, limit - tail.total) - margin
    b_est = max(grid_max, limit + tail.total) + margin
    if tail.total >= 0.5 * grid_min or a_est <= 0.0:
        return Certificate(
            A_est=a_est, B_est=b_est, tail_report=tail,
            status="inconclusive", **base,
        )
    return Certificate(
        A_est=a_est, B_est=b_est, tail_report=tail,
        status="certified-numerically", **base,
    )


# ---------------------------------------------------------------------------
# serialization: floats carry 17 significant digits so reloads are bit-exact


def _to_jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _to_jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (list, tuple)):
        return [_to_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _to_jsonable(v) for k, v in obj.items()}
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _render(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for k, v in obj.items():
            items.append(f'{pad}  "{k}": {_render(v, indent + 1)}')
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        items = [f"{pad}  {_render(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, float):
        if math.isnan(obj):
            return "NaN"
        if math.isinf(obj):
            return "Infinity" if obj > 0 else "-Infinity"
        return f"{obj:.17g}"
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(obj)


def save_certificate(cert: Certificate, path) -> None:
    text = _render(_to_jsonable(cert)) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def load_certificate(path) -> Certificate:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    hyp = HypothesisReport(**raw["hypothesis"])
    tail = raw.get("tail_report")
    if tail is not None:
        tail = TailReport(**tail)
    return Certificate(
        alpha=float(raw["alpha"]),
        window_id=str(raw["window_id"]),
        hypothesis=hyp,
        A_est=float(raw["A_est"]),
        B_est=float(raw["B_est"]),
        xi_max=float(raw["xi_max"]),
        grid_spacing_policy=str(raw["grid_spacing_policy"]),
        tail_report=tail,
        limit_value=float(raw["limit_value"]),
        status=str(raw["status"]),
    )
