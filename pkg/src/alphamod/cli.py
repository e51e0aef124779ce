"""Command line front end.

Subcommands: certify (frame bounds), symbol (scans), decompose (signal to
coefficients), transform (frame operator forward/inverse), reconstruct
(coefficients back to a signal), lemma-check (numerical checks of the
structural facts the engine relies on) and report (bundle).  Data lands in
CSV/JSON; unless --no-plot is given, each data-producing command renders a
PNG next to its delimited output.

Exit codes: 0 success, 1 usage error, 2 hypothesis failed, 3 inconclusive
(certification could not bound the frame, a tolerance was not met, or a
numerical check failed).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .certify import certify, load_certificate, save_certificate, tail_bounds
from .group import GroupElement, apply_pi, compose, inverse, load_signal, save_signal
from .quadrature import QuadratureError, adaptive_quad
from .symbol import (
    eval_h,
    eval_m,
    eval_m_parts,
    eval_r,
    eval_r_prime,
    geometry,
    right_branch_uniform_deviation,
    substituted_integral,
    sweep_symbol,
    symbol_grid_to_csv,
)
from .transform import (
    analyze,
    apply_frame_operator,
    bandlimited_noise,
    chirp_signal,
    gaussian_signal,
    invert_frame_operator,
    load_coefficients,
    progressive_omega_grid,
    save_coefficients,
    synthesize,
    uniform_omega_grid,
)
from .windows import (
    AlphaParams,
    check_hypothesis,
    conjugate_window,
    load_window,
    make_bandlimited_bump,
    make_bspline,
    make_chirped_gaussian,
    make_gaussian,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_HYPOTHESIS = 2
EXIT_INCONCLUSIVE = 3


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to status 2; this CLI reserves 2, so remap."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class UsageError(ValueError):
    pass


def _parse_kv(text: str):
    out = {}
    if not text:
        return out
    for chunk in text.split(","):
        if not chunk:
            continue
        key, sep, val = chunk.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {chunk!r}")
        out[key.strip()] = val.strip()
    return out


def parse_window(spec: str):
    """Window factory from a compact spec string.

    Forms: gaussian[:r=R], bspline:N or bspline:n=N, bump:omega=W[,r=R],
    chirped[:c=C,f0=F,r=R], file:PATH (CSV import with JSON sidecar).
    """
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "gaussian":
            opts = _parse_kv(rest)
            return make_gaussian(decay_r=float(opts.pop("r", 8.0)), **_none(opts))
        if kind == "bspline":
            if "=" in rest:
                opts = _parse_kv(rest)
                n = int(opts.pop("n"))
                _none(opts)
            else:
                n = int(rest)
            return make_bspline(n)
        if kind == "bump":
            opts = _parse_kv(rest)
            om = float(opts.pop("omega", 2.0))
            r = float(opts.pop("r", 8.0))
            _none(opts)
            return make_bandlimited_bump(om, decay_r=r)
        if kind == "chirped":
            opts = _parse_kv(rest)
            c = float(opts.pop("c", 1.0))
            f0 = float(opts.pop("f0", 2.0))
            r = float(opts.pop("r", 8.0))
            _none(opts)
            return make_chirped_gaussian(chirp=c, center=f0, decay_r=r)
        if kind == "file":
            if not rest:
                raise UsageError("file window needs a path: file:PATH")
            return load_window(rest)
    except UsageError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise UsageError(f"bad window spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown window kind {kind!r}")


def _none(opts: dict):
    if opts:
        raise UsageError(f"unrecognized options: {sorted(opts)}")
    return {}


def parse_signal(spec: str, n: int, dt: float, t0: float):
    """Signal factory: gaussian[:...], chirp[:...], noise:lo=L,hi=H,seed=S, csv:PATH."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "gaussian":
            o = _parse_kv(rest)
            return gaussian_signal(n, dt, t0, center=float(o.pop("center", 0.0)),
                                   width=float(o.pop("width", 1.0)),
                                   freq=float(o.pop("freq", 0.0)), **_none(o))
        if kind == "chirp":
            o = _parse_kv(rest)
            return chirp_signal(n, dt, t0, center=float(o.pop("center", 0.0)),
                                width=float(o.pop("width", 1.0)),
                                rate=float(o.pop("rate", 1.0)),
                                freq=float(o.pop("freq", 0.0)), **_none(o))
        if kind == "noise":
            o = _parse_kv(rest)
            band = (float(o.pop("lo", -8.0)), float(o.pop("hi", 8.0)))
            seed = int(o.pop("seed", 0))
            _none(o)
            return bandlimited_noise(n, dt, t0, band, seed)
        if kind == "csv":
            if not rest:
                raise UsageError("csv signal needs a path: csv:PATH")
            return load_signal(rest)
    except UsageError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise UsageError(f"bad signal spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown signal kind {kind!r}")


def _parse_xi_args(args) -> np.ndarray:
    given = [s for s in (args.xi, args.xi_log, args.xi_list) if s]
    if len(given) != 1:
        raise UsageError("exactly one of --xi, --xi-log, --xi-list is required")
    if args.xi:
        try:
            start, stop, step = (float(v) for v in args.xi.split(":"))
        except ValueError as exc:
            raise UsageError(f"--xi wants START:STOP:STEP, got {args.xi!r}") from exc
        if step <= 0 or stop < start:
            raise UsageError("--xi needs STOP >= START and STEP > 0")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return start + step * np.arange(count)
    if args.xi_log:
        try:
            lo, hi, cnt = args.xi_log.split(":")
            lo, hi, cnt = float(lo), float(hi), int(cnt)
        except ValueError as exc:
            raise UsageError(f"--xi-log wants LO:HI:COUNT, got {args.xi_log!r}") from exc
        if lo <= 0 or hi <= lo or cnt < 2:
            raise UsageError("--xi-log needs 0 < LO < HI and COUNT >= 2")
        return np.geomspace(lo, hi, cnt)
    try:
        return np.array([float(v) for v in args.xi_list.split(",") if v])
    except ValueError as exc:
        raise UsageError(f"--xi-list wants comma-separated numbers") from exc


def _stem(path: str) -> str:
    root, ext = os.path.splitext(path)
    return root if ext else path


# ---------------------------------------------------------------------------
# subcommands


def _rel_l2(a, b) -> float:
    num = float(np.sqrt(np.sum(np.abs(a.samples - b.samples) ** 2)))
    den = float(np.sqrt(np.sum(np.abs(b.samples) ** 2)))
    return num / max(den, 1e-300)


def _cmd_symbol(args) -> int:
    w = parse_window(args.window)
    p = AlphaParams(args.alpha)
    xis = _parse_xi_args(args)
    grid = sweep_symbol(xis, w, p, tol=args.tol, parts=args.parts,
                        threads=args.threads)
    symbol_grid_to_csv(grid, args.out)
    print(f"wrote {grid.xi_values.size} rows to {args.out}")
    print(f"m range: [{grid.m_values.min():.17g}, {grid.m_values.max():.17g}]")
    print(f"max quadrature error bound: {grid.quad_err.max():.3e}")
    if not args.no_plot:
        from .plots import plot_parts, plot_symbol

        png = _stem(args.out) + ".png"
        plot_symbol(grid, png, limit=w.l2_norm_sq,
                    title=f"{w.window_id}, alpha={p.alpha:g}")
        print(f"figure: {png}")
        if args.parts:
            png2 = _stem(args.out) + "_parts.png"
            plot_parts(grid, png2, title=f"{w.window_id}, alpha={p.alpha:g}")
            print(f"figure: {png2}")
    return EXIT_OK


def _cmd_certify(args) -> int:
    w = parse_window(args.window)
    p = AlphaParams(args.alpha)
    cert = certify(w, p, xi_max=args.xi_max, tol=args.tol, threads=args.threads)
    save_certificate(cert, args.out)
    print(f"window: {cert.window_id}")
    print(f"status: {cert.status}")
    print(f"hypothesis: r={cert.hypothesis.decay_r:.6g}, "
          f"threshold={cert.hypothesis.r_threshold:.17g}")
    if cert.status != "hypothesis-failed":
        print(f"A_est: {cert.A_est:.17g}")
        print(f"B_est: {cert.B_est:.17g}")
        if cert.A_est > 0.0:
            print(f"conditioning B/A: {cert.B_est / cert.A_est:.6g}")
        print(f"limit value: {cert.limit_value:.17g}")
        if cert.tail_report is not None:
            print(f"tail deviation bound: {cert.tail_report.total:.6e}")
    print(f"certificate: {args.out}")
    if not args.no_plot and cert.status != "hypothesis-failed":
        from .plots import plot_certificate

        xis = np.unique(np.concatenate([[0.0], np.geomspace(
            max(args.xi_max * 1e-3, 1e-2), args.xi_max, 60)]))
        grid = sweep_symbol(xis, w, p, tol=max(args.tol / 4.0, 1e-10),
                            threads=args.threads)
        png = _stem(args.out) + ".png"
        plot_certificate(cert, grid, png)
        print(f"figure: {png}")
    if cert.status == "certified-numerically":
        return EXIT_OK
    if cert.status == "hypothesis-failed":
        return EXIT_HYPOTHESIS
    return EXIT_INCONCLUSIVE


def _cmd_decompose(args) -> int:
    w = parse_window(args.window)
    p = AlphaParams(args.alpha)
    f = parse_signal(args.signal, args.n, args.dt, args.t0)
    if args.progressive:
        om = progressive_omega_grid(args.omega_max, args.omega_step, p)
    else:
        om = uniform_omega_grid(args.omega_max, args.omega_step)
    grid = analyze(f, w, p, om)
    save_coefficients(grid, args.out)
    print(f"coefficients: {args.out} ({grid.n_x} x {grid.n_omega})")
    if not args.no_plot:
        from .plots import plot_coefficients

        png = _stem(args.out) + ".png"
        plot_coefficients(grid, png, title=f"{w.window_id}, alpha={p.alpha:g}")
        print(f"figure: {png}")
    return EXIT_OK


def _cmd_transform(args) -> int:
    w = parse_window(args.window)
    p = AlphaParams(args.alpha)
    f = parse_signal(args.signal, args.n, args.dt, args.t0)
    cert = None
    if args.invert or args.roundtrip:
        if not args.certificate:
            raise UsageError("--invert/--roundtrip require --certificate")
        cert = load_certificate(args.certificate)
        if cert.status != "certified-numerically":
            print(f"certificate status is {cert.status!r}; cannot invert",
                  file=sys.stderr)
            return EXIT_INCONCLUSIVE
    if args.roundtrip:
        out_sig = invert_frame_operator(
            apply_frame_operator(f, w, p, tol=args.tol), w, p, cert, tol=args.tol)
        print(f"roundtrip relative error: {_rel_l2(out_sig, f):.3e}")
    elif args.invert:
        out_sig = invert_frame_operator(f, w, p, cert, tol=args.tol)
    else:
        out_sig = apply_frame_operator(f, w, p, tol=args.tol)
    save_signal(out_sig, args.out)
    print(f"signal: {args.out} ({out_sig.samples.size} samples)")
    if not args.no_plot:
        from .plots import plot_signal

        png = _stem(args.out) + ".png"
        plot_signal(out_sig, png, other=f)
        print(f"figure: {png}")
    return EXIT_OK


def _cmd_reconstruct(args) -> int:
    w = parse_window(args.window)
    p = AlphaParams(args.alpha)
    grid = load_coefficients(args.coefficients)
    if grid.window_id != w.window_id:
        raise UsageError(
            f"coefficients were produced with window {grid.window_id!r}, "
            f"got {w.window_id!r}")
    if grid.alpha != p.alpha:
        raise UsageError(
            f"coefficients carry alpha={grid.alpha:g}, got {p.alpha:g}")
    cert = load_certificate(args.certificate)
    if cert.status != "certified-numerically":
        print(f"certificate status is {cert.status!r}; cannot invert",
              file=sys.stderr)
        return EXIT_INCONCLUSIVE
    rec = invert_frame_operator(synthesize(grid, w, p), w, p, cert,
                                tol=args.tol)
    save_signal(rec, args.out)
    print(f"signal: {args.out} ({rec.samples.size} samples)")
    if args.reference:
        ref = load_signal(args.reference)
        print(f"relative error vs reference: {_rel_l2(rec, ref):.3e}")
    if not args.no_plot:
        from .plots import plot_signal

        png = _stem(args.out) + ".png"
        plot_signal(rec, png)
        print(f"figure: {png}")
    return EXIT_OK


def _cmd_report(args) -> int:
    w = parse_window(args.window)
    p = AlphaParams(args.alpha)
    os.makedirs(args.outdir, exist_ok=True)
    rep = check_hypothesis(w, p)
    lines = [
        f"window: {w.window_id}",
        f"alpha: {p.alpha:g}",
        f"hypothesis: {'PASS' if rep.passed else 'FAIL'} "
        f"(r={rep.decay_r:.6g}, threshold={rep.r_threshold:.6g})",
    ]
    if not rep.passed:
        path = os.path.join(args.outdir, "summary.txt")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
        print("\n".join(lines))
        return EXIT_HYPOTHESIS

    cert = certify(w, p, xi_max=args.xi_max, tol=args.tol, threads=args.threads)
    save_certificate(cert, os.path.join(args.outdir, "certificate.json"))
    xis = np.unique(np.concatenate([[0.0], np.geomspace(
        max(args.xi_max * 1e-3, 1e-2), args.xi_max, 120)]))
    grid = sweep_symbol(xis, w, p, tol=max(args.tol / 4.0, 1e-10),
                        threads=args.threads)
    symbol_grid_to_csv(grid, os.path.join(args.outdir, "symbol.csv"))
    if not args.no_plot:
        from .plots import plot_certificate, plot_symbol

        plot_symbol(grid, os.path.join(args.outdir, "symbol.png"),
                    limit=w.l2_norm_sq, title=f"{w.window_id}, alpha={p.alpha:g}")
        plot_certificate(cert, grid, os.path.join(args.outdir, "certificate.png"))
    lines += [
        f"status: {cert.status}",
        f"A_est: {cert.A_est:.17g}",
        f"B_est: {cert.B_est:.17g}",
    ]
    if cert.A_est > 0.0:
        lines.append(f"conditioning B/A: {cert.B_est / cert.A_est:.6g}")
    lines += [
        f"limit value: {cert.limit_value:.17g}",
        f"scan range: [0, {cert.xi_max:g}]",
    ]
    if cert.tail_report is not None:
        lines.append(f"tail deviation bound: {cert.tail_report.total:.6e}")
    path = os.path.join(args.outdir, "summary.txt")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print("\n".join(lines))
    print(f"report written to {args.outdir}")
    return EXIT_OK if cert.status == "certified-numerically" else EXIT_INCONCLUSIVE


# ---------------------------------------------------------------------------
# numerical checks for the structural facts behind the engine.  Each check
# accepts the lemma-check namespace so --alpha/--xi/--window can steer it,
# prints the quantities it compares, and returns a verdict.


def _knob_alpha(args, default):
    return AlphaParams(default if args.alpha is None else args.alpha)


def _direct_symbol_quad(xi, w, p, tol):
    """Symbol value by one plain quadrature pass, no symmetry shortcuts.

    Independent route for the mirror check: the engine's negative-argument
    path is never exercised here, the integrand is evaluated literally.
    """
    need = 10.0 ** (14.0 / (2.0 * w.decay_r))
    span = 200.0 + 8.0 * abs(xi)
    if p.alpha > 0.0:
        span = max(span, need ** (1.0 / (1.0 - p.alpha)))
    span = min(span, 1e12)
    mags = np.geomspace(1.0, span, 48)
    seeds = np.concatenate([-mags[::-1], [0.0, xi - 1.0, xi, xi + 1.0], mags])
    edges = np.unique(np.clip(seeds, -span, span))
    return adaptive_quad(
        lambda om: np.abs(w.eval_freq(eval_r(xi, om, p))) ** 2 * p.beta(om),
        edges, tol)


def _check_mirror(args) -> bool:
    p = _knob_alpha(args, 0.5)
    w = parse_window(args.window or "chirped")
    tol = 1e-8
    xis = [args.xi] if args.xi is not None else [0.7, 3.0, 25.0]
    ok = True
    for x in xis:
        direct, derr = _direct_symbol_quad(-x, w, p, tol)
        engine, eerr = eval_m(x, conjugate_window(w), p, tol)
        print(f"    xi={x:g}: direct m(-xi) = {direct:.12g}, "
              f"m(xi) with conjugated window = {engine:.12g}")
        ok &= abs(direct - engine) <= 2.0 * tol + derr + eerr
    return bool(ok)


def _check_positivity(args) -> bool:
    p = _knob_alpha(args, 0.5)
    w = parse_window(args.window or "bspline:1")
    xis = [args.xi] if args.xi is not None else [0.0, 0.5, 2.0, 10.0, 200.0]
    vals = [eval_m(float(x), w, p, 1e-8)[0] for x in xis]
    print("    m: " + ", ".join(f"{x:g} -> {v:.9g}" for x, v in zip(xis, vals)))
    xi0 = float(xis[-1])
    far_neg = float(eval_r(xi0, -1e8, p))
    far_pos = float(eval_r(xi0, 1e8, p))
    print(f"    range probes: r(xi, -1e8) = {far_neg:.6g}, "
          f"r(xi, +1e8) = {far_pos:.6g}")
    reach = 0.4 * 1e8 ** (1.0 - p.alpha)
    return bool(all(v > 0.0 for v in vals)
                and far_neg > reach and far_pos < -reach)


def _check_continuity(args) -> bool:
    p = _knob_alpha(args, 0.5)
    w = parse_window(args.window or "bspline:1")
    xi0 = 5.0 if args.xi is None else args.xi
    tol = 1e-10
    base = eval_m(xi0, w, p, tol)[0]
    steps = (1.0, 0.1, 0.01, 0.001)
    devs = [abs(eval_m(xi0 + s, w, p, tol)[0] - base) for s in steps]
    print("    |m(xi+s) - m(xi)| for s = 1, .1, .01, .001: "
          + ", ".join(f"{d:.3e}" for d in devs))
    floor = 10.0 * tol * (1.0 + abs(base))
    shrink = all(devs[i + 1] <= max(devs[i], floor) for i in range(len(devs) - 1))
    small = devs[-1] <= 1e-3 * (1.0 + abs(base))
    om = np.linspace(-50.0, 50.0, 2001)
    beta = p.beta(om)
    integ = np.abs(w.eval_freq(eval_r(xi0, om, p))) ** 2 * beta
    env = 2.0 * w.decay_C ** 2 * beta \
        * (0.5 + beta * np.abs(xi0 - om)) ** (-2.0 * w.decay_r)
    dominated = bool(np.all(integ <= env * (1.0 + 1e-12)))
    print(f"    envelope domination on 2001 nodes: {dominated}")
    return bool(shrink and small and dominated)


def _check_derivative(args) -> bool:
    p = _knob_alpha(args, 0.5)
    xi = 10.0 if args.xi is None else args.xi
    rng = np.random.default_rng(7)
    om = rng.uniform(-40.0, 40.0, size=1000)
    om = om[np.abs(om) > 1e-3]
    h = 1e-6 * (1.0 + np.abs(om))
    same_side = np.sign(om - h) == np.sign(om + h)
    om, h = om[same_side], h[same_side]
    fd = (eval_r(xi, om + h, p) - eval_r(xi, om - h, p)) / (2.0 * h)
    an = eval_r_prime(xi, om, p)
    rel = np.abs(fd - an) / (1.0 + np.abs(an))
    ident = float(np.max(np.abs(an + p.beta(om) * eval_h(xi, om, p))))
    print(f"    max rel deviation vs central differences: {np.max(rel):.3e}")
    print(f"    max |r' + beta*h|: {ident:.3e}")
    return bool(np.max(rel) < 1e-5 and ident <= 1e-12 * (1.0 + abs(xi)))


def _check_geometry(args) -> bool:
    p = _knob_alpha(args, 0.5)
    xis = (10.0, 100.0, 1000.0) if args.xi is None else (args.xi,)
    ok = True
    for xi in xis:
        g = geometry(xi, p)
        om = np.linspace(g.omega_star * 4.0, g.omega_star * 0.25, 40001)
        rr = eval_r(xi, om, p)
        k = int(np.argmin(rr))
        loc = abs(om[k] - g.omega_star) <= 2.0 * abs(om[1] - om[0])
        val = rr[k] >= g.r_at_star - 1e-9 * (1.0 + g.r_at_star)
        left = np.linspace(4.0 * g.omega_star, 1.001 * g.omega_star, 1000)
        mid = np.linspace(0.999 * g.omega_star, -1e-3, 1000)
        right = np.linspace(1e-3, 4.0 * xi, 1000)
        mono = (np.all(np.diff(eval_r(xi, left, p)) < 0.0)
                and np.all(np.diff(eval_r(xi, mid, p)) > 0.0)
                and np.all(np.diff(eval_r(xi, right, p)) < 0.0))
        peak = abs(float(eval_r(xi, 0.0, p)) - xi) <= 1e-12 * (1.0 + xi)
        print(f"    xi={xi:g}: min at omega = {g.omega_star:.9g} with "
              f"r = {g.r_at_star:.9g}, branch monotonicity: {mono}")
        ok &= loc and val and mono and peak
    return bool(ok)


def _check_substitution_eq(args) -> bool:
    p = _knob_alpha(args, 0.5)
    w = parse_window(args.window or "gaussian")
    xi = 100.0 if args.xi is None else args.xi
    tol = 1e-10
    parts = eval_m_parts(xi, w, p, tol=tol)
    ok = True
    for name, direct in (("I1", parts.i1), ("I3", parts.i3), ("I4", parts.i4)):
        sub = substituted_integral(xi, name, w, p, tol=tol)
        rel = abs(direct - sub) / max(abs(direct), abs(sub), 1e-300)
        print(f"    {name}: direct = {direct:.12e}, "
              f"substituted = {sub:.12e}, rel = {rel:.2e}")
        ok &= rel <= 1e-6
    return bool(ok)


def _check_uniform_limit(args) -> bool:
    p = _knob_alpha(args, 0.5)
    half = 5.0
    xs = (1e2, 1e3, 1e4)
    devs = [right_branch_uniform_deviation(x, half, p) for x in xs]
    print("    sup |h(r^-1(z)) - 1| on [-5, 5] at xi = 1e2, 1e3, 1e4: "
          + ", ".join(f"{d:.6g}" for d in devs))
    ok = devs[2] < devs[1] < devs[0]
    if abs(p.alpha - 0.5) < 1e-12:
        ok = ok and devs[1] < 0.1 and devs[2] < 0.03
    return bool(ok)


def _check_group_law(args) -> bool:
    rng = np.random.default_rng(20240517)
    worst = 0.0
    ok = True
    for _ in range(1000):
        vals = rng.uniform(-2.0, 2.0, size=12)
        g1 = GroupElement(vals[0], vals[1], np.exp(vals[2]), vals[3])
        g2 = GroupElement(vals[4], vals[5], np.exp(vals[6]), vals[7])
        g3 = GroupElement(vals[8], vals[9], np.exp(vals[10]), vals[11])
        lhs = compose(compose(g1, g2), g3)
        rhs = compose(g1, compose(g2, g3))
        for fa, fb in zip((lhs.x, lhs.omega, lhs.a, lhs.tau),
                          (rhs.x, rhs.omega, rhs.a, rhs.tau)):
            dev = abs(fa - fb) / max(1.0, abs(fa), abs(fb))
            worst = max(worst, dev)
            ok &= dev <= 1e-12
        gi = compose(g1, inverse(g1))
        ok &= abs(gi.x) < 1e-12 and abs(gi.omega) < 1e-12
        ok &= abs(gi.a - 1.0) < 1e-12 and abs(gi.tau) < 1e-12
    print(f"    worst associativity defect over 1000 triples: {worst:.3e}")
    return bool(ok)


def _check_representation(args) -> bool:
    f = gaussian_signal(512, 1.0 / 16.0, -16.0)
    g1 = GroupElement(0.75, 1.5, 1.25, 0.3)
    g2 = GroupElement(-0.5, -0.75, 0.8, -0.1)
    e0 = f.energy()
    lhs = apply_pi(g1, apply_pi(g2, f))
    rhs = apply_pi(compose(g1, g2), f)
    num = float(np.sqrt(np.sum(np.abs(lhs.samples - rhs.samples) ** 2) * f.dt))
    drift = abs(apply_pi(g1, f).energy() - e0)
    print(f"    composition defect: {num:.3e}, energy drift: {drift:.3e}")
    return bool(drift <= 1e-6 * e0 and num <= 1e-6 * np.sqrt(e0))


def _check_tails(args) -> bool:
    p = _knob_alpha(args, 0.5)
    w = parse_window(args.window or "bspline:1")
    xi = 1000.0 if args.xi is None else args.xi
    parts = eval_m_parts(xi, w, p, tol=1e-9)
    t = tail_bounds(xi, w, p)
    print(f"    I1 {parts.i1:.3e} <= {t.i1_bound:.3e}, "
          f"I2 {parts.i2:.3e} <= {t.i2_bound:.3e}, "
          f"I3 {parts.i3:.3e} <= {t.i3_bound:.3e}")
    print(f"    |I4 - limit| {abs(parts.i4 - w.l2_norm_sq):.3e} "
          f"<= {t.i4_deviation:.3e}")
    ok = (parts.i1 <= t.i1_bound and parts.i2 <= t.i2_bound
          and parts.i3 <= t.i3_bound)
    return bool(ok and abs(parts.i4 - w.l2_norm_sq) <= t.i4_deviation)


_CHECKS = (
    ("2.2", "mirror-symmetry",
     "negating the argument of the symbol matches conjugating the window",
     _check_mirror),
    ("2.3", "positivity",
     "the symbol is strictly positive and the reparametrized frequency is onto",
     _check_positivity),
    ("2.4", "continuity",
     "the symbol is continuous and its integrand sits under the decay envelope",
     _check_continuity),
    ("2.5", "derivative",
     "the closed-form slope matches central differences and factors as -beta*h",
     _check_derivative),
    ("2.6", "critical-geometry",
     "branch monotonicity and the interior minimum match direct evaluation",
     _check_geometry),
    ("2.7", "substitution",
     "monotone-branch substitution preserves the interval integrals",
     _check_substitution_eq),
    ("2.8", "uniform-limit",
     "the substitution weight tends to 1 uniformly on compact z ranges",
     _check_uniform_limit),
    (None, "group-law",
     "the composition law is associative with the stated identity and inverses",
     _check_group_law),
    (None, "representation",
     "the sampled action preserves energy and respects composition",
     _check_representation),
    (None, "tail-envelopes",
     "the certified tail bounds dominate the computed interval contributions",
     _check_tails),
)


def _cmd_lemma_check(args) -> int:
    table = {}
    for lemma, name, desc, fn in _CHECKS:
        table[name] = (lemma, name, desc, fn)
        if lemma:
            table[lemma] = (lemma, name, desc, fn)
    if args.list:
        print("numeric tags are stable internal labels; they need not match "
              "the numbering of any written account of these facts")
        for lemma, name, desc, _ in _CHECKS:
            print(f"{lemma or '-':>4}  {name}: {desc}")
        return EXIT_OK
    selected = list(_CHECKS)
    if args.which:
        if args.which not in table:
            raise UsageError(f"unknown check {args.which!r}; try --list")
        selected = [table[args.which]]
    failures = 0
    for lemma, name, desc, fn in selected:
        tag = f"{lemma} {name}" if lemma else name
        print(f"check {tag}: {desc}")
        ok = fn(args)
        print(f"[{'PASS' if ok else 'FAIL'}] {tag}")
        failures += 0 if ok else 1
    if failures:
        print(f"{failures} check(s) failed", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser assembly


def build_parser() -> _Parser:
    parser = _Parser(prog="alphamod", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--window", required=True,
                        help="window spec, e.g. gaussian, bspline:1, bump:omega=2")
        sp.add_argument("--alpha", type=float, required=True,
                        help="modulation exponent in [0, 1)")
        sp.add_argument("--threads", type=int, default=1,
                        help="worker threads (results are thread-count invariant)")

    sp = sub.add_parser("symbol", help="scan the admissibility symbol")
    add_common(sp)
    sp.add_argument("--xi", help="uniform grid START:STOP:STEP")
    sp.add_argument("--xi-log", help="log grid LO:HI:COUNT")
    sp.add_argument("--xi-list", help="explicit comma-separated xi values")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--parts", action="store_true",
                    help="also record the four-interval split where defined")
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.add_argument("--no-plot", action="store_true")
    sp.set_defaults(func=_cmd_symbol)

    sp = sub.add_parser("certify", help="certify frame bounds")
    add_common(sp)
    sp.add_argument("--xi-max", type=float, default=1000.0)
    sp.add_argument("--tol", type=float, default=1e-2)
    sp.add_argument("--out", required=True, help="certificate JSON path")
    sp.add_argument("--no-plot", action="store_true")
    sp.set_defaults(func=_cmd_certify)

    def add_signal(sp):
        sp.add_argument("--signal", required=True,
                        help="signal spec: gaussian[:...], chirp[:...], "
                             "noise:lo=L,hi=H,seed=S, csv:PATH")
        sp.add_argument("--n", type=int, default=1024)
        sp.add_argument("--dt", type=float, default=1.0 / 32.0)
        sp.add_argument("--t0", type=float, default=-16.0)

    sp = sub.add_parser("decompose", help="analyze a signal on a modulation grid")
    add_common(sp)
    add_signal(sp)
    sp.add_argument("--omega-max", type=float, default=8.0)
    sp.add_argument("--omega-step", type=float, default=0.25)
    sp.add_argument("--progressive", action="store_true",
                    help="spacing grows like (1+|omega|)^alpha")
    sp.add_argument("--out", required=True, help="coefficient CSV path")
    sp.add_argument("--no-plot", action="store_true")
    sp.set_defaults(func=_cmd_decompose)

    sp = sub.add_parser("transform",
                        help="apply the frame operator (or its inverse) to a signal")
    add_common(sp)
    add_signal(sp)
    sp.add_argument("--invert", action="store_true",
                    help="divide by the symbol instead of multiplying")
    sp.add_argument("--roundtrip", action="store_true",
                    help="apply then invert, reporting the relative error")
    sp.add_argument("--certificate",
                    help="certificate JSON (required to invert)")
    sp.add_argument("--tol", type=float, default=1e-9,
                    help="per-bin symbol quadrature tolerance")
    sp.add_argument("--out", required=True, help="output signal CSV path")
    sp.add_argument("--no-plot", action="store_true")
    sp.set_defaults(func=_cmd_transform)

    sp = sub.add_parser("reconstruct",
                        help="rebuild a signal from saved coefficients")
    add_common(sp)
    sp.add_argument("--coefficients", required=True,
                    help="coefficient CSV written by decompose")
    sp.add_argument("--certificate", required=True, help="certificate JSON")
    sp.add_argument("--reference",
                    help="signal CSV to compare the reconstruction against")
    sp.add_argument("--tol", type=float, default=1e-9,
                    help="per-bin symbol quadrature tolerance")
    sp.add_argument("--out", required=True, help="output signal CSV path")
    sp.add_argument("--no-plot", action="store_true")
    sp.set_defaults(func=_cmd_reconstruct)

    sp = sub.add_parser("report", help="hypothesis + scan + certificate bundle")
    add_common(sp)
    sp.add_argument("--xi-max", type=float, default=1000.0)
    sp.add_argument("--tol", type=float, default=1e-2)
    sp.add_argument("--outdir", required=True)
    sp.add_argument("--no-plot", action="store_true")
    sp.set_defaults(func=_cmd_report)

    sp = sub.add_parser("lemma-check",
                        help="run the numerical checks behind the engine")
    sp.add_argument("--list", action="store_true", help="enumerate without running")
    sp.add_argument("--which", help="run one check by its 2.x tag or its name")
    sp.add_argument("--alpha", type=float, help="override the default exponent")
    sp.add_argument("--xi", type=float, help="override the default argument")
    sp.add_argument("--window", help="override the default window spec")
    sp.set_defaults(func=_cmd_lemma_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, FileNotFoundError, ValueError) as exc:
        print(f"alphamod: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as exc:
        print(f"alphamod: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
