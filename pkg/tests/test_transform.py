import math

import numpy as np
import pytest

from alphamod.certify import certify
from alphamod.group import GroupElement, SampledSignal, apply_pi
from alphamod.transform import (
    CoefficientGrid,
    analyze,
    apply_frame_operator,
    bandlimited_noise,
    chirp_signal,
    coefficient_energy,
    frame_multiplier,
    gaussian_signal,
    grid_frame_operator,
    invert_frame_operator,
    load_coefficients,
    progressive_omega_grid,
    reproducing_check,
    save_coefficients,
    second_transform,
    synthesize,
    uniform_omega_grid,
)
from alphamod.windows import AlphaParams, make_gaussian

N, DT, T0 = 1024, 1.0 / 32.0, -16.0


def rel_l2(a, b):
    return float(np.linalg.norm(a.samples - b.samples) / np.linalg.norm(b.samples))


@pytest.fixture(scope="module")
def chirp():
    return chirp_signal(N, DT, T0, rate=0.5)


@pytest.fixture(scope="module")
def noise():
    return bandlimited_noise(N, DT, T0, band=(-3.0, 3.0), seed=1)


# ---------------------------------------------------------------------------
# the analysis map


def test_window_autocorrelation_at_the_origin(b1, ahalf):
    # V applied to the window itself, read at (x, omega) = (0, 0), is the
    # squared norm; only the Riemann sum over the time grid limits accuracy
    dt, t0, n = 1.0 / 128.0, -2.0, 512
    t = t0 + dt * np.arange(n)
    f = SampledSignal(b1.eval_time(t).astype(complex), t0, dt)
    grid = analyze(f, b1, ahalf, uniform_omega_grid(2.0, 0.5))
    ix = int(round((0.0 - t0) / dt))
    iw = int(np.flatnonzero(grid.omega == 0.0)[0])
    assert abs(grid.values[ix, iw] - b1.l2_norm_sq) < 3e-4


def test_analysis_is_linear_and_phase_equivariant(b1, ahalf, chirp, noise):
    og = uniform_omega_grid(4.0, 0.5)
    va = analyze(chirp, b1, ahalf, og)
    vb = analyze(noise, b1, ahalf, og)
    mix = SampledSignal(2.0 * chirp.samples - 1j * noise.samples, T0, DT)
    vm = analyze(mix, b1, ahalf, og)
    assert np.max(np.abs(vm.values - 2.0 * va.values + 1j * vb.values)) < 1e-10
    rot = SampledSignal(np.exp(0.7j) * chirp.samples, T0, DT)
    vr = analyze(rot, b1, ahalf, og)
    assert np.max(np.abs(vr.values - np.exp(0.7j) * va.values)) < 1e-12


def test_alpha_zero_matches_direct_inner_products(gauss, noise):
    # at alpha = 0 the section is (x, omega, 1, 0): plain time-frequency
    # shifts, so each coefficient is an explicit inner product
    p0 = AlphaParams(alpha=0.0)
    og = uniform_omega_grid(4.0, 1.0)
    grid = analyze(noise, gauss, p0, og)
    t = T0 + DT * np.arange(N)
    psi = SampledSignal(gauss.eval_time(t).astype(complex), T0, DT)
    rng = np.random.default_rng(5)
    for _ in range(10):
        ix = int(rng.integers(0, N))
        iw = int(rng.integers(0, og.size))
        atom = apply_pi(GroupElement(x=float(t[ix]), omega=float(og[iw])), psi)
        want = DT * np.vdot(atom.samples, noise.samples)
        assert abs(grid.values[ix, iw] - want) < 1e-8


def test_integer_shift_covariance(b1, ahalf, noise):
    og = uniform_omega_grid(3.0, 0.5)
    base = analyze(noise, b1, ahalf, og)
    k = 37
    shifted = SampledSignal(np.roll(noise.samples, k), T0, DT)
    moved = analyze(shifted, b1, ahalf, og)
    # the analysis correlation is circular, so a grid shift of the signal
    # shifts the coefficient columns exactly
    assert np.max(np.abs(moved.values - np.roll(base.values, k, axis=0))) < 1e-10


def test_coefficient_grid_validation():
    with pytest.raises(ValueError):
        CoefficientGrid(np.ones((4, 3)), 0.0, 0.1, np.array([0.0, 1.0]), 0.5, "w")
    with pytest.raises(ValueError):
        CoefficientGrid(np.ones((4, 2)), 0.0, 0.1, np.array([1.0, 0.0]), 0.5, "w")
    with pytest.raises(ValueError):
        CoefficientGrid(np.full((4, 2), np.nan), 0.0, 0.1,
                        np.array([0.0, 1.0]), 0.5, "w")


# ---------------------------------------------------------------------------
# frame operator: exact multiplier route


def test_frame_operator_roundtrip(b1, ahalf, cert_b1_half, chirp):
    back = invert_frame_operator(apply_frame_operator(chirp, b1, ahalf),
                                 b1, ahalf, certificate=cert_b1_half)
    assert rel_l2(back, chirp) < 1e-9
    imp = np.zeros(N, dtype=complex)
    imp[N // 2] = 1.0
    f = SampledSignal(imp, T0, DT)
    back = invert_frame_operator(apply_frame_operator(f, b1, ahalf),
                                 b1, ahalf, certificate=cert_b1_half)
    assert rel_l2(back, f) < 1e-9
    # and in the other order
    back = apply_frame_operator(
        invert_frame_operator(f, b1, ahalf, certificate=cert_b1_half), b1, ahalf)
    assert rel_l2(back, f) < 1e-9


def test_frame_operator_is_self_adjoint_and_positive(b1, ahalf, chirp, noise):
    sf = apply_frame_operator(chirp, b1, ahalf)
    sg = apply_frame_operator(noise, b1, ahalf)
    lhs = DT * np.vdot(noise.samples, sf.samples)
    rhs = DT * np.vdot(sg.samples, chirp.samples)
    assert abs(lhs - rhs) < 1e-10 * max(abs(lhs), 1.0)
    quad = DT * np.vdot(chirp.samples, sf.samples)
    assert abs(quad.imag) < 1e-10 * abs(quad)
    assert quad.real > 0.0


def test_quadratic_form_respects_certified_bounds(b1, ahalf, cert_b1_half, noise):
    sf = apply_frame_operator(noise, b1, ahalf)
    quad = float(np.real(DT * np.vdot(noise.samples, sf.samples)))
    nf2 = noise.energy()
    assert cert_b1_half.A_est * nf2 * (1.0 - 1e-9) <= quad
    assert quad <= cert_b1_half.B_est * nf2 * (1.0 + 1e-9)


def test_alpha_zero_operator_is_scalar(b1, chirp):
    p0 = AlphaParams(alpha=0.0)
    sf = apply_frame_operator(chirp, b1, p0)
    assert np.max(np.abs(sf.samples - b1.l2_norm_sq * chirp.samples)) < 1e-12
    cert = certify(b1, p0, xi_max=10.0, tol=1e-2)
    back = invert_frame_operator(chirp, b1, p0, certificate=cert)
    assert np.max(np.abs(back.samples - chirp.samples / b1.l2_norm_sq)) < 1e-12


def test_grid_route_converges_to_the_multiplier(b1, ahalf, chirp):
    # synthesize(analyze(f)) is the quadrature of the frame operator; on a
    # wide fine grid it must land within one percent of the exact route
    sf = apply_frame_operator(chirp, b1, ahalf)
    sg = grid_frame_operator(chirp, b1, ahalf, uniform_omega_grid(12.0, 0.125))
    assert rel_l2(sg, sf) < 1e-2
    coarse = grid_frame_operator(chirp, b1, ahalf, uniform_omega_grid(12.0, 0.5))
    assert rel_l2(sg, sf) < rel_l2(coarse, sf)


def test_discrete_multiplier_tracks_the_symbol(b1, ahalf):
    from alphamod.symbol import eval_m

    og = uniform_omega_grid(12.0, 0.125)
    nus = np.array([0.0, 0.5, 1.5, 3.0])
    got = frame_multiplier(nus, b1, ahalf, og)
    want = np.array([eval_m(float(nu), b1, ahalf, tol=1e-9)[0] for nu in nus])
    assert np.max(np.abs(got / want - 1.0)) < 1e-2


def test_inversion_refuses_without_a_valid_certificate(b1, gauss, ahalf,
                                                       cert_b1_half, chirp):
    with pytest.raises(ValueError):
        invert_frame_operator(chirp, b1, ahalf, certificate=None)
    failed = certify(b1, AlphaParams(alpha=0.9), xi_max=50.0, tol=1e-2)
    with pytest.raises(ValueError):
        invert_frame_operator(chirp, b1, AlphaParams(alpha=0.9), certificate=failed)
    with pytest.raises(ValueError):
        invert_frame_operator(chirp, b1, AlphaParams(alpha=0.3),
                              certificate=cert_b1_half)
    with pytest.raises(ValueError):
        invert_frame_operator(chirp, gauss, ahalf, certificate=cert_b1_half)


def test_bin_condition_number_within_certificate(b1, ahalf, cert_b1_half):
    from alphamod.symbol import eval_m

    nu = np.fft.fftfreq(N, d=DT)
    sample = np.unique(np.abs(nu))[::16]
    vals = np.array([eval_m(float(v), b1, ahalf, tol=1e-9)[0] for v in sample])
    ratio = vals.max() / vals.min()
    assert ratio <= (cert_b1_half.B_est / cert_b1_half.A_est) * (1.0 + 1e-9)


# ---------------------------------------------------------------------------
# synthesis, energy, reconstruction formula


def test_energy_stays_inside_the_frame_band(b1, ahalf, cert_b1_half):
    og = uniform_omega_grid(8.0, 0.125)
    for seed in range(3):
        f = bandlimited_noise(N, DT, T0, band=(-4.0, 4.0), seed=seed)
        ratio = coefficient_energy(analyze(f, b1, ahalf, og)) / f.energy()
        assert 0.95 * cert_b1_half.A_est <= ratio <= 1.05 * cert_b1_half.B_est


def test_second_transform_is_analysis_after_inversion(b1, ahalf, cert_b1_half,
                                                      chirp):
    og = uniform_omega_grid(4.0, 0.5)
    direct = second_transform(chirp, b1, ahalf, og, certificate=cert_b1_half)
    manual = analyze(invert_frame_operator(chirp, b1, ahalf,
                                           certificate=cert_b1_half),
                     b1, ahalf, og)
    assert np.array_equal(direct.values, manual.values)


def test_reproducing_formula_converges(b1, ahalf, cert_b1_half):
    f = gaussian_signal(N, DT, T0, center=0.0, width=1.0, freq=0.5)
    g = gaussian_signal(N, DT, T0, center=1.0, width=0.7, freq=-0.25)
    errs = []
    for step in (0.5, 0.25, 0.125):
        chk = reproducing_check(f, g, b1, ahalf, uniform_omega_grid(8.0, step),
                                certificate=cert_b1_half)
        errs.append(chk.relerr)
        # the two operator orderings are equal up to rounding
        assert abs(chk.rhs - chk.rhs_alt) <= 1e-10 * max(abs(chk.rhs), 1e-30)
    assert errs[0] > errs[1] > errs[2]
    assert errs[-1] < 1e-2


def test_reproducing_check_on_a_near_orthogonal_pair(b1, ahalf, cert_b1_half):
    f = gaussian_signal(N, DT, T0, center=-8.0, width=0.5, freq=-2.0)
    g = gaussian_signal(N, DT, T0, center=8.0, width=0.5, freq=3.0)
    chk = reproducing_check(f, g, b1, ahalf, uniform_omega_grid(8.0, 0.25),
                            certificate=cert_b1_half)
    scale = math.sqrt(f.energy() * g.energy())
    assert abs(chk.lhs) < 1e-10 * scale
    assert abs(chk.rhs) < 1e-2 * scale


def test_reproducing_check_requires_matching_grids(b1, ahalf, cert_b1_half):
    f = gaussian_signal(N, DT, T0)
    g = gaussian_signal(N, 2.0 * DT, T0)
    with pytest.raises(ValueError):
        reproducing_check(f, g, b1, ahalf, uniform_omega_grid(2.0, 0.5),
                          certificate=cert_b1_half)


# ---------------------------------------------------------------------------
# grids, serialization, generators


def test_omega_grids_are_symmetric():
    og = uniform_omega_grid(8.0, 0.25)
    assert np.array_equal(og, -og[::-1])
    assert og[0] == -8.0 and og[-1] == 8.0
    pg = progressive_omega_grid(8.0, 0.25, AlphaParams(alpha=0.5))
    assert np.array_equal(pg, -pg[::-1])
    assert pg[-1] >= 8.0
    # spacing grows like (1 + omega)^alpha
    d = np.diff(pg)
    k = pg.size // 2
    assert d[-1] > d[k] * 1.8
    with pytest.raises(ValueError):
        uniform_omega_grid(-1.0, 0.5)
    with pytest.raises(ValueError):
        progressive_omega_grid(8.0, 0.0, AlphaParams(alpha=0.5))


def test_coefficient_csv_roundtrip_is_exact(tmp_path, b1, ahalf, noise):
    grid = analyze(noise, b1, ahalf, uniform_omega_grid(2.0, 0.5))
    path = tmp_path / "coef.csv"
    save_coefficients(grid, path)
    header = path.read_text(encoding="utf-8").splitlines()[0]
    assert header == "x,omega,re,im"
    back = load_coefficients(path)
    assert np.array_equal(back.values, grid.values)
    assert np.array_equal(back.omega, grid.omega)
    assert back.t0 == grid.t0 and back.dt == grid.dt
    assert back.alpha == grid.alpha and back.window_id == grid.window_id


def test_coefficient_loader_rejects_mismatched_sidecar(tmp_path, b1, ahalf, noise):
    grid = analyze(noise, b1, ahalf, uniform_omega_grid(2.0, 1.0))
    path = tmp_path / "coef.csv"
    save_coefficients(grid, path)
    sidecar = tmp_path / "coef.csv.json"
    payload = sidecar.read_text(encoding="utf-8").replace('"n_x": 1024', '"n_x": 7')
    sidecar.write_text(payload, encoding="utf-8")
    with pytest.raises(ValueError):
        load_coefficients(path)


def test_synthesis_of_loaded_coefficients_matches(tmp_path, b1, ahalf,
                                                  cert_b1_half, noise):
    og = uniform_omega_grid(6.0, 0.25)
    grid = analyze(noise, b1, ahalf, og)
    path = tmp_path / "coef.csv"
    save_coefficients(grid, path)
    rec_direct = synthesize(grid, b1, ahalf)
    rec_loaded = synthesize(load_coefficients(path), b1, ahalf)
    assert np.array_equal(rec_direct.samples, rec_loaded.samples)


def test_signal_generators_are_deterministic_and_banded():
    a = bandlimited_noise(N, DT, T0, band=(-2.0, 2.0), seed=9)
    b = bandlimited_noise(N, DT, T0, band=(-2.0, 2.0), seed=9)
    assert np.array_equal(a.samples, b.samples)
    nu = np.fft.fftfreq(N, d=DT)
    spec = np.fft.fft(a.samples)
    # the fft round trip leaves roundoff outside the band, nothing more
    assert np.max(np.abs(spec[np.abs(nu) > 2.0])) < 1e-12 * np.max(np.abs(spec))
    g = gaussian_signal(N, DT, T0, center=1.0, width=0.5)
    assert abs(g.energy() - 1.0) < 1e-12
    c = chirp_signal(N, DT, T0, rate=0.5)
    assert c.energy() > 0.0
