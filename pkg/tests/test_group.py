import math

import numpy as np
import pytest

from alphamod.group import (
    IDENTITY,
    GridResolutionError,
    GroupElement,
    SampledSignal,
    apply_pi,
    compose,
    inverse,
    load_signal,
    save_signal,
)


def compose_reference(g, h):
    """The composition law written out directly, as an independent check."""
    return (
        g.x + g.a * h.x,
        g.omega + h.omega / g.a,
        g.a * h.a,
        g.tau + h.tau + g.omega * g.a * h.x,
    )


def random_elements(rng, k):
    return [
        GroupElement(
            x=float(rng.uniform(-3.0, 3.0)),
            omega=float(rng.uniform(-3.0, 3.0)),
            a=float(np.exp(rng.uniform(-1.5, 1.5))),
            tau=float(rng.uniform(-1.0, 1.0)),
        )
        for _ in range(k)
    ]


def elements_close(g, h, tol=1e-12):
    return (
        abs(g.x - h.x) <= tol
        and abs(g.omega - h.omega) <= tol
        and abs(g.a - h.a) <= tol
        and abs(g.tau - h.tau) <= tol
    )


def test_composition_matches_reference():
    rng = np.random.default_rng(11)
    for g in random_elements(rng, 10):
        for h in random_elements(rng, 10):
            got = compose(g, h)
            want = compose_reference(g, h)
            assert abs(got.x - want[0]) < 1e-12
            assert abs(got.omega - want[1]) < 1e-12
            assert abs(got.a - want[2]) < 1e-12
            assert abs(got.tau - want[3]) < 1e-12


def test_identity_and_inverse():
    rng = np.random.default_rng(5)
    for g in random_elements(rng, 50):
        assert elements_close(compose(IDENTITY, g), g)
        assert elements_close(compose(g, IDENTITY), g)
        gi = inverse(g)
        # closed form: (-x/a, -omega a, 1/a, -tau + x omega)
        assert abs(gi.x + g.x / g.a) < 1e-12
        assert abs(gi.omega + g.omega * g.a) < 1e-12
        assert abs(gi.a - 1.0 / g.a) < 1e-12
        assert abs(gi.tau + g.tau - g.x * g.omega) < 1e-12
        assert elements_close(compose(g, gi), IDENTITY, 1e-11)
        assert elements_close(compose(gi, g), IDENTITY, 1e-11)


def test_associativity():
    rng = np.random.default_rng(23)
    for _ in range(100):
        g, h, k = random_elements(rng, 3)
        lhs = compose(compose(g, h), k)
        rhs = compose(g, compose(h, k))
        assert elements_close(lhs, rhs, 1e-10)


def test_element_validation():
    with pytest.raises(ValueError):
        GroupElement(a=0.0)
    with pytest.raises(ValueError):
        GroupElement(a=-2.0)
    with pytest.raises(ValueError):
        GroupElement(a=math.inf)


# ---------------------------------------------------------------------------
# the unitary action on sampled signals


def narrow_band_signal(n=256, dt=1.0 / 16.0, t0=-8.0):
    t = t0 + dt * np.arange(n)
    env = np.exp(-np.pi * t * t)
    return SampledSignal(env * np.exp(2j * np.pi * 0.5 * t), t0, dt)


def test_pure_phase_element():
    f = narrow_band_signal()
    g = GroupElement(tau=0.3)
    out = apply_pi(g, f)
    assert np.allclose(out.samples, np.exp(2j * np.pi * 0.3) * f.samples,
                       rtol=0.0, atol=1e-15)


def test_integer_shift_is_a_roll():
    f = narrow_band_signal()
    k = 12
    out = apply_pi(GroupElement(x=k * f.dt), f)
    assert np.array_equal(out.samples, np.roll(f.samples, k))


def test_action_is_unitary():
    f = narrow_band_signal()
    rng = np.random.default_rng(3)
    for _ in range(10):
        g = GroupElement(
            x=float(rng.uniform(-2.0, 2.0)),
            omega=float(rng.uniform(-2.0, 2.0)),
            a=float(np.exp(rng.uniform(-0.35, 0.35))),
            tau=float(rng.uniform(-1.0, 1.0)),
        )
        out = apply_pi(g, f)
        assert abs(out.energy() - f.energy()) < 1e-9 * f.energy()


def test_action_respects_composition():
    # pi(g) pi(h) = pi(g h); the scales stay near 1 so the dilated signal
    # remains well inside the usable band of the grid
    f = narrow_band_signal()
    rng = np.random.default_rng(17)
    for _ in range(8):
        g, h = [
            GroupElement(
                x=float(rng.uniform(-1.0, 1.0)),
                omega=float(rng.uniform(-1.0, 1.0)),
                a=float(np.exp(rng.uniform(-0.2, 0.2))),
                tau=float(rng.uniform(-0.5, 0.5)),
            )
            for _ in range(2)
        ]
        two_steps = apply_pi(g, apply_pi(h, f))
        one_step = apply_pi(compose(g, h), f)
        num = np.linalg.norm(two_steps.samples - one_step.samples)
        den = np.linalg.norm(one_step.samples)
        assert num < 1e-8 * den


def test_out_of_band_content_is_refused():
    f = narrow_band_signal()
    with pytest.raises(GridResolutionError):
        apply_pi(GroupElement(omega=100.0), f)
    with pytest.raises(GridResolutionError):
        apply_pi(GroupElement(a=1e-3), f)


# ---------------------------------------------------------------------------
# the signal container and its file format


def test_signal_validation():
    with pytest.raises(ValueError):
        SampledSignal(np.array([]), 0.0, 0.1)
    with pytest.raises(ValueError):
        SampledSignal(np.array([1.0, np.nan]), 0.0, 0.1)
    with pytest.raises(ValueError):
        SampledSignal(np.array([1.0, 2.0]), 0.0, -0.1)
    with pytest.raises(ValueError):
        SampledSignal(np.ones((2, 2)), 0.0, 0.1)


def test_energy_matches_direct_sum():
    f = narrow_band_signal()
    assert abs(f.energy() - f.dt * np.sum(np.abs(f.samples) ** 2)) < 1e-15


def test_signal_csv_roundtrip_is_exact(tmp_path):
    f = narrow_band_signal(n=64)
    path = tmp_path / "sig.csv"
    save_signal(f, path)
    back = load_signal(path)
    assert np.array_equal(back.samples, f.samples)
    assert back.t0 == f.t0
    assert back.dt == f.dt
    header = path.read_text(encoding="utf-8").splitlines()[0]
    assert header == "t,re,im"


def test_load_signal_rejects_bad_files(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,re\n0.0,1.0\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_signal(path)
    path.write_text("t,re,im\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_signal(path)
    # non-uniform time column
    path.write_text("t,re,im\n0.0,1.0,0.0\n0.1,1.0,0.0\n0.35,1.0,0.0\n",
                    encoding="utf-8")
    with pytest.raises(ValueError):
        load_signal(path)
