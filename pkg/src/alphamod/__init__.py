"""Numerics for frequency-adaptive modulation frames.

The package evaluates the admissibility symbol of a window under
modulation-slaved dilation, certifies two-sided frame bounds from scans
plus closed-form tail envelopes, and applies the resulting discrete
transform to sampled signals.
"""

from .certify import (
    Certificate,
    TailReport,
    certify,
    load_certificate,
    save_certificate,
    tail_bounds,
)
from .group import (
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
from .quadrature import QuadratureError, adaptive_quad
from .symbol import (
    SymbolGrid,
    SymbolParts,
    XiGeometry,
    eval_h,
    eval_m,
    eval_m_parts,
    eval_r,
    eval_r_prime,
    geometry,
    invert_r_branch,
    right_branch_uniform_deviation,
    substituted_integral,
    sweep_symbol,
    symbol_grid_from_csv,
    symbol_grid_to_csv,
)
from .transform import (
    CoefficientGrid,
    ReproducingCheck,
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
from .windows import (
    AlphaParams,
    HypothesisReport,
    Window,
    check_hypothesis,
    conjugate_window,
    load_window,
    make_bandlimited_bump,
    make_bspline,
    make_chirped_gaussian,
    make_gaussian,
)

__version__ = "0.1.0"
