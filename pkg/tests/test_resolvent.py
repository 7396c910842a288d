import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coshspec.errors import DomainError, SingularOmega, TailTooFat, ValidationError, ZeroDisplacement
from coshspec.resolvent import (
    LARGE_T,
    SMALL_T,
    ResolventEval,
    diagonal,
    diagonal_asymptotics_check,
    fourier_roundtrip_residual,
    kernel,
    kernel_bound_check,
    kernel_ft_form,
    three_lines_check,
)
from coshspec.spectral import OmegaPoint

mp.mp.dps = 40


def mp_kernel(w, b, x):
    w, x = mp.mpc(w), mp.mpf(abs(x))
    if x == 0:
        return complex(w / (2 * mp.pi * b * mp.sin(w)))
    return complex(mp.sinh(w * x / b) / (2 * b * mp.sin(w) * mp.sinh(mp.pi * x / b)))


omegas = st.builds(complex, st.floats(0.0, math.pi - 1e-3), st.floats(-12, 12))


def test_kernel_diagonal_value():
    assert abs(kernel(math.pi / 2, 1.0, 0.0) - 0.25) < 1e-15
    assert abs(diagonal(math.pi / 2, 1.0) - 0.25) < 1e-15


def test_kernel_at_one():
    # 0.5 sinh(pi/2) / sinh(pi), 40-digit mpmath value
    assert abs(kernel(math.pi / 2, 1.0, 1.0) - 0.0996342038345966701) < 1e-15


def test_diagonal_examples():
    assert abs(diagonal(0.0, 1.0) - 1 / (2 * math.pi)) < 1e-16
    w = math.pi / 2 + 1j
    assert abs(diagonal(w, 1.0) - w / (2 * math.pi * cmath.sin(w))) <= 1e-14
    assert abs(diagonal(w, 1.0) - complex(0.162013568415971349, 0.103141041045435247)) < 1e-15


@pytest.mark.parametrize(
    "w,b,x",
    [(2 + 0.5j, 0.7, -0.3), (0.1 + 3j, 1.0, 5.0), (1 + 1j, 1.0, 20.0), (2.5 - 2j, 0.5, 1e-5),
     (3.0, 2.0, 40.0), (0.0 + 8j, 1.0, 3.0), (0.5, 1.0, 1e-9)],
)
def test_kernel_matches_mpmath(w, b, x):
    ref = mp_kernel(w, b, x)
    assert abs(kernel(w, b, x) - ref) <= 1e-13 * abs(ref)


@pytest.mark.parametrize("w", [0.3, 1 + 1j, 2.9 - 4j, 6j])
@pytest.mark.parametrize("edge", [SMALL_T, LARGE_T])
def test_branch_switch_consistency(w, edge):
    b = 1.3
    for x in (edge * b * (1 - 1e-9), edge * b, edge * b * (1 + 1e-9)):
        ref = mp_kernel(w, b, x)
        assert abs(kernel(w, b, x) - ref) <= 1e-13 * abs(ref)


@given(omegas, st.floats(-60, 60), st.floats(0.2, 3))
def test_kernel_even(w, x, b):
    assert kernel(w, b, x) == kernel(w, b, -x)


@given(st.floats(1e-3, math.pi - 1e-3), st.floats(-30, 30))
def test_kernel_positive_for_real_omega(w, x):
    g = kernel(w, 1.0, x)
    assert g.imag == 0 and g.real > 0


@settings(max_examples=500)
@given(omegas, st.floats(-50, 50), st.sampled_from([0.5, 1.0, 2.0]))
def test_kernel_bounded_by_diagonal(w, x, b):
    assert abs(kernel(w, b, x)) <= abs(diagonal(w, b)) * (1 + 1e-12)


def test_kernel_singular():
    with pytest.raises(SingularOmega):
        kernel(math.pi, 1.0, 1.0)
    with pytest.raises(SingularOmega):
        diagonal(2 * math.pi, 1.0)


@pytest.mark.parametrize("x", [0.0, 1e-6, 0.3, 5.0, 12.0, 80.0])
def test_kernel_threshold_limit(x):
    # lambda = -2: sinh(w t)/sin(w) -> t, so G(x) = (x/b) / (2 b sinh(pi x/b))
    b = 0.8
    ref = 1 / (2 * math.pi * b) if x == 0 else complex(mp.mpf(x) / b / (2 * b * mp.sinh(mp.pi * x / b)))
    assert abs(kernel(0.0, b, x) - ref) <= 1e-13 * abs(ref)
    for w in (1e-7, 1e-7j, 1e-4 + 1e-4j):
        assert abs(kernel(w, b, x) - mp_kernel(w, b, x)) <= 1e-13 * abs(ref)


def test_kernel_small_omega_switch():
    for w in (0.5 * (1 - 1e-12), 0.5j * (1 + 1e-12), 0.3 + 0.4j):
        for x in (0.2, 3.0, 15.0):
            ref = mp_kernel(w, 1.0, x)
            assert abs(kernel(w, 1.0, x) - ref) <= 1e-13 * abs(ref)


@pytest.mark.parametrize("w,b,x", [(math.pi / 2, 1.0, 1.0), (2 + 0.5j, 0.7, -0.3), (0.1 + 3j, 2.0, 7.0)])
def test_ft_form_agrees(w, b, x):
    ref = kernel(w, b, x)
    assert abs(kernel_ft_form(w, b, x) - ref) <= 1e-10 * abs(ref)
    assert abs(kernel_ft_form(w, b, x) - kernel_ft_form(w, b, -x)) <= 1e-10 * abs(ref)


def test_ft_form_rejects_zero():
    with pytest.raises(ZeroDisplacement):
        kernel_ft_form(1.0, 1.0, 1e-6)


def test_bound_check_examples():
    xs = np.linspace(-10, 10, 4001)
    rep = kernel_bound_check(math.pi / 2, 1.0, xs)
    assert rep.passed and rep.max_ratio == pytest.approx(1.0, abs=1e-15) and rep.x_at_max == 0.0
    assert kernel_bound_check(0.1 + 3j, 1.0, xs).passed
    assert kernel_bound_check(1.0, 1.0, [0.0]).max_ratio == 1.0
    with pytest.raises(ValidationError):
        kernel_bound_check(4.0, 1.0, xs)


@pytest.mark.parametrize("w,k", [(math.pi / 2, 0.0), (1 + 1j, 0.5), (2.5 - 1j, 1.0), (0.2 + 5j, 0.25)])
def test_fourier_roundtrip(w, k):
    assert fourier_roundtrip_residual(w, 1.0, k) <= 1e-8


def test_fourier_target_at_zero():
    # closed-form target at k = 0 and omega = pi/2 is 1/2
    assert abs(1.0 / (2 * math.cosh(0) + 2 * math.cos(math.pi / 2)) - 0.5) < 1e-16


def test_fourier_tail_too_fat():
    with pytest.raises(TailTooFat):
        fourier_roundtrip_residual(math.pi - 1e-6, 1.0, 0.0)


@pytest.mark.parametrize("b", [1.0, 2.0])
def test_diagonal_asymptotics(b):
    rep = diagonal_asymptotics_check(b)
    assert 0.98 <= rep.near_two_ratio <= 1.02
    assert 0.95 <= rep.large_ratio <= 1.05
    assert rep.passed


def test_asymptotics_independent_of_b():
    a, c = diagonal_asymptotics_check(1.0), diagonal_asymptotics_check(2.0)
    assert a.near_two_ratio == pytest.approx(c.near_two_ratio, rel=1e-12)
    assert a.large_ratio == pytest.approx(c.large_ratio, rel=1e-12)


def test_three_lines_examples():
    for x in (-3.0, 0.0, 2.0, 50.0, 800.0):
        assert three_lines_check(1.0, x)
    assert three_lines_check(0.5 + 2j, 3.0)
    assert three_lines_check(2.7j, 1.3)
    with pytest.raises(DomainError):
        three_lines_check(1.5, 1.0)


@given(st.floats(0, 1), st.floats(-50, 50), st.floats(-400, 400))
def test_three_lines_property(a, t, x):
    assert three_lines_check(complex(a, t), x)


def test_continued_flag():
    assert ResolventEval(OmegaPoint(4.0 + 1j), 1.0).continued
    ev = ResolventEval(OmegaPoint(1.0), 1.0)
    assert not ev.continued
    assert ev.value_at(0.0) == pytest.approx(ev.diagonal)
