import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coshspec.errors import ParseError, ValidationError
from coshspec.potentials import (
    GaussianTerm,
    Potential,
    factorize,
    l1_norm,
    l1_norm_quadrature,
    load_potential,
    random_gaussian_sum,
)
from coshspec.quadrature import QuadratureSpec

SQRT_PI = 1.77245385090551602729816748334
# mpmath quad of |e^{-x^2} + (-1+i) e^{-(x-0.7)^2/0.64}| at 30 digits
TWO_BUMP_L1 = 2.18788656344227595548266925767


def two_bumps():
    return Potential.gaussian_sum([(1.0, 0.0, 1.0), (-1 + 1j, 0.7, 0.8)])


def test_l1_single_bump():
    assert l1_norm(Potential.gaussian()) == pytest.approx(SQRT_PI, rel=1e-14)


def test_l1_delta():
    assert l1_norm(Potential.delta(4.0)) == 4.0
    assert l1_norm(Potential.delta(3 + 4j)) == 5.0


def test_l1_overlapping_bumps_vs_refined_oracle():
    V = two_bumps()
    adaptive = l1_norm(V)
    refined = l1_norm_quadrature(V, QuadratureSpec(panels=256, nodes_per_panel=16))
    assert abs(adaptive - refined) <= 1e-8 * refined
    assert abs(adaptive - TWO_BUMP_L1) <= 1e-10 * TWO_BUMP_L1


def test_l1_disjoint_closed_form_matches_quadrature():
    V = Potential.gaussian_sum([(1.0, -40.0, 1.0), (2j, 40.0, 0.5)])
    expected = SQRT_PI * (1.0 + 1.0)
    assert l1_norm(V) == pytest.approx(expected, rel=1e-14)
    assert l1_norm_quadrature(V) == pytest.approx(expected, rel=1e-8)


def test_l1_grid_exact():
    # |V| = 1 - |x| hat on [-1, 1]; integral 1
    V = Potential.grid([-1.0, 0.0, 1.0], [0.0, 1.0, 0.0])
    assert l1_norm(V) == pytest.approx(1.0, rel=1e-15)
    # |(1 + i) s| on [0, 1] -> sqrt(2) / 2
    W = Potential.grid([0.0, 1.0], [0.0, 1 + 1j])
    assert l1_norm(W) == pytest.approx(math.sqrt(2) / 2, rel=1e-15)


def test_l1_grid_sign_change_segment():
    # values 1 -> -1 on [0, 2]: |1 - s| over s in [0, 2] -> 1
    V = Potential.grid([0.0, 2.0], [1.0, -1.0])
    assert l1_norm(V) == pytest.approx(1.0, rel=1e-14)
    ref = l1_norm_quadrature(V, QuadratureSpec(panels=200, nodes_per_panel=16))
    assert l1_norm(V) == pytest.approx(ref, rel=1e-6)


def test_l1_grid_complex_matches_quadrature():
    rng = np.random.default_rng(4)
    x = np.sort(rng.uniform(-3, 3, 12))
    v = rng.normal(size=12) + 1j * rng.normal(size=12)
    V = Potential.grid(x, v)
    from scipy.integrate import quad

    ref = sum(quad(lambda t: abs(V(t)), a, b, epsabs=1e-14, epsrel=1e-13)[0] for a, b in zip(x[:-1], x[1:]))
    assert l1_norm(V) == pytest.approx(ref, rel=1e-10)


def test_l1_zero():
    assert l1_norm(Potential.gaussian(0.0)) == 0.0
    assert l1_norm(Potential.grid([0, 1], [0, 0])) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_l1_scaling(sr, si):
    s = complex(sr, si)
    V = two_bumps()
    assert l1_norm(V.scaled(s)) == pytest.approx(abs(s) * l1_norm(V), rel=1e-12, abs=1e-300)


def test_l1_nonnegative_random():
    rng = np.random.default_rng(2)
    for _ in range(20):
        assert l1_norm(random_gaussian_sum(rng)) > 0


@pytest.mark.parametrize("v,x,y", [(-4.0, 2.0, -2.0), (4j, 2.0, 2j), (0.0, 0.0, 0.0)])
def test_factorize_examples(v, x, y):
    F = factorize(Potential.grid([-1.0, 1.0], [v, v]))
    assert F.X(0.0) == pytest.approx(x, abs=1e-15)
    assert F.Y(0.0) == pytest.approx(y, abs=1e-15)


def test_factorize_round_trip():
    rng = np.random.default_rng(3)
    V = random_gaussian_sum(rng, name="r")
    F = factorize(V)
    x = rng.uniform(-6, 6, 1000)
    v = V(x)
    X, Y = F.XY(x)
    assert np.all(np.abs(Y * X - v) <= 1e-14 * np.abs(v))
    assert np.allclose(np.abs(X), np.sqrt(np.abs(v)), rtol=1e-15)
    assert np.allclose(np.abs(Y), np.sqrt(np.abs(v)), rtol=1e-15)


def test_factorize_rejects_delta():
    with pytest.raises(ValidationError):
        factorize(Potential.delta(1.0))


def test_delta_has_no_values():
    with pytest.raises(ValidationError):
        Potential.delta(1.0)(0.0)


def test_invalid_terms():
    with pytest.raises(ValidationError):
        GaussianTerm(1.0, 0.0, 0.0)
    with pytest.raises(ValidationError):
        GaussianTerm(float("nan"), 0.0, 1.0)
    with pytest.raises(ValidationError):
        Potential.grid([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(ValidationError):
        Potential.grid([0.0, 1.0], [1.0, float("inf")])


def test_potential_is_immutable():
    V = Potential.grid([0.0, 1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        V.values[0] = 5.0
    with pytest.raises(AttributeError):
        V.kind = "delta"


def test_grid_zero_outside():
    V = Potential.grid([0.0, 1.0], [1.0, 2.0])
    assert V(-0.5) == 0 and V(1.5) == 0 and V(0.5) == pytest.approx(1.5)


def test_support_captures_mass():
    V = two_bumps()
    lo, hi = V.support()
    assert abs(V(lo)) < 1e-14 * V.max_abs and abs(V(hi)) < 1e-14 * V.max_abs


def test_load_examples():
    V = load_potential('{"type":"delta","c":[4.0,0.0]}')
    assert V.kind == "delta" and V.c == 4.0
    V = load_potential('{"type":"gaussian_sum","terms":[{"amp":[1,0],"center":0,"width":1}]}')
    assert V.kind == "gaussian_sum" and V.terms == (GaussianTerm(1.0, 0.0, 1.0),)
    V = load_potential('{"type":"grid","nodes":[0,1,2],"values":[[0,0],[1,1],[0,0]]}')
    assert V(1.0) == 1 + 1j


def test_load_round_trip_json():
    import json

    V = two_bumps()
    W = load_potential(json.dumps(V.to_json()))
    assert W.terms == V.terms


@pytest.mark.parametrize(
    "doc,where",
    [
        ('{"type":"gaussian_sum","terms":[{"amp":[1,0],"center":0,"width":-1}]}', "terms[0].width"),
        ('{"type":"gaussian_sum","terms":[{"amp":[1,0],"center":0}]}', "width"),
        ('{"type":"delta","c":[NaN,0]}', "c"),
        ('{"type":"delta","c":4}', "c"),
        ('{"type":"square"}', "type"),
        ('{"type":"grid","nodes":[0,1],"values":[[1,0],[1,"x"]]}', "values[1]"),
        ('{"type":"grid","nodes":[1,0],"values":[[1,0],[1,0]]}', "increasing"),
        ("[1, 2]", "object"),
    ],
)
def test_load_validation_errors(doc, where):
    with pytest.raises(ValidationError, match=where.replace("[", r"\[").replace("]", r"\]")):
        load_potential(doc)


def test_load_parse_error_has_position():
    with pytest.raises(ParseError, match=r"line 2, column"):
        load_potential('{"type": "delta",\n "c": [1, 0,]}')


def test_random_gaussian_sum_reproducible():
    a = random_gaussian_sum(np.random.default_rng(7))
    b = random_gaussian_sum(np.random.default_rng(7))
    assert a.terms == b.terms
    assert 1 <= len(a.terms) <= 3
