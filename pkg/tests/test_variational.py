import math

import numpy as np
import pytest

from coshspec.errors import CertificationFailed, NotNonnegative, ValidationError
from coshspec.potentials import Potential
from coshspec.variational import (
    certify_bound_state,
    form_value,
    kinetic_closed_form,
    kinetic_quadrature,
    kinetic_term,
    potential_term,
    scan,
)


def test_kinetic_n10():
    expected = 10 * math.sqrt(2 * math.pi) * math.expm1(1 / 200)
    assert kinetic_term(10.0, 1.0) == pytest.approx(expected, rel=1e-15)
    assert kinetic_quadrature(10.0, 1.0) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("n", [0.25, 0.5, 1.0, 3.0, 10.0, 100.0, 1e4])
@pytest.mark.parametrize("b", [0.1, 0.5, 1.0, 2.0, 3.0])
def test_closed_form_vs_quadrature(n, b):
    c, q = kinetic_closed_form(n, b), kinetic_quadrature(n, b)
    assert abs(c - q) <= 1e-10 * c


def test_kinetic_degenerate_b():
    assert kinetic_term(3.0, 0.0) == 0.0


def test_kinetic_decays_like_one_over_n():
    ns = np.array([10.0, 20.0, 40.0, 1e3, 1e5])
    vals = np.array([kinetic_term(n, 1.0) for n in ns])
    # closed form ~ sqrt(2 pi) / (2 n) for large n
    C = math.sqrt(2 * math.pi) / 2 * math.expm1(1 / 200) * 200
    assert np.all(vals <= C / ns * (1 + 1e-12))
    assert vals[-1] < 1e-4


def test_kinetic_monotone():
    ns = np.geomspace(1, 1e4, 60)
    vals = [kinetic_term(n, 1.0) for n in ns]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_kinetic_validation():
    with pytest.raises(ValidationError):
        kinetic_term(0.0, 1.0)


def test_form_zero_potential():
    tf = form_value(Potential.gaussian(0.0), 2.0, 1.0)
    assert tf.total == tf.kinetic > 0


def test_form_gaussian_n10():
    tf = form_value(Potential.gaussian(), 10.0, 1.0)
    assert tf.potential_term == pytest.approx(math.sqrt(math.pi / (1 + 2 / 100)), rel=1e-12)
    assert tf.total.real < 0
    assert tf.total == tf.kinetic - tf.potential_term


def test_form_repulsive_positive():
    V = Potential.gaussian(-1.0)
    assert all(tf.total.real > 0 for tf in scan(V, 1.0))


def test_potential_term_delta():
    assert potential_term(Potential.delta(2.0), 5.0) == 2.0


def test_certify_gaussian():
    n, total = certify_bound_state(Potential.gaussian(), 1.0)
    assert total < 0 and n >= 1
    # the previous width did not certify
    if n > 1:
        assert form_value(Potential.gaussian(), n / 2, 1.0).total.real >= 0


def test_certify_weak_gaussian():
    n, total = certify_bound_state(Potential.gaussian(0.001), 1.0)
    assert total < 0


def test_certify_hypotheses():
    with pytest.raises(ValidationError):
        certify_bound_state(Potential.gaussian(0.0), 1.0)
    with pytest.raises(NotNonnegative):
        certify_bound_state(Potential.gaussian(1j), 1.0)
    with pytest.raises(NotNonnegative):
        certify_bound_state(Potential.gaussian_sum([(1.0, 0.0, 1.0), (-2.0, 3.0, 0.5)]), 1.0)


def test_certify_cap(monkeypatch):
    import coshspec.variational as v

    monkeypatch.setattr(v, "N_MAX", 4.0)
    with pytest.raises(CertificationFailed):
        v.certify_bound_state(Potential.gaussian(1e-9), 1.0)


def test_scan_widths():
    forms = scan(Potential.gaussian(), 1.0)
    assert [f.n for f in forms] == [2.0**j for j in range(13)]
    assert all(f.kinetic >= 0 for f in forms)
