import numpy as np
import pytest

from atmoslab.thermo import (GasConstants, bigP_from_pi, dP_dpi, dP_dpi_from_P,
                             exner_from_p, p_from_exner, pi_from_bigP, sound_speed)

C = GasConstants()


def test_reference_state():
    assert exner_from_p(C.p_ref, C) == 1.0
    assert bigP_from_pi(1.0, C) == C.p_ref / C.R


def test_exner_two_sevenths():
    # independent oracle: direct power evaluation with R/cp = 2/7 exactly
    c = GasConstants(R=2.0, c_p=7.0, p_ref=1.0)
    expected = 0.5 ** (2.0 / 7.0)
    assert exner_from_p(0.5, c) == pytest.approx(expected, rel=1e-15)
    assert expected == pytest.approx(0.8203, abs=5e-5)


def test_exner_round_trip():
    p = np.geomspace(1e3, 1e6, 41)
    back = p_from_exner(exner_from_p(p, C), C)
    assert np.allclose(back, p, rtol=1e-13)


def test_bigP_consistency_with_p():
    for fac in (0.3, 1.0, 1.7):
        p = fac * C.p_ref
        direct = (C.p_ref / C.R) * (p / C.p_ref) ** (C.c_v / C.c_p)
        assert bigP_from_pi(exner_from_p(p, C), C) == pytest.approx(direct, rel=1e-14)


def test_pi_from_bigP_inverts():
    pi = np.linspace(0.4, 1.3, 10)
    assert np.allclose(pi_from_bigP(bigP_from_pi(pi, C), C), pi, rtol=1e-13)


def test_dP_dpi_at_unity():
    assert dP_dpi(1.0, C) == pytest.approx((C.p_ref / C.R) * (C.c_v / C.R), rel=1e-14)


@pytest.mark.parametrize("pi", [0.83, 1.0, 1.2])
def test_dP_dpi_matches_finite_difference(pi):
    h = 1e-5
    fd = (bigP_from_pi(pi + h, C) - bigP_from_pi(pi - h, C)) / (2 * h)
    assert dP_dpi(pi, C) == pytest.approx(fd, rel=1e-8)


def test_dP_dpi_positive():
    pi = np.geomspace(1e-3, 1e2, 50)
    assert np.all(dP_dpi(pi, C) > 0.0)


def test_dP_dpi_from_P_agrees():
    pi = np.linspace(0.5, 1.2, 7)
    P = bigP_from_pi(pi, C)
    assert np.allclose(dP_dpi_from_P(P, C), dP_dpi(pi, C), rtol=1e-13)


def test_sound_speed():
    # direct evaluation with the default constants
    cs = sound_speed(300.0, C)
    assert cs == pytest.approx(np.sqrt(C.gamma * C.R * 300.0), rel=1e-15)
    assert cs == pytest.approx(347.0, abs=1.0)
    assert sound_speed(4 * 300.0, C) == pytest.approx(2 * cs, rel=1e-14)
    assert sound_speed(1e-12, C) < 1e-3


def test_domain_errors():
    with pytest.raises(ValueError):
        exner_from_p(-1.0, C)
    with pytest.raises(ValueError):
        bigP_from_pi(0.0, C)
    with pytest.raises(ValueError):
        sound_speed(0.0, C)
    with pytest.raises(ValueError):
        dP_dpi(np.array([1.0, -2.0]), C)


def test_constants_invariants():
    assert C.c_v == C.c_p - C.R
    assert C.gamma > 1.0
    with pytest.raises(ValueError):
        GasConstants(R=300.0, c_p=200.0)
    with pytest.raises(ValueError):
        GasConstants(p_ref=-1.0)
