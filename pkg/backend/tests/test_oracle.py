import numpy as np
import pytest

from core.errors import InputError, OrbitEscapeError
from dynamics.combinatorics import Itinerary
from dynamics.oracle import (
    certify_center,
    closure_function,
    exact_period,
    format_certificate,
    forward_orbit,
    newton_refine,
    refine_closure,
)

M1 = Itinerary(m=1, k0=0)
M2 = Itinerary(m=2, k0=0, addresses=(1,))


def test_forward_orbit_of_fixed_critical_point():
    orbit = forward_orbit(np.pi / 2, 1)
    assert orbit.closure_error < 1e-15
    assert orbit.cycle_multiplier_bound < 1e-12
    assert len(orbit.points) == 2


def test_multiplier_runs_over_the_returning_cycle():
    orbit = forward_orbit(2.0, 2)
    z1, z2 = orbit.points[1], orbit.points[2]
    expected = abs(2.0 * np.cos(z1)) * abs(2.0 * np.cos(z2))
    assert orbit.cycle_multiplier_bound == pytest.approx(expected, rel=1e-12)
    assert orbit.cycle_multiplier_bound == pytest.approx(0.408, abs=1e-3)


def test_forward_orbit_escape():
    with pytest.raises(OrbitEscapeError):
        forward_orbit(1000j, 1)


def test_forward_orbit_rejects_zero():
    with pytest.raises(InputError):
        forward_orbit(0, 2)


@pytest.mark.parametrize("lam, m, k0", [(2.0 + 0.3j, 3, 0), (-1.2 + 0.7j, 2, 2), (2.4, 4, 0)])
def test_closure_derivative_matches_finite_difference(lam, m, k0):
    h = 1e-6
    _, dF = closure_function(lam, m, k0)
    numeric = (closure_function(lam + h, m, k0)[0] - closure_function(lam - h, m, k0)[0]) / (2 * h)
    assert abs(dF - numeric) <= 1e-6 * max(1.0, abs(dF))


def test_refine_closure_period_two(period2_root):
    lam, steps, _ = refine_closure(2.4, 2, 0)
    assert abs(lam - period2_root) < 1e-12
    assert 0 < steps <= 50


def test_refine_closure_rejects_zero():
    with pytest.raises(InputError):
        refine_closure(0.0, 2, 0)


def test_exact_period(period2_root):
    assert exact_period(period2_root, 2) == 2
    assert exact_period(np.pi / 2, 2) == 1
    assert exact_period(2.0, 2) == 0


class TestCertificate:
    def test_fixed_critical_point_passes(self):
        cert = certify_center(np.pi / 2, M1)
        assert cert.passed
        assert [c.name for c in cert.clauses] == [
            "(a) closure", "(b) exact period", "(c) addresses", "(d) multiplier",
        ]

    def test_period_two_center_passes(self, period2_root):
        cert = certify_center(period2_root, M2)
        assert cert.passed
        assert cert.addresses_read == (1,)
        assert cert.multiplier < 1e-8

    def test_off_center_fails_closure(self):
        cert = certify_center(2.0, M2)
        assert not cert.passed
        assert not cert.clause("a").passed
        assert cert.closure_error == pytest.approx(0.2478, abs=1e-4)

    def test_off_center_fails_multiplier(self):
        cert = certify_center(2.0, M2)
        assert not cert.clause("d").passed
        assert cert.multiplier > 0.1

    def test_sub_period_fails_exact_period(self):
        cert = certify_center(np.pi / 2, Itinerary(m=2, k0=0, addresses=(0,)))
        assert not cert.clause("b").passed

    def test_wrong_addresses_fail(self, period2_root):
        cert = certify_center(-period2_root, M2)
        assert cert.clause("a").passed
        assert not cert.clause("c").passed

    def test_report_text(self, period2_root):
        text = format_certificate(certify_center(period2_root, M2))
        assert text.startswith("lambda = 2.44")
        assert "(a) closure: pass" in text
        assert text.endswith("certified: yes\n")


def test_newton_refine_result(period2_root):
    result = newton_refine(2.45, M2)
    assert result.converged
    assert abs(result.lambda_star - period2_root) < 1e-12
    assert result.exact_period == 2
    assert result.orbit_residual < 1e-9
