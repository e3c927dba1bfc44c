import numpy as np
import pytest

from core.errors import DegeneracyError, DivergenceError, InputError
from dynamics.combinatorics import Itinerary
from dynamics.inverse_branches import strip_index
from dynamics.model import MarkedConfig
from dynamics.spider import SeedPolicy, initial_configuration, pullback_step, residual, run_spider

M1 = Itinerary(m=1, k0=0)
M1_K2 = Itinerary(m=1, k0=2)
M2 = Itinerary(m=2, k0=0, addresses=(1,))
M3 = Itinerary(m=3, k0=0, addresses=(1, 1))

OFFSET = complex(0.4, 0.3)


class TestInitialConfiguration:
    def test_period_one_has_no_free_points(self):
        cfg = initial_configuration(M1)
        assert cfg.points == ()
        assert cfg.lam == pytest.approx(np.pi / 2)

    def test_default_policy(self):
        cfg = initial_configuration(M2)
        assert cfg.points[0] == pytest.approx(np.pi / 2 + OFFSET)
        assert cfg.lam == cfg.points[0]

        cfg = initial_configuration(M3)
        assert cfg.points[0] == pytest.approx(np.pi / 2 + OFFSET)
        assert cfg.points[1] == pytest.approx(np.pi / 2 + 2 * OFFSET)

    def test_random_policy_is_reproducible_and_local(self):
        a = initial_configuration(M3, SeedPolicy.random(11))
        b = initial_configuration(M3, SeedPolicy.random(11))
        c = initial_configuration(M3, SeedPolicy.random(12))
        assert a == b
        assert a != c
        base = initial_configuration(M3)
        for z, z0 in zip(a.points, base.points):
            assert abs(z - z0) <= 0.5

    @pytest.mark.parametrize("it", [M2, M3, Itinerary(m=4, k0=0, addresses=(1, 1, 1))], ids=str)
    def test_random_policy_keeps_the_upper_half_plane(self, it):
        for seed_value in range(50):
            cfg = initial_configuration(it, SeedPolicy.random(seed_value))
            assert all(z.imag > 0 for z in cfg.points)

    def test_explicit_policy(self):
        cfg = initial_configuration(M2, SeedPolicy.explicit([2.0]))
        assert cfg.points == (2.0 + 0j,)
        with pytest.raises(ValueError):
            initial_configuration(M3, SeedPolicy.explicit([2.0]))


class TestPullbackStep:
    def test_hand_evaluated_step(self):
        cfg = pullback_step(MarkedConfig(points=(2.0 + 0j,)), M2)
        assert cfg.points[0] == pytest.approx(np.pi - np.arcsin(np.pi / 4.0), abs=1e-12)
        assert cfg.points[0].real == pytest.approx(2.2383, abs=1e-4)

    def test_period_one_is_stationary(self):
        cfg = initial_configuration(M1)
        assert pullback_step(cfg, M1) == cfg

    def test_center_is_a_fixed_point(self, period2_root):
        cfg = MarkedConfig(points=(complex(period2_root),))
        assert abs(pullback_step(cfg, M2).lam - period2_root) < 1e-9

    def test_inverse_property_and_strips(self):
        cfg = initial_configuration(M3, SeedPolicy.random(3))
        for _ in range(5):
            new = pullback_step(cfg, M3)
            source = cfg.with_anchor()
            for l in range(M3.m - 1):
                z_new = new.points[l]
                assert abs(cfg.lam * np.sin(z_new) - source[l]) <= 1e-12 * max(1.0, abs(source[l]))
                assert strip_index(z_new) == M3.addresses[l]
            assert new.with_anchor()[0] == M3.anchor
            cfg = new

    def test_lambda_floor(self):
        with pytest.raises(DegeneracyError):
            pullback_step(MarkedConfig(points=(1e-9 + 0j,)), M2)


class TestResidual:
    def test_fixed_point_config(self):
        assert residual(initial_configuration(M1), M1) < 1e-12

    def test_off_center(self):
        cfg = MarkedConfig(points=(2.0 + 0j,))
        assert residual(cfg, M2) == pytest.approx(abs(2.0 * np.sin(2.0) - np.pi / 2), abs=1e-12)
        assert residual(cfg, M2) == pytest.approx(0.2478, abs=1e-4)

    def test_at_center(self, period2_root):
        assert residual(MarkedConfig(points=(complex(period2_root),)), M2) < 1e-8


class TestRunSpider:
    @pytest.mark.parametrize("it, expected", [(M1, np.pi / 2), (M1_K2, 5 * np.pi / 2)])
    def test_closed_form_centers(self, it, expected):
        result, trace = run_spider(it)
        assert result.converged
        assert abs(result.lambda_star - expected) < 1e-10
        assert result.iterations <= 5
        assert len(trace) == result.iterations
        assert result.exact_period == 1

    def test_period_two_center(self, period2_run, period2_root):
        result, trace = period2_run
        assert result.converged
        assert 2.42 <= result.lambda_star.real <= 2.46
        assert abs(result.lambda_star.imag) < 1e-12
        lam = result.lambda_star
        assert abs(lam * np.sin(lam) - np.pi / 2) < 1e-10
        assert abs(lam - period2_root) < 1e-9
        assert result.orbit_residual < 1e-9
        assert result.exact_period == 2
        assert result.final_displacement < 1e-12
        assert result.contraction_rate == pytest.approx(0.343, abs=0.02)

    def test_super_attracting_cycle(self, period2_run):
        result, _ = period2_run
        lam = result.lambda_star
        z = np.pi / 2
        derivative = 1.0
        for _ in range(2):
            derivative *= lam * np.cos(z)
            z = lam * np.sin(z)
        assert abs(derivative) < 1e-8

    def test_trace_records_every_step(self, period2_run):
        result, trace = period2_run
        assert [s.n for s in trace] == list(range(1, result.iterations + 1))
        assert trace.steps[0].ratio is None
        assert all(s.displacement >= 0 for s in trace)
        assert all(s.separation > 0 for s in trace)
        for i, step in enumerate(trace.steps):
            assert trace.config_at(i).anchor == M2.anchor
            assert step.lam == step.points[-1]

    def test_monotone_tail(self, period2_run):
        _, trace = period2_run
        d = trace.displacements
        start = int(np.argmax(d < 0.1))
        for step in trace.steps[start + 1:]:
            assert step.ratio is not None and step.ratio < 1

    def test_mirror_itinerary_converges_to_mirror_center(self, period2_root):
        result, _ = run_spider(Itinerary(m=2, k0=0, addresses=(-1,)))
        assert result.converged
        assert abs(result.lambda_star + period2_root) < 1e-9

    def test_budget_exhaustion_carries_trace(self):
        with pytest.raises(DivergenceError) as info:
            run_spider(M2, max_iter=3)
        assert len(info.value.trace) == 3

    @pytest.mark.parametrize("max_iter", [0, -1])
    def test_empty_budget_is_rejected(self, max_iter):
        with pytest.raises(InputError):
            run_spider(M2, max_iter=max_iter)

    def test_explicit_seed(self, period2_root):
        result, trace = run_spider(M2, seed=SeedPolicy.explicit([2.0]))
        assert result.converged
        assert abs(result.lambda_star - period2_root) < 1e-9
        assert trace.steps[0].lam == pytest.approx(np.pi - np.arcsin(np.pi / 4.0))


SEED_ITINERARIES = [
    M1,
    M1_K2,
    M2,
    Itinerary(m=2, k0=0, addresses=(-1,)),
    M3,
]


@pytest.mark.parametrize("it", SEED_ITINERARIES, ids=str)
def test_randomized_seeds_agree(it):
    found = []
    failures = []
    for seed_value in range(10):
        try:
            result, _ = run_spider(it, seed=SeedPolicy.random(seed_value))
        except (DivergenceError, DegeneracyError) as e:
            failures.append((seed_value, type(e).__name__))
            continue
        if result.converged:
            found.append(result.lambda_star)
        else:
            failures.append((seed_value, result.note))
    assert len(found) + len(failures) == 10
    if found:
        assert max(abs(z - found[0]) for z in found) < 1e-8
    if it.m <= 2:
        assert not failures
