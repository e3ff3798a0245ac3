"""Acceptance gate. Run with ``pytest tests/test_acceptance.py`` for one line per criterion."""
import math
import time

import numpy as np
import pytest

from capacityloss import (Disk, Square, capacity_loss, circular_gaussian, cs_upper_bound,
                          discretize_fstar, gauss_hermite_mi, gaussian_capacity, loss_lower_bound,
                          monte_carlo_mi, qam, sigma_from_db, solve_lambda)

from conftest import random_polygon

LOG_PI_E = math.log(math.pi * math.e)
A_UNIT = math.sqrt(1.5)  # square whose uniform power is 1


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.2f} s, limit {self.limit} s"


@pytest.mark.acceptance(1, "square loss log(pi e/6), 1.53 dB")
def test_criterion_1_square_loss():
    with Timer(1.0):
        for a in (0.5, 1.0, 10.0):
            sol = capacity_loss(Square(a), Square(a).uniform_power())
            assert abs(sol.loss - math.log(math.pi * math.e / 6)) <= 1e-9
            assert abs(sol.loss_db - 1.53) <= 0.005


@pytest.mark.acceptance(2, "disk loss 1 - ln 2, 1.33 dB")
def test_criterion_2_disk_loss():
    with Timer(1.0):
        for r in (0.5, 1.0, 10.0):
            sol = capacity_loss(Disk(r), Disk(r).uniform_power())
            assert abs(sol.loss - (1 - math.log(2))) <= 1e-9
            assert abs(sol.loss_db - 1.33) <= 0.005


def _disk_ratio(lam):
    return 1.0 / lam - math.exp(-lam) / (-math.expm1(-lam))


def _bisect(P, steps=1000):
    lo, hi = 1e-300, 1e6
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if _disk_ratio(mid) > P else (lo, mid)
    return 0.5 * (lo + hi)


@pytest.mark.acceptance(3, "lambda solver residual and bisection oracle")
def test_criterion_3_lambda_solver():
    with Timer(1.0):
        for P in (0.05, 0.1, 0.25, 0.4, 0.49):
            lam = solve_lambda(Disk(1.0), P)
            assert abs(Disk(1.0).moments(lam).power - P) <= 1e-10 * P
            assert abs(lam - _bisect(P)) <= 1e-9


@pytest.mark.acceptance(4, "scale invariance over 50 random (region, c) pairs")
def test_criterion_4_scale_invariance():
    rng = np.random.default_rng(2024)
    with Timer(10.0):
        for k in range(50):
            kind = k % 3
            if kind == 0:
                region = Square(rng.uniform(0.1, 5))
            elif kind == 1:
                region = Disk(rng.uniform(0.1, 5))
            else:
                region = random_polygon(rng)
            P = rng.uniform(0.02, 2.0) * region.uniform_power()
            c = 10 ** rng.uniform(-2, 2)
            base = capacity_loss(region, P).loss
            scaled = capacity_loss(region.scaled(c), c * c * P).loss
            assert abs(scaled - base) <= 1e-8, (region, P, c)


@pytest.mark.acceptance(5, "nonasymptotic bound converges to log(pi e/6) from below")
def test_criterion_5_bound_convergence():
    noise = circular_gaussian()
    with Timer(30.0):
        vals = [loss_lower_bound(Square(A_UNIT), 1.0, sigma_from_db(db), noise).loss_lower
                for db in (40, 50, 60, 70, 80)]
    assert all(b >= a for a, b in zip(vals, vals[1:])), vals
    assert 0.3530 - 0.05 <= vals[-1] <= 0.3530


@pytest.mark.acceptance(6, "upper bound dominates 1024-QAM rate")
def test_criterion_6_bound_validity():
    noise = circular_gaussian()
    c = qam(10, 1.0)
    assert np.all(Square(A_UNIT).contains(c.points))
    with Timer(120.0):
        for db in range(20, 71, 10):
            sigma = sigma_from_db(db)
            bp = loss_lower_bound(Square(A_UNIT), 1.0, sigma, noise)
            assert bp.cs_upper == cs_upper_bound(Square(A_UNIT), 1.0, sigma, noise, bp.eps_star)
            assert bp.cs_upper >= gauss_hermite_mi(c, sigma), db


@pytest.mark.acceptance(7, "1024-QAM rate saturates and its loss diverges")
def test_criterion_7_qam_saturation():
    c = qam(10, 1.0)
    with Timer(60.0):
        s40, s80 = sigma_from_db(40), sigma_from_db(80)
        r40, r80 = gauss_hermite_mi(c, s40), gauss_hermite_mi(c, s80)
    assert r80 >= 10 * math.log(2) - 1e-3
    loss40 = gaussian_capacity(1.0, s40) - r40
    loss80 = gaussian_capacity(1.0, s80) - r80
    assert loss80 - loss40 >= 5.0


@pytest.mark.acceptance(8, "Gauss-Hermite agrees with Monte Carlo within 3 standard errors")
def test_criterion_8_gh_vs_mc():
    noise = circular_gaussian()
    with Timer(120.0):
        for m in (2, 4):
            c = qam(m, 1.0)
            for db in (0, 10, 20):
                sigma = sigma_from_db(db)
                est, se = monte_carlo_mi(c, sigma, noise, n_samples=1_000_000, seed=100 * m + db)
                gh = gauss_hermite_mi(c, sigma)
                assert abs(gh - est) <= 3 * se, (m, db, gh, est, se)


# Half-side chosen so the 64-cell grid spacing (2A/64) is close to sigma at 60 dB.
ACHIEVABILITY_HALF_SIDE = 0.05


@pytest.mark.acceptance(9, "discretized max-entropy input approaches h(X*) - h(W)")
def test_criterion_9_achievability():
    region = Square(ACHIEVABILITY_HALF_SIDE)
    sigma = sigma_from_db(60)
    with Timer(60.0):
        sol = capacity_loss(region, region.uniform_power())
        xn = discretize_fstar(region, sol, 64)
        rate = gauss_hermite_mi(xn, sigma)
    assert abs((rate - math.log(1 / sigma**2)) - (sol.entropy - LOG_PI_E)) <= 0.05
