import math

import numpy as np
import pytest

import legendre_cs as lcs


def test_legendre_and_primes():
    assert lcs.legendre_symbol(2, 7) == 1
    assert lcs.legendre_symbol(3, 7) == -1
    assert lcs.is_prime(7919)
    assert not lcs.is_prime(561)
    with pytest.raises(ValueError):
        lcs.legendre_symbol(1, 9)


def test_context_and_gauss_sum():
    ctx = lcs.FieldContext(5)
    assert ctx.p == 5
    assert ctx.chi() == [0, 1, -1, -1, 1]
    assert abs(lcs.gauss_sum(ctx) - math.sqrt(5)) < 1e-12


def test_gabor_vector_and_coherence():
    ctx = lcs.FieldContext(13)
    u = lcs.gabor_vector(ctx, 2, 5, lcs.NormConvention.UNIT)
    assert u.shape == (13,)
    assert abs(np.vdot(u, u).real - 1.0) < 1e-12
    mu = lcs.coherence(ctx)
    assert abs(mu - lcs.coherence(ctx, brute=True)) < 1e-10
    assert mu <= 2 / math.sqrt(13)


def test_sine_sum_and_fit():
    tp = lcs.ThetaParams.realize(1009, 0.1, 0.3)
    assert tp.violations() == []
    assert abs(tp.alpha - 0.2) < 1e-15
    assert lcs.sine_sum_exact(tp) <= lcs.trivial_bound(tp)
    pts = [(p, 7 * p ** 1.3) for p in (101.0, 211.0, 307.0, 401.0, 503.0)]
    exponent, log_k, r2 = lcs.scaling_fit(pts)
    assert abs(exponent - 1.3) < 1e-10 and abs(r2 - 1) < 1e-10


def test_rip_order():
    order, delta = lcs.rip_order_from_flat(1024, 0.01, 1)
    assert order == 2048
    assert abs(delta - 44 * 0.01 * math.log(1024)) < 1e-12


def test_omp_recovers_column():
    ctx = lcs.FieldContext(31)
    b = lcs.measure(ctx, [(4, 9), (20, 3)], [1.0, -0.5j])
    result = lcs.omp(ctx, b, 2)
    assert sorted(result["support"]) == [(4, 9), (20, 3)]
    assert result["residual_norm"] < 1e-10


def test_recovery_experiment_is_seeded():
    ctx = lcs.FieldContext(31)
    a = lcs.recovery_experiment(ctx, [1, 3], 5, seed=3)
    b = lcs.recovery_experiment(ctx, [1, 3], 5, seed=3, workers=2)
    assert a == b
    assert a[0] == 1.0
