import cmath
import math

import pytest

import qozcp


def test_golay_pair_is_complementary():
    x, y = qozcp.golay_pair(64)
    r = qozcp.complementary_sum(x, y)
    assert len(r) == 127
    assert r[63] == 128
    assert max(abs(v) for i, v in enumerate(r) if i != 63) == 0


def test_correlations_agree():
    x = [cmath.exp(1j * 0.3 * l * l) for l in range(16)]
    y = [complex(l % 3 - 1, 0.5) for l in range(16)]
    r, c = qozcp.correlations_via_fft(x, y)
    direct_c = qozcp.cross_correlation(x, y)
    ax = qozcp.auto_correlation(x)
    ay = qozcp.auto_correlation(y)
    assert max(abs(a - b) for a, b in zip(c, direct_c)) < 1e-10
    assert max(abs(a - (b + d)) for a, b, d in zip(r, ax, ay)) < 1e-10


def test_projections():
    assert qozcp.proj_unimodular([2, -3j]) == pytest.approx([1, -1j])
    p = qozcp.proj_papr([3, 1], 2.0, 1.2)
    assert abs(p[0]) == pytest.approx(1.2)
    assert abs(p[1]) == pytest.approx(math.sqrt(0.56))
    with pytest.raises(ValueError):
        qozcp.proj_papr([1, 1], 4.0, 1.0)


def test_small_design_reaches_the_zone():
    res = qozcp.solve(32, 8, restarts=2)
    hist = res.objective_history
    assert all(b <= a * (1 + 1e-9) for a, b in zip(hist, hist[1:]))
    m = qozcp.zone_metrics(res.x, res.y, 8)
    assert m.max_complementary_sidelobe_in_zone < 1e-6
    assert m.max_cross_correlation_in_zone < 1e-6
    assert m.max_caf_omega2 <= 8 * m.max_cross_correlation_in_zone + 1e-15
    assert qozcp.papr(res.x) <= 5 + 1e-9


def test_unimodular_mode_rejects_papr():
    with pytest.raises(ValueError):
        qozcp.solve(8, 4, mode="unimodular", papr=2.0)
    res = qozcp.solve(8, 4, mode="unimodular", max_iter=50)
    assert all(abs(abs(v) - 1) < 1e-12 for v in res.x + res.y)


def test_ptm_and_partition_sums():
    assert qozcp.ptm(8) == [0, 1, 1, 0, 1, 0, 0, 1]
    assert qozcp.prouhet_partition_sums(8, 2) == (70.0, 70.0)
    assert qozcp.lambda_j(64, 30) == pytest.approx(63.0)


def test_objective_by_hand():
    assert qozcp.objective([1, 1], [1, -1], 2) == pytest.approx(1.0)
