import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ucamimo import ConfigError, LinkConfig
from ucamimo.geometry import (
    antenna_positions,
    exact_distance,
    exact_distances,
    neighbor_spacing,
    reference_distance,
    taylor_distance,
    taylor_distances,
)

from oracles import distance_loop


def link(**kw):
    base = dict(n_tx=1, n_rx=1, r_tx=1.0, r_rx=1.0, d_centers=4.0, wavelength=0.01)
    base.update(kw)
    return LinkConfig(**base)


def test_single_transmit_antenna_at_zero_phase():
    assert antenna_positions(link(r_tx=1.0), "transmit") == [(1.0, 0.0, 0.0)]


def test_coaxial_receive_antenna():
    cfg = link(r_tx=0.1, r_rx=0.1, d_centers=4.0)
    (p,) = antenna_positions(cfg, "receive")
    assert p == pytest.approx((0.1, 0.0, 4.0), abs=1e-15)


def test_tilted_receive_ring(tilted4):
    center = np.array([2.0, 0.0, 2.0 * math.sqrt(3.0)])
    np.testing.assert_allclose(tilted4.rx_center, center, atol=1e-15)
    for p in antenna_positions(tilted4, "receive"):
        assert math.dist(p, center) == pytest.approx(0.1, abs=1e-14)
        assert p.z == pytest.approx(2.0 * math.sqrt(3.0), abs=1e-14)


def test_bad_side():
    with pytest.raises(ValueError):
        antenna_positions(link(), "sideways")


def test_exact_distance_aligned_pair():
    assert exact_distance(link(), 1, 1) == pytest.approx(4.0, abs=1e-15)


def test_exact_distance_opposite_pair():
    cfg = link(r_tx=0.3, r_rx=0.2, alpha_rx=math.pi)
    assert exact_distance(cfg, 1, 1) == pytest.approx(math.sqrt(16 + 0.5**2), rel=1e-15)


def test_exact_distance_matches_loop(tilted4):
    for m in range(1, 5):
        for n in range(1, 5):
            assert exact_distance(tilted4, m, n) == pytest.approx(
                distance_loop(tilted4, m, n), rel=1e-12
            )


def test_exact_distance_matches_loop_skewed(skewed5):
    d = exact_distances(skewed5)
    ref = [[distance_loop(skewed5, m, n) for n in range(1, 6)] for m in range(1, 6)]
    np.testing.assert_allclose(d, ref, rtol=1e-12)


@pytest.mark.parametrize("m,n", [(0, 1), (1, 0), (5, 1), (1, 5)])
def test_index_out_of_range(tilted4, m, n):
    with pytest.raises(IndexError):
        exact_distance(tilted4, m, n)
    with pytest.raises(IndexError):
        taylor_distance(tilted4, m, n)


def test_reference_distance_values():
    assert reference_distance(link(r_tx=0.1, r_rx=0.1)) == pytest.approx(math.sqrt(16.02))
    assert reference_distance(link(r_tx=0.0, r_rx=0.0)) == 4.0
    assert reference_distance(link(r_tx=3.0, r_rx=4.0, d_centers=12.0)) == pytest.approx(13.0)


def test_taylor_point_array_is_reference():
    for kw in (dict(r_tx=0.0), dict(r_rx=0.0)):
        cfg = link(n_tx=4, n_rx=3, **kw)
        np.testing.assert_array_equal(taylor_distances(cfg), reference_distance(cfg))


def test_taylor_aligned_positions():
    cfg = link(r_tx=0.1, r_rx=0.2)
    D = reference_distance(cfg)
    assert taylor_distance(cfg, 1, 1) == pytest.approx(D - 0.02 / D, rel=1e-15)


def test_taylor_error_small_and_shrinks(tilted4):
    err4 = np.abs(taylor_distances(tilted4) - exact_distances(tilted4)).max()
    far = tilted4.with_(d_centers=40.0)
    err40 = np.abs(taylor_distances(far) - exact_distances(far)).max()
    assert err4 < 2e-3
    assert err40 < err4


def test_taylor_error_nonincreasing_with_distance(tilted4):
    errs = []
    for scale in (1, 2, 4, 8):
        cfg = tilted4.with_(d_centers=4.0 * scale)
        errs.append(np.abs(taylor_distances(cfg) - exact_distances(cfg)).max())
    assert all(b <= a for a, b in zip(errs, errs[1:]))


@pytest.mark.parametrize(
    "count,expected", [(6, 1.0), (4, math.sqrt(2.0)), (2, 2.0), (3, math.sqrt(3.0))]
)
def test_neighbor_spacing(count, expected):
    assert neighbor_spacing(1.0, count) == pytest.approx(expected, rel=1e-15)


def test_neighbor_spacing_errors():
    with pytest.raises(ValueError):
        neighbor_spacing(1.0, 1)
    with pytest.raises(ValueError):
        neighbor_spacing(0.0, 4)


@pytest.mark.parametrize(
    "field,value",
    [
        ("n_tx", 0),
        ("n_rx", 2.5),
        ("r_tx", -0.1),
        ("d_centers", 0.15),
        ("wavelength", 0.0),
        ("beta", float("nan")),
        ("phi", math.pi / 2),
        ("theta", 2 * math.pi),
        ("alpha_rx", -0.1),
    ],
)
def test_config_validation_names_field(field, value):
    with pytest.raises(ConfigError) as info:
        link(**{field: value})
    assert info.value.field == field


angles = st.floats(0.0, 2 * math.pi, exclude_max=True)


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 9),
    m=st.integers(1, 9),
    r=st.floats(0.01, 0.5),
    R=st.floats(0.01, 0.5),
    d=st.floats(1.5, 20.0),
    theta=angles,
    phi=st.floats(0.0, 1.5),
    a=angles,
    b=angles,
)
def test_position_invariants(n, m, r, R, d, theta, phi, a, b):
    cfg = LinkConfig(n_tx=n, n_rx=m, r_tx=r, r_rx=R, d_centers=d, wavelength=0.01,
                     theta=theta, phi=phi, alpha_tx=a, alpha_rx=b)
    tx = np.array(antenna_positions(cfg, "transmit"))
    rx = np.array(antenna_positions(cfg, "receive"))
    np.testing.assert_allclose(tx[:, 0] ** 2 + tx[:, 1] ** 2, r * r, rtol=1e-12)
    np.testing.assert_array_equal(tx[:, 2], 0.0)
    np.testing.assert_allclose(np.linalg.norm(rx - cfg.rx_center, axis=1), R, rtol=1e-12)
    np.testing.assert_allclose(rx[:, 2], d * math.cos(phi), rtol=1e-12)
    # call order does not matter
    assert antenna_positions(cfg, "receive") == antenna_positions(cfg, "receive")
