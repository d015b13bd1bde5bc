import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qdeg.errors import DomainError
from qdeg.hull import hull_of_curves, lower_convex_envelope

ys = st.lists(st.floats(-10, 10, allow_nan=False), min_size=2, max_size=40)


def test_line_unchanged():
    x = np.linspace(0, 1, 7)
    env = lower_convex_envelope(np.column_stack([x, 2 * x - 1]))
    assert np.allclose(env.y, 2 * x - 1)


def test_chord_interpolation():
    env = lower_convex_envelope([(0, 1), (0.5, 0.2), (1, 1)])
    assert abs(env(0.25) - 0.6) < 1e-12
    with pytest.raises(DomainError):
        env(1.5)


def test_bad_abscissae():
    with pytest.raises(DomainError):
        lower_convex_envelope([(0, 1), (0, 2), (1, 0)])
    with pytest.raises(DomainError):
        lower_convex_envelope([(1, 1), (0, 2)])
    with pytest.raises(DomainError):
        lower_convex_envelope([(0, 1)])


@given(ys)
def test_envelope_properties(y):
    x = np.linspace(0, 1, len(y))
    env = lower_convex_envelope(np.column_stack([x, y]))
    assert np.all(env.y <= np.asarray(y) + 1e-9)
    slopes = np.diff(env.y) / np.diff(x)
    assert np.all(np.diff(slopes) >= -1e-9 * max(1.0, np.max(np.abs(slopes))))
    again = lower_convex_envelope(np.column_stack([x, env.y]))
    assert np.allclose(again.y, env.y, atol=1e-12)


@given(ys, ys)
def test_merged_hull_below_members(a, b):
    n = min(len(a), len(b))
    x = np.linspace(0, 1, n)
    h = hull_of_curves(x, [a[:n], b[:n]])
    assert np.all(h <= np.minimum(a[:n], b[:n]) + 1e-9)


def test_nan_members_skipped():
    x = np.linspace(0, 1, 5)
    a = np.array([1.0, np.nan, 0.5, 0.4, 0.3])
    h = hull_of_curves(x, [a])
    assert np.isnan(h[1]) and np.all(np.isfinite(h[[0, 2, 3, 4]]))
    b = np.array([1.0, 0.6, np.nan, 0.4, 0.3])
    h = hull_of_curves(x, [a, b])
    assert np.all(np.isfinite(h))
