import numpy as np
import pytest
from hypothesis import given, strategies as st

from llspec.grid import Grid, ParameterError, histogram, uniform_edges


def test_grid_basic():
    g = Grid(200.0, 0.2)
    assert g.n == 1000
    assert abs(g.n * g.dx - g.length) < 1e-9 * g.length
    assert g.k[0] == pytest.approx(-np.pi / g.dx)
    assert g.k.size == g.n and np.all(np.diff(g.k) > 0)
    assert g.volume == g.length


@pytest.mark.parametrize("length,dx", [(10.0, 0.3), (-1.0, 0.1), (1.0, 0.0), (0.3, 0.1)])
def test_grid_rejects(length, dx):
    with pytest.raises(ParameterError):
        Grid(length, dx)


def test_momentum_index():
    g = Grid.from_points(64, 0.5)
    assert g.momentum_index(2 * np.pi * 3 / g.length) == 3
    with pytest.raises(ParameterError):
        g.momentum_index(0.123)


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=200), st.floats(0.01, 10))
def test_histogram_normalized(values, width):
    h = histogram(values, width=width)
    assert abs(h.total() + h.outside - 1) < 1e-12
    assert h.outside == 0


def test_histogram_constant_single_bin():
    h = histogram(np.full(50, 3.0))
    assert h.density.size == 1 and h.centers[0] == 3.0
    assert abs(h.total() - 1) < 1e-12


def test_histogram_outside_mass():
    h = histogram([0.5, 1.5, 10.0, -3.0], uniform_edges(0, 2, 1.0))
    assert h.outside == pytest.approx(0.5)
    assert h.total() == pytest.approx(0.5)


def test_last_edge_inclusive():
    h = histogram([0.0, 2.0], uniform_edges(0, 2, 1.0))
    assert h.outside == 0 and h.total() == pytest.approx(1.0)
