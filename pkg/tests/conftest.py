import math

import pytest

from mixvol import geom2d, structuring


@pytest.fixture
def unit_square():
    return geom2d.ConvexPolygon(((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)))


@pytest.fixture
def diamond():
    return geom2d.ConvexPolygon(((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)))


@pytest.fixture
def plus_set():
    # two unit-length axis segments through the origin
    return structuring.StructuringSet((
        structuring.Segment((-1.0, 0.0), (1.0, 0.0)),
        structuring.Segment((0.0, -1.0), (0.0, 1.0)),
    ))


@pytest.fixture(scope="session")
def disc_4096():
    return geom2d.regular_disc(4096, 1.0)


def closed_form_plus_dilation(eps: float) -> float:
    """Exact area of the unit disc dilated by eps times the axis cross.

    Decomposes the union of the two stadium-like parts into circular
    segments and triangles; valid for 0 < eps < 1.
    """
    e = eps
    s = math.sqrt(2.0 - e * e)
    return (
        math.pi
        + 2.0 * e * e
        + 2.0 * s * e
        + 0.5 * math.sqrt(2.0 - 2.0 * s * e) * e
        + 0.5 * math.sqrt(2.0 * s * e + 2.0) * e
        + 0.5 * s * math.sqrt(2.0 - 2.0 * s * e)
        - 0.5 * s * math.sqrt(2.0 * s * e + 2.0)
        + 2.0 * math.asin(0.5 * (e - s))
        + 2.0 * math.asin(0.5 * (s + e))
    )
