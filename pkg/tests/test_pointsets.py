"""Point sets: the plane-section property and subgeometry closure."""

import itertools

import numpy as np
import pytest

from fingeo.errors import FingeoError
from fingeo.fields import GF
from fingeo.pointsets import (
    PointSet,
    closure,
    has_property_star,
    random_point_set,
    two_lines_fixture,
)
from fingeo.projgeom import ProjSpace, standard_frame, subgeometry_points


def test_pointset_normalizes_and_sorts():
    space = ProjSpace(2, GF.prime(3))
    ps = PointSet(space, [(2, 0, 0), (0, 2, 1), (1, 0, 0)])
    assert ps.points == ((0, 1, 2), (1, 0, 0))
    assert (1, 0, 0) in ps
    assert len(ps) == 2


def test_pointset_requires_points():
    space = ProjSpace(2, GF.prime(3))
    with pytest.raises(ValueError):
        PointSet(space, [])


def test_contains_frame():
    space = ProjSpace(2, GF.of_order(4))
    frame = standard_frame(space)
    assert PointSet(space, frame).contains_frame()
    collinear = PointSet(space, [(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 2, 0)])
    assert not collinear.contains_frame()


def test_pointset_json_round_trip():
    space = ProjSpace(2, GF.of_order(4))
    ps = PointSet(space, standard_frame(space))
    obj = ps.to_json_obj()
    back = PointSet.from_json_obj(obj)
    assert back.points == ps.points
    assert back.space.field.order == 4


@pytest.mark.parametrize("q", [2, 3, 4])
def test_two_lines_fixtures_fail_star(q):
    space = ProjSpace(2, GF.of_order(q))
    full = two_lines_fixture(space)
    assert len(full) == 2 * q + 1
    holds, witness = has_property_star(full, with_witness=True)
    assert not holds
    assert witness["missing_common_point"] is False
    minus = two_lines_fixture(space, minus_point=True)
    assert len(minus) == 2 * q
    holds, witness = has_property_star(minus, with_witness=True)
    assert not holds
    assert witness["missing_common_point"] is True


def test_star_trivial_cases():
    line = ProjSpace(1, GF.of_order(9))
    assert has_property_star(PointSet(line, [(0, 1), (1, 0)]))
    plane = ProjSpace(2, GF.prime(3))
    # too few points for any forbidden section
    assert has_property_star(PointSet(plane, [(1, 0, 0), (0, 1, 0)]))


def _star_oracle(ps):
    """Independent literal implementation: for every plane section of size
    2q or 2q+1 and every pair of meeting lines, compare the section against
    the union and the punctured union."""
    space = ps.space
    field = space.field
    q = field.order
    if space.dim < 2:
        return True
    pts = set(ps.points)
    from fingeo.projgeom import intersect

    for plane in space.subspaces(2):
        section = {
            p for p in pts if plane.contains_point(field, np.array(p))
        }
        if len(section) not in (2 * q, 2 * q + 1):
            continue
        lines = [
            L for L in space.subspaces(1)
            if all(plane.contains_point(field, r) for r in L.basis)
        ]
        for L1, L2 in itertools.combinations(lines, 2):
            common = intersect(field, L1, L2)
            if not common.is_point:
                continue
            union = {tuple(p) for p in L1.points(field)} | {
                tuple(p) for p in L2.points(field)
            }
            if section == union:
                return False
            if section == union - {common.point_tuple()}:
                return False
    return True


@pytest.mark.parametrize("q,n_sets", [(3, 100), (4, 100)])
def test_star_matches_oracle_on_random_sets(q, n_sets):
    space = ProjSpace(2, GF.of_order(q))
    rng = np.random.default_rng(20260819 + q)
    for _ in range(n_sets):
        size = int(rng.integers(2 * q - 1, 2 * q + 2))
        ps = random_point_set(space, size, rng)
        assert has_property_star(ps) == _star_oracle(ps)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_star_oracle_rejects_fixtures(q):
    """The independent oracle itself must classify the constructed negatives
    as violations, so agreement on random sets is meaningful."""
    space = ProjSpace(2, GF.of_order(q))
    assert not _star_oracle(two_lines_fixture(space))
    assert not _star_oracle(two_lines_fixture(space, minus_point=True))


def test_closure_fano_from_frame():
    space = ProjSpace(2, GF.of_order(4))
    frame = standard_frame(space)
    closed = closure(PointSet(space, frame))
    fano = {tuple(p) for p in subgeometry_points(space, 2)}
    assert {tuple(p) for p in closed} == fano
    assert len(closed) == 7
    again = closure(closed)
    assert again.points == closed.points


def test_closure_contains_input_and_monotone():
    space = ProjSpace(2, GF.prime(3))
    frame = standard_frame(space)
    ps = PointSet(space, frame)
    closed = closure(ps)
    assert set(ps.points) <= set(closed.points)
    # over a prime field the closure of a frame is the whole plane
    assert len(closed) == 13


def test_closure_on_line_gives_subline():
    space = ProjSpace(1, GF.of_order(9))
    ps = PointSet(space, [(0, 1), (1, 0), (1, 1)])
    closed = closure(ps)
    assert len(closed) == 4
    # a PG(1,3) inside PG(1,9): cross-ratio coordinates in the subfield
    assert closed.points == ((0, 1), (1, 0), (1, 1), (1, 2))


def test_closure_requires_frame():
    space = ProjSpace(2, GF.of_order(4))
    with pytest.raises(FingeoError):
        closure(PointSet(space, [(1, 0, 0), (0, 1, 0), (1, 1, 0)]))


def test_closure_transported_frame_size():
    """Any frame of PG(2,4) closes to a 7-point Fano subplane."""
    space = ProjSpace(2, GF.of_order(4))
    frame = np.array([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, 3)])
    closed = closure(PointSet(space, frame))
    assert len(closed) == 7
    fano = {tuple(p) for p in subgeometry_points(space, 2, frame=frame)}
    assert {tuple(p) for p in closed} == fano
