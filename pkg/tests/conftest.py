"""Shared builders, cached so the suite constructs each geometry once."""

from functools import lru_cache

from fingeo.coset import build_coset_geometry
from fingeo.fields import GF, CompanionAlgebra
from fingeo.xgeom import build_x


@lru_cache(maxsize=None)
def field(q):
    return GF.of_order(q)


@lru_cache(maxsize=None)
def algebra(q, t):
    return CompanionAlgebra(field(q), t)


@lru_cache(maxsize=None)
def x_struct(n, t, q):
    return build_x(n, t, field(q))


@lru_cache(maxsize=None)
def coset_struct(n, t, q):
    return build_coset_geometry(n, t, field(q))
