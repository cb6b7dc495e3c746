"""Rank weight, support and the m x n expansion of vectors over GF(q^m)."""

from __future__ import annotations

import numpy as np

from . import matrix_ops as mo
from .field_tower import FieldContext


def expand(ctx: FieldContext, v) -> np.ndarray:
    """The m x n matrix over GF(q) whose column j holds the beta-coordinates of v_j."""
    v = np.asarray(v, dtype=np.int64)
    return ctx.to_coords(v).T.copy()


def collapse(ctx: FieldContext, M) -> np.ndarray:
    """Inverse of :func:`expand`."""
    return ctx.from_coords(np.asarray(M, dtype=np.int64).T)


def rank_weight(ctx: FieldContext, v) -> int:
    v = np.asarray(v, dtype=np.int64)
    if v.shape[0] == 0:
        return 0
    return mo.rank(ctx.base, expand(ctx, v))


def rank_distance(ctx: FieldContext, x, y) -> int:
    return rank_weight(ctx, ctx.sub(x, y))


def support(ctx: FieldContext, v):
    from .subspace_algebra import span
    return span(ctx, v)
