"""Discrete Sobolev norms on uniform grids (2nd-order stencils)."""

from __future__ import annotations

import numpy as np


def sobolev_norms(field, dx: float, order: int = 0) -> float:
    """Discrete H^order norm: L2 of the field and central-difference
    derivatives up to `order`, combined root-sum-square.

    Uses np.gradient (2nd-order interior, one-sided 2nd-order at the
    ends); order is capped at 2.
    """
    if not 0 <= order <= 2:
        raise ValueError("order must be 0, 1, or 2")
    field = np.asarray(field, dtype=float)
    if field.size < 5:
        raise ValueError("need at least 5 cells")
    total = np.sum(field**2)
    if order >= 1:
        d1 = np.gradient(field, dx, edge_order=2)
        total += np.sum(d1**2)
    if order >= 2:
        d2 = np.gradient(d1, dx, edge_order=2)
        total += np.sum(d2**2)
    return float(np.sqrt(total * dx))


def linf(field) -> float:
    return float(np.max(np.abs(field)))
