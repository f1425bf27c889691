from __future__ import annotations

import numpy as np

from ..errors import DegenerateAxis


def transform_to_standard(home: np.ndarray, supports: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map supports into the standard domain around ``home``.

    Returns the scaled offsets (home at the origin, every component within
    [-1, 1]) and the per-axis lengths ``max |x_i - x_0|``.
    """

    home = np.asarray(home, dtype=float)
    offsets = np.atleast_2d(np.asarray(supports, dtype=float)) - home
    lengths = np.abs(offsets).max(axis=0) if len(offsets) else np.zeros_like(home)
    scale = float(lengths.max()) if len(offsets) else 0.0
    flat = np.flatnonzero(lengths <= 1.0e-14 * max(scale, 1.0e-300))
    if len(flat):
        raise DegenerateAxis(f"All supports share the home coordinate along axis {int(flat[0])}")
    xi = offsets / lengths
    if np.linalg.matrix_rank(xi, tol=1.0e-10) < len(home):
        raise DegenerateAxis("Supports are collinear/coplanar with the home point")
    return xi, lengths
