# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import logging

import numpy as np

from ..general import NlwavesError

log = logging.getLogger(__name__)

MAX_SLOPE = 0.5


class InversionFailed(ArithmeticError, NlwavesError):
    pass


def original_coordinates(field, direction, f, *, tol=1e-13, max_iter=50):
    """Pointwise change of variables v = u - f(u) and its inverse.

    Args:
        field (array): Samples of shape (N, n) or (N,) for scalar fields.
        direction (str): 'u_to_v' applies v = u - f(u); 'v_to_u' solves
            u - f(u) = v by pointwise Newton from u = v.
        f (Nonlinearity): The map f with its Jacobian.
    Raises:
        InversionFailed: if |f'| ≥ 1/2 somewhere along the inversion, or if
            Newton does not reach 'tol'.
    """
    if direction not in ('u_to_v', 'v_to_u'):
        raise ValueError(f"direction must be 'u_to_v' or 'v_to_u', got {direction!r}.")
    field = np.asarray(field, dtype=float)
    squeeze = field.ndim == 1
    x = field[:, None] if squeeze else field
    if direction == 'u_to_v':
        out = x - f(x)
        return out[:, 0] if squeeze else out

    n = x.shape[-1]
    u = x.copy()
    for it in range(max_iter):
        jac = f.jacobian(u)
        slope = float(np.linalg.norm(jac, 2, axis=(-2, -1)).max()) if u.size else 0.
        if slope >= MAX_SLOPE:
            raise InversionFailed(f"|f'| = {slope:.3g} ≥ {MAX_SLOPE}: outside the small-solution regime.")
        defect = u - f(u) - x
        if np.abs(defect).max(initial=0.) < tol:
            log.debug(f"Inverted Id - f after {it} Newton steps")
            return u[:, 0] if squeeze else u
        u = u - np.linalg.solve(np.eye(n) - jac, defect[..., None])[..., 0]
    raise InversionFailed(f"Pointwise Newton for Id - f did not reach {tol:g} in {max_iter} steps.")
