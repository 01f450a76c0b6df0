"""Simultaneous per-mode matrix application and multilinear least squares.

``r_multiply`` applies one matrix per mode of a multiway array, generalizing
``A X B'`` from matrices to arrays of any order.  It evaluates mode by mode
(matricize, multiply, fold back), which costs ``O(m * sum(qj))`` instead of
the ``O(m * prod(qj))`` of the defining nested sum; the nested sum survives
as :func:`r_multiply_oracle` for verification.
"""

import numpy as np

from . import linalg
from .array_core import as_array, rvec, sq_norm
from .errors import SingularMatrixError
from .kronecker import inv_kron_chain


def _checked_maps(maps, x):
    ms = [linalg.as_matrix(a) for a in maps]
    if len(ms) != x.ndim:
        raise ValueError(f"{len(ms)} mode maps for an array of order {x.ndim}")
    for j, a in enumerate(ms, start=1):
        if a.shape[1] != x.shape[j - 1]:
            raise ValueError(
                f"mode {j}: map has {a.shape[1]} columns, array dimension is {x.shape[j - 1]}"
            )
    return ms


def apply_mode(a, mode, x) -> np.ndarray:
    """Apply matrix ``a`` along 0-based axis ``mode`` of ``x``."""
    y = np.tensordot(a, x, axes=((1,), (mode,)))
    return np.moveaxis(y, 0, mode)


def r_multiply(maps, x) -> np.ndarray:
    """Apply the ordered mode maps ``(A1, ..., Ai)`` to the array ``x``.

    ``Aj`` must be ``qj x mj`` with ``mj`` the j-th dimension of ``x``; the
    result has shape ``(q1, ..., qi)``.  With a single mode this is the
    ordinary matrix-vector product; with two modes it is ``A1 @ X @ A2.T``.
    """
    x = as_array(x)
    out = x
    for j, a in enumerate(_checked_maps(maps, x)):
        out = apply_mode(a, j, out)
    return out


def r_multiply_oracle(maps, x) -> np.ndarray:
    """Reference evaluation of :func:`r_multiply` straight from the nested sum.

    Exponential in the order; use only to verify the fast path on tiny inputs.
    """
    x = as_array(x)
    ms = _checked_maps(maps, x)
    out_shape = tuple(a.shape[0] for a in ms)
    out = np.zeros(out_shape)
    for q in np.ndindex(out_shape):
        acc = 0.0
        for r in np.ndindex(x.shape):
            coeff = 1.0
            for a, qj, rj in zip(ms, q, r):
                coeff *= a[qj, rj]
            acc += coeff * x[r]
        out[q] = acc
    return out


def monolinear_equiv_check(maps, x) -> float:
    """Max-abs gap between the mode-wise product and its monolinear form.

    Compares ``rvec(r_multiply(maps, x))`` against the expanded chain matrix
    applied to ``rvec(x)``; on well-scaled inputs the gap stays below 1e-10.
    """
    x = as_array(x)
    ms = _checked_maps(maps, x)
    lhs = rvec(r_multiply(ms, x))
    rhs = inv_kron_chain(ms) @ rvec(x)
    return float(np.max(np.abs(lhs - rhs)))


def composition_check(maps_a, maps_b, x) -> float:
    """Max-abs gap between sequential application and product-map application.

    Applies ``maps_b`` then ``maps_a`` and compares with applying the per-mode
    products ``Aj @ Bj`` once.
    """
    x = as_array(x)
    inner = r_multiply(maps_b, x)
    lhs = r_multiply(maps_a, inner)
    prod_maps = [linalg.matmul(a, b) for a, b in zip(maps_a, maps_b)]
    rhs = r_multiply(prod_maps, x)
    return float(np.max(np.abs(lhs - rhs)))


def multilinear_lstsq(maps, y) -> np.ndarray:
    """Least-squares recovery of ``x`` from ``y ~ r_multiply(maps, x)``.

    Applies the left inverse ``(Aj'Aj)^{-1}Aj'`` of every mode map to ``y``,
    which minimizes the squared residual norm over all arrays ``x``.  Each
    map must have full column rank (``qj >= mj``); for square non-singular
    maps the recovery is exact.
    """
    y = as_array(y)
    ms = _checked_maps_lstsq(maps, y)
    inv_maps = []
    for j, a in enumerate(ms, start=1):
        try:
            inv_maps.append(linalg.l_inverse(a))
        except SingularMatrixError as exc:
            raise SingularMatrixError(f"mode {j}: map is rank deficient") from exc
    return r_multiply(inv_maps, y)


def _checked_maps_lstsq(maps, y):
    # same conformability rule as r_multiply, but against the output side:
    # map j is qj x mj and y has dimension qj along mode j
    ms = [linalg.as_matrix(a) for a in maps]
    if len(ms) != y.ndim:
        raise ValueError(f"{len(ms)} mode maps for an array of order {y.ndim}")
    for j, a in enumerate(ms, start=1):
        if a.shape[0] != y.shape[j - 1]:
            raise ValueError(
                f"mode {j}: map has {a.shape[0]} rows, observed array dimension is {y.shape[j - 1]}"
            )
    return ms


def lstsq_residual(maps, y, x) -> float:
    """Squared residual norm ``||y - r_multiply(maps, x)||^2``."""
    return sq_norm(as_array(y) - r_multiply(maps, x))
