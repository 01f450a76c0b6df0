"""Exact samplers built on the spherical representation ``x = r * u``.

A spherical draw splits into an independent radius ``r`` (kernel-specific
law) and a direction ``u`` uniform on the unit sphere; the elliptical array
sampler pushes ``r * u`` through the model's per-mode factors and adds the
location.  For the normal kernel the radius is a chi draw; for the t kernel
it is a Gaussian norm over a scaled chi, which is exact (no quadrature or
inversion anywhere).
"""

from typing import NamedTuple

import numpy as np

from .array_core import rvec, shape_size, unrvec
from .multilinear import apply_mode

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class RandomStream:
    """Deterministic random source: a 64-bit seed plus opaque counter state.

    The same seed reproduces the same sample sequence bitwise (single
    threaded).  A stream has a single owner; parallel tasks each get their own
    child via :meth:`split`, never a shared stream.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self.generator = np.random.default_rng(self.seed)

    def split(self, task_index: int) -> "RandomStream":
        """Independent child stream for task ``task_index``.

        Child seed is ``splitmix64(seed + (task_index + 1) * 0x9E3779B97F4A7C15)``:
        a fixed 64-bit mix, so (seed, task index) always maps to the same child.
        """
        if task_index < 0:
            raise ValueError("task index must be >= 0")
        return RandomStream(_splitmix64(self.seed + (task_index + 1) * _GOLDEN))

    def __repr__(self):
        return f"RandomStream(seed={self.seed})"


class SphericalDraw(NamedTuple):
    """One spherical draw: nonnegative radius and unit direction in R^m."""

    r: float
    u: np.ndarray


def sample_std_normal_array(shape, stream) -> np.ndarray:
    """Array of the given shape with i.i.d. standard normal cells."""
    m = shape_size(shape)
    return unrvec(stream.generator.standard_normal(m), shape)


def sample_sphere(m, stream) -> np.ndarray:
    """Uniform draw on the unit sphere in R^m: a normalized Gaussian vector."""
    if m < 1:
        raise ValueError(f"dimension must be >= 1, got {m}")
    while True:
        z = stream.generator.standard_normal(m)
        norm = float(np.linalg.norm(z))
        if norm > 0.0:
            return z / norm


def sample_radius(kernel, m, stream) -> float:
    """One radius draw for the kernel's spherical law in dimension m.

    Normal kernel: ``sqrt(chi2_m)``.  t kernel with df v: ``||z|| / sqrt(w/v)``
    with z an m-variate standard normal and w a chi2_v draw.
    """
    if m < 1:
        raise ValueError(f"dimension must be >= 1, got {m}")
    gen = stream.generator
    if kernel.name == "normal":
        return float(np.sqrt(gen.chisquare(m)))
    if kernel.name in ("t", "cauchy"):
        z = gen.standard_normal(m)
        w = gen.chisquare(kernel.df)
        return float(np.linalg.norm(z) / np.sqrt(w / kernel.df))
    raise NotImplementedError(f"no radial sampler for {kernel.name!r} kernels")


def sample_radii(kernel, m, n, stream) -> np.ndarray:
    """Vectorized :func:`sample_radius`: n radii in one call."""
    if m < 1:
        raise ValueError(f"dimension must be >= 1, got {m}")
    gen = stream.generator
    if kernel.name == "normal":
        return np.sqrt(gen.chisquare(m, size=n))
    if kernel.name in ("t", "cauchy"):
        z = gen.standard_normal((n, m))
        w = gen.chisquare(kernel.df, size=n)
        return np.linalg.norm(z, axis=1) / np.sqrt(w / kernel.df)
    raise NotImplementedError(f"no radial sampler for {kernel.name!r} kernels")


def sample_spherical(kernel, m, stream) -> SphericalDraw:
    """One (radius, direction) pair of the kernel's spherical law."""
    return SphericalDraw(sample_radius(kernel, m, stream), sample_sphere(m, stream))


def sample_elliptical_rvecs(model, n, stream) -> np.ndarray:
    """n draws from the model, stacked: row j is ``rvec`` of the j-th array.

    Each row realizes ``r * u`` from one Gaussian vector (direction = the
    normalized vector, radius = its norm rescaled for the kernel), then gets
    the per-mode factors applied and the location added.
    """
    n = int(n)
    if n < 0:
        raise ValueError(f"draw count must be >= 0, got {n}")
    m = model.m
    gen = stream.generator
    if n == 0:
        return np.empty((0, m))
    z = gen.standard_normal((n, m))
    norms = np.linalg.norm(z, axis=1)
    norms[norms == 0.0] = 1.0  # measure-zero guard
    u = z / norms[:, None]
    if model.kernel.name == "normal":
        radii = norms
    elif model.kernel.name in ("t", "cauchy"):
        v = model.kernel.df
        w = gen.chisquare(v, size=n)
        radii = norms / np.sqrt(w / v)
    else:
        raise NotImplementedError(f"no sampler for {model.kernel.name!r} kernels")
    spherical = u * radii[:, None]
    # batch as a trailing axis; the per-mode factors never touch it
    batch = spherical.T.reshape(*model.shape, n, order="F")
    for j, a in enumerate(model.factors):
        batch = apply_mode(a, j, batch)
    return batch.reshape(m, n, order="F").T + rvec(model.mean)[None, :]


def sample_elliptical(model, n, stream) -> list:
    """n draws from the model as a list of arrays of the model's shape."""
    rows = sample_elliptical_rvecs(model, n, stream)
    return [unrvec(row, model.shape) for row in rows]
