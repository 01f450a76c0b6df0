"""Exact log-densities for multiway normal, elliptical and t laws.

A Kronecker model couples a location array ``M`` with one non-singular
``mj x mj`` factor per mode.  Densities are evaluated by standardizing
(undoing the per-mode maps and the shift), feeding the squared norm of the
standardized array to a spherical kernel pdf, and subtracting the log volume
change of the multilinear transform.  Everything is computed and exposed in
log space; :func:`density` exponentiates as a convenience but underflows for
large arrays.
"""

import math

import numpy as np
from scipy.special import gammaln

from . import linalg
from .array_core import as_array, rvec, sq_norm
from .errors import SingularMatrixError
from .multilinear import apply_mode, r_multiply

LOG_2PI = math.log(2.0 * math.pi)


class Kernel:
    """Spherical kernel pdf family: the scalar profile f(t) with t = x'x.

    Variants
    --------
    ``Kernel.normal()``
        ``f(t) = (2 pi)^(-k/2) exp(-t/2)`` in dimension k.
    ``Kernel.student_t(df)``
        ``f(t) = Gamma((df+k)/2) / (Gamma(df/2) (df pi)^(k/2)) (1 + t/df)^(-(df+k)/2)``.
    ``Kernel.cauchy()``
        Alias for ``student_t(1)``.
    ``Kernel.custom(profile, log_normalizer)``
        ``f(t) = exp(log_normalizer(k)) * profile(t)``.  The caller supplies
        the dimension-dependent normalizer; nothing is normalized numerically,
        and no sampler exists for custom kernels.
    """

    def __init__(self, name, df=None, profile=None, log_normalizer=None):
        if name not in ("normal", "t", "cauchy", "custom"):
            raise ValueError(f"unknown kernel {name!r}")
        if name == "t":
            if df is None or not df > 0:
                raise ValueError(f"t kernel needs degrees of freedom > 0, got {df!r}")
            df = float(df)
        elif name == "cauchy":
            df = 1.0
        elif name == "custom":
            if profile is None or log_normalizer is None:
                raise ValueError("custom kernel needs a profile and a log_normalizer")
        self.name = name
        self.df = df
        self.profile = profile
        self.log_normalizer = log_normalizer

    @classmethod
    def normal(cls):
        return cls("normal")

    @classmethod
    def student_t(cls, df):
        return cls("t", df=df)

    @classmethod
    def cauchy(cls):
        return cls("cauchy")

    @classmethod
    def custom(cls, profile, log_normalizer):
        return cls("custom", profile=profile, log_normalizer=log_normalizer)

    @classmethod
    def from_name(cls, name, df=None):
        """Build a kernel from its command-line name: normal, t or cauchy."""
        if name == "normal":
            return cls.normal()
        if name == "t":
            return cls.student_t(df)
        if name == "cauchy":
            return cls.cauchy()
        raise ValueError(f"unknown kernel {name!r}")

    def __repr__(self):
        if self.name == "t":
            return f"Kernel.student_t({self.df})"
        return f"Kernel.{self.name}()"


def log_kernel_pdf(kernel, t, k):
    """Log of the spherical kernel density at squared radius ``t`` in dimension ``k``.

    ``t`` may be a scalar or an ndarray; the value is the density of the
    k-variate spherical law at any point x with ``x'x == t``.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("squared radius t must be >= 0")
    k = int(k)
    if k < 1:
        raise ValueError(f"dimension k must be >= 1, got {k}")
    if kernel.name == "normal":
        out = -0.5 * k * LOG_2PI - 0.5 * t
    elif kernel.name in ("t", "cauchy"):
        v = kernel.df
        out = (
            gammaln(0.5 * (v + k))
            - gammaln(0.5 * v)
            - 0.5 * k * math.log(v * math.pi)
            - 0.5 * (v + k) * np.log1p(t / v)
        )
    else:
        out = kernel.log_normalizer(k) + np.log(kernel.profile(t))
    return out if out.ndim else float(out)


def kernel_pdf(kernel, t, k):
    """Spherical kernel density value; see :func:`log_kernel_pdf`."""
    return np.exp(log_kernel_pdf(kernel, t, k))


def radial_pdf(kernel, r, k):
    """Density of the radius ``r = sqrt(x'x)`` of a k-variate spherical draw.

    Equals ``2 pi^(k/2) / Gamma(k/2) * r^(k-1) * f(r^2)``: the kernel value on
    the sphere of radius r times the sphere's surface area.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius r must be >= 0")
    k = int(k)
    if k < 1:
        raise ValueError(f"dimension k must be >= 1, got {k}")
    surface = math.exp(math.log(2.0) + 0.5 * k * math.log(math.pi) - gammaln(0.5 * k))
    out = surface * r ** (k - 1) * kernel_pdf(kernel, r * r, k)
    return out if out.ndim else float(out)


class KroneckerModel:
    """Location array plus one non-singular square factor per mode plus a kernel.

    Validates shapes and non-singularity up front and caches the factor
    inverses and the log Jacobian, which every density evaluation needs.
    """

    def __init__(self, mean, factors, kernel):
        mean = as_array(mean)
        factors = [linalg.as_matrix(f) for f in factors]
        if len(factors) != mean.ndim:
            raise ValueError(f"{len(factors)} factors for a mean array of order {mean.ndim}")
        inv_factors = []
        for j, f in enumerate(factors, start=1):
            mj = mean.shape[j - 1]
            if f.shape != (mj, mj):
                raise ValueError(f"mode {j}: factor must be {mj}x{mj}, got {f.shape[0]}x{f.shape[1]}")
            try:
                inv_factors.append(linalg.inverse(f))
            except SingularMatrixError as exc:
                raise SingularMatrixError(f"mode {j}: factor is singular") from exc
        self.mean = mean
        self.factors = tuple(factors)
        self.kernel = kernel
        self.inv_factors = tuple(inv_factors)
        self.log_jac = log_jacobian(self.factors)

    @property
    def shape(self):
        return self.mean.shape

    @property
    def order(self):
        return self.mean.ndim

    @property
    def m(self):
        return self.mean.size

    def __repr__(self):
        return f"KroneckerModel(shape={self.shape}, kernel={self.kernel!r})"


def log_jacobian(factors, squared=False) -> float:
    """Log volume change of the per-mode transform: sum_j (m/mj) log |det Aj|.

    This is the log of the determinant of the expanded factor chain, computed
    factor by factor so the multiplicative exponents never overflow.  With
    ``squared`` the value doubles (the covariance ``K K'`` scale).
    """
    factors = [linalg.as_matrix(f) for f in factors]
    if not factors:
        raise ValueError("factor list must be non-empty")
    dims = []
    for j, f in enumerate(factors, start=1):
        if f.shape[0] != f.shape[1]:
            raise ValueError(f"factor {j} must be square, got {f.shape[0]}x{f.shape[1]}")
        dims.append(f.shape[0])
    m = math.prod(dims)
    total = 0.0
    for j, (f, mj) in enumerate(zip(factors, dims), start=1):
        try:
            total += (m // mj) * linalg.logabsdet(f)
        except SingularMatrixError as exc:
            raise SingularMatrixError(f"mode {j}: factor is singular") from exc
    return 2.0 * total if squared else total


def standardize(model, x) -> np.ndarray:
    """Undo the model's shift and per-mode maps: ``(A1^-1, ...) applied to (x - M)``.

    Inverted exactly by ``r_multiply(model.factors, z) + model.mean``.
    """
    x = as_array(x)
    if x.shape != model.shape:
        raise ValueError(f"array shape {x.shape} does not match model shape {model.shape}")
    return r_multiply(model.inv_factors, x - model.mean)


def logpdf_normal(model, x) -> float:
    """Log-density of the multiway normal law with the model's location and factors."""
    z = standardize(model, x)
    return -0.5 * sq_norm(z) - 0.5 * model.m * LOG_2PI - model.log_jac


def logpdf_elliptical(model, x) -> float:
    """Log-density of the elliptically contoured law driven by the model's kernel.

    The value depends on ``x`` only through the squared norm of the
    standardized array, evaluated by the kernel at dimension ``m``.
    """
    z = standardize(model, x)
    return float(log_kernel_pdf(model.kernel, sq_norm(z), model.m)) - model.log_jac


def logpdf_t(model, x, df) -> float:
    """Log-density of the multiway t law with ``df`` degrees of freedom.

    Identical to :func:`logpdf_elliptical` with a ``student_t(df)`` kernel;
    the ``1/df`` inside the quadratic term and the ``(df pi)^(m/2)`` in the
    normalizer are required for the one-cell case to reduce to the univariate
    Student t.
    """
    if not df > 0:
        raise ValueError(f"degrees of freedom must be > 0, got {df!r}")
    z = standardize(model, x)
    return float(log_kernel_pdf(Kernel.student_t(df), sq_norm(z), model.m)) - model.log_jac


def logpdf_elliptical_rvecs(model, rows) -> np.ndarray:
    """Vectorized :func:`logpdf_elliptical` over stacked draws.

    ``rows`` is an ``(n, m)`` matrix whose rows are rvec'd arrays; returns the
    n log-densities.
    """
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != model.m:
        raise ValueError(f"expected an (n, {model.m}) matrix of stacked arrays, got {rows.shape}")
    n = rows.shape[0]
    if n == 0:
        return np.empty(0)
    centered = rows - rvec(model.mean)[None, :]
    # batch as a trailing axis so the per-mode maps leave it untouched
    batch = centered.T.reshape(*model.shape, n, order="F")
    for j, a in enumerate(model.inv_factors):
        batch = apply_mode(a, j, batch)
    q = batch.reshape(model.m, n, order="F")
    q = np.einsum("ij,ij->j", q, q)
    return np.asarray(log_kernel_pdf(model.kernel, q, model.m)) - model.log_jac


def density(model, x) -> float:
    """Plain density value ``exp(logpdf_elliptical(model, x))``.

    Convenience only: overflow/underflow-prone as the cell count grows; work
    in log space whenever values are combined.
    """
    return math.exp(logpdf_elliptical(model, x))
