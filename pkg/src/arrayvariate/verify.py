"""Monte Carlo verification harness.

Three checks, each yielding a :class:`McReport`:

* normalization — importance-sample the density integral; pass when the
  estimate sits within 3 standard errors of 1;
* covariance — compare the sample covariance of stacked draws against the
  model's implied covariance entrywise; pass when the worst entry stays
  within 5 standard errors;
* radial — Kolmogorov-Smirnov test of sampled radii against the CDF obtained
  by adaptive quadrature of the radial density; pass when p >= 0.01.

Thresholds are loose enough that a fixed-seed suite false-fails rarely;
every report reproduces exactly from (name, seed, n).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, stats

from .array_core import rvec
from .densities import logpdf_elliptical_rvecs, radial_pdf
from .kronecker import inv_kron_chain
from .sampling import sample_elliptical_rvecs, sample_radii

MAX_NORMALIZATION_CELLS = 6
MAX_COVARIANCE_CELLS = 16
KS_ALPHA = 0.01
MOMENT_Z_LIMIT = 3.0
COVARIANCE_Z_LIMIT = 5.0


@dataclass
class McReport:
    """One verification result, serializable as a single text record."""

    name: str
    estimate: float
    stderr: float
    target: float
    statistic: float
    passed: bool
    n: int
    seed: int

    def line(self) -> str:
        """``name estimate stderr target statistic passed n seed``"""
        return (
            f"{self.name} {self.estimate:.17g} {self.stderr:.17g} {self.target:.17g} "
            f"{self.statistic:.17g} {'pass' if self.passed else 'fail'} {self.n} {self.seed}"
        )


def _model_tag(model) -> str:
    kernel = model.kernel.name
    if kernel == "t":
        kernel = f"t{model.kernel.df:g}"
    return f"{kernel}-{'x'.join(str(d) for d in model.shape)}"


def check_normalization(model, n, stream) -> McReport:
    """Importance-sampling estimate of the density integral (target 1).

    Proposal: for the normal kernel a Gaussian centered at the location with
    covariance ``4 K K'`` (twice the scale, so weights stay bounded); for t
    kernels a multivariate t with the same degrees of freedom and the doubled
    scale.  Guarded at m <= 6 where the estimate is reliable at moderate n.
    """
    m = model.m
    if m > MAX_NORMALIZATION_CELLS:
        raise ValueError(f"cell count {m} exceeds the normalization guard ({MAX_NORMALIZATION_CELLS})")
    n = int(n)
    if n < 2:
        raise ValueError("need at least 2 samples")
    gen = stream.generator
    k = inv_kron_chain(model.factors)
    mu = rvec(model.mean)
    if model.kernel.name == "normal":
        z = gen.standard_normal((n, m))
        draws = mu[None, :] + 2.0 * (z @ k.T)
        # proposal density evaluated through z: (2K)^{-1}(y - mu) is z itself
        _, logdet_k = np.linalg.slogdet(k)
        log_q = -0.5 * np.einsum("ij,ij->i", z, z) - 0.5 * m * math.log(2 * math.pi) \
            - (m * math.log(2.0) + logdet_k)
    elif model.kernel.name in ("t", "cauchy"):
        proposal = stats.multivariate_t(loc=mu, shape=4.0 * (k @ k.T), df=model.kernel.df)
        draws = np.atleast_1d(proposal.rvs(size=n, random_state=gen)).reshape(n, m)
        log_q = proposal.logpdf(draws)
    else:
        raise ValueError(f"no importance proposal for {model.kernel.name!r} kernels")
    log_w = logpdf_elliptical_rvecs(model, draws) - log_q
    w = np.exp(log_w)
    estimate = float(np.mean(w))
    stderr = float(np.std(w, ddof=1) / math.sqrt(n))
    z_score = (estimate - 1.0) / stderr if stderr > 0 else 0.0
    return McReport(
        name=f"normalization-{_model_tag(model)}",
        estimate=estimate,
        stderr=stderr,
        target=1.0,
        statistic=z_score,
        passed=abs(z_score) <= MOMENT_Z_LIMIT,
        n=n,
        seed=stream.seed,
    )


def implied_covariance(model) -> np.ndarray:
    """Covariance of the stacked draw implied by the model's kernel and factors."""
    k = inv_kron_chain(model.factors)
    base = k @ k.T
    if model.kernel.name == "normal":
        return base
    if model.kernel.name in ("t", "cauchy"):
        v = model.kernel.df
        if v <= 2:
            raise ValueError(f"t kernel with df={v:g} has no finite covariance")
        return (v / (v - 2.0)) * base
    raise ValueError(f"no covariance target for {model.kernel.name!r} kernels")


def check_covariance(model, n, stream) -> McReport:
    """Entrywise sample-covariance check against the implied covariance.

    The statistic is the worst entrywise deviation in units of its own
    empirical standard error; the reported estimate/target pair is that
    worst entry.  Guarded at m <= 16.
    """
    m = model.m
    if m > MAX_COVARIANCE_CELLS:
        raise ValueError(f"cell count {m} exceeds the covariance guard ({MAX_COVARIANCE_CELLS})")
    n = int(n)
    if n < 2:
        raise ValueError("need at least 2 samples")
    target = implied_covariance(model)
    rows = sample_elliptical_rvecs(model, n, stream)
    centered = rows - rows.mean(axis=0)[None, :]
    sample_cov = centered.T @ centered / (n - 1)
    # empirical stderr of each covariance entry: std of the products c_i c_j
    sq = centered * centered
    second = sq.T @ sq / n
    var_prod = second - (centered.T @ centered / n) ** 2
    se = np.sqrt(np.maximum(var_prod, 1e-300) / n)
    ratios = np.abs(sample_cov - target) / se
    worst = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
    statistic = float(ratios[worst])
    return McReport(
        name=f"covariance-{_model_tag(model)}",
        estimate=float(sample_cov[worst]),
        stderr=float(se[worst]),
        target=float(target[worst]),
        statistic=statistic,
        passed=statistic <= COVARIANCE_Z_LIMIT,
        n=n,
        seed=stream.seed,
    )


def _radial_integrand(kernel, m):
    """Scalar-math radial density (the :func:`radial_pdf` formula) for quadrature."""
    log_surface = math.log(2.0) + 0.5 * m * math.log(math.pi) - math.lgamma(0.5 * m)
    if kernel.name == "normal":
        c = math.exp(log_surface - 0.5 * m * math.log(2.0 * math.pi))
        return lambda r: c * r ** (m - 1) * math.exp(-0.5 * r * r)
    if kernel.name in ("t", "cauchy"):
        v = kernel.df
        c = math.exp(
            log_surface
            + math.lgamma(0.5 * (v + m))
            - math.lgamma(0.5 * v)
            - 0.5 * m * math.log(v * math.pi)
        )
        p = -0.5 * (v + m)
        return lambda r: c * r ** (m - 1) * (1.0 + r * r / v) ** p
    return lambda r: radial_pdf(kernel, r, m)


def radial_cdf(kernel, m):
    """CDF of the radial law by adaptive quadrature of :func:`radial_pdf`.

    Returns a callable accepting scalars or arrays; array input is integrated
    segment by segment in sorted order, so evaluating the CDF at a whole
    sample costs one short quadrature per distinct point.
    """
    pdf = _radial_integrand(kernel, m)

    def cdf(r):
        arr = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.empty_like(arr)
        order = np.argsort(arr)
        total = 0.0
        prev = 0.0
        for idx in order:
            ri = arr[idx]
            if ri < 0:
                raise ValueError("radius must be >= 0")
            if ri > prev:
                seg, _ = integrate.quad(pdf, prev, ri, epsabs=1e-11, epsrel=1e-9)
                total += seg
                prev = ri
            out[idx] = total
        out = np.clip(out, 0.0, 1.0)
        return out if np.ndim(r) else float(out[0])

    return cdf


def check_radial(kernel, m, n, stream) -> McReport:
    """KS test of sampled radii against the quadrature CDF of the radial law.

    estimate = p-value, target = the rejection level, statistic = KS distance.
    """
    n = int(n)
    if n < 2:
        raise ValueError("need at least 2 samples")
    radii = sample_radii(kernel, m, n, stream)
    result = stats.ks_1samp(radii, radial_cdf(kernel, m))
    kernel_tag = kernel.name if kernel.name != "t" else f"t{kernel.df:g}"
    return McReport(
        name=f"radial-{kernel_tag}-m{m}",
        estimate=float(result.pvalue),
        stderr=0.0,
        target=KS_ALPHA,
        statistic=float(result.statistic),
        passed=bool(result.pvalue >= KS_ALPHA),
        n=n,
        seed=stream.seed,
    )


def run_suite(model, n, stream) -> list:
    """All applicable checks for the model, on independent child streams.

    Check order is fixed (normalization, covariance, radial) and each runs on
    ``stream.split(i)``, so the suite reproduces exactly from the master seed.
    """
    reports = []
    task = 0
    if model.m <= MAX_NORMALIZATION_CELLS and model.kernel.name in ("normal", "t", "cauchy"):
        reports.append(check_normalization(model, n, stream.split(task)))
    task += 1
    has_cov = model.kernel.name == "normal" or (
        model.kernel.name in ("t", "cauchy") and model.kernel.df > 2
    )
    if model.m <= MAX_COVARIANCE_CELLS and has_cov:
        reports.append(check_covariance(model, n, stream.split(task)))
    task += 1
    if model.kernel.name in ("normal", "t", "cauchy"):
        reports.append(check_radial(model.kernel, model.m, n, stream.split(task)))
    if not reports:
        raise ValueError("no verification check applies to this model")
    return reports
