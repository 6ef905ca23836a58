"""Convergence thresholds, predicates and boundary curves for the W series.

Real thresholds come back as ``Threshold`` records carrying the residual of
their defining equation. Complex domains are sampled into ``BoundaryCurve``
records: lower half-plane first, then the conjugate upper half, ordered by
argument so that the curve can be drawn as one polyline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

import db
from combinatorics import stirling_cycle
from errors import BracketError, ConfigError, DomainError, SingularityError
from numerics import bisect, golden_section_min, is_complex, to_mp, windowed_error
from oracle import lambert_w, omega_constant
from series import SeriesSpec, SeriesVariables, transformed_w

__all__ = [
    "Threshold",
    "BoundaryCurve",
    "ConvergenceVerdict",
    "AlphaDomain",
    "SingularPoints",
    "lemma_threshold",
    "comtet_converges",
    "comtet_real_threshold",
    "comtet_divergence_interval",
    "comtet_complex_boundary",
    "improved_radius",
    "improved_converges",
    "u_series_converges",
    "alpha_domain",
    "sigma_c",
    "alpha_c",
    "sigma1",
    "sigma1_approx",
    "x_of_alpha_max",
    "improved_complex_boundary",
    "transformed_comtet_threshold",
    "transformed_comtet_converges",
    "transformed_improved_threshold",
    "transformed_comtet_boundary",
    "transformed_improved_boundary",
    "wright_radius",
    "wright_converges",
    "wright_singularities",
    "singular_points",
    "sigma_series_necessary_bound",
    "stirling_ratio_limits",
    "TruncationTrend",
    "truncation_trend",
    "series_trend",
]

THRESHOLD_KINDS = (
    'x_alpha', 'z_p', 'sigma1', 'sigma_alpha', 'sigma_c', 'alpha_c', 'mu_alpha', 'nu_alpha',
    'eta0', 'lemma_b', 'radius_tau', 'wright_radius', 'sigma_series_bound', 'comtet_bound',
)
THRESHOLD_MODES = ('exact', 'approx')

# Open-interval margin for eta in (0, pi)
EDGE = 1e-12

# Divergence witnesses compare tail-windowed errors at these truncations
TREND_CHECKPOINTS = (20, 40, 60)
TREND_WINDOW = 5


@dataclass(frozen=True)
class Threshold:
    """A computed constant and the residual of the equation that defines it."""

    value: object
    kind: str
    residual: object = 0
    note: str = ''

    def __post_init__(self):
        if self.kind not in THRESHOLD_KINDS:
            raise ConfigError(f"unknown threshold kind {self.kind!r}")


@dataclass(frozen=True)
class ConvergenceVerdict:
    """Outcome of a convergence predicate; ``margin`` > 0 means inside."""

    converges: bool
    governing: Tuple[Threshold, ...]
    margin: object = 0

    def __bool__(self) -> bool:
        return self.converges


@dataclass(frozen=True)
class BoundaryCurve:
    """Samples (Re z, Im z) of a convergence boundary with per-sample residuals."""

    samples: Tuple[Tuple[object, object], ...]
    source: str
    parameters: Tuple = ()
    residuals: Tuple = ()
    metadata: Dict[str, object] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.samples)

    def points(self) -> List:
        return [mpmath.mpc(x, y) for x, y in self.samples]

    def max_residual(self):
        return max(self.residuals) if self.residuals else mpmath.mpf(0)

    def real_axis_limit(self):
        """Re z of the sample closest to the positive real axis."""
        x, _ = min(self.samples, key=lambda s: (abs(s[1]), -s[0]))
        return x

    def is_conjugate_symmetric(self, tol: float = 1e-12) -> bool:
        pts = sorted((float(x), float(y)) for x, y in self.samples)
        mirrored = sorted((float(x), -float(y)) for x, y in self.samples)
        return all(
            abs(a[0] - b[0]) <= tol * max(1.0, abs(a[0])) and abs(a[1] - b[1]) <= tol * max(1.0, abs(a[1]))
            for a, b in zip(pts, mirrored)
        )


@dataclass(frozen=True)
class AlphaDomain:
    """Which of the three regimes alpha falls in, with its thresholds.

    ``i``: converges for 0 < sigma < sigma_alpha.
    ``ii``: converges for every sigma > 0.
    ``iii``: diverges for mu_alpha < sigma < nu_alpha only.
    """

    alpha: object
    case: str
    thresholds: Tuple[Threshold, ...]
    flagged: bool = False

    def threshold(self, kind: str) -> Threshold:
        for t in self.thresholds:
            if t.kind == kind:
                return t
        raise KeyError(f"case {self.case} has no {kind} threshold")

    def converges(self, sigma) -> bool:
        sigma = to_mp(sigma)
        if sigma <= 0:
            raise DomainError(f"sigma must be positive, got {sigma}")
        if self.case == 'i':
            return sigma < self.threshold('sigma_alpha').value
        if self.case == 'ii':
            return True
        return not (self.threshold('mu_alpha').value < sigma < self.threshold('nu_alpha').value)


@dataclass(frozen=True)
class SingularPoints:
    """The two singular points of u(tau) nearest the origin and their images."""

    tau0: object
    tau1: object
    u0: object
    u1: object
    s0: object
    s1: object


# === eta0 and the Lambert W lemma ===

def _eta0(c) -> Threshold:
    """Root of eta*cot(eta) = c on (0, pi), for c < 1."""
    c = to_mp(c)
    if c >= 1:
        raise DomainError(f"eta*cot(eta) = c has a root in (0, pi) only for c < 1, got {c}")

    def f(eta):
        return eta * mpmath.cot(eta) - c

    lo = mpmath.mpf(EDGE)
    if f(lo) <= 0:
        # c within EDGE^2 of 1, where eta*cot(eta) ~ 1 - eta^2/3
        eta = mpmath.sqrt(3 * (1 - c))
        return Threshold(eta, 'eta0', abs(f(eta)))
    eta, residual = bisect(f, lo, mpmath.pi - EDGE, tol=0)
    return Threshold(eta, 'eta0', residual)


def lemma_threshold(a) -> Threshold:
    """b such that Re W_-1(x) > a exactly when x < b."""
    a = to_mp(a)
    if a <= -1:
        return Threshold(a * mpmath.exp(a), 'lemma_b')
    eta = _eta0(-a)
    b = -eta.value / mpmath.sin(eta.value) * mpmath.exp(a)
    return Threshold(b, 'lemma_b', eta.residual, note=f"eta0={mpmath.nstr(eta.value, 17)}")


# === Comtet series ===

def comtet_converges(variables: SeriesVariables) -> ConvergenceVerdict:
    """ln|sigma| < 1 - Re(lambda) + min over m in {-1, 0} of Re W_m(-e^(lambda-1))."""
    sigma, tau = to_mp(variables.sigma), to_mp(variables.tau)
    if sigma == 0:
        raise DomainError("the Comtet predicate needs sigma != 0")
    lam = tau / sigma
    y = mpmath.mpc(-mpmath.exp(lam - 1))
    bound = 1 - mpmath.re(lam) + min(mpmath.re(lambert_w(m, y)) for m in (-1, 0))
    lhs = mpmath.log(abs(sigma))
    return ConvergenceVerdict(bool(lhs < bound), (Threshold(bound, 'comtet_bound'),), bound - lhs)


def comtet_real_threshold(alpha) -> Threshold:
    """x_alpha: the untransformed Comtet series converges for x > x_alpha."""
    a = to_mp(alpha)
    if a <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if a <= 1:
        return Threshold((mpmath.e / a) ** a, 'x_alpha')
    eta = _eta0(1 - mpmath.log(a))
    return Threshold(mpmath.exp(a * eta.value / mpmath.sin(eta.value)), 'x_alpha', eta.residual)


def comtet_divergence_interval(alpha) -> Tuple:
    """An interval of x on which the Comtet series certainly diverges."""
    a = abs(to_mp(alpha))
    if a == 0:
        raise DomainError("alpha must be non-zero")
    b = lambert_w(0, 1 / a) if a < 1 / mpmath.e else mpmath.mpf(1)
    return mpmath.exp(-a), mpmath.exp(b * a)


def transformed_comtet_threshold(p) -> Threshold:
    """z_p: the p-transformed Comtet series converges for z > z_p."""
    p = to_mp(p)
    if p <= 0:
        return Threshold(mpmath.exp(1 - 2 * p), 'z_p')
    eta = _eta0(1 - p)
    return Threshold(mpmath.exp(-p + eta.value / mpmath.sin(eta.value)), 'z_p', eta.residual,
                     note=f"eta0={mpmath.nstr(eta.value, 17)}")


def transformed_comtet_converges(z, p=0) -> ConvergenceVerdict:
    """Re W_m(-e^(p-1) (p + ln z)) > p - 1.

    m = -1 below the real axis and m = 1 above it; on the real axis the
    smaller of W_-1 and W_0 is used.
    """
    if is_complex(p):
        raise DomainError("the transformed Comtet predicate takes a real p")
    p = to_mp(p)
    zz = to_mp(z)
    L = p + mpmath.log(zz)
    if L == 0:
        raise SingularityError(f"p + ln z vanishes at z = {mpmath.nstr(zz, 10)}")
    y = mpmath.mpc(-mpmath.exp(p - 1) * L)
    if mpmath.im(zz) == 0:
        value = min(mpmath.re(lambert_w(m, y)) for m in (-1, 0))
    else:
        value = mpmath.re(lambert_w(-1 if mpmath.im(zz) < 0 else 1, y))
    bound = p - 1
    return ConvergenceVerdict(bool(value > bound), (Threshold(bound, 'comtet_bound'),), value - bound)


# === Improved series ===

def improved_radius(sigma) -> Threshold:
    """tau*(sigma): radius of convergence of u as a power series in tau."""
    if sigma == -1:
        return Threshold(mpmath.mpf(0), 'radius_tau', note='degenerate: the series diverges everywhere')
    if sigma == 0:
        return Threshold(mpmath.mpf(1), 'radius_tau')
    s = to_mp(sigma)
    if is_complex(s) and mpmath.im(s) != 0:
        sign = -1 if mpmath.im(s) < 0 else 1
        value = abs(1 + s - s * mpmath.log(s) + sign * 1j * mpmath.pi * s)
        return Threshold(value, 'radius_tau')
    s = mpmath.re(s)
    if s > 0:
        value = mpmath.hypot(1 + s - s * mpmath.log(s), mpmath.pi * s)
    else:
        value = abs(1 + s - s * mpmath.log(-s))
    return Threshold(value, 'radius_tau')


def improved_converges(sigma, alpha=1) -> ConvergenceVerdict:
    """|sigma (ln alpha - ln sigma)| < tau*(sigma) for real sigma, alpha > 0."""
    s, a = to_mp(sigma), to_mp(alpha)
    if s <= 0 or a <= 0:
        raise DomainError(f"the improved predicate needs sigma > 0 and alpha > 0, got {sigma}, {alpha}")
    tau = abs(s * (mpmath.log(a) - mpmath.log(s)))
    radius = improved_radius(s)
    return ConvergenceVerdict(bool(tau < radius.value), (radius,), radius.value - tau)


def u_series_converges(variables: SeriesVariables, variant: str) -> ConvergenceVerdict:
    """Predicate for the u-series of ``variant`` at the given variables."""
    if variant == 'comtet':
        return comtet_converges(variables)
    if variant in ('improved', 'eulerian'):
        radius = improved_radius(variables.sigma)
        tau = abs(to_mp(variables.tau))
        return ConvergenceVerdict(bool(tau < radius.value), (radius,), radius.value - tau)
    raise ConfigError(f"no tau-series predicate for variant {variant!r}")


def _g_log(ell):
    """g(sigma) at sigma = e^ell."""
    return mpmath.sqrt(mpmath.pi ** 2 + (1 + mpmath.exp(-ell) - ell) ** 2)


def _sigma_alpha_log(log_alpha):
    """ln sigma_alpha, the root of ln sigma - g(sigma) = ln alpha (alpha < e)."""
    def f(ell):
        return ell - _g_log(ell) - log_alpha

    lo = mpmath.mpf(log_alpha)
    step = mpmath.mpf(1)
    for _ in range(db.get_int_setting('bisection_iterations')):
        if f(lo + step) > 0:
            break
        step *= 2
    else:
        raise BracketError(f"no sigma_alpha bracket for ln alpha = {mpmath.nstr(log_alpha, 10)}")
    return bisect(f, lo, lo + step)


def _mu_nu_log(log_alpha):
    """ln mu_alpha and ln nu_alpha, both roots of g(sigma) + ln sigma = ln alpha."""
    def psi(ell):
        return _g_log(ell) + ell - log_alpha

    lo = mpmath.log(mpmath.mpf('1e-3'))
    hi = mpmath.mpf(log_alpha)
    split = golden_section_min(psi, lo, hi)
    if psi(split) >= 0:
        raise BracketError(f"no divergence interval for ln alpha = {mpmath.nstr(log_alpha, 10)}")
    return bisect(psi, lo, split), bisect(psi, split, hi)


@lru_cache(maxsize=None)
def _critical(prec: int) -> Tuple[Threshold, Threshold]:
    with mpmath.workprec(prec):
        def h(s):
            A = 1 + 1 / s - mpmath.log(s)
            return A * mpmath.sqrt((1 + 1 / s) ** 2 - 1) - mpmath.pi

        s_c, residual = bisect(h, mpmath.mpf('0.5'), mpmath.mpf(2))
        g_c = _g_log(mpmath.log(s_c))
        a_c = s_c * mpmath.exp(g_c)
        a_residual = abs(mpmath.log(a_c) - mpmath.log(s_c) - g_c)
        return Threshold(s_c, 'sigma_c', residual), Threshold(a_c, 'alpha_c', a_residual)


def sigma_c() -> Threshold:
    """Minimizer of g(sigma) + ln sigma."""
    return _critical(mpmath.mp.prec)[0]


def alpha_c() -> Threshold:
    """sigma_c * exp(g(sigma_c)); above it the improved series has a divergence gap."""
    return _critical(mpmath.mp.prec)[1]


def alpha_domain(alpha) -> AlphaDomain:
    """Classify alpha into the three convergence regimes of the improved series."""
    a = to_mp(alpha)
    if a <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    s_c, a_c = sigma_c(), alpha_c()
    log_a = mpmath.log(a)

    if a < mpmath.e:
        ell, residual = _sigma_alpha_log(log_a)
        sigma = mpmath.exp(ell)
        return AlphaDomain(a, 'i', (
            Threshold(sigma, 'sigma_alpha', residual),
            Threshold(mpmath.exp(a / sigma), 'x_alpha', residual),
        ))
    if a <= a_c.value:
        flagged = a == mpmath.e or a == a_c.value
        return AlphaDomain(a, 'ii', (s_c, a_c), flagged)

    (ell_mu, r_mu), (ell_nu, r_nu) = _mu_nu_log(log_a)
    return AlphaDomain(a, 'iii', (
        Threshold(mpmath.exp(ell_mu), 'mu_alpha', r_mu),
        Threshold(mpmath.exp(ell_nu), 'nu_alpha', r_nu),
        s_c,
        a_c,
    ))


def sigma1() -> Threshold:
    """sigma_1 = sigma_alpha at alpha = 1."""
    t = alpha_domain(1).threshold('sigma_alpha')
    return Threshold(t.value, 'sigma1', t.residual)


def improved_real_threshold() -> Threshold:
    """x_1 = e^(1/sigma_1); the improved series converges for x > x_1."""
    return alpha_domain(1).threshold('x_alpha')


def sigma1_approx():
    """exp((1+pi^2)/2) - (1+pi^2)/2, a lower estimate of sigma_1."""
    half = (1 + mpmath.pi ** 2) / 2
    return mpmath.exp(half) - half


def _x_of_alpha(alpha):
    ell, _ = _sigma_alpha_log(mpmath.log(alpha))
    return mpmath.exp(alpha * mpmath.exp(-ell))


def x_of_alpha_max() -> Tuple:
    """(alpha*, x*) maximizing the improved threshold x_alpha over 0 < alpha < e."""
    best = golden_section_min(lambda a: -_x_of_alpha(a), mpmath.mpf('1e-3'), mpmath.mpf(1), tol=1e-10)
    return best, _x_of_alpha(best)


def transformed_improved_threshold(p, mode: str = 'exact') -> Threshold:
    """z_p for the p-transformed improved series.

    ``exact`` solves |tau(z, p)| = tau*(sigma(z, p)) on z > e^(-p); ``approx``
    is e^(-p) x_1^(e^(-p)), meant for p < 1.
    """
    if mode not in THRESHOLD_MODES:
        raise ConfigError(f"unknown threshold mode {mode!r}; expected one of {THRESHOLD_MODES}")
    p = to_mp(p)
    z_s = mpmath.exp(-p)

    if mode == 'approx':
        if p >= 1:
            raise DomainError(f"the approximate threshold is meant for p < 1, got {mpmath.nstr(p, 10)}")
        return Threshold(z_s * improved_real_threshold().value ** z_s, 'z_p', note='approximation')

    if p < 1:
        ell, residual = _sigma_alpha_log(p)
        return Threshold(mpmath.exp(mpmath.exp(-ell) - p), 'z_p', residual)
    if p <= mpmath.log(alpha_c().value):
        return Threshold(z_s, 'z_p', note='converges for every z > e^(-p)')
    (ell_mu, r_mu), (ell_nu, _) = _mu_nu_log(p)
    lower = mpmath.exp(mpmath.exp(-ell_nu) - p)
    return Threshold(mpmath.exp(mpmath.exp(-ell_mu) - p), 'z_p', r_mu,
                     note=f"also converges for e^(-p) < z < {mpmath.nstr(lower, 10)}")


# === Boundary curves ===

def _sample_count(n_samples: Optional[int]) -> int:
    if n_samples is None:
        n_samples = db.get_int_setting('boundary_samples')
    if n_samples < 2:
        raise DomainError(f"a boundary needs at least 2 samples, got {n_samples}")
    return n_samples


def _mirror(lower: List[Tuple], real_point: Optional[Tuple] = None) -> Tuple[list, list, list]:
    """Join the lower half (ordered by arg upward) with its conjugate image."""
    samples, params, residuals = [], [], []
    for param, z, residual in lower:
        samples.append((mpmath.re(z), mpmath.im(z)))
        params.append(param)
        residuals.append(residual)
    if real_point is not None:
        param, z, residual = real_point
        samples.append((mpmath.re(z), mpmath.mpf(0)))
        params.append(param)
        residuals.append(residual)
    for param, z, residual in reversed(lower):
        samples.append((mpmath.re(z), -mpmath.im(z)))
        params.append(-param)
        residuals.append(residual)
    return samples, params, residuals


def transformed_comtet_boundary(p=0, n_samples: Optional[int] = None) -> BoundaryCurve:
    """Boundary of the p-transformed Comtet domain, parameterised by eta.

    Below the axis the boundary is Re W_-1(-e^(p-1)(p + ln z)) = p - 1, with
    W = (p-1) + i*eta. Samples whose argument passes -pi leave the principal
    sheet and are dropped.
    """
    n = _sample_count(n_samples)
    p = to_mp(p)
    threshold = transformed_comtet_threshold(p)
    eta_start = mpmath.mpf(0) if p <= 0 else -_eta0(1 - p).value

    lower = []
    etas = np.linspace(-np.pi, float(eta_start), n + 1)[1:-1]
    for eta_f in etas:
        eta = mpmath.mpf(float(eta_f))
        ln_r = -p - (p - 1) * mpmath.cos(eta) + eta * mpmath.sin(eta)
        arg = (1 - p) * mpmath.sin(eta) - eta * mpmath.cos(eta)
        if arg <= -mpmath.pi:
            continue
        z = mpmath.exp(mpmath.mpc(ln_r, arg))
        y = -mpmath.exp(p - 1) * (p + mpmath.log(z))
        residual = abs(mpmath.re(lambert_w(-1, y)) - (p - 1))
        lower.append((eta, z, residual))

    real_point = (eta_start, mpmath.mpc(threshold.value, 0), threshold.residual)
    samples, params, residuals = _mirror(lower, real_point)
    return BoundaryCurve(tuple(samples), 'comtet-complex' if p == 0 else 'comtet-p-complex',
                         tuple(params), tuple(residuals), {'p': p, 'parameter': 'eta'})


def comtet_complex_boundary(n_samples: Optional[int] = None) -> BoundaryCurve:
    """Boundary of the Comtet domain in the complex z-plane."""
    return transformed_comtet_boundary(0, n_samples)


# Real part of p + ln z, scanned from far outside inward
_SCAN_GRID = np.concatenate([np.geomspace(24.0, 1e-9, 700), -np.geomspace(1e-9, 24.0, 700)])


def _improved_excess_np(ell: np.ndarray, theta: float, p: float) -> np.ndarray:
    sigma = 1 / (ell + 1j * theta)
    tau = sigma * (p - np.log(sigma))
    star = np.abs(1 + sigma - sigma * np.log(sigma) - 1j * np.pi * sigma)
    return np.abs(tau) - star


def _improved_excess(ell, theta, p):
    """|tau| - tau*(sigma) at p + ln z = ell + i theta, upper half-plane."""
    sigma = 1 / mpmath.mpc(ell, theta)
    tau = sigma * (p - mpmath.log(sigma))
    star = abs(1 + sigma - sigma * mpmath.log(sigma) - 1j * mpmath.pi * sigma)
    return abs(tau) - star


def _improved_boundary_point(p, theta):
    values = _improved_excess_np(_SCAN_GRID, float(theta), float(p))
    positive = np.nonzero(values > 0)[0]
    if positive.size == 0 or positive[0] == 0:
        return None
    i = int(positive[0])
    ell, residual = bisect(lambda e: _improved_excess(e, theta, p), _SCAN_GRID[i - 1], _SCAN_GRID[i])
    return mpmath.exp(mpmath.mpc(ell - p, theta)), residual


def transformed_improved_boundary(p=0, n_samples: Optional[int] = None) -> BoundaryCurve:
    """Boundary of the p-transformed improved domain, parameterised by arg z.

    For each theta the outermost radius with |tau| = tau*(sigma) is found;
    angles where the series converges all the way in are skipped.
    """
    n = _sample_count(n_samples)
    p = to_mp(p)
    threshold = transformed_improved_threshold(p, 'exact')

    upper = []
    for theta_f in np.linspace(0.0, np.pi, n, endpoint=False)[1:]:
        theta = mpmath.mpf(float(theta_f))
        found = _improved_boundary_point(p, theta)
        if found is not None:
            z, residual = found
            upper.append((theta, z, residual))

    # _mirror expects the lower half, ordered from arg -pi upward
    lower = [(-theta, mpmath.conj(z), residual) for theta, z, residual in reversed(upper)]
    real_point = (mpmath.mpf(0), mpmath.mpc(threshold.value, 0), threshold.residual)
    samples, params, residuals = _mirror(lower, real_point)
    return BoundaryCurve(tuple(samples), 'improved-complex' if p == 0 else 'improved-p-complex',
                         tuple(params), tuple(residuals), {'p': p, 'parameter': 'theta'})


def improved_complex_boundary(n_samples: Optional[int] = None) -> BoundaryCurve:
    """Boundary of the improved-series domain in the complex z-plane."""
    return transformed_improved_boundary(0, n_samples)


# === Wright series and the singular points ===

def wright_radius() -> Threshold:
    """sqrt(1 + pi^2), the distance from 0 to the singularities -1 +- i pi."""
    value = mpmath.sqrt(1 + mpmath.pi ** 2)
    return Threshold(value, 'wright_radius', abs(abs(mpmath.mpc(-1, mpmath.pi)) - value))


def wright_singularities() -> Tuple:
    return mpmath.mpc(-1, -mpmath.pi), mpmath.mpc(-1, mpmath.pi)


def wright_converges(sigma) -> ConvergenceVerdict:
    """|sigma| > 1/sqrt(1 + pi^2), i.e. |ln x| below the radius at alpha = 1."""
    radius = wright_radius()
    margin = abs(to_mp(sigma)) - 1 / radius.value
    return ConvergenceVerdict(bool(margin > 0), (radius,), margin)


def singular_points(sigma) -> SingularPoints:
    """tau*^(k), u*^(k) and s = (1 - tau*)/sigma - ln sigma for k = 0, 1.

    Both s values land on -1 -+ i pi, where W(e^s) = -1.
    """
    s = to_mp(sigma)
    if s == 0 or s == -1:
        raise DomainError(f"singular points need sigma not in {{0, -1}}, got {sigma}")
    log_s = mpmath.log(s)
    u = [-log_s + 1j * mpmath.pi * (2 * k - 1) for k in (0, 1)]
    tau = [1 + s + s * uk for uk in u]
    shift = [(1 - t) / s - log_s for t in tau]
    return SingularPoints(tau[0], tau[1], u[0], u[1], shift[0], shift[1])


def sigma_series_necessary_bound() -> Threshold:
    """1/omega_0: u as a power series in sigma needs 0 < sigma < 1/omega_0."""
    bound = 1 / omega_constant()
    tau = -bound * mpmath.log(bound)
    return Threshold(bound, 'sigma_series_bound', abs(abs(tau) - 1))


def stirling_ratio_limits(l: int, p: int) -> Fraction:
    """[p+1; l+1] / (p [p; l+1]), which tends to 1 as p grows."""
    if l < 0 or p < l + 1:
        raise DomainError(f"stirling_ratio_limits needs l >= 0 and p >= l + 1, got l={l} p={p}")
    return Fraction(stirling_cycle(p + 1, l + 1), p * stirling_cycle(p, l + 1))


# === Truncation trends ===

@dataclass(frozen=True)
class TruncationTrend:
    """Tail-windowed errors at a few checkpoint truncations.

    ``errors[i]`` is the max error over the ``window`` truncations ending at
    ``checkpoints[i]``.
    """

    checkpoints: Tuple[int, ...]
    errors: Tuple
    window: int

    @property
    def improving(self) -> bool:
        return all(b < a for a, b in zip(self.errors, self.errors[1:]))

    @property
    def diverging(self) -> bool:
        """The windowed error never decreases from one checkpoint to the next."""
        return all(b >= a for a, b in zip(self.errors, self.errors[1:]))


def truncation_trend(error_at: Callable[[int], object], checkpoints: Sequence[int] = TREND_CHECKPOINTS,
                     window: int = TREND_WINDOW) -> TruncationTrend:
    """Windowed error of ``error_at(N)`` around each checkpoint truncation."""
    checkpoints = tuple(checkpoints)
    if len(checkpoints) < 2 or any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise DomainError(f"checkpoints must be at least two increasing truncations, got {checkpoints}")
    if window < 1 or checkpoints[0] - window + 1 < 1:
        raise DomainError(f"window {window} does not fit below the first checkpoint {checkpoints[0]}")
    errors = []
    for N in checkpoints:
        errors.append(windowed_error([abs(error_at(n)) for n in range(N - window + 1, N + 1)], window))
    return TruncationTrend(checkpoints, tuple(errors), window)


def series_trend(z, spec_variant: str, p=0, checkpoints: Sequence[int] = TREND_CHECKPOINTS,
                 window: int = TREND_WINDOW) -> TruncationTrend:
    """Trend of |transformed W - W_0| at real z; the divergence witness for one series."""
    exact = lambert_w(0, to_mp(z))
    return truncation_trend(lambda n: transformed_w(z, p, SeriesSpec(spec_variant, n)) - exact,
                            checkpoints, window)
