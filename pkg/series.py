"""Series expansions of the Lambert W function.

All expansions write W = ln x - alpha*ln ln x + alpha*u (or the p-transformed
W = ln z - ln(p + ln z) + u) where u solves the fundamental relation

    1 - exp(-u) + sigma*u - tau = 0.

The variants differ in how u is expanded:

* ``comtet``   - double series in sigma and tau with Stirling cycle numbers,
  truncated by total order n <= N.
* ``improved`` - power series in tau whose coefficients are polynomials in
  zeta = 1/(1+sigma) built from 2-associated Stirling subset numbers.
* ``eulerian`` - the same coefficients written with second-order Eulerian
  numbers, rational in sigma.
* ``wright-ln`` - W(x) = omega_0 + sum a_n (ln x)^n.

Coefficients are exact rationals. When sigma and tau are exact the partial
sums are exact too; otherwise they are evaluated with guard bits and rounded
once to the working precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import List, Optional, Tuple

import mpmath

from combinatorics import (eulerian2, evaluate_polynomial, generalized_binomial,
                           assoc_stirling1_d, stirling2_assoc2, stirling_cycle)
from errors import ConfigError, DomainError, SingularityError
from numerics import fsum, guarded, is_exact, to_mp
from oracle import omega_constant

__all__ = [
    "VARIANTS",
    "WRIGHT_METHODS",
    "SeriesVariables",
    "SeriesSpec",
    "CoefficientTable",
    "untransformed_variables",
    "transformed_variables",
    "comtet_u",
    "improved_u",
    "eulerian_u",
    "sigma_series_u",
    "coeff_cm_exact",
    "improved_coefficient",
    "coefficient_table",
    "improved_zeta_polynomial",
    "eulerian_zeta_polynomial",
    "phi_alpha",
    "transformed_w",
    "tau_zero",
    "tau_argmax",
    "wright_series_a",
    "wright_coefficients",
    "wright_series_eval",
    "origin_series",
    "coverage_interval",
    "branch_m1_approx",
    "fundamental_residual",
    "partial_u",
]

VARIANTS = ('comtet', 'improved', 'eulerian', 'wright-ln')
WRIGHT_METHODS = ('eulerian', 'assoc-stirling1', 'assoc-stirling2', 'recurrence')
BRANCH_M1_FORMS = ('untransformed', 'transformed')


@dataclass(frozen=True)
class SeriesVariables:
    """The pair (sigma, tau) every expansion of u is written in."""

    sigma: object
    tau: object

    @property
    def zeta(self):
        if self.sigma == -1:
            raise DomainError("zeta = 1/(1+sigma) is undefined at sigma = -1")
        if is_exact(self.sigma):
            return 1 / (1 + Fraction(self.sigma))
        return 1 / (1 + to_mp(self.sigma))

    @property
    def lam(self):
        if self.sigma == 0:
            raise DomainError("lambda = tau/sigma is undefined at sigma = 0")
        if is_exact(self.sigma) and is_exact(self.tau):
            return Fraction(self.tau) / Fraction(self.sigma)
        return to_mp(self.tau) / to_mp(self.sigma)

    @property
    def exact(self) -> bool:
        return is_exact(self.sigma) and is_exact(self.tau)


@dataclass(frozen=True)
class SeriesSpec:
    """Which expansion to use, where to truncate it, and its parameter.

    At most one of ``alpha`` and ``p`` is given; they are linked by
    alpha = e^p. Neither means alpha = 1, p = 0.
    """

    variant: str
    truncation: int
    alpha: Optional[object] = None
    p: Optional[object] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown series variant {self.variant!r}; expected one of {VARIANTS}")
        if int(self.truncation) != self.truncation or self.truncation < 1:
            raise ConfigError(f"truncation must be an integer >= 1, got {self.truncation}")
        if self.alpha is not None and self.p is not None:
            raise ConfigError("give either alpha or p, not both")

    @property
    def parameter_p(self):
        if self.p is not None:
            return self.p
        if self.alpha is not None:
            return mpmath.log(to_mp(self.alpha))
        return 0

    @property
    def parameter_alpha(self):
        if self.alpha is not None:
            return self.alpha
        if self.p is not None:
            return mpmath.exp(to_mp(self.p))
        return 1


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients by index (starting at 1) with the formula that made them."""

    values: Tuple
    provenance: str

    def __getitem__(self, index: int):
        if index < 1:
            raise IndexError("coefficient indices start at 1")
        return self.values[index - 1]

    def __len__(self) -> int:
        return len(self.values)


def _check_truncation(N: int):
    if N < 1:
        raise ConfigError(f"truncation must be >= 1, got {N}")


def untransformed_variables(x, alpha=1) -> SeriesVariables:
    """sigma = alpha/ln x, tau = alpha*ln ln x/ln x."""
    x = to_mp(x)
    if not isinstance(x, mpmath.mpc) and x <= 1:
        raise DomainError(f"untransformed series need x > 1, got {mpmath.nstr(x, 10)}")
    alpha = to_mp(alpha)
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    L = mpmath.log(x)
    LL = mpmath.log(L)
    return SeriesVariables(alpha / L, (alpha * LL) / L)


def transformed_variables(z, p=0) -> SeriesVariables:
    """sigma = 1/(p + ln z), tau = (p + ln(p + ln z))/(p + ln z)."""
    L = to_mp(p) + mpmath.log(to_mp(z))
    if L == 0:
        raise SingularityError(f"p + ln z vanishes at z = e^(-p) = {mpmath.nstr(mpmath.exp(-to_mp(p)), 10)}")
    LL = mpmath.log(L)
    return SeriesVariables(1 / L, (to_mp(p) + LL) / L)


# === Coefficient skeletons (exact) ===

@lru_cache(maxsize=None)
def _comtet_column(m: int, N: int) -> Tuple[Fraction, ...]:
    """Coefficients of sigma^l in the tau^m column, l = 0 .. N-m."""
    return tuple(
        Fraction((-1) ** l * stirling_cycle(l + m, l + 1), factorial(m))
        for l in range(N - m + 1)
    )


@lru_cache(maxsize=None)
def improved_zeta_polynomial(m: int) -> Tuple[Fraction, ...]:
    """c_m as a polynomial in zeta from 2-associated subset numbers."""
    if m < 1:
        raise DomainError(f"coefficient index must be >= 1, got {m}")
    coeffs = [Fraction(0)] * (2 * m)
    for p in range(m):
        coeffs[p + m] += Fraction((-1) ** (p + m - 1) * stirling2_assoc2(p + m - 1, p), factorial(m))
    return tuple(coeffs)


@lru_cache(maxsize=None)
def eulerian_zeta_polynomial(m: int) -> Tuple[Fraction, ...]:
    """c_m as a polynomial in zeta from second-order Eulerian numbers.

    No zeta^2 monomial appears for any m.
    """
    if m < 1:
        raise DomainError(f"coefficient index must be >= 1, got {m}")
    if m == 1:
        return (Fraction(0), Fraction(1))
    coeffs = [Fraction(0)] * (2 * m)
    for k in range(m - 1):
        weight = (-1) ** (m + k) * eulerian2(m - 1, k)
        # zeta^(m+k+1) * (1 - zeta)^(m-k-2)
        for j in range(m - k - 1):
            coeffs[m + k + 1 + j] += Fraction(weight * (-1) ** j * generalized_binomial(m - k - 2, j),
                                              factorial(m))
    return tuple(coeffs)


@lru_cache(maxsize=None)
def _eulerian_sigma_numerator(m: int) -> Tuple[int, ...]:
    """Integer polynomial in sigma; c_m = numerator / (m! (1+sigma)^(2m-1)) for m >= 2."""
    coeffs = [0] * (m - 1)
    for k in range(m - 1):
        coeffs[m - k - 2] += (-1) ** (m - k) * eulerian2(m - 1, k)
    return tuple(coeffs)


def _eulerian_coefficient(sigma, m: int):
    if m == 1:
        return 1 / (1 + sigma)
    return evaluate_polynomial(_eulerian_sigma_numerator(m), sigma) / (factorial(m) * (1 + sigma) ** (2 * m - 1))


def coeff_cm_exact(sigma, m: int) -> Fraction:
    """Exact c_m(sigma), the coefficient of tau^m, from the Eulerian form."""
    if m < 1:
        raise DomainError(f"coefficient index must be >= 1, got {m}")
    sigma = Fraction(sigma)
    if sigma == -1:
        raise DomainError("c_m(sigma) is undefined at sigma = -1")
    return Fraction(_eulerian_coefficient(sigma, m))


def improved_coefficient(sigma, m: int) -> Fraction:
    """Exact c_m(sigma) from the 2-associated subset form."""
    sigma = Fraction(sigma)
    if sigma == -1:
        raise DomainError("c_m(sigma) is undefined at sigma = -1")
    return evaluate_polynomial(improved_zeta_polynomial(m), 1 / (1 + sigma))


def coefficient_table(sigma, M: int, provenance: str = 'eulerian') -> CoefficientTable:
    """c_1 .. c_M at sigma; exact when sigma is exact."""
    _check_truncation(M)
    if provenance not in ('eulerian', 'improved'):
        raise ConfigError(f"unknown coefficient provenance {provenance!r}")
    if sigma == -1:
        raise DomainError("c_m(sigma) is undefined at sigma = -1")
    if is_exact(sigma):
        form = coeff_cm_exact if provenance == 'eulerian' else improved_coefficient
        return CoefficientTable(tuple(form(sigma, m) for m in range(1, M + 1)), provenance)

    values = []
    with guarded(M):
        s = to_mp(sigma)
        zeta = 1 / (1 + s)
        for m in range(1, M + 1):
            if provenance == 'eulerian':
                values.append(_eulerian_coefficient(s, m))
            else:
                values.append(_mp_polyval(improved_zeta_polynomial(m), zeta))
    return CoefficientTable(tuple(+v for v in values), provenance)


def _mp_polyval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + (to_mp(c) if c else 0)
    return acc


# === Partial sums of u ===

def comtet_u(variables: SeriesVariables, N: int):
    """Partial sum of the Comtet double series over total order n <= N."""
    _check_truncation(N)
    if variables.sigma == 0:
        raise DomainError("the Comtet series needs sigma != 0")
    if variables.tau == 0:
        return Fraction(0) if variables.exact else mpmath.mpf(0)

    if variables.exact:
        s, t = Fraction(variables.sigma), Fraction(variables.tau)
        return sum(t ** m * evaluate_polynomial(_comtet_column(m, N), s) for m in range(1, N + 1))

    with guarded(N):
        s, t = to_mp(variables.sigma), to_mp(variables.tau)
        total = fsum(t ** m * _mp_polyval(_comtet_column(m, N), s) for m in range(1, N + 1))
    return +total


def sigma_series_u(variables: SeriesVariables, N: int):
    """Comtet coefficients summed over the square m <= N, l <= N.

    This is the double-series reading in which u is a power series in sigma
    with tau as a parameter.
    """
    _check_truncation(N)
    with guarded(2 * N):
        s, t = to_mp(variables.sigma), to_mp(variables.tau)
        total = fsum(t ** m * _mp_polyval(_comtet_column(m, m + N), s) for m in range(1, N + 1))
    return +total


def improved_u(variables: SeriesVariables, M: int):
    """Partial sum over m <= M of the improved (2-associated) series."""
    _check_truncation(M)
    if variables.sigma == -1:
        raise DomainError("the improved series needs sigma != -1")
    if variables.tau == 0:
        return Fraction(0) if variables.exact else mpmath.mpf(0)

    if variables.sigma == 0:
        # Reduces to -ln(1 - tau) = sum tau^m / m
        if variables.exact:
            t = Fraction(variables.tau)
            return sum(t ** m / m for m in range(1, M + 1))
        with guarded(M):
            t = to_mp(variables.tau)
            total = fsum(t ** m / m for m in range(1, M + 1))
        return +total

    if variables.exact:
        t = Fraction(variables.tau)
        zeta = variables.zeta
        return sum(t ** m * evaluate_polynomial(improved_zeta_polynomial(m), zeta) for m in range(1, M + 1))

    with guarded(M):
        t = to_mp(variables.tau)
        zeta = 1 / (1 + to_mp(variables.sigma))
        total = fsum(t ** m * _mp_polyval(improved_zeta_polynomial(m), zeta) for m in range(1, M + 1))
    return +total


def eulerian_u(variables: SeriesVariables, M: int):
    """Partial sum over m <= M of the Eulerian-form series."""
    _check_truncation(M)
    if variables.sigma == -1:
        raise DomainError("the Eulerian-form series needs sigma != -1")
    if variables.tau == 0:
        return Fraction(0) if variables.exact else mpmath.mpf(0)

    if variables.exact:
        s, t = Fraction(variables.sigma), Fraction(variables.tau)
        return sum(t ** m * _eulerian_coefficient(s, m) for m in range(1, M + 1))

    with guarded(M):
        s, t = to_mp(variables.sigma), to_mp(variables.tau)
        total = fsum(t ** m * _eulerian_coefficient(s, m) for m in range(1, M + 1))
    return +total


_U_SERIES = {
    'comtet': comtet_u,
    'improved': improved_u,
    'eulerian': eulerian_u,
}


def partial_u(variables: SeriesVariables, spec: SeriesSpec):
    """u from the tau-series named by ``spec``."""
    if spec.variant not in _U_SERIES:
        raise ConfigError(f"variant {spec.variant!r} is not a series for u")
    return _U_SERIES[spec.variant](variables, spec.truncation)


def fundamental_residual(u, variables: SeriesVariables):
    """1 - e^(-u) + sigma*u - tau; zero for the exact u."""
    u = to_mp(u)
    return 1 - mpmath.exp(-u) + to_mp(variables.sigma) * u - to_mp(variables.tau)


# === Assembled W values ===

def phi_alpha(x, alpha, spec: SeriesSpec):
    """Phi_alpha(x) = ln x - alpha ln ln x + alpha u; W(x) when alpha = 1."""
    x_mp = to_mp(x)
    if x_mp <= 1:
        raise DomainError(f"phi_alpha needs x > 1, got {mpmath.nstr(x_mp, 10)}")
    if to_mp(alpha) <= 0:
        raise DomainError(f"phi_alpha needs alpha > 0, got {alpha}")
    a = to_mp(alpha)

    if spec.variant == 'wright-ln':
        return a * wright_series_eval(x_mp ** (1 / a) / a, spec.truncation)

    L = mpmath.log(x_mp)
    LL = mpmath.log(L)
    variables = SeriesVariables(a / L, (a * LL) / L)
    u = _U_SERIES[spec.variant](variables, spec.truncation)
    return L - a * LL + a * u


def transformed_w(z, p, spec: SeriesSpec):
    """W(z) ~ ln z - ln(p + ln z) + u with sigma, tau from the p-transformation."""
    if spec.variant == 'wright-ln':
        return wright_series_eval(z, spec.truncation)

    p_mp = to_mp(p)
    lz = mpmath.log(to_mp(z))
    L = p_mp + lz
    if L == 0:
        raise SingularityError(
            f"transformed series are singular at z = e^(-p) = {mpmath.nstr(mpmath.exp(-p_mp), 10)}"
        )
    LL = mpmath.log(L)
    variables = SeriesVariables(1 / L, (p_mp + LL) / L)
    u = _U_SERIES[spec.variant](variables, spec.truncation)
    return lz - LL + u


def singular_point(p):
    """z_s = e^(-p), where both transformed variables blow up."""
    return mpmath.exp(-to_mp(p))


def tau_zero(p):
    """The z > z_s at which tau(z, p) = 0."""
    z_s = singular_point(p)
    return mpmath.exp(z_s - to_mp(p))


def tau_argmax(p):
    """The z at which tau(z, p) is largest on z > z_s."""
    z_s = singular_point(p)
    return mpmath.exp(mpmath.e * z_s - to_mp(p))


# === Wright series in powers of ln x ===

def _resolve_w(w):
    if w is None:
        return omega_constant()
    if is_exact(w):
        w = Fraction(w)
        if w <= 0:
            raise DomainError(f"expansion point w must be positive, got {w}")
        return w
    w = to_mp(w)
    if w <= 0:
        raise DomainError(f"expansion point w must be positive, got {w}")
    return w


def _a_eulerian(n: int, w):
    total = sum(eulerian2(n - 1, k) * (-1) ** k * w ** (k + 1) for k in range(n))
    return total / (factorial(n) * (1 + w) ** (2 * n - 1))


def _a_assoc_stirling1(n: int, w):
    total = sum(
        (-1) ** (n + k - 1) * assoc_stirling1_d(n + k - 1, k) / (1 + w) ** (n + k)
        for k in range(n)
    )
    return w * total / factorial(n)


def _a_assoc_stirling2(n: int, w):
    total = sum(
        stirling2_assoc2(n + k - 1, k) * (-1) ** (k + 1) * w ** k / (1 + w) ** (n + k)
        for k in range(n)
    )
    # These are the coefficients of W(e^t) - omega_0 - t; put the t back.
    return total / factorial(n) + (1 if n == 1 else 0)


def _recurrence(N: int, w) -> List:
    c = [None, -1 / (1 + w)]
    for n in range(2, N + 1):
        acc = (n - 1) * c[n - 1] + sum(k * c[k] * c[n - k] for k in range(1, n))
        c.append(-acc / (n * (1 + w)))
    a = c[1:]
    a[0] = 1 + a[0]
    return a


_CLOSED_FORMS = {
    'eulerian': _a_eulerian,
    'assoc-stirling1': _a_assoc_stirling1,
    'assoc-stirling2': _a_assoc_stirling2,
}


def wright_coefficients(N: int, method: str = 'recurrence', w=None) -> CoefficientTable:
    """a_1 .. a_N of W(e^t) = w + sum a_n t^n, by any of the four methods."""
    _check_truncation(N)
    if method not in WRIGHT_METHODS:
        raise ConfigError(f"unknown coefficient method {method!r}; expected one of {WRIGHT_METHODS}")
    w = _resolve_w(w)

    if isinstance(w, Fraction):
        if method == 'recurrence':
            return CoefficientTable(tuple(_recurrence(N, w)), method)
        form = _CLOSED_FORMS[method]
        return CoefficientTable(tuple(Fraction(form(n, w)) for n in range(1, N + 1)), method)

    with guarded(N):
        w_mp = to_mp(w)
        if method == 'recurrence':
            values = _recurrence(N, w_mp)
        else:
            values = [_CLOSED_FORMS[method](n, w_mp) for n in range(1, N + 1)]
    return CoefficientTable(tuple(+v for v in values), method)


def wright_series_a(n: int, method: str = 'recurrence', w=None):
    """The coefficient a_n, with a_1 = 1 + c_1 for the recurrence."""
    if n < 1:
        raise DomainError(f"coefficient index must be >= 1, got {n}")
    if method == 'recurrence':
        return wright_coefficients(n, method, w)[n]
    if method not in WRIGHT_METHODS:
        raise ConfigError(f"unknown coefficient method {method!r}; expected one of {WRIGHT_METHODS}")
    w = _resolve_w(w)
    if isinstance(w, Fraction):
        return Fraction(_CLOSED_FORMS[method](n, w))
    with guarded(n):
        value = _CLOSED_FORMS[method](n, to_mp(w))
    return +value


def wright_series_eval(x, N: int):
    """omega_0 + sum_{n <= N} a_n (ln x)^n."""
    _check_truncation(N)
    x = to_mp(x)
    if isinstance(x, mpmath.mpc) or x <= 0:
        raise DomainError(f"the Wright series needs real x > 0, got {mpmath.nstr(x, 10)}")
    omega0 = omega_constant()
    t = mpmath.log(x)
    if t == 0:
        return omega0
    coefficients = wright_coefficients(N)
    with guarded(N):
        total = fsum([omega0] + [coefficients[n] * t ** n for n in range(1, N + 1)])
    return +total


def origin_series(x, N: int):
    """W(x) = sum (-n)^(n-1) x^n / n!, convergent for |x| < 1/e."""
    _check_truncation(N)
    if is_exact(x):
        x = Fraction(x)
        return sum(Fraction((-n) ** (n - 1), factorial(n)) * x ** n for n in range(1, N + 1))
    with guarded(N):
        xx = to_mp(x)
        total = fsum(mpmath.mpf((-n) ** (n - 1)) / factorial(n) * xx ** n for n in range(1, N + 1))
    return +total


def coverage_interval(x) -> List[str]:
    """Names of the expansions whose convergence domain contains real x > 0."""
    import convergence

    x = to_mp(x)
    if x <= 0:
        raise DomainError(f"coverage is reported for x > 0, got {mpmath.nstr(x, 10)}")
    covering = []
    if x < 1 / mpmath.e:
        covering.append('origin')
    radius = convergence.wright_radius().value
    if mpmath.exp(-radius) < x < mpmath.exp(radius):
        covering.append('wright-ln')
    if x > convergence.improved_real_threshold().value:
        covering.append('improved')
    if x > mpmath.e:
        covering.append('comtet')
    return covering


# === Branch -1 approximants ===

def branch_m1_approx(z, form: str = 'transformed'):
    """Leading-order approximants of W_-1 on [-1/e, 0).

    ``untransformed``: L - ln L + ln L / L with L = ln z - 2 pi i (complex).
    ``transformed``: the p = i pi rearrangement, real on the whole interval
    and exact at z = -1/e.
    """
    if form not in BRANCH_M1_FORMS:
        raise ConfigError(f"unknown form {form!r}; expected one of {BRANCH_M1_FORMS}")
    z = to_mp(z)
    if isinstance(z, mpmath.mpc) or not (-1 / mpmath.e * (1 + 8 * mpmath.eps) <= z < 0):
        raise DomainError(f"branch -1 approximants need -1/e <= z < 0, got {mpmath.nstr(z, 10)}")

    if form == 'untransformed':
        L = mpmath.log(mpmath.mpc(z)) - 2j * mpmath.pi
        lnL = mpmath.log(L)
        return L - lnL + lnL / L

    L = mpmath.log(-z)
    lnL = mpmath.log(-L)
    return L - lnL + lnL / L
