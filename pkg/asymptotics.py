"""Large-index estimates of the series coefficients from their nearest singularities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import List

import mpmath

from errors import DomainError
from numerics import is_complex, to_mp
from oracle import lambert_w, omega_constant

__all__ = [
    "AsymptoticEstimate",
    "theta1",
    "theta1_direct",
    "theta1_split",
    "cm_asymptotic_terms",
    "cm_asymptotic",
    "estimate_cm",
    "an_asymptotic",
    "an_envelope",
    "an_sum_asymptotic",
    "assoc_sum_asymptotic",
]


@dataclass(frozen=True)
class AsymptoticEstimate:
    index: int
    value: object
    theta1: object
    tau_star: object


def theta1_split():
    """1/W(1/e), where the denominator of the arctan form changes sign."""
    return 1 / lambert_w(0, 1 / mpmath.e)


def theta1_direct(sigma):
    """arg(1 + sigma - sigma ln sigma + i pi sigma)."""
    s = to_mp(sigma)
    return mpmath.arg(mpmath.mpc(1 + s - s * mpmath.log(s), mpmath.pi * s))


def theta1(sigma):
    """Phase of tau*^(1) for sigma > 0, from the piecewise arctan form."""
    s = to_mp(sigma)
    if is_complex(s) or s <= 0:
        raise DomainError(f"theta1 is defined for real sigma > 0, got {sigma}")
    denominator = 1 - mpmath.log(s) + 1 / s
    if denominator == 0:
        return mpmath.pi / 2
    principal = mpmath.atan(mpmath.pi / denominator)
    return principal if s < theta1_split() else mpmath.pi + principal


def _check_index(m: int):
    if m < 1:
        raise DomainError(f"coefficient index must be >= 1, got {m}")


def cm_asymptotic_terms(sigma, m: int) -> List:
    """Contributions of the singularities nearest tau = 0 to c_m(sigma).

    Two conjugate terms for real sigma > 0, one for sigma < 0 and one for
    complex sigma (the singularity on the radius side of Im sigma).
    """
    _check_index(m)
    if sigma == -1:
        raise DomainError("c_m(sigma) is undefined at sigma = -1")
    if sigma == 0:
        raise DomainError("at sigma = 0 the coefficients are exactly 1/m; no singular terms")
    s = to_mp(sigma)
    power = m - mpmath.mpf(1) / 2
    scale = 1 / (mpmath.sqrt(2 * mpmath.pi * s) * mpmath.mpf(m) ** 1.5)

    if not is_complex(s) or mpmath.im(s) == 0:
        s = mpmath.re(s)
        if s < 0:
            base = 1 - abs(s) + abs(s) * mpmath.log(abs(s))
            # Same sign as c_1 = 1/(1+sigma): negative only below sigma = -1
            sign = -1 if s < -1 else 1
            return [sign / (mpmath.sqrt(2 * mpmath.pi * abs(s)) * mpmath.mpf(m) ** 1.5 * base ** power)]
        core = 1 + s - s * mpmath.log(s)
        tau0 = mpmath.mpc(core, -mpmath.pi * s)
        tau1 = mpmath.mpc(core, mpmath.pi * s)
        return [1j * scale / tau1 ** power, -1j * scale / tau0 ** power]

    core = 1 + s - s * mpmath.log(s)
    if mpmath.im(s) < 0:
        return [-1j * scale / (core - 1j * mpmath.pi * s) ** power]
    return [1j * scale / (core + 1j * mpmath.pi * s) ** power]


def cm_asymptotic(sigma, m: int):
    """Leading estimate of c_m(sigma); exactly 1/m at sigma = 0."""
    _check_index(m)
    if sigma == 0:
        return Fraction(1, m)
    terms = cm_asymptotic_terms(sigma, m)
    total = mpmath.fsum(terms)
    if not is_complex(to_mp(sigma)) and to_mp(sigma) > 0:
        return mpmath.re(total)
    return total


def estimate_cm(sigma, m: int) -> AsymptoticEstimate:
    """cm_asymptotic with the phase and radius it was built from."""
    from convergence import improved_radius

    value = cm_asymptotic(sigma, m)
    s = to_mp(sigma)
    phase = theta1(s) if not is_complex(s) and s > 0 else None
    return AsymptoticEstimate(m, value, phase, improved_radius(sigma).value)


def an_envelope(n: int):
    """Amplitude of the a_n estimate without its sign and sine factor."""
    _check_index(n)
    return mpmath.sqrt(2 / mpmath.pi) / (mpmath.mpf(n) ** 1.5 * (1 + mpmath.pi ** 2) ** (mpmath.mpf(2 * n - 1) / 4))


def an_asymptotic(n: int):
    """Estimate of the Wright-series coefficient a_n."""
    phase = mpmath.sin(mpmath.mpf(2 * n - 1) / 2 * mpmath.atan(mpmath.pi))
    return (-1) ** n * phase * an_envelope(n)


def an_sum_asymptotic(n: int):
    """Estimate of sum_k <<n-1; k>> (-1)^k omega_0^k from the a_n estimate."""
    omega0 = omega_constant()
    return an_asymptotic(n) * factorial(n) * (1 + omega0) ** (2 * n - 1) / omega0


def assoc_sum_asymptotic(m: int):
    """Estimate of sum_{p=1}^{m-1} {p+m-1; p}."""
    if m < 2:
        raise DomainError(f"assoc_sum_asymptotic needs m >= 2, got {m}")
    base = 2 * mpmath.log(2) - 1
    return factorial(m - 1) / (2 * mpmath.sqrt(mpmath.pi * m) * base ** (m - mpmath.mpf(1) / 2))
