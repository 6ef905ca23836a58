"""Exact triangles of Stirling-type numbers and the identities that link them.

Four families are generated from their row recurrences and memoized as
immutable tuples up to the ``triangle_cap`` setting:

* Stirling cycle numbers ``[n; k]``
* 2-associated Stirling subset numbers ``{n; k}`` (blocks of size >= 2)
* second-order Eulerian numbers ``<<n; k>>``
* associated Stirling numbers of the first kind ``d(m, k)``

The identity checks return the ``{'success', 'identity', 'error'}`` result
shape used across the tool; ``error`` names the first index that differs.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Any, Callable, Dict, Tuple, Union

import db
from errors import DomainError, IdentityFailure

__all__ = [
    "stirling_cycle",
    "stirling2_assoc2",
    "eulerian2",
    "assoc_stirling1_d",
    "eulerian_polynomial",
    "evaluate_polynomial",
    "generalized_binomial",
    "check_carlitz_riordan",
    "check_binomial_transform",
    "alternating_sum_2assoc",
    "assoc2_sum",
    "check_euler_d_2assoc",
]

Rational = Union[int, Fraction]
Triangle = Tuple[Tuple[int, ...], ...]


def triangle_cap() -> int:
    """Largest row index the memo tables are built for."""
    return db.get_int_setting('triangle_cap')


def _build(cap: int, step: Callable[[Triangle, int, int], int]) -> Triangle:
    rows = [(1,)]
    for n in range(1, cap + 1):
        built = tuple(rows)
        rows.append(tuple(step(built, n, k) for k in range(n + 1)))
    return tuple(rows)


def _at(rows: Triangle, n: int, k: int) -> int:
    if n < 0 or k < 0 or n >= len(rows) or k >= len(rows[n]):
        return 0
    return rows[n][k]


def _stirling_cycle_step(rows: Triangle, n: int, k: int) -> int:
    return _at(rows, n - 1, k - 1) + (n - 1) * _at(rows, n - 1, k)


def _assoc2_step(rows: Triangle, n: int, k: int) -> int:
    return k * _at(rows, n - 1, k) + (n - 1) * _at(rows, n - 2, k - 1)


def _eulerian2_step(rows: Triangle, n: int, k: int) -> int:
    return (k + 1) * _at(rows, n - 1, k) + (2 * n - 1 - k) * _at(rows, n - 1, k - 1)


def _d_step(rows: Triangle, m: int, k: int) -> int:
    return (m - 1) * (_at(rows, m - 1, k) + _at(rows, m - 2, k - 1))


@lru_cache(maxsize=None)
def _table(name: str, cap: int) -> Triangle:
    steps = {
        'stirling_cycle': _stirling_cycle_step,
        'assoc2': _assoc2_step,
        'eulerian2': _eulerian2_step,
        'd': _d_step,
    }
    return _build(cap, steps[name])


def _lookup(name: str, n: int, k: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    cap = triangle_cap()
    if n > cap:
        raise DomainError(f"row {n} exceeds triangle_cap={cap}; raise the setting to go further")
    return _table(name, cap)[n][k]


def stirling_cycle(n: int, k: int) -> int:
    """Unsigned Stirling number of the first kind [n; k]."""
    return _lookup('stirling_cycle', n, k)


def stirling2_assoc2(n: int, k: int) -> int:
    """Partitions of an n-set into k blocks of size at least two."""
    return _lookup('assoc2', n, k)


def eulerian2(n: int, k: int) -> int:
    """Second-order Eulerian number <<n; k>>."""
    return _lookup('eulerian2', n, k)


def assoc_stirling1_d(m: int, k: int) -> int:
    """Associated Stirling number of the first kind d(m, k).

    Defined by [ln(1+v) - v]^k = k! * sum_m (-1)^(m+k) d(m, k) v^m / m!,
    so d(m, k) = 0 for m < 2k.
    """
    return _lookup('d', m, k)


def eulerian_polynomial(m: int) -> Tuple[int, ...]:
    """Coefficients of q_m(r) indexed by power of r.

    The coefficient of r^(k+1) is (-1)^k <<m-1; k>>, so q_1(r) = r.
    """
    if m < 1:
        raise DomainError(f"eulerian_polynomial needs m >= 1, got {m}")
    coeffs = [0] * (m + 1)
    for k in range(m):
        coeffs[k + 1] = (-1) ** k * eulerian2(m - 1, k)
    return tuple(coeffs)


def evaluate_polynomial(coeffs, x):
    """Horner evaluation of sum coeffs[i] * x**i."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def generalized_binomial(a: int, b: int) -> int:
    """Binomial coefficient for any integer a; zero when b < 0."""
    if b < 0:
        return 0
    if a >= 0:
        return comb(a, b)
    return (-1) ** b * comb(b - a - 1, b)


def _result(identity: str, error: str = '') -> Dict[str, Any]:
    return {'success': not error, 'identity': identity, 'error': error}


def check_carlitz_riordan(n: int, lam: Rational) -> Dict[str, Any]:
    """Check both Carlitz-Riordan identities exactly at a rational argument.

    Form (a) is evaluated at lam, form (b) at mu = lam / (1 - lam).
    At lam = -1 only the k = n term of form (a) would divide by zero, and its
    Eulerian number vanishes.
    """
    lam = Fraction(lam)
    if n < 1:
        raise DomainError(f"Carlitz-Riordan identities need n >= 1, got {n}")
    if lam == 1:
        raise DomainError(f"Carlitz-Riordan identities need lam != 1, got {lam}")

    left_a = sum(
        eulerian2(n, k) * (1 + lam) ** (n - k - 1) * lam ** k
        for k in range(n + 1) if eulerian2(n, k)
    )
    right_a = sum(stirling2_assoc2(n + k, k) * lam ** (k - 1) for k in range(1, n + 1))
    if left_a != right_a:
        return _result('carlitz_riordan_a', f"n={n} lam={lam}: {left_a} != {right_a}")

    mu = lam / (1 - lam)
    left_b = sum(eulerian2(n, k) * mu ** k for k in range(n + 1))
    right_b = sum(
        stirling2_assoc2(n + k, k) * mu ** (k - 1) * (1 - mu) ** (n - k)
        for k in range(1, n + 1)
    )
    if left_b != right_b:
        return _result('carlitz_riordan_b', f"n={n} mu={mu}: {left_b} != {right_b}")
    return _result('carlitz_riordan')


def check_binomial_transform(n: int, q: int) -> Dict[str, Any]:
    """Check the binomial-transform pair between {n+q; q} and <<n; q>>."""
    if n < 1 or q < 0:
        raise DomainError(f"binomial transform needs n >= 1 and q >= 0, got n={n} q={q}")

    forward = sum(
        generalized_binomial(n - p - 1, q - p - 1) * eulerian2(n, p)
        for p in range(n + 1)
    )
    if forward != stirling2_assoc2(n + q, q):
        return _result('binomial_transform_forward',
                       f"n={n} q={q}: {forward} != {stirling2_assoc2(n + q, q)}")

    inverse = sum(
        (-1) ** abs(q - p) * generalized_binomial(n - p - 1, q - p) * stirling2_assoc2(n + p + 1, p + 1)
        for p in range(n + 1)
    )
    if inverse != eulerian2(n, q):
        return _result('binomial_transform_inverse',
                       f"n={n} q={q}: {inverse} != {eulerian2(n, q)}")
    return _result('binomial_transform')


def alternating_sum_2assoc(m: int) -> int:
    """Sum over p of (-1)^(p+m-1) {p+m-1; p}, which must equal (m-1)!."""
    if m < 1:
        raise DomainError(f"alternating_sum_2assoc needs m >= 1, got {m}")
    total = sum((-1) ** (p + m - 1) * stirling2_assoc2(p + m - 1, p) for p in range(m))
    if total != factorial(m - 1):
        raise IdentityFailure(f"alternating 2-associated sum at m={m}: {total} != {factorial(m - 1)}")
    return total


def assoc2_sum(m: int) -> int:
    """Sum of {p+m-1; p} for p = 1 .. m-1 (the p = 0 term skipped)."""
    if m < 2:
        raise DomainError(f"assoc2_sum needs m >= 2, got {m}")
    return sum(stirling2_assoc2(p + m - 1, p) for p in range(1, m))


def euler_d_2assoc_sums(n: int, w: Rational) -> Tuple[Any, Any, Any]:
    """The Eulerian, d(m,k) and 2-associated sums compared by the three identities.

    Works for exact and mpmath ``w`` alike.
    """
    one_w = 1 + w
    eulerian = sum(
        eulerian2(n - 1, k) * (-1) ** k * w ** k for k in range(n)
    ) / one_w ** (n - 1)
    d_sum = sum(
        (-1) ** (n + k - 1) * assoc_stirling1_d(n + k - 1, k) / one_w ** k for k in range(n)
    )
    assoc = sum(
        stirling2_assoc2(n + k - 1, k) * (-1) ** k * w ** k / one_w ** k for k in range(n)
    )
    return eulerian, d_sum, assoc


def check_euler_d_2assoc(n: int, w: Rational, tol=None) -> Dict[str, Any]:
    """Check the three Eulerian / d(m,k) / 2-associated identities.

    The n = 1 term of the h-expansion carries the extra t, so identities (b)
    and (c) compare against S - (1 + w) when n = 1. Exact ``w`` is compared
    for equality; otherwise ``tol`` bounds the absolute difference.
    """
    if n < 1:
        raise DomainError(f"Euler/d/2-assoc identities need n >= 1, got {n}")
    if isinstance(w, (int, Fraction)):
        w = Fraction(w)
        if w <= 0:
            raise DomainError(f"Euler/d/2-assoc identities need w > 0, got {w}")

    def _differs(a, b) -> bool:
        if tol is None:
            return a != b
        return abs(a - b) > tol

    eulerian, d_sum, assoc = euler_d_2assoc_sums(n, w)
    shift = (1 + w) if n == 1 else 0

    if _differs(eulerian, d_sum):
        return _result('euler_d_2assoc_a', f"n={n}: {eulerian} != {d_sum}")
    if _differs(-w * eulerian + shift, assoc):
        return _result('euler_d_2assoc_b', f"n={n}: {-w * eulerian + shift} != {assoc}")
    if _differs(-w * d_sum + shift, assoc):
        return _result('euler_d_2assoc_c', f"n={n}: {-w * d_sum + shift} != {assoc}")
    return _result('euler_d_2assoc')
