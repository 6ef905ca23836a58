"""Precision modes, conversions and the small root finders used everywhere."""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Tuple

import mpmath

import db
from errors import BracketError, ConfigError

STANDARD_BITS = 53
PRECISION_MODES = ('standard', 'elevated')

# Golden-section ratio, 1/phi
_INV_PHI = (5 ** 0.5 - 1) / 2


def precision_bits(mode: str = 'standard') -> int:
    """Bits of mantissa for a precision mode."""
    if mode == 'standard':
        return STANDARD_BITS
    if mode == 'elevated':
        bits = db.get_int_setting('precision_bits')
        if bits < STANDARD_BITS:
            raise ConfigError(f"elevated precision must be at least {STANDARD_BITS} bits, got {bits}")
        return bits
    raise ConfigError(f"unknown precision mode {mode!r}; expected one of {PRECISION_MODES}")


@contextmanager
def working_precision(mode: str = 'standard'):
    """Run the block at the precision of ``mode``."""
    bits = precision_bits(mode)
    with mpmath.workprec(bits):
        yield bits


@contextmanager
def guarded(order: int):
    """Extra bits for integer-coefficient polynomials that cancel heavily."""
    with mpmath.extraprec(4 * max(order, 0) + 32):
        yield


def is_exact(x) -> bool:
    """True for int and Fraction values (bool excluded)."""
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def is_complex(x) -> bool:
    """True when ``x`` is complex-typed, even with a zero imaginary part."""
    return isinstance(x, (complex, mpmath.mpc))


def to_mp(x):
    """Convert a number to an mpmath value at the working precision."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return x
    if isinstance(x, complex):
        return mpmath.mpc(x)
    return mpmath.mpf(x)


def fsum(terms: Iterable):
    """Compensated sum."""
    return mpmath.fsum(terms)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def bisect(f: Callable, lo, hi, iterations: int = None, tol: float = 1e-14) -> Tuple:
    """Bisection on [lo, hi]; returns (root, |f(root)|).

    The endpoints may come in either order. Stops when the bracket is
    narrower than tol relative to the root or when the midpoint no longer
    moves.
    """
    if iterations is None:
        iterations = db.get_int_setting('bisection_iterations')
    lo, hi = sorted((to_mp(lo), to_mp(hi)))
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return lo, mpmath.mpf(0)
    if f_hi == 0:
        return hi, mpmath.mpf(0)
    if _sign(f_lo) == _sign(f_hi):
        raise BracketError(f"no sign change on [{mpmath.nstr(lo, 8)}, {mpmath.nstr(hi, 8)}]")

    for _ in range(iterations):
        mid = (lo + hi) / 2
        if mid == lo or mid == hi:
            break
        f_mid = f(mid)
        if f_mid == 0:
            return mid, mpmath.mpf(0)
        if _sign(f_mid) == _sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        if hi - lo <= tol * max(1, abs(mid)):
            break

    root = (lo + hi) / 2
    return root, abs(f(root))


def golden_section_min(f: Callable, lo, hi, iterations: int = 200, tol: float = 1e-12):
    """Minimizer of a unimodal function on [lo, hi]."""
    a, b = to_mp(lo), to_mp(hi)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    f_c, f_d = f(c), f(d)
    for _ in range(iterations):
        if b - a <= tol * max(1, abs(c)):
            break
        if f_c < f_d:
            b, d, f_d = d, c, f_c
            c = b - _INV_PHI * (b - a)
            f_c = f(c)
        else:
            a, c, f_c = c, d, f_d
            d = a + _INV_PHI * (b - a)
            f_d = f(d)
    return (a + b) / 2


def windowed_error(errors: Sequence, window: int = 5):
    """Max of the last ``window`` errors."""
    if not errors:
        raise ValueError("windowed_error needs at least one error")
    return max(errors[-window:])
