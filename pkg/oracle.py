"""Reference values of W_k and Wright omega by Halley iteration.

Nothing here uses the series under study, so a disagreement between a
series and the oracle points at the series. Seeds follow the usual regions:
a power series near 0, a square-root expansion around the branch point -1/e,
log(1+z) for moderate |z| and L - ln L for large |z|.

Real-typed inputs on a real branch segment give real-typed results. Complex
inputs follow the counter-clockwise branch-cut closure.
"""

from __future__ import annotations

from functools import lru_cache

import mpmath

from errors import ConvergenceFailure, DomainError, RayError
from numerics import is_complex, to_mp

BRANCHES = (-1, 0, 1)
MAX_ITERATIONS = 60
GUARD_BITS = 20


def _branch_point_series(p):
    return -1 + p - p ** 2 / 3 + 11 * p ** 3 / 72


def _seed(k: int, z, real: bool):
    """Initial guess for W_k(z)."""
    e = mpmath.e
    near_branch = 2 * (e * z + 1)
    if real:
        near_branch = max(near_branch, 0)
        if k == 0:
            if abs(z) <= 0.25:
                return z - z ** 2 + 1.5 * z ** 3
            if abs(z + 1 / e) <= 0.7:
                return _branch_point_series(mpmath.sqrt(near_branch))
            if abs(z) <= 3:
                return mpmath.log1p(z)
            L = mpmath.log(z)
            return L - mpmath.log(L)
        # k == -1 on [-1/e, 0)
        if abs(z + 1 / e) < 0.3:
            return _branch_point_series(-mpmath.sqrt(near_branch))
        L = mpmath.log(-z)
        return L - mpmath.log(-L)

    if k == 0:
        if abs(z) <= 0.25:
            return z - z ** 2 + 1.5 * z ** 3
        if abs(z + 1 / e) <= 0.7:
            return _branch_point_series(mpmath.sqrt(near_branch))
        if abs(z) <= 3:
            return mpmath.log(1 + z)
        L = mpmath.log(z)
        return L - mpmath.log(L)
    if k == -1:
        if abs(z + 1 / e) < 0.3 and mpmath.im(z) >= 0:
            return _branch_point_series(-mpmath.sqrt(near_branch))
        L = mpmath.log(z) - 2j * mpmath.pi
        return L - mpmath.log(L)
    # k == 1
    if abs(z + 1 / e) < 0.3 and mpmath.im(z) < 0:
        return _branch_point_series(-mpmath.sqrt(near_branch))
    L = mpmath.log(z) + 2j * mpmath.pi
    return L - mpmath.log(L)


def _halley(z, w):
    """Polish w towards w*e^w = z."""
    step_tol = 4 * mpmath.eps
    f_tol = mpmath.eps * max(1, abs(z))
    for _ in range(MAX_ITERATIONS):
        ew = mpmath.exp(w)
        f = w * ew - z
        if abs(f) <= f_tol:
            return w
        w1 = w + 1
        if w1 == 0:
            w1 = mpmath.eps
        t = f / (ew * w1 - (w + 2) * f / (2 * w1))
        w = w - t
        if abs(t) <= step_tol * (1 + abs(w)):
            return w
    raise ConvergenceFailure(
        f"Halley iteration for W({mpmath.nstr(z, 10)}) did not converge in {MAX_ITERATIONS} steps"
    )


def lambert_w(k: int, z):
    """Branch k of the Lambert W function.

    Real-typed z gives a real result on [-1/e, inf) for k = 0 and on
    [-1/e, 0) for k = -1. A real z below -1/e on k = 0 gives the complex
    value approached from above.
    """
    if k not in BRANCHES:
        raise DomainError(f"branch k must be one of {BRANCHES}, got {k}")

    real = not is_complex(z)
    z = to_mp(z)
    branch_point = -1 / mpmath.e
    slack = 8 * mpmath.eps

    if real:
        if k == 1:
            raise DomainError("W_1 has no real values; pass a complex argument")
        if k == -1 and not (branch_point * (1 + slack) <= z < 0):
            raise DomainError(f"real W_-1 needs -1/e <= z < 0, got {mpmath.nstr(z, 10)}")
        if k == 0 and z < branch_point * (1 + slack):
            real = False
            z = mpmath.mpc(z)
        elif z == 0 and k == 0:
            return mpmath.mpf(0)
    elif z == 0:
        if k == 0:
            return mpmath.mpc(0)
        raise DomainError(f"W_{k} is singular at z = 0")

    with mpmath.extraprec(GUARD_BITS):
        w = _halley(z, _seed(k, z, real))
    return +w


@lru_cache(maxsize=None)
def _omega_constant(prec: int):
    with mpmath.workprec(prec):
        return lambert_w(0, mpmath.mpf(1))


def omega_constant():
    """W(1) = 0.56714329... at the working precision."""
    return _omega_constant(mpmath.mp.prec)


def unwinding_number(z) -> int:
    """K(z) = ceil((Im z - pi) / (2 pi))."""
    return int(mpmath.ceil((mpmath.im(z) - mpmath.pi) / (2 * mpmath.pi)))


def wright_omega(z):
    """Wright omega: the solution of omega + ln(omega) = z."""
    real = not is_complex(z)
    z = to_mp(z)
    if real:
        return lambert_w(0, mpmath.exp(z))

    x, y = mpmath.re(z), mpmath.im(z)
    if abs(y) == mpmath.pi and x <= -1:
        raise RayError(f"omega is undefined on the ray {mpmath.nstr(z, 10)} (Im z = +-pi, Re z <= -1)")
    k = unwinding_number(z)
    if k not in BRANCHES:
        raise DomainError(f"unwinding number {k} outside supported branches {BRANCHES}")

    w = lambert_w(k, mpmath.exp(z))
    # One Newton step on omega + ln(omega) - z, kept only if it helps.
    with mpmath.extraprec(GUARD_BITS):
        residual = w + mpmath.log(w) - z
        polished = w - residual / (1 + 1 / w)
        if abs(polished + mpmath.log(polished) - z) < abs(residual):
            w = polished
    return +w


def fundamental_u(sigma, tau):
    """Exact u solving 1 - e^(-u) + sigma*u - tau = 0, via omega."""
    sigma, tau = to_mp(sigma), to_mp(tau)
    if sigma == 0:
        return -mpmath.log(1 - tau)
    shift = (1 - tau) / sigma
    return wright_omega(shift - mpmath.log(sigma)) - shift


def psi_residual(t) -> mpmath.mpf:
    """|e^(-psi) - psi - t| with psi = W(e^t) - t."""
    t = to_mp(t)
    psi = lambert_w(0, mpmath.exp(t)) - t
    return abs(mpmath.exp(-psi) - psi - t)
