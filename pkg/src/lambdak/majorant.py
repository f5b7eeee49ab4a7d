"""Closed-form constants and the exact polynomial majorant of |t|.

With ``s = sqrt(r+2)`` the majorant is ``H(t) + t`` where

    H(t) = a_r + b_r f2(r, t) - gamma_r f4(r, t) - t
         = (1 - t)(s t - 1)^2 (s t + s + 2) / (2 (s + 1)^2),

so ``|t| <= a_r + b_r f2 - gamma_r f4`` on [-1, 1] with equality at
t = 1 and t = 1/s. Everything here is computed in Q[sqrt(r+2)] (or
Q[sqrt(k+1)] for alpha_k) and compared exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exact import QuadExt, QuadPoly, to_float
from .kernels import f2, f2_poly, f4, f4_poly

TIGHT_K = (2, 3, 4, 8, 24)


def _s(r: int) -> QuadExt:
    return QuadExt.sqrt(r + 2)


def alpha(k: int) -> QuadExt:
    """((k-2) sqrt(k+1) + 2) / (2k(k-1)), over Q[sqrt(k+1)]."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    den = 2 * k * (k - 1)
    return QuadExt(Fraction(2, den), Fraction(k - 2, den), k + 1)


def beta(r: int) -> QuadExt:
    """(r + sqrt(r+2)) / (1 + sqrt(r+2)), over Q[sqrt(r+2)]."""
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    s = _s(r)
    return (s + r) / (s + 1)


def nikiforov_bound(k: int) -> float:
    return 1.0 / (2.0 * math.sqrt(k - 1))


@dataclass(frozen=True)
class MajorantCoeffs:
    r: int
    s: QuadExt
    a: QuadExt
    b: QuadExt
    gamma: QuadExt

    def floats(self) -> tuple[float, float, float]:
        return to_float(self.a), to_float(self.b), to_float(self.gamma)

    def slack(self) -> QuadExt:
        """``r a - b``, which must be nonnegative."""
        return self.a * self.r - self.b


def majorant_coeffs(r: int) -> MajorantCoeffs:
    if r < 2:
        raise ValueError(f"r must be >= 2, got {r}")
    s = _s(r)
    sp1sq = (s + 1) ** 2
    a = (s * s + s - 2) / ((s + 1) * r)
    b = s * (s * s + 2 * s + 3) / (sp1sq * 2)
    gamma = s ** 3 / (sp1sq * 2)
    coeffs = MajorantCoeffs(r, s, a, b, gamma)
    witness = ((s - 2) * (s + 1) * (s + 3) + 2) / (sp1sq * 2)
    if coeffs.slack() != witness:
        raise ArithmeticError(f"r a_r - b_r does not match its factored form at r={r}")
    if coeffs.slack().sign() < 0 or gamma.sign() < 0:
        raise ArithmeticError(f"majorant coefficients violate b <= r a or gamma >= 0 at r={r}")
    return coeffs


@dataclass(frozen=True)
class BoundConstants:
    k: int
    alpha_k: QuadExt
    r: int
    beta_r: QuadExt

    @property
    def tight(self) -> bool:
        return self.k in TIGHT_K


def bound_constants(k: int) -> BoundConstants:
    """alpha_k and beta_{k-1}, cross-checked through alpha_k = beta_{k-1} / (2(k-1))."""
    a = alpha(k)
    r = k - 1
    if r < 2:
        # k = 2: beta_1 = 1 by the same formula, and 1/2 = alpha_2
        b = QuadExt(1, 0, 3)
    else:
        b = beta(r)
    if abs(to_float(b) / (2 * r) - to_float(a)) > 1e-14:
        raise ArithmeticError(f"alpha_{k} != beta_{r} / (2 r)")
    return BoundConstants(k, a, r, b)


def majorant_polynomial(r: int) -> QuadPoly:
    """``a_r + b_r f2 - gamma_r f4`` as an exact polynomial in t."""
    c = majorant_coeffs(r)
    d = r + 2
    return f2_poly(r, d) * c.b - f4_poly(r, d) * c.gamma + c.a


def gap_polynomial(r: int) -> QuadPoly:
    """``H(t) = majorant(t) - t``."""
    return majorant_polynomial(r) - QuadPoly.variable(r + 2)


def factored_gap(r: int) -> QuadPoly:
    """``(1 - t)(s t - 1)^2 (s t + s + 2) / (2 (s + 1)^2)`` expanded."""
    d = r + 2
    s = _s(r)
    one_minus_t = QuadPoly([1, -1], d)
    st_minus_1 = QuadPoly([-1, s], d)
    last = QuadPoly([s + 2, s], d)
    scale = ((s + 1) ** 2 * 2).inverse()
    return one_minus_t * st_minus_1 * st_minus_1 * last * scale


def majorant_identity_residual(r: int) -> QuadPoly:
    """Expanded-minus-factored form; the zero polynomial when the certificate holds."""
    return gap_polynomial(r) - factored_gap(r)


@dataclass(frozen=True)
class RootCheck:
    r: int
    h_at_1: QuadExt
    h_at_inv_s: QuadExt
    dh_at_inv_s: QuadExt

    @property
    def ok(self) -> bool:
        return self.h_at_1.is_zero() and self.h_at_inv_s.is_zero() and self.dh_at_inv_s.is_zero()


def majorant_roots(r: int) -> RootCheck:
    """H(1), H(1/s), H'(1/s) evaluated exactly; 1/s = s/(r+2)."""
    h = gap_polynomial(r)
    inv_s = QuadExt(0, Fraction(1, r + 2), r + 2)
    return RootCheck(r, h(1), h(inv_s), h.derivative()(inv_s))


def majorant_eval(r: int, t: float) -> float:
    if abs(t) > 1:
        raise ValueError(f"t must lie in [-1, 1], got {t}")
    a, b, g = majorant_coeffs(r).floats()
    return a + b * f2(r, t) - g * f4(r, t)


def mmp_bound(n: int, r: int) -> float:
    """Older l1 bound r + sqrt((n-1) r (n-r)) for rank-r projections."""
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    return r + math.sqrt((n - 1) * r * (n - r))
