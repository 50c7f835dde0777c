"""Closed-form bounds for regular-orbit existence.

Every floor of a logarithmic expression is computed by exact integer
power comparison (binary search on q^(k*b) <= M^a); floating point is
used only for display values, never for a floor.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from .gfplin import is_prime

# f_p anchor tables; outside the tabulated range f_p(n) == f(n).
_FP_TABLE_P2 = {15: 127, 16: 127, 17: 253, 18: 253, 19: 505, 20: 505, 21: 930, 22: 930}
_FP_TABLE_ODD = {11: 54, 12: 88, 13: 107, 14: 175, 15: 213}


def _check_q(q: int) -> int:
    q = int(q)
    if q < 2:
        raise ValueError("prime power q must be >= 2")
    return q


def floor_scaled_log(q: int, m: int, a: int, b: int = 1) -> int:
    """Largest k >= 0 with k <= (a/b) * log_q(m), i.e. q^(k*b) <= m^a."""
    q = _check_q(q)
    m = int(m)
    a, b = int(a), int(b)
    if m < 1 or a < 0 or b < 1:
        raise ValueError("need m >= 1, a >= 0, b >= 1")
    target = m**a
    if q**b > target:
        return 0
    lo, hi = 1, 1
    while q ** (hi * b) <= target:
        lo = hi
        hi *= 2
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if q ** (mid * b) <= target:
            lo = mid
        else:
            hi = mid
    return lo


def scaled_log_real(q: int, m: int, a: int, b: int = 1) -> float:
    return a * math.log(m) / (b * math.log(q))


def f(n: int) -> int:
    """Cubic lower-bound polynomial (n^3 - 9n^2 + 14n - 6)/6."""
    val = Fraction(n**3 - 9 * n**2 + 14 * n - 6, 6)
    if val.denominator != 1:
        raise ArithmeticError(f"f({n}) is not integral: {val}")
    return int(val)


def f_p(p: int, n: int) -> int:
    """Dimension threshold below which modules are tabulated exceptions."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if p == 2:
        if n < 15:
            raise ValueError("f_p for p = 2 needs n >= 15")
        return _FP_TABLE_P2.get(n, None) if n <= 22 else f(n)
    if n < 11:
        raise ValueError("f_p for odd p needs n >= 11")
    return _FP_TABLE_ODD[n] if n <= 15 else f(n)


def eq1_floor(q: int, n: int, group_order: int) -> int:
    """floor of (n-1) * log_q|G|."""
    return floor_scaled_log(q, group_order, n - 1, 1)


def eq1_real(q: int, n: int, group_order: int) -> float:
    return scaled_log_real(q, group_order, n - 1, 1)


def eq2_floor(q: int, n: int, center_order: int) -> int:
    """floor of max{(n-1) log_q(n(n-1)|Z|), (n/2) log_q(2 n! |Z|)}; n >= 7."""
    if n < 7:
        raise ValueError("eq(2) requires n >= 7")
    z = int(center_order)
    first = floor_scaled_log(q, n * (n - 1) * z, n - 1, 1)
    second = floor_scaled_log(q, 2 * math.factorial(n) * z, n, 2)
    return max(first, second)


def eq2_real(q: int, n: int, center_order: int) -> float:
    z = int(center_order)
    return max(
        scaled_log_real(q, n * (n - 1) * z, n - 1, 1),
        scaled_log_real(q, 2 * math.factorial(n) * z, n, 2),
    )


def eq3_floor(q: int, n: int, center_order: int) -> int:
    """floor of (n/2) log_q(2 n! |Z|); n >= 7 and |Z| <= n."""
    if n < 7:
        raise ValueError("eq(3) requires n >= 7")
    if center_order > n:
        raise ValueError("eq(3) requires |Z| <= n")
    return floor_scaled_log(q, 2 * math.factorial(n) * center_order, n, 2)


def eq3_real(q: int, n: int, center_order: int) -> float:
    return scaled_log_real(q, 2 * math.factorial(n) * center_order, n, 2)


def g_floor(q: int, n: int) -> int:
    """eq(2) specialised to the largest scalar center |Z| = q - 1."""
    return eq2_floor(q, n, q - 1)


def g_real(q: int, n: int) -> float:
    return eq2_real(q, n, q - 1)


def general_bound_floor(q: int, group_order: int, r_max: int) -> int:
    """floor of r * log_q|G|, the fixed-point-ratio dimension bound."""
    return floor_scaled_log(q, group_order, r_max, 1)


def general_bound_real(q: int, group_order: int, r_max: int) -> float:
    return scaled_log_real(q, group_order, r_max, 1)


def h_assoc_floor(p: int, n: int) -> int:
    """floor of n * log_p(n!(p-1)/2) (associate-pair bound)."""
    m = math.factorial(n) * (p - 1)
    if m % 2:
        raise ArithmeticError("n!(p-1) must be even")
    return floor_scaled_log(p, m // 2, n, 1)


def h_spin_floor(p: int, n: int) -> int:
    """floor of (n/2) * log_p(n!(p-1)/2) (spin-module bound)."""
    m = math.factorial(n) * (p - 1)
    return floor_scaled_log(p, m // 2, n, 2)


def h_assoc_real(p: int, n: int) -> float:
    return scaled_log_real(p, math.factorial(n) * (p - 1) // 2, n, 1)


def h_spin_real(p: int, n: int) -> float:
    return scaled_log_real(p, math.factorial(n) * (p - 1) // 2, n, 2)


def kappa(p: int, n: int) -> int:
    return 1 if n % p == 0 else 0


def delta_cover(kind: str, n: int, p: int) -> int:
    """Minimal faithful spin dimension 2^floor((n-1-kappa)/2) resp.
    2^floor((n-2-kappa)/2) for double covers of S_n resp. A_n; p odd."""
    if p == 2:
        raise ValueError("double covers have no faithful irreducibles in characteristic 2")
    k = kappa(p, n)
    if kind == "2Sn":
        return 2 ** ((n - 1 - k) // 2)
    if kind == "2An":
        return 2 ** ((n - 2 - k) // 2)
    raise ValueError(f"kind must be 2Sn or 2An, got {kind!r}")


def r_upper(n: int, is_transposition: bool) -> int:
    """Upper bound for the fixed-point ratio denominator r(g)."""
    if is_transposition or n < 7:
        return n - 1
    return n // 2


@dataclass
class BoundReport:
    n: int
    p: int
    sn_order: int
    full_order: int  # |S_n x F_p^*|
    f: int | None
    f_p: int | None
    eq1_floor: int
    eq1_real: float
    eq2_floor: int | None
    eq2_real: float | None
    eq3_floor: int | None
    eq3_real: float | None
    g_floor: int | None
    g_real: float | None
    h_assoc_floor: int | None
    h_spin_floor: int | None
    delta_2sn: int | None
    delta_2an: int | None

    def to_dict(self) -> dict:
        return asdict(self)


def bounds_report(n: int, p: int) -> BoundReport:
    if n < 2:
        raise ValueError("need n >= 2")
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    sn = math.factorial(n)
    full = sn * (p - 1)

    def maybe(fn, *args):
        try:
            return fn(*args)
        except (ValueError, KeyError):
            return None

    return BoundReport(
        n=n,
        p=p,
        sn_order=sn,
        full_order=full,
        f=f(n),
        f_p=maybe(f_p, p, n),
        eq1_floor=eq1_floor(p, n, full),
        eq1_real=eq1_real(p, n, full),
        eq2_floor=maybe(eq2_floor, p, n, p - 1),
        eq2_real=maybe(eq2_real, p, n, p - 1),
        eq3_floor=maybe(eq3_floor, p, n, min(p - 1, n)),
        eq3_real=maybe(eq3_real, p, n, min(p - 1, n)),
        g_floor=maybe(g_floor, p, n),
        g_real=maybe(g_real, p, n),
        h_assoc_floor=maybe(h_assoc_floor, p, n) if p != 2 else None,
        h_spin_floor=maybe(h_spin_floor, p, n) if p != 2 else None,
        delta_2sn=maybe(delta_cover, "2Sn", n, p),
        delta_2an=maybe(delta_cover, "2An", n, p),
    )
