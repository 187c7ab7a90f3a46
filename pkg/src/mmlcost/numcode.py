"""Integer, rational and combinatorial code lengths."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

LOG_STAR_CONSTANT = math.log2(2.8665064)


def log_star(x: float) -> float:
    if x <= 0:
        raise ValueError("log* is defined for positive numbers only")
    total = 0.0
    term = math.log2(x)
    while term > 0:
        total += term
        term = math.log2(term)
    return total


def code_length(n: int) -> float:
    """Universal code length of a positive integer (Rissanen's log* code)."""
    if n < 1:
        raise ValueError(f"code_length needs n >= 1, got {n}")
    return log_star(n) + LOG_STAR_CONSTANT


@lru_cache(maxsize=4096)
def euler_totient(m: int) -> int:
    if m < 1:
        raise ValueError("totient needs m >= 1")
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def rational_cost(r: Fraction) -> float:
    """Bits to send a probability n/m: the denominator, then which numerator."""
    r = Fraction(r)
    if not 0 < r <= 1:
        raise ValueError(f"probability out of range: {r}")
    return code_length(r.denominator) + math.log2(euler_totient(r.denominator))


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        raise ValueError(f"binomial({n}, {k}) undefined")
    return math.comb(n, k)


@lru_cache(maxsize=None)
def var_assignments(d: int, n_v: int) -> int:
    """Ways to fill d ordered positions using each of n_v variables at least once."""
    if n_v == 0:
        return 1
    if n_v > d:
        raise ValueError(f"{n_v} variables cannot fill {d} positions")
    return n_v ** d - sum(math.comb(n_v, i) * var_assignments(d, i) for i in range(1, n_v))


def log2_multinomial(counts) -> float:
    """log2( (sum counts)! / prod(count!) ) without building factorials."""
    counts = [int(c) for c in counts]
    if not counts:
        raise ValueError("empty multinomial")
    if any(c < 0 for c in counts):
        raise ValueError("negative count")
    # drop the largest count: its factorial cancels with the head of the numerator
    ordered = sorted(counts)
    big = ordered[-1]
    total = big
    bits = 0.0
    for c in ordered[:-1]:
        # (total+1)...(total+c) / c!  is C(total+c, c)
        bits += math.lgamma(total + c + 1) - math.lgamma(total + 1) - math.lgamma(c + 1)
        total += c
    return bits / math.log(2)


def _frac(x: float) -> float:
    return x - math.floor(x)


def _inversion_denominators(x: float, limit: float = 1e15):
    """Successive denominators from repeatedly inverting fractional parts."""
    q = 1.0
    value = x
    for _ in range(64):
        yield q
        f = _frac(value)
        if f == 0:
            return
        value = 1 / f
        q *= value
        if q > limit:
            return


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator strictly inside (lo, hi)."""
    fl = math.floor(lo)
    if fl + 1 < hi:
        return Fraction(fl + 1)
    # both ends share the integer part fl
    if lo == fl:
        # need something in (fl, hi)
        rest = hi - fl
        k = math.floor(1 / rest) + 1
        return fl + Fraction(1, k)
    inner = simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / inner


def rational_approx(x, precision: float = 1e-5) -> Fraction:
    """Approximate x > 0 by p/q with |x - p/q| < precision.

    Denominators come from decimal inversion; when that runs away the
    smallest denominator meeting the precision is used instead.
    """
    exact = Fraction(x) if not isinstance(x, float) else Fraction(repr(x))
    if exact <= 0:
        raise ValueError("rational_approx needs a positive value")
    whole = math.floor(exact)
    part = exact - whole
    if part == 0:
        return Fraction(whole)
    eps = Fraction(repr(precision)) if isinstance(precision, float) else Fraction(precision)
    for q in _inversion_denominators(float(part)):
        den = max(1, round(q))
        cand = Fraction(round(part * den), den)
        if cand > 0 and abs(cand - part) < eps:
            return whole + cand
    lo = max(Fraction(0), part - eps)
    cand = simplest_between(lo, part + eps)
    if cand == 0:
        cand = simplest_between(Fraction(0), part + eps)
    return whole + cand


def parse_precision(text: str) -> float:
    """Accept `0.00001` style tolerances or a digit count up to 15."""
    text = text.strip()
    if text.isdigit():
        digits = int(text)
        if not 1 <= digits <= 15:
            raise ValueError("precision digits must be between 1 and 15")
        return 10.0 ** -digits
    value = float(text)
    if not 1e-15 <= value <= 0.1:
        raise ValueError("precision must lie between 1e-15 and 0.1")
    return value


def precision_digits(precision: float) -> int:
    return max(1, min(15, round(-math.log10(precision))))
