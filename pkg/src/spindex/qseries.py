"""
Truncated Laurent series in q^(1/2) with exact integer coefficients.

Exponents are stored doubled (``exp2`` is twice the power of q), so
q^(1/2) has exp2 == 1 and no rational exponent ever appears. A series
carries ``prec2``: coefficients at exp2 >= prec2 are unknown. ``prec2 is
None`` marks an exact Laurent polynomial.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from spindex import _kernels

__all__ = [
    "QSeries",
    "Monomial",
    "NotInvertibleError",
    "monomial",
    "zero",
    "one",
    "add",
    "mul",
    "invert_unit",
    "pochhammer",
    "pochhammer_inf",
    "inv_pochhammer",
    "quantum_integer",
    "quantum_factorial",
    "quantum_multinomial",
    "q_multinomial",
    "exact_div",
    "extremal",
    "hat",
    "to_record",
    "from_record",
    "dumps",
    "loads",
]


class NotInvertibleError(ArithmeticError):
    pass


def _pmin(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True)
class Monomial:
    sign_coeff: int
    exp2: int

    def __post_init__(self):
        if self.sign_coeff == 0:
            raise ValueError("monomial coefficient must be nonzero")


@dataclass(frozen=True, eq=True)
class QSeries:
    """Immutable truncated Laurent series; build through the module functions."""

    min_exp2: int
    coeffs: tuple
    prec2: int | None = None

    @staticmethod
    def make(min_exp2: int, coeffs: Iterable[int], prec2: int | None = None) -> "QSeries":
        cs = list(coeffs)
        if prec2 is not None:
            keep = max(0, prec2 - min_exp2)
            del cs[keep:]
        lo = 0
        while lo < len(cs) and cs[lo] == 0:
            lo += 1
        hi = len(cs)
        while hi > lo and cs[hi - 1] == 0:
            hi -= 1
        if lo == hi:
            return QSeries(0, (), prec2)
        return QSeries(min_exp2 + lo, tuple(cs[lo:hi]), prec2)

    # -- inspection -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_exact(self) -> bool:
        return self.prec2 is None

    @property
    def valuation2(self) -> int | None:
        """Lowest exp2 that may carry a nonzero coefficient (None for exact 0)."""
        if self.coeffs:
            return self.min_exp2
        return self.prec2

    @property
    def max_exp2(self) -> int:
        if not self.coeffs:
            raise ValueError("zero series has no terms")
        return self.min_exp2 + len(self.coeffs) - 1

    def coeff(self, exp2: int) -> int:
        if self.prec2 is not None and exp2 >= self.prec2:
            raise ValueError(f"coefficient at exp2={exp2} is beyond precision {self.prec2}")
        i = exp2 - self.min_exp2
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def terms(self) -> list[tuple[int, int]]:
        return [(self.min_exp2 + i, c) for i, c in enumerate(self.coeffs) if c]

    def dense(self, lo2: int, hi2: int) -> list[int]:
        """Coefficients on [lo2, hi2) as a list (zeros outside support)."""
        out = [0] * max(0, hi2 - lo2)
        for i, c in enumerate(self.coeffs):
            e = self.min_exp2 + i
            if lo2 <= e < hi2:
                out[e - lo2] = c
        return out

    # -- arithmetic sugar -------------------------------------------------

    def __add__(self, other):
        return add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self.min_exp2, tuple(-c for c in self.coeffs), self.prec2)

    def __sub__(self, other):
        return add(self, -_coerce(other))

    def __rsub__(self, other):
        return add(_coerce(other), -self)

    def __mul__(self, other):
        if isinstance(other, int):
            return scale(self, other)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return scale(self, other)
        return mul(other, self)

    def __pow__(self, n: int):
        if n < 0:
            return invert_unit(self) ** (-n)
        result = one()
        base = self
        while n:
            if n & 1:
                result = mul(result, base)
            n >>= 1
            if n:
                base = mul(base, base)
        return result

    def shift(self, exp2: int) -> "QSeries":
        """Multiply by q^(exp2/2)."""
        p = None if self.prec2 is None else self.prec2 + exp2
        return QSeries(self.min_exp2 + exp2 if self.coeffs else 0, self.coeffs, p)

    def truncate(self, prec2: int | None) -> "QSeries":
        p = _pmin(self.prec2, prec2)
        if p == self.prec2:
            return self
        return QSeries.make(self.min_exp2, self.coeffs, p)

    def agrees_with(self, other: "QSeries", upto2: int | None = None) -> bool:
        """Coefficientwise equality on exp2 < upto2 (default: common precision)."""
        p = _pmin(self.prec2, other.prec2)
        p = _pmin(p, upto2)
        if p is None:
            return self.min_exp2 == other.min_exp2 and self.coeffs == other.coeffs
        if self.prec2 is not None and p > self.prec2 or other.prec2 is not None and p > other.prec2:
            raise ValueError("comparison requested beyond known precision")
        a = self.truncate(p)
        b = other.truncate(p)
        return a.coeffs == b.coeffs and (not a.coeffs or a.min_exp2 == b.min_exp2)

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return f"QSeries({format_series(self)})"


def _coerce(x) -> QSeries:
    if isinstance(x, QSeries):
        return x
    if isinstance(x, int):
        return monomial(x, 0)
    raise TypeError(f"cannot use {type(x).__name__} as a q-series")


def format_series(f: QSeries) -> str:
    parts = []
    for e, c in f.terms():
        if e == 0:
            mono = ""
        elif e == 2:
            mono = "q"
        elif e % 2 == 0:
            mono = f"q^{e // 2}"
        else:
            mono = f"q^({e}/2)"
        if mono and abs(c) == 1:
            body = mono
        elif mono:
            body = f"{abs(c)}*{mono}"
        else:
            body = str(abs(c))
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        s = "0"
    else:
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
    if f.prec2 is not None:
        p = f.prec2
        s += f" + O(q^{p // 2})" if p % 2 == 0 else f" + O(q^({p}/2))"
    return s


# -- constructors -------------------------------------------------------------


def monomial(c: int, exp2: int, prec2: int | None = None) -> QSeries:
    return QSeries.make(exp2, [c], prec2)


def zero(prec2: int | None = None) -> QSeries:
    return QSeries(0, (), prec2)


def one(prec2: int | None = None) -> QSeries:
    return monomial(1, 0, prec2)


def from_terms(terms: Iterable[tuple[int, int]], prec2: int | None = None) -> QSeries:
    d: dict[int, int] = {}
    for e, c in terms:
        d[e] = d.get(e, 0) + c
    d = {e: c for e, c in d.items() if c and (prec2 is None or e < prec2)}
    if not d:
        return zero(prec2)
    lo, hi = min(d), max(d)
    return QSeries.make(lo, [d.get(e, 0) for e in range(lo, hi + 1)], prec2)


def poly_q(coeffs: Sequence[int], prec2: int | None = None) -> QSeries:
    """Series from coefficients of 1, q, q^2, ... (integer powers of q)."""
    dense = [0] * (2 * len(coeffs))
    dense[::2] = coeffs
    return QSeries.make(0, dense, prec2)


# -- ring operations ----------------------------------------------------------


def scale(f: QSeries, c: int) -> QSeries:
    if c == 0:
        return zero(f.prec2)
    return QSeries(f.min_exp2, tuple(c * x for x in f.coeffs), f.prec2)


def add(f: QSeries, g: QSeries) -> QSeries:
    p = _pmin(f.prec2, g.prec2)
    if not f.coeffs:
        return g.truncate(p)
    if not g.coeffs:
        return f.truncate(p)
    lo = min(f.min_exp2, g.min_exp2)
    hi = max(f.max_exp2, g.max_exp2) + 1
    if p is not None:
        hi = min(hi, p)
    if hi <= lo:
        return zero(p)
    out = f.dense(lo, hi)
    off = g.min_exp2 - lo
    for i, c in enumerate(g.coeffs):
        if off + i < hi - lo:
            out[off + i] += c
    return QSeries.make(lo, out, p)


def mul(f: QSeries, g: QSeries) -> QSeries:
    vf, vg = f.valuation2, g.valuation2
    if vf is None or vg is None:  # exact zero
        return zero(None)
    p = None
    if f.prec2 is not None:
        p = f.prec2 + vg
    if g.prec2 is not None:
        p = _pmin(p, g.prec2 + vf)
    if not f.coeffs or not g.coeffs:
        return zero(p)
    lo = f.min_exp2 + g.min_exp2
    full = len(f.coeffs) + len(g.coeffs) - 1
    n = full if p is None else max(0, min(full, p - lo))
    return QSeries.make(lo, _kernels.conv_trunc(list(f.coeffs), list(g.coeffs), n), p)


def product(factors: Iterable[QSeries]) -> QSeries:
    out = one()
    for f in factors:
        out = mul(out, f)
    return out


def invert_unit(f: QSeries, prec2: int | None = None) -> QSeries:
    """
    Inverse of a series whose lowest coefficient is +-1.

    For a truncated ``f`` the result is known to relative precision
    ``f.prec2 - f.min_exp2``; for an exact ``f`` pass the absolute
    ``prec2`` wanted for the result.
    """
    if not f.coeffs:
        raise NotInvertibleError("not invertible over the integers: zero series")
    if f.coeffs[0] not in (1, -1):
        raise NotInvertibleError(
            f"not invertible over the integers: leading coefficient {f.coeffs[0]}"
        )
    lo = -f.min_exp2
    p = None if f.prec2 is None else lo + (f.prec2 - f.min_exp2)
    p = _pmin(p, prec2)
    if p is None:
        if len(f.coeffs) == 1:
            return QSeries(lo, f.coeffs, None)
        raise ValueError("inverse of a non-monomial polynomial needs an explicit prec2")
    n = max(0, p - lo)
    return QSeries.make(lo, _kernels.unit_inverse(list(f.coeffs), n), p)


def exact_div(f: QSeries, g: QSeries) -> QSeries:
    """Quotient of exact Laurent polynomials, asserting divisibility."""
    if not (f.is_exact and g.is_exact):
        raise ValueError("exact_div needs exact polynomials")
    if f.is_zero:
        return f
    deg = f.max_exp2 - g.max_exp2
    lo = f.min_exp2 - g.min_exp2
    if deg < lo:
        raise ArithmeticError("polynomial division is not exact")
    q = mul(f, invert_unit(g, prec2=deg + 1 - f.min_exp2))
    q = QSeries.make(q.min_exp2, q.coeffs, None)
    if mul(q, g) != f:
        raise ArithmeticError("polynomial division is not exact")
    return q


# -- Pochhammer symbols and quantum numbers ---------------------------------


@lru_cache(maxsize=None)
def _poch_q(n: int, nq: int | None) -> tuple:
    # coefficients of (q;q)_n in powers of q, truncated to nq terms if given
    top = n * (n + 1) // 2 + 1
    size = top if nq is None else min(top, nq)
    if size <= 0:
        return ()
    c = [0] * size
    c[0] = 1
    hi = 0
    for j in range(1, n + 1):
        if j >= size:
            break
        hi = min(hi + j, size - 1)
        for k in range(hi, j - 1, -1):
            c[k] -= c[k - j]
    return tuple(c)


def _q_to_half(cs: Sequence[int]) -> list[int]:
    out = [0] * (2 * len(cs) - 1 if cs else 0)
    out[::2] = cs
    return out


def pochhammer(n: int, prec2: int | None = None) -> QSeries:
    """(q;q)_n = prod_{j=1..n} (1 - q^j), optionally truncated."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    nq = None if prec2 is None else max(0, (prec2 + 1) // 2)
    return QSeries.make(0, _q_to_half(_poch_q(n, nq)), prec2)


def pochhammer_inf(prec2: int) -> QSeries:
    """(q;q)_infinity truncated below exp2 = prec2."""
    if prec2 < 0:
        raise ValueError("prec2 must be >= 0")
    nq = (prec2 + 1) // 2
    return QSeries.make(0, _q_to_half(_poch_q(max(nq, 0), nq)), prec2)


@lru_cache(maxsize=4096)
def _inv_poch_q(n: int | None, nq: int) -> tuple:
    if nq <= 0:
        return ()
    m = nq if n is None else min(n, nq)
    return tuple(_kernels.unit_inverse(list(_poch_q(m, nq)), nq))


def inv_pochhammer(n: int | None, prec2: int) -> QSeries:
    """1/(q;q)_n (``n=None`` for infinity) to precision prec2 >= 0."""
    if prec2 <= 0:
        return zero(prec2)
    nq = (prec2 + 1) // 2
    return QSeries.make(0, _q_to_half(_inv_poch_q(n, nq)), prec2)


def quantum_integer(n: int) -> QSeries:
    """[n] = (q^(n/2) - q^(-n/2)) / (q^(1/2) - q^(-1/2))."""
    if n < 0:
        raise ValueError("quantum integer needs n >= 0")
    if n == 0:
        return zero()
    cs = [0] * (2 * n - 1)
    cs[::2] = [1] * n
    return QSeries.make(-(n - 1), cs)


@lru_cache(maxsize=256)
def quantum_factorial(n: int) -> QSeries:
    if n < 0:
        raise ValueError("quantum factorial needs n >= 0")
    if n == 0:
        return one()
    return mul(quantum_factorial(n - 1), quantum_integer(n))


@lru_cache(maxsize=4096)
def _gauss_binom_q(n: int, k: int) -> tuple:
    if k < 0 or k > n:
        return (0,)
    k = min(k, n - k)
    num = list(_poch_q(n, None))
    den = list(_poch_q(k, None))
    den = _kernels.conv_trunc(den, list(_poch_q(n - k, None)), len(den) + len(_poch_q(n - k, None)) - 1)
    size = k * (n - k) + 1
    inv = _kernels.unit_inverse(den, size)
    out = _kernels.conv_trunc(num, inv, size)
    return tuple(out)


def q_multinomial(a: int, parts: Sequence[int]) -> tuple:
    """Coefficients (powers of q) of (q;q)_a / prod (q;q)_{a_j}."""
    if any(p < 0 for p in parts) or sum(parts) != a:
        raise ValueError(f"parts {tuple(parts)} do not sum to {a}")
    out: list[int] = [1]
    acc = 0
    for p in sorted(parts):
        if p == 0:
            continue
        acc += p
        b = list(_gauss_binom_q(acc, p))
        out = _kernels.conv_trunc(out, b, len(out) + len(b) - 1)
    return tuple(out)


def quantum_multinomial(a: int, parts: Sequence[int]) -> QSeries:
    """
    [a]! / prod [a_j]!, computed as q^(-(a^2 - sum a_j^2)/4) times the
    q-multinomial coefficient.
    """
    parts = tuple(parts)
    cs = q_multinomial(a, parts)
    exp4 = -(a * a - sum(p * p for p in parts))
    if exp4 % 2:
        raise AssertionError("quantum multinomial produced a quarter-integer exponent")
    return QSeries.make(exp4 // 2, _q_to_half(list(cs)))


# -- extremal monomials and normalization -------------------------------------


def extremal(f: QSeries) -> tuple[Monomial, Monomial | None]:
    """(lowest monomial, highest monomial); the highest only for exact polynomials."""
    if not f.coeffs:
        raise ValueError("zero series has no extremal monomials")
    lo = Monomial(f.coeffs[0], f.min_exp2)
    hi = Monomial(f.coeffs[-1], f.max_exp2) if f.is_exact else None
    return lo, hi


def hat(f: QSeries) -> QSeries:
    """Divide by the lowest monomial; the result starts 1 + O(q^(1/2))."""
    if not f.coeffs:
        raise ValueError("cannot normalize the zero series")
    lead = f.coeffs[0]
    if lead not in (1, -1):
        raise NotInvertibleError(f"lowest coefficient {lead} is not +-1")
    g = f.shift(-f.min_exp2)
    return scale(g, lead) if lead == -1 else g


# -- serialization ------------------------------------------------------------

VARIABLE = "q^(1/2)"


def to_record(f: QSeries, **extra) -> dict:
    rec = {"variable": VARIABLE, "prec2": f.prec2, "terms": [[e, str(c)] for e, c in f.terms()]}
    rec.update(extra)
    return rec


def from_record(rec: dict) -> QSeries:
    if rec.get("variable", VARIABLE) != VARIABLE:
        raise ValueError(f"unsupported variable {rec.get('variable')!r}")
    return from_terms(((int(e), int(c)) for e, c in rec["terms"]), rec.get("prec2"))


def dumps(f: QSeries, **extra) -> str:
    return json.dumps(to_record(f, **extra), sort_keys=True)


def loads(line: str) -> QSeries:
    return from_record(json.loads(line))


def half_to_q(f: QSeries) -> list[int]:
    """Coefficients of q^0..q^k for a series supported on integer powers >= 0."""
    if f.prec2 is None:
        raise ValueError("need a truncated series")
    n = math.ceil(f.prec2 / 2)
    out = []
    for k in range(n):
        out.append(f.coeff(2 * k))
    return out
