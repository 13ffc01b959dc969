"""
The tetrahedron index I_Delta(m, e), its symmetric form J_Delta(a, b, c),
the FKB form J^FKB(a, b, c) and the opposite-edge weight S_infinity.

All sums over n are infinite; each one is cut where the exponent of the
summand numerator (a convex quadratic in n) has passed its vertex and
reached the target precision. Denominators are products of (q;q)_k with
constant term 1, so a summand never contributes below its numerator
exponent, and past the vertex that exponent only grows.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from typing import Sequence

from spindex import qseries as qs
from spindex.blocks import SixColors
from spindex.qseries import QSeries

__all__ = [
    "i_delta",
    "j_delta",
    "j_delta_forms",
    "j_fkb",
    "nu",
    "leading_law",
    "s_infty",
    "s_infty_forms",
    "e_infty",
    "verify_prop1",
    "Prop1Report",
]


def _minus_sqrt_q_power(k: int, f: QSeries) -> QSeries:
    """(-q^(1/2))^k * f."""
    g = f.shift(k)
    return -g if k % 2 else g


def _convex_terms(n0: int, vertex2: int, exp2_of, prec2: int):
    """
    Yield (n, exp2) for n >= n0 until exp2_of(n) >= prec2 with 2n >= vertex2.

    exp2_of must be a convex quadratic whose real minimum is at
    n = vertex2 / 2; beyond it the exponent is nondecreasing, so every
    later n is also past the cutoff.
    """
    n = n0
    while True:
        g = exp2_of(n)
        if g >= prec2 and 2 * n >= vertex2:
            return
        yield n, g
        n += 1


@lru_cache(maxsize=1 << 14)
def i_delta(m: int, e: int, prec2: int) -> QSeries:
    """sum_{n >= max(0,-e)} (-1)^n q^(n(n+1)/2 - (n + e/2) m) / ((q)_n (q)_{n+e})."""

    def g(n):
        return n * (n + 1) - (2 * n + e) * m

    total = qs.zero(prec2)
    # g(n) = n^2 + (1 - 2m) n - e m has its minimum at n = m - 1/2
    for n, ex in _convex_terms(max(0, -e), 2 * m - 1, g, prec2):
        if ex >= prec2:
            continue
        rel = prec2 - ex
        term = qs.mul(qs.inv_pochhammer(n, rel), qs.inv_pochhammer(n + e, rel)).shift(ex)
        total = qs.add(total, -term if n % 2 else term)
    return total


def j_delta_forms(t: Sequence[int], prec2: int) -> tuple[QSeries, QSeries, QSeries]:
    """The three expressions for J_Delta(a,b,c) in terms of I_Delta."""
    a, b, c = t
    return (
        _minus_sqrt_q_power(-b, i_delta(b - c, a - b, prec2 + b)),
        _minus_sqrt_q_power(-c, i_delta(c - a, b - c, prec2 + c)),
        _minus_sqrt_q_power(-a, i_delta(a - b, c - a, prec2 + a)),
    )


def j_delta(t: Sequence[int], prec2: int) -> QSeries:
    """J_Delta(a,b,c) = (-q^(1/2))^(-b) I_Delta(b - c, a - b)."""
    a, b, c = t
    return _minus_sqrt_q_power(-b, i_delta(b - c, a - b, prec2 + b))


def nu(t: Sequence[int]) -> int:
    a, b, c = t
    m = min(a, b, c)
    x, y, z = a - m, b - m, c - m
    return x * y + x * z + y * z - m


def leading_law(t: Sequence[int]) -> qs.Monomial:
    """
    The lowest monomial of J_Delta(a,b,c) as it actually occurs:
    coefficient (-1)^min(a,b,c), exponent nu/2.

    Normalizing so the minimum is 0, the n = 0 summand of J^FKB is
    +q^(ab/2)/..., and translation by s multiplies by (-q^(1/2))^(-s).
    """
    return qs.Monomial((-1) ** min(t), nu(t))


@lru_cache(maxsize=1 << 14)
def _j_fkb_sum(a: int, b: int, c: int, prec2: int) -> QSeries:
    sig = a + b + c
    pair = a * b + b * c + c * a

    def g(n):
        return n * (3 * n + 1) + 2 * n * sig + pair

    total = qs.zero(prec2)
    # g(n) = 3n^2 + (1 + 2 sig) n + pair, minimum at n = -(1 + 2 sig)/6
    vertex2 = -((1 + 2 * sig) // 3)  # 2 * floor-ish of the vertex; only needs to be <= 2*vertex
    for n, ex in _convex_terms(-min(a, b, c), vertex2, g, prec2):
        if ex >= prec2:
            continue
        rel = prec2 - ex
        term = qs.mul(qs.inv_pochhammer(n + a, rel), qs.inv_pochhammer(n + b, rel))
        term = qs.mul(term, qs.inv_pochhammer(n + c, rel)).shift(ex)
        total = qs.add(total, -term if n % 2 else term)
    return total


def _j_fkb_low2(a: int, b: int, c: int) -> int:
    sig = a + b + c
    pair = a * b + b * c + c * a
    n0 = -min(a, b, c)
    # smallest numerator exponent over n >= n0 (convex, so scan to just past the vertex)
    best = None
    n = n0
    while True:
        g = n * (3 * n + 1) + 2 * n * sig + pair
        if best is not None and g > best and 6 * n + 1 + 2 * sig > 0:
            return best
        best = g if best is None else min(best, g)
        n += 1


def j_fkb(t: Sequence[int], prec2: int) -> QSeries:
    """(q)_inf sum_n (-1)^n q^(n(3n+1)/2 + n(a+b+c) + (ab+bc+ca)/2) / prod (q)_{n+a}."""
    a, b, c = sorted(t)
    low = _j_fkb_low2(a, b, c)
    s = _j_fkb_sum(a, b, c, prec2)
    return qs.mul(s, qs.pochhammer_inf(max(0, prec2 - low))).truncate(prec2)


def s_infty_forms(s, prec2: int, *, literal: bool = False) -> tuple[QSeries, QSeries]:
    """
    Both forms of S_infinity for six colors: the alpha/beta sum and the J^FKB one.

    J^FKB already carries a (q)_inf factor, so the second form is
    (1-q) J^FKB(S*). With literal=True it is taken as written,
    (1-q)(q)_inf J^FKB(S*), which has one (q)_inf too many and does not
    match the first form.
    """
    s = SixColors(*s)
    c1, c2, c3 = sorted(s.opposite_sums(), reverse=True)
    if (c1 - c2) % 2 or (c1 - c3) % 2:
        raise ValueError(f"opposite-edge sums {s.opposite_sums()} have mixed parity")
    alpha, beta = (c1 - c3) // 2, (c1 - c2) // 2

    def g(n):
        return 3 * n * n + (2 * alpha + 2 * beta + 1) * n + alpha * beta

    tail = qs.zero(prec2)
    for n, ex in _convex_terms(0, 0, g, prec2):
        if ex >= prec2:
            continue
        rel = prec2 - ex
        term = qs.mul(qs.inv_pochhammer(n, rel), qs.inv_pochhammer(n + alpha, rel))
        term = qs.mul(term, qs.inv_pochhammer(n + beta, rel)).shift(ex)
        tail = qs.add(tail, -term if n % 2 else term)
    pref = qs.mul(qs.poly_q([1, -1]), qs.pochhammer_inf(prec2))
    first = qs.mul(pref, tail).truncate(prec2)

    from spindex.blocks import starred

    second = qs.mul(qs.poly_q([1, -1]), j_fkb(starred(s), prec2)).truncate(prec2)
    if literal:
        second = qs.mul(second, qs.pochhammer_inf(prec2)).truncate(prec2)
    return first, second


def s_infty(s, prec2: int) -> QSeries:
    first, second = s_infty_forms(s, prec2)
    if not first.agrees_with(second):
        raise AssertionError(f"S_infinity displays disagree at {tuple(s)}")
    return first


def _product_to(prec2: int, factors) -> QSeries:
    """
    Product of series given as (fn(prec2) -> QSeries, lowest exp2) pairs,
    each requested at just enough precision for the product to reach prec2.
    """
    lows = [lo for _, lo in factors]
    total_low = sum(lows)
    out = qs.one()
    for fn, lo in factors:
        out = qs.mul(out, fn(prec2 - (total_low - lo)))
    return out.truncate(prec2)


def e_infty(quads: Sequence[Sequence[int]], chi: int, prec2: int, *, use_fkb: bool = True) -> QSeries:
    """(-q^(1/2))^(-chi) prod_j J(a_j, b_j, c_j), with J^FKB (default) or J_Delta."""
    fn = j_fkb if use_fkb else j_delta
    factors = [((lambda p, t=tuple(t): fn(t, p)), nu(t)) for t in quads]
    body = _product_to(prec2 + chi, factors)
    return _minus_sqrt_q_power(-chi, body)


@dataclass
class Prop1Report:
    range: int
    prec2: int
    checked: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _prop1_one(args):
    t, prec2 = args
    lhs = j_fkb(t, prec2)
    rhs = j_delta(t, prec2)
    if lhs.agrees_with(rhs):
        return None
    return (t, str(lhs), str(rhs))


def verify_prop1(rng: int, prec2: int, threads: int = 1) -> Prop1Report:
    """Check J^FKB = J_Delta coefficientwise for every |a|,|b|,|c| <= rng."""
    triples = list(iproduct(range(-rng, rng + 1), repeat=3))
    report = Prop1Report(rng, prec2)
    jobs = [(t, prec2) for t in triples]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_prop1_one, jobs, chunksize=16))
    else:
        results = [_prop1_one(j) for j in jobs]
    report.checked = len(results)
    report.mismatches = [r for r in results if r is not None]
    return report
