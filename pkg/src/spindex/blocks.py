"""
Spin-network building blocks: the unknot U, the theta graph and the
tetrahedron (quantum 6j-symbol), in Kauffman-Lins normalization.

Six colors follow the 2x3 matrix layout ``(a, b, e; d, c, f)`` with
opposite pairs (a, d), (b, c), (e, f). On a tetrahedron with vertices
0..3 the slots sit on edges a=01, b=02, e=12, d=23, c=13, f=03, so the
four vertex triples (a,b,e), (a,c,f), (c,d,e), (b,d,f) are the faces
012, 013, 123, 023.

Besides the exact Laurent polynomials, every block has a truncated
"hat" path: the lowest monomial is known in closed form from the
expansion (not from the lemma_extremal formulas), and the normalized series
1 + O(q) is summed directly to a requested relative precision. The
state sum only ever uses that path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from typing import NamedTuple

from spindex import qseries as qs
from spindex.qseries import Monomial, QSeries

__all__ = [
    "InadmissibleError",
    "AdmissibleTriple",
    "SixColors",
    "STData",
    "is_admissible",
    "unknot",
    "theta",
    "tet",
    "tet_pochhammer",
    "st_data",
    "lemma_extremal",
    "hat_theta",
    "hat_tet",
    "hat_tet_lsum",
    "theta_limit",
    "tet_limit",
    "tet_limit_normalized",
    "StabCase",
    "theta_stab_n0",
    "tet_stab_n0",
    "stab_check",
]


class InadmissibleError(ValueError):
    pass


class AdmissibleTriple(NamedTuple):
    a: int
    b: int
    c: int


class SixColors(NamedTuple):
    a: int
    b: int
    e: int
    d: int
    c: int
    f: int

    def opposite_sums(self) -> tuple[int, int, int]:
        return (self.a + self.d, self.b + self.c, self.e + self.f)

    def vertex_triples(self) -> tuple[tuple[int, int, int], ...]:
        a, b, e, d, c, f = self
        return ((a, b, e), (a, c, f), (c, d, e), (b, d, f))

    def shifted(self, n: int) -> "SixColors":
        return SixColors(*(x + n for x in self))


@dataclass(frozen=True)
class STData:
    S1: int
    S2: int
    S3: int
    T1: int
    T2: int
    T3: int
    T4: int

    @property
    def S(self) -> tuple[int, int, int]:
        return (self.S1, self.S2, self.S3)

    @property
    def T(self) -> tuple[int, int, int, int]:
        return (self.T1, self.T2, self.T3, self.T4)

    @property
    def S_star(self) -> int:
        return min(self.S)

    @property
    def T_plus(self) -> int:
        return max(self.T)

    @property
    def is_empty(self) -> bool:
        return self.T_plus > self.S_star


def is_admissible(a: int, b: int, c: int) -> bool:
    return (
        min(a, b, c) >= 0
        and (a + b + c) % 2 == 0
        and a <= b + c
        and b <= a + c
        and c <= a + b
    )


def _check_triple(t) -> AdmissibleTriple:
    t = AdmissibleTriple(*t)
    if not is_admissible(*t):
        raise InadmissibleError(f"triple {tuple(t)} is not admissible")
    return t


def _check_six(s) -> SixColors:
    s = SixColors(*s)
    for tri in s.vertex_triples():
        if not is_admissible(*tri):
            raise InadmissibleError(f"vertex triple {tri} of {tuple(s)} is not admissible")
    return s


def st_data(s) -> STData:
    a, b, e, d, c, f = s
    sums = (a + d + b + c, a + d + e + f, b + c + e + f, a + b + e, a + c + f, c + d + e, b + d + f)
    if any(x % 2 for x in sums):
        raise InadmissibleError(f"colors {tuple(s)} give a non-integral S_i or T_j")
    return STData(*(x // 2 for x in sums))


# -- exact Laurent polynomials ------------------------------------------------


def unknot(a: int) -> QSeries:
    """U(a) = (-1)^a [a+1]."""
    if a < 0:
        raise InadmissibleError("color must be a natural number")
    return qs.scale(qs.quantum_integer(a + 1), (-1) ** a)


@lru_cache(maxsize=4096)
def theta(a: int, b: int, c: int) -> QSeries:
    a, b, c = _check_triple((a, b, c))
    s = (a + b + c) // 2
    parts = ((-a + b + c) // 2, (a - b + c) // 2, (a + b - c) // 2)
    val = qs.mul(qs.quantum_integer(s + 1), qs.quantum_multinomial(s, parts))
    return qs.scale(val, (-1) ** s)


@lru_cache(maxsize=4096)
def tet(a: int, b: int, e: int, d: int, c: int, f: int) -> QSeries:
    """Tet via the sum over k of (-1)^k [k+1] times a 7-part quantum multinomial."""
    st = st_data(_check_six((a, b, e, d, c, f)))
    total = qs.zero()
    for k in range(st.T_plus, st.S_star + 1):
        parts = [si - k for si in st.S] + [k - tj for tj in st.T]
        term = qs.mul(qs.quantum_integer(k + 1), qs.quantum_multinomial(k, parts))
        total = qs.add(total, qs.scale(term, (-1) ** k))
    return total


def _tet_term_exp2(st: STData, k: int) -> int:
    # lowest exp2 of the k-th summand: [k+1] contributes -k, the multinomial -(k^2 - sum parts^2)/2
    sq = sum((si - k) ** 2 for si in st.S) + sum((k - tj) ** 2 for tj in st.T)
    num = k * k - sq
    assert num % 2 == 0
    return -k - num // 2


def tet_pochhammer(a: int, b: int, e: int, d: int, c: int, f: int) -> QSeries:
    """
    Tet in Pochhammer form: each summand is q^(low_k) (1 - q^(k+1))/(1 - q)
    (q;q)_k / prod (q;q)_{S_i-k} prod (q;q)_{k-T_j}, with the rational
    function expanded by series division to its exact degree.
    """
    st = st_data(_check_six((a, b, e, d, c, f)))
    total = qs.zero()
    for k in range(st.T_plus, st.S_star + 1):
        parts = [si - k for si in st.S] + [k - tj for tj in st.T]
        deg_q = k * (k + 1) // 2 - sum(p * (p + 1) // 2 for p in parts) + k
        prec = 2 * deg_q + 1
        num = qs.mul(qs.pochhammer(k + 1, prec), qs.inv_pochhammer(1, prec))
        den = qs.product(qs.inv_pochhammer(p, prec) for p in parts)
        body = qs.mul(num, den).truncate(prec)
        body = QSeries.make(body.min_exp2, body.coeffs, None)
        total = qs.add(total, qs.scale(body.shift(_tet_term_exp2(st, k)), (-1) ** k))
    return total


# -- closed-form extremal monomials -----------------------------------------------------------


def lemma_extremal(kind: str, colors) -> Monomial:
    """
    The monomial lt * q^delta given by the closed delta formulas.
    Which end of the expansion it describes is pinned by tests:
    it is the highest monomial of U and Theta and the lowest monomial of
    the k = T^+ summand of Tet.
    """
    kind = kind.lower()
    if kind == "u":
        (a,) = colors if not isinstance(colors, int) else (colors,)
        return Monomial((-1) ** a, a)
    if kind == "theta":
        a, b, c = _check_triple(colors)
        delta = Fraction(-(a * a + b * b + c * c), 8) + Fraction(a * b + a * c + b * c, 4) + Fraction(a + b + c, 4)
        return Monomial((-1) ** ((a + b + c) // 2), _as_exp2(delta))
    if kind == "tet":
        st = st_data(_check_six(colors))
        tp = st.T_plus
        delta = Fraction(-tp * tp + sum((si - tp) ** 2 for si in st.S) + sum((tp - tj) ** 2 for tj in st.T), 4) - Fraction(tp, 2)
        return Monomial((-1) ** tp, _as_exp2(delta))
    raise ValueError(f"unknown block kind {kind!r}")


def _as_exp2(delta: Fraction) -> int:
    two = 2 * delta
    if two.denominator != 1:
        raise AssertionError(f"exponent {delta} is not a half-integer")
    return int(two)


# -- lowest monomials and normalized (hat) series ---------------------------


def unknot_low(a: int) -> Monomial:
    return Monomial((-1) ** a, -a)


def theta_low(a: int, b: int, c: int) -> Monomial:
    s = (a + b + c) // 2
    parts = ((-a + b + c) // 2, (a - b + c) // 2, (a + b - c) // 2)
    num = s * s - sum(p * p for p in parts)
    return Monomial((-1) ** s, -s - num // 2)


def tet_low(st: STData) -> Monomial:
    """Lowest monomial of a nonempty Tet: the k = S* summand dominates."""
    k = st.S_star
    return Monomial((-1) ** k, _tet_term_exp2(st, k))


def hat_unknot_series(a: int, prec2: int) -> QSeries:
    # (1 - q^(a+1)) / (1 - q)
    n = min(a + 1, max(0, (prec2 + 1) // 2))
    return qs.poly_q([1] * n, prec2) if n else qs.zero(prec2)


@lru_cache(maxsize=1 << 16)
def hat_theta_series(a: int, b: int, c: int, prec2: int) -> QSeries:
    """(1 - q^(s+1))/(1 - q) (q;q)_s / prod (q;q)_{parts}, truncated."""
    s = (a + b + c) // 2
    parts = ((-a + b + c) // 2, (a - b + c) // 2, (a + b - c) // 2)
    out = qs.mul(hat_unknot_series(s, prec2), qs.pochhammer(s, prec2))
    for p in parts:
        out = qs.mul(out, qs.inv_pochhammer(p, prec2))
    return out


@lru_cache(maxsize=1 << 16)
def hat_tet_series_st(st: STData, prec2: int) -> QSeries:
    """
    Normalized Tet to precision prec2, summed from the top of the k-range
    (k = S* - l). Summand l sits at exp2 >= l(3l+1) + 2l*sum(S_i - S*),
    which is increasing in l, so the sum stops at the first l past prec2.
    """
    sstar = st.S_star
    sst = [si - sstar for si in st.S]
    tst = [sstar - tj for tj in st.T]
    base = _tet_term_exp2(st, sstar)
    total = qs.zero(prec2)
    for ell in range(0, sstar - st.T_plus + 1):
        low = _tet_term_exp2(st, sstar - ell) - base
        if low >= prec2:
            break
        rel = prec2 - low
        k = sstar - ell
        term = qs.mul(hat_unknot_series(k, rel), qs.pochhammer(k, rel))
        for p in sst:
            term = qs.mul(term, qs.inv_pochhammer(p + ell, rel))
        for p in tst:
            term = qs.mul(term, qs.inv_pochhammer(p - ell, rel))
        term = term.shift(low)
        total = qs.add(total, term if ell % 2 == 0 else -term)
    return total


def hat_tet_series(s, prec2: int) -> QSeries:
    return hat_tet_series_st(st_data(s), prec2)


def tet_series(s, prec2: int) -> QSeries:
    """Tet as a truncated series (absolute precision prec2)."""
    st = st_data(_check_six(s))
    if st.is_empty:
        return qs.zero(prec2)
    lo = tet_low(st)
    body = hat_tet_series_st(st, max(0, prec2 - lo.exp2))
    return qs.scale(body.shift(lo.exp2), lo.sign_coeff)


# -- exact hat forms with cross-checks ----------------------------------------


def hat_theta(a: int, b: int, c: int) -> QSeries:
    """Theta divided by its lowest monomial (an exact polynomial in q)."""
    h = qs.hat(theta(a, b, c))
    s = (a + b + c) // 2
    parts = ((-a + b + c) // 2, (a - b + c) // 2, (a + b - c) // 2)
    width = h.max_exp2 + 1
    check = hat_theta_series(a, b, c, width)
    if not h.agrees_with(check, width):
        raise AssertionError(f"hat theta mismatch at {(a, b, c)} (s={s}, parts={parts})")
    return h


def hat_tet_lsum(s) -> QSeries:
    """The l-sum expression for normalized Tet, expanded to full degree."""
    st = st_data(_check_six(s))
    if st.is_empty:
        raise ValueError(f"Tet{tuple(s)} is an empty sum")
    span = -2 * _tet_term_exp2(st, st.S_star) + 1
    h = hat_tet_series_st(st, span)
    return QSeries.make(h.min_exp2, h.coeffs, None)


def hat_tet(a: int, b: int, e: int, d: int, c: int, f: int) -> QSeries:
    val = tet(a, b, e, d, c, f)
    if val.is_zero:
        raise ValueError(f"Tet{(a, b, e, d, c, f)} vanishes; no normalization")
    h = qs.hat(val)
    if h != hat_tet_lsum((a, b, e, d, c, f)):
        raise AssertionError(f"hat Tet disagrees with the l-sum at {(a, b, e, d, c, f)}")
    return h


# -- stabilization limits -----------------------------------------------------


def theta_limit(prec2: int) -> QSeries:
    """1 / ((1 - q) (q;q)_inf^2)."""
    out = qs.mul(qs.inv_pochhammer(1, prec2), qs.inv_pochhammer(None, prec2))
    return qs.mul(out, qs.inv_pochhammer(None, prec2))


def _normalized_s(s1: int, s2: int, s3: int) -> tuple[int, int, int]:
    if min(s1, s2, s3) != 0:
        raise ValueError("starred values must have minimum 0")
    return s1, s2, s3


def tet_limit_normalized(s1: int, s2: int, s3: int, prec2: int) -> QSeries:
    """q^(-nu/2) J^FKB(S*) / ((1 - q)(q;q)_inf^4): the limit of normalized Tet."""
    from spindex import tetindex

    s = _normalized_s(s1, s2, s3)
    nu = tetindex.nu(s)
    j = tetindex.j_fkb(s, prec2 + nu)
    out = j.shift(-nu)
    if out.valuation2 is not None and out.valuation2 < 0:
        raise AssertionError("nu shift left a negative exponent")
    out = qs.mul(out, qs.inv_pochhammer(1, prec2))
    for _ in range(4):
        out = qs.mul(out, qs.inv_pochhammer(None, prec2))
    return out.truncate(prec2)


def tet_limit(s1: int, s2: int, s3: int, prec2: int) -> QSeries:
    """(-q^(-1/2))^nu J^FKB(S*) / ((1 - q)(q;q)_inf^4), with the (-1)^nu sign."""
    from spindex import tetindex

    nu = tetindex.nu((s1, s2, s3))
    return qs.scale(tet_limit_normalized(s1, s2, s3, prec2), (-1) ** nu)


def starred(s) -> tuple[int, int, int]:
    st = st_data(s)
    m = st.S_star
    return tuple(si - m for si in st.S)


# -- stabilization checks -----------------------------------------------------


@dataclass(frozen=True)
class StabCase:
    kind: str  # "theta" or "tet"
    colors: tuple
    n0: int | None  # least N with N and N+1 both matching the limit; None if not found

    @property
    def ok(self) -> bool:
        return self.n0 is not None


def _first_stable(seq, limit: QSeries, prec2: int, shift_max: int) -> int | None:
    prev = None
    for n in range(shift_max + 1):
        hit = seq(n).agrees_with(limit, prec2)
        if hit and prev:
            return n - 1
        prev = hit
    return None


def theta_stab_n0(t, prec2: int, shift_max: int) -> int | None:
    a, b, c = _check_triple(t)
    lim = theta_limit(prec2)
    return _first_stable(lambda n: hat_theta_series(a + 2 * n, b + 2 * n, c + 2 * n, prec2), lim, prec2, shift_max)


def tet_stab_n0(s, prec2: int, shift_max: int, signed: bool = True) -> int | None:
    """
    Stabilization of hat Tet(s + 2N). ``signed`` compares with tet_limit
    (sign (-1)^nu), otherwise with tet_limit_normalized.
    """
    s = _check_six(s)
    star = starred(s)
    lim = tet_limit(*star, prec2) if signed else tet_limit_normalized(*star, prec2)
    return _first_stable(lambda n: hat_tet_series(s.shifted(2 * n), prec2), lim, prec2, shift_max)


def stab_check(max_color: int, prec2: int, shift_max: int, signed: bool = True) -> list[StabCase]:
    """Every admissible triple and nonvanishing six-tuple with colors <= max_color."""
    out = []
    rng = range(max_color + 1)
    for t in iproduct(rng, repeat=3):
        if is_admissible(*t):
            out.append(StabCase("theta", t, theta_stab_n0(t, prec2, shift_max)))
    for six in iproduct(rng, repeat=6):
        a, b, e, d, c, f = six
        if not all(is_admissible(*v) for v in ((a, b, e), (a, c, f), (c, d, e), (b, d, f))):
            continue
        if st_data(six).is_empty:
            continue
        out.append(StabCase("tet", six, tet_stab_n0(six, prec2, shift_max, signed)))
    return out
