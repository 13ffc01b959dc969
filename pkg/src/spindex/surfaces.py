"""
Closed generalized normal surfaces in quad coordinates and the index as
their generating series.

Quad coordinates live in Z^(3t): per tetrahedron, quad type i is the
quadrilateral disjoint from the i-th pair of opposite edges. The lattice
of closed classes is E + T, spanned by edge solutions E_e and the
tetrahedral vectors T_j = (1,1,1) in tetrahedron j. Classes modulo T are
represented by their normalized vectors (min 0 in every tetrahedron);
projecting each triple to (b - a, c - a) kills T, so classes are exactly
the points of a lattice Lambda in Z^(2t).

Each class contributes (-q^(1/2))^(-chi) prod_j J_Delta(a_j, b_j, c_j),
whose lowest exponent in half-units is degree2 = -chi + sum_j nu_j.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from spindex import _linalg as la
from spindex import qseries as qs
from spindex import tetindex
from spindex.qseries import QSeries
from spindex.triangulation import EDGE_INDEX, EDGES, OPPOSITE_PAIRS, QUAD_OF_EDGE, Triangulation

log = logging.getLogger(__name__)

__all__ = [
    "SurfaceError",
    "CertificationError",
    "NormalClass",
    "MatchingData",
    "matching_data",
    "edge_solution",
    "tet_solution",
    "triangle_completion",
    "euler_char",
    "normalize",
    "degree_bound",
    "enumerate_classes",
    "class_weight",
    "index_series",
]

QuadVector = tuple[tuple[int, int, int], ...]


class SurfaceError(ValueError):
    pass


class CertificationError(RuntimeError):
    pass


@dataclass(frozen=True)
class NormalClass:
    quads: QuadVector
    chi: int
    degree2: int

    @property
    def flat(self) -> tuple[int, ...]:
        return tuple(x for t in self.quads for x in t)


@dataclass(frozen=True)
class MatchingData:
    t: int
    quad_matrix: tuple[tuple[int, ...], ...]  # rows annihilate closed quad vectors
    lattice_et: tuple[tuple[int, ...], ...]  # HNF basis of E + T in Z^(3t)
    lattice: tuple[tuple[int, ...], ...]  # HNF basis of Lambda in Z^(2t)
    lifts: tuple[tuple[int, ...], ...]  # lift (0, x, y) per tet of each Lambda basis row
    lift_chi: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.lattice)

    def contains(self, quads) -> bool:
        """Membership of a quad vector (flat or per-tet) in E + T."""
        return la.in_lattice([list(r) for r in self.lattice_et], _flat(quads))

    def satisfies_matching(self, quads) -> bool:
        v = _flat(quads)
        return all(sum(a * b for a, b in zip(row, v)) == 0 for row in self.quad_matrix)


def _flat(quads) -> list[int]:
    quads = list(quads)
    if quads and isinstance(quads[0], (tuple, list)):
        return [int(x) for t in quads for x in t]
    return [int(x) for x in quads]


def _per_tet(v: Sequence[int]) -> QuadVector:
    return tuple(tuple(int(x) for x in v[3 * j:3 * j + 3]) for j in range(len(v) // 3))


# -- standard coordinates --------------------------------------------------------
# columns: triangle (tet j, vertex v) at 4j + v, then quad (tet j, type i) at 4t + 3j + i


def _quad_cutting(v: int, face: int) -> int:
    """Quad type that cuts off vertex v alone on the given face."""
    return QUAD_OF_EDGE[EDGE_INDEX[(v, face)]]


def _standard_matching(tri: Triangulation) -> list[list[int]]:
    t = tri.t
    rows = []
    seen = set()
    for (tet, face), (tet2, perm) in sorted(tri.gluings.items()):
        face2 = perm[face]
        if (tet2, face2) in seen:
            continue
        seen.add((tet, face))
        for v in range(4):
            if v == face:
                continue
            w = perm[v]
            row = [0] * (7 * t)
            row[4 * tet + v] += 1
            row[4 * t + 3 * tet + _quad_cutting(v, face)] += 1
            row[4 * tet2 + w] -= 1
            row[4 * t + 3 * tet2 + _quad_cutting(w, face2)] -= 1
            rows.append(row)
    return rows


def edge_solution(tri: Triangulation, e: int) -> QuadVector:
    """Quad coordinates of the edge solution of edge class e."""
    out = []
    for j in range(tri.t):
        row = tri.edge_of[j]
        out.append(tuple(sum(1 for k in pair if row[k] == e) for pair in OPPOSITE_PAIRS))
    return tuple(out)


def tet_solution(tri: Triangulation, j: int) -> QuadVector:
    return tuple((1, 1, 1) if k == j else (0, 0, 0) for k in range(tri.t))


def triangle_completion(tri: Triangulation, quads) -> list[Fraction]:
    """Rational triangle coordinates (4 per tet) closing up the quad vector."""
    t = tri.t
    q = _flat(quads)
    rows = _standard_matching(tri)
    at = [r[:4 * t] for r in rows]
    rhs = [-sum(a * b for a, b in zip(r[4 * t:], q)) for r in rows]
    sol = la.solve(at, rhs)
    if sol is None:
        raise SurfaceError(f"no rational triangle completion for quad vector {_per_tet(q)}")
    return sol


def _chi_standard(tri: Triangulation, tris: Sequence[Fraction], q: Sequence[int]) -> Fraction:
    # V - E + F with V = edge weights, E = (3 #tri + 4 #quad)/2, F = #tri + #quad
    w = Fraction(0)
    for ec in tri.edge_classes:
        j, k = ec.incidences[0]
        u, v = EDGES[k]
        i = QUAD_OF_EDGE[k]
        w += tris[4 * j + u] + tris[4 * j + v] + sum(q[3 * j + m] for m in range(3) if m != i)
    return w - Fraction(sum(tris), 2) - sum(q)


def euler_char(tri: Triangulation, quads) -> int:
    """Euler characteristic of a closed class, via a rational triangle completion."""
    q = _flat(quads)
    chi = _chi_standard(tri, triangle_completion(tri, q), q)
    if chi.denominator != 1:
        raise SurfaceError(f"non-integral Euler characteristic {chi} for {_per_tet(q)}")
    return int(chi)


def normalize(quads) -> tuple[QuadVector, int]:
    """Subtract the per-tet minimum. Returns (normalized, sum of minima)."""
    out = []
    total = 0
    for a, b, c in _per_tet(_flat(quads)):
        m = min(a, b, c)
        total += m
        out.append((a - m, b - m, c - m))
    return tuple(out), total


# -- lattice -------------------------------------------------------------------


def matching_data(tri: Triangulation) -> MatchingData:
    t = tri.t
    rows = _standard_matching(tri)
    # quad equations: combinations of the standard ones with the triangle columns eliminated
    left = la.left_nullspace([r[:4 * t] for r in rows])
    qm = []
    for y in left:
        row = [sum(y[i] * rows[i][4 * t + c] for i in range(len(rows))) for c in range(3 * t)]
        if any(row):
            qm.append(tuple(row))
    qm = [tuple(r) for r in la.hnf(qm)]

    gens = [_flat(edge_solution(tri, e)) for e in range(tri.n_edges)]
    gens += [_flat(tet_solution(tri, j)) for j in range(t)]
    lat_et = la.hnf(gens)

    proj = []
    for g in gens:
        p = []
        for j in range(t):
            a, b, c = g[3 * j:3 * j + 3]
            p += [b - a, c - a]
        proj.append(p)
    lat = la.hnf(proj)
    lifts = []
    chis = []
    for row in lat:
        lift = []
        for j in range(t):
            lift += [0, row[2 * j], row[2 * j + 1]]
        lifts.append(tuple(lift))
        chis.append(euler_char(tri, lift))
    return MatchingData(
        t,
        tuple(qm),
        tuple(tuple(r) for r in lat_et),
        tuple(tuple(r) for r in lat),
        tuple(lifts),
        tuple(chis),
    )


def _nu_triple(a, b, c):
    m = min(a, b, c)
    x, y, z = a - m, b - m, c - m
    return x * y + y * z + z * x - m


def _class_of(md: MatchingData, k: Sequence[int]) -> NormalClass:
    v = [0] * (3 * md.t)
    for ki, lift in zip(k, md.lifts):
        if ki:
            v = [x + ki * y for x, y in zip(v, lift)]
    norm, mins = normalize(v)
    # chi(T_j) = -1, so removing min_j copies of T_j raises chi by min_j
    chi = sum(ki * c for ki, c in zip(k, md.lift_chi)) + mins
    deg = -chi + sum(_nu_triple(*tr) for tr in norm)
    return NormalClass(norm, chi, deg)


def _sphere_data(md: MatchingData, u: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """(Q(u), L(u)): quadratic and linear parts of degree2 at a real lattice direction."""
    v = [Fraction(0)] * (3 * md.t)
    for ui, lift in zip(u, md.lifts):
        v = [x + ui * y for x, y in zip(v, lift)]
    quad = Fraction(0)
    mins = Fraction(0)
    for j in range(md.t):
        a, b, c = v[3 * j:3 * j + 3]
        m = min(a, b, c)
        mins += m
        x, y, z = a - m, b - m, c - m
        quad += x * y + y * z + z * x
    chi = sum(ui * c for ui, c in zip(u, md.lift_chi)) + mins
    return quad, -chi


def _radius_for(q_lo: Fraction, l_lo: Fraction, max_degree2: int) -> int | None:
    """Least R with R'^2 q_lo + R' l_lo > max_degree2 for every R' >= R, or None."""
    q_lo = max(q_lo, Fraction(0))
    if q_lo == 0:
        if l_lo <= 0:
            return None
        return int(max_degree2 // l_lo) + 1 if max_degree2 >= 0 else 1
    R = max(1, -int(l_lo // (2 * q_lo)))  # at or past the vertex
    while R * R * q_lo + R * l_lo <= max_degree2:
        R += 1
    return R


_MIN_HALF_WIDTH = Fraction(1, 1 << 12)


def degree_bound(md: MatchingData, max_degree2: int, max_coord: int = 64, max_cells: int = 200_000) -> int:
    """
    A radius K such that every lattice coefficient vector k with
    |k|_inf > K has degree2 > max_degree2.

    degree2(R u) = R^2 Q(u) + R L(u) for |u|_inf = 1, with Q >= 0 piecewise
    quadratic and L piecewise linear. The unit sphere is covered by cells
    (boxes on its faces); on a cell of half-width d around u, Q and L are
    at least their values at u minus Lipschitz allowances 24 d sum_j C_j^2
    and d (sum_i |chi_i| + sum_j C_j), where C_j bounds the lift entries
    of tet j. Cells where neither part is certifiably positive are split,
    and so are cells whose certified radius is well above the radius at
    their centre, which keeps K close to the true bound.
    Everything is exact rational arithmetic.
    """
    r = md.rank
    if r == 0:
        return 0
    t = md.t
    col = [sum(abs(lift[c]) for lift in md.lifts) for c in range(3 * t)]
    ctet = [max(col[3 * j:3 * j + 3]) for j in range(t)]
    lip_l = sum(abs(c) for c in md.lift_chi) + sum(ctet)
    lip_q = 24 * sum(c * c for c in ctet)
    R_need = 1
    cells = [(face, sgn, (Fraction(0),) * (r - 1), Fraction(1)) for face in range(r) for sgn in (-1, 1)]
    visited = 0
    while cells:
        face, sgn, center, d = cells.pop()
        visited += 1
        if visited > max_cells:
            raise CertificationError(
                "degree cutoff not certifiable: degree2 does not grow in some lattice direction"
            )
        u = list(center[:face]) + [Fraction(sgn)] + list(center[face:])
        qv, lv = _sphere_data(md, u)
        if r == 1:
            d = Fraction(0)
        R = _radius_for(qv - lip_q * d, lv - lip_l * d, max_degree2)
        if R is None and (d == 0 or (qv == 0 and lv <= 0)):
            raise CertificationError(
                f"degree cutoff not certifiable: degree2 does not grow along direction {u}"
            )
        if R is not None and d > 0 and R > R_need and d > _MIN_HALF_WIDTH:
            # certified but loose: split while the centre value says much less is needed
            R0 = _radius_for(qv, lv, max_degree2)
            if R0 is not None and R > R0 + 1 + R0 // 8:
                R = None
        if R is None:
            h = d / 2
            for signs in itertools.product((-1, 1), repeat=r - 1):
                cells.append((face, sgn, tuple(c + s * h for c, s in zip(center, signs)), h))
            continue
        R_need = max(R_need, R)
    K = R_need - 1
    if K > max_coord:
        raise CertificationError(
            f"degree cutoff not certifiable: needs lattice radius {K} > max_coord={max_coord}"
        )
    log.debug("degree bound: rank %d, K %d, cells %d", r, K, visited)
    return K


def enumerate_classes(
    tri: Triangulation,
    md: MatchingData | None,
    prec2: int,
    max_coord: int = 64,
) -> list[NormalClass]:
    """
    Every class with degree2 <= prec2, sorted by (degree2, quads).

    Completeness rests on degree_bound: lattice vectors outside the
    certified radius all have degree2 > prec2.
    """
    md = matching_data(tri) if md is None else md
    if prec2 < 0:
        return []
    K = degree_bound(md, prec2, max_coord)
    out = []
    seen = set()
    for k in itertools.product(range(-K, K + 1), repeat=md.rank):
        cls = _class_of(md, k)
        if cls.degree2 <= prec2:
            if cls.quads in seen:
                raise SurfaceError(f"normalized representative {cls.quads} enumerated twice")
            seen.add(cls.quads)
            out.append(cls)
    out.sort(key=lambda c: (c.degree2, c.quads))
    return out


def class_weight(cls: NormalClass, prec2: int, use_fkb: bool = False) -> QSeries:
    """(-q^(1/2))^(-chi) prod_j J(a_j, b_j, c_j), with J_Delta unless use_fkb."""
    if cls.degree2 >= prec2:
        return qs.zero(prec2)
    return tetindex.e_infty(cls.quads, cls.chi, prec2, use_fkb=use_fkb)


def _weight_job(args):
    cls, prec2, use_fkb = args
    return class_weight(cls, prec2, use_fkb)


def index_series(
    tri: Triangulation,
    prec2: int,
    *,
    md: MatchingData | None = None,
    max_coord: int = 64,
    threads: int = 1,
    use_fkb: bool = False,
) -> QSeries:
    """The index at (m, e) = (0, 0) as a sum over classes, known below q^(prec2/2)."""
    classes = enumerate_classes(tri, md, prec2 - 1, max_coord)
    jobs = [(c, prec2, use_fkb) for c in classes]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_weight_job, jobs))
    else:
        parts = [_weight_job(j) for j in jobs]
    total = qs.zero(prec2)
    for p in parts:
        total = qs.add(total, p)
    return total
