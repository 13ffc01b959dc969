"""
The FKB state sum over bounded spinal-surface colorings.

A coloring assigns a natural number to each edge class. Its weight is
prod_tets Tet * prod_triangles Theta^-1 * prod_edges U. Every block is
used in normalized form, block = lt * q^low * (1 + O(q)), so a
coloring's weight is sign * q^D * (power series with constant term 1)
and is skipped outright once D reaches the target precision.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from spindex import blocks
from spindex import qseries as qs
from spindex.qseries import QSeries
from spindex.triangulation import Triangulation

log = logging.getLogger(__name__)

__all__ = [
    "NoStabilizationError",
    "StabilizationReport",
    "colorings",
    "coloring_weight",
    "tv_n",
    "tv_shell",
    "fkb_limit",
]


class NoStabilizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class StabilizationReport:
    I_fkb: QSeries
    I0: QSeries
    twoI1: QSeries
    N_used: int
    stabilized_order2: int
    tv: dict  # N -> TV^(N), every N that was computed


def _enumeration_order(tri: Triangulation) -> tuple[list[int], list[list[tuple[int, int, int]]]]:
    """
    Edge-class order that completes triangles early, plus for each
    position the triangles whose last edge is assigned there.
    """
    n = tri.n_edges
    order: list[int] = []
    remaining = set(range(n))
    tris = [set(t) for t in tri.triangles]
    while remaining:
        # pick the class that finishes the most triangles, then the most frequent
        def score(e):
            done = set(order) | {e}
            return (sum(1 for t in tris if t <= done), sum(1 for t in tris if e in t), -e)

        e = max(remaining, key=score)
        order.append(e)
        remaining.discard(e)
    pos = {e: i for i, e in enumerate(order)}
    checks: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
    for t in tri.triangles:
        checks[max(pos[x] for x in t)].append(t)
    return order, checks


def colorings(tri: Triangulation, N: int, first_color: int | None = None, exact_max: bool = False) -> Iterator[tuple[int, ...]]:
    """
    Admissible colorings with every color <= N (exactly-max-N if
    ``exact_max``), pruned triangle by triangle. ``first_color`` fixes the
    color of the first class in enumeration order (used to split work).
    """
    order, checks = _enumeration_order(tri)
    n = len(order)
    colors = [0] * tri.n_edges

    def rec(i, hit):
        if i == n:
            if hit or not exact_max:
                yield tuple(colors)
            return
        e = order[i]
        rng = range(N + 1) if (i > 0 or first_color is None) else (first_color,)
        for c in rng:
            colors[e] = c
            ok = True
            for (x, y, z) in checks[i]:
                if not blocks.is_admissible(colors[x], colors[y], colors[z]):
                    ok = False
                    break
            if ok:
                yield from rec(i + 1, hit or c == N)
        colors[e] = 0

    yield from rec(0, False)


@lru_cache(maxsize=1 << 16)
def _inv_hat_theta(a: int, b: int, c: int, prec2: int) -> QSeries:
    return qs.invert_unit(blocks.hat_theta_series(a, b, c, prec2))


def coloring_lowest(tri: Triangulation, colors: Sequence[int]):
    """(sign, D, per-tet STData) of a coloring's weight, or None when a Tet sum is empty."""
    sign = 1
    D = 0
    sts = []
    for j in range(tri.t):
        six = tuple(colors[l] for l in tri.six_labels(j))
        st = blocks.st_data(six)
        if st.is_empty:
            return None
        lo = blocks.tet_low(st)
        sign *= lo.sign_coeff
        D += lo.exp2
        sts.append(st)
    for x, y, z in tri.triangles:
        lo = blocks.theta_low(colors[x], colors[y], colors[z])
        sign *= lo.sign_coeff
        D -= lo.exp2
    for c in colors:
        lo = blocks.unknot_low(c)
        sign *= lo.sign_coeff
        D += lo.exp2
    return sign, D, sts


def coloring_weight(tri: Triangulation, colors: Sequence[int], prec2: int) -> QSeries:
    """The state-sum weight of one admissible coloring, truncated at prec2."""
    low = coloring_lowest(tri, colors)
    if low is None:
        return qs.zero(prec2)
    sign, D, sts = low
    if D >= prec2:
        return qs.zero(prec2)
    rel = prec2 - D
    w = qs.one()
    for st in sts:
        w = qs.mul(w, blocks.hat_tet_series_st(st, rel))
    for x, y, z in tri.triangles:
        w = qs.mul(w, _inv_hat_theta(colors[x], colors[y], colors[z], rel))
    for c in colors:
        w = qs.mul(w, blocks.hat_unknot_series(c, rel))
    w = w.truncate(rel).shift(D)
    return -w if sign < 0 else w


def _partial_sum(args) -> QSeries:
    tri, N, prec2, first, exact_max = args
    total = qs.zero(prec2)
    for col in colorings(tri, N, first_color=first, exact_max=exact_max):
        total = qs.add(total, coloring_weight(tri, col, prec2))
    return total


def _sum(tri: Triangulation, N: int, prec2: int, exact_max: bool, threads: int) -> QSeries:
    jobs = [(tri, N, prec2, c, exact_max) for c in range(N + 1)]
    if threads > 1 and N > 0:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(_partial_sum, jobs))
    else:
        parts = [_partial_sum(j) for j in jobs]
    total = qs.zero(prec2)
    for p in parts:  # fixed order; integer addition is exact anyway
        total = qs.add(total, p)
    return total


def tv_shell(tri: Triangulation, N: int, prec2: int, threads: int = 1) -> QSeries:
    """Sum over colorings whose largest color is exactly N."""
    return _sum(tri, N, prec2, True, threads)


def tv_n(tri: Triangulation, N: int, prec2: int, threads: int = 1) -> QSeries:
    """TV^(N): sum over admissible colorings with all colors <= N."""
    return _sum(tri, N, prec2, False, threads)


def fkb_limit(
    tri: Triangulation,
    prec2: int,
    n_max: int = 60,
    threads: int = 1,
) -> StabilizationReport:
    """
    Run N upward until TV^(N+2) - TV^(N) is the same series for four
    consecutive N (two steps of each parity); that common difference is
    I^FKB. Then TV^(N) = (N/2) I^FKB + I0 + (N mod 2) I1 fixes I0 and 2*I1.
    """
    tv: dict[int, QSeries] = {}
    acc = qs.zero(prec2)
    need = 4
    for N in range(0, n_max + 1):
        acc = qs.add(acc, tv_shell(tri, N, prec2, threads))
        tv[N] = acc
        if N < need + 1:
            continue
        diffs = [qs.add(tv[M + 2], -tv[M]) for M in range(N - need - 1, N - 1)]
        log.debug("N=%d diff=%s", N, diffs[-1])
        if all(d.agrees_with(diffs[0]) for d in diffs[1:]):
            I = diffs[0]
            Ne = N if N % 2 == 0 else N - 1
            No = N if N % 2 == 1 else N - 1
            I0 = qs.add(tv[Ne], -qs.scale(I, Ne // 2))
            # 2 I1 = 2 TV(No) - No I - 2 I0
            twoI1 = qs.add(qs.scale(tv[No], 2), -qs.add(qs.scale(I, No), qs.scale(I0, 2)))
            return StabilizationReport(I, I0, twoI1, N, prec2, dict(tv))
    raise NoStabilizationError(
        "no stabilization: triangulation may not be 1-efficient or N_max too small "
        f"(N_max={n_max}, prec2={prec2})"
    )
