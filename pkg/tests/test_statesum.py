import itertools

import pytest

from spindex import qseries as qs
from spindex import statesum as SS
from spindex import triangulation as T

import oracles as O

TWO = T.fixture("fig8-2tet")
THREE = T.fixture("fig8-3tet")
I_FIG8 = qs.poly_q([1, -2, -3, 2, 8, 18])  # to q^5


def series_div(num, den, prec2):
    """num/den for Laurent polynomials with den's lowest coefficient +-1, truncated at prec2."""
    d0 = min(den)
    c0 = den[d0]
    unit = O.pscale(O.pshift(den, -d0), c0)
    rel = prec2 + d0 - min(num)
    inv = O.geometric_inverse(unit, max(rel, 1))
    return O.ptrunc(O.pscale(O.pshift(O.pmul(num, inv), -d0), c0), prec2)


def tv_oracle(tri, N, prec2):
    """Brute force over every color vector <= N with Laurent-polynomial blocks."""
    total = {}
    for col in itertools.product(range(N + 1), repeat=tri.n_edges):
        if not all(O.admissible(col[x], col[y], col[z]) for x, y, z in tri.triangles):
            continue
        num = {0: 1}
        for j in range(tri.t):
            num = O.pmul(num, O.tet_oracle(*(col[l] for l in tri.six_labels(j))))
        for c in col:
            num = O.pmul(num, O.pscale(O.qint(c + 1), (-1) ** c))  # U(c)
        den = {0: 1}
        for x, y, z in tri.triangles:
            den = O.pmul(den, O.theta_oracle(col[x], col[y], col[z]))
        total = O.padd(total, series_div(num, den, prec2))
    return total


def test_n0_is_one():
    for tri in (TWO, THREE):
        assert SS.tv_n(tri, 0, 21) == qs.one().truncate(21)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_tv_against_brute_force(N):
    for tri in (TWO, THREE):
        assert O.to_dict(SS.tv_n(tri, N, 13)) == tv_oracle(tri, N, 13), (tri.name, N)


def test_colorings_match_brute_force():
    for tri in (TWO, THREE):
        for N in range(5):
            brute = {
                c
                for c in itertools.product(range(N + 1), repeat=tri.n_edges)
                if all(O.admissible(c[x], c[y], c[z]) for x, y, z in tri.triangles)
            }
            assert set(SS.colorings(tri, N)) == brute
            shell = {c for c in brute if max(c) == N}
            assert set(SS.colorings(tri, N, exact_max=True)) == shell


def test_shells_partition():
    p = 15
    acc = qs.zero(p)
    for N in range(6):
        acc = acc + SS.tv_shell(TWO, N, p)
        assert acc == SS.tv_n(TWO, N, p)


def test_three_tet_colors_are_even():
    cols = list(SS.colorings(THREE, 8))
    assert cols and all(c % 2 == 0 for col in cols for c in col)
    for N in (1, 3, 5):
        assert SS.tv_n(THREE, N, 11) == SS.tv_n(THREE, N - 1, 11)


def test_zero_coloring_weight_is_one():
    assert SS.coloring_weight(TWO, (0, 0), 11) == qs.one().truncate(11)


def test_threads_do_not_change_results():
    a = SS.tv_n(TWO, 6, 15, threads=1)
    b = SS.tv_n(TWO, 6, 15, threads=3)
    assert a == b
    assert qs.dumps(a) == qs.dumps(b)


def test_disjoint_union_multiplies():
    doc2 = T.FIXTURES["fig8-2tet"]
    doc3 = T.FIXTURES["fig8-3tet"]
    rows = [list(r) for r in doc2["gluings"]]
    rows += [[a + 2, b, c + 2, d, p] for a, b, c, d, p in doc3["gluings"]]
    union = T.parse({"tets": 5, "gluings": rows})
    p = 9
    for N in (0, 2):
        lhs = SS.tv_n(union, N, p)
        rhs = qs.mul(SS.tv_n(TWO, N, p), SS.tv_n(THREE, N, p)).truncate(p)
        assert lhs == rhs


def test_two_tet_limit():
    rep = SS.fkb_limit(TWO, 11)
    assert rep.I_fkb.agrees_with(I_FIG8, 11)
    assert rep.I0.agrees_with(qs.poly_q([1, 0, 4, 4, -6, -36]), 11)
    assert rep.twoI1.agrees_with(qs.poly_q([-1, 2, 3, -2, -8, -18]), 11)


@pytest.mark.parametrize("tri", [TWO, THREE], ids=lambda t: t.name)
def test_reconstruction_identity(tri):
    rep = SS.fkb_limit(tri, 9)
    for N, tv in rep.tv.items():
        if N < 2:
            continue
        # 2 TV(N) = N I + 2 I0 + (N mod 2) 2I1
        lhs = qs.scale(tv, 2)
        rhs = qs.scale(rep.I_fkb, N) + qs.scale(rep.I0, 2) + qs.scale(rep.twoI1, N % 2)
        if N >= rep.N_used - 5:
            assert lhs.agrees_with(rhs, rep.stabilized_order2), N


def test_three_tet_same_limit():
    a = SS.fkb_limit(TWO, 11).I_fkb
    b = SS.fkb_limit(THREE, 11).I_fkb
    assert a.agrees_with(b, 11)


def test_no_stabilization():
    with pytest.raises(SS.NoStabilizationError, match="1-efficient"):
        SS.fkb_limit(TWO, 21, n_max=5)
