import itertools

import pytest

from spindex import qseries as qs
from spindex import tetindex as TI
from spindex.blocks import starred
from spindex.qseries import Monomial

import oracles as O

P = 21


def sqrt_q_power(k, f):
    """(-q^(1/2))^k * f, written out independently of the module helper."""
    g = f.shift(k)
    return -g if k % 2 else g


def test_i_delta_example():
    assert TI.i_delta(0, 0, 7) == qs.poly_q([1, -1, -2, -2]).truncate(7)


@pytest.mark.parametrize("m,e", list(itertools.product(range(-3, 4), repeat=2)))
def test_i_delta_matches_oracle(m, e):
    got = O.to_dict(TI.i_delta(m, e, P))
    assert got == O.i_delta_oracle(m, e, P, nmax=60)


def test_j_delta_examples():
    assert TI.j_delta((0, 0, 0), P) == TI.i_delta(0, 0, P)
    assert TI.j_delta((1, 1, 1), P) == sqrt_q_power(-1, TI.j_delta((0, 0, 0), P + 1))
    ref = TI.j_delta((2, 1, 0), P)
    assert TI.j_delta((1, 0, 2), P) == ref
    assert TI.j_delta((0, 2, 1), P) == ref


def test_three_expressions_agree():
    for t in itertools.product(range(-3, 4), repeat=3):
        f1, f2, f3 = TI.j_delta_forms(t, 15)
        assert f1.agrees_with(f2, 15) and f1.agrees_with(f3, 15), t


def test_full_symmetry():
    for t in itertools.product(range(-2, 3), repeat=3):
        ref_d = TI.j_delta(t, 15)
        ref_f = TI.j_fkb(t, 15)
        for p in itertools.permutations(t):
            assert TI.j_delta(p, 15) == ref_d
            assert TI.j_fkb(p, 15) == ref_f


def test_translation():
    for t in itertools.product(range(-2, 3), repeat=3):
        base_d = TI.j_delta(t, 15 + 3)
        base_f = TI.j_fkb(t, 15 + 3)
        for s in range(-2, 3):
            ts = tuple(x + s for x in t)
            assert TI.j_delta(ts, 15).agrees_with(sqrt_q_power(-s, base_d), 15), (t, s)
            assert TI.j_fkb(ts, 15).agrees_with(sqrt_q_power(-s, base_f), 15), (t, s)


def test_nu_examples():
    assert TI.nu((0, 0, 0)) == 0
    assert TI.nu((1, 1, 0)) == 1
    assert TI.nu((1, 1, 1)) == -1
    for t in itertools.product(range(-4, 5), repeat=3):
        assert TI.nu(t) == O.nu_oracle(*t)


def test_leading_monomial():
    # coefficient is (-1)^min(a,b,c); the (-1)^nu form fails e.g. at (1,1,0)
    for t in itertools.product(range(-4, 5), repeat=3):
        n = TI.nu(t)
        f = TI.j_delta(t, n + 4)
        lo = qs.extremal(f)[0]
        assert lo == Monomial((-1) ** min(t), n), t
        assert lo == TI.leading_law(t)


def test_min_degree_grows_with_nu():
    rows = []
    for t in itertools.product(range(0, 5), repeat=3):
        if min(t) == 0:
            n = TI.nu(t)
            rows.append((n, qs.extremal(TI.j_delta(t, n + 2))[0].exp2))
    rows.sort()
    degs = [d for _, d in rows]
    assert degs == sorted(degs)


def test_j_fkb_matches_oracle():
    for t in itertools.product(range(-2, 3), repeat=3):
        assert O.to_dict(TI.j_fkb(t, P)) == O.j_fkb_oracle(*t, P), t


def test_prop1_small():
    rep = TI.verify_prop1(0, 21)
    assert rep.checked == 1 and rep.ok
    rep = TI.verify_prop1(2, 21)
    assert rep.checked == 125 and rep.ok, rep.mismatches


def test_prop1_threads_deterministic():
    a = TI.verify_prop1(1, 15, threads=1)
    b = TI.verify_prop1(1, 15, threads=2)
    assert (a.checked, a.mismatches) == (b.checked, b.mismatches)


def test_s_infty():
    zero = TI.s_infty((0,) * 6, P)
    assert zero == qs.mul(qs.poly_q([1, -1]), TI.j_fkb((0, 0, 0), P)).truncate(P)
    f1, f2 = TI.s_infty_forms((1, 1, 0, 1, 1, 0), P)
    assert f1 == f2
    # only the opposite-edge sums matter
    s = (2, 1, 1, 2, 1, 1)
    assert TI.s_infty(s, P) == TI.s_infty((2, 1, 1, 2, 1, 1)[::-1], P)
    assert O.to_dict(TI.s_infty((0,) * 6, P)) == O.ptrunc(
        O.pmul({0: 1, 2: -1}, O.j_fkb_oracle(0, 0, 0, P), P), P
    )


def test_s_infty_literal_second_form_has_extra_factor():
    first, second = TI.s_infty_forms((0,) * 6, P, literal=True)
    assert second == qs.mul(first, qs.pochhammer_inf(P)).truncate(P)
    assert not first.agrees_with(second)


def test_s_infty_mixed_parity_rejected():
    with pytest.raises(ValueError):
        TI.s_infty_forms((1, 0, 0, 0, 0, 0), P)


def test_e_infty():
    assert TI.e_infty([(0, 0, 0)] * 2, 0, P) == (TI.j_fkb((0, 0, 0), P) ** 2).truncate(P)
    one = TI.e_infty([(1, 1, 0)], -1, P)
    assert one == sqrt_q_power(1, TI.j_fkb((1, 1, 0), P - 1))
    quads = [(1, 0, 2), (0, 1, 1)]
    a = TI.e_infty(quads, -3, P, use_fkb=True)
    b = TI.e_infty(quads, -3, P, use_fkb=False)
    assert a == b
    assert a.prec2 == P
