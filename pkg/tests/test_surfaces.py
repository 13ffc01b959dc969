import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from spindex import qseries as qs
from spindex import surfaces as SF
from spindex import tetindex
from spindex import triangulation as T

import oracles as O

TWO = T.fixture("fig8-2tet")
THREE = T.fixture("fig8-3tet")
FIX = [TWO, THREE]
I_FIG8 = qs.poly_q([1, -2, -3, 2, 8, 18])


@pytest.fixture(scope="module")
def mds():
    return {tri.name: SF.matching_data(tri) for tri in FIX}


def flat(q):
    return [x for t in q for x in t]


def generators(tri):
    gens = [flat(SF.edge_solution(tri, e)) for e in range(tri.n_edges)]
    return gens + [flat(SF.tet_solution(tri, j)) for j in range(tri.t)]


@pytest.mark.parametrize("tri", FIX, ids=lambda t: t.name)
def test_generators_are_members(tri, mds):
    md = mds[tri.name]
    assert md.contains([0] * (3 * tri.t))
    for g in generators(tri):
        assert md.satisfies_matching(g)
        assert md.contains(g)
    assert md.contains([1] * (3 * tri.t))


@pytest.mark.parametrize("tri", FIX, ids=lambda t: t.name)
def test_random_members_and_non_members(tri, mds):
    md = mds[tri.name]
    rng = random.Random(1)
    gens = np.array(generators(tri))
    base_rank = np.linalg.matrix_rank(gens)
    rejected = 0
    for _ in range(200):
        coeffs = [rng.randint(-3, 3) for _ in gens]
        v = [int(x) for x in np.array(coeffs) @ gens]
        assert md.contains(v)
        w = [rng.randint(-3, 3) for _ in range(3 * tri.t)]
        if np.linalg.matrix_rank(np.vstack([gens, w])) > base_rank:
            # outside even the real span, so certainly not a member
            assert not md.contains(w)
            rejected += 1
    assert rejected > 50


def test_ranks(mds):
    assert mds["fig8-2tet"].rank == 1
    assert mds["fig8-3tet"].rank == 2


@pytest.mark.parametrize("tri", FIX, ids=lambda t: t.name)
def test_euler_characteristics(tri):
    t = tri.t
    assert SF.euler_char(tri, [0] * (3 * t)) == 0
    for e in range(tri.n_edges):
        assert SF.euler_char(tri, SF.edge_solution(tri, e)) == -2
    for j in range(t):
        assert SF.euler_char(tri, SF.tet_solution(tri, j)) == -1
    ones = [Fraction(1)] * (4 * t)
    zeros = [0] * (3 * t)
    assert SF._chi_standard(tri, ones, zeros) == 0


@pytest.mark.parametrize("tri", FIX, ids=lambda t: t.name)
def test_chi_independent_of_completion(tri):
    for e in range(tri.n_edges):
        q = flat(SF.edge_solution(tri, e))
        tris = SF.triangle_completion(tri, q)
        for shift in (1, 3, Fraction(1, 2)):
            moved = [x + shift for x in tris]
            assert SF._chi_standard(tri, moved, q) == SF._chi_standard(tri, tris, q)


def test_normalize():
    assert SF.normalize([(1, 2, 3), (0, 0, 0)]) == (((0, 1, 2), (0, 0, 0)), 1)
    assert SF.normalize([3, 1, 1, -1, 0, 2]) == (((2, 0, 0), (0, 1, 3)), 0)


# -- enumeration ----------------------------------------------------------------------


@pytest.mark.parametrize("tri", FIX, ids=lambda t: t.name)
def test_prec_zero_is_empty_surface(tri):
    classes = SF.enumerate_classes(tri, None, 0)
    assert [(c.quads, c.chi, c.degree2) for c in classes] == [(((0, 0, 0),) * tri.t, 0, 0)]


def test_two_tet_low_classes(mds):
    classes = SF.enumerate_classes(TWO, mds["fig8-2tet"], 6)
    got = [(c.quads, c.degree2) for c in classes]
    assert got == [
        (((0, 0, 0), (0, 0, 0)), 0),
        (((0, 1, 2), (0, 1, 2)), 6),
        (((2, 1, 0), (2, 1, 0)), 6),
    ]


@pytest.mark.parametrize("tri", FIX, ids=lambda t: t.name)
def test_class_invariants(tri, mds):
    md = mds[tri.name]
    classes = SF.enumerate_classes(tri, md, 14)
    assert len({c.quads for c in classes}) == len(classes)
    for c in classes:
        assert all(min(t) == 0 for t in c.quads)
        assert md.contains(c.quads)
        assert SF.euler_char(tri, c.quads) == c.chi
        assert c.degree2 == -c.chi + sum(O.nu_oracle(*t) for t in c.quads)


@pytest.mark.parametrize("tri,box", [(TWO, 5), (THREE, 3)], ids=["fig8-2tet", "fig8-3tet"])
def test_enumeration_complete_in_a_box(tri, box, mds):
    # every normalized member with entries <= box and low degree must be listed
    md = mds[tri.name]
    prec2 = 10
    listed = {c.quads for c in SF.enumerate_classes(tri, md, prec2)}
    triples = [t for t in itertools.product(range(box + 1), repeat=3) if min(t) == 0]
    found = set()
    for q in itertools.product(triples, repeat=tri.t):
        if not md.contains(q):
            continue
        deg = -SF.euler_char(tri, q) + sum(O.nu_oracle(*t) for t in q)
        if deg <= prec2:
            found.add(q)
    assert found <= listed
    assert {q for q in listed if max(flat(q)) <= box} == found


@pytest.mark.parametrize("tri", FIX, ids=lambda t: t.name)
def test_counts_stable_in_larger_box(tri, mds):
    md = mds[tri.name]
    prec2 = 16
    K = SF.degree_bound(md, prec2)
    listed = sorted((c.degree2, c.quads) for c in SF.enumerate_classes(tri, md, prec2))
    wider = []
    for k in itertools.product(range(-K - 3, K + 4), repeat=md.rank):
        c = SF._class_of(md, k)
        if c.degree2 <= prec2:
            wider.append((c.degree2, c.quads))
    assert sorted(wider) == listed


def test_certification_failure():
    with pytest.raises(SF.CertificationError, match="not certifiable"):
        SF.enumerate_classes(THREE, None, 60, max_coord=1)


@pytest.mark.parametrize("tri", FIX, ids=lambda t: t.name)
def test_weights_agree_between_forms(tri, mds):
    for c in SF.enumerate_classes(tri, mds[tri.name], 16):
        a = SF.class_weight(c, 17, use_fkb=False)
        b = SF.class_weight(c, 17, use_fkb=True)
        assert a == b, c
        lo = qs.extremal(a)[0]
        assert lo.exp2 == c.degree2


# -- index ------------------------------------------------------------------------------


@pytest.mark.parametrize("tri", FIX, ids=lambda t: t.name)
def test_index_series(tri, mds):
    got = SF.index_series(tri, 11, md=mds[tri.name])
    assert got.prec2 == 11
    assert got.agrees_with(I_FIG8, 11)


def test_index_threads_identical(mds):
    a = SF.index_series(THREE, 15, md=mds["fig8-3tet"], threads=1)
    b = SF.index_series(THREE, 15, md=mds["fig8-3tet"], threads=2)
    assert qs.dumps(a) == qs.dumps(b)


def test_index_uses_e_infty(mds):
    total = qs.zero(13)
    for c in SF.enumerate_classes(TWO, mds["fig8-2tet"], 12):
        total = total + tetindex.e_infty(c.quads, c.chi, 13, use_fkb=True)
    assert total == SF.index_series(TWO, 13)
