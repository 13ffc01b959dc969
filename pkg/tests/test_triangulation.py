import itertools
import json
import random

import pytest

from spindex import triangulation as T

ODD_PERMS = [p for p in itertools.permutations(range(4)) if T._perm_sign(p) == -1]


def random_gluing(t, rng):
    """A random pairing of the 4t faces with random orientation-reversing maps."""
    faces = [(j, f) for j in range(t) for f in range(4)]
    rng.shuffle(faces)
    rows = []
    for (j, f), (k, g) in zip(faces[::2], faces[1::2]):
        perm = rng.choice([p for p in ODD_PERMS if p[f] == g])
        rows.append([j, f, k, g, list(perm)])
    return {"tets": t, "gluings": rows}


def to_regina(doc):
    import regina

    tri = regina.Triangulation3()
    tets = [tri.newTetrahedron() for _ in range(doc["tets"])]
    for j, f, k, g, perm in doc["gluings"]:
        tets[j].join(f, tets[k], regina.Perm4(*perm))
    return tri


# -- fixtures ------------------------------------------------------------------------


def test_fig8_2tet_counts():
    tri = T.fixture("fig8-2tet")
    assert tri.t == 2
    assert len(tri.edge_classes) == 2
    assert len(tri.face_classes) == 4
    assert sorted(ec.degree for ec in tri.edge_classes) == [6, 6]


def test_fig8_3tet_counts():
    tri = T.fixture("fig8-3tet")
    assert tri.t == 3
    assert len(tri.edge_classes) == 3
    assert len(tri.face_classes) == 6
    assert sorted(ec.degree for ec in tri.edge_classes) == [3, 6, 9]


@pytest.mark.parametrize("name", sorted(T.FIXTURES))
def test_fixture_invariants(name):
    tri = T.fixture(name)
    assert sum(ec.degree for ec in tri.edge_classes) == 6 * tri.t
    seen = sorted(x for ec in tri.edge_classes for x in ec.incidences)
    assert seen == [(j, e) for j in range(tri.t) for e in range(6)]
    assert len(tri.edge_classes) == tri.t
    for j in range(tri.t):
        row = tri.edge_of[j]
        for e, (u, v) in enumerate(T.EDGES):
            assert tri.edge_of[j][T.EDGE_INDEX[(v, u)]] == row[e]


@pytest.mark.parametrize("name", sorted(T.FIXTURES))
def test_fixture_against_regina(name):
    regina = pytest.importorskip("regina")
    doc = T.FIXTURES[name]
    ours = to_regina(doc)
    ref = regina.Triangulation3.fromIsoSig(doc["isosig"])
    assert ours.isOriented()
    assert ours.isIsomorphicTo(ref) is not None
    assert ours.countEdges() == len(T.fixture(name).edge_classes)


def test_load_by_name_and_path(tmp_path):
    assert T.load("fig8-2tet") == T.fixture("fig8-2tet")
    p = tmp_path / "x.json"
    p.write_text(json.dumps(T.FIXTURES["fig8-3tet"]))
    assert T.load(str(p)) == T.fixture("fig8-3tet")
    with pytest.raises(T.TriangulationError):
        T.load(str(tmp_path / "missing.json"))
    with pytest.raises(T.TriangulationError):
        T.fixture("nope")


# -- parse errors --------------------------------------------------------------------


def _doc():
    return json.loads(json.dumps(T.FIXTURES["fig8-2tet"]))


def test_dangling_face():
    doc = _doc()
    doc["gluings"].pop()
    with pytest.raises(T.TriangulationError, match="dangling"):
        T.parse(doc)


def test_not_an_involution():
    doc = _doc()
    # glue tet 0 face 0 a second time, to a different target
    doc["gluings"].append([0, 0, 1, 1, [1, 0, 2, 3]])
    with pytest.raises(T.TriangulationError):
        T.parse(doc)


def test_bad_permutations():
    doc = _doc()
    doc["gluings"][0][4] = [0, 1, 1, 2]
    with pytest.raises(T.TriangulationError, match="not a permutation"):
        T.parse(doc)
    doc = _doc()
    doc["gluings"][0][4] = [1, 0, 3, 2]  # sends face 0 to 1
    with pytest.raises(T.TriangulationError):
        T.parse(doc)


def test_even_permutation_rejected():
    doc = {"tets": 1, "gluings": [[0, 0, 0, 1, [1, 0, 3, 2]], [0, 2, 0, 3, [0, 1, 3, 2]]]}
    with pytest.raises(T.TriangulationError, match="orientation"):
        T.parse(doc)


def test_self_glue_and_garbage():
    with pytest.raises(T.TriangulationError, match="itself"):
        T.parse({"tets": 1, "gluings": [[0, 0, 0, 0, [0, 2, 1, 3]]]})
    with pytest.raises(T.TriangulationError, match="JSON"):
        T.parse("{not json")
    with pytest.raises(T.TriangulationError):
        T.parse({"gluings": []})
    with pytest.raises(T.TriangulationError):
        T.parse({"tets": 0, "gluings": []})
    with pytest.raises(T.TriangulationError, match="out of range"):
        T.parse({"tets": 1, "gluings": [[0, 0, 3, 1, [1, 0, 2, 3]]]})


# -- round trip and random gluings ------------------------------------------------------


@pytest.mark.parametrize("name", sorted(T.FIXTURES))
def test_round_trip(name):
    tri = T.fixture(name)
    again = T.parse(json.dumps(T.serialize(tri)))
    assert again == tri
    assert again.triangles == tri.triangles


def test_random_gluings():
    rng = random.Random(3)
    have_regina = True
    try:
        import regina  # noqa: F401
    except ImportError:
        have_regina = False
    for _ in range(60):
        t = rng.randint(1, 5)
        doc = random_gluing(t, rng)
        tri = T.parse(doc)
        assert sum(ec.degree for ec in tri.edge_classes) == 6 * t
        assert len(tri.face_classes) == 2 * t
        assert T.parse(T.serialize(tri)) == tri
        if have_regina:
            assert len(tri.edge_classes) == to_regina(doc).countEdges()


# -- colorings ------------------------------------------------------------------------


def test_coloring_admissible():
    tri = T.fixture("fig8-2tet")
    assert T.coloring_admissible(tri, [0, 0])
    # every triangle of the 2-tet meets both edge classes, one of them twice
    assert all(sorted(set(t)) == [0, 1] for t in tri.triangles)
    assert not T.coloring_admissible(tri, [1, 1])
    tri3 = T.fixture("fig8-3tet")
    assert T.coloring_admissible(tri3, [0, 0, 0])


def test_coloring_parity_and_boundary_inequality():
    # one triangle with edge classes (0, 0, 1)
    class Fake:
        triangles = ((0, 0, 1),)

    assert not T.coloring_admissible(Fake, [1, 1])
    assert T.coloring_admissible(Fake, [1, 2])
    assert not T.coloring_admissible(Fake, [1, 4])


def test_info():
    d = T.info(T.fixture("fig8-2tet"))
    assert d["tets"] == 2
    assert len(d["edge_classes"]) == 2
    assert len(d["face_classes"]) == 4
    assert len(d["tet_edge_labels"]) == 2 and all(len(r) == 6 for r in d["tet_edge_labels"])
    json.dumps(d)
