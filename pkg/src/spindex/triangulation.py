"""
Ideal triangulations as face-gluing tables.

A document is JSON ``{"tets": t, "gluings": [[tet, face, tet2, face2,
[p0, p1, p2, p3]], ...]}`` where the permutation sends vertex i of
``tet`` to vertex p_i of ``tet2`` and ``face2 == p[face]``. Each pair of
faces may be listed once or in both directions.

Tetrahedron edges are numbered 0..5 as 01, 02, 03, 12, 13, 23. Edges
(01, 23), (02, 13), (03, 12) are opposite; quad type i is the normal
quadrilateral disjoint from the i-th opposite pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

__all__ = [
    "TriangulationError",
    "Triangulation",
    "EdgeClass",
    "EDGES",
    "OPPOSITE_PAIRS",
    "SIX_SLOTS",
    "parse",
    "load",
    "serialize",
    "edge_classes",
    "tet_edge_labels",
    "coloring_admissible",
    "FIXTURES",
    "fixture",
]

EDGES: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {e: i for i, e in enumerate(EDGES)}
EDGE_INDEX.update({(j, i): k for (i, j), k in list(EDGE_INDEX.items())})
OPPOSITE_PAIRS: tuple[tuple[int, int], ...] = ((0, 5), (1, 4), (2, 3))
# edge indices feeding the (a, b, e, d, c, f) slots of a 6j-symbol
SIX_SLOTS: tuple[int, ...] = (0, 1, 3, 5, 4, 2)
QUAD_OF_EDGE = {0: 0, 5: 0, 1: 1, 4: 1, 2: 2, 3: 2}


class TriangulationError(ValueError):
    pass


def _perm_sign(p: Sequence[int]) -> int:
    sign = 1
    p = list(p)
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                sign = -sign
    return sign


def _face_edges(face: int) -> list[int]:
    vs = [v for v in range(4) if v != face]
    return [EDGE_INDEX[(vs[0], vs[1])], EDGE_INDEX[(vs[0], vs[2])], EDGE_INDEX[(vs[1], vs[2])]]


class _UF:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[max(a, b)] = min(a, b)


@dataclass(frozen=True)
class EdgeClass:
    id: int
    incidences: tuple[tuple[int, int], ...]  # (tet, edge 0..5)

    @property
    def degree(self) -> int:
        return len(self.incidences)


@dataclass(frozen=True)
class Triangulation:
    t: int
    # (tet, face) -> (tet2, perm)
    gluings: dict = field(hash=False, compare=True)
    name: str = field(default="", compare=False)

    # -- derived data ------------------------------------------------------

    @property
    def edge_of(self) -> tuple[tuple[int, ...], ...]:
        """edge_of[tet][edge] -> edge class id."""
        return self._derived()[0]

    @property
    def edge_classes(self) -> tuple[EdgeClass, ...]:
        return self._derived()[1]

    @property
    def face_classes(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Each triangle as its (tet, face) sides."""
        return self._derived()[2]

    @property
    def triangles(self) -> tuple[tuple[int, int, int], ...]:
        """Edge-class triple of each triangle (with repetition)."""
        return self._derived()[3]

    def _derived(self):
        cache = self.__dict__.get("_cache")
        if cache is None:
            cache = _derive(self)
            object.__setattr__(self, "_cache", cache)
        return cache

    @property
    def n_edges(self) -> int:
        return len(self.edge_classes)

    def six_labels(self, tet: int) -> tuple[int, ...]:
        """Edge-class ids in 6j slot order (a, b, e, d, c, f)."""
        row = self.edge_of[tet]
        return tuple(row[i] for i in SIX_SLOTS)


def _derive(tri: Triangulation):
    uf = _UF(6 * tri.t)
    fuf = _UF(4 * tri.t)
    for (tet, face), (tet2, perm) in tri.gluings.items():
        face2 = perm[face]
        fuf.union(4 * tet + face, 4 * tet2 + face2)
        vs = [v for v in range(4) if v != face]
        for i in range(3):
            for j in range(i + 1, 3):
                u, v = vs[i], vs[j]
                e1 = EDGE_INDEX[(u, v)]
                e2 = EDGE_INDEX[(perm[u], perm[v])]
                uf.union(6 * tet + e1, 6 * tet2 + e2)
    roots: dict[int, int] = {}
    edge_of = []
    incid: dict[int, list] = {}
    for tet in range(tri.t):
        row = []
        for e in range(6):
            r = uf.find(6 * tet + e)
            cid = roots.setdefault(r, len(roots))
            row.append(cid)
            incid.setdefault(cid, []).append((tet, e))
        edge_of.append(tuple(row))
    classes = tuple(EdgeClass(i, tuple(incid[i])) for i in range(len(roots)))
    froots: dict[int, list] = {}
    for tet in range(tri.t):
        for f in range(4):
            froots.setdefault(fuf.find(4 * tet + f), []).append((tet, f))
    faces = tuple(tuple(v) for _, v in sorted(froots.items()))
    tris = tuple(tuple(edge_of[s[0][0]][e] for e in _face_edges(s[0][1])) for s in faces)
    return tuple(edge_of), classes, faces, tris


# -- parsing ------------------------------------------------------------------


def parse(doc, name: str = "") -> Triangulation:
    """Validate a gluing document (dict or JSON text) into a Triangulation."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise TriangulationError(f"not valid JSON: {exc}") from None
    try:
        t = int(doc["tets"])
        rows = doc["gluings"]
    except (KeyError, TypeError, ValueError):
        raise TriangulationError("document needs integer 'tets' and a 'gluings' list") from None
    if t <= 0:
        raise TriangulationError("need at least one tetrahedron")
    glue: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = {}
    for row in rows:
        try:
            tet, face, tet2, face2, perm = row
            tet, face, tet2, face2 = int(tet), int(face), int(tet2), int(face2)
            perm = tuple(int(x) for x in perm)
        except (TypeError, ValueError):
            raise TriangulationError(f"malformed gluing row {row!r}") from None
        for tt, ff in ((tet, face), (tet2, face2)):
            if not (0 <= tt < t and 0 <= ff < 4):
                raise TriangulationError(f"tetrahedron {tt} face {ff} out of range")
        if sorted(perm) != [0, 1, 2, 3]:
            raise TriangulationError(f"tetrahedron {tet} face {face}: {perm} is not a permutation")
        if perm[face] != face2:
            raise TriangulationError(
                f"tetrahedron {tet} face {face}: permutation sends face to {perm[face]}, not {face2}"
            )
        if (tet, face) == (tet2, face2):
            raise TriangulationError(f"tetrahedron {tet} face {face} is glued to itself")
        inv = [0] * 4
        for i, p in enumerate(perm):
            inv[p] = i
        inv = tuple(inv)
        for key, val in (((tet, face), (tet2, perm)), ((tet2, face2), (tet, inv))):
            old = glue.get(key)
            if old is not None and old != val:
                raise TriangulationError(
                    f"tetrahedron {key[0]} face {key[1]}: conflicting gluings (not an involution)"
                )
            glue[key] = val
    for tet in range(t):
        for f in range(4):
            if (tet, f) not in glue:
                raise TriangulationError(f"tetrahedron {tet} face {f} is not glued (dangling face)")
    for (tet, face), (tet2, perm) in glue.items():
        if _perm_sign(perm) != -1:
            raise TriangulationError(
                f"tetrahedron {tet} face {face}: even gluing permutation breaks orientation"
            )
    return Triangulation(t, glue, name)


def serialize(tri: Triangulation) -> dict:
    rows = []
    for (tet, face), (tet2, perm) in sorted(tri.gluings.items()):
        face2 = perm[face]
        if (tet, face) <= (tet2, face2):
            rows.append([tet, face, tet2, face2, list(perm)])
    return {"tets": tri.t, "gluings": rows}


def load(path_or_name: str) -> Triangulation:
    """A fixture name (``fig8-2tet``) or a path to a gluing document."""
    if path_or_name in FIXTURES:
        return fixture(path_or_name)
    p = Path(path_or_name)
    if not p.exists():
        raise TriangulationError(f"no fixture or file named {path_or_name!r}")
    return parse(p.read_text(), name=p.stem)


def edge_classes(tri: Triangulation) -> tuple[EdgeClass, ...]:
    return tri.edge_classes


def tet_edge_labels(tri: Triangulation) -> tuple[tuple[int, ...], ...]:
    """Per tetrahedron, edge-class ids in 6j slot order (a, b, e, d, c, f)."""
    return tuple(tri.six_labels(j) for j in range(tri.t))


def coloring_admissible(tri: Triangulation, colors: Sequence[int]) -> bool:
    from spindex.blocks import is_admissible

    return all(is_admissible(colors[i], colors[j], colors[k]) for i, j, k in tri.triangles)


def info(tri: Triangulation) -> dict:
    return {
        "name": tri.name,
        "tets": tri.t,
        "edge_classes": [
            {"id": ec.id, "degree": ec.degree, "incidences": [list(x) for x in ec.incidences]}
            for ec in tri.edge_classes
        ],
        "face_classes": [[list(s) for s in fc] for fc in tri.face_classes],
        "triangles": [list(t) for t in tri.triangles],
        "tet_edge_labels": [list(r) for r in tet_edge_labels(tri)],
    }


# Fixtures: oriented gluing tables decoded from the isometry signatures with
# Regina 7 (Triangulation3.fromIsoSig + orient); both identified by SnapPy as
# m004 = 4_1. tests/test_triangulation.py re-decodes them when regina is importable.
FIXTURES: dict[str, dict] = {
    "fig8-2tet": {
        "isosig": "cPcbbbiht",
        "tets": 2,
        "gluings": [
            [0, 0, 1, 0, [0, 1, 3, 2]],
            [0, 1, 1, 3, [1, 3, 0, 2]],
            [0, 2, 1, 2, [1, 0, 2, 3]],
            [0, 3, 1, 1, [2, 0, 3, 1]],
        ],
    },
    "fig8-3tet": {
        "isosig": "dLQbcccdegj",
        "tets": 3,
        "gluings": [
            [0, 0, 1, 0, [0, 1, 3, 2]],
            [0, 1, 2, 1, [0, 1, 3, 2]],
            [0, 2, 1, 2, [0, 3, 2, 1]],
            [0, 3, 2, 3, [0, 2, 1, 3]],
            [1, 1, 2, 0, [1, 0, 2, 3]],
            [1, 3, 2, 2, [1, 3, 0, 2]],
        ],
    },
}


def fixture(name: str) -> Triangulation:
    try:
        doc = FIXTURES[name]
    except KeyError:
        raise TriangulationError(f"unknown fixture {name!r}; have {sorted(FIXTURES)}") from None
    return parse(doc, name=name)
