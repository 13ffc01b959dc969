"""
Command-line entry point.

``--prec P`` is a half-exponent bound and is inclusive: the reported
series are exact through q^(P/2). Exit status is 0 on success, 1 when a
verification finds a mismatch (or a computation cannot certify its
result) and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass

from spindex import blocks, statesum, surfaces, tetindex
from spindex import qseries as qs
from spindex import triangulation as trimod
from spindex.qseries import QSeries

log = logging.getLogger("spindex")


@dataclass(frozen=True)
class RunConfig:
    precision2: int
    n_max: int = 60
    max_coord: int = 64
    threads: int = 1
    output: str = "text"

    def __post_init__(self):
        if self.precision2 < 0:
            raise ValueError("precision must be >= 0")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    @property
    def prec2(self) -> int:
        # exclusive bound used internally
        return self.precision2 + 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _default_threads() -> int:
    raw = os.environ.get("SPINDEX_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"SPINDEX_THREADS={raw!r} is not an integer") from None
    if n < 1:
        raise UsageError("SPINDEX_THREADS must be >= 1")
    return n


class Out:
    def __init__(self, mode: str, stream=None):
        self.mode = mode
        self.stream = stream or sys.stdout

    def series(self, name: str, f: QSeries, **extra):
        if self.mode == "machine":
            self.stream.write(qs.dumps(f, name=name, **extra) + "\n")
        else:
            tail = "".join(f"  [{k}={v}]" for k, v in extra.items())
            self.stream.write(f"{name} = {f}{tail}\n")

    def record(self, **fields):
        if self.mode == "machine":
            self.stream.write(json.dumps(fields, sort_keys=True) + "\n")
        else:
            self.stream.write("  ".join(f"{k}: {v}" for k, v in fields.items()) + "\n")


def _config(ns) -> RunConfig:
    return RunConfig(
        precision2=getattr(ns, "prec", 0),
        n_max=getattr(ns, "nmax", 60),
        max_coord=getattr(ns, "max_coord", 64),
        threads=ns.threads if getattr(ns, "threads", None) is not None else _default_threads(),
        output=ns.output,
    )


# -- commands ---------------------------------------------------------------------


def cmd_block(ns, out: Out) -> int:
    args = ns.colors
    want = {"u": 1, "theta": 3, "tet": 6}[ns.kind]
    if len(args) != want:
        raise UsageError(f"block {ns.kind} takes {want} colors, got {len(args)}")
    if any(a < 0 for a in args):
        raise UsageError("colors must be natural numbers")
    if ns.kind == "u":
        f = blocks.unknot(*args)
    elif ns.kind == "theta":
        f = blocks.theta(*args)
    else:
        f = blocks.tet(*args)
    out.series(ns.kind, f, colors=list(args))
    if not f.is_zero:
        low, high = qs.extremal(f)
        lem = blocks.lemma_extremal({"u": "U", "theta": "Theta", "tet": "Tet"}[ns.kind], args)
        out.record(
            lowest=[low.sign_coeff, low.exp2],
            highest=[high.sign_coeff, high.exp2],
            lemma=[lem.sign_coeff, lem.exp2],
        )
    return 0


def cmd_stab(ns, out: Out) -> int:
    prec2 = 2 * ns.order + 1
    cases = blocks.stab_check(ns.max_color, prec2, ns.shift_max, signed=(ns.sign == "nu"))
    bad = 0
    for c in cases:
        if not c.ok:
            bad += 1
        out.record(kind=c.kind, colors=list(c.colors), n0=c.n0, ok=c.ok)
    out.record(cases=len(cases), failures=bad, order=ns.order, sign=ns.sign)
    return 0 if bad == 0 else 1


def cmd_tet_index(ns, out: Out) -> int:
    cfg = _config(ns)
    out.series("I_Delta", tetindex.i_delta(ns.m, ns.e, cfg.prec2), m=ns.m, e=ns.e)
    return 0


def cmd_j(ns, out: Out) -> int:
    cfg = _config(ns)
    t = (ns.a, ns.b, ns.c)
    if ns.cmd == "j-delta":
        out.series("J_Delta", tetindex.j_delta(t, cfg.prec2), args=list(t))
    else:
        out.series("J_FKB", tetindex.j_fkb(t, cfg.prec2), args=list(t))
    return 0


def cmd_tri(ns, out: Out) -> int:
    tri = trimod.load(ns.tri)
    info = trimod.info(tri)
    if out.mode == "machine":
        out.record(**info)
        return 0
    s = out.stream
    s.write(f"name: {info['name']}\ntetrahedra: {info['tets']}\n")
    s.write(f"edge classes: {len(info['edge_classes'])}\n")
    for ec in info["edge_classes"]:
        inc = " ".join(f"{t}:{trimod.EDGES[e][0]}{trimod.EDGES[e][1]}" for t, e in ec["incidences"])
        s.write(f"  e{ec['id']} degree {ec['degree']}: {inc}\n")
    s.write(f"face classes: {len(info['face_classes'])}\n")
    for fc, tr in zip(info["face_classes"], info["triangles"]):
        sides = " ".join(f"{t}:{f}" for t, f in fc)
        s.write(f"  {sides}  edges {tuple(tr)}\n")
    s.write("tet edge labels (a b e d c f):\n")
    for j, row in enumerate(info["tet_edge_labels"]):
        s.write(f"  {j}: {' '.join(map(str, row))}\n")
    return 0


def cmd_tv_sum(ns, out: Out) -> int:
    cfg = _config(ns)
    tri = trimod.load(ns.tri)
    f = statesum.tv_n(tri, ns.N, cfg.prec2, cfg.threads)
    out.series("TV", f, N=ns.N)
    return 0


def cmd_fkb(ns, out: Out) -> int:
    cfg = _config(ns)
    tri = trimod.load(ns.tri)
    rep = statesum.fkb_limit(tri, cfg.prec2, n_max=cfg.n_max, threads=cfg.threads)
    out.series("I_fkb", rep.I_fkb, N_used=rep.N_used)
    out.series("I0", rep.I0, N_used=rep.N_used)
    out.series("2I1", rep.twoI1, N_used=rep.N_used)
    return 0


def cmd_index_ns(ns, out: Out) -> int:
    cfg = _config(ns)
    tri = trimod.load(ns.tri)
    f = surfaces.index_series(tri, cfg.prec2, max_coord=cfg.max_coord, threads=cfg.threads)
    out.series("I_ns", f)
    return 0


def cmd_verify(ns, out: Out) -> int:
    cfg = _config(ns)
    if ns.what == "prop1":
        if ns.tri is not None:
            raise UsageError("verify prop1 takes no triangulation")
        rep = tetindex.verify_prop1(ns.range, cfg.prec2, cfg.threads)
        for t, lhs, rhs in rep.mismatches:
            out.record(mismatch=list(t), j_fkb=lhs, j_delta=rhs)
        out.record(check="prop1", range=rep.range, prec=cfg.precision2, checked=rep.checked,
                   mismatches=len(rep.mismatches), ok=rep.ok)
        return 0 if rep.ok else 1
    if ns.tri is None:
        raise UsageError("verify thm1 needs a triangulation")
    tri = trimod.load(ns.tri)
    rep = statesum.fkb_limit(tri, cfg.prec2, n_max=cfg.n_max, threads=cfg.threads)
    ns_series = surfaces.index_series(tri, cfg.prec2, max_coord=cfg.max_coord, threads=cfg.threads)
    out.series("I_fkb", rep.I_fkb, route="state-sum", N_used=rep.N_used)
    out.series("I_ns", ns_series, route="normal-surfaces")
    diff = qs.add(rep.I_fkb, -ns_series)
    out.series("difference", diff)
    ok = diff.is_zero
    out.record(check="thm1", tri=tri.name, prec=cfg.precision2, ok=ok)
    return 0 if ok else 1


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("machine", "text"), default="text")
    common.add_argument("-v", "--verbose", action="store_true")

    prec = argparse.ArgumentParser(add_help=False)
    prec.add_argument("--prec", type=int, required=True, help="half-exponent precision (inclusive)")

    thr = argparse.ArgumentParser(add_help=False)
    thr.add_argument("--threads", type=int, default=None, help="worker processes (default $SPINDEX_THREADS or 1)")

    nmax = argparse.ArgumentParser(add_help=False)
    nmax.add_argument("--nmax", type=int, default=60)

    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--max-coord", dest="max_coord", type=int, default=64)

    p = _Parser(prog="spindex", description="Spin networks, the 3D-index and FKB state sums.")
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)
    sub.required = True

    b = sub.add_parser("block", parents=[common], help="exact U, Theta, Tet")
    b.add_argument("kind", choices=("u", "theta", "tet"))
    b.add_argument("colors", type=int, nargs="+")
    b.set_defaults(fn=cmd_block)

    s = sub.add_parser("stab-check", parents=[common], help="stabilization of hat Theta and hat Tet")
    s.add_argument("--order", type=int, required=True, help="compare through q^order")
    s.add_argument("--shift-max", dest="shift_max", type=int, required=True)
    s.add_argument("--max-color", dest="max_color", type=int, default=3)
    s.add_argument("--sign", choices=("nu", "normalized"), default="nu",
                   help="Tet limit with the (-1)^nu sign, or sign-normalized")
    s.set_defaults(fn=cmd_stab)

    ti = sub.add_parser("tet-index", parents=[common, prec], help="I_Delta(m, e)")
    ti.add_argument("m", type=int)
    ti.add_argument("e", type=int)
    ti.set_defaults(fn=cmd_tet_index)

    for name in ("j-delta", "j-fkb"):
        j = sub.add_parser(name, parents=[common, prec])
        for x in "abc":
            j.add_argument(x, type=int)
        j.set_defaults(fn=cmd_j)

    tr = sub.add_parser("tri", parents=[common], help="triangulation data")
    tr.add_argument("action", choices=("info",))
    tr.add_argument("tri", help="fixture name or gluing file")
    tr.set_defaults(fn=cmd_tri)

    tv = sub.add_parser("tv-sum", parents=[common, prec, thr])
    tv.add_argument("tri")
    tv.add_argument("--N", type=int, required=True)
    tv.set_defaults(fn=cmd_tv_sum)

    f = sub.add_parser("fkb", parents=[common, prec, thr, nmax])
    f.add_argument("tri")
    f.set_defaults(fn=cmd_fkb)

    ix = sub.add_parser("index-ns", parents=[common, prec, thr, mc])
    ix.add_argument("tri")
    ix.set_defaults(fn=cmd_index_ns)

    v = sub.add_parser("verify", parents=[common, prec, thr, nmax, mc])
    v.add_argument("what", choices=("prop1", "thm1"))
    v.add_argument("tri", nargs="?")
    v.add_argument("--range", type=int, default=3)
    v.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out = Out(ns.output)
    try:
        if getattr(ns, "prec", 0) < 0:
            raise UsageError("--prec must be >= 0")
        if getattr(ns, "threads", None) is not None and ns.threads < 1:
            raise UsageError("--threads must be >= 1")
        return ns.fn(ns, out)
    except UsageError as exc:
        print(f"spindex: error: {exc}", file=sys.stderr)
        return 2
    except (trimod.TriangulationError, blocks.InadmissibleError) as exc:
        print(f"spindex: error: {exc}", file=sys.stderr)
        return 2
    except (statesum.NoStabilizationError, surfaces.CertificationError, surfaces.SurfaceError) as exc:
        print(f"spindex: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
