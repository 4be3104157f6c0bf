"""Command line front-end: run JSON job files and print JSON results.

    torsionnorm run JOB.json [--svg OUT.svg] [--verbose] [--timing]
    torsionnorm examples [--show NAME]

A job names a presentation, a representation and a list of queries
(``torsion``, ``delta_bar``, ``norm_ball``, ``selftest``).  Output is
deterministic; wall-clock timings are only added with ``--timing``.
"""

import argparse
import json
import logging
import sys
import time
from fractions import Fraction
from importlib import resources

from . import selftest
from .errors import (ComputeError, InvalidRep, ParseError, TorsionNormError,
                     ValidationError)
from .fox import CompatibleRep, Presentation, delta_bar, presentation_norm, known_presentation, torsion
from .norms import NEG_INF
from .scalars import BaseField
from .skew_laurent import SkewLaurentRing

log = logging.getLogger("torsionnorm")

EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_COMPUTE = 4

QUERY_TYPES = ("torsion", "delta_bar", "norm_ball", "selftest")


# job parsing ----------------------------------------------------------------------


def _require(obj, key, path, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"missing field {key!r}", path=path)
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise ValidationError(f"field {key!r} has the wrong type", path=f"{path}.{key}")
    return value


def _int_matrix(value, path):
    try:
        return [[int(a) for a in row] for row in value]
    except (TypeError, ValueError):
        raise ValidationError("expected a matrix of integers", path=path) from None


def _int_vectors(value, path):
    if not isinstance(value, list):
        raise ValidationError("expected a list of integer vectors", path=path)
    out = []
    for i, v in enumerate(value):
        if not isinstance(v, list) or not all(isinstance(a, int) for a in v):
            raise ValidationError("expected a list of integers", path=f"{path}[{i}]")
        out.append(tuple(v))
    return out


def build_presentation(obj, path="presentation"):
    if not isinstance(obj, dict):
        raise ValidationError("presentation must be an object", path=path)
    if "known" in obj:
        return known_presentation(obj["known"])
    gens = _require(obj, "generators", path)
    if isinstance(gens, list):
        gens = "".join(gens)
    if not isinstance(gens, str):
        raise ValidationError("generators must be a string of letters", path=f"{path}.generators")
    rels = _require(obj, "relators", path, list)
    if not all(isinstance(r, str) for r in rels):
        raise ValidationError("relators must be strings", path=f"{path}.relators")
    try:
        return Presentation.parse(gens, rels, path=f"{path}.relators")
    except ValidationError as exc:
        exc.path = exc.path or f"{path}.generators"
        raise


def build_ring(obj, path="ring"):
    if not isinstance(obj, dict):
        raise ValidationError("ring must be an object", path=path)
    k = obj.get("k", 0)
    m = _require(obj, "m", path, int)
    action = obj.get("action")
    if action is not None:
        if len(action) != m:
            raise ValidationError(f"expected {m} action matrices", path=f"{path}.action")
        action = [_int_matrix(a, f"{path}.action[{i}]") for i, a in enumerate(action)]
    try:
        K = BaseField(k, action, names=obj.get("field_names"), m=m)
    except ValidationError as exc:
        exc.path = f"{path}.{exc.path}" if exc.path else path
        raise
    commutators = {}
    for i, c in enumerate(obj.get("commutators", [])):
        cpath = f"{path}.commutators[{i}]"
        a, b = _require(c, "i", cpath, int), _require(c, "j", cpath, int)
        value = _require(c, "value", cpath)
        commutators[(a - 1, b - 1)] = _scalar(K, value, f"{cpath}.value")
    try:
        return SkewLaurentRing(K, m, commutators, names=obj.get("names"))
    except ValidationError as exc:
        exc.path = exc.path or path
        raise


def _scalar(K, value, path):
    try:
        if isinstance(value, str):
            return K.parse(value)
        return K(value)
    except ParseError as exc:
        exc.path = path
        raise
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad field element: {exc}", path=path) from None


def build_representation(obj, presentation, ring_obj, path="representation"):
    if obj is None:
        obj = {"type": "abelian"}
    kind = _require(obj, "type", path, str)
    try:
        if kind == "abelian":
            return CompatibleRep.abelianization(presentation)
        if kind == "metabelian":
            action = [_int_matrix(a, f"{path}.action[{i}]")
                      for i, a in enumerate(_require(obj, "action", path, list))]
            psi = _int_vectors(_require(obj, "psi", path), f"{path}.psi")
            exps = _int_vectors(_require(obj, "exponents", path), f"{path}.exponents")
            if len(psi) != presentation.n or len(exps) != presentation.n:
                raise ValidationError(f"psi and exponents need one entry per generator ({presentation.n})",
                                      path=path)
            return CompatibleRep.metabelian(presentation, action, psi, exps)
        if kind == "compatible":
            if ring_obj is None:
                raise ValidationError("a compatible representation needs a ring", path="ring")
            ring = build_ring(ring_obj)
            psi = _int_vectors(_require(obj, "psi", path), f"{path}.psi")
            units = obj.get("units")
            if units is not None:
                units = [[[_scalar(ring.base, a, f"{path}.units[{g}]") for a in row] for row in A]
                         for g, A in enumerate(units)]
            return CompatibleRep(presentation, ring, psi, units)
    except InvalidRep as exc:
        raise ValidationError(str(exc), path=path) from None
    raise ValidationError(f"unknown representation type {kind!r}", path=f"{path}.type")


def load_job(text, source=None):
    """Parse and validate a job document; returns (job dict, presentation, rep)."""
    try:
        job = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", text, exc.lineno, exc.colno, source) from None
    if not isinstance(job, dict):
        raise ValidationError("a job must be a JSON object")
    P = build_presentation(_require(job, "presentation", "job"))
    rep = build_representation(job.get("representation"), P, job.get("ring"))
    queries = job.get("queries", [])
    if not isinstance(queries, list):
        raise ValidationError("queries must be a list", path="queries")
    for i, q in enumerate(queries):
        kind = _require(q, "type", f"queries[{i}]", str)
        if kind not in QUERY_TYPES:
            raise ValidationError(f"unknown query type {kind!r}", path=f"queries[{i}].type")
        if kind == "delta_bar":
            phi = _int_vectors([_require(q, "phi", f"queries[{i}]")], f"queries[{i}].phi")[0]
            if len(phi) != rep.ring.m:
                raise ValidationError(f"phi must have length {rep.ring.m}", path=f"queries[{i}].phi")
            if not any(phi):
                raise ValidationError("phi must be nonzero", path=f"queries[{i}].phi")
    return job, P, rep


# execution ---------------------------------------------------------------------------


def _number(x):
    if x == NEG_INF:
        return "-inf"
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


class Runner:
    def __init__(self, presentation, rep):
        self.presentation = presentation
        self.rep = rep
        self._torsion = None
        self.balls = []

    def torsion(self):
        if self._torsion is None:
            self._torsion = torsion(self.presentation, self.rep)
        return self._torsion

    def run_query(self, q):
        kind = q["type"]
        if kind == "selftest":
            return selftest.run(q.get("seed"))
        res = self.torsion()
        if kind == "torsion":
            if res.is_zero:
                return {"zero": True, "pivot": res.provenance["pivot"]}
            return {"zero": False, "f_n": str(res.cleared.f_n), "f_d": str(res.cleared.f_d),
                    "pivot": res.provenance["pivot"], "verified": res.verified}
        if kind == "delta_bar":
            phi = tuple(q["phi"])
            a = delta_bar(self.presentation, self.rep, phi, "newton", res)
            b = delta_bar(self.presentation, self.rep, phi, "deg", res)
            return {"phi": list(phi), "delta_bar": _number(a), "via_degree": _number(b),
                    "paths_agree": a == b}
        if kind == "norm_ball":
            if res.is_zero:
                return {"zero_torsion": True, "delta_bar": "-inf"}
            ball = presentation_norm(self.presentation, self.rep, res).ball
            self.balls.append(ball)
            out = ball.to_json()
            out["zero_seminorm"] = ball.degenerate
            return out
        raise ValidationError(f"unknown query type {kind!r}")


def run_job(text, source=None, timing=False):
    """Run a job document and return the result dictionary (raises library errors)."""
    t0 = time.perf_counter()
    job, P, rep = load_job(text, source)
    runner = Runner(P, rep)
    results = []
    times = []
    for i, q in enumerate(job.get("queries", [])):
        t = time.perf_counter()
        log.info("query %d: %s", i, q["type"])
        try:
            out = runner.run_query(q)
        except (ValidationError, ParseError):
            raise
        except TorsionNormError as exc:
            raise ComputeError(f"{type(exc).__name__}: {exc}", path=f"queries[{i}]") from exc
        results.append({"type": q["type"], **out})
        times.append(time.perf_counter() - t)
    doc = {
        "job": job.get("name", source),
        "presentation": repr(P),
        "representation": rep.name,
        "ring": {"m": rep.ring.m, "k": rep.ring.base.k, "d": rep.d},
        "results": results,
    }
    if timing:
        doc["timing"] = {"total_seconds": round(time.perf_counter() - t0, 6),
                         "query_seconds": [round(t, 6) for t in times]}
    return doc, runner


def error_document(exc):
    return {"error": {"type": type(exc).__name__, "message": str(exc),
                      "location": exc.location() if hasattr(exc, "location") else {}}}


# svg ------------------------------------------------------------------------------------


def _fmt_frac(a):
    a = Fraction(a)
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def norm_ball_svg(ball, size=360):
    """Static SVG drawing of a planar norm ball with labelled vertices."""
    if ball.m != 2:
        raise ValidationError("SVG output needs a norm ball in the plane (m = 2)")
    pts = ball.vertices or []
    extent = max([abs(float(a)) for p in pts for a in p] + [1.0]) * 1.4
    scale = size / (2 * extent)

    def xy(p):
        return size / 2 + float(p[0]) * scale, size / 2 - float(p[1]) * scale

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>',
             f'<line x1="0" y1="{size / 2}" x2="{size}" y2="{size / 2}" stroke="#bbb"/>',
             f'<line x1="{size / 2}" y1="0" x2="{size / 2}" y2="{size}" stroke="#bbb"/>']
    if ball.degenerate:
        lines.append('<text x="10" y="20" font-size="14">zero seminorm: the ball is the whole plane</text>')
    elif ball.lineality:
        # a strip between two parallel lines through the two vertices
        d = ball.lineality[0]
        for p in pts:
            a = xy((p[0] - d[0] * 2 * extent, p[1] - d[1] * 2 * extent))
            b = xy((p[0] + d[0] * 2 * extent, p[1] + d[1] * 2 * extent))
            lines.append(f'<line x1="{a[0]:.2f}" y1="{a[1]:.2f}" x2="{b[0]:.2f}" y2="{b[1]:.2f}" '
                         f'stroke="black" stroke-width="2"/>')
    else:
        from .norms import _ccw
        ring = _ccw(pts)
        path = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(xy, ring))
        lines.append(f'<polygon points="{path}" fill="#cde" stroke="black" stroke-width="2"/>')
    for p in pts:
        x, y = xy(p)
        label = f"({_fmt_frac(p[0])}, {_fmt_frac(p[1])})"
        lines.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="black"/>')
        lines.append(f'<text x="{x + 5:.2f}" y="{y - 5:.2f}" font-size="12">{label}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# entry point -----------------------------------------------------------------------------


def bundled_jobs():
    """{name: text} of the job files shipped with the package."""
    out = {}
    for entry in sorted(resources.files("torsionnorm").joinpath("jobs").iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            out[entry.name[:-5]] = entry.read_text()
    return out


def _read_job(path):
    try:
        with open(path) as fh:
            return fh.read(), path
    except FileNotFoundError:
        jobs = bundled_jobs()
        if path in jobs:
            return jobs[path], path
        raise


def cmd_run(args):
    try:
        text, source = _read_job(args.job)
    except OSError as exc:
        err = ValidationError(f"cannot read job file: {exc.strerror}", path=args.job)
        print(json.dumps(error_document(err), indent=2))
        return EXIT_VALIDATION
    try:
        doc, runner = run_job(text, source, timing=args.timing)
    except ParseError as exc:
        print(json.dumps(error_document(exc), indent=2))
        return EXIT_PARSE
    except ValidationError as exc:
        print(json.dumps(error_document(exc), indent=2))
        return EXIT_VALIDATION
    except TorsionNormError as exc:
        if not isinstance(exc, ComputeError):
            exc = ComputeError(f"{type(exc).__name__}: {exc}")
        print(json.dumps(error_document(exc), indent=2))
        return EXIT_COMPUTE
    print(json.dumps(doc, indent=2))
    if args.svg:
        planar = [b for b in runner.balls if b.m == 2]
        if not planar:
            print("no planar norm ball in this job; SVG not written", file=sys.stderr)
        else:
            with open(args.svg, "w") as fh:
                fh.write(norm_ball_svg(planar[0]))
            log.info("wrote %s", args.svg)
    return 0


def cmd_examples(args):
    jobs = bundled_jobs()
    if args.show:
        if args.show not in jobs:
            print(f"unknown example {args.show!r}", file=sys.stderr)
            return EXIT_VALIDATION
        sys.stdout.write(jobs[args.show])
        return 0
    for name, text in jobs.items():
        desc = json.loads(text).get("description", "")
        print(f"{name:20s} {desc}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="torsionnorm",
                                     description="Torsion seminorms of skew Laurent matrices and link groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a JSON job file (or the name of a bundled example)")
    run.add_argument("job")
    run.add_argument("--svg", help="write the planar norm ball of the first norm_ball query")
    run.add_argument("--verbose", action="store_true", help="log progress to stderr")
    run.add_argument("--timing", action="store_true", help="add wall-clock timings to the output")
    run.set_defaults(func=cmd_run)
    ex = sub.add_parser("examples", help="list the bundled example jobs")
    ex.add_argument("--show", metavar="NAME", help="print one bundled job")
    ex.set_defaults(func=cmd_examples)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
