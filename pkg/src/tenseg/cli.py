"""Command line: ``tenseg analyze | generate | corpus | svg``.

Exit codes for ``analyze``: 0 bar-equivalent, 1 partially bar-equivalent,
2 neither.  ``corpus`` exits 1 when it finds violations.  Errors exit with
10 (input), 11 (solver), 12 (output) or 13 (usage).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import families, linalg, model, stress as st
from .classify import Classification, classify
from .rigidity import FULL, ISOMETRY, build_operator, variation_space
from .svg import render_svg

SCHEMA = 1
EXIT_INPUT, EXIT_SOLVER, EXIT_OUTPUT, EXIT_USAGE = 10, 11, 12, 13


class OutputError(Exception):
    """A requested output file could not be written."""


def _write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _num(x) -> float:
    x = float(x)
    return 0.0 if x == 0 else x


def _rows_table(t: model.Tensegrity, weights) -> list[dict]:
    ids = t.ids
    return [{"row": k, "kind": r.kind, "a": ids[r.endpoints[0]], "b": ids[r.endpoints[1]],
             "origin": r.origin, "weight": _num(w)}
            for k, (r, w) in enumerate(zip(model.edge_rows(t), weights))]


def certificate_dict(t: model.Tensegrity, cert) -> dict | None:
    if cert is None:
        return None
    if isinstance(cert, st.StressVector):
        return {"type": "stress", "positivity": cert.positivity,
                "rows": _rows_table(t, cert.normalized)}
    top = float(np.max(np.abs(cert.load), initial=0.0)) or 1.0
    V = (cert.field / top).reshape(-1, t.dim)
    return {"type": "motion", "positivity": cert.positivity,
            "vectors": [{"vertex": v, "field": [_num(x) for x in vec]}
                        for v, vec in zip(t.ids, V)],
            "rows": _rows_table(t, cert.load / top)}


def analysis_report(t: model.Tensegrity, mode: str, source: str) -> tuple[dict, Classification]:
    c = classify(t, mode)
    report = {
        "schema": SCHEMA,
        "command": "analyze",
        "source": source,
        "mode": mode,
        "verdict": c.verdict,
        "bar_equivalent": c.bar_equivalent,
        "partially_bar_equivalent": c.partially_bar_equivalent,
        "infinitesimally_rigid": c.infinitesimally_rigid,
        "dim_stress_space": c.dim_stress_space,
        "dim_T": c.dim_T,
        "dim_motions_modulo_T": c.dim_motions_modulo_T,
        "vertices": len(t.vertices),
        "rows": len(model.edge_rows(t)),
        "solver": {"lp_tolerance": linalg.solver_tol(), "support_tol": st.SUPPORT_TOL},
        "certificate": certificate_dict(t, c.certificate),
    }
    return report, c


def summary_line(report: dict) -> str:
    parts = [report["verdict"]]
    if report["bar_equivalent"]:
        parts.append("infinitesimally rigid" if report["infinitesimally_rigid"]
                     else "not infinitesimally rigid")
    cert = report["certificate"]
    if cert is not None:
        ws = [r["weight"] for r in cert["rows"]]
        if cert["type"] == "stress" and ws and all(abs(w - 1) < 1e-9 for w in ws):
            parts.append("stress = all-ones")
        else:
            parts.append(f"{cert['type']} = {cert['positivity'].replace('_', ' ')}")
    return ", ".join(parts)


def render_text(report: dict) -> str:
    """Key-value header followed by tab-delimited certificate tables."""
    out = [f"summary: {summary_line(report)}"]
    for key in ("source", "mode", "verdict", "bar_equivalent", "partially_bar_equivalent",
                "infinitesimally_rigid", "dim_stress_space", "dim_T", "dim_motions_modulo_T",
                "vertices", "rows"):
        out.append(f"{key}: {report[key]}")
    out.append(f"lp_tolerance: {report['solver']['lp_tolerance']!r}")
    if "timing_ms" in report:
        out.append(f"timing_ms: {report['timing_ms']!r}")
    cert = report["certificate"]
    if cert is None:
        out.append("certificate: none")
    else:
        out.append(f"certificate: {cert['type']} ({cert['positivity']})")
        label = "weight" if cert["type"] == "stress" else "load"
        out.append("\t".join(["row", "kind", "a", "b", "origin", label]))
        for r in cert["rows"]:
            out.append("\t".join([str(r["row"]), r["kind"], r["a"], r["b"], r["origin"],
                                  repr(r["weight"])]))
        if cert["type"] == "motion":
            out.append("\t".join(["vertex", "field"]))
            for v in cert["vectors"]:
                out.append("\t".join([v["vertex"]] + [repr(x) for x in v["field"]]))
    return "\n".join(out) + "\n"


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _mode(name: str) -> str:
    return {"full": FULL, "isometry": ISOMETRY}[name]


def cmd_analyze(args) -> int:
    t = model.read(args.file)
    start = time.perf_counter()
    report, c = analysis_report(t, _mode(args.mode), str(args.file))
    if args.timing:
        report["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
    sys.stdout.write(_dump(report) if args.json else render_text(report))
    if args.figure:
        from .plot import plot_tensegrity
        cert = c.certificate
        weights = cert.normalized if isinstance(cert, st.StressVector) else None
        motion = cert.field if isinstance(cert, st.MotionVector) else None
        try:
            plot_tensegrity(t, args.figure, weights, motion, summary_line(report))
        except OSError as exc:
            raise OutputError(f"cannot write {args.figure}: {exc.strerror or exc}") from None
    if c.bar_equivalent:
        return 0
    return 1 if c.partially_bar_equivalent else 2


def _family_params(args) -> dict:
    params = {}
    for key in ("n", "skip", "skip_frac", "eps_deg", "k", "rings", "m", "seed", "top",
                "straight"):
        v = getattr(args, key)
        if v is not None:
            params[key] = v
    return params


def cmd_generate(args) -> int:
    t = families.generate(families.FamilySpec(args.family, _family_params(args)))
    text = model.render(t)
    if args.output:
        _write_text(args.output, text)
    else:
        sys.stdout.write(text)
    return 0


def check_instance(t: model.Tensegrity, tamper: bool = False) -> list[str]:
    """Violations of the two exactly-one pairings for ``t`` (empty when fine)."""
    Yop, X = build_operator(t), variation_space(t)
    problems = []
    R = st.reduce(Yop, X)
    pairs = [("stiemke", st.find_semipositive_motion, st.find_strictly_positive_stress),
             ("gordan", st.find_strictly_positive_motion, st.find_semipositive_stress)]
    for name, motion_side, stress_side in pairs:
        motion, stress = motion_side(R), stress_side(R)
        has_stress = stress is not None
        if tamper:  # self-test hook: report the opposite stress answer
            has_stress = not has_stress
        if (motion is not None) == has_stress:
            problems.append(f"{name}: " + ("both sides present" if has_stress
                                             else "neither side present"))
            continue
        try:
            if motion is not None:
                st.check_motion(Yop, X, motion, strict=name == "gordan")
            else:
                st.check_stress(Yop, X, stress, strict=name == "stiemke")
        except st.CertificateError as exc:
            problems.append(f"{name}: {exc}")
    return problems


def cmd_corpus(args) -> int:
    rng = np.random.default_rng(args.seed)
    failures = []
    for i in range(args.count):
        t = families.random_tensegrity(rng)
        problems = check_instance(t, tamper=i == args.inject_violation)
        if problems:
            failures.append({"instance": i, "problems": problems, "text": model.render(t)})
    if failures and args.dump_dir:
        d = Path(args.dump_dir)
        try:
            d.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise OutputError(f"cannot create {d}: {exc.strerror or exc}") from None
        for f in failures:
            _write_text(d / f"instance_{f['instance']:05d}.tns", f["text"])
            _write_text(d / f"instance_{f['instance']:05d}.json",
                        _dump({"schema": SCHEMA, "instance": f["instance"],
                               "problems": f["problems"]}))
    report = {"schema": SCHEMA, "command": "corpus", "count": args.count, "seed": args.seed,
              "violations": len(failures),
              "failures": [{"instance": f["instance"], "problems": f["problems"]}
                           for f in failures]}
    if args.json:
        sys.stdout.write(_dump(report))
    else:
        lines = [f"instances: {args.count}", f"seed: {args.seed}",
                 f"{len(failures)} violations"]
        for f in report["failures"]:
            lines.append(f"instance\t{f['instance']}\t" + "; ".join(f["problems"]))
        sys.stdout.write("\n".join(lines) + "\n")
    return 1 if failures else 0


def cmd_svg(args) -> int:
    t = model.read(args.file)
    weights = motion = None
    if args.annotate:
        Yop, X = build_operator(t), variation_space(t, _mode(args.mode))
        if args.annotate == "stress":
            s = st.find_strictly_positive_stress(Yop, X) or st.find_semipositive_stress(Yop, X)
            if s is None:
                print("no stress to annotate", file=sys.stderr)
            else:
                weights = s.normalized
        else:
            m = st.find_strictly_positive_motion(Yop, X) or st.find_semipositive_motion(Yop, X)
            if m is None:
                print("no motion to annotate", file=sys.stderr)
            else:
                motion = m.field
    _write_text(args.output, render_svg(t, weights, motion, title=str(args.file)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tenseg", description="Tensegrity rigidity analysis.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="classify a tensegrity file")
    a.add_argument("file", type=Path)
    a.add_argument("--mode", choices=["full", "isometry"], default="full")
    a.add_argument("--json", action="store_true", help="machine-readable report")
    a.add_argument("--timing", action="store_true", help="include wall time in the report")
    a.add_argument("--figure", type=Path, help="also write a matplotlib figure here")
    a.set_defaults(run=cmd_analyze)

    g = sub.add_parser("generate", help="write a family member in the text format")
    g.add_argument("family", choices=sorted(families.FAMILIES))
    g.add_argument("--n", type=int)
    g.add_argument("--skip", type=int)
    g.add_argument("--skip-frac", type=float)
    g.add_argument("--eps-deg", type=float)
    g.add_argument("--k", type=int)
    g.add_argument("--rings", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--top", type=float)
    g.add_argument("--straight", type=float)
    g.add_argument("-o", "--output", type=Path)
    g.set_defaults(run=cmd_generate)

    c = sub.add_parser("corpus", help="check both exactly-one pairings on random instances")
    c.add_argument("--count", type=int, default=200)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--dump-dir", type=Path, help="write failing instances here")
    c.add_argument("--json", action="store_true")
    c.add_argument("--inject-violation", type=int, default=-1, help=argparse.SUPPRESS)
    c.set_defaults(run=cmd_corpus)

    s = sub.add_parser("svg", help="draw a tensegrity as SVG")
    s.add_argument("file", type=Path)
    s.add_argument("-o", "--output", type=Path, required=True)
    s.add_argument("--annotate", choices=["stress", "motion"])
    s.add_argument("--mode", choices=["full", "isometry"], default="full")
    s.set_defaults(run=cmd_svg)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "corpus" and args.count < 0:
        print("tenseg: --count must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.run(args)
    except (model.ModelError, families.FamilyError) as exc:
        print(f"tenseg: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OutputError as exc:
        print(f"tenseg: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    except OSError as exc:  # reading the input file
        print(f"tenseg: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (linalg.LinalgError, st.AlternativeConflict) as exc:
        print(f"tenseg: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
