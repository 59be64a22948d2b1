"""tessgrowth command line: analyze, classify, simulate, table, verify, export."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from .classification import classify, match_pattern
from .cyclic import HYPERBOLIC, as_sequence, parse_sequence

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CLOSED_TOL = 1e-6
SIM_TOL = 0.03
SIM_CORONAS = 12


class UsageError(Exception):
    pass


def _seq(text):
    try:
        return as_sequence(parse_sequence(text))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"cannot parse sequence {text!r}: {exc}") from None


def _root(text):
    if text in (None, "vertex", "face"):
        return text
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"--root must be a valence, 'vertex' or 'face', not {text!r}") from None


def _anchor(s, variant=None):
    from .transition import is_4468

    if is_4468(s):
        return f"[4,4,6,8] {variant or 'T1/T2'}"
    hit = match_pattern(s)
    return hit[0].anchor if hit else None


def _emit(text, out=None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# analyze -------------------------------------------------------------------

@dataclass
class AnalysisReport:
    sequence: object
    classification: object
    variant: str | None = None
    matrix: object = None
    char_poly: object = None
    growth: dict = field(default_factory=dict)
    counts: list | None = None
    simulated: list | None = None
    notes: list = field(default_factory=list)
    inconsistent: list = field(default_factory=list)
    anchor: str | None = None

    @property
    def status(self):
        return "INCONSISTENT" if self.inconsistent else "OK"

    def to_dict(self, refs=False):
        d = {
            "sequence": str(self.sequence),
            "classification": self.classification.to_dict(),
            "variant": self.variant,
            "matrix": self.matrix.to_dict() if self.matrix is not None else None,
            "char_poly": str(self.char_poly) if self.char_poly is not None else None,
            "growth": {k: g.to_dict() for k, g in self.growth.items()},
            "corona_counts": [str(x) for x in self.counts] if self.counts else None,
            "simulated_counts": self.simulated,
            "status": self.status,
            "inconsistent": self.inconsistent,
            "notes": self.notes,
        }
        if refs:
            d["anchor"] = self.anchor
        return d

    def to_text(self, refs=False):
        c = self.classification
        ref = f"  ({self.anchor})" if refs and self.anchor else ""
        lines = [f"sequence        {self.sequence}",
                 f"growth class    {c.growth_class}",
                 f"morphism        {c.morphism}",
                 f"concentricity   {c.concentricity}"]
        if c.matched_family:
            lines.append(f"family          {c.matched_family} {c.binding}{ref}")
        if c.recommended_root:
            lines.append(f"recommended     root valence {' or '.join(map(str, c.recommended_root))}")
        if self.variant:
            lines.append(f"variant         {self.variant}")
        if self.char_poly is not None:
            lines.append(f"char poly       {self.char_poly}")
        for src, g in self.growth.items():
            lines.append(f"growth {src:<17} {g.value:.10f}  [{float(g.lo):.12f}, {float(g.hi):.12f}]"
                         f"  trunc {g.truncated(4)}{ref}")
        if self.counts:
            lines.append("|F_n| matrix    " + " ".join(str(x) for x in self.counts))
        if self.simulated:
            lines.append("|F_n| simulated " + " ".join(str(x) for x in self.simulated))
        for n in self.notes:
            lines.append(f"note: {n}")
        for n in self.inconsistent:
            lines.append(f"INCONSISTENT: {n}")
        lines.append(f"status          {self.status}")
        return "\n".join(lines) + "\n"


def analyze(s, variant=None, n=8, root=None, tolerance=CLOSED_TOL, simulate=True):
    from .bilinski import SimulationError, count_coronas, estimate_growth
    from .formulas import closed_form_gamma
    from .spectral import SPECTRAL, SpectralError, char_poly, corona_series, growth_rate, max_modulus_root
    from .transition import TransitionError, first_distribution, is_4468, matrix_for, printed_chi

    s = as_sequence(s)
    c = classify(s)
    rep = AnalysisReport(s, c, variant=variant, anchor=_anchor(s, variant))
    if c.growth_class != HYPERBOLIC:
        rep.notes.append(f"{c.growth_class}: no exponential growth, nothing to compute")
        return rep
    if is_4468(s) and variant not in ("T1", "T2"):
        rep.notes.append("[4,4,6,8] is polymorphic; pass --variant T1 or T2")
        return rep
    if c.morphism == "Polymorphic" and not is_4468(s):
        rep.notes.append("polymorphic: no single growth rate")
        return rep
    if c.morphism == "Unknown":
        rep.notes.append("not classified (" + "; ".join(c.notes) + "): partial result only")
        return rep

    try:
        rep.matrix = matrix_for(s, variant)
        rep.char_poly = char_poly(rep.matrix)
    except TransitionError as exc:
        rep.notes.append(str(exc))
    try:
        primary = growth_rate(s, variant)
        rep.growth[primary.source] = primary
    except SpectralError as exc:
        rep.notes.append(str(exc))
        return rep
    if rep.char_poly is not None and printed_chi(s) is not None:
        g = max_modulus_root(rep.char_poly, note="printed matrix")
        rep.growth["Spectral(matrix)"] = g
        rep.notes.append("the printed matrix and the printed characteristic polynomial disagree; "
                         "the polynomial is used")
    cf = closed_form_gamma(s) if not is_4468(s) else None
    if cf is not None:
        rep.growth[cf.source] = cf
        if abs(cf.value - primary.value) > tolerance:
            rep.inconsistent.append(f"closed form {cf.value:.10f} vs {primary.source} {primary.value:.10f}")

    cat_root = None
    if rep.matrix is not None:
        try:
            v1, r1 = first_distribution(s, variant=variant, matrix=rep.matrix, with_root=True)
            cat_root = r1["vertex"]
            rep.counts = [int(x) if x.denominator == 1 else x for x in corona_series(rep.matrix, v1, n).counts]
        except (TransitionError, SpectralError) as exc:
            rep.notes.append(str(exc))

    if simulate:
        r = root if root is not None else cat_root
        nn = max(n, SIM_CORONAS)
        try:
            if is_4468(s):
                rep.notes.append("simulator skipped for [4,4,6,8]; use simulate --policy")
                prof = None
            else:
                prof = count_coronas(s, r, nn)
        except SimulationError as exc:
            rep.notes.append(f"simulator: {exc}")
            prof = None
        if prof is not None:
            rep.simulated = prof.faces[:n]
            est = estimate_growth(prof)
            rep.growth[est.source] = est
            if abs(est.value - primary.value) > SIM_TOL * primary.value:
                rep.inconsistent.append(f"simulator estimate {est.value:.6f} vs {primary.source} "
                                        f"{primary.value:.6f} at {nn} coronas")
            if rep.counts and r == cat_root and rep.counts != rep.simulated[:len(rep.counts)]:
                rep.notes.append("simulated corona counts differ from the matrix series")
    return rep


def cmd_analyze(args):
    s = _seq(args.sequence)
    rep = analyze(s, args.variant, args.coronas, _root(args.root), args.tolerance or CLOSED_TOL,
                  simulate=not args.no_simulate)
    if args.json:
        _emit(json.dumps(rep.to_dict(args.paper_refs), indent=1) + "\n", args.out)
    else:
        _emit(rep.to_text(args.paper_refs), args.out)
    return EXIT_FAIL if rep.inconsistent else EXIT_OK


def cmd_classify(args):
    s = _seq(args.sequence)
    c = classify(s)
    if args.json:
        d = c.to_dict()
        if args.paper_refs:
            d["anchor"] = _anchor(s)
        _emit(json.dumps(d, indent=1) + "\n", args.out)
    else:
        d = c.to_dict()
        lines = [f"{k:<16}{v}" for k, v in d.items() if k != "notes"]
        lines += [f"note: {n}" for n in d["notes"]]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# simulate ------------------------------------------------------------------

def _default_root(s, policy=None):
    # the root the catalog's first-corona vector was recorded for, else the largest valence
    from .transition import TransitionError, first_distribution

    try:
        _, root = first_distribution(s, variant=policy if policy in ("T1", "T2") else None, with_root=True)
        return root["vertex"]
    except (TransitionError, LookupError):
        return "vertex"


def cmd_simulate(args):
    from .bilinski import (PolicyRequired, SimulationError, check_concentric, count_coronas, estimate_growth,
                           export_patch, grow)

    s = _seq(args.sequence)
    root = _root(args.root) if args.root is not None else _default_root(s, args.policy)
    out = {"sequence": str(s), "root": root, "policy": args.policy}
    warnings = []
    g = None
    error = None
    try:
        if args.compressed and not args.patch:
            prof = count_coronas(s, root, args.coronas)
        else:
            g, prof = grow(s, root, args.coronas, policy=args.policy, keep_faces=bool(args.patch),
                           counts_only=not args.patch)
            for n in range(1, g.complete_coronas + 1):
                if not check_concentric(g, n):
                    warnings.append(f"corona {n}: U_{n} does not induce a cycle (non-concentric)")
                    break
    except PolicyRequired as exc:
        raise UsageError(str(exc)) from None
    except SimulationError as exc:
        error = str(exc)
        done = (getattr(exc, "corona", None) or 1) - 1
        if classify(s).concentricity == "NonConcentric" and done >= 1:
            # a pendant vertex or collapsed ring in U_done blocks the next corona
            warnings.append(f"non-concentric from this root: corona {done + 1} cannot be placed "
                            f"around U_{done} (pendant vertex or collapse); {error}")
            g, prof = grow(s, root, done, policy=args.policy, keep_faces=bool(args.patch))
            error = None
    if error is not None:
        out["error"] = error
        sys.stderr.write(f"simulate: {error}\n")
        if args.json:
            _emit(json.dumps(out, indent=1) + "\n", args.out)
        return EXIT_FAIL
    out.update(prof.to_dict())
    out["warnings"] = warnings
    if prof.n >= 4:
        out["estimate"] = estimate_growth(prof).to_dict()
    if args.patch and g is not None:
        with open(args.patch, "wb") as fh:
            fh.write(export_patch(g, args.format))
    if args.json:
        _emit(json.dumps(out, indent=1, default=str) + "\n", args.out)
    else:
        lines = [f"|F_n|  {' '.join(map(str, prof.faces))}",
                 f"|U_n|  {' '.join(map(str, prof.vertices))}",
                 f"tau    {' '.join(map(str, prof.tau))}"]
        if prof.n >= 2:
            lines.append(f"ratio  {prof.tau_ratios()[-1]:.6f}")
        lines += [f"warning: {w}" for w in warnings]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# table ---------------------------------------------------------------------

TABLES = ("least-growth", "pqrst-minimal", "pqrstu-minimal", "4468-coronas")


def cmd_table(args):
    from .formulas import (corona_table_4468, least_growth_table, pqrst_table, pqrstu_table,
                           rows_to_csv, rows_to_json)

    name = args.name
    if name == "4468-coronas":
        rows = corona_table_4468(args.max_n or 9)
        if args.json:
            text = json.dumps([{"n": n, "T1": a, "T2": b} for n, a, b in rows], indent=1) + "\n"
        else:
            text = "n,T1,T2\n" + "".join(f"{n},{a},{b}\n" for n, a, b in rows)
        _emit(text, args.out)
        return EXIT_OK
    rows = {"least-growth": least_growth_table, "pqrst-minimal": pqrst_table,
            "pqrstu-minimal": pqrstu_table}[name](workers=args.workers)
    places = 8 if name == "pqrstu-minimal" else 4
    _emit(rows_to_json(rows, places) if args.json else rows_to_csv(rows, places), args.out)
    return EXIT_OK


# verify --------------------------------------------------------------------

def verify_formulas(report):
    from .formulas import consistency_families, verify_consistency

    ok = True
    for fid in consistency_families():
        r = verify_consistency(fid)
        ok &= r.ok
        report.append((f"formulas {fid}", r.ok, f"{r.checked} tuples, worst {r.worst:.1e}"))
    return ok


def verify_simulator(report, n=8):
    from .bilinski import oracle_equivalence
    from .classification import families, minimal_representatives

    ok = True
    for fam in families():
        if fam.morphism != "Monomorphic" or fam.concentricity != "UniformlyConcentric" or fam.matrix is None:
            continue
        for s in minimal_representatives(fam.id)[:1]:
            try:
                sim, series = oracle_equivalence(s, n)
                good = sim == series
                detail = f"{s}" if good else (f"{s} simulator {' '.join(map(str, sim))} "
                                                  f"matrix {' '.join(map(str, series))}")
            except Exception as exc:
                good, detail = False, f"{s}: {exc}"
            ok &= good
            report.append((f"simulator {fam.id}", good, detail))
    for v in ("T1", "T2"):
        sim, series = oracle_equivalence([4, 4, 6, 8], n, v)
        report.append((f"simulator [4,4,6,8] {v}", sim == series, ""))
        ok &= sim == series
    return ok


def verify_monotonicity(report):
    from .formulas import monotonicity_violations

    pairs, bad = monotonicity_violations()
    report.append(("monotonicity", not bad, f"{pairs} comparable pairs, {len(bad)} violations"))
    return not bad


def cmd_verify(args):
    report = []
    scope = args.scope
    ok = True
    if scope in ("formulas", "all"):
        ok &= verify_formulas(report)
    if scope in ("simulator", "all"):
        ok &= verify_simulator(report, args.max_n or 8)
    if scope in ("monotonicity", "all"):
        ok &= verify_monotonicity(report)
    if args.json:
        _emit(json.dumps([{"check": c, "pass": p, "detail": d} for c, p, d in report], indent=1) + "\n",
              args.out)
    else:
        _emit("".join(f"{'PASS' if p else 'FAIL'}  {c}  {d}\n" for c, p, d in report), args.out)
    return EXIT_OK if ok else EXIT_FAIL


# export --------------------------------------------------------------------

def cmd_export(args):
    from .bilinski import export_patch, grow
    from .spectral import char_poly
    from .transition import TransitionError, matrix_for

    s = _seq(args.sequence)
    if args.kind == "matrix":
        try:
            m = matrix_for(s, args.variant)
        except TransitionError as exc:
            raise UsageError(str(exc)) from None
        if args.format == "grid":
            text = m.to_grid() + "\n"
        else:
            d = m.to_dict()
            d["char_poly"] = str(char_poly(m))
            text = json.dumps(d, indent=1) + "\n"
        _emit(text, args.out)
    elif args.kind == "report":
        rep = analyze(s, args.variant, args.coronas, _root(args.root))
        _emit(json.dumps(rep.to_dict(args.paper_refs), indent=1) + "\n", args.out)
    else:
        g, _ = grow(s, _root(args.root), args.coronas, policy=args.policy)
        fmt = args.format if args.format in ("json", "dot", "edgelist") else "json"
        data = export_patch(g, fmt)
        if args.out:
            with open(args.out, "wb") as fh:
                fh.write(data)
        else:
            sys.stdout.write(data.decode())
    return EXIT_OK


# main ----------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="tessgrowth",
                                     description="Growth rates of face-homogeneous tessellations.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, seq=True):
        if seq:
            p.add_argument("sequence", help="valence sequence, e.g. [4,6,14]")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--out", metavar="FILE", help="write output to FILE")
        p.add_argument("--paper-refs", action="store_true", help="annotate numbers with catalog anchors")

    p = sub.add_parser("analyze", help="classification, matrix, growth rates, corona counts")
    common(p)
    p.add_argument("--variant", choices=("T1", "T2"), help="tessellation of [4,4,6,8]")
    p.add_argument("--root", help="root valence, 'vertex' or 'face'")
    p.add_argument("-n", "--coronas", type=int, default=8, help="corona count (default: 8)")
    p.add_argument("--tolerance", type=float, help=f"closed form vs spectral (default: {CLOSED_TOL})")
    p.add_argument("--no-simulate", action="store_true", help="skip the simulator estimate")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", help="growth class, morphism, concentricity")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("simulate", help="grow a patch corona by corona")
    common(p)
    p.add_argument("--root", help="root valence, 'vertex' or 'face' (default: the catalog root, else "
                                  "the largest valence)")
    p.add_argument("--policy", choices=("first", "T1", "T2"), help="accretion policy")
    p.add_argument("-n", "--coronas", type=int, default=6, help="corona count (default: 6)")
    p.add_argument("--compressed", action="store_true", help="count without building the patch")
    p.add_argument("--patch", metavar="FILE", help="write the patch to FILE")
    p.add_argument("--format", choices=("json", "dot", "edgelist"), default="json", help="patch format")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("table", help="reproduce a table as CSV or JSON")
    common(p, seq=False)
    p.add_argument("name", choices=TABLES)
    p.add_argument("--max-n", type=int, help="rows of 4468-coronas (default: 9)")
    p.add_argument("--workers", type=int, default=min(8, os.cpu_count() or 1),
                   help="worker processes (default: min(8, cpus))")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="consistency sweeps; exit 1 on failure")
    common(p, seq=False)
    p.add_argument("scope", choices=("formulas", "simulator", "monotonicity", "all"))
    p.add_argument("--max-n", type=int, help="coronas compared by the simulator check (default: 8)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="matrix, analysis report or patch")
    common(p, seq=False)
    p.add_argument("kind", choices=("matrix", "report", "patch"))
    p.add_argument("sequence")
    p.add_argument("--variant", choices=("T1", "T2"))
    p.add_argument("--root", help="root valence, 'vertex' or 'face'")
    p.add_argument("--policy", choices=("first", "T1", "T2"))
    p.add_argument("-n", "--coronas", type=int, default=2)
    p.add_argument("--format", choices=("json", "grid", "dot", "edgelist"), default="json")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"tessgrowth: {exc}\n")
        return EXIT_USAGE
    except ValueError as exc:
        sys.stderr.write(f"tessgrowth: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
