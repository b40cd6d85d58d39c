"""Command-line front end: classify, image, cyclicity, verify, batch."""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from .adelic.classify import ClassificationInput, adelic_image, is_relative_serre
from .cyclicity import correction_factor, cyclicity_constant
from .ellq.curves import CurveModel
from .errors import InconsistencyError, ParseError, RelSerreError
from .modmat import format_generators
from .paperdata.labels import OBSTRUCTIONS, load_appendix

EXIT_OK, EXIT_PARSE, EXIT_INCONSISTENT, EXIT_AMBIGUOUS, EXIT_RESOURCE = 0, 2, 3, 4, 5

JSON_KEYS = (
    "curve", "mod2_class", "two_adic_label", "is_relative_serre", "certification", "adelic_index",
    "image_conductor", "entanglements", "image_generators", "image_order", "correction_factor",
    "cyclicity_constant",
)


def frac_text(q: Fraction | None) -> str | None:
    return None if q is None else f"{q.numerator}/{q.denominator}"


def parse_curve(text: str, name: str | None = None) -> CurveModel:
    """Coefficients 'a1,a2,a3,a4,a6' (or 'A,B'), or the name of a bundled appendix curve."""
    text = text.strip()
    if "," not in text:
        for row in load_appendix():
            if row.name == text:
                return CurveModel(*row.coefficients, name=name or row.name)
        raise ParseError(f"{text!r} is neither a coefficient list nor a bundled curve name")
    return CurveModel.parse(text, name=name)


def result_record(res, image=None, L: int | None = None) -> dict:
    rec = dict.fromkeys(JSON_KEYS)
    rec["curve"] = str(res.curve)
    rec["mod2_class"] = res.obstruction
    rec["two_adic_label"] = res.label
    rec["is_relative_serre"] = res.is_relative_serre
    cert = res.certification()
    if res.heuristic_beyond is not None:
        cert["heuristic_beyond"] = res.heuristic_beyond
    if res.uncertified:
        cert["uncertified"] = list(res.uncertified)
    rec["certification"] = cert
    if res.is_relative_serre:
        rec["adelic_index"] = res.adelic_index
        rec["image_conductor"] = res.m_E
        rec["entanglements"] = res.entanglement.to_list()
        if res.obstruction != "2Cs":
            rec["correction_factor"] = frac_text(correction_factor(res))
        if L is not None:
            rec["cyclicity_constant"] = cyclicity_constant(res, L).to_dict()
    if image is not None:
        rec["image_generators"] = [g.to_text() for g in image.generators]
        rec["image_order"] = image.order
    return rec


def dump_json(rec) -> str:
    return json.dumps(rec, indent=2, ensure_ascii=False)


def _input(args) -> ClassificationInput:
    curve = parse_curve(args.curve, getattr(args, "name", None))
    mode = "attested" if args.attested else "certified"
    return ClassificationInput(curve, args.label, mode, args.prime_bound)


def _human(rec: dict, extra: list = ()) -> str:
    lines = [f"curve: {rec['curve']}", f"mod-2 image: {rec['mod2_class']}",
             f"2-adic label: {rec['two_adic_label'] or '-'}"]
    g = rec["mod2_class"]
    lines.append(f"{g}-Serre: {'true' if rec['is_relative_serre'] else 'false'}" if g != "none"
                 else "relative Serre: false (mod-2 image is GL2(Z/2))")
    cert = rec["certification"]
    if cert["mode"] == "certified":
        s = f"certification: odd ell <= {cert.get('heuristic_beyond')} by Frobenius sieve with p <= {cert['bound']}"
        if cert.get("uncertified"):
            s += f"; not certified for ell in {cert['uncertified']}"
        lines.append(s)
    else:
        lines.append("certification: odd-ell surjectivity attested by the caller")
    if rec["adelic_index"] is not None:
        lines.append(f"adelic index: {rec['adelic_index']}")
        lines.append(f"image conductor: m_E = {rec['image_conductor']}")
        for e in rec["entanglements"]:
            if e["kind"] == "quadratic":
                lines.append(f"  quadratic entanglement N={e['N']} N'={e['N_prime']} k={e['k']}")
            else:
                lines.append(f"  cubic entanglement f={e['f']}")
    lines.extend(extra)
    return "\n".join(lines)


# -- commands -------------------------------------------------------------------

def cmd_classify(args) -> int:
    inp = _input(args)
    res = is_relative_serre(inp)
    if args.json:
        image = adelic_image(inp, res) if res.is_relative_serre else None
        print(dump_json(result_record(res, image, args.L if res.is_relative_serre else None)))
    else:
        print(_human(result_record(res)))
    return EXIT_OK


def cmd_image(args) -> int:
    inp = _input(args)
    res = is_relative_serre(inp)
    image = adelic_image(inp, res)
    if args.json:
        rec = result_record(res, image)
        rec = {k: rec[k] for k in ("curve", "two_adic_label", "image_conductor", "image_order", "image_generators")}
        rec["index"] = image.index
        rec["predicate"] = image.predicate()
        print(dump_json(rec))
        return EXIT_OK
    print(f"curve: {res.curve}")
    print(f"modulus: {image.modulus}")
    print(f"order: {image.order}")
    print(f"index in GL2(Z/{image.modulus}): {image.index}")
    for c in image.predicate():
        print(f"condition: {c['two_adic']} = {c['dirichlet']}(det) (order {c['order']}, modulus {c['dirichlet_modulus']})")
    print(f"generators: {format_generators(image.generators)}")
    return EXIT_OK


def cmd_cyclicity(args) -> int:
    inp = _input(args)
    res = is_relative_serre(inp)
    if not res.is_relative_serre:
        raise InconsistencyError(f"{res.curve} is not a relative Serre curve: {'; '.join(res.reasons)}")
    cc = cyclicity_constant(res, args.L)
    corr = None if res.obstruction == "2Cs" else correction_factor(res)
    if args.json:
        print(dump_json({"curve": str(res.curve), "mod2_class": res.obstruction,
                         "correction_factor": frac_text(corr), "cyclicity_constant": cc.to_dict()}))
        return EXIT_OK
    print(f"curve: {res.curve}")
    print(f"correction factor: {frac_text(corr) if corr is not None else 'undefined (C_E = 0)'}")
    print(f"prefactor: {frac_text(cc.prefactor)}")
    print(f"Euler product (odd ell <= {cc.L}): {cc.euler_product:.15f}")
    print(f"C_E = {cc.value:.12f} (|log tail| <= {cc.tail_bound:.3e})")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .paperdata.verify import commutator_indices, run_suites

    reports = run_suites([args.suite])
    for rep in reports:
        for line in rep.lines():
            print(line)
        if rep.suite == "comm":
            idx = commutator_indices()
            print(f"commutator indices (2Cs, 2B, 2Cn) = ({idx['2Cs']},{idx['2B']},{idx['2Cn']})")
    bad = [r.suite for r in reports if not r.ok]
    if bad:
        print(f"verification failed: {', '.join(bad)}", file=sys.stderr)
        return EXIT_INCONSISTENT
    print("all checks passed")
    return EXIT_OK


BATCH_FIELDS = ("name", "mod2_class", "two_adic_label", "is_relative_serre", "image_conductor", "correction_factor")


def _parse_row(row: list) -> tuple:
    if len(row) not in (6, 7):
        raise ParseError(f"expected 6 or 7 fields, got {len(row)}")
    name = row[0].strip()
    try:
        coeffs = [int(c) for c in row[1:6]]
    except ValueError as exc:
        raise ParseError(f"non-integer coefficient: {exc}") from None
    label = row[6].strip() if len(row) == 7 and row[6].strip() else None
    return name, coeffs, label


def _classify_row(job: tuple):
    name, coeffs, label, mode, prime_bound = job
    try:
        curve = CurveModel(*coeffs, name=name or None)
        res = is_relative_serre(ClassificationInput(curve, label, mode, prime_bound))
        corr = None
        if res.is_relative_serre and res.obstruction != "2Cs":
            corr = frac_text(correction_factor(res))
        return {"name": name, "mod2_class": res.obstruction, "two_adic_label": res.label,
                "is_relative_serre": res.is_relative_serre,
                "image_conductor": res.m_E if res.is_relative_serre else None,
                "correction_factor": corr}
    except (RelSerreError, ValueError) as exc:
        return f"{type(exc).__name__}: {exc}"


def batch_rows(text: str, prime_bound: int = 1000, mode: str = "certified", jobs: int = 1) -> tuple:
    """Classify each CSV row; returns (records, errors) with errors as (line, message), in input order."""
    errors, work = [], []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), 1):
        if not row or all(not c.strip() for c in row):
            continue
        if row[0].strip().lower() == "name":
            continue  # header
        try:
            name, coeffs, label = _parse_row(row)
        except ParseError as exc:
            errors.append((lineno, f"ParseError: {exc}"))
            continue
        work.append((lineno, (name, coeffs, label, mode, prime_bound)))
    jobs_in = [w for _, w in work]
    if jobs > 1 and len(jobs_in) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outs = list(pool.map(_classify_row, jobs_in))
    else:
        outs = [_classify_row(j) for j in jobs_in]
    records = []
    for (lineno, _), out in zip(work, outs):
        if isinstance(out, str):
            errors.append((lineno, out))
        else:
            records.append(out)
    errors.sort()
    return records, errors


def batch_summary(records: list) -> dict:
    counts = Counter(r["mod2_class"] for r in records if r["is_relative_serre"])
    return {g: counts.get(g, 0) for g in OBSTRUCTIONS}


def cmd_batch(args) -> int:
    try:
        with open(args.input, newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {args.input}: {exc}") from exc
    mode = "attested" if args.attested else "certified"
    records, errors = batch_rows(text, args.prime_bound, mode, args.jobs)
    summary = batch_summary(records)
    if args.json:
        out = dump_json({"rows": records, "errors": [{"line": n, "message": m} for n, m in errors],
                         "summary": summary}) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(BATCH_FIELDS)
        for r in records:
            w.writerow(["" if r[k] is None else str(r[k]).lower() if isinstance(r[k], bool) else r[k]
                        for k in BATCH_FIELDS])
        for n, m in errors:
            w.writerow(["error", f"line {n}", m])
        w.writerow(["summary"] + [f"{g}={summary[g]}" for g in OBSTRUCTIONS])
        out = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    for n, m in errors:
        print(f"line {n}: {m}", file=sys.stderr)
    split = "/".join(str(summary[g]) for g in OBSTRUCTIONS)
    print(f"relative Serre curves (2Cs/2B/2Cn): {split}; {len(errors)} error(s)", file=sys.stderr)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="relserre", description=__doc__)
    ap.add_argument("--data", metavar="DIR", help="directory holding groups.dat and appendix.csv")
    sub = ap.add_subparsers(dest="command", required=True)

    def curve_opts(p, euler=False):
        p.add_argument("--curve", required=True, help="a1,a2,a3,a4,a6 or A,B or a bundled curve name")
        p.add_argument("--name", help="display name for the curve")
        p.add_argument("--label", help="2-adic image label A.B.C.D (inferred when omitted)")
        p.add_argument("--prime-bound", type=int, default=1000, metavar="N")
        p.add_argument("--attested", action="store_true", help="assume odd-ell surjectivity instead of sieving")
        p.add_argument("--json", action="store_true")
        if euler:
            p.add_argument("-L", type=int, default=10**6, metavar="N", help="Euler product bound")

    p = sub.add_parser("classify", help="decide the relative Serre property")
    curve_opts(p, euler=True)
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("image", help="explicit generators of the adelic image mod m_E")
    curve_opts(p)
    p.set_defaults(func=cmd_image)
    p = sub.add_parser("cyclicity", help="correction factor and cyclicity constant")
    curve_opts(p, euler=True)
    p.set_defaults(func=cmd_cyclicity)
    p = sub.add_parser("verify", help="recompute the group-theoretic facts from scratch")
    p.add_argument("--suite", choices=["msets", "quo", "comm", "sg", "2bmod4", "all"], default="all")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("batch", help="classify a CSV of curves (name,a1,a2,a3,a4,a6[,label])")
    p.add_argument("input")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.add_argument("--prime-bound", type=int, default=1000, metavar="N")
    p.add_argument("--attested", action="store_true")
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes (output order is unchanged)")
    p.set_defaults(func=cmd_batch)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    saved = os.environ.get("RELSERRE_DATA")
    if args.data:
        os.environ["RELSERRE_DATA"] = args.data
    try:
        return args.func(args)
    except RelSerreError as exc:
        kind = {EXIT_PARSE: "parse error", EXIT_AMBIGUOUS: "ambiguous", EXIT_RESOURCE: "resource cap"}
        code = exc.exit_code if exc.exit_code in (EXIT_PARSE, EXIT_AMBIGUOUS, EXIT_RESOURCE) else EXIT_INCONSISTENT
        print(f"{kind.get(code, 'inconsistent')}: {exc}", file=sys.stderr)
        return code
    finally:
        if args.data:
            if saved is None:
                os.environ.pop("RELSERRE_DATA", None)
            else:
                os.environ["RELSERRE_DATA"] = saved

if __name__ == "__main__":
    sys.exit(main())
