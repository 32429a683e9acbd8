"""``qfp`` command line: heights, reducedness, Witt evaluation, verification suite."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from typing import Dict, List, Optional

from . import gallery
from .dsl import ParseError, RingDecl, WittTrace, eval_witt_expr, parse_ring_file
from .graded import MAX_DEGREE, GradedSolverError
from .height import MAX_LEVEL, height_search
from .poly import PolyError
from .qmodel import ENUM_CAP, QModelError, compare_q_models
from .rings import (DEFAULT_BASIS_CAP, FiniteAlgebra, RingElement, RingError, galois_field,
                    is_prime, is_reduced)
from .suite import CASES, DEFAULT_SEED, format_ledger, run_suite
from .witt import LENGTH_CAPS, WittError, WittRing

SCHEMA_VERSION = "1.0"

DEFAULT_CAPS = {"enum": ENUM_CAP, "basis": DEFAULT_BASIS_CAP, "degree": MAX_DEGREE, "level": MAX_LEVEL}
HARD_CAPS = {"enum": 1 << 20, "basis": 16, "degree": MAX_DEGREE, "level": MAX_LEVEL}


class CommandError(Exception):
    """Operational failure: bad input, unreadable file, cap violation."""


def parse_caps(text: Optional[str]) -> Dict[str, int]:
    caps = dict(DEFAULT_CAPS)
    if not text:
        return caps
    for item in text.split(","):
        key, sep, val = item.partition("=")
        key = key.strip()
        if not sep or key not in caps:
            raise CommandError(f"bad --caps entry {item!r}; keys: {', '.join(sorted(caps))}")
        try:
            v = int(val)
        except ValueError:
            raise CommandError(f"cap {key} must be an integer") from None
        if v < 1 or v > HARD_CAPS[key]:
            raise CommandError(f"cap {key} must lie in [1, {HARD_CAPS[key]}]")
        caps[key] = v
    return caps


def load_decl(source: str, name: Optional[str] = None) -> RingDecl:
    """``--ring`` accepts a .qfp path, inline declaration text, or ``gallery:KEY``."""
    if source.startswith("gallery:"):
        key = source.split(":", 1)[1]
        try:
            return gallery.get(key).decl
        except KeyError as exc:
            raise CommandError(str(exc.args[0])) from None
    if source.lstrip().startswith("ring "):
        text = source
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise CommandError(f"cannot read ring file {source!r}: {exc.strerror}") from None
    decls = parse_ring_file(text)
    if not decls:
        raise CommandError("no ring declaration found")
    if name is None:
        if len(decls) > 1:
            raise CommandError("file declares several rings; pick one with --ring-name")
        return decls[0]
    for d in decls:
        if d.name == name:
            return d
    raise CommandError(f"no ring named {name!r}")


def _build(decl: RingDecl, caps):
    return decl.build(cap=caps["basis"]) if decl.mode == "finite" else decl.build()


def _ring_echo(decl: RingDecl) -> dict:
    return {"name": decl.name, "decl": decl.to_text(), "mode": decl.mode}


# --- commands -----------------------------------------------------------------

def cmd_height(args, caps):
    decl = load_decl(args.ring, args.ring_name)
    if args.max_n > caps["level"]:
        raise CommandError(f"--max-n exceeds cap {caps['level']}")
    if args.max_degree > caps["degree"]:
        raise CommandError(f"--max-degree exceeds cap {caps['degree']}")
    R = _build(decl, caps)
    rep = height_search(R, args.max_n, args.max_degree, name=decl.name, cap=caps["enum"])
    certs = {str(lv.n): lv.certificate for lv in rep.levels if lv.certificate is not None}
    if rep.witness is not None:
        certs["nilpotent"] = rep.witness
    params = {"max_n": args.max_n, "max_degree": args.max_degree}
    lines = [rep.summary()]
    for lv in rep.levels:
        extra = f" (D = {lv.degree})" if lv.degree is not None else ""
        if lv.verified is not None:
            extra += " certificate verified" if lv.verified else " certificate NOT verified"
        lines.append(f"  n = {lv.n}: {lv.verdict}{extra}")
    if rep.fedder:
        lines.append(f"  Fedder: {rep.fedder}")
    return _ring_echo(decl), params, rep.to_dict(certificates=False), certs, None, "\n".join(lines)


def _nilpotency_exponent(w: RingElement, limit: int = 64) -> Optional[int]:
    R = w.ring
    v = w.value
    for k in range(1, limit + 1):
        v = R.frobenius(v)
        if R.is_zero(v):
            return k
    return None


def cmd_reduced(args, caps):
    decl = load_decl(args.ring, args.ring_name)
    R = _build(decl, caps)
    res = is_reduced(R)
    result = {"reduced": res.reduced}
    certs = {}
    if res.reduced:
        text = f"{decl.name}: reduced"
    else:
        k = _nilpotency_exponent(res.witness)
        result["nilpotent_witness"] = str(res.witness)
        certs = {"nilpotent": str(res.witness), "frobenius_iterations_to_zero": k}
        text = f"{decl.name}: not reduced; nilpotent {res.witness} (r^(p^{k}) = 0)"
    return _ring_echo(decl), {}, result, certs, None, text


def cmd_witt_eval(args, caps):
    if args.ring:
        decl = load_decl(args.ring, args.ring_name)
        if decl.mode != "finite":
            raise CommandError("Witt evaluation needs a finite coefficient ring")
        R = _build(decl, caps)
        ring_echo = _ring_echo(decl)
        poly_ring = decl.poly_ring()
    else:
        if args.p is None or not is_prime(args.p):
            raise CommandError("--p must be a prime (or give --ring)")
        R = galois_field(args.p)
        ring_echo = {"name": f"GF({args.p})", "decl": f"ring F = GF({args.p})[] finite", "mode": "finite"}
        poly_ring = None
    if args.p is not None and args.p != R.p:
        raise CommandError(f"--p {args.p} does not match the ring characteristic {R.p}")
    cap = LENGTH_CAPS.get(R.p, 2)
    if args.n < 1 or args.n > cap:
        raise CommandError(f"--n must lie in [1, {cap}] for p = {R.p}")
    W = WittRing.of(R, args.n)
    trace = WittTrace()
    value, trace = eval_witt_expr(args.expr, W, poly_ring, trace)
    coords = [R.format(c) for c in value.coords]
    result = {"expr": args.expr, "value": str(value), "coordinates": coords}
    certs = {"trace": [list(step) for step in trace.steps]}
    lines = [f"  {expr} = {val}" for expr, val in trace.steps]
    lines.append(f"{args.expr} = {value}")
    return ring_echo, {"p": R.p, "n": args.n}, result, certs, None, "\n".join(lines)


def cmd_verify(args, caps):
    wanted = [c.strip() for c in args.filter.split(",") if c.strip()] if args.filter else None
    try:
        rows = run_suite(wanted, seed=args.seed)
    except KeyError as exc:
        raise CommandError(f"{exc.args[0]}; cases: {', '.join(CASES)}") from None
    counts: Dict[str, int] = {}
    for r in rows:
        counts[r.verdict] = counts.get(r.verdict, 0) + 1
    result = {"rows": len(rows), "verdicts": counts, "cases": sorted({r.case for r in rows})}
    text = format_ledger(rows) + "\n" + ", ".join(f"{k}: {v}" for k, v in sorted(counts.items()))
    return None, {"filter": wanted or list(CASES), "seed": args.seed}, result, {}, \
        [r.to_dict() for r in rows], text


def cmd_q_compare(args, caps):
    decl = load_decl(args.ring, args.ring_name)
    R = _build(decl, caps)
    if not isinstance(R, FiniteAlgebra):
        raise CommandError("Q-model comparison needs a finite ring")
    if R.size ** args.n * R.size > caps["enum"]:
        raise CommandError(f"enumeration exceeds cap {caps['enum']}")
    cmp = compare_q_models(R, args.n)
    rep = cmp.report()
    text = (f"{decl.name}, n = {args.n}: {rep['outcome']} (|Q_pushout| = {rep['pushout_size']}, "
            f"|Q_wbar| = {rep['wbar_size']})")
    return _ring_echo(decl), {"n": args.n}, rep, {}, None, text


def cmd_ring_print(args, caps):
    decl = load_decl(args.ring, args.ring_name)
    return _ring_echo(decl), {}, {"decl": decl.to_text()}, {}, None, decl.to_text()


# --- plumbing -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--emit", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the report to this file (atomically) instead of stdout")
    common.add_argument("--caps", help="comma list of key=value: enum, basis, degree, level")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    ring_args = argparse.ArgumentParser(add_help=False)
    ring_args.add_argument("--ring", required=True,
                           help=".qfp file, inline 'ring ...' text, or gallery:KEY")
    ring_args.add_argument("--ring-name", help="declaration to use when the file has several")

    ap = argparse.ArgumentParser(prog="qfp", description="Quasi-F-split heights and Witt vector tools.")
    sub = ap.add_subparsers(dest="command", required=True)

    h = sub.add_parser("height", parents=[common, ring_args], help="quasi-F-split height search")
    h.add_argument("--max-n", type=int, default=2)
    h.add_argument("--max-degree", type=int, default=4)
    h.set_defaults(func=cmd_height, name="height")

    r = sub.add_parser("reduced", parents=[common, ring_args], help="reducedness with nilpotent witness")
    r.set_defaults(func=cmd_reduced, name="reduced")

    w = sub.add_parser("witt", help="Witt vector tools")
    wsub = w.add_subparsers(dest="witt_command", required=True)
    we = wsub.add_parser("eval", parents=[common], help="evaluate a Witt expression")
    we.add_argument("--p", type=int)
    we.add_argument("--n", type=int, required=True)
    we.add_argument("--expr", required=True)
    we.add_argument("--ring", help="finite coefficient ring (default GF(p))")
    we.add_argument("--ring-name")
    we.set_defaults(func=cmd_witt_eval, name="witt eval")

    v = sub.add_parser("verify", parents=[common], help="run the verification suite")
    v.add_argument("--filter", help=f"comma list of cases: {', '.join(CASES)}")
    v.set_defaults(func=cmd_verify, name="verify")

    q = sub.add_parser("q", help="Q-model tools")
    qsub = q.add_subparsers(dest="q_command", required=True)
    qc = qsub.add_parser("compare", parents=[common, ring_args], help="pushout vs Wbar model")
    qc.add_argument("--n", type=int, default=2)
    qc.set_defaults(func=cmd_q_compare, name="q compare")

    rp = sub.add_parser("ring", help="ring declaration tools")
    rsub = rp.add_subparsers(dest="ring_command", required=True)
    pr = rsub.add_parser("print", parents=[common, ring_args], help="canonical form of a declaration")
    pr.set_defaults(func=cmd_ring_print, name="ring print")
    return ap


def render(command: str, emit: str, ring, params, result, certs, ledger, text) -> str:
    if emit == "text":
        return text.rstrip("\n") + "\n"
    doc = {"version": SCHEMA_VERSION, "command": command, "ring": ring, "params": params,
           "result": result, "certificates": certs}
    if ledger is not None:
        doc["ledger"] = ledger
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def write_atomic(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qfp-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        caps = parse_caps(args.caps)
        ring, params, result, certs, ledger, text = args.func(args, caps)
        if args.command == "verify" or "seed" in params:
            pass
        else:
            params = dict(params, seed=args.seed)
        out = render(args.name, args.emit, ring, params, result, certs, ledger, text)
    except (CommandError, ParseError, RingError, QModelError, GradedSolverError, WittError, PolyError) as exc:
        print(f"qfp: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        try:
            write_atomic(args.out, out)
        except OSError as exc:
            print(f"qfp: error: cannot write {args.out!r}: {exc.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(out)
        sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
