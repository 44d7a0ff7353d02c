"""``dekomp`` command line interface.

Exit codes: 0 success, 1 input error, 2 search budget exhausted.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .conjecture import FunctorSpec, explore
from .decompose import UnsupportedRing, decompose, dn_relative, engine_for, is_isomorphic
from .family import ExampleError, build_example, verify_indecomposable, verify_kernel_span
from .matrix import (MatrixParseError, RingMatrix, detect_blocks, format_matrix_text,
                     minimize_presentation, read_matrix)
from .modules import DEFAULT_BUDGET
from .report import CertificationError, dumps, matrix_to_dict
from .rings import Ring, RingParseError, is_prime
from .snf import lift_to_integers, smith_normal_form


class InputError(Exception):
    pass


def _load(path: str) -> RingMatrix:
    try:
        return read_matrix(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except MatrixParseError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _same_ring(A: RingMatrix, B: RingMatrix) -> None:
    if A.ring != B.ring:
        raise InputError(f"ring mismatch: {A.ring} vs {B.ring}")


# -- subcommands: each returns (payload dict, plain text) ---------------------


def cmd_blocks(args):
    A = _load(args.file)
    part = detect_blocks(A)
    payload = {"ring": str(A.ring), "bn": part.bn,
               "blocks": [[c + 1 for c in cls] for cls in part.classes]}
    return payload, f"bn = {part.bn}; blocks: {part}"


def cmd_minimize(args):
    A = _load(args.file)
    Amin, trail = minimize_presentation(A)
    payload = {"ring": str(A.ring), "minimized": matrix_to_dict(Amin), "steps": [str(s) for s in trail]}
    text = format_matrix_text(Amin).rstrip("\n")
    if trail:
        text += "\n# steps: " + " ".join(str(s) for s in trail)
    return payload, text


def cmd_snf(args):
    A = _load(args.file)
    ring = A.ring
    if ring.kind == "Z/n":
        res = smith_normal_form(lift_to_integers(A))
        note = f"computed over Z for the lifted matrix [A; {ring.modulus}·I]"
    elif ring.kind in ("Z", "poly") and engine_for(ring) == "snf":
        res, note = smith_normal_form(A), None
    else:
        raise InputError(f"Smith normal form needs Z, Z/n or GF(p)[x], got {ring}")
    base = res.D.ring
    payload = {
        "ring": str(ring),
        "diagonal": [base.format(d) for d in res.diagonal],
        "invariant_factors": [base.format(d) for d in res.invariant_factors],
        "free_rank": res.free_rank,
        "P": matrix_to_dict(res.P.matrix),
        "Q": matrix_to_dict(res.Q.matrix),
        "D": matrix_to_dict(res.D),
    }
    lines = [f"invariant factors: {', '.join(payload['invariant_factors']) or 'none'}",
             f"free rank: {res.free_rank}", f"D = {res.D}", f"P = {res.P.matrix}", f"Q = {res.Q.matrix}"]
    if note:
        payload["note"] = note
        lines.append(f"note: {note}")
    return payload, "\n".join(lines)


def cmd_decompose(args):
    A = _load(args.file)
    rep = decompose(A, args.budget)
    return rep.to_dict(), rep.plain()


def cmd_dn(args):
    A = _load(args.file)
    rep = decompose(A, args.budget)
    return {"ring": str(A.ring), "dn": rep.dn}, f"dn = {rep.dn}"


def cmd_dnrel(args):
    A, B = _load(args.file), _load(args.reference)
    _same_ring(A, B)
    try:
        k = dn_relative(A, B, args.budget, args.seed)
    except ValueError as exc:
        if isinstance(exc, UnsupportedRing):
            raise
        raise InputError(str(exc)) from exc
    return {"ring": str(A.ring), "dn_relative": k}, f"dn(M, I) = {k}"


def cmd_iso(args):
    A, B = _load(args.file), _load(args.other)
    _same_ring(A, B)
    found = is_isomorphic(A, B, args.budget, args.seed)
    payload = {"ring": str(A.ring), "isomorphic": bool(found),
               "method": found.method if found else None}
    return payload, f"isomorphic: {'yes' if found else 'no'}"


def cmd_example(args):
    if args.n < 1:
        raise InputError("--n must be at least 1")
    if not is_prime(args.p):
        raise InputError(f"--p must be prime, got {args.p}")
    ring = Ring.truncated(args.p, ("x", "y"), 2)
    try:
        inst = build_example(args.n, ring)
    except ExampleError as exc:
        raise InputError(str(exc)) from exc
    payload = {"ring": str(ring), "n": args.n, "matrix": matrix_to_dict(inst.matrix)}
    lines = [format_matrix_text(inst.matrix).rstrip("\n")]
    if args.verify:
        indec = verify_indecomposable(inst, args.budget)
        kernel = verify_kernel_span(args.n, args.p)
        payload["indecomposable"] = indec
        payload["kernel_span"] = kernel
        lines.append(f"indecomposable: {'certified' if indec else 'refuted'}; "
                     f"kernel span: {'verified' if kernel else 'failed'}")
    return payload, "\n".join(lines)


def _functor(text: str, ring: Ring) -> FunctorSpec:
    kind, _, arg = text.partition(":")
    kind = kind.lower()
    if kind == "selfpower":
        if not arg.isdigit():
            raise InputError("selfpower needs an integer, e.g. selfpower:2")
        return FunctorSpec("power", m=int(arg))
    if kind in ("sum", "tensor"):
        if not arg:
            raise InputError(f"{kind} needs a matrix file, e.g. {kind}:N.mat")
        N = _load(arg)
        if N.ring != ring:
            raise InputError(f"ring mismatch: {ring} vs {N.ring}")
        return FunctorSpec(kind, N)
    raise InputError(f"unknown functor {text!r}; use selfpower:<m>, sum:<file> or tensor:<file>")


def cmd_conjecture(args):
    A = _load(args.file)
    try:
        F = _functor(args.functor, A.ring)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    ref = _load(args.relative) if args.relative else None
    if ref is not None:
        _same_ring(A, ref)
    rep = explore(F, A, args.terms, args.budget, ref)
    d = rep.to_dict()
    lines = [f"functor: {d['functor']}", "sequence: " + " ".join(map(str, d["sequence"]))]
    if d["last_k_average"] is not None:
        lines.append(f"last-3 slope average: {d['last_k_average']:.6f}")
    if rep.fit is not None:
        gf = d["generating_function"]
        lines.append("recurrence: " + " ".join(map(str, d["recurrence"])))
        lines.append(f"generating function: numerator {gf['numerator']} / denominator {gf['denominator']}")
        lines.append(f"limit: {d['exact_limit']}{' (exact)' if d['limit_is_exact'] else ''}")
    lines.append(f"verdict: {d['verdict']}")
    lines.extend(f"note: {n}" for n in d["notes"])
    return d, "\n".join(lines)


COMMANDS = {
    "blocks": cmd_blocks, "minimize": cmd_minimize, "snf": cmd_snf, "decompose": cmd_decompose,
    "dn": cmd_dn, "dnrel": cmd_dnrel, "iso": cmd_iso, "example": cmd_example,
    "conjecture": cmd_conjecture,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized searches (default 0)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help=f"log2 of the search budget (default {DEFAULT_BUDGET})")

    parser = argparse.ArgumentParser(prog="dekomp", description="Decompose finitely presented modules.")
    parser.add_argument("--version", action="version", version=f"dekomp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    add("blocks", "column blocks of a matrix").add_argument("file")
    add("minimize", "strip redundant relations and generators").add_argument("file")
    add("snf", "Smith normal form over Z, Z/n or GF(p)[x]").add_argument("file")
    add("decompose", "certified decomposition into indecomposables").add_argument("file")
    add("dn", "decomposition number").add_argument("file")
    p = add("dnrel", "multiplicity of an indecomposable summand")
    p.add_argument("file")
    p.add_argument("reference")
    p = add("iso", "module isomorphism test")
    p.add_argument("file")
    p.add_argument("other")
    p = add("example", "bidiagonal example over GF(p)[x,y]/m^2")
    p.add_argument("--n", type=int, default=1, help="chain length (default 1)")
    p.add_argument("--p", type=int, default=2, help="prime (default 2)")
    p.add_argument("--verify", action="store_true", help="certify indecomposability and the kernel span")
    p = add("conjecture", "growth of decomposition numbers under a functor")
    p.add_argument("file")
    p.add_argument("--functor", default="selfpower:2",
                   help="selfpower:<m>, sum:<file> or tensor:<file> (default selfpower:2)")
    p.add_argument("--terms", type=int, default=12, help="number of terms (default 12)")
    p.add_argument("--relative", metavar="FILE", help="count summands isomorphic to this module")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        payload, text = COMMANDS[args.command](args)
    except (InputError, RingParseError, UnsupportedRing) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CertificationError as exc:
        if args.json:
            out.write(dumps({"command": args.command, "status": "budget_exhausted", "error": str(exc)}))
        else:
            out.write(f"budget exhausted: {exc}\n")
        return 2
    if args.json:
        out.write(dumps({"command": args.command, "status": "ok", **payload}))
    else:
        out.write(text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
