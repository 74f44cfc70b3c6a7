"""Command-line front end.

Standard output carries exactly one JSON document (or a plain table);
progress goes to standard error. Exit codes: 0 success, 2 parse or
structure error, 3 budget exceeded, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time
from dataclasses import dataclass
from math import prod

import numpy as np

from . import clifford, oracle, symplectic
from .errors import BudgetExceeded, NotASymmetry, ParseError, StructureViolation
from .heisenberg import HeisenbergElement, to_matrix
from .modring import Budget, Signature, sl2_order, sp2k_order
from .phasespace import PhasePoint, pairing

log = logging.getLogger("heisensym")

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_FAIL = 0, 2, 3, 4


@dataclass
class RunConfig:
    signature: Signature | None
    command: str
    max_candidates: int = 10**8
    seconds: float | None = None
    out: str | None = None
    fmt: str = "json"
    seed: int = 0
    timings: bool = False
    threads: int = 1

    def budget(self) -> Budget:
        return Budget(self.max_candidates, self.seconds)


class CliError(Exception):
    def __init__(self, code: int, payload: dict):
        super().__init__(payload.get("message", ""))
        self.code = code
        self.payload = payload


def _parse_sig(text: str) -> Signature:
    try:
        return Signature.of(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad signature {text!r}: {exc}") from None


def _positive_int(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_float(text):
    v = float(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def _require_sig(cfg: RunConfig) -> Signature:
    if cfg.signature is None:
        raise CliError(EXIT_PARSE, {"error": "ParseError", "message": "--sig is required"})
    return cfg.signature


# ---------------------------------------------------------------------------
# commands

def cmd_order(cfg: RunConfig, args) -> dict:
    sig = _require_sig(cfg)
    if sig.equal_dims():
        return {"signature": list(sig.dims), "order": sp2k_order(sig.dims[0], sig.k), "method": "formula"}
    if sig.pairwise_coprime():
        order = prod(sl2_order(n) for n in sig.dims)
        return {"signature": list(sig.dims), "order": order, "method": "formula"}
    order = symplectic.group_order(sig, cfg.budget())
    return {"signature": list(sig.dims), "order": order, "method": "enumeration"}


def cmd_check(cfg: RunConfig, args) -> dict:
    data = _load_json(args.matrix)
    try:
        H = symplectic.BlockSymplecticMatrix.from_json(data)
    except StructureViolation as exc:
        raise CliError(
            EXIT_PARSE,
            {"member": False, "structure_valid": False, "error": "StructureViolation", "message": str(exc)},
        ) from None
    if cfg.signature is not None and cfg.signature != H.signature:
        raise ParseError(f"--sig {cfg.signature} does not match file signature {H.signature}")
    return {"signature": list(H.signature.dims), "member": symplectic.is_symmetry(H), "structure_valid": True}


def cmd_lift(cfg: RunConfig, args) -> dict:
    data = _load_json(args.matrix)
    try:
        H = symplectic.BlockSymplecticMatrix.from_json(data)
    except StructureViolation as exc:
        raise CliError(EXIT_PARSE, {"error": "StructureViolation", "message": str(exc)}) from None
    sig = H.signature
    if cfg.signature is not None and cfg.signature != sig:
        raise ParseError(f"--sig {cfg.signature} does not match file signature {sig}")
    word = clifford.lift_word(sig, H, cfg.budget())
    U = clifford.unitary_from_word(sig, word)
    if clifford.induced_matrix(U) != H:
        raise CliError(EXIT_FAIL, {"error": "VerificationFailure", "message": "lifted word does not induce target"})
    if args.unitary:
        with open(args.unitary, "w") as fh:
            json.dump(U.to_json(), fh, sort_keys=True)
    return {
        "signature": list(sig.dims),
        "target": H.blocks(),
        "word": [g.to_json() for g in word],
        "labels": [g.label() for g in word],
        "verified": True,
    }


def cmd_induced(cfg: RunConfig, args) -> dict:
    U = clifford.NormalizerUnitary.from_json(_load_json(args.unitary_file))
    H = clifford.induced_matrix(U)
    return {"signature": list(H.signature.dims), "blocks": H.blocks(), "provenance": U.provenance}


def _timed(fn, timings):
    t0 = time.monotonic()
    try:
        return fn()
    finally:
        timings.append(round(time.monotonic() - t0, 3))


def _check_proposition(sig: Signature, budget: Budget) -> dict:
    n = sig.dims[0]
    group = {tuple(map(tuple, H)) for H in symplectic.group_array(sig, budget)}
    det_one = set(clifford.sl2_elements(n))
    lifted = all(
        clifford.induced_matrix(clifford.lift_sl2(n, H2)).entries == H2 for H2 in sorted(det_one)
    )
    ok = group == det_one and lifted
    return {"status": "pass" if ok else "fail", "order": len(group), "det_one_count": len(det_one), "lift_section": lifted}


def _check_corollary(sig: Signature, budget: Budget) -> dict:
    if not sig.equal_dims():
        return {"status": "n/a (unequal dims)"}
    n, k = sig.dims[0], sig.k
    group = symplectic.group_array(sig, budget)
    expected = sp2k_order(n, k)
    H = group.astype(np.int64)
    J = symplectic.standard_J(sig).to_array()
    literal = bool(np.all(((np.swapaxes(H, 1, 2) @ J @ H) % n) == (J % n)))
    ok = len(group) == expected and literal
    return {"status": "pass" if ok else "fail", "order": len(group), "sp2k_order": expected, "transpose_form": literal}


def _check_invariants(sig: Signature, budget: Budget, seed: int, samples: int = 200) -> dict:
    rng = random.Random(seed)
    group = symplectic.group_array(sig, budget)
    pairing_ok = True
    for _ in range(samples):
        row = group[rng.randrange(len(group))]
        H = symplectic.BlockSymplecticMatrix(sig, tuple(tuple(int(x) for x in r) for r in row))
        u = PhasePoint(sig, tuple((rng.randrange(n), rng.randrange(n)) for n in sig.dims))
        v = PhasePoint(sig, tuple((rng.randrange(n), rng.randrange(n)) for n in sig.dims))
        if pairing(symplectic.apply(H, u), symplectic.apply(H, v)) != pairing(u, v):
            pairing_ok = False
            break
    gens = clifford.generator_set(sig)
    kernel_ok = True
    for _ in range(min(samples, 20)):
        a = HeisenbergElement(sig, rng.randrange(sig.L), tuple((rng.randrange(n), rng.randrange(n)) for n in sig.dims))
        U = clifford.NormalizerUnitary(sig, to_matrix(a), ())
        if clifford.induced_matrix(U) != symplectic.BlockSymplecticMatrix.identity(sig):
            kernel_ok = False
            break
    hom_ok = True
    for _ in range(min(samples, 10)):
        w1 = [rng.choice(gens) for _ in range(3)]
        w2 = [rng.choice(gens) for _ in range(3)]
        U1, U2 = clifford.unitary_from_word(sig, w1), clifford.unitary_from_word(sig, w2)
        if clifford.induced_matrix(U1 @ U2) != clifford.induced_matrix(U1) @ clifford.induced_matrix(U2):
            hom_ok = False
            break
    ok = pairing_ok and kernel_ok and hom_ok
    return {
        "status": "pass" if ok else "fail",
        "pairing_preserved": pairing_ok,
        "heisenberg_kernel": kernel_ok,
        "induced_homomorphism": hom_ok,
    }


def cmd_verify(cfg: RunConfig, args) -> dict:
    sig = _require_sig(cfg)
    checks, timings = {}, {}

    def run(name, fn):
        log.info("verify %s: %s", sig, name)
        spent = []
        try:
            checks[name] = _timed(fn, spent)
        except BudgetExceeded as exc:
            checks[name] = {"status": "budget_exceeded", "message": str(exc)}
        timings[name] = spent[0] if spent else None

    if sig.k == 1:
        run("proposition", lambda: _check_proposition(sig, cfg.budget()))

    def theorem1():
        rep = oracle.cross_check(sig, cfg.budget(), cfg.threads)
        return {"status": "pass" if rep.passed else "fail", **rep.to_json()}

    def theorem2():
        rep = clifford.verify_generation(sig, cfg.budget())
        return {"status": "pass" if rep.full else "fail", **rep.to_json()}

    run("theorem1", theorem1)
    run("theorem2", theorem2)
    run("corollary", lambda: _check_corollary(sig, cfg.budget()))
    run("invariants", lambda: _check_invariants(sig, cfg.budget(), cfg.seed))

    statuses = [c["status"] for c in checks.values()]
    order = next((c["group_count"] for c in checks.values() if "group_count" in c), None)
    out = {
        "signature": list(sig.dims),
        "order": order,
        "checks": checks,
        "passed": all(s == "pass" or s.startswith("n/a") for s in statuses),
    }
    for name, secs in timings.items():
        log.info("%s took %ss", name, secs)
    if cfg.timings:
        out["timings"] = timings
    if "fail" in statuses:
        raise CliError(EXIT_FAIL, out)
    if "budget_exceeded" in statuses:
        raise CliError(EXIT_BUDGET, out)
    return out


COMMANDS = {
    "order": cmd_order,
    "check": cmd_check,
    "lift": cmd_lift,
    "induced": cmd_induced,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sig", type=_parse_sig, help="comma-separated dimensions, e.g. 2,3")
    common.add_argument("--budget-candidates", type=_positive_int, default=10**8)
    common.add_argument("--budget-seconds", type=_positive_float, default=None)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in the output")
    common.add_argument("-q", "--quiet", action="store_true", help="suppress progress on stderr")

    parser = argparse.ArgumentParser(prog="heisensym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("order", parents=[common], help="order of H_[sig]")
    p = sub.add_parser("check", parents=[common], help="membership test for a matrix file")
    p.add_argument("matrix")
    p = sub.add_parser("lift", parents=[common], help="generator word realizing a member")
    p.add_argument("matrix")
    p.add_argument("--unitary", help="also write the unitary interchange file here")
    p = sub.add_parser("induced", parents=[common], help="symplectic matrix induced by a unitary file")
    p.add_argument("unitary_file")
    sub.add_parser("verify", parents=[common], help="run every verification check for a signature")
    return parser


def _render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2)
    lines = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for key in sorted(obj):
                walk(f"{prefix}.{key}" if prefix else key, obj[key])
        else:
            lines.append(f"{prefix}\t{json.dumps(obj)}")

    walk("", payload)
    return "\n".join(lines)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("HEISENSYM_THREADS", "1")))
    except ValueError:
        return 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        stream=sys.stderr,
        format="%(name)s: %(message)s",
    )
    cfg = RunConfig(
        signature=args.sig,
        command=args.command,
        max_candidates=args.budget_candidates,
        seconds=args.budget_seconds,
        out=args.out,
        fmt=args.format,
        seed=args.seed,
        timings=args.timings,
        threads=_threads(),
    )
    code = EXIT_OK
    try:
        payload = COMMANDS[args.command](cfg, args)
    except CliError as exc:
        code, payload = exc.code, exc.payload
    except (ParseError, StructureViolation) as exc:
        code, payload = EXIT_PARSE, {"error": type(exc).__name__, "message": str(exc)}
    except BudgetExceeded as exc:
        code, payload = EXIT_BUDGET, {"error": type(exc).__name__, "message": str(exc)}
    except NotASymmetry as exc:
        code, payload = EXIT_FAIL, {"error": "NotASymmetry", "message": str(exc)}
    text = _render(payload, cfg.fmt)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
