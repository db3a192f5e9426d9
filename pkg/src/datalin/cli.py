"""Command-line interface and JSON file formats.

Instance files are JSON objects {"arity", "dimension", "generators",
"target"}; a data vector is a list of {"set": [atom...], "value":
[int-or-decimal-string...]}.  Atoms may be strings or nonnegative
integers and are interned to internal integer ids; values beyond 53 bits
must be decimal strings, and emitted values are always decimal strings so
the format is lossless.

Exit codes: 0 solvable/verified, 1 not solvable/not verified, 2 usage or
parse error, 3 inconclusive (a resource cap truncated the search).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import Any, Optional

from .calculus import CapExceeded
from .core import (
    Atom,
    DataVector,
    Instance,
    ShapeError,
    dv_add,
    dv_permute,
    dv_scale,
)
from .nsolve import n_solvable
from .oracle import OracleConfig, OracleGuardError, brute_force
from .witness import (
    Witness,
    WitnessTerm,
    extract_witness_general,
    extract_witness_k2,
    verify_witness,
)
from .zsolve import local_check, z_solvable

_MAX_SAFE = 2**53 - 1


class FormatError(ValueError):
    """A user-facing input problem (reported without a stack trace)."""


class AtomTable:
    """Interning of external atom names (strings or nonnegative integers)
    to internal integer ids, in order of first appearance."""

    def __init__(self) -> None:
        self.ids: dict[Any, int] = {}
        self.names: list[Any] = []

    @staticmethod
    def canonical(raw: Any) -> Any:
        if isinstance(raw, bool):
            raise FormatError("atoms must be strings or nonnegative integers")
        if isinstance(raw, int):
            if raw < 0:
                raise FormatError("integer atoms must be nonnegative")
            return raw
        if isinstance(raw, str):
            # renaming keys are JSON strings even for numeric atoms
            return int(raw) if raw.isdigit() else raw
        raise FormatError("atoms must be strings or nonnegative integers")

    def intern(self, raw: Any) -> Atom:
        name = self.canonical(raw)
        if name not in self.ids:
            self.ids[name] = len(self.names)
            self.names.append(name)
        return self.ids[name]

    def name_of(self, atom: Atom) -> Any:
        if 0 <= atom < len(self.names):
            return self.names[atom]
        return f"_f{atom}"  # fresh atom introduced internally


def _parse_int(raw: Any, where: str) -> int:
    if isinstance(raw, bool):
        raise FormatError(f"{where}: expected an integer")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str):
        try:
            return int(raw)
        except ValueError:
            raise FormatError(f"{where}: bad decimal string {raw!r}") from None
    if isinstance(raw, float):
        raise FormatError(
            f"{where}: integers beyond 53 bits must be decimal strings"
        )
    raise FormatError(f"{where}: expected an integer")


def _emit_int(x: int) -> str:
    return str(x)


def parse_data_vector(
    raw: Any, arity: int, dim: int, table: AtomTable, where: str
) -> DataVector:
    if not isinstance(raw, list):
        raise FormatError(f"{where}: expected a list of entries")
    entries: dict = {}
    for i, ent in enumerate(raw):
        spot = f"{where}[{i}]"
        if not isinstance(ent, dict) or set(ent) != {"set", "value"}:
            raise FormatError(f'{spot}: expected {{"set": …, "value": …}}')
        atoms = ent["set"]
        vals = ent["value"]
        if not isinstance(atoms, list) or len(atoms) != arity:
            raise FormatError(f"{spot}.set: expected {arity} atoms")
        if not isinstance(vals, list) or len(vals) != dim:
            raise FormatError(f"{spot}.value: expected {dim} integers")
        key_atoms = [table.intern(a) for a in atoms]
        if len(set(key_atoms)) != arity:
            raise FormatError(f"{spot}.set: atoms must be distinct")
        key = tuple(sorted(key_atoms))
        if key in entries:
            raise FormatError(f"{spot}.set: duplicate set within one vector")
        entries[key] = tuple(
            _parse_int(v, f"{spot}.value[{j}]") for j, v in enumerate(vals)
        )
    return DataVector(arity, dim, entries)


def parse_instance(raw: Any, table: AtomTable) -> Instance:
    if not isinstance(raw, dict):
        raise FormatError("instance: expected a JSON object")
    for fld in ("arity", "dimension", "generators", "target"):
        if fld not in raw:
            raise FormatError(f"instance: missing field {fld!r}")
    arity = _parse_int(raw["arity"], "arity")
    dim = _parse_int(raw["dimension"], "dimension")
    if arity < 1 or dim < 1:
        raise FormatError("arity and dimension must be positive")
    if not isinstance(raw["generators"], list):
        raise FormatError("generators: expected a list")
    gens = tuple(
        parse_data_vector(g, arity, dim, table, f"generators[{i}]")
        for i, g in enumerate(raw["generators"])
    )
    target = parse_data_vector(raw["target"], arity, dim, table, "target")
    return Instance(arity, dim, gens, target)


def emit_data_vector(v: DataVector, table: AtomTable) -> list:
    return [
        {
            "set": [table.name_of(a) for a in key],
            "value": [_emit_int(x) for x in val],
        }
        for key, val in sorted(v.entries.items())
    ]


def emit_instance(inst: Instance, table: AtomTable) -> dict:
    return {
        "arity": inst.arity,
        "dimension": inst.dim,
        "generators": [emit_data_vector(g, table) for g in inst.generators],
        "target": emit_data_vector(inst.target, table),
    }


def parse_witness(raw: Any, table: AtomTable) -> Witness:
    if not isinstance(raw, dict) or "terms" not in raw:
        raise FormatError('witness: expected {"terms": […]}')
    terms = []
    for i, ent in enumerate(raw["terms"]):
        spot = f"terms[{i}]"
        if not isinstance(ent, dict) or not {
            "coeff",
            "generator",
            "renaming",
        } <= set(ent):
            raise FormatError(
                f"{spot}: expected coeff, generator and renaming fields"
            )
        coeff = _parse_int(ent["coeff"], f"{spot}.coeff")
        gi = _parse_int(ent["generator"], f"{spot}.generator")
        ren_raw = ent["renaming"]
        if not isinstance(ren_raw, dict):
            raise FormatError(f"{spot}.renaming: expected an object")
        ren = tuple(
            sorted(
                (table.intern(a), table.intern(b)) for a, b in ren_raw.items()
            )
        )
        if len({a for a, _ in ren}) != len(ren):
            raise FormatError(f"{spot}.renaming: duplicate source atom")
        terms.append(WitnessTerm(coeff, gi, ren))
    return Witness(tuple(terms))


def emit_witness(w: Witness, table: AtomTable) -> dict:
    return {
        "terms": [
            {
                "coeff": t.coeff
                if abs(t.coeff) <= _MAX_SAFE
                else _emit_int(t.coeff),
                "generator": t.generator,
                "renaming": {
                    str(table.name_of(a)): table.name_of(b)
                    for a, b in t.renaming
                },
            }
            for t in w.terms
        ]
    }


def _load(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno}") from None


def _dump_json(obj: Any) -> None:
    print(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _report(args, line: str, payload: dict) -> None:
    print(line)
    if getattr(args, "json", False):
        _dump_json(payload)


# ---------------------------------------------------------------------------
# commands


def cmd_zsolve(args) -> int:
    table = AtomTable()
    inst = parse_instance(_load(args.path), table)
    ok = z_solvable(inst)
    payload: dict = {"command": "zsolve", "solvable": ok}
    if ok and getattr(args, "json", False):
        payload["witness"] = _try_extract_json(inst, table)
    _report(args, "Z-SOLVABLE" if ok else "NOT-Z-SOLVABLE", payload)
    return 0 if ok else 1


def _try_extract_json(inst: Instance, table: AtomTable) -> Optional[dict]:
    try:
        w = (
            extract_witness_k2(inst)
            if inst.arity == 2
            else extract_witness_general(inst)
        )
    except CapExceeded:
        return None
    return emit_witness(w, table) if w is not None else None


def cmd_nsolve(args) -> int:
    table = AtomTable()
    inst = parse_instance(_load(args.path), table)
    dec = n_solvable(inst, coeff_cap=args.cap)
    payload = {
        "command": "nsolve",
        "status": dec.status,
        "coeff_bound": _emit_int(dec.bounds.coeff_bound),
        "support_size": _emit_int(dec.bounds.support_size),
    }
    if dec.status == "SOLVABLE" and dec.guess is not None:
        payload["nonreversible_part"] = [
            {
                "generator": gi,
                "renaming": {
                    str(table.name_of(a)): table.name_of(b) for a, b in ren
                },
            }
            for gi, ren in dec.guess
        ]
    line = {
        "SOLVABLE": "N-SOLVABLE",
        "UNSOLVABLE": "NOT-N-SOLVABLE",
        "INCONCLUSIVE": "INCONCLUSIVE",
    }[dec.status]
    _report(args, line, payload)
    return {"SOLVABLE": 0, "UNSOLVABLE": 1, "INCONCLUSIVE": 3}[dec.status]


def cmd_check_local(args) -> int:
    table = AtomTable()
    inst = parse_instance(_load(args.path), table)
    report = local_check(inst)
    payload = {
        "command": "check-local",
        "pass": report.decision,
        "failures": [
            {
                "subset": [table.name_of(a) for a in f.subset],
                "target_weight": [_emit_int(x) for x in f.target_weight],
            }
            for f in report.failures
        ],
    }
    line = "LOCAL-CHECK-PASS" if report.decision else "LOCAL-CHECK-FAIL"
    if not report.decision and args.explain:
        worst = report.failures[0]
        names = ", ".join(str(table.name_of(a)) for a in worst.subset)
        line += f" at subset {{{names}}}"
    _report(args, line, payload)
    return 0 if report.decision else 1


def cmd_witness(args) -> int:
    table = AtomTable()
    inst = parse_instance(_load(args.path), table)
    try:
        if inst.arity == 2 and not args.general:
            w = extract_witness_k2(inst)
        else:
            w = extract_witness_general(inst)
    except CapExceeded:
        _report(args, "INCONCLUSIVE", {"command": "witness", "status": "cap"})
        return 3
    if w is None:
        _report(
            args, "NO-WITNESS", {"command": "witness", "witness": None}
        )
        return 1
    print("WITNESS-FOUND")
    _dump_json(emit_witness(w, table))
    return 0


def cmd_verify(args) -> int:
    table = AtomTable()
    inst = parse_instance(_load(args.path), table)
    w = parse_witness(_load(args.witness_path), table)
    try:
        ok = verify_witness(inst, w, args.mode)
    except (IndexError, ShapeError) as exc:
        raise FormatError(str(exc)) from None
    _report(
        args,
        "VERIFIED" if ok else "NOT-VERIFIED",
        {"command": "verify", "verified": ok, "mode": args.mode},
    )
    return 0 if ok else 1


def cmd_oracle(args) -> int:
    table = AtomTable()
    inst = parse_instance(_load(args.path), table)
    cfg = OracleConfig(args.coeff_bound, args.fresh, args.mode)
    try:
        w = brute_force(inst, cfg)
    except OracleGuardError as exc:
        _report(
            args, "INCONCLUSIVE", {"command": "oracle", "status": str(exc)}
        )
        return 3
    if w is None:
        _report(args, "ORACLE-ABSENT", {"command": "oracle", "witness": None})
        return 1
    print("ORACLE-FOUND")
    _dump_json(emit_witness(w, table))
    return 0


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    atoms = [f"a{i}" for i in range(args.atoms)]
    if args.atoms < args.arity:
        raise FormatError("need at least as many atoms as the arity")

    def random_vector() -> list:
        n_entries = rng.randint(1, max(1, args.atoms - args.arity + 1))
        seen = set()
        out = []
        for _ in range(n_entries):
            key = tuple(sorted(rng.sample(atoms, args.arity)))
            if key in seen:
                continue
            seen.add(key)
            val = [
                rng.randint(-args.weight_range, args.weight_range)
                for _ in range(args.dim)
            ]
            if any(val):
                out.append({"set": list(key), "value": [str(v) for v in val]})
        return out

    gens = []
    while len(gens) < args.gens:
        g = random_vector()
        if g:
            gens.append(g)
    # target: a small combination of renamed generators
    table = AtomTable()
    for a in atoms:
        table.intern(a)
    inst = parse_instance(
        {
            "arity": args.arity,
            "dimension": args.dim,
            "generators": gens,
            "target": gens[0],
        },
        table,
    )
    target = DataVector(args.arity, args.dim, {})
    for _ in range(rng.randint(1, 3)):
        g = inst.generators[rng.randrange(len(inst.generators))]
        sup = sorted(g.support())
        pool = list(range(args.atoms))
        image = rng.sample(pool, len(sup))
        coeff = rng.choice([-2, -1, 1, 2])
        target = dv_add(
            target, dv_scale(coeff, dv_permute(g, dict(zip(sup, image))))
        )
    doc = {
        "arity": args.arity,
        "dimension": args.dim,
        "generators": gens,
        "target": emit_data_vector(target, table),
    }
    print(json.dumps(doc, sort_keys=True, separators=(",", ":")))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="datalin",
        description="Solvability of linear equations over unordered-data vectors",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def with_common(sp):
        sp.add_argument("path", help="instance JSON file")
        sp.add_argument("--json", action="store_true", help="machine report")
        return sp

    with_common(sub.add_parser("zsolve")).set_defaults(func=cmd_zsolve)
    np = with_common(sub.add_parser("nsolve"))
    np.add_argument("--cap", type=int, default=10_000)
    np.set_defaults(func=cmd_nsolve)
    cp = with_common(sub.add_parser("check-local"))
    cp.add_argument("--explain", action="store_true")
    cp.set_defaults(func=cmd_check_local)
    wp = with_common(sub.add_parser("witness"))
    wp.add_argument("--general", action="store_true")
    wp.set_defaults(func=cmd_witness)
    vp = with_common(sub.add_parser("verify"))
    vp.add_argument("witness_path", help="witness JSON file")
    vp.add_argument("--mode", choices=["Z", "N"], default="Z")
    vp.set_defaults(func=cmd_verify)
    op = with_common(sub.add_parser("oracle"))
    op.add_argument("--coeff-bound", type=int, default=2)
    op.add_argument("--fresh", type=int, default=2)
    op.add_argument("--mode", choices=["Z", "N"], default="Z")
    op.set_defaults(func=cmd_oracle)
    gp = sub.add_parser("gen")
    gp.add_argument("--arity", type=int, default=2)
    gp.add_argument("--dim", type=int, default=1)
    gp.add_argument("--atoms", type=int, default=5)
    gp.add_argument("--gens", type=int, default=2)
    gp.add_argument("--weight-range", type=int, default=2)
    gp.add_argument("--seed", type=int, default=0)
    gp.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    threads = os.environ.get("DATALIN_THREADS", "0")
    try:
        int(threads)
    except ValueError:
        print("DATALIN_THREADS must be an integer", file=sys.stderr)
        return 2
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (FormatError, ShapeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
