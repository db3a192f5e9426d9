import json

import pytest

from datalin.cli import (
    AtomTable,
    FormatError,
    emit_instance,
    emit_witness,
    main,
    parse_instance,
    parse_witness,
)
from datalin.core import DataVector, Instance
from datalin.witness import WitnessTerm, Witness

from conftest import pair_generator, point_target, triangle, edge_target


EX1 = {
    "arity": 1,
    "dimension": 1,
    "generators": [
        [
            {"set": ["d"], "value": ["1"]},
            {"set": ["e"], "value": ["1"]},
        ]
    ],
    "target": [{"set": ["b"], "value": ["2"]}],
}

EX2 = {
    "arity": 2,
    "dimension": 1,
    "generators": [
        [
            {"set": ["x", "y"], "value": ["1"]},
            {"set": ["y", "z"], "value": ["1"]},
            {"set": ["x", "z"], "value": ["1"]},
        ]
    ],
    "target": [{"set": ["g", "d"], "value": ["6"]}],
}


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


# ---------------------------------------------------------------------------
# parsing and emission


def test_parse_emit_round_trip():
    table = AtomTable()
    inst = parse_instance(EX2, table)
    assert inst.arity == 2 and len(inst.generators) == 1
    emitted = emit_instance(inst, table)
    table2 = AtomTable()
    again = parse_instance(emitted, table2)
    assert again == inst
    assert emit_instance(again, table2) == emitted


def test_numeric_atom_names_are_canonicalized():
    raw = {
        "arity": 1,
        "dimension": 1,
        "generators": [[{"set": [3], "value": ["1"]}]],
        "target": [{"set": ["3"], "value": ["1"]}],
    }
    inst = parse_instance(raw, AtomTable())
    # "3" and 3 denote the same atom
    assert inst.generators[0] == inst.target


def test_parse_rejects_malformed_vectors():
    bad = [
        {"set": ["a"], "value": ["1", "2"]},  # wrong dimension
        {"set": ["a", "a"], "value": ["1"]},  # repeated atom
        {"set": ["a"], "value": ["1.5"]},  # non-integer
    ]
    for ent in bad:
        raw = {
            "arity": len(ent["set"]),
            "dimension": 1,
            "generators": [],
            "target": [ent],
        }
        with pytest.raises(FormatError):
            parse_instance(raw, AtomTable())


def test_witness_round_trip():
    table = AtomTable()
    inst = parse_instance(EX1, table)
    w = Witness((WitnessTerm(2, 0, ((0, 0), (1, 2))),))
    emitted = emit_witness(w, table)
    assert parse_witness(emitted, table) == w


def test_values_are_emitted_as_decimal_strings():
    table = AtomTable()
    inst = parse_instance(EX1, table)
    out = emit_instance(inst, table)
    assert out["target"][0]["value"] == ["2"]


# ---------------------------------------------------------------------------
# commands and exit codes


def test_zsolve_exit_codes(tmp_path, capsys):
    good = write(tmp_path, "ex1.json", EX1)
    assert main(["zsolve", good]) == 0
    assert "Z-SOLVABLE" in capsys.readouterr().out
    odd = dict(EX1, target=[{"set": ["b"], "value": ["3"]}])
    bad = write(tmp_path, "odd.json", odd)
    assert main(["zsolve", bad]) == 1
    assert "NOT-Z-SOLVABLE" in capsys.readouterr().out


def test_nsolve_exit_code(tmp_path, capsys):
    path = write(tmp_path, "ex1.json", EX1)
    assert main(["nsolve", path]) == 1
    assert "NOT-N-SOLVABLE" in capsys.readouterr().out


def test_check_local_explain(tmp_path, capsys):
    odd = dict(
        EX2, target=[{"set": ["g", "d"], "value": ["3"]}]
    )
    path = write(tmp_path, "odd2.json", odd)
    assert main(["check-local", path, "--explain"]) == 1
    out = capsys.readouterr().out
    assert "LOCAL-CHECK-FAIL" in out and "subset" in out


def test_witness_and_verify_round_trip(tmp_path, capsys):
    inst_path = write(tmp_path, "ex2.json", EX2)
    assert main(["witness", inst_path]) == 0
    out = capsys.readouterr().out
    assert out.startswith("WITNESS-FOUND")
    witness_json = out.splitlines()[1]
    wpath = tmp_path / "w.json"
    wpath.write_text(witness_json)
    assert main(["verify", inst_path, str(wpath)]) == 0
    assert "VERIFIED" in capsys.readouterr().out
    # same witness fails N-mode (negative coefficients)
    assert main(["verify", inst_path, str(wpath), "--mode", "N"]) == 1


def test_witness_absent(tmp_path, capsys):
    odd = dict(EX2, target=[{"set": ["g", "d"], "value": ["3"]}])
    path = write(tmp_path, "odd2.json", odd)
    assert main(["witness", path]) == 1
    assert "NO-WITNESS" in capsys.readouterr().out


def test_oracle_command(tmp_path, capsys):
    path = write(tmp_path, "ex1.json", EX1)
    assert main(["oracle", path, "--coeff-bound", "1", "--fresh", "2"]) == 0
    assert "ORACLE-FOUND" in capsys.readouterr().out
    assert (
        main(["oracle", path, "--coeff-bound", "1", "--fresh", "2", "--mode", "N"])
        == 1
    )
    assert "ORACLE-ABSENT" in capsys.readouterr().out


def test_format_error_exit_code_2(tmp_path, capsys):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert main(["zsolve", str(p)]) == 2
    missing = write(tmp_path, "missing.json", {"arity": 1})
    assert main(["zsolve", missing]) == 2


def test_bad_thread_env_exit_code(tmp_path, monkeypatch):
    monkeypatch.setenv("DATALIN_THREADS", "many")
    assert main(["zsolve", "whatever.json"]) == 2


def test_gen_is_byte_stable(capsys):
    assert main(["gen", "--seed", "7"]) == 0
    first = capsys.readouterr().out
    assert main(["gen", "--seed", "7"]) == 0
    assert capsys.readouterr().out == first
    inst = parse_instance(json.loads(first), AtomTable())
    assert inst.arity == 2


def test_json_flag_emits_machine_report(tmp_path, capsys):
    path = write(tmp_path, "ex1.json", EX1)
    assert main(["zsolve", path, "--json"]) == 0
    lines = capsys.readouterr().out.splitlines()
    payload = json.loads(lines[1])
    assert payload["solvable"] is True
