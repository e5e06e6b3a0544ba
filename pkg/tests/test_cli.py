import json
import os
import re
import shlex
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest
from referencing import Registry, Resource

from discrete_hardy import cli

ROOT = Path(__file__).resolve().parents[1]
SCHEMAS = ROOT / "docs" / "schemas"
B_LITERAL = '{"offset":-1,"values":[1,-2,1]}'


def readme_examples():
    text = (ROOT / "README.md").read_text(encoding="utf-8")
    out = []
    for line in text.splitlines():
        m = re.match(r"^discrete-hardy (.*?)\s+# exit (\d)$", line)
        if m:
            out.append((shlex.split(m.group(1)), int(m.group(2))))
    return out


def _validator(name):
    registry = Registry()
    for path in SCHEMAS.glob("*.schema.json"):
        registry = registry.with_resource(path.name, Resource.from_contents(json.loads(path.read_text())))
    schema = json.loads((SCHEMAS / name).read_text())
    return jsonschema.Draft202012Validator(schema, registry=registry)


def invoke(capsys, *argv):
    code = cli.run(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


EXAMPLES = readme_examples()


def test_readme_has_examples():
    assert len(EXAMPLES) >= 20
    assert {a[0] for a, _ in EXAMPLES} == {"apply", "norm", "atom", "counterexample", "lab", "bench"}


@pytest.mark.parametrize("argv,expected", EXAMPLES, ids=[" ".join(a[:2]) for a, _ in EXAMPLES])
def test_readme_example(capsys, argv, expected):
    code, out, err = invoke(capsys, *argv, "--no-timestamp")
    assert code == expected, err
    if expected != 2 and "--format" not in argv:
        json.loads(out)


def test_golden_frac(capsys):
    code, out, _ = invoke(capsys, "apply", "frac", "--gamma", "0.1", "--j", "1", "--seq", B_LITERAL)
    assert code == 0 and json.loads(out)["value"] == -2.0


def test_sum_both_endpoints_negative(capsys):
    code, out, _ = invoke(capsys, "counterexample", "sum", "--gamma", "0", "--J", "1000000")
    enc = json.loads(out)["enclosure"]
    assert code == 0 and float(enc["lo"]) < 0 and float(enc["hi"]) < 0
    _validator("enclosure.schema.json").validate(enc)


def test_epsilon_inside(capsys):
    code, out, _ = invoke(capsys, "counterexample", "epsilon", "--tol", "1e-10")
    enc = json.loads(out)["enclosure"]
    assert code == 0 and 0 < float(enc["lo"]) <= float(enc["hi"]) < 1 / 3


def test_byte_identical_without_timestamp(capsys):
    argv = ["lab", "domination", "--trials", "30", "--seed", "8", "--no-timestamp"]
    _, first, _ = invoke(capsys, *argv)
    _, second, _ = invoke(capsys, *argv)
    assert first == second
    assert "timestamp" not in json.loads(first)


def test_timestamp_present_by_default(capsys):
    _, out, _ = invoke(capsys, "norm", "lp", "--p", "2", "--seq", B_LITERAL)
    assert "timestamp" in json.loads(out)


def test_csv_rows(capsys):
    code, out, _ = invoke(capsys, "lab", "hilbert-ineq", "--trials", "5", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "trial,support,lhs,rhs,ratio" and len(lines) == 6


def test_output_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = invoke(capsys, "counterexample", "chain", "--gamma", "0", "--J", "10000", "-o", str(target))
    assert code == 0 and out == ""
    _validator("report.schema.json").validate(json.loads(target.read_text()))


def test_input_file(capsys, tmp_path):
    path = tmp_path / "b.json"
    path.write_text(B_LITERAL)
    code, out, _ = invoke(capsys, "norm", "lp", "--p", "1", "--input", str(path))
    assert code == 0 and json.loads(out)["value"] == 4.0


@pytest.mark.parametrize("literal", ['{"offset": 0}', "[1, 2", '{"offset": 0.5, "values": [1]}'])
def test_malformed_sequence(capsys, literal):
    code, _, err = invoke(capsys, "norm", "lp", "--p", "1", "--seq", literal)
    assert code == 2 and err


def test_exponent_relation_named(capsys):
    code, _, err = invoke(capsys, "counterexample", "certify", "--gamma", "0.1", "--p", "1", "--q", "1")
    assert code == 2 and "1/q" in err


def test_riesz_needs_gamma(capsys):
    code, _, _ = invoke(capsys, "apply", "riesz", "--j", "0", "--seq", B_LITERAL)
    assert code == 2


def test_unknown_subcommand(capsys):
    code, _, _ = invoke(capsys, "frobnicate")
    assert code == 2


def test_schemas(capsys):
    _, out, _ = invoke(capsys, "counterexample", "certify", "--J", "1000", "--no-timestamp")
    _validator("certificate.schema.json").validate(json.loads(out))
    _, out, _ = invoke(capsys, "atom", "validate", "--seq", B_LITERAL)
    _validator("atom_report.schema.json").validate(json.loads(out))
    _, out, _ = invoke(capsys, "atom", "random", "--p", "1", "--m", "3")
    _validator("sequence.schema.json").validate(json.loads(out)["sequence"])
    _, out, _ = invoke(capsys, "bench", "--sizes", "256", "512", "--repeats", "1")
    report = json.loads(out)
    _validator("report.schema.json").validate(report)
    for row in report["artifacts"]:
        _validator("bench_rows.schema.json").validate(row)


def _subprocess(args, env_extra):
    env = dict(os.environ, **env_extra)
    return subprocess.run([sys.executable, "-m", "discrete_hardy", *args], capture_output=True, text=True, env=env)


def test_env_threads():
    ok = _subprocess(["norm", "lp", "--p", "1", "--seq", B_LITERAL], {"DISCRETE_HARDY_THREADS": "1"})
    assert ok.returncode == 0
    bad = _subprocess(["norm", "lp", "--p", "1", "--seq", B_LITERAL], {"DISCRETE_HARDY_THREADS": "zero"})
    assert bad.returncode == 2 and "DISCRETE_HARDY_THREADS" in bad.stderr


def test_flag_overrides_env():
    res = _subprocess(["norm", "lp", "--p", "1", "--threads", "1", "--seq", B_LITERAL],
                      {"DISCRETE_HARDY_THREADS": "zero"})
    assert res.returncode == 0
