import json
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from graded_derivations.algebra import AlgebraElement, Grading
from graded_derivations.cli import main, run
from graded_derivations.config import Context, RunConfig, parse_derivation
from graded_derivations.derivations import CentralDerivation, InnerDerivation, LinearCombination, TableDerivation
from graded_derivations.groups import Heisenberg, Integers, enumerate_window
from graded_derivations.reports import ParseError, PreconditionError

BASE = {
    "group": {"kind": "integers"},
    "grading": {"x": 1},
    "derivations": {
        "inner_x": "inner x",
        "central_x": "central z=x tau=parity(1)",
        "table_x": "table{x: 2*x^3 - 1}",
        "scaled": "lincomb [2*central_x]",
        "shift": "multiply x",
    },
    "automorphisms": {"double": {"form": "scaling", "lambda": "2"}},
    "window": {"length": 3},
    "output": "json",
    "seed": 7,
}


@pytest.fixture
def cfg_path(tmp_path):
    def write(data=BASE, name="run.json"):
        p = tmp_path / name
        p.write_text(json.dumps(data, indent=2), encoding="utf-8")
        return str(p)
    return write


def invoke(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def strip_timing(text):
    env = json.loads(text)
    env.pop("timing", None)
    return env


# -- config ------------------------------------------------------------------

def test_config_roundtrip():
    cfg = RunConfig.from_dict(BASE)
    again = RunConfig.loads(cfg.dumps())
    assert again == cfg
    assert again.dumps() == cfg.dumps()


@given(st.integers(0, 6), st.sampled_from(["cochain", "chain"]), st.sampled_from(["text", "json"]), st.integers(0, 10**6))
def test_config_roundtrip_property(length, mode, output, seed):
    data = dict(BASE, window={"length": length}, mode=mode, output=output, seed=seed)
    cfg = RunConfig.from_dict(data)
    assert RunConfig.loads(cfg.dumps()) == cfg


@pytest.mark.parametrize("patch", [{"colour": 1}, {"window": {"length": 2, "size": 3}}, {"mode": "up"}])
def test_config_rejects_unknown(patch):
    with pytest.raises(ParseError):
        RunConfig.from_dict(dict(BASE, **patch))


def test_json_error_position():
    with pytest.raises(ParseError) as exc:
        RunConfig.loads('{"group": {"kind": "integers"},\n "grading": {"x": 1,}}')
    assert exc.value.line == 2 and exc.value.column is not None


# -- derivation grammar -----------------------------------------------------------

Z = Integers()
GZ = Grading(Z, {"x": 1})
WZ = enumerate_window(Z, 3)


def test_grammar_forms():
    assert isinstance(parse_derivation("inner x", GZ), InnerDerivation)
    neg = parse_derivation("inner -x", GZ)
    assert neg.sign == -1
    c = parse_derivation("central z=x tau=parity(1/2)", GZ, WZ)
    assert isinstance(c, CentralDerivation)
    assert str(c.tau) == "parity(1/2)"
    t = parse_derivation("table{x: 2*x^3 - 1}", GZ)
    assert isinstance(t, TableDerivation)
    assert t(Z.gen("x")) == AlgebraElement.parse("2*x^3 - 1", Z)
    names = {"a": InnerDerivation(GZ, Z.gen("x"))}
    lc = parse_derivation("lincomb [2*a, -a, (1+i)*a]", GZ, resolve=names.__getitem__)
    assert isinstance(lc, LinearCombination) and len(lc.terms) == 3
    triv = Grading.trivial(Z)
    add = parse_derivation("central z=x tau=additive{x: 1}", triv, WZ)
    assert add(Z.gen("x") ** 2) == AlgebraElement.parse("2*x^3", Z)
    H = Heisenberg()
    gh = Grading(H, {"x": 1})
    tab = parse_derivation("central z=z tau=table{e: 0, x: 1, x^-1: 1}", gh, enumerate_window(H, 1))
    assert tab(H.gen("x")) == AlgebraElement.basis(H.gen("x") * H.gen("z"))


@pytest.mark.parametrize("text,column", [
    ("inner x^", 9),
    ("table{x: 2*x^ - 1}", 14),
    ("table{q: x}", 7),
    ("outer x", 1),
    ("central z=x tau=parity(1/0)", 24),
    ("central z=x^ tau=parity(1)", 13),
])
def test_grammar_error_columns(text, column):
    with pytest.raises(ParseError) as exc:
        parse_derivation(text, GZ, WZ)
    assert exc.value.column == column


def test_context_reports_line(cfg_path):
    data = dict(BASE, derivations={"ok": "inner x", "bad": "inner x^"})
    ctx = Context(RunConfig.load(cfg_path(data)))
    with pytest.raises(ParseError) as exc:
        ctx.derivation("bad")
    assert exc.value.line is not None and exc.value.column == 9


def test_self_reference_rejected():
    ctx = Context(RunConfig.from_dict(dict(BASE, derivations={"loop": "lincomb [loop]"})))
    with pytest.raises(PreconditionError):
        ctx.derivation("loop")


# -- commands -------------------------------------------------------------------

def test_demo_integers(capsys):
    code, out = invoke(capsys, ["demo", "integers-dg", "--format", "json"])
    env = json.loads(out)
    assert code == 0 and env["status"] == "pass" and env["schema"] == 1


@pytest.mark.parametrize("name", ["integers-dg", "product-dg", "inner-central-dg", "heisenberg-audit"])
def test_all_demos_exit_zero(capsys, name):
    code, out = invoke(capsys, ["demo", name])
    assert code == 0 and out.startswith("demo: PASS")


def test_groupoid_axioms_check(capsys, cfg_path):
    code, out = invoke(capsys, ["check", "--check", "groupoid-axioms", "--config", cfg_path()])
    env = json.loads(out)
    assert code == 0 and env["status"] == "pass"
    assert env["window"]["size"] == 7


def test_malformed_element_exit_3(capsys, cfg_path):
    path = cfg_path(dict(BASE, derivations={"bad": "inner x^"}))
    code, out = invoke(capsys, ["check", "--check", "leibniz", "--config", path])
    env = json.loads(out)
    assert code == 3 and env["status"] == "error"
    assert env["error"]["type"] == "ParseError"
    lines = open(path, encoding="utf-8").read().splitlines()
    assert env["error"]["line"] == 1 + next(i for i, l in enumerate(lines) if "inner x^" in l)
    assert env["error"]["column"] == 9


def test_precondition_exit_3(capsys, cfg_path):
    path = cfg_path({"group": {"kind": "heisenberg"}, "grading": {"z": 1}})
    code, out = invoke(capsys, ["validate", "--config", path, "--format", "json"])
    assert code == 3 and "relator" in json.loads(out)["error"]["message"]
    path = cfg_path(dict(BASE, derivations={"c": "central z=x^2 tau=parity(1)"}))
    code, _ = invoke(capsys, ["check", "--check", "dg", "--config", path])
    assert code == 2
    code, out = invoke(capsys, ["check", "--check", "leibniz", "nope", "--config", cfg_path()])
    assert code == 3


def test_validate_and_checks(capsys, cfg_path):
    p = cfg_path()
    code, out = invoke(capsys, ["validate", "--config", p])
    assert code == 0
    code, out = invoke(capsys, ["check", "--check", "additivity", "inner_x", "central_x", "table_x", "--config", p])
    assert code == 0
    code, out = invoke(capsys, ["check", "--check", "loops", "inner_x", "central_x", "--config", p])
    assert code == 0
    code, out = invoke(capsys, ["check-iso", "central_x", "scaled", "double", "--config", p])
    assert code == 0
    # d_x = 2 d^tau_x on Z, so scaling by 2 also conjugates them
    code, out = invoke(capsys, ["check-iso", "central_x", "inner_x", "double", "--config", p])
    assert code == 0
    code, out = invoke(capsys, ["check-iso", "scaled", "central_x", "double", "--config", p])
    assert code == 2


def test_chain_mode_flag(capsys, cfg_path):
    p = cfg_path()
    code, out = invoke(capsys, ["check", "--check", "dg", "central_x", "--config", p, "--mode", "chain"])
    env = json.loads(out)
    assert code == 2 and env["config"]["mode"] == "chain"
    assert env["reports"][0]["square_zero"]["status"] == "pass"


def test_char_table_and_bracket(capsys, cfg_path):
    p = cfg_path()
    code, out = invoke(capsys, ["char-table", "central_x", "--config", p, "--window-length", "1"])
    env = json.loads(out)
    assert env["table"]["rows"] == ["e", "x^-1", "x"]
    assert env["table"]["values"][0] == ["0", "1", "0"]
    code, out = invoke(capsys, ["bracket", "inner_x", "central_x", "--config", p, "--format", "text"])
    assert code == 0 and "|" in out


def test_counterexample_replay(capsys, cfg_path):
    """Counterexamples in a fail report reproduce the failure through the library."""
    p = cfg_path()
    code, out = invoke(capsys, ["check", "--check", "dg", "shift", "--config", p])
    assert code == 2
    cx = json.loads(out)["reports"][0]["counterexamples"][0]
    ctx = Context(RunConfig.load(p))
    d = ctx.derivation("shift")
    g = Z.parse(cx["g"])
    d2 = d.apply(d(g))
    assert d2 == AlgebraElement.parse(cx["d2"], Z)
    assert str(d2.coefficient(Z.parse(cx["element"]))) == cx["coefficient"]

    code, out = invoke(capsys, ["check", "--check", "leibniz", "shift", "--config", p])
    cx = json.loads(out)["reports"][0]["counterexamples"][0]
    u, v = (Z.parse(s) for s in cx["pair"])
    assert d(u * v) == AlgebraElement.parse(cx["lhs"], Z)
    assert d(u * v) != d(u) * v + (u * d(v)).scale(GZ.sign(u))


def test_sampling_is_seeded(capsys, cfg_path):
    data = dict(BASE, window={"length": 4}, derivations={"i": "inner x"})
    runs = []
    for seed in (1, 1, 2):
        p = cfg_path(dict(data, seed=seed, sample_cap=40), name=f"s{seed}.json")
        code, out = invoke(capsys, ["check", "--check", "groupoid-axioms", "--config", p])
        runs.append(strip_timing(out))
    assert runs[0] == runs[1]
    assert runs[0]["reports"][0]["details"]["triple_sampling_fraction"] < 1


def test_determinism(capsys, cfg_path):
    p = cfg_path()
    commands = [
        ["validate"], ["check", "--check", "leibniz"], ["check", "--check", "dg"],
        ["check", "--check", "additivity"], ["check", "--check", "loops"],
        ["check", "--check", "groupoid-axioms"], ["bracket", "inner_x", "table_x"],
        ["char-table", "central_x"], ["check-iso", "central_x", "scaled", "double"],
    ]
    outs = []
    for _ in range(2):
        outs.append([json.dumps(strip_timing(invoke(capsys, c + ["--config", p])[1]), sort_keys=True) for c in commands])
    assert outs[0] == outs[1]


def test_module_entry_point(cfg_path):
    proc = subprocess.run([sys.executable, "-m", "graded_derivations", "demo", "heisenberg-audit", "--format", "json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    env = json.loads(proc.stdout)
    assert env["reports"]["claimed-grading"]["status"] == "fail"


def test_run_without_config():
    env, _ = run(["validate"])
    assert env["status"] == "error"
