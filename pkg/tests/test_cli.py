import subprocess
import sys
from fractions import Fraction

import pytest

from multijoints import formats
from multijoints.cli import CSV_COLUMNS, main
from multijoints.colouring import colour_multijoints
from multijoints.field import QQ, PrimeField
from multijoints.generators import monkey_bar, random_generic_instance, tricolour_necessity
from multijoints.geometry import Instance, multijoints

from conftest import line

F = PrimeField(101)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def report(text):
    return dict(l.split(": ", 1) for l in text.splitlines() if ": " in l)


@pytest.fixture
def grid(tmp_path, capsys):
    def make(n, d=2):
        path = tmp_path / f"grid{n}_{d}.txt"
        code, _, _ = run(capsys, "generate", "monkey-bar", "--n", n, "--d", d, "-o", path)
        assert code == 0
        return path

    return make


# ---------------------------------------------------------------------------
# formats


def test_instance_round_trip():
    for inst in [monkey_bar(3, 2, F), tricolour_necessity(2, QQ), random_generic_instance(4, 3, F, 5)]:
        text = formats.dump_instance(inst)
        back = formats.load_instance(text)
        assert back.families == inst.families
        assert formats.dump_instance(back) == text


def test_instance_with_explicit_points_round_trips():
    inst = monkey_bar(2, 2, F)
    sub = Instance(F, 2, inst.families, points=inst.point_set()[:2])
    back = formats.load_instance(formats.dump_instance(sub))
    assert back.point_set() == sub.point_set()


def test_colouring_and_certificate_round_trip():
    inst = monkey_bar(3, 2, F)
    J = inst.point_set()
    ok = colour_multijoints(J, inst, 2)
    text = formats.dump_colouring(F, 2, ok.colouring, m=2, max_own=[2, 2], advances=0, algorithm="general")
    doc = formats.load_colouring(text)
    assert doc.assignment == dict(ok.colouring) and doc.m == 2
    bad = colour_multijoints(J, inst, 1)
    cert, fld = formats.load_certificate(formats.dump_certificate(bad.certificate, F))
    assert fld == F and set(cert.jbar) == set(bad.certificate.jbar)
    assert set(cert.lbar) == set(bad.certificate.lbar) and cert.m == 1


def test_comments_and_rational_values():
    text = "\n".join(
        [
            "# hand written",
            "kind instance",
            "field rational",
            "dimension 2",
            "family 1 ; base 0,1/2 ; dir 1,0   # a row",
            "family 2 ; base 1/3,0 ; dir 0,2",
        ]
    )
    inst = formats.load_instance(text)
    assert multijoints(inst) == [(QQ(Fraction(1, 3)), QQ(Fraction(1, 2)))]
    assert "base 0,1/2" in formats.dump_instance(inst)


@pytest.mark.parametrize(
    "text",
    [
        "kind instance\nfield prime:101\ndimension 2\nfamily 1 ; base 0,0 ; dir 0,0\n",
        "kind instance\nfield prime:100\ndimension 2\n",
        "kind instance\nfield prime:101\ndimension 2\nfamily 3 ; base 0,0 ; dir 1,0\n",
        "kind instance\nfield prime:101\ndimension 2\nfamily 1 ; base 0,0,0 ; dir 1,0\n",
        "kind instance\nfield prime:101\ndimension 2\nbogus\n",
        "kind colouring\nfield prime:101\ndimension 2\n",
    ],
)
def test_bad_instance_files(text):
    with pytest.raises(ValueError):
        formats.load_instance(text)


# ---------------------------------------------------------------------------
# generate


def test_generate_monkey_bar(capsys, tmp_path):
    code, out, _ = run(capsys, "generate", "monkey-bar", "--n", 3, "--d", 2, "--field", "prime:101")
    assert code == 0
    assert sum(1 for l in out.splitlines() if l.startswith("family")) == 6
    path = tmp_path / "g.txt"
    path.write_text(out)
    assert run(capsys, "multijoints", path, "--count")[1].strip() == "9"


def test_generate_tricolour(capsys, tmp_path):
    path = tmp_path / "t.txt"
    assert run(capsys, "generate", "tricolour", "--n", 2, "--field", "prime:101", "-o", path)[0] == 0
    assert run(capsys, "multijoints", path, "--count")[1].strip() == "12"
    code, out, _ = run(capsys, "generic-check", path)
    assert code == 0 and "generic: yes" in out


def test_generate_random_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        run(capsys, "generate", "random", "--seed", 7, "--d", 2, "--lines-per-family", 5, "-o", path)
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().count("family") == 10


def test_generate_bad_params(capsys):
    code, _, err = run(capsys, "generate", "monkey-bar", "--n", 5, "--field", "prime:5")
    assert code == 1 and "error" in err
    assert run(capsys, "generate", "monkey-bar", "--field", "nope")[0] == 1
    assert run(capsys, "generate", "random", "--field", "rational")[0] == 1


@pytest.mark.parametrize("argv", [["colour"], ["frobnicate"], ["colour", "x.txt", "--m", "two"]])
def test_usage_errors_exit_one(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1


def test_rejection_budget_env(capsys, monkeypatch):
    monkeypatch.setenv("MULTIJOINTS_REJECTION_BUDGET", "1")
    code, _, err = run(capsys, "generate", "random", "--field", "prime:2", "--lines-per-family", 3)
    assert code == 1 and "budget" in err


# ---------------------------------------------------------------------------
# colour and verify


def test_colour_success_and_verify(capsys, grid, tmp_path):
    inst = grid(2)
    col = tmp_path / "c.txt"
    code, out, _ = run(capsys, "colour", inst, "--m", 2, "-o", col)
    assert code == 0
    rep = report(out)
    assert rep["status"] == "ok" and rep["m_used"] == "2"
    assert all(int(c) <= 2 for c in rep["max_own_colour"].split(","))
    assert run(capsys, "verify", inst, col)[0] == 0


def test_verify_below_own_max_fails_with_witness(capsys, grid, tmp_path):
    inst = grid(3)
    col = tmp_path / "c.txt"
    run(capsys, "colour", inst, "--m", 3, "-o", col)
    top = max(map(int, formats.load_colouring(col.read_text()).meta["max_own_colour"].split(",")))
    assert run(capsys, "verify", inst, col, "--m", top)[0] == 0
    code, out, _ = run(capsys, "verify", inst, col, "--m", top - 1)
    assert code == 4
    rep = report(out)
    assert rep["unsaturated"] == "no" and "carries" in rep["witness"]


def test_colour_certificate(capsys, grid, tmp_path):
    inst = grid(3)
    cert = tmp_path / "cert.txt"
    code, out, _ = run(capsys, "colour", inst, "--m", 1, "-o", cert)
    assert code == 3
    assert report(out)["status"] == "certificate"
    assert formats.document_kind(cert.read_text()) == "certificate"
    assert run(capsys, "verify", inst, cert)[0] == 0
    assert run(capsys, "verify", inst, cert, "--m", 2)[0] == 4


def test_colour_to_stdout_puts_report_on_stderr(capsys, grid):
    code, out, err = run(capsys, "colour", grid(2))
    assert code == 0
    assert formats.document_kind(out) == "colouring"
    assert "status: ok" in err


def test_colour_auto_report(capsys, grid, tmp_path):
    code, out, _ = run(capsys, "colour", grid(3, 3), "-o", tmp_path / "c.txt")
    rep = report(out)
    assert code == 0
    assert set(rep) >= {"m_used", "max_own_colour", "advances", "ratio"}
    assert len(rep["max_own_colour"].split(",")) == 3
    assert float(rep["ratio"]) == pytest.approx(int(rep["m_used"]) / 27 ** (1 / 3))


def test_trivial_baseline(capsys, grid, tmp_path):
    inst = grid(2)
    col = tmp_path / "t.txt"
    code, out, _ = run(capsys, "colour", inst, "--algo", "trivial", "-o", col)
    assert code == 0
    rep = report(out)
    assert rep["status"] == "baseline" and "colour 3" in rep["note"]
    assert set(formats.load_colouring(col.read_text()).assignment.values()) == {3}
    # an extra colour is not a d-colouring, so verification refuses it
    assert run(capsys, "verify", inst, col, "--m", 0)[0] == 4


def test_planar_algorithm(capsys, grid, tmp_path):
    col = tmp_path / "p.txt"
    inst = grid(4)
    code, out, _ = run(capsys, "colour", inst, "--algo", "planar", "-o", col)
    assert code == 0 and report(out)["m_used"] == "5"
    assert run(capsys, "verify", inst, col)[0] == 0
    assert run(capsys, "colour", grid(2, 3), "--algo", "planar")[0] == 1


def test_csv(capsys, grid, tmp_path):
    code, out, _ = run(capsys, "colour", grid(2), "--m", 2, "--csv", "-o", tmp_path / "c.txt")
    row = out.strip().split(",")
    assert code == 0 and len(row) >= len(CSV_COLUMNS)
    assert row[CSV_COLUMNS.index("status")] == "ok"


def test_non_generic_exit_code(capsys, tmp_path):
    fams = [
        [line(F, (0, 0, 0), (1, 0, 0), 1)],
        [line(F, (0, 0, 0), (0, 1, 0), 2)],
        [line(F, (0, 0, 0), (1, 1, 0), 3), line(F, (0, 0, 0), (0, 0, 1), 3)],
    ]
    path = tmp_path / "ng.txt"
    path.write_text(formats.dump_instance(Instance(F, 3, fams)))
    code, out, _ = run(capsys, "generic-check", path)
    assert code == 2 and "generic: no" in out and "point: 0,0,0" in out
    code, _, err = run(capsys, "colour", path)
    assert code == 2 and "non-generic" in err


def test_parse_error_exit_code(capsys, tmp_path):
    path = tmp_path / "junk.txt"
    path.write_text("this is not an instance\n")
    assert run(capsys, "colour", path)[0] == 1
    assert run(capsys, "colour", tmp_path / "missing.txt")[0] == 1


def test_mismatched_point_sets(capsys, grid, tmp_path):
    col = tmp_path / "c.txt"
    run(capsys, "colour", grid(2), "--m", 2, "-o", col)
    code, _, err = run(capsys, "verify", grid(3), col)
    assert code == 1 and "differ" in err


def test_oracle_command(capsys, grid):
    code, out, _ = run(capsys, "oracle", grid(3))
    assert code == 0 and out.startswith("m_star: 2")
    assert run(capsys, "oracle", grid(5))[0] == 1


def test_round_trip_pipeline_over_corpus(capsys, tmp_path):
    specs = [("monkey-bar", "--n", 3, "--d", 3), ("tricolour", "--n", 2)]
    specs += [("random", "--seed", s, "--d", 2 + s % 2, "--lines-per-family", 5) for s in range(6)]
    for k, spec in enumerate(specs):
        inst, col = tmp_path / f"i{k}.txt", tmp_path / f"c{k}.txt"
        assert run(capsys, "generate", *spec, "-o", inst)[0] == 0
        assert run(capsys, "colour", inst, "-o", col)[0] == 0
        assert run(capsys, "verify", inst, col)[0] == 0


def test_console_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "multijoints", "generate", "monkey-bar", "--n", "2"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.count("family") == 4
