"""End-to-end tests of the command line interface.

Subcommands run in-process through main(); expected values repeat the
frozen oracles from the engine test files, so any drift between the CLI
plumbing and the engines shows up here.
"""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from gderive.algebra import algebra_to_json_dict, builtin
from gderive.cli import main
from gderive.linalg import Matrix
from gderive.sl2 import Sl2Family, family_sigma

F = Fraction


@pytest.fixture()
def files(tmp_path):
    """Fixture JSON inputs shared by the subcommand tests."""
    def dump(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    ids = Matrix.identity(3)
    sigma = family_sigma(Sl2Family.fixed("b", b=F(1)))
    return {
        "sl2": dump("sl2.json", algebra_to_json_dict(builtin("sl2"))),
        "heis": dump("heis.json", algebra_to_json_dict(builtin("heisenberg"))),
        "bad_algebra": dump(
            "bad_algebra.json",
            {
                "name": "broken",
                "dim": 3,
                "brackets": [
                    {"left": 1, "right": 2, "result": [["1", 2]]},
                    {"left": 1, "right": 3, "result": [["1", 3]]},
                    {"left": 2, "right": 3, "result": [["1", 1]]},
                ],
            },
        ),
        "identity": dump("identity.json", ids.to_json_dict()),
        "sigma": dump("sigma.json", sigma.to_json_dict()),
        "flip": dump(
            "flip.json",
            Matrix.from_rows(
                [[-1, 0, 0], [0, 1, 0], [0, 0, -1]]
            ).to_json_dict(),
        ),
        "bad_sigma": dump(
            "bad_sigma.json",
            Matrix.from_rows([[1, 1, 0], [0, 1, 0], [0, 0, 2]]).to_json_dict(),
        ),
        "projection": dump(
            "projection.json",
            Matrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 0]]).to_json_dict(),
        ),
        "ideal": dump(
            "ideal.json", {"vars": ["x", "y"], "gens": ["x^2 - y", "x*y - x"]}
        ),
        "inner": dump("inner.json", {"vars": ["x", "y"], "gens": ["x^3 - x"]}),
        "tmp": tmp_path,
    }


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestCheck:
    def test_valid_builtin(self, capsys):
        report = run_json(capsys, "check", "--algebra", "sl2")
        assert report == {
            "name": "sl2", "dim": 3, "valid": True, "violations": [],
        }

    def test_valid_file_text(self, capsys, files):
        code, out, _ = run(
            capsys, "check", "--algebra", files["sl2"], "--format", "text"
        )
        assert code == 0
        assert out == "sl2: valid Lie algebra of dimension 3\n"

    def test_violations_reported(self, capsys, files):
        report = run_json(capsys, "check", "--algebra", files["bad_algebra"])
        assert report["valid"] is False
        assert report["violations"] == [
            {"triple": [1, 2, 3], "residual": ["2", "0", "0"]}
        ]

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "check", "--algebra", "no-such-file.json")
        assert code == 2
        assert "gderive: error[InvalidInput]" in err


class TestDerive:
    def test_twisted_space(self, capsys, files):
        report = run_json(
            capsys, "derive", "--algebra", files["sl2"], "--sigma", files["sigma"]
        )
        assert report["dimension"] == 1
        assert report["kind"] == "plain"
        assert report["basis"] == [
            {
                "rows": 3,
                "cols": 3,
                "entries": [
                    ["0", "1", "-1"],
                    ["0", "0", "-2"],
                    ["0", "0", "0"],
                ],
            }
        ]

    def test_rejects_non_automorphism(self, capsys, files):
        code, _, err = run(
            capsys,
            "derive", "--algebra", files["sl2"], "--sigma", files["bad_sigma"],
        )
        assert code == 2
        assert "error[UnvalidatedAutomorphism]" in err

    def test_minus_kind_needs_generators(self, capsys, files):
        code, _, err = run(
            capsys,
            "derive", "--algebra", files["sl2"], "--sigma", files["identity"],
            "--kind", "minus",
        )
        assert code == 2
        assert "error[InvalidInput]" in err

    def test_rejects_invalid_algebra(self, capsys, files):
        code, _, err = run(
            capsys,
            "derive",
            "--algebra", files["bad_algebra"],
            "--sigma", files["identity"],
        )
        assert code == 2
        assert "Jacobi" in err


class TestSmallSolvers:
    def test_centroid(self, capsys, files):
        report = run_json(capsys, "centroid", "--algebra", files["heis"])
        assert report["dimension"] == 3

    def test_quasider(self, capsys, files):
        report = run_json(
            capsys,
            "quasider", "--algebra", files["heis"], "--map", files["projection"],
        )
        assert report["quasiderivation"] is True
        assert report["witness"]["entries"] == [
            ["0", "0", "0"], ["0", "0", "0"], ["0", "0", "2"],
        ]

    def test_abg(self, capsys):
        report = run_json(
            capsys,
            "abg", "--algebra", "heisenberg",
            "--alpha", "0", "--beta", "1", "--gamma", "-1",
        )
        assert report["dimension"] == 4
        assert (report["alpha"], report["beta"], report["gamma"]) == ("0", "1", "-1")

    def test_intersect_with_witness(self, capsys, files):
        report = run_json(
            capsys,
            "intersect", "--algebra", files["sl2"],
            "--sigma", files["identity"], "--tau", files["sigma"],
            "--witness", "1,0,0",
        )
        assert report["dimension"] == 0
        assert report["basis"] == []
        assert report["witness"] == ["1", "0", "0"]
        assert report["witness_in_centralizer"] is True


class TestHilbert:
    def test_window_report(self, capsys, files):
        report = run_json(
            capsys,
            "hilbert", "--algebra", files["sl2"], "--sigma", files["sigma"],
            "--window", "6",
        )
        assert report["finite_order"] is None
        assert report["dims"] == {
            str(k): (3 if k == 0 else 1) for k in range(-6, 7)
        }
        assert report["period"] == {"cutoff": 1, "period": 1}
        assert report["series"] == "3 + t/(1-t) + t^-1/(1-t^-1)"

    def test_finite_order_report(self, capsys, files):
        report = run_json(
            capsys,
            "hilbert", "--algebra", files["sl2"], "--sigma", files["flip"],
        )
        assert report["finite_order"] == 2
        assert report["dims"] == {"0": 3, "1": 1}
        assert report["period"] is None
        assert report["series"] == "3 + t"


class TestPolynomialCommands:
    def test_groebner(self, capsys, files):
        report = run_json(capsys, "groebner", "--ideal", files["ideal"])
        assert report == {
            "vars": ["x", "y"],
            "basis": ["x^2 - y", "x*y - x", "y^2 - y"],
        }

    def test_member(self, capsys, files):
        report = run_json(
            capsys, "member", "--ideal", files["ideal"], "--poly", "x^3 - x"
        )
        assert report == {"poly": "x^3 - x", "member": True}
        report = run_json(
            capsys, "member", "--ideal", files["ideal"], "--poly", "x + 1"
        )
        assert report["member"] is False

    def test_contain(self, capsys, files):
        report = run_json(
            capsys,
            "contain", "--outer", files["ideal"], "--inner", files["inner"],
        )
        assert report == {"contains": True}

    def test_prime_check(self, capsys, files):
        report = run_json(capsys, "prime-check", "--ideal", files["ideal"])
        assert report["certified"] is False
        assert "nonlinear" in report["reason"]

    def test_degree_guard_trips(self, capsys, files):
        path = files["tmp"] / "guarded.json"
        path.write_text(
            json.dumps({"vars": ["x", "y"], "gens": ["x^2", "x*y + y^2"]})
        )
        code, _, err = run(
            capsys,
            "groebner", "--ideal", str(path), "--degree-guard", "0",
        )
        assert code == 1
        assert "error[DegreeGuardExceeded]" in err

    def test_malformed_ideal_file(self, capsys, files):
        path = files["tmp"] / "broken.json"
        path.write_text('{"vars": ["x"]}')
        code, _, err = run(capsys, "groebner", "--ideal", str(path))
        assert code == 2
        assert "error[InvalidInput]" in err


class TestSl2Command:
    def test_symbolic_family_b(self, capsys):
        report = run_json(capsys, "sl2", "--family", "b")
        assert report["family"] == "b"
        assert report["fixed"] is None
        assert report["raw_generator_count"] == 20
        assert report["ideal_generators"] == [
            "x11 + x33",
            "x12 + 2*x23",
            "x13",
            "x21 + 1/2*x32",
            "x22",
            "x23*y",
            "x31 - 1/2*x32*y",
            "x33*y",
        ]
        first, second = report["components"]
        assert first["prime_certified"] is True
        assert first["dimension"] == 3 == first["claimed_dimension"]
        assert second["prime_certified"] is True
        assert second["free_vars"] == ["x32", "y"]
        assert second["parametric_form"] == [
            ["0", "-1/2*t", "1/2*t*y"],
            ["0", "0", "t"],
            ["0", "0", "0"],
        ]
        assert second["claimed_form_identity"] is True
        assert report["containments"] == {
            "product_contained": True,
            "all_verdicts": True,
        }

    def test_symbolic_family_ab_verdicts(self, capsys):
        report = run_json(capsys, "sl2", "--family", "ab")
        first, second = report["components"]
        assert first["dimension"] == 4
        assert first["claimed_dimension"] == 3
        assert second["prime_certified"] is False
        assert second["dimension_source"] == "parametrization coordinates"
        assert isinstance(second["claimed_form"][0][0], str)
        assert report["containments"]["product_contained"] is True
        assert report["containments"]["all_verdicts"] is False

    def test_fixed_family_ab(self, capsys):
        report = run_json(
            capsys, "sl2", "--family", "ab", "--fix", "a=2,b=1"
        )
        assert report["components"] == []
        assert report["containments"] is None
        fixed = report["fixed"]
        assert fixed["params"] == {"a": "2", "b": "1"}
        assert fixed["dimension"] == 1
        assert fixed["paper_claim"] == 4
        assert fixed["matches_claim"] is False
        assert fixed["basis"][0]["entries"] == [
            ["1", "2/3", "-1/3"],
            ["-4/3", "-2/3", "0"],
            ["-1/3", "0", "-1/3"],
        ]

    def test_fixed_family_b_repeatable_fix_flag(self, capsys):
        report = run_json(
            capsys, "sl2", "--family", "b", "--fix", "b=1"
        )
        assert report["fixed"]["dimension"] == 1

    def test_bad_fix_values(self, capsys):
        code, _, err = run(capsys, "sl2", "--family", "b", "--fix", "c=1")
        assert code == 2
        code, _, err = run(capsys, "sl2", "--family", "b", "--fix", "nonsense")
        assert code == 2
        code, _, err = run(capsys, "sl2", "--family", "ab", "--fix", "a=0,b=1")
        assert code == 2
        assert "error[ZeroParameterA]" in err

    def test_byte_identical_reruns(self, capsys):
        code, first, _ = run(capsys, "sl2", "--family", "c")
        assert code == 0
        code, second, _ = run(capsys, "sl2", "--family", "c")
        assert code == 0
        assert first == second


class TestReproduce:
    def test_full_table(self, capsys):
        report = run_json(capsys, "reproduce")
        assert report["all_ok"] is True
        rows = report["rows"]
        assert [row["key"] for row in rows] == sorted(
            [
                "thm5.1", "thm5.2", "thm5.3", "thm1.6", "cor5.10",
                "thm5.11", "thm5.12", "ex4.2", "ex4.6", "prop2.1",
                "thm1.3", "prop4.1", "rem3.7", "thm1.4",
            ]
        )
        assert all(row["ok"] for row in rows)
        discrepancies = {
            row["key"] for row in rows if row["status"] == "discrepancy"
        }
        assert discrepancies == {"cor5.10", "ex4.2", "thm5.11", "thm5.12"}
        confirmed = {row["key"] for row in rows if row["status"] == "confirmed"}
        assert len(confirmed) == 10

    def test_only_filter(self, capsys):
        report = run_json(capsys, "reproduce", "--only", "thm5.3")
        assert [row["key"] for row in report["rows"]] == ["thm5.3"]
        assert report["all_ok"] is True

    def test_unknown_key(self, capsys):
        code, _, err = run(capsys, "reproduce", "--only", "nope")
        assert code == 2
        assert "error[InvalidInput]" in err

    def test_text_table_always_exits_zero(self, capsys):
        code, out, _ = run(
            capsys, "reproduce", "--only", "rem3.7", "--format", "text"
        )
        assert code == 0
        assert "rem3.7" in out and "pass" in out


class TestParsing:
    def test_unknown_subcommand(self, capsys):
        assert run(capsys, "bogus")[0] == 2

    def test_unknown_flag(self, capsys):
        assert run(capsys, "check", "--algebra", "sl2", "--bogus")[0] == 2

    def test_console_script_installed(self):
        proc = subprocess.run(
            [sys.executable, "-m", "gderive.cli", "check", "--algebra", "sl2"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["valid"] is True
