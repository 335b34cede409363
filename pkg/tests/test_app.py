import json

import pytest

from app import EXIT_ERROR, EXIT_FAIL, EXIT_PASS, main, parse_complex, run
from utils.exceptions import UsageError


def emitted(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def test_catalog_list(capsys):
    code, report = run(["catalog", "list"])
    assert code == EXIT_PASS
    assert [row["name"] for row in report["results"]["functions"]] == ["k", "f1", "f2", "f3"]
    assert emitted(capsys)["command"] == "catalog"


def test_catalog_show(capsys):
    code, report = run(["catalog", "show", "f2"])
    assert code == EXIT_PASS
    assert report["results"]["name"] == "f2"
    statuses = {m["label"]: m["status"] for m in report["results"]["memberships"]}
    assert statuses["U"] == "non-member"


def test_eval(capsys):
    code, report = run(["eval", "--function", "f1", "--z", "0,0.5"])
    assert code == EXIT_PASS
    assert report["results"]["value_re"] == pytest.approx(8 / 3)
    assert report["results"]["value_im"] == pytest.approx(0.0, abs=1e-12)
    assert report["results"]["route"] == "closed"


def test_eval_with_negative_point_and_route(capsys):
    _, report = run(["eval", "--function", "k", "--z=-0.5,0", "--route", "p"])
    assert report["results"]["value_re"] == pytest.approx(1 + 1.25 / 0.75)
    _, report = run(["eval", "--function", "f2", "--z", "0.24"])
    assert report["results"]["value_re"] == pytest.approx(1.985, abs=1e-3)


def test_eval_of_coefficient_file(tmp_path, capsys):
    path = tmp_path / "quadratic.json"
    path.write_text(json.dumps([[0, 0], [1, 0], [0.25, 0]]))
    code, report = run(["eval", "--function", str(path), "--z", "0.2,0"])
    assert code == EXIT_PASS
    assert report["results"]["function"] == "quadratic"
    assert report["results"]["route"] == "series"


def test_certify_violation_exits_one(capsys):
    code, report = run(["certify", "--function", "f2", "--class", "U"])
    assert code == EXIT_FAIL
    assert report["results"]["status"] == "violated"
    assert report["passed"] is False


def test_certify_with_bounds(capsys):
    code, report = run(["certify", "--function", "k", "--class", "S_star", "--bounds"])
    assert code == EXIT_PASS
    assert all(check["holds"] for check in report["results"]["growth"])
    assert all(check["holds"] for check in report["results"]["distortion"])


def test_certify_custom_grid(capsys):
    code, report = run(
        ["certify", "--function", "f2", "--class", "S_star_order", "--alpha", "0.5", "--grid-radii", "0.2", "0.6", "--angles", "128"]
    )
    assert code == EXIT_PASS
    assert report["results"]["grid"] == {"radii": [0.2, 0.6], "angles_per_circle": 128, "max_radius": 0.99}


def test_certify_univalence_is_an_error(capsys):
    code, report = run(["certify", "--function", "k", "--class", "S"])
    assert code == EXIT_ERROR
    assert report["error"]["code"] == "uncertifiable_class"
    assert emitted(capsys)["error"]["code"] == "uncertifiable_class"


def test_family_make(capsys):
    _, report = run(["family", "make", "--class", "S_star", "--omega", "monomial:1,1"])
    assert report["results"]["f_coeffs"][2] == pytest.approx([2.0, 0.0])
    _, report = run(["family", "make", "--class", "U", "--omega", "const:1", "--u1", "0,0"])
    coeffs = [c[0] for c in report["results"]["f_coeffs"][:6]]
    assert coeffs == pytest.approx([0, 1, 0, 1, 0, 1], abs=1e-12)


def test_family_make_rejects_uncentered_omega(capsys):
    code, report = run(["family", "make", "--class", "S_star", "--omega", "const:0.5"])
    assert code == EXIT_ERROR
    assert report["error"]["code"] == "omega_not_centered"


def test_scan_as_csv(capsys):
    code, _ = run(["scan", "--function", "k", "--radius", "0.5", "--csv"])
    assert code == EXIT_PASS
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "case,member_id,radius,min_ReD,angle"
    assert float(lines[1].split(",")[3]) == pytest.approx(1.6, abs=1e-9)


def test_radius_of_a_counterexample(capsys):
    code, report = run(["radius", "--function", "f3"])
    assert code == EXIT_PASS
    assert report["results"]["relation"] == "counterexample"
    assert report["results"]["positivity_radius"] <= 2**-0.5 + 1e-6


def test_verify_theorem(capsys):
    code, report = run(["verify-theorem", "--case", "iv", "--samples", "3"])
    assert code == EXIT_PASS
    assert report["results"]["passed"] is True
    assert report["results"]["case_radius"] == 0.5


def test_fault_injection_through_config(tmp_path, capsys):
    config = tmp_path / "toolkit.conf"
    config.write_text("# move case iv outward\nradius_override.iv = 0.8\n")
    code, report = run(["verify-theorem", "--case", "iv", "--samples", "3", "--config", str(config)])
    assert code == EXIT_FAIL
    assert report["results"]["failures"]


def test_flags_before_the_command_are_kept(capsys):
    _, report = run(["--seed", "7", "verify-theorem", "--case", "v", "--samples", "1"])
    assert report["config"]["settings"]["seed"] == 7
    assert report["results"]["seed"] == 7


def test_out_writes_a_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, _ = run(["eval", "--function", "k", "--z", "0.1,0", "--out", str(path)])
    assert code == EXIT_PASS
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text())["command"] == "eval"


def test_sharpness(capsys):
    code, report = run(["sharpness", "--case", "iii", "--budget", "100"])
    assert code == EXIT_PASS
    assert report["results"]["best_radius"] >= 2 / 3 - 1e-6


@pytest.mark.parametrize(
    "argv, code",
    [
        (["eval", "--z", "0,0.5"], "usage_error"),
        (["eval", "--function", "k", "--z", "one"], "usage_error"),
        (["eval", "--function", "f9", "--z", "0.1"], "unknown_function"),
        (["eval", "--function", "f2", "--z", "0.1", "--route", "phi"], "unsupported_route"),
        (["scan", "--function", "k", "--radius", "1.5"], "usage_error"),
        (["certify", "--function", "k", "--class", "T"], "usage_error"),
        (["eval", "--function", "k", "--z", "1,0"], "evaluation_out_of_range"),
        (["eval", "--function", "f1", "--z", "2,0"], "evaluation_out_of_range"),
        (["radius", "--function", "f3", "--tol", "0"], "usage_error"),
    ],
)
def test_errors_exit_two(argv, code, capsys):
    exit_code, report = run(argv)
    assert exit_code == EXIT_ERROR
    assert report["error"]["code"] == code


def test_zero_bisection_tolerance_in_config(tmp_path, capsys):
    config = tmp_path / "tight.conf"
    config.write_text("bisection_tol = 0\n")
    exit_code, report = run(["radius", "--function", "f3", "--config", str(config)])
    assert exit_code == EXIT_ERROR
    assert report["error"]["code"] == "usage_error"


def test_same_arguments_give_the_same_report(capsys):
    argv = ["verify-theorem", "--case", "ii", "--samples", "5", "--seed", "9"]
    payloads = []
    for _ in range(2):
        run(argv)
        report = emitted(capsys)
        report.pop("wall_time_s")
        payloads.append(json.dumps(report, sort_keys=True))
    assert payloads[0] == payloads[1]


def test_rewritten_coefficient_file_is_read_again(tmp_path, capsys):
    path = tmp_path / "poly.json"
    path.write_text(json.dumps([[0, 0], [1, 0], [0.25, 0]]))
    _, first = run(["eval", "--function", str(path), "--z", "0.2,0"])
    path.write_text(json.dumps([[0, 0], [1, 0], [0, 0]]))
    _, second = run(["eval", "--function", str(path), "--z", "0.2,0"])
    assert second["results"]["value_re"] == pytest.approx(2.0)
    assert first["results"]["value_re"] != pytest.approx(2.0)


def test_scan_with_a_nonpositive_minimum_exits_one(capsys):
    code, report = run(["scan", "--function", "f2", "--radius", "0.87"])
    assert code == EXIT_FAIL
    assert report["passed"] is False
    assert report["results"]["min_value"] < 0


def test_bad_config_key(tmp_path, capsys):
    config = tmp_path / "bad.conf"
    config.write_text("colour = blue\n")
    exit_code, report = run(["catalog", "list", "--config", str(config)])
    assert exit_code == EXIT_ERROR
    assert report["error"]["code"] == "config_error"


def test_main_returns_the_exit_code(capsys):
    assert main(["certify", "--function", "f2", "--class", "U"]) == EXIT_FAIL


def test_parse_complex():
    assert parse_complex("0.5") == 0.5
    assert parse_complex("-0.5,0.25") == complex(-0.5, 0.25)
    with pytest.raises(UsageError):
        parse_complex("1,2,3")
