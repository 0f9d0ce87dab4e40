import csv
import json
import math

import numpy as np
import pytest

from ballvol import (Form, GramMatrix, ball_form, form_from_dict, form_to_dict,
                     gram_from_dict, gram_to_dict, load_form, load_gram,
                     rescaled_from_monomial, save_form, save_gram)
from ballvol.cli import main

rng = np.random.default_rng(31337)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_form_round_trip_both_bases(tmp_path):
    f = Form(2, 4, rng.standard_normal(5))
    for basis in ("rescaled", "monomial"):
        path = tmp_path / f"f_{basis}.json"
        save_form(f, path, basis=basis)
        g = load_form(path)
        np.testing.assert_allclose(g.coeffs, f.coeffs, rtol=1e-14, atol=1e-15)


def test_form_dict_omits_zero_terms():
    obj = form_to_dict(ball_form(2, 4))
    assert {tuple(t["alpha"]) for t in obj["terms"]} == {(4, 0), (2, 2), (0, 4)}


def test_monomial_basis_converted_on_load():
    obj = {"n": 2, "d": 2, "basis": "monomial",
           "terms": [{"alpha": [1, 1], "coeff": 2.0}]}
    f = form_from_dict(obj)
    # 2xy has rescaled coefficient 2/sqrt(2) = sqrt(2)
    np.testing.assert_allclose(f.coeffs, [0.0, math.sqrt(2.0), 0.0])


def test_form_dict_validation():
    with pytest.raises(ValueError):
        form_from_dict({"n": 2, "d": 2, "basis": "chebyshev", "terms": []})
    with pytest.raises(ValueError):
        form_from_dict({"n": 2, "d": 2, "basis": "rescaled",
                        "terms": [{"alpha": [3, 0], "coeff": 1.0}]})
    with pytest.raises(ValueError):
        form_from_dict({"n": 2, "basis": "rescaled", "terms": []})


def test_gram_round_trip(tmp_path):
    A = rng.standard_normal((3, 3))
    G = GramMatrix(2, 4, A + A.T)
    path = tmp_path / "g.json"
    save_gram(G, path)
    H = load_gram(path)
    np.testing.assert_allclose(H.entries, G.entries, rtol=1e-15)


def test_gram_dict_validation():
    with pytest.raises(ValueError):
        gram_from_dict({"n": 2, "d": 4, "order": "lex", "rows": np.eye(3).tolist()})
    with pytest.raises(ValueError):
        gram_from_dict({"n": 2, "d": 4, "order": "graded-lex",
                        "rows": [[1, 2, 0], [0, 1, 0], [0, 0, 1]]})


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def run_cli(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(args + ["--out", str(out)])
    return code, out.read_bytes()


def test_cli_volume_ball(tmp_path):
    code, raw = run_cli(["volume", "--builtin", "ball", "--n", "2", "--d", "2",
                         "--samples", "20000"], tmp_path)
    assert code == 0
    rep = json.loads(raw)
    assert abs(rep["value"] - math.pi) < 1e-9


def test_cli_volume_powers(tmp_path):
    code, raw = run_cli(["volume", "--builtin", "powers", "--n", "2", "--d", "4",
                         "--samples", "200000"], tmp_path)
    assert code == 0
    rep = json.loads(raw)
    exact = (2 * math.gamma(1.25)) ** 2 / math.gamma(1.5)
    assert abs(rep["value"] - exact) < max(3 * rep["std_error"], 1e-3)


def test_cli_volume_infinite_exit_3(tmp_path):
    f = rescaled_from_monomial(2, 2, np.array([1.0, 0.0, -1.0]))
    path = tmp_path / "indef.json"
    save_form(f, path)
    code, raw = run_cli(["volume", "--in", str(path)], tmp_path)
    assert code == 3
    assert json.loads(raw)["value"] == "inf"


def test_cli_malformed_input_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["volume", "--in", str(bad)]) == 2
    assert main(["volume"]) == 2  # neither --in nor --builtin
    good = tmp_path / "f.json"
    save_form(ball_form(2, 4), good)
    # schatten norm needs a Gram file
    assert main(["norm", "--in", str(good), "--kind", "schatten", "--p", "2"]) == 2
    assert main(["norm", "--in", str(good), "--kind", "lp"]) == 2  # missing --p


def test_cli_norm_values(tmp_path):
    fpath = tmp_path / "b42.json"
    save_form(ball_form(2, 4), fpath)
    code, raw = run_cli(["norm", "--in", str(fpath), "--kind", "bombieri"],
                        tmp_path)
    assert code == 0
    assert abs(json.loads(raw)["value"] - math.sqrt(8 / 3)) < 1e-12

    gpath = tmp_path / "id3.json"
    save_gram(GramMatrix(2, 4, np.eye(3)), gpath)
    code, raw = run_cli(["norm", "--in", str(gpath), "--kind", "schatten",
                         "--p", "2"], tmp_path)
    assert abs(json.loads(raw)["value"] - math.sqrt(3)) < 1e-12

    # lp norm of the degree-2 ball in three variables: full surface area 4 pi
    bpath = tmp_path / "b23.json"
    save_form(ball_form(3, 2), bpath)
    code, raw = run_cli(["norm", "--in", str(bpath), "--kind", "lp", "--p", "1",
                         "--samples", "5000"], tmp_path)
    assert abs(json.loads(raw)["value"] - 4 * math.pi) < 1e-9


def test_cli_optimize_reports_distance(tmp_path):
    code, raw = run_cli(["optimize", "--norm", "bombieri", "--n", "2", "--d",
                         "4", "--iters", "25", "--samples", "6000"], tmp_path)
    assert code == 0
    rep = json.loads(raw)
    assert abs(rep["final_objective"] - rep["theoretical_opt"]) < 0.05
    assert rep["distance_to_scaled_ball"] < 0.05
    assert len(rep["trace"]) == 25


def test_cli_optimize_trace_csv(tmp_path):
    trace_path = tmp_path / "trace.csv"
    code, raw = run_cli(["optimize", "--sos", "--p", "inf", "--n", "2", "--d",
                         "2", "--iters", "8", "--samples", "4000",
                         "--trace-out", str(trace_path)], tmp_path)
    assert code == 0
    rep = json.loads(raw)
    with open(trace_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["iter", "objective", "step", "residual"]
    assert len(rows) == 9
    # CSV and JSON carry the same numbers
    for row, (k, obj, step) in zip(rows[1:], rep["trace"]):
        assert int(row[0]) == k
        assert float(row[1]) == obj
        assert float(row[2]) == step


def test_cli_optimize_zero_budget_exit_2(tmp_path):
    assert main(["optimize", "--norm", "bombieri", "--n", "2", "--d", "4",
                 "--iters", "0"]) == 2
    assert main(["optimize", "--sos", "--n", "2", "--d", "4"]) == 2  # no --p
    assert main(["optimize", "--n", "2", "--d", "4"]) == 2  # no program


def test_cli_verify_single_cell(tmp_path):
    code, raw = run_cli(["verify", "--norm", "bombieri", "--n", "2", "--d", "4",
                         "--trials", "40", "--samples", "3000"], tmp_path)
    assert code == 0
    rep = json.loads(raw)
    assert rep["passed"]
    assert rep["cells"][0]["min_ratio"] >= 0.999


def test_cli_verify_fault_injection_exit_4(tmp_path):
    code, raw = run_cli(["verify", "--norm", "bombieri", "--n", "2", "--d", "4",
                         "--trials", "40", "--samples", "3000",
                         "--opt-scale", "1.1"], tmp_path)
    assert code == 4
    assert not json.loads(raw)["passed"]


def test_cli_reports_byte_identical(tmp_path):
    args = ["verify", "--norm", "schatten", "--p", "2", "--n", "2", "--d", "2",
            "--trials", "25", "--samples", "2000"]
    _, a = run_cli(args, tmp_path, "a.json")
    _, b = run_cli(args, tmp_path, "b.json")
    assert a == b


def test_cli_csv_json_same_numbers(tmp_path):
    args = ["volume", "--builtin", "ball", "--n", "2", "--d", "4",
            "--samples", "5000", "--seed", "9"]
    _, raw_json = run_cli(args + ["--format", "json"], tmp_path, "r.json")
    _, raw_csv = run_cli(args + ["--format", "csv"], tmp_path, "r.csv")
    rep = json.loads(raw_json)
    rows = list(csv.reader(raw_csv.decode().splitlines()))
    rec = dict(zip(rows[0], rows[1]))
    assert float(rec["value"]) == rep["value"]
    assert float(rec["std_error"]) == rep["std_error"]
