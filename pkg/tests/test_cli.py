"""End-to-end checks of the command line interface (in-process)."""

import json

import pytest

from fingeo.cli import main
from fingeo.incidence import IncidenceStructure


def run(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr().out
    pairs = {}
    for line in out.strip().splitlines():
        if "=" in line:
            k, v = line.split("=", 1)
            pairs[k] = v
    return rc, pairs


def test_build_x_counts(capsys):
    rc, got = run(["build", "x", "--n", "1", "--t", "2", "--q", "2"], capsys)
    assert rc == 0
    assert got["kind"] == "x"
    assert got["points"] == "16"
    assert got["lines"] == "12"
    assert got["flags"] == "48"


def test_build_coset_direction_report(capsys):
    rc, got = run(["build", "coset", "--n", "1", "--t", "2", "--q", "3"], capsys)
    assert rc == 0
    assert got["points"] == "81"
    assert got["lines"] == "36"
    assert got["direction_count"] == "4"
    assert got["pencil_formula"] == "4"
    assert got["variant_formula"] == "1"
    assert got["variant_matches"] == "false"


def test_build_linrep_subgeometry(capsys):
    rc, got = run(
        ["build", "linrep", "--n", "1", "--field", "2^2/x2+x+1", "--infinity", "sub"],
        capsys,
    )
    assert rc == 0
    assert got["points"] == "16"
    assert got["lines"] == "12"


def test_build_genlinrep(capsys):
    rc, got = run(["build", "genlinrep", "--n", "1", "--t", "2", "--q", "2"], capsys)
    assert rc == 0
    assert got["points"] == "16"
    assert got["lines"] == "20"
    rc, got = run(
        ["build", "genlinrep", "--n", "1", "--t", "2", "--q", "2", "--k", "sub"],
        capsys,
    )
    assert rc == 0
    assert got["lines"] == "12"


def test_build_out_json_roundtrip(tmp_path, capsys):
    path = tmp_path / "x.json"
    rc, got = run(
        ["build", "x", "--n", "1", "--t", "2", "--q", "2", "--out", str(path)], capsys
    )
    assert rc == 0
    assert got["wrote"] == str(path)
    obj = json.loads(path.read_text())
    struct = IncidenceStructure.from_json_obj(obj)
    assert struct.n_points == 16 and struct.n_lines == 12


def test_build_dimacs_and_reexport(tmp_path, capsys):
    d1 = tmp_path / "a.dimacs"
    j1 = tmp_path / "a.json"
    rc, _ = run(
        [
            "build", "coset", "--n", "1", "--t", "2", "--q", "2",
            "--out", str(j1), "--dimacs", str(d1),
        ],
        capsys,
    )
    assert rc == 0
    struct = IncidenceStructure.from_json_obj(json.loads(j1.read_text()))
    assert d1.read_bytes() == struct.incidence_dimacs().encode()


def test_export_pointgraph_dimacs_header(tmp_path, capsys):
    path = tmp_path / "g.dimacs"
    rc, _ = run(
        [
            "export", "pointgraph", "--of", "x", "--n", "1", "--t", "2",
            "--q", "2", "--format", "dimacs", "--out", str(path),
        ],
        capsys,
    )
    assert rc == 0
    assert path.read_text().splitlines()[0] == "p edge 16 72"


def test_export_cayley_json_matches_pointgraph(tmp_path, capsys):
    p1 = tmp_path / "cayley.json"
    p2 = tmp_path / "pg.json"
    rc, _ = run(
        ["export", "cayley", "--n", "1", "--t", "2", "--q", "2", "--out", str(p1)],
        capsys,
    )
    assert rc == 0
    rc, _ = run(
        [
            "export", "pointgraph", "--of", "coset", "--n", "1", "--t", "2",
            "--q", "2", "--out", str(p2),
        ],
        capsys,
    )
    assert rc == 0
    g1 = json.loads(p1.read_text())
    g2 = json.loads(p2.read_text())
    assert g1["n"] == g2["n"] == 16
    assert sorted(map(tuple, g1["edges"])) == sorted(map(tuple, g2["edges"]))


def test_verify_iso_x_coset(capsys):
    rc, got = run(["verify", "iso-x-coset", "--n", "1", "--t", "2", "--q", "2"], capsys)
    assert rc == 0
    assert got["ok"] == "true"
    assert got["flags"] == "48"


def test_verify_iso_coset_linrep(capsys):
    rc, got = run(
        ["verify", "iso-coset-linrep", "--n", "1", "--t", "2", "--q", "3"], capsys
    )
    assert rc == 0
    assert got["ok"] == "true"
    assert got["points"] == "81"


def test_verify_barlotti(capsys):
    rc, got = run(["verify", "barlotti", "--n", "1", "--t", "2", "--q", "2"], capsys)
    assert rc == 0
    assert got["ok"] == "true"
    assert got["target_matches_independent_build"] == "true"


def test_verify_orders(capsys):
    rc, got = run(["verify", "orders", "--n", "2", "--t", "2", "--q", "2"], capsys)
    assert rc == 0
    assert got["ok"] == "true"
    assert got["stab_pi"] == "64512"
    assert got["segre_equals_pi"] == "true"
    assert got["pi_equals_geometric_times_ratio"] == "true"
    assert got["operator_mod_kernel_equals_pi"] == "true"


def test_verify_brute(capsys):
    rc, got = run(["verify", "brute", "--n", "1", "--t", "2", "--q", "2"], capsys)
    assert rc == 0
    assert got["brute_order"] == "576"
    assert got["formula_order"] == "576"


def test_verify_srg(capsys):
    rc, got = run(["verify", "srg", "--n", "1", "--t", "2", "--q", "2"], capsys)
    assert rc == 0
    assert (got["v"], got["k"], got["lam"], got["mu"]) == ("16", "9", "4", "6")


def test_verify_closure(capsys):
    rc, got = run(["verify", "closure", "--q", "4"], capsys)
    assert rc == 0
    assert got["closure_size"] == "7"
    assert got["idempotent"] == "true"


def test_verify_property_star_random_passes(capsys):
    rc, got = run(
        ["verify", "property-star", "--fixture", "random", "--q", "3", "--seed", "7"],
        capsys,
    )
    assert rc == 0
    assert got["ok"] == "true"


def test_verify_property_star_counterexample_exit_1(capsys):
    rc, got = run(
        ["verify", "property-star", "--fixture", "two-lines", "--q", "3"], capsys
    )
    assert rc == 1
    assert got["ok"] == "false"
    plane = json.loads(got["witness_plane"])
    assert len(plane) == 3 and all(len(row) == 3 for row in plane)


def test_verify_property_star_punctured_fixture(capsys):
    rc, got = run(
        ["verify", "property-star", "--fixture", "two-lines-minus-point", "--q", "4"],
        capsys,
    )
    assert rc == 1
    assert got["ok"] == "false"


def test_usage_error_exit_2_bad_n(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["build", "x", "--n", "0", "--t", "2", "--q", "2"])
    assert exc.value.code == 2


def test_usage_error_exit_2_bad_q(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["build", "x", "--n", "1", "--t", "2", "--q", "6"])
    assert exc.value.code == 2


def test_usage_error_exit_2_bad_format(capsys):
    with pytest.raises(SystemExit) as exc:
        main(
            ["export", "cayley", "--n", "1", "--t", "2", "--q", "2",
             "--format", "xml"]
        )
    assert exc.value.code == 2


def test_budget_exit_3(capsys):
    rc = main(["build", "x", "--n", "1", "--t", "2", "--q", "2", "--budget", "5"])
    assert rc == 3
    err = capsys.readouterr().err
    assert err.startswith("budget_exceeded=")
