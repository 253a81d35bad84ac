import json

from bdcluster.bd import BDPair, BDTriple, running_example_pair
from bdcluster.cli import main
from bdcluster.linalg import save_matrix
from bdcluster.verify import SamplePlan, sample_sl


def write_config(tmp_path, pair, name="pair.json"):
    p = tmp_path / name
    p.write_text(json.dumps(pair.to_config()))
    return str(p)


def single_root_pair_n3():
    return BDPair(BDTriple(3, {1}, {2}, {1: 2}), BDTriple.empty(3))


def periodic_pair_n3():
    return BDPair(BDTriple(3, {1}, {2}, {1: 2}), BDTriple(3, {2}, {1}, {2: 1}))


def test_validate_running_example(tmp_path, capsys):
    cfg = write_config(tmp_path, running_example_pair())
    assert main(["validate", "--config", cfg]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["aperiodic"] is True
    assert out["x_row_runs"] == [[1, 3], [4, 4], [5, 6], [7, 7]]


def test_paths_exit_codes(tmp_path, capsys):
    cfg = write_config(tmp_path, periodic_pair_n3())
    assert main(["paths", "--config", cfg]) == 1
    out = json.loads(capsys.readouterr().out)
    assert out["cycles"]

    cfg2 = write_config(tmp_path, running_example_pair(), "pair2.json")
    assert main(["paths", "--config", cfg2]) == 0
    out = json.loads(capsys.readouterr().out)
    assert sorted(out["paths"]) == sorted([
        "5 2 3- 4-", "2 5 1- 6-", "5- 2- 3 4", "2- 5- 6 1 4- 3- 4 3",
        "1 6", "6- 1-"])


def test_invalid_config_is_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"n": 3, "rows": {"gamma1": [1], "gamma2": [1],
                                              "map": {"1": 1}}, "cols": {}}))
    assert main(["validate", "--config", str(p)]) == 2


def test_graph_dot(tmp_path, capsys):
    cfg = write_config(tmp_path, single_root_pair_n3())
    assert main(["graph", "--config", cfg, "--dot"]) == 0
    out = capsys.readouterr().out
    assert "digraph" in out and "type=inclined" in out


def test_seed_json_round_trip_values(tmp_path, capsys):
    cfg = write_config(tmp_path, single_root_pair_n3())
    assert main(["seed", "--config", cfg]) == 0
    entries = json.loads(capsys.readouterr().out)
    assert len(entries) == 8
    by_key = {(e["i"], e["j"]): e for e in entries}
    assert by_key[(2, 1)]["degree"] == 2
    assert by_key[(1, 2)]["degree"] == 4
    assert by_key[(1, 2)]["subordinate_x_exits"] == [2]
    # re-ingest: block data determines the function values
    from bdcluster.blocks import seed_function
    from bdcluster.linalg import det, Mat
    Z = sample_sl(3, SamplePlan(master_seed=5), 0)
    e = by_key[(2, 1)]
    rows = [r - 1 for r in range(e["blocks"][0]["rows"][0], e["blocks"][0]["rows"][1] + 1)]
    f = seed_function(single_root_pair_n3(), 2, 1)
    assert f(Z) == det(Z.submatrix([1, 2], [0, 1]))


def test_quiver_json(tmp_path, capsys):
    cfg = write_config(tmp_path, single_root_pair_n3())
    assert main(["quiver", "--config", cfg, "--format", "json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert [2, 1] in out["mutable"]
    assert main(["quiver", "--config", cfg, "--format", "dot"]) == 0
    assert "digraph" in capsys.readouterr().out


def test_quiver_periodic_rejected(tmp_path, capsys):
    cfg = write_config(tmp_path, periodic_pair_n3())
    assert main(["quiver", "--config", cfg]) == 2


def test_hmap_and_bracket_point(tmp_path, capsys):
    pair = single_root_pair_n3()
    cfg = write_config(tmp_path, pair)
    from bdcluster.poissonmap import h_maps
    from bdcluster.blocks import all_seed_functions
    funcs = all_seed_functions(pair)

    def ok(U):
        h_maps(pair, U)
        return all(f(U) != 0 for f in funcs.values())

    U = sample_sl(3, SamplePlan(master_seed=7), 0, predicate=ok)
    point = tmp_path / "U.json"
    save_matrix(U, point)
    assert main(["hmap", "--config", cfg, "--point", str(point)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert set(out) == {"U", "H_r", "H_c", "h_of_U"}

    assert main(["bracket", "--config", cfg, "--point", str(point)]) == 0
    text = capsys.readouterr().out
    assert text.startswith("i,j,k,l,log_bracket")
    assert len(text.strip().splitlines()) == 1 + 8 * 7 // 2


def test_verify_cli_small(tmp_path, capsys):
    cfg = write_config(tmp_path, single_root_pair_n3())
    assert main(["verify", "--config", cfg, "--suite", "bts,seaweed_inverse",
                 "--trials", "2", "--seed", "3"]) == 0
    reports = json.loads(capsys.readouterr().out)
    assert [r["name"] for r in reports] == ["bts", "seaweed_inverse"]
    assert all(r["passed"] for r in reports)
