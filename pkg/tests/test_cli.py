"""CLI surface: subcommands, formats, exit codes, determinism."""

import json

from koszul.cli import main
from koszul.subspaces import weyman_K


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_hilbert_weyman_csv(capsys):
    code, out, err = run(capsys, ["hilbert", "--weyman", "6", "--format", "csv"])
    assert code == 0 and err == ""
    lines = out.strip().splitlines()
    assert lines[0] == "q,dim_Wq,bound,certified"
    assert lines[1:] == ["0,6,6,true", "1,16,16,true", "2,21,21,true", "3,0,0,true"]


def test_hilbert_table_truncates_tail(capsys):
    code, out, _ = run(capsys, ["hilbert", "--heisenberg", "2", "--q-max", "4"])
    assert code == 0
    assert "dim_Wq = 0 for all q >= 1 (certified)" in out
    # derived rows are folded into the tail line
    assert "  3  0" not in out


def test_hilbert_json_roundtrip(capsys):
    code, out, _ = run(capsys, ["hilbert", "--weyman", "5", "--format", "json"])
    assert code == 0
    data = json.loads(out)
    assert [r["dim"] for r in data["records"]] == [3, 5, 0]
    assert data["vanishing_degree"] == 2


def test_hilbert_zero_profile(capsys):
    # the zero subspace: dimensions are exact (empty restriction), and the
    # reference bound column is informational only (resonance never vanishes)
    code, out, _ = run(capsys, ["hilbert", "--zero", "4", "--q-max", "3", "--format", "csv"])
    assert code == 0
    assert out.strip().splitlines()[1:] == ["0,6,1,true", "1,20,0,true", "2,45,0,true", "3,84,0,true"]


def test_resonance_heisenberg(capsys):
    code, out, _ = run(capsys, ["resonance", "--heisenberg", "2"])
    assert code == 0
    assert "resonance vanishes (certified" in out


def test_resonance_json(capsys):
    code, out, _ = run(capsys, ["resonance", "--zero", "4", "--format", "json"])
    assert code == 0
    data = json.loads(out)
    assert data["vanishes"] is False
    assert data["certificate"]["certified_exact"] is True


def test_k_file_input(tmp_path, capsys):
    path = tmp_path / "k.json"
    path.write_text(json.dumps(weyman_K(5).to_json()))
    code, out, _ = run(capsys, ["hilbert", "--k-file", str(path), "--format", "csv"])
    assert code == 0
    assert out.strip().splitlines()[1:] == ["0,3,3,true", "1,5,5,true", "2,0,0,true"]


def test_group_torelli(capsys):
    code, out, _ = run(capsys, ["group", "--preset", "torelli", "--g", "12"])
    assert code == 0
    assert "b1 = 2000" in out
    assert "vnc(G/G'') <= 1998" in out


def test_group_b1_json(capsys):
    code, out, _ = run(capsys, ["group", "--b1", "5", "--format", "json"])
    assert code == 0
    data = json.loads(out)
    assert data["growth_bound"] == 26
    assert data["conditions"]["vnc_bound"]


def test_group_free_table(capsys):
    code, out, _ = run(capsys, ["group", "--preset", "free", "--n", "3", "--q-max", "4", "--format", "csv"])
    assert code == 0
    assert out.strip().splitlines() == ["q,theta_q", "1,3", "2,3", "3,8", "4,15"]


def test_group_arrangement(capsys):
    code, out, _ = run(capsys, ["group", "--preset", "arrangement", "--h", "0,2", "--q", "3", "--format", "csv"])
    assert code == 0
    assert out.strip().splitlines() == ["q,theta_q", "3,16"]


def test_selfcheck(capsys):
    code, out, _ = run(capsys, ["selfcheck"])
    assert code == 0
    assert "0 failed" in out
    assert out.count("ok   ") == 9


def test_exit_code_invalid_input(capsys):
    code, out, err = run(capsys, ["resonance", "--heisenberg", "1"])
    assert code == 2
    payload = json.loads(err)
    assert payload["error"] == "InvalidInputError"


def test_exit_code_usage(capsys):
    code, _, err = run(capsys, ["hilbert"])  # missing K source
    assert code == 2
    assert json.loads(err)["error"] == "usage"


def test_exit_code_resource(capsys):
    # rational field forced with a tiny oracle cap: resource failure
    code, _, err = run(
        capsys,
        ["hilbert", "--weyman", "6", "--field", "rational", "--oracle-cap", "3"],
    )
    assert code == 1
    assert json.loads(err)["error"] == "ResourceLimitError"


def test_determinism_across_threads(capsys):
    _, out1, _ = run(capsys, ["hilbert", "--random", "5", "7", "11", "--format", "json"])
    _, out2, _ = run(capsys, ["hilbert", "--random", "5", "7", "11", "--format", "json", "--threads", "2"])
    assert out1 == out2


def test_env_primes_override(capsys, monkeypatch):
    monkeypatch.setenv("KOSZUL_PRIMES", "101")
    code, out, _ = run(capsys, ["hilbert", "--weyman", "4", "--format", "json"])
    assert code == 0
    assert json.loads(out)["records"][0]["certificate"]["primes"] == [101]
    # flags beat the environment
    code, out, _ = run(capsys, ["hilbert", "--weyman", "4", "--format", "json", "--primes", "103"])
    assert json.loads(out)["records"][0]["certificate"]["primes"] == [103]


def test_env_bad_primes(capsys, monkeypatch):
    monkeypatch.setenv("KOSZUL_PRIMES", "15")
    code, _, err = run(capsys, ["hilbert", "--weyman", "4"])
    assert code == 2
    assert json.loads(err)["error"] == "InvalidInputError"


def test_cache_flag(tmp_path, capsys):
    cachedir = tmp_path / "cache"
    args = ["hilbert", "--weyman", "5", "--cache", str(cachedir), "--format", "csv"]
    code1, out1, _ = run(capsys, args)
    assert code1 == 0
    assert (cachedir / "rank-cache.jsonl").exists()
    code2, out2, _ = run(capsys, args)
    assert out1 == out2
