import numpy as np
import pytest

from rdsym.cli import main
from rdsym.config import builtin_config_names, load_config, parse_config_text, simulation_from
from rdsym.errors import ConfigError
from rdsym.io import read_snapshots

SMALL = """
[meta]
name = small

[system]
form = cubic
phi1 = 1
phi2 = -1

[grid]
nx = {nx}

[time]
t0 = 0.1
t_end = 0.11
dt = 1e-3
stride = 5

[initial]
kind = exact

[boundary]
kind = exact

[exact]
case = 1
a = 1
b = -1
k1 = 1

[output]
csv = small.csv
"""


def write_cfg(tmp_path, text, name="run.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(*argv):
    return main([str(a) for a in argv])


def header_and_rows(path):
    lines = path.read_text().splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    return comments, body


# -- config parsing --------------------------------------------------------------


def test_builtin_configs():
    assert {"paper_eq8", "manufactured_case1"} <= set(builtin_config_names())
    cfg = simulation_from(load_config("paper_eq8"))
    assert cfg.grid.nx == 101 and cfg.system.form == "exp-coupled"
    assert "IC/BC not from paper" in cfg.metadata["note"]


def test_unknown_key_has_line_number():
    with pytest.raises(ConfigError) as info:
        parse_config_text("[grid]\nnx = 5\n\nmesh = 3\n")
    assert "line 4" in str(info.value) and "grid.mesh" in str(info.value)


@pytest.mark.parametrize("text", ["[bogus]\n", "nx = 3\n", "[grid]\njunk\n", "[grid]\nnx = 3\nnx = 4\n"])
def test_malformed_configs(text):
    with pytest.raises(ConfigError):
        parse_config_text(text)


def test_bad_number_names_field():
    cfg = parse_config_text(SMALL.format(nx="many"))
    with pytest.raises(ConfigError, match="grid.nx"):
        simulation_from(cfg)


def test_missing_config():
    with pytest.raises(ConfigError):
        load_config("no_such_config_anywhere")


# -- simulate --------------------------------------------------------------------


def test_simulate_nx2_exits_1(tmp_path, capsys):
    assert run("simulate", "--config", write_cfg(tmp_path, SMALL.format(nx=2)), "--out", tmp_path) == 1
    assert "nx" in capsys.readouterr().err


def test_simulate_needs_config(tmp_path):
    assert run("simulate", "--out", tmp_path) == 1


def test_simulate_writes_csv_and_two_plots(tmp_path):
    cfg = write_cfg(tmp_path, SMALL.format(nx=11))
    out = tmp_path / "out"
    assert run("simulate", "--config", cfg, "--out", out, "--plot") == 0
    assert sorted(p.name for p in out.glob("*.svg")) == ["small_U.svg", "small_V.svg"]
    _, body = header_and_rows(out / "small.csv")
    assert body[0] == "t,x,U,V"
    assert len(body) == 1 + 11 * 3


def test_global_flags_before_subcommand(tmp_path):
    cfg = write_cfg(tmp_path, SMALL.format(nx=11))
    assert run("--config", cfg, "--out", tmp_path, "simulate") == 0
    assert (tmp_path / "small.csv").exists()


def test_simulate_byte_identical(tmp_path):
    cfg = write_cfg(tmp_path, SMALL.format(nx=11))
    for d in ("a", "b"):
        assert run("simulate", "--config", cfg, "--out", tmp_path / d, "--plot") == 0
    for name in ("small.csv", "small_U.svg", "small_V.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_shipped_experiment_blow_up_exit(tmp_path, capsys):
    codes, files = [], []
    for i in range(2):
        codes.append(run("simulate", "--config", "paper_eq8", "--out", tmp_path / str(i)))
        files.append((tmp_path / str(i) / "paper_eq8.csv").read_bytes())
    assert codes[0] in (0, 2) and codes[0] == codes[1]
    assert files[0] == files[1]
    comments, _ = header_and_rows(tmp_path / "0" / "paper_eq8.csv")
    assert any("IC/BC not from paper" in c for c in comments)
    if codes[0] == 2:
        assert "blow-up at t=" in capsys.readouterr().err
        assert any(c.startswith("# blow-up at t=") for c in comments)


# -- exact -----------------------------------------------------------------------


def test_exact_case1(tmp_path):
    assert run("exact", "--case", 1, "--a", 1, "--b", -1, "--k1", 1, "--t-start", 0.1,
               "--t-end", 0.5, "--out", tmp_path) == 0
    assert (tmp_path / "exact_case1.csv").exists()


def test_exact_pole_window(tmp_path, capsys):
    assert run("exact", "--case", 1, "--t-start", 0.0, "--t-end", 0.5, "--out", tmp_path) == 2
    assert "m=0" in capsys.readouterr().err
    assert not (tmp_path / "exact_case1.csv").exists()


def test_exact_case2_zero_linear_part(tmp_path):
    assert run("exact", "--case", 2, "--a", 1, "--out", tmp_path) == 0
    data = read_snapshots(tmp_path / "exact_case2.csv")
    assert np.all(data[:, 3] == 0.0)


def test_exact_rejects_bad_sign(tmp_path):
    assert run("exact", "--case", 1, "--b", 1, "--out", tmp_path) == 1


def test_exact_and_simulate_schema_identical(tmp_path):
    cfg = write_cfg(tmp_path, SMALL.format(nx=11))
    assert run("simulate", "--config", cfg, "--out", tmp_path) == 0
    assert run("exact", "--config", cfg, "--nt", 3, "--out", tmp_path) == 0
    sim = read_snapshots(tmp_path / "small.csv")
    ex = read_snapshots(tmp_path / "exact_case1.csv")
    assert sim.shape == ex.shape
    np.testing.assert_array_equal(sim[:, :2], ex[:, :2])
    # first snapshot is the initial condition, sampled from the same closed form
    np.testing.assert_array_equal(sim[:11], ex[:11])
    # nx=11 is coarse; only a sanity bound here
    assert np.max(np.abs(sim[:, 2:] - ex[:, 2:])) < 2e-2


# -- verify / reduce / convergence -------------------------------------------------


def test_verify_elliptic(tmp_path, capsys):
    assert run("verify", "elliptic", "--out", tmp_path) == 0
    out = capsys.readouterr().out
    assert "PASS  elliptic     max|sn^2+cn^2-1|" in out
    assert (tmp_path / "verify_elliptic.csv").exists()


def test_verify_reduction_is_informational(tmp_path, capsys):
    assert run("verify", "reduction", "--out", tmp_path) == 0
    assert "inconsistent" in capsys.readouterr().out


def test_verify_seed_changes_sampling(tmp_path):
    run("verify", "symmetry", "--seed", 1, "--out", tmp_path / "a")
    run("verify", "symmetry", "--seed", 2, "--out", tmp_path / "b")
    a = (tmp_path / "a" / "verify_symmetry.csv").read_text()
    b = (tmp_path / "b" / "verify_symmetry.csv").read_text()
    assert a != b


def test_reduce_cubic(tmp_path):
    assert run("reduce", "--system", "eq12", "--phi1", 1, "--h", 0.01, "--out", tmp_path) == 0
    text = (tmp_path / "reduce_eq12.csv").read_text().splitlines()
    assert text[1] == "z,y1,y2,y3,y4,energy"
    assert len(text) == 2 + 301


def test_reduce_lie_variants(tmp_path, capsys):
    assert run("reduce", "--system", "eq7-printed", "--phi1", 0.5, "--phi2", 1.5, "--out", tmp_path) == 0
    assert run("reduce", "--system", "eq7-derived", "--phi1", 0.5, "--phi2", 1.5, "--out", tmp_path) == 2
    assert "reduction-not-closed" in capsys.readouterr().err
    assert run("reduce", "--system", "eq7-derived", "--phi1", 0, "--phi2", 1.5, "--ln-sign", 1,
               "--out", tmp_path) == 0


def test_reduce_bad_y0(tmp_path):
    assert run("reduce", "--y0", "1,2", "--out", tmp_path) == 1
    assert run("reduce", "--y0", "a,b,c,d", "--out", tmp_path) == 1


def test_convergence_command(tmp_path, capsys):
    assert run("convergence", "--grids", "11,21,41", "--out", tmp_path) == 0
    lines = (tmp_path / "convergence.csv").read_text().splitlines()
    assert lines[0] == "nx,dx,dt,max_error,observed_order"
    assert len(lines) == 4
    assert run("convergence", "--grids", "11,20,41", "--out", tmp_path) == 1
