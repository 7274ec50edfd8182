"""Config parsing, command dispatch, CSV emission and report determinism."""

from __future__ import annotations

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from abeltheta.cli import Config, fmt_complex, main, parse_config, run_command
from abeltheta.errors import ParseError, UnknownCommand, ValidationError

ELLIPTIC = '{n: 1, delta: [2], Z_re: [[0.0]], Z_im: [[1.0]], nodes: 16, seed: 42}'


def run_cli(args, env_extra=None):
    env = os.environ.copy()
    if env_extra:
        env.update(env_extra)
    return subprocess.run([sys.executable, "-m", "abeltheta.cli", *args],
                          capture_output=True, text=True, env=env)


def test_parse_valid_elliptic():
    cfg = parse_config('{n: 1, delta: [1], Z_re: [[0]], Z_im: [[1]]}')
    assert cfg.period.Z[0, 0] == 1j
    assert cfg.eps == 1e-12  # default applied
    assert cfg.nodes == 32
    assert cfg.seed == 42


def test_parse_strict_json_also_accepted():
    cfg = parse_config('{"delta": [2], "Z_im": [[1.0]], "eps": 1e-10}')
    assert cfg.eps == 1e-10
    assert cfg.delta == (2,)


def test_parse_rejections():
    with pytest.raises(ParseError):
        parse_config('{delta: [1], Z_im: [[1]]')  # unbalanced
    with pytest.raises(ValidationError) as err:
        parse_config('{n: 1, delta: [1], Z_im: [[-1]]}')
    assert err.value.field == "Z"
    assert "NotPositiveDefinite" in str(err.value)
    with pytest.raises(ValidationError) as err:
        parse_config('{delta: [2, 3], Z_im: [[1, 0], [0, 1]]}')
    assert err.value.field == "delta"
    with pytest.raises(ValidationError):
        parse_config('{delta: [1], Z_im: [[1]], eps: 0.5}')  # eps > 1e-2
    with pytest.raises(ValidationError):
        parse_config('{delta: [1], Z_im: [[1]], nodes: 2}')
    with pytest.raises(ValidationError):
        parse_config('{delta: [1], Z_im: [[1]], bogus: 1}')
    with pytest.raises(ValidationError):
        parse_config('{n: 2, delta: [1], Z_im: [[1]]}')


def test_parse_from_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(ELLIPTIC, encoding="utf-8")
    cfg = parse_config(path)
    assert cfg.nodes == 16


def test_unknown_command():
    cfg = parse_config(ELLIPTIC)
    with pytest.raises(UnknownCommand):
        run_command("frobnicate", cfg, None)


def test_complex_csv_format_round_trips():
    s = fmt_complex(1.25 - 0.5j)
    assert s == "1.25-0.5i"
    val = complex(s.replace("i", "j"))
    assert val == 1.25 - 0.5j
    assert fmt_complex(0.1 + 0.2j).endswith("i")


def test_eval_command_and_out_of_range(tmp_path):
    cfgfile = tmp_path / "c.json"
    cfgfile.write_text(ELLIPTIC, encoding="utf-8")
    res = run_cli(["eval", "--config", str(cfgfile), "--m", "1", "--z-re", "0.25", "--z-im", "0.0"])
    assert res.returncode == 0
    assert "theta_m(z)" in res.stdout
    res = run_cli(["eval", "--config", str(cfgfile), "--m", "5"])
    assert res.returncode == 2
    assert "characteristic out of range" in res.stderr


def test_gram_command_csv_golden(tmp_path):
    cfgfile = tmp_path / "c.json"
    cfgfile.write_text(ELLIPTIC, encoding="utf-8")
    out = tmp_path / "gram.csv"
    res = run_cli(["gram", "--config", str(cfgfile), "--mu-re", "0", "--mu-im", "0",
                   "--out", str(out)])
    assert res.returncode == 0
    lines = out.read_text().strip().splitlines()
    assert lines[1].startswith("m,(0),(1)")
    row0 = lines[2].split(",")
    row1 = lines[3].split(",")
    d0 = complex(row0[1].replace("i", "j"))
    d1 = complex(row1[2].replace("i", "j"))
    assert d0.real == pytest.approx(math.sqrt(2.0), rel=1e-8)
    assert d1.real == pytest.approx(math.sqrt(2.0) * math.exp(math.pi / 2.0), rel=1e-8)
    off = complex(row0[2].replace("i", "j"))
    assert abs(off) < 1e-8 * d1.real


def test_curvature_command(tmp_path):
    cfgfile = tmp_path / "c.json"
    cfgfile.write_text(ELLIPTIC, encoding="utf-8")
    res = run_cli(["curvature", "--config", str(cfgfile)])
    assert res.returncode == 0
    assert "chern numbers: E' = -4, E = -1" in res.stdout
    assert "result: PASS" in res.stdout


def test_verify_exit_code_and_determinism(tmp_path):
    cfgfile = tmp_path / "c.json"
    cfgfile.write_text(ELLIPTIC, encoding="utf-8")
    first = run_cli(["verify", "--config", str(cfgfile)], {"ABELTHETA_THREADS": "1"})
    second = run_cli(["verify", "--config", str(cfgfile)], {"ABELTHETA_THREADS": "1"})
    assert first.returncode == 0
    assert first.stdout == second.stdout  # bitwise-identical report
    threaded = run_cli(["verify", "--config", str(cfgfile)], {"ABELTHETA_THREADS": "4"})
    assert threaded.returncode == 0
    # residual lines must not depend on the worker count (header echoes the cap)
    strip = lambda text: [ln for ln in text.splitlines() if "threads cap" not in ln]
    assert strip(threaded.stdout) == strip(first.stdout)


def test_verify_seed_changes_samples_but_not_verdict(tmp_path):
    cfgfile = tmp_path / "c.json"
    cfgfile.write_text(ELLIPTIC.replace("seed: 42", "seed: 7"), encoding="utf-8")
    res = run_cli(["verify", "--config", str(cfgfile)])
    assert res.returncode == 0
    assert "result: PASS" in res.stdout


def test_main_error_paths(capsys):
    assert main(["verify", "--config", '{delta: [1], Z_im: [[-1]]}']) == 2
    err = capsys.readouterr().err
    assert "ValidationError" in err
