import json

import numpy as np
import pytest

from cbnorms import cli, io
from conftest import dft, random_complex


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def write(tmp_path, X, name="m.json"):
    path = tmp_path / name
    io.write_matrix(path, X)
    return str(path)


def test_norm_identity_schur(tmp_path, capsys):
    path = write(tmp_path, np.eye(2))
    code, out = run(capsys, ["norm", path, "--kind", "S"])
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == 1
    assert rep["result"]["value"] == pytest.approx(1.0, rel=1e-8)


def test_norm_dft_cbb(tmp_path, capsys):
    path = write(tmp_path, dft(3))
    code, out = run(capsys, ["norm", path, "--kind", "cbB"])
    assert code == 0
    assert json.loads(out)["result"]["value"] == pytest.approx(3.0, rel=1e-6)


def test_norm_zero_matrix(tmp_path, capsys):
    path = write(tmp_path, np.zeros((2, 3)))
    for kind in ("F", "S", "cbF", "T"):
        code, out = run(capsys, ["norm", path, "--kind", kind])
        assert code == 0
        assert json.loads(out)["result"]["value"] == 0.0


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{oops")
    code, _ = run(capsys, ["norm", str(path), "--kind", "S"])
    assert code == cli.EXIT_PARSE


def test_flag_error_uncertifiable(tmp_path, capsys, rng):
    path = write(tmp_path, random_complex(rng, 6, 6))
    code, _ = run(capsys, ["norm", path, "--kind", "B"])
    assert code == cli.EXIT_FLAGS
    code, _ = run(capsys, ["norm", path, "--kind", "B", "--heuristic"])
    assert code == 0


def test_factorize_schur_unitary(tmp_path, capsys):
    path = write(tmp_path, dft(2))
    code, out = run(capsys, ["factorize", path, "--kind", "schur"])
    assert code == 0
    rep = json.loads(out)
    assert rep["result"]["residuals"]["reconstruction_error"] < 1e-8
    F = io.matrix_from_json_dict(rep["result"]["factors"]["F"])
    np.testing.assert_allclose(F, np.eye(2), atol=1e-6)


def test_factorize_selfadjoint_requires_hermitian(tmp_path, capsys, rng):
    path = write(tmp_path, random_complex(rng, 3, 3))
    code, _ = run(capsys, ["factorize", path, "--kind", "selfadjoint-schur"])
    assert code == cli.EXIT_PRECONDITION


def test_verify_identities(tmp_path, capsys, rng):
    path = write(tmp_path, random_complex(rng, 2, 2))
    code, out = run(capsys, ["verify", path, "--kind", "identities"])
    assert code == 0
    assert json.loads(out)["result"]["all_passed"] is True


def test_verify_uniqueness_nonunique_fixture(tmp_path, capsys):
    path = write(tmp_path, np.diag([1.0, 0.25j]))
    code, out = run(capsys, ["verify", path, "--kind", "uniqueness", "--target", "schur"])
    assert code == 0
    checks = json.loads(out)["result"]["checks"]
    assert "precondition-fails" in checks[0]["verdict"]


def test_verify_injected_failure(tmp_path, capsys, rng):
    path = write(tmp_path, random_complex(rng, 2, 2))
    code, _ = run(capsys, ["verify", path, "--kind", "identities", "--inject-failure"])
    assert code == cli.EXIT_VERIFY


def test_selftest_small(capsys):
    code, out = run(capsys, ["selftest", "--sizes", "2"])
    assert code == 0
    assert json.loads(out)["result"]["all_passed"] is True


def test_report_determinism(tmp_path, capsys, rng):
    path = write(tmp_path, random_complex(rng, 2, 2))
    _, out1 = run(capsys, ["norm", path, "--kind", "cbB", "--seed", "7"])
    _, out2 = run(capsys, ["norm", path, "--kind", "cbB", "--seed", "7"])
    r1, r2 = json.loads(out1), json.loads(out2)
    r1.pop("wall_time")
    r2.pop("wall_time")
    assert r1 == r2


def test_seed_env_fallback(tmp_path, capsys, monkeypatch):
    path = write(tmp_path, np.eye(2))
    monkeypatch.setenv("SCHURFACT_SEED", "99")
    _, out = run(capsys, ["norm", path, "--kind", "S"])
    assert json.loads(out)["parameters"]["seed"] == 99
