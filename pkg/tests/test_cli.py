import json

import numpy as np
import pytest

from fmipsd import JointDistribution, LatentFamily
from fmipsd.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def dist_file(tmp_path):
    path = tmp_path / "dist.json"
    path.write_text(json.dumps(JointDistribution(np.diag([0.5, 0.5])).to_dict()))
    return str(path)


def test_classify(capsys):
    code, out = run_json(capsys, "classify", "--generator", "kl")
    assert code == 0
    assert out["verdict"]["kind"] == "NegativeCoefficient" and out["verdict"]["order"] == 3
    code, out = run_json(capsys, "classify", "--generator", "tv")
    assert out["verdict"]["kind"] == "NonAnalytic"
    code, out = run_json(capsys, "classify", "--generator", '{"name": "cressie-read", "alpha": 2}')
    assert out["verdict"]["kind"] == "PSDGenerating"


def test_classify_with_kernel(capsys):
    code, out = run_json(capsys, "classify", "--generator", "js", "--with-kernel", "0.5",
                         "--kernel-order", "6")
    assert code == 0 and len(out["kernel"]["entries"]) == 7


def test_matrix(capsys, dist_file):
    code, out = run_json(capsys, "matrix", "--dist", dist_file, "--generator", "chi2")
    assert code == 0
    np.testing.assert_allclose(out["matrix"], [[1, 1], [1, 1]])
    code, out = run_json(capsys, "matrix", "--dist", dist_file, "--generator", "chi2", "--psd")
    assert out["psd"] is True


def test_matrix_infinite_divergence(capsys, dist_file):
    code, _, err = run(capsys, "matrix", "--dist", dist_file, "--generator", "reverse-kl")
    assert code == 3 and "InfiniteDivergence" in err


def test_psd_check(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps([[0, 1], [1, 0]]))
    code, out = run_json(capsys, "psd-check", "--matrix", str(path))
    assert code == 0 and out["psd"] is False
    path.write_text(json.dumps({"matrix": [[0, 1], [0.5, 0]]}))
    code, _, err = run(capsys, "psd-check", "--matrix", str(path))
    assert code == 2 and "NotSymmetric" in err


def test_latent_preset(capsys):
    code, out = run_json(capsys, "latent", "kernel", "--preset", "paper-tvd-relu-4",
                         "--generator", "tv")
    assert code == 0 and out["psd"] is False
    assert out["min_eigenvalue"] == pytest.approx(-0.0460, abs=1e-4)
    code, out = run_json(capsys, "latent", "block", "--preset", "paper-tvd-relu-4",
                         "--generator", "relu", "--replicas", "7")
    assert out["psd"] is True
    code, out = run_json(capsys, "latent", "block", "--preset", "paper-tvd-relu-4",
                         "--generator", "relu", "--replicas", "8")
    assert out["psd"] is False and len(out["witness"]) == 32


def test_latent_family_file(capsys, tmp_path):
    path = tmp_path / "fam.json"
    path.write_text(json.dumps(LatentFamily(0.2, 1, [[0.5], [-0.3]]).to_dict()))
    code, out = run_json(capsys, "latent", "delta", "--family", str(path), "--generator", "kl")
    assert code == 0 and out["psd"] is True
    path.write_text(json.dumps({"a": 0.5, "k": 1, "loadings": [[0.9]]}))
    code, _, err = run(capsys, "latent", "kernel", "--family", str(path), "--generator", "kl")
    assert code == 2 and "InadmissibleFamily" in err


def test_latent_input_errors(capsys):
    assert run(capsys, "latent", "kernel", "--generator", "tv")[0] == 2
    assert run(capsys, "latent", "kernel", "--preset", "nope", "--generator", "tv")[0] == 2
    assert run(capsys, "latent", "block", "--preset", "paper-tvd-relu-4", "--generator", "tv",
               "--replicas", "0")[0] == 2
    assert run(capsys, "latent", "kernel", "--preset", "paper-tvd-relu-4", "--generator", "tv",
               "--loading-scale", "1.5")[0] == 2


def test_counterexample_outcomes(capsys, monkeypatch):
    monkeypatch.delenv("FMI_SEED", raising=False)
    code, out = run_json(capsys, "counterexample", "--generator", "kl")
    assert code == 0 and out["outcome"] == "certificate"
    assert out["certificate"]["quadratic_form"] < 0
    code, out = run_json(capsys, "counterexample", "--generator", "chi2")
    assert out["outcome"] == "absent"
    code, out = run_json(capsys, "counterexample", "--generator", "kl", "--delta", "0.1",
                         "--n-max", "5", "--n-random", "5", "--r-max", "32")
    assert out["outcome"] == "budget-exhausted" and out["best_lambda_min"] < 0


def test_counterexample_seed_sources(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("FMI_SEED", "17")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_max": 4, "n_random": 3, "a_grid": [0.25]}))
    code, out = run_json(capsys, "counterexample", "--generator", "chi2", "--config", str(cfg))
    assert out["config"]["seed"] == 17 and out["config"]["n_max"] == 4
    code, out = run_json(capsys, "counterexample", "--generator", "chi2", "--seed", "3")
    assert out["config"]["seed"] == 3


def test_verify_paper(capsys):
    code, out, _ = run(capsys, "verify-paper")
    assert code == 0 and "PASS" in out
    code, out = run_json(capsys, "verify-paper", "--json")
    assert out["passed"] is True
    assert code == 0
    code, out = run_json(capsys, "verify-paper", "--json", "--loading-scale", "1.01")
    assert code == 1 and out["passed"] is False


def test_unknown_generator(capsys):
    code, _, err = run(capsys, "classify", "--generator", "nope")
    assert code == 2 and "UnknownGenerator" in err
    assert run(capsys, "classify", "--generator", "{not json")[0] == 2


def test_console_script_help():
    with pytest.raises(SystemExit) as info:
        main(["--help"])
    assert info.value.code == 0


def test_matrix_independent_and_unnormalized(capsys, tmp_path):
    path = tmp_path / "ind.json"
    j = JointDistribution.independent([[0.5, 0.5], [0.2, 0.8], [0.1, 0.3, 0.6]])
    path.write_text(json.dumps(j.to_dict()))
    code, out = run_json(capsys, "matrix", "--dist", str(path), "--generator", "kl", "--psd")
    off = np.array(out["matrix"]) - np.diag(np.diag(out["matrix"]))
    assert code == 0 and out["psd"] is True and np.all(off == 0)
    path.write_text(json.dumps({"alphabet_sizes": [2], "atoms": [{"x": [0], "p": 0.9}]}))
    code, _, err = run(capsys, "matrix", "--dist", str(path), "--generator", "kl")
    assert code == 2 and "NormalizationError" in err
    assert run(capsys, "matrix", "--dist", str(tmp_path / "missing.json"),
               "--generator", "kl")[0] == 2


def test_zero_loadings_kernel(capsys, tmp_path):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps({"a": 0.3, "k": 2, "loadings": [[0, 0], [0, 0], [0, 0]]}))
    code, out = run_json(capsys, "latent", "kernel", "--family", str(path), "--generator", "js")
    assert code == 0 and np.all(np.array(out["matrix"]) == 0)
