"""
Testes de integração para os comandos da CLI.
"""

import json

import pytest

from app.services import paths


def invoke(runner, cli_app, *args):
    return runner.invoke(cli_app, [str(a) for a in args])


# ========== SAMPLE ==========


@pytest.mark.integration
def test_sample_is_deterministic(runner, cli_app, tmp_path):
    """Testa arquivos idênticos para a mesma semente."""
    first, second, other = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    for file, seed in ((first, 7), (second, 7), (other, 8)):
        result = invoke(runner, cli_app, "sample", "--count", 50, "--seed", seed, "--out", file)
        assert result.exit_code == 0
    assert first.read_bytes() == second.read_bytes()
    assert first.read_bytes() != other.read_bytes()
    lines = first.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "index,value"
    assert len(lines) == 51


@pytest.mark.integration
@pytest.mark.parametrize("law", ["perturbed", "stable"])
def test_sample_other_laws(runner, cli_app, tmp_path, law):
    """Testa o comando sample para as demais leis."""
    file = tmp_path / f"{law}.csv"
    result = invoke(
        runner, cli_app, "sample", "--law", law, "--A", 0.6, "--K", 0.2, "--count", 20, "--out", file
    )
    assert result.exit_code == 0
    assert len(file.read_text(encoding="utf-8").splitlines()) == 21


@pytest.mark.integration
@pytest.mark.parametrize(
    "args, message",
    [
        (["--alpha", 2.5], "1 < alpha < 2"),
        (["--law", "perturbed", "--A", 0.9, "--K", 0.3], "A + K <= 1"),
        (["--seed", -1], "master_seed"),
    ],
)
def test_sample_invalid_parameters(runner, cli_app, tmp_path, args, message):
    """Testa saída 2 e a mensagem com a restrição violada."""
    result = invoke(runner, cli_app, "sample", "--out", tmp_path / "x.csv", *args)
    assert result.exit_code == 2
    assert message in result.output


# ========== NORM ==========


@pytest.mark.integration
def test_norm_identity(runner, cli_app, tmp_path):
    """Testa a norma da identidade: 1.49802 para eta = 0.25, p = 1.2."""
    file = tmp_path / "identity.csv"
    paths.write_csv(paths.identity_path(3), file)
    result = invoke(runner, cli_app, "norm", file, "--eta", 0.25, "--p", 1.2)
    assert result.exit_code == 0
    assert float(result.stdout) == pytest.approx(1.49802, abs=5e-6)


@pytest.mark.integration
@pytest.mark.parametrize("value, expected", [(2.0, 2.0), (0.0, 0.0)])
def test_norm_constant_paths(runner, cli_app, tmp_path, value, expected):
    """Testa ||c|| = |c| pela CLI."""
    file = tmp_path / "constant.csv"
    paths.write_csv(paths.affine_path(value, 0.0, 2), file)
    result = invoke(runner, cli_app, "norm", file)
    assert result.exit_code == 0
    assert float(result.stdout) == pytest.approx(expected)


@pytest.mark.integration
def test_norm_malformed_csv(runner, cli_app, tmp_path):
    """Testa saída 2 para CSV malformado."""
    file = tmp_path / "bad.csv"
    file.write_text("t,value\n0,0\n0.3,1\n1,2\n", encoding="utf-8")
    result = invoke(runner, cli_app, "norm", file)
    assert result.exit_code == 2


# ========== PLAN ==========


@pytest.mark.integration
def test_plan_output(runner, cli_app):
    """Testa o JSON do plano."""
    result = invoke(runner, cli_app, "plan", "--n-values", "3..9")
    assert result.exit_code == 0
    payload = json.loads(result.stdout)
    assert payload["kappa"] == pytest.approx(0.213675, abs=1e-6)
    assert payload["upsilon"] == pytest.approx(0.119658, abs=1e-6)
    assert [level["n"] for level in payload["levels"]] == list(range(3, 10))
    assert all(len(level["bound_terms"]) == 3 for level in payload["levels"])


@pytest.mark.integration
def test_plan_invalid_regime(runner, cli_app):
    """Testa saída 2 para eta >= 1/alpha."""
    result = invoke(runner, cli_app, "plan", "--eta", 0.8)
    assert result.exit_code == 2


# ========== VARREDURAS ==========


@pytest.fixture
def interp_config(write_config):
    return write_config(
        "interp.cfg",
        alpha=1.5,
        eta=0.2,
        p=1.2,
        n_values="2..4",
        n_ref=6,
        reps=3,
        seed=3,
        pool_size=100000,
    )


@pytest.mark.integration
def test_interp_error_outputs(runner, cli_app, tmp_path, interp_config):
    """Testa os artefatos da varredura de interpolação."""
    out = tmp_path / "out"
    result = invoke(
        runner, cli_app, "interp-error", "--config", interp_config, "--out", out, "--workers", 1
    )
    assert result.exit_code == 0
    for name in ("interp_error.csv", "interp_error.json", "interp_error.gp", "manifest.json"):
        assert (out / name).exists()
    assert (out / "interp_error.csv").read_text(encoding="utf-8").splitlines()[0] == (
        "m,estimate,stderr"
    )
    summary = json.loads((out / "interp_error.json").read_text(encoding="utf-8"))
    assert summary["config"]["seed"] == 3
    assert summary["n_ref"] == 6
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["command"] == "interp-error"
    assert manifest["options"] == {"workers": 1}


@pytest.mark.integration
def test_outputs_independent_of_workers(runner, cli_app, tmp_path, interp_config):
    """Testa CSV e JSON idênticos byte a byte com 1 e 2 workers."""
    serial, pooled = tmp_path / "w1", tmp_path / "w2"
    for out, workers in ((serial, 1), (pooled, 2)):
        result = invoke(
            runner,
            cli_app,
            "interp-error",
            "--config",
            interp_config,
            "--out",
            out,
            "--workers",
            workers,
        )
        assert result.exit_code == 0
    for name in ("interp_error.csv", "interp_error.json"):
        assert (serial / name).read_bytes() == (pooled / name).read_bytes()


@pytest.mark.integration
def test_flags_override_config_file(runner, cli_app, tmp_path, interp_config):
    """Testa que a flag --seed prevalece sobre o arquivo."""
    out = tmp_path / "out"
    result = invoke(
        runner, cli_app, "interp-error", "-c", interp_config, "-o", out, "-w", 1, "--seed", 11
    )
    assert result.exit_code == 0
    summary = json.loads((out / "interp_error.json").read_text(encoding="utf-8"))
    assert summary["config"]["seed"] == 11


@pytest.mark.integration
def test_n_ref_offset_from_file_and_flag(runner, cli_app, tmp_path, write_config):
    """Testa n_ref = max(n_values) + n_ref_offset vindo do arquivo e da flag."""
    config = write_config(
        "offset.cfg", n_values="2..4", n_ref_offset=2, reps=2, seed=3, pool_size=100000
    )
    from_file, from_flag = tmp_path / "file", tmp_path / "flag"
    result = invoke(
        runner, cli_app, "interp-error", "-c", config, "-o", from_file, "-w", 1
    )
    assert result.exit_code == 0
    summary = json.loads((from_file / "interp_error.json").read_text(encoding="utf-8"))
    assert summary["n_ref"] == 6

    result = invoke(
        runner,
        cli_app,
        "interp-error",
        "-c",
        config,
        "-o",
        from_flag,
        "-w",
        1,
        "--n-ref-offset",
        3,
    )
    assert result.exit_code == 0
    summary = json.loads((from_flag / "interp_error.json").read_text(encoding="utf-8"))
    assert summary["n_ref"] == 7


@pytest.mark.integration
def test_moment_sweep_summary(runner, cli_app, tmp_path):
    """Testa que o resumo da varredura de momentos traz bounded_ratio."""
    out = tmp_path / "out"
    result = invoke(
        runner,
        cli_app,
        "moment-sweep",
        "--n-values",
        "0..3",
        "--reps",
        20,
        "--out",
        out,
        "--workers",
        1,
    )
    assert result.exit_code == 0
    summary = json.loads((out / "moment_sweep.json").read_text(encoding="utf-8"))
    assert "bounded_ratio" in summary
    assert summary["top_half"] == [4, 8]
    rows = (out / "moment_sweep.csv").read_text(encoding="utf-8").splitlines()
    assert [line.split(",")[0] for line in rows[1:]] == ["1", "2", "4", "8"]


@pytest.mark.integration
@pytest.mark.parametrize(
    "command, stem, args",
    [
        ("rate-sweep", "rate_sweep", ["--n-values", "3..5", "--reps", 3, "--n-ref-offset", 1]),
        ("moment-sweep", "moment_sweep", ["--n-values", "0..3", "--reps", 20]),
    ],
)
def test_sweep_outputs_independent_of_workers(runner, cli_app, tmp_path, command, stem, args):
    """Testa CSV e JSON idênticos byte a byte com 1 e 3 workers nas demais varreduras."""
    serial, pooled = tmp_path / "w1", tmp_path / "w3"
    for out, workers in ((serial, 1), (pooled, 3)):
        result = invoke(
            runner,
            cli_app,
            command,
            *args,
            "--seed",
            5,
            "--pool-size",
            100000,
            "--out",
            out,
            "--workers",
            workers,
        )
        assert result.exit_code == 0
    for name in (f"{stem}.csv", f"{stem}.json"):
        assert (serial / name).read_bytes() == (pooled / name).read_bytes()


@pytest.mark.integration
def test_rate_sweep_self_coupling_exit_code(runner, cli_app, tmp_path, write_config):
    """Testa saída 3 quando o autoacoplamento zera as distâncias."""
    config = write_config(
        "rate.cfg", n_values="3..5", reps=2, n_ref_offset=1, pool_size=100000
    )
    result = invoke(
        runner,
        cli_app,
        "rate-sweep",
        "--config",
        config,
        "--self-coupling",
        "--out",
        tmp_path / "out",
        "--workers",
        1,
    )
    assert result.exit_code == 3


@pytest.mark.integration
def test_clt_1d_outputs(runner, cli_app, tmp_path):
    """Testa os artefatos do TCL unidimensional."""
    out = tmp_path / "out"
    result = invoke(
        runner,
        cli_app,
        "clt-1d",
        "--n-values",
        "2..4",
        "--reps",
        50,
        "--pool-size",
        100000,
        "--out",
        out,
        "--workers",
        1,
    )
    assert result.exit_code == 0
    rows = (out / "clt_1d.csv").read_text(encoding="utf-8").splitlines()
    assert rows[0] == "n,w1"
    assert len(rows) == 4


# ========== ERROS DE CONFIGURAÇÃO ==========


@pytest.mark.integration
@pytest.mark.parametrize(
    "content",
    [
        "alpha = 1.5\nbogus = 3\n",
        "alpha = 1.5\nalpha = 1.6\n",
        "alpha 1.5\n",
        "n_values = 3;4\n",
    ],
)
def test_invalid_config_file(runner, cli_app, tmp_path, content):
    """Testa saída 2 para chaves desconhecidas, repetidas ou malformadas."""
    file = tmp_path / "bad.cfg"
    file.write_text(content, encoding="utf-8")
    result = invoke(runner, cli_app, "interp-error", "--config", file, "--out", tmp_path / "o")
    assert result.exit_code == 2


@pytest.mark.integration
@pytest.mark.parametrize(
    "args",
    [
        ["--alpha", 2.5],
        ["--A", 0.9, "--K", 0.3],
        ["--p", 1.6],
        ["--n-values", "4,3"],
        ["--workers", 0],
    ],
)
def test_invalid_sweep_parameters(runner, cli_app, tmp_path, args):
    """Testa saída 2 para parâmetros fora do regime."""
    result = invoke(runner, cli_app, "rate-sweep", "--out", tmp_path / "o", *args)
    assert result.exit_code == 2
