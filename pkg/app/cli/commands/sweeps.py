# app/cli/commands/sweeps.py

"""
Comandos de varredura: interp-error, moment-sweep, rate-sweep e clt-1d.

Cada comando escreve <nome>.csv, <nome>.json, <nome>.gp e manifest.json no
diretório de saída. CSV e JSON não dependem de --workers.
"""

from pathlib import Path
from typing import Annotated, Dict, List

import typer

from app.cli import deps, output
from app.core.logging import log_info
from app.core.rng import RngStream
from app.middleware.logging import logged_command
from app.schemas.experiment import ExperimentConfig
from app.services import experiments, randlaws

# Padrões de cada comando (sobrescritos pelo arquivo e pelas flags)
_BASE: Dict[str, object] = {
    "alpha": 1.5,
    "eta": 0.2,
    "p": 1.2,
    "gamma": 1.0,
    "A": 1.0,
    "K": 0.0,
    "n_ref_offset": 4,
    "seed": 1,
}
INTERP_DEFAULTS = {**_BASE, "n_values": list(range(2, 8)), "n_ref_offset": 5, "reps": 2000}
MOMENT_DEFAULTS = {**_BASE, "n_values": list(range(4, 15)), "reps": 5000}
RATE_DEFAULTS = {**_BASE, "n_values": list(range(3, 10)), "reps": 1000}
CLT_DEFAULTS = {**_BASE, "n_values": list(range(2, 11)), "reps": 20000}


def _config(file, defaults, **flags) -> ExperimentConfig:
    return deps.resolve_config(file, deps.build_overrides(**flags), defaults)


def _finish(
    out: Path, name: str, outputs: List[Path], config: ExperimentConfig, workers: int
) -> None:
    manifest = output.write_manifest(
        out, name, outputs, config=config, options={"workers": workers}
    )
    for file in [*outputs, manifest]:
        typer.echo(str(file))


@logged_command("interp-error")
def interp_error(
    config: deps.ConfigOpt = None,
    out: deps.OutOpt = Path("out"),
    workers: deps.WorkersOpt = None,
    alpha: deps.AlphaOpt = None,
    eta: deps.EtaOpt = None,
    p: deps.POpt = None,
    gamma: deps.GammaOpt = None,
    A: deps.AOpt = None,
    K: deps.KOpt = None,
    n_values: deps.NValuesOpt = None,
    reps: deps.RepsOpt = None,
    n_ref_offset: deps.OffsetOpt = None,
    seed: deps.SeedOpt = None,
    pool_size: deps.PoolOpt = None,
):
    """Erro de interpolação E||F - pi_m F||^p contra m, e inclinação ajustada."""
    cfg = _config(
        config, INTERP_DEFAULTS,
        alpha=alpha, eta=eta, p=p, gamma=gamma, A=A, K=K, n_values=n_values,
        reps=reps, n_ref_offset=n_ref_offset, seed=seed, pool_size=pool_size,
    )
    w = deps.resolve_workers(workers)
    output.ensure_out_dir(out)

    rows, summary = experiments.interp_error_sweep(cfg, workers=w)

    csv_file = output.write_rows(out / "interp_error.csv", rows, ("m", "estimate", "stderr"))
    json_file = output.write_summary(out / "interp_error.json", summary, cfg)
    gp_file = output.write_gnuplot(
        out / "interp_error.gp",
        csv_file.name,
        xlabel="m",
        ylabel="E||F - pi_m F||^p",
        title=f"erro de interpolação (inclinação {summary.slope:.4f})",
    )
    _finish(out, "interp-error", [csv_file, json_file, gp_file], cfg, w)


@logged_command("moment-sweep")
def moment_sweep(
    config: deps.ConfigOpt = None,
    out: deps.OutOpt = Path("out"),
    workers: deps.WorkersOpt = None,
    alpha: deps.AlphaOpt = None,
    eta: deps.EtaOpt = None,
    p: deps.POpt = None,
    gamma: deps.GammaOpt = None,
    A: deps.AOpt = None,
    K: deps.KOpt = None,
    n_values: deps.NValuesOpt = None,
    reps: deps.RepsOpt = None,
    n_ref_offset: deps.OffsetOpt = None,
    seed: deps.SeedOpt = None,
    pool_size: deps.PoolOpt = None,
):
    """Momentos E|S_N / N^(1/alpha)|^p para N = 2^n, n em n_values."""
    cfg = _config(
        config, MOMENT_DEFAULTS,
        alpha=alpha, eta=eta, p=p, gamma=gamma, A=A, K=K, n_values=n_values,
        reps=reps, n_ref_offset=n_ref_offset, seed=seed, pool_size=pool_size,
    )
    w = deps.resolve_workers(workers)
    output.ensure_out_dir(out)

    rows, summary = experiments.moment_sweep(
        cfg.law,
        cfg.alpha,
        cfg.p,
        [2**n for n in cfg.n_values],
        cfg.reps,
        RngStream(cfg.master_seed, (experiments.TAG_MOMENT,)),
        workers=w,
    )

    csv_file = output.write_rows(out / "moment_sweep.csv", rows, ("n", "estimate", "stderr"))
    json_file = output.write_summary(out / "moment_sweep.json", summary, cfg)
    gp_file = output.write_gnuplot(
        out / "moment_sweep.gp",
        csv_file.name,
        xlabel="N",
        ylabel="E|S_N / N^(1/alpha)|^p",
        title=f"limitação dos momentos (razão {summary.bounded_ratio:.4f})",
    )
    _finish(out, "moment-sweep", [csv_file, json_file, gp_file], cfg, w)


@logged_command("rate-sweep")
def rate_sweep(
    config: deps.ConfigOpt = None,
    out: deps.OutOpt = Path("out"),
    workers: deps.WorkersOpt = None,
    self_coupling: Annotated[
        bool,
        typer.Option("--self-coupling", help="Acopla a tabela a si mesma (sanidade)"),
    ] = False,
    alpha: deps.AlphaOpt = None,
    eta: deps.EtaOpt = None,
    p: deps.POpt = None,
    gamma: deps.GammaOpt = None,
    A: deps.AOpt = None,
    K: deps.KOpt = None,
    n_values: deps.NValuesOpt = None,
    reps: deps.RepsOpt = None,
    n_ref_offset: deps.OffsetOpt = None,
    seed: deps.SeedOpt = None,
    pool_size: deps.PoolOpt = None,
):
    """Distância acoplada contra n, inclinação ajustada e comparação com -upsilon."""
    cfg = _config(
        config, RATE_DEFAULTS,
        alpha=alpha, eta=eta, p=p, gamma=gamma, A=A, K=K, n_values=n_values,
        reps=reps, n_ref_offset=n_ref_offset, seed=seed, pool_size=pool_size,
    )
    w = deps.resolve_workers(workers)
    output.ensure_out_dir(out)

    rows, summary = experiments.rate_sweep(cfg, workers=w, self_coupling=self_coupling)

    csv_file = output.write_rows(
        out / "rate_sweep.csv",
        rows,
        ("n", "m", "distance_mean", "distance_stderr", "gap_walk", "gap_stable"),
    )
    json_file = output.write_summary(out / "rate_sweep.json", summary, cfg)
    gp_file = output.write_gnuplot(
        out / "rate_sweep.gp",
        csv_file.name,
        xlabel="n",
        ylabel="distância acoplada",
        title=f"taxa funcional (inclinação {summary.slope:.4f}, -upsilon {-summary.upsilon:.4f})",
    )
    _finish(out, "rate-sweep", [csv_file, json_file, gp_file], cfg, w)


@logged_command("clt-1d")
def clt_1d(
    config: deps.ConfigOpt = None,
    out: deps.OutOpt = Path("out"),
    workers: deps.WorkersOpt = None,
    alpha: deps.AlphaOpt = None,
    eta: deps.EtaOpt = None,
    p: deps.POpt = None,
    gamma: deps.GammaOpt = None,
    A: deps.AOpt = None,
    K: deps.KOpt = None,
    n_values: deps.NValuesOpt = None,
    reps: deps.RepsOpt = None,
    n_ref_offset: deps.OffsetOpt = None,
    seed: deps.SeedOpt = None,
    pool_size: deps.PoolOpt = None,
):
    """W1 unidimensional entre a soma normalizada e S(1); `reps` é o número de amostras."""
    cfg = _config(
        config, CLT_DEFAULTS,
        alpha=alpha, eta=eta, p=p, gamma=gamma, A=A, K=K, n_values=n_values,
        reps=reps, n_ref_offset=n_ref_offset, seed=seed, pool_size=pool_size,
    )
    w = deps.resolve_workers(workers)
    output.ensure_out_dir(out)

    table = randlaws.build_quantile_table(
        cfg.stable_law,
        cfg.pool_size,
        RngStream(cfg.master_seed, (experiments.TAG_TABLE,)),
    )
    rows, summary = experiments.scalar_clt_sweep(
        cfg.law,
        cfg.alpha,
        cfg.n_values,
        cfg.reps,
        table,
        RngStream(cfg.master_seed, (experiments.TAG_CLT,)),
        workers=w,
    )
    log_info("TCL unidimensional concluído", slope=summary.slope)

    csv_file = output.write_rows(out / "clt_1d.csv", rows, ("n", "w1"))
    json_file = output.write_summary(out / "clt_1d.json", summary, cfg)
    gp_file = output.write_gnuplot(
        out / "clt_1d.gp",
        csv_file.name,
        xlabel="n",
        ylabel="W1",
        title=f"TCL unidimensional (inclinação {summary.slope:.4f})",
        error_column=None,
    )
    _finish(out, "clt-1d", [csv_file, json_file, gp_file], cfg, w)
