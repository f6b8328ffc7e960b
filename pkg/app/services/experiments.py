# app/services/experiments.py

"""
Planejadores e varreduras que transformam estimativas de Monte Carlo em
expoentes ajustados e os comparam às taxas previstas.

Toda varredura é função pura de (ExperimentConfig, semente): o fluxo do ponto
n da réplica r é RngStream(seed, (tag, n, r)), e as reduções seguem a ordem
das réplicas.
"""
import math
from functools import partial
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from app.core.exceptions import ConfigurationError, DomainError, NumericFailure
from app.core.logging import log_debug, log_info, log_warning
from app.core.rng import RngStream
from app.schemas.common import Estimate, RateFitResult
from app.schemas.experiment import (
    ExperimentConfig,
    IncrementMomentReport,
    IncrementPairRow,
    InterpErrorRow,
    InterpErrorSummary,
    MomentSweepRow,
    MomentSweepSummary,
    RatePoint,
    RateSweepRow,
    RateSweepSummary,
    ScalarCltRow,
    ScalarCltSummary,
)
from app.schemas.law import HeavyTailLaw, PerturbedTailLaw, QuantileTable, StableLaw
from app.services import distance, parallel, paths, randlaws

# Rótulos dos fluxos por tipo de experimento
TAG_INTERP = 1
TAG_MOMENT = 2
TAG_RATE = 3
TAG_GAP_WALK = 4
TAG_GAP_STABLE = 5
TAG_TABLE = 6
TAG_INCREMENT = 7
TAG_CLT = 8
TAG_SAMPLE = 9

# Limiar reportado (não imposto) para a razão de limitação dos momentos
BOUNDED_THRESHOLD = 1.25


# ========== PLANEJAMENTO ==========


def _check_regime(alpha: float, eta: float, p: float, gamma: Optional[float]) -> None:
    if not (1.0 < alpha < 2.0):
        raise DomainError(f"alpha={alpha} viola 1 < alpha < 2", field="alpha")
    if not (0.0 < eta < 1.0 / alpha):
        raise DomainError(f"eta={eta} viola 0 < eta < 1/alpha", field="eta")
    if not (1.0 <= p < alpha):
        raise DomainError(f"p={p} viola 1 <= p < alpha", field="p")
    if gamma is not None and not gamma > 0.0:
        raise DomainError(f"gamma={gamma} viola gamma > 0", field="gamma")


def _finite_dim_rate(alpha: float, gamma: Optional[float]) -> float:
    """min(2/alpha - 1, gamma/alpha); gamma None conta como infinito."""
    base = 2.0 / alpha - 1.0
    if gamma is None or math.isinf(gamma):
        return base
    return min(base, gamma / alpha)


def plan_kappa_upsilon(
    alpha: float, eta: float, p: float, gamma: Optional[float] = None
) -> Tuple[float, float]:
    """
    kappa = min(2/alpha - 1, gamma/alpha) / (1 + (1/alpha - eta) p)
    upsilon = (1/alpha - eta) p kappa
    """
    _check_regime(alpha, eta, p, gamma)
    smoothness = (1.0 / alpha - eta) * p
    kappa = _finite_dim_rate(alpha, gamma) / (1.0 + smoothness)
    return kappa, smoothness * kappa


def level_for(n: int, kappa: float) -> int:
    """m = round(kappa n), meio arredondado para cima."""
    return int(math.floor(kappa * n + 0.5))


def bound_terms(
    n: int, m: int, alpha: float, eta: float, p: float, gamma: Optional[float] = None
) -> Tuple[float, float, float]:
    """
    Os três termos da cota final com constantes unitárias:
    2^(-m(1/alpha - eta)p), 2^(m - n(2/alpha - 1)) e 2^(m - n gamma/alpha).
    """
    _check_regime(alpha, eta, p, gamma)
    if not (0 <= m <= n):
        raise DomainError(f"m={m} viola 0 <= m <= n={n}", field="m")
    interp = 2.0 ** (-m * (1.0 / alpha - eta) * p)
    clt = 2.0 ** (m - n * (2.0 / alpha - 1.0))
    tail = 0.0 if gamma is None or math.isinf(gamma) else 2.0 ** (m - n * gamma / alpha)
    return interp, clt, tail


def optimal_level(
    n: int, alpha: float, eta: float, p: float, gamma: Optional[float] = None
) -> int:
    """m inteiro em [0, n] que minimiza a soma dos três termos (menor em empate)."""
    totals = [sum(bound_terms(n, m, alpha, eta, p, gamma)) for m in range(n + 1)]
    return int(np.argmin(totals))


# ========== AJUSTE ==========


def fit_loglog(points: Sequence[Tuple[int, float]]) -> RateFitResult:
    """Mínimos quadrados de log2(valor) contra n."""
    if len(points) < 3:
        raise DomainError(
            f"ajuste exige ao menos 3 pontos; recebidos {len(points)}", field="points"
        )
    n = np.array([pt[0] for pt in points], dtype=np.float64)
    values = np.array([pt[1] for pt in points], dtype=np.float64)
    if np.any(~np.isfinite(values)) or np.any(values <= 0.0):
        raise NumericFailure(
            "ajuste log2 exige valores finitos e positivos", field="points"
        )
    result = stats.linregress(n, np.log2(values))
    return RateFitResult(
        slope=float(result.slope),
        intercept=float(result.intercept),
        r_squared=min(1.0, float(result.rvalue) ** 2),
        slope_std_error=float(result.stderr),
        points=len(points),
    )


def _separated(first: Estimate, last: Estimate, sigmas: float) -> bool:
    return first.mean - last.mean >= sigmas * first.combined_stderr(last)


# ========== ERRO DE INTERPOLAÇÃO ==========


def interp_error_sweep(
    config: ExperimentConfig,
    workers: int = 1,
    source: Optional[distance.GapSource] = None,
) -> Tuple[List[InterpErrorRow], InterpErrorSummary]:
    """
    E||F - pi_m(F)||^p para m em config.n_values, com F no nível n_ref, e
    ajuste log2 comparado a -(1/alpha - eta) p.
    """
    source = source or config.source
    levels = config.n_values
    n_ref = config.n_ref if config.n_ref is not None else levels[-1] + config.n_ref_offset
    if levels[0] < 2 or levels[-1] > n_ref - 2:
        raise ConfigurationError(
            f"m em {levels} viola 2 <= m <= n_ref - 2 = {n_ref - 2}", field="n_values"
        )
    law: Union[HeavyTailLaw, StableLaw, None] = {
        "stable": config.stable_law,
        "walk": config.law,
        "affine": None,
    }[source]
    params = config.sobolev_params

    estimates: List[Estimate] = []
    for m in levels:
        est = distance.projection_gap(
            source,
            m,
            n_ref,
            params,
            law=law,
            reps=config.reps,
            stream=RngStream(config.master_seed, (TAG_INTERP, m)),
            workers=workers,
        )
        log_debug("gap de projeção estimado", m=m, mean=est.mean)
        estimates.append(est)

    rows = [
        InterpErrorRow(m=m, estimate=e.mean, stderr=e.std_error)
        for m, e in zip(levels, estimates)
    ]
    fit = fit_loglog([(r.m, r.estimate) for r in rows])
    expected = -(1.0 / config.alpha - config.eta) * config.p
    summary = InterpErrorSummary(
        source=source,
        n_ref=n_ref,
        fit=fit,
        slope=fit.slope,
        expected_slope=expected,
        slope_band=config.slope_band,
        passed=abs(fit.slope - expected) <= config.slope_band,
        decreasing=_separated(estimates[0], estimates[-1], 2.0),
    )
    log_info(
        "varredura de interpolação concluída",
        slope=fit.slope,
        expected_slope=expected,
        passed=summary.passed,
    )
    return rows, summary


# ========== MOMENTOS DOS INCREMENTOS ==========


def increment_pairs(n: int) -> List[Tuple[str, float, float]]:
    """
    Bateria determinística de pares (tipo, s, t) com t > s: nos nós, dentro
    de uma célula e atravessando nós.
    """
    if n < 2:
        raise DomainError(f"n={n} viola n >= 2 na bateria de pares", field="n")
    h = 2.0**-n
    return [
        ("on_grid", 0.0, h),
        ("on_grid", 0.5, 0.5 + h),
        ("on_grid", 0.25, 0.5),
        ("on_grid", 0.0, 1.0),
        ("same_cell", 0.25 * h, 0.75 * h),
        ("same_cell", 0.5 + 0.25 * h, 0.5 + 0.75 * h),
        ("straddling", 0.5 * h, 1.5 * h),
        ("straddling", 0.5 - 0.25 * h, 0.5 + 0.25 * h),
        ("straddling", 0.25 - 0.5 * h, 0.75 + 0.5 * h),
    ]


def _increment_replicate(
    r: int,
    law: HeavyTailLaw,
    alpha: float,
    p: float,
    n: int,
    s: np.ndarray,
    t: np.ndarray,
    stream: RngStream,
) -> np.ndarray:
    walk = paths.build_walk(randlaws.sample_many(law, stream.child(r), 2**n), alpha, n)
    return np.abs(paths.evaluate(walk, t) - paths.evaluate(walk, s)) ** p


def increment_moment_check(
    law: HeavyTailLaw,
    alpha: float,
    p: float,
    n: int,
    reps: int,
    stream: RngStream,
    workers: int = 1,
) -> IncrementMomentReport:
    """
    max sobre os pares de E|X_n(t) - X_n(s)|^p / |t - s|^(p/alpha), com a
    tabela por par.
    """
    if not (0.0 < p < alpha):
        raise DomainError(f"p={p} viola 0 < p < alpha={alpha}", field="p")
    if reps < 2:
        raise ConfigurationError(f"reps={reps} viola reps >= 2", field="reps")
    battery = increment_pairs(n)
    s = np.array([pair[1] for pair in battery])
    t = np.array([pair[2] for pair in battery])

    replicate = partial(
        _increment_replicate, law=law, alpha=alpha, p=p, n=n, s=s, t=t, stream=stream
    )
    samples = np.vstack(parallel.run_replicates(replicate, reps, workers))

    rows = []
    for j, (kind, sj, tj) in enumerate(battery):
        est = Estimate.from_samples(samples[:, j])
        rows.append(
            IncrementPairRow(
                kind=kind,
                s=sj,
                t=tj,
                estimate=est.mean,
                stderr=est.std_error,
                ratio=est.mean / (tj - sj) ** (p / alpha),
            )
        )
    return IncrementMomentReport(n=n, max_ratio=max(r.ratio for r in rows), pairs=rows)


# ========== LIMITAÇÃO DOS MOMENTOS ==========


def _moment_replicate(
    r: int, law: HeavyTailLaw, alpha: float, p: float, size: int, stream: RngStream
) -> float:
    total = float(np.sum(randlaws.sample_many(law, stream.child(r), size)))
    return abs(total / size ** (1.0 / alpha)) ** p


def moment_sweep(
    law: HeavyTailLaw,
    alpha: float,
    p: float,
    sizes: Sequence[int],
    reps: int,
    stream: RngStream,
    workers: int = 1,
) -> Tuple[List[MomentSweepRow], MomentSweepSummary]:
    """
    E|(Y_1 + ... + Y_N) / N^(1/alpha)|^p para N em `sizes`, e a razão
    max/min na metade superior de `sizes`.
    """
    if not (0.0 < p < alpha):
        raise DomainError(f"p={p} viola 0 < p < alpha={alpha}", field="p")
    if not sizes or min(sizes) < 1:
        raise ConfigurationError("sizes deve conter inteiros N >= 1", field="n_values")
    if reps < 2:
        raise ConfigurationError(f"reps={reps} viola reps >= 2", field="reps")

    rows = []
    for size in sizes:
        replicate = partial(
            _moment_replicate,
            law=law,
            alpha=alpha,
            p=p,
            size=size,
            stream=stream.child(size),
        )
        est = Estimate.from_samples(parallel.run_replicates(replicate, reps, workers))
        rows.append(MomentSweepRow(n=size, estimate=est.mean, stderr=est.std_error))
        log_debug("momento estimado", level_n=size, mean=est.mean)

    top = rows[-(len(rows) // 2 or 1) :]
    top_values = [r.estimate for r in top]
    summary = MomentSweepSummary(
        alpha=alpha,
        p=p,
        bounded_ratio=max(top_values) / min(top_values),
        top_half=[r.n for r in top],
    )
    if summary.bounded_ratio > BOUNDED_THRESHOLD:
        log_warning("razão de limitação acima do limiar", bounded_ratio=summary.bounded_ratio)
    return rows, summary


# ========== TAXA FUNCIONAL ==========


def _zero_estimate(reps: int) -> Estimate:
    return Estimate(mean=0.0, std_error=0.0, replications=reps)


def rate_sweep(
    config: ExperimentConfig,
    workers: int = 1,
    self_coupling: bool = False,
    table: Optional[QuantileTable] = None,
) -> Tuple[List[RateSweepRow], RateSweepSummary]:
    """
    Distância acoplada no nível n para n em config.n_values, gaps de
    projeção no nível m = round(kappa n) e ajuste log2 comparado a -upsilon.

    Com self_coupling=True o passeio usa a própria tabela de quantis e todas
    as distâncias são nulas (o ajuste falha com NumericFailure).
    """
    kappa, upsilon = plan_kappa_upsilon(
        config.alpha, config.eta, config.p, config.effective_gamma
    )
    if table is None:
        table = randlaws.build_quantile_table(
            config.stable_law,
            config.pool_size,
            RngStream(config.master_seed, (TAG_TABLE,)),
        )
    law = table if self_coupling else config.law
    params = config.sobolev_params
    gap_reps = config.effective_gap_reps

    points: List[RatePoint] = []
    for n in config.n_values:
        m = level_for(n, kappa)
        dist = distance.coupled_distance(
            n,
            law,
            table,
            params,
            config.reps,
            RngStream(config.master_seed, (TAG_RATE, n)),
            workers,
        )
        if m < n:
            gap_walk = distance.projection_gap(
                "walk",
                m,
                n,
                params,
                law=law,
                reps=gap_reps,
                stream=RngStream(config.master_seed, (TAG_GAP_WALK, n)),
                workers=workers,
            )
        else:
            gap_walk = _zero_estimate(gap_reps)
        gap_stable = distance.projection_gap(
            "stable",
            m,
            n + config.n_ref_offset,
            params,
            law=config.stable_law,
            reps=gap_reps,
            stream=RngStream(config.master_seed, (TAG_GAP_STABLE, n)),
            workers=workers,
        )
        points.append(
            RatePoint(
                n=n,
                m=m,
                m_optimal=optimal_level(
                    n, config.alpha, config.eta, config.p, config.effective_gamma
                ),
                distance=dist,
                gap_walk=gap_walk,
                gap_stable=gap_stable,
            )
        )
        log_debug("ponto da varredura de taxa concluído", level_n=n, m=m, mean=dist.mean)

    rows = [
        RateSweepRow(
            n=pt.n,
            m=pt.m,
            distance_mean=pt.distance.mean,
            distance_stderr=pt.distance.std_error,
            gap_walk=pt.gap_walk.mean,
            gap_stable=pt.gap_stable.mean,
        )
        for pt in points
    ]
    fit = fit_loglog([(r.n, r.distance_mean) for r in rows])
    summary = RateSweepSummary(
        kappa=kappa,
        upsilon=upsilon,
        fit=fit,
        slope=fit.slope,
        expected_slope=-upsilon,
        slope_ratio=fit.slope / -upsilon,
        rate_fraction=config.rate_fraction,
        passed=fit.slope <= -config.rate_fraction * upsilon,
        monotone_decrease=_separated(points[0].distance, points[-1].distance, 3.0),
        steep_slope=fit.slope < -2.0 * upsilon,
        self_coupling=self_coupling,
        points=points,
    )
    if summary.steep_slope:
        log_warning(
            "inclinação muito mais íngreme que -upsilon",
            slope=fit.slope,
            upsilon=upsilon,
        )
    log_info("varredura de taxa concluída", slope=fit.slope, passed=summary.passed)
    return rows, summary


# ========== TCL UNIDIMENSIONAL ==========


def _clt_replicate(
    r: int, law: HeavyTailLaw, alpha: float, n: int, stream: RngStream
) -> float:
    total = float(np.sum(randlaws.sample_many(law, stream.child(r), 2**n)))
    return total * 2.0 ** (-n / alpha)


def scalar_clt_sweep(
    law: HeavyTailLaw,
    alpha: float,
    n_values: Sequence[int],
    samples: int,
    table: QuantileTable,
    stream: RngStream,
    workers: int = 1,
) -> Tuple[List[ScalarCltRow], ScalarCltSummary]:
    """
    W1 empírico entre 2^(-n/alpha) (Y_1 + ... + Y_N), N = 2^n, e o limite
    sigma S(1) sorteado pela tabela, com ajuste log2 contra
    -min(2/alpha - 1, gamma/alpha).
    """
    if samples < 2:
        raise ConfigurationError(f"samples={samples} viola samples >= 2", field="samples")
    sigma = randlaws.limit_scale(law)
    rows = []
    for n in n_values:
        point = stream.child(n)
        replicate = partial(_clt_replicate, law=law, alpha=alpha, n=n, stream=point.child(0))
        sums = parallel.run_replicates(replicate, samples, workers)
        reference = sigma * randlaws.table_quantile(table, point.child(1).uniform(samples))
        rows.append(ScalarCltRow(n=n, w1=distance.w1_sorted(sums, reference)))

    gamma = law.gamma if isinstance(law, PerturbedTailLaw) and law.K > 0.0 else None
    fit = fit_loglog([(r.n, r.w1) for r in rows])
    summary = ScalarCltSummary(
        fit=fit,
        slope=fit.slope,
        expected_slope=-_finite_dim_rate(alpha, gamma),
        rows=rows,
    )
    return rows, summary
