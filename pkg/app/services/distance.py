# app/services/distance.py

"""
Estimadores empíricos de Wasserstein-1 e o par de caminhos acoplado por
quantis (acoplamento comonótono célula a célula).

O acoplamento é admissível, não ótimo: os estimadores aqui são cotas
superiores da distância funcional.
"""
from functools import partial
from typing import Literal, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.exceptions import ConfigurationError, DomainError, ShapeError
from app.core.logging import get_logger
from app.core.rng import RngStream
from app.schemas.common import Estimate, SobolevParams
from app.schemas.law import HeavyTailLaw, QuantileTable, StableLaw
from app.schemas.path import CoupledPair, DyadicPath
from app.services import parallel, paths, randlaws, sobolev

logger = get_logger(__name__)

GapSource = Literal["stable", "walk", "affine"]

# Lei dos incrementos do passeio; a própria tabela ativa o modo de autoacoplamento
CouplingLaw = Union[HeavyTailLaw, QuantileTable]

# Caminho determinístico usado como fonte "affine": valores exatos em binário
_AFFINE_HOOK = (0.5, 2.0)


def w1_sorted(a: Sequence[float], b: Sequence[float]) -> float:
    """W1 exato entre duas medidas empíricas de N átomos na reta."""
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ShapeError(
            f"amostras com tamanhos diferentes: {x.size} e {y.size}", field="b"
        )
    if x.size == 0:
        raise ShapeError("w1_sorted exige N >= 1", field="a")
    return float(np.mean(np.abs(np.sort(x) - np.sort(y))))


def _increment_quantiles(law: CouplingLaw, u: np.ndarray) -> np.ndarray:
    if isinstance(law, QuantileTable):
        return np.asarray(randlaws.table_quantile(law, u))
    return np.asarray(randlaws.quantile(law, u))


def coupled_path_pair(
    n: int,
    law: CouplingLaw,
    table: QuantileTable,
    alpha: float,
    stream: RngStream,
) -> CoupledPair:
    """
    Para cada célula k um uniforme u_k: Y_k = F_Y^-1(u_k) e Z_k = sigma vezes
    o quantil da tabela em u_k, com sigma a escala do limite estável da lei;
    os dois caminhos são escalados por 2^(-n/alpha).
    """
    if table.alpha != alpha:
        raise DomainError(
            f"tabela de quantis com alpha={table.alpha} diferente de alpha={alpha}",
            field="table",
        )
    u = np.atleast_1d(stream.uniform(2**n))
    walk = paths.build_walk(_increment_quantiles(law, u), alpha, n)
    limit = randlaws.limit_scale(law) * np.asarray(randlaws.table_quantile(table, u))
    stable = paths.build_walk(limit, alpha, n)
    return CoupledPair(walk_path=walk, stable_path=stable, level=n)


def _coupled_replicate(
    r: int,
    n: int,
    law: CouplingLaw,
    table: QuantileTable,
    params: SobolevParams,
    stream: RngStream,
) -> float:
    pair = coupled_path_pair(n, law, table, table.alpha, stream.child(r))
    return sobolev.diff_norm(pair.walk_path, pair.stable_path, params)


def _check_reps(reps: int) -> None:
    if reps < 2:
        raise ConfigurationError(f"reps={reps} viola reps >= 2", field="reps")


def coupled_distance(
    n: int,
    law: CouplingLaw,
    table: QuantileTable,
    params: SobolevParams,
    reps: int,
    stream: RngStream,
    workers: int = 1,
) -> Estimate:
    """Média e erro padrão de diff_norm(passeio, esqueleto) em `reps` pares."""
    _check_reps(reps)
    replicate = partial(
        _coupled_replicate, n=n, law=law, table=table, params=params, stream=stream
    )
    values = parallel.run_replicates(replicate, reps, workers)
    estimate = Estimate.from_samples(values)
    logger.debug(
        "distância acoplada estimada",
        extra={"level_n": n, "replicates": reps, "mean": estimate.mean},
    )
    return estimate


def _source_path(
    source: GapSource,
    n_ref: int,
    law: Optional[Union[CouplingLaw, StableLaw]],
    stream: RngStream,
) -> DyadicPath:
    if source == "affine":
        return paths.affine_path(*_AFFINE_HOOK, n_ref)
    if source == "stable":
        return paths.sample_stable_path(law, n_ref, stream)
    increments = _increment_quantiles(law, np.atleast_1d(stream.uniform(2**n_ref)))
    return paths.build_walk(increments, law.alpha, n_ref)


def _gap_replicate(
    r: int,
    source: GapSource,
    m: int,
    n_ref: int,
    params: SobolevParams,
    law: Optional[Union[CouplingLaw, StableLaw]],
    stream: RngStream,
) -> float:
    full = _source_path(source, n_ref, law, stream.child(r))
    return sobolev.norm_p(full - paths.project(full, m), params)


def projection_gap(
    source: GapSource,
    m: int,
    n_ref: int,
    params: SobolevParams,
    law: Optional[Union[CouplingLaw, StableLaw]] = None,
    reps: int = 2,
    *,
    stream: RngStream,
    workers: int = 1,
) -> Estimate:
    """
    Estima E||F - pi_m(F)||^p com F realizado no nível de referência n_ref.

    source: "stable" (law: StableLaw), "walk" (law: lei de incremento ou a
    própria tabela de quantis) ou
    "affine" (caminho afim determinístico, gap nulo).
    """
    if not (0 <= m < n_ref):
        raise DomainError(f"m={m} viola 0 <= m < n_ref={n_ref}", field="m")
    if source not in ("stable", "walk", "affine"):
        raise ConfigurationError(f"source={source!r} desconhecida", field="source")
    if source == "stable" and not isinstance(law, StableLaw):
        raise ConfigurationError("source 'stable' exige uma StableLaw", field="law")
    if source == "walk" and (law is None or isinstance(law, StableLaw)):
        raise ConfigurationError("source 'walk' exige uma lei de incremento", field="law")
    _check_reps(reps)

    replicate = partial(
        _gap_replicate,
        source=source,
        m=m,
        n_ref=n_ref,
        params=params,
        law=law,
        stream=stream,
    )
    values = parallel.run_replicates(replicate, reps, workers)
    return Estimate.from_samples(values)


def endpoint_dominance(pairs: Sequence[CoupledPair]) -> Tuple[float, float]:
    """
    (W1 empírico entre as marginais dos pontos finais, média de |gap| no
    ponto final sob o acoplamento). O primeiro nunca excede o segundo.
    """
    if not pairs:
        raise ShapeError("endpoint_dominance exige ao menos um par", field="pairs")
    walk_end = np.array([pair.walk_path.node_values[-1] for pair in pairs])
    stable_end = np.array([pair.stable_path.node_values[-1] for pair in pairs])
    return w1_sorted(walk_end, stable_end), float(np.mean(np.abs(walk_end - stable_end)))
