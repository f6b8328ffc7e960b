# app/services/sobolev.py

"""
Norma W_{eta,p} de caminhos diádicos lineares por partes.

    ||f||^p = integral de |f|^p  +  integral dupla |f(s) - f(t)|^p / |s - t|^(1 + eta p)

A integral dupla é separada por pares de células do nível do caminho:
    - mesma célula: forma fechada (f afim na célula);
    - células vizinhas: troca de variáveis polar, integral exata no ângulo e
      Gauss graduado no raio;
    - células distantes: integral exata ao longo da diagonal e Gauss graduado
      através dela, partido onde f(t) - f(s) troca de sinal; pares longe da
      diagonal e sem cruzamento usam uma expansão de quarta ordem.
Cada par é integrado com erro relativo bem abaixo de 1e-6, então refinar o
caminho não muda a norma além dessa tolerância.
"""
import numpy as np

from app.core.config import settings
from app.core.exceptions import DomainError
from app.core.logging import get_logger
from app.schemas.common import Embedding, SeminormBreakdown, SobolevParams
from app.schemas.path import DyadicPath
from app.services import paths, quadrature

logger = get_logger(__name__)


def _check_p(p: float) -> None:
    if not p >= 1.0:
        raise DomainError(f"p={p} viola p >= 1", field="p")


def lp_part(path: DyadicPath, p: float) -> float:
    """Integral em [0, 1] de |f|^p, célula a célula."""
    _check_p(p)
    return float(quadrature.lp_kernel(np.ascontiguousarray(path.node_values), float(p)))


def seminorm_breakdown(path: DyadicPath, params: SobolevParams) -> SeminormBreakdown:
    """Contribuições da seminorma por tipo de par de células."""
    p, q, beta = params.p, params.q, params.beta
    cells = path.cells
    h = 1.0 / cells
    values = np.ascontiguousarray(path.node_values)
    slopes = path.increments * cells

    same = float(np.sum(np.abs(slopes) ** p)) * 2.0 * h ** (q + 1.0) / (q * (q + 1.0))
    adjacent = float(
        quadrature.adjacent_kernel(
            slopes, h, p, q, quadrature.NODES, quadrature.WEIGHTS
        )
    )
    far = float(
        quadrature.far_kernel(
            values,
            slopes,
            h,
            p,
            beta,
            quadrature.distance_scales(cells, beta),
            quadrature.NODES,
            quadrature.WEIGHTS,
        )
    )
    return SeminormBreakdown(same_cell=same, adjacent=adjacent, far=far)


def seminorm_p(path: DyadicPath, params: SobolevParams) -> float:
    """Integral dupla singular (a p-ésima potência da seminorma)."""
    return seminorm_breakdown(path, params).total


def norm_p(path: DyadicPath, params: SobolevParams) -> float:
    """||f||^p: parte L^p mais a seminorma."""
    if path.level > settings.MAX_SOBOLEV_LEVEL:
        logger.warning(
            "nível acima do limite configurado; custo quadrático em 2^level",
            extra={"level_n": path.level},
        )
    return lp_part(path, params.p) + seminorm_p(path, params)


def norm(path: DyadicPath, params: SobolevParams) -> float:
    """(lp_part + seminorm_p)^(1/p)."""
    return norm_p(path, params) ** (1.0 / params.p)


def diff_norm(first: DyadicPath, second: DyadicPath, params: SobolevParams) -> float:
    """Norma da diferença pontual exata, no nível comum."""
    return norm(paths.combine(first, second, -1.0), params)


def embedding(params: SobolevParams) -> Embedding:
    """
    Regime de imersão de W_{eta,p}: Hölder de expoente eta - 1/p quando
    eta p > 1, senão L^r com r = p / (1 - eta p).
    """
    if params.eta * params.p > 1.0:
        return Embedding(regime="holder", holder_exponent=params.eta - 1.0 / params.p)
    if params.eta * params.p == 1.0:
        # caso crítico: todo L^r com r finito
        return Embedding(regime="lebesgue", lebesgue_exponent=float("inf"))
    return Embedding(
        regime="lebesgue",
        lebesgue_exponent=params.p / (1.0 - params.eta * params.p),
    )
