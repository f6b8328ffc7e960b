# app/services/randlaws.py

"""
Amostradores exatos, quantis e momentos fechados das leis de incremento e
da lei alfa-estável simétrica.

Todas as funções são puras dado o fluxo: o mesmo (master_seed, stream_index)
produz a mesma sequência de sorteios.
"""
from typing import Union

import numpy as np
from scipy import integrate, special

from app.core.config import MIN_POOL_SIZE
from app.core.exceptions import ConfigurationError, DomainError
from app.core.logging import get_logger
from app.core.rng import RngStream
from app.schemas.law import (
    HeavyTailLaw,
    PerturbedTailLaw,
    QuantileTable,
    StableLaw,
    SymmetricParetoLaw,
)

logger = get_logger(__name__)

ArrayLike = Union[float, np.ndarray]

# Tolerância relativa da bisseção: |S(t) - alvo| <= tol * alvo
BISECTION_TOLERANCE = 1e-12
_MAX_BISECTION_STEPS = 200


def _check_unit_interval(u: ArrayLike) -> np.ndarray:
    arr = np.asarray(u, dtype=np.float64)
    if np.any(~((arr > 0.0) & (arr < 1.0))):
        raise DomainError("u deve estar em (0, 1)", field="u")
    return arr


def _scalar_or_array(result: np.ndarray, like: ArrayLike) -> ArrayLike:
    return float(result) if np.ndim(like) == 0 else result


# ========== PARETO SIMETRIZADA ==========


def pareto_quantile(law: SymmetricParetoLaw, u: ArrayLike) -> ArrayLike:
    """
    Inversa generalizada (convenção contínua à esquerda) da cdf da Pareto.

    -(2u)^(-1/alpha) para u <= 1/2 (logo -1 em u = 1/2) e
    (2(1 - u))^(-1/alpha) para u > 1/2.
    """
    arr = _check_unit_interval(u)
    inv = -1.0 / law.alpha
    out = np.where(
        arr <= 0.5,
        -np.power(2.0 * arr, inv),
        np.power(2.0 * (1.0 - arr), inv),
    )
    return _scalar_or_array(out, u)


# ========== CAUDA PERTURBADA ==========


def perturbed_survival(law: PerturbedTailLaw, t: ArrayLike) -> ArrayLike:
    """P(Y > t) para t >= 0."""
    arr = np.asarray(t, dtype=np.float64)
    tail_t = np.maximum(arr, 1.0)
    tail = (law.A + law.K * tail_t ** (-law.gamma)) / (2.0 * tail_t**law.alpha)
    core = 0.5 - law.core_mass * np.minimum(arr, 1.0) / 2.0
    return _scalar_or_array(np.where(arr >= 1.0, tail, core), t)


def cdf(law: HeavyTailLaw, y: ArrayLike) -> ArrayLike:
    """Função de distribuição explícita de uma lei de incremento."""
    arr = np.asarray(y, dtype=np.float64)
    if isinstance(law, SymmetricParetoLaw):
        law = PerturbedTailLaw(alpha=law.alpha, A=1.0, K=0.0)
    lower = perturbed_survival(law, np.abs(arr))
    out = np.where(arr < 0.0, lower, 1.0 - lower)
    return _scalar_or_array(out, y)


def _solve_tail(law: PerturbedTailLaw, target: np.ndarray) -> np.ndarray:
    """
    Resolve P(Y > t) = target em t >= 1 por bisseção vetorizada, com
    parada relativa ao alvo (válida também no extremo da cauda).

    Intervalo inicial apertado pelas caudas A/(2t^a) <= S(t) <= (A+K)/(2t^a).
    """
    inv = 1.0 / law.alpha
    lo = np.maximum((law.A / (2.0 * target)) ** inv, 1.0)
    hi = np.maximum(((law.A + law.K) / (2.0 * target)) ** inv, 1.0)
    if law.K == 0.0:
        return lo
    for _ in range(_MAX_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        s_mid = perturbed_survival(law, mid)
        above = s_mid > target
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
        if np.all(np.abs(s_mid - target) <= BISECTION_TOLERANCE * target) or np.all(
            hi - lo <= 4.0 * np.finfo(np.float64).eps * hi
        ):
            return mid
    logger.debug("bisseção atingiu o limite de passos", extra={"steps": _MAX_BISECTION_STEPS})
    return 0.5 * (lo + hi)


def perturbed_quantile(law: PerturbedTailLaw, u: ArrayLike) -> ArrayLike:
    """Inversa generalizada da cdf da lei de cauda perturbada."""
    arr = np.atleast_1d(_check_unit_interval(u))
    half_tail = (law.A + law.K) / 2.0
    out = np.empty_like(arr)

    low = arr <= half_tail
    high = arr >= 1.0 - half_tail
    mid = ~(low | high)

    if np.any(low):
        out[low] = -_solve_tail(law, arr[low])
    if np.any(high):
        out[high] = _solve_tail(law, 1.0 - arr[high])
    if np.any(mid):
        # massa uniforme em [-1, 1]
        out[mid] = -1.0 + 2.0 * (arr[mid] - half_tail) / law.core_mass
    return _scalar_or_array(out.reshape(np.shape(u)), u)


def quantile(law: HeavyTailLaw, u: ArrayLike) -> ArrayLike:
    """F^-1(u) para qualquer lei de incremento."""
    if isinstance(law, SymmetricParetoLaw):
        return pareto_quantile(law, u)
    return perturbed_quantile(law, u)


# ========== AMOSTRAGEM ==========


def sample_many(law: HeavyTailLaw, stream: RngStream, size: int) -> np.ndarray:
    """`size` variáveis iid da lei, por transformação inversa."""
    return np.asarray(quantile(law, stream.uniform(size)), dtype=np.float64)


def sample(law: HeavyTailLaw, stream: RngStream) -> float:
    """Uma variável da lei a partir de um único uniforme."""
    return float(sample_many(law, stream, 1)[0])


def cms_transform(alpha: float, angle: ArrayLike, expo: ArrayLike) -> ArrayLike:
    """
    Chambers-Mallows-Stuck simétrico:
    sin(a phi) / cos(phi)^(1/a) * (cos((1 - a) phi) / W)^((1 - a)/a).
    """
    angle = np.asarray(angle, dtype=np.float64)
    expo = np.asarray(expo, dtype=np.float64)
    out = (
        np.sin(alpha * angle)
        / np.cos(angle) ** (1.0 / alpha)
        * (np.cos((1.0 - alpha) * angle) / expo) ** ((1.0 - alpha) / alpha)
    )
    return out


def sample_stable_many(law: StableLaw, stream: RngStream, size: int) -> np.ndarray:
    """`size` variáveis alfa-estáveis simétricas com f.c. exp(-|theta|^alpha)."""
    angle = stream.angle(size)
    expo = stream.exponential(size)
    return cms_transform(law.alpha, angle, expo)


def sample_stable(law: StableLaw, stream: RngStream) -> float:
    """Uma variável alfa-estável (um uniforme em (-pi/2, pi/2) e uma exponencial)."""
    return float(sample_stable_many(law, stream, 1)[0])


# ========== TABELA DE QUANTIS ==========


def build_quantile_table(
    law: StableLaw, pool_size: int, stream: RngStream
) -> QuantileTable:
    """Pool ordenado de `pool_size` sorteios estáveis independentes."""
    if pool_size < MIN_POOL_SIZE:
        raise ConfigurationError(
            f"pool_size={pool_size} viola pool_size >= {MIN_POOL_SIZE}",
            field="pool_size",
        )
    pool = np.sort(sample_stable_many(law, stream, pool_size))
    logger.debug(
        "tabela de quantis construída",
        extra={"pool_size": pool_size, "alpha": law.alpha},
    )
    return QuantileTable(alpha=law.alpha, sorted_pool=pool)


def table_quantile(table: QuantileTable, u: ArrayLike) -> ArrayLike:
    """Interpolação linear entre estatísticas de ordem no posto u (N - 1)."""
    arr = _check_unit_interval(u)
    pool = table.sorted_pool
    rank = arr * (pool.size - 1)
    lower = np.floor(rank).astype(np.int64)
    upper = np.minimum(lower + 1, pool.size - 1)
    frac = rank - lower
    out = pool[lower] + frac * (pool[upper] - pool[lower])
    return _scalar_or_array(out, u)


def limit_scale(law: Union[HeavyTailLaw, QuantileTable]) -> float:
    """
    Escala sigma do limite: N^(-1/alpha) (Y_1 + ... + Y_N) converge para
    sigma S(1), com sigma^alpha = A Gamma(1 - alpha) cos(pi alpha / 2).

    A perturbação K t^-gamma não altera o limite; a tabela de quantis já
    representa a lei padronizada (sigma = 1).
    """
    if isinstance(law, QuantileTable):
        return 1.0
    amplitude = 1.0 if isinstance(law, SymmetricParetoLaw) else law.A
    a = law.alpha
    return float(
        (amplitude * special.gamma(1.0 - a) * np.cos(0.5 * np.pi * a)) ** (1.0 / a)
    )


# ========== MOMENTOS ==========


def stable_abs_moment(alpha: float, p: float) -> float:
    """E|S(1)|^p fechado para a estável simétrica padronizada, 0 < p < alpha."""
    if not (0.0 < p < alpha):
        raise DomainError(f"p={p} viola 0 < p < alpha={alpha}", field="p")
    num = 2.0**p * special.gamma((1.0 + p) / 2.0) * special.gamma(1.0 - p / alpha)
    return float(num / (np.sqrt(np.pi) * special.gamma(1.0 - p / 2.0)))


def _perturbed_abs_moment(law: PerturbedTailLaw, p: float) -> float:
    """
    E|Y|^p por integração adaptativa da densidade explícita.

    Na cauda usa y = x^(-1/(alpha - p)), que torna constante a parte de
    Pareto do integrando e leva [1, inf) em (0, 1].
    """
    a = law.alpha
    s = 1.0 / (a - p)

    def density(y: float) -> float:
        # densidade bilateral em |y| > 1 (as duas caudas juntas)
        return a * law.A * y ** (-a - 1.0) + (a + law.gamma) * law.K * y ** (
            -a - law.gamma - 1.0
        )

    def transformed(x: float) -> float:
        y = x ** (-s)
        return y**p * density(y) * s * x ** (-s - 1.0)

    tail, _ = integrate.quad(transformed, 0.0, 1.0, epsabs=0.0, epsrel=1e-10, limit=200)
    core = law.core_mass / (p + 1.0)
    return float(core + tail)


def abs_moment(law: Union[HeavyTailLaw, StableLaw], p: float) -> float:
    """E|Y|^p para 0 < p < alpha."""
    if not (0.0 < p < law.alpha):
        raise DomainError(
            f"p={p} viola 0 < p < alpha={law.alpha} (momento diverge)", field="p"
        )
    if isinstance(law, StableLaw):
        return stable_abs_moment(law.alpha, p)
    if isinstance(law, SymmetricParetoLaw):
        return law.alpha / (law.alpha - p)
    return _perturbed_abs_moment(law, p)


def phi_p(x: ArrayLike, p: float) -> ArrayLike:
    """
    Regularização de |x|^p: |x|^p fora de [-1, 1] e a parábola
    (p/2) x^2 + (1 - p/2) dentro (C^1 em |x| = 1).
    """
    if not (1.0 <= p < 2.0):
        raise DomainError(f"p={p} viola 1 <= p < 2", field="p")
    arr = np.asarray(x, dtype=np.float64)
    ax = np.abs(arr)
    out = np.where(ax > 1.0, ax**p, 0.5 * p * arr * arr + (1.0 - 0.5 * p))
    return _scalar_or_array(out, x)
