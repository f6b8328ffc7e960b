# app/services/paths.py

"""
Caminhos diádicos lineares por partes: o passeio interpolado X_n, o
esqueleto estável pi_m(S) e o operador de projeção pi_m.

Os caminhos são guardados pelos valores nos nós; a projeção em nível m é a
subamostragem dos nós grossos k 2^-m (exata para grades diádicas aninhadas).
"""
import csv
import math
from pathlib import Path
from typing import Sequence, TextIO, Union

import numpy as np

from app.core.exceptions import ConfigurationError, DomainError, ShapeError
from app.core.rng import RngStream
from app.schemas.law import StableLaw
from app.schemas.path import DyadicPath
from app.services import randlaws

ArrayLike = Union[float, np.ndarray]

# Tolerância para reconhecer abscissas diádicas lidas de CSV
_NODE_TOLERANCE = 1e-12


def _check_length(values: np.ndarray, n: int, name: str = "increments") -> None:
    if n < 0:
        raise DomainError(f"n={n} viola n >= 0", field="n")
    if values.ndim != 1 or values.size != 2**n:
        raise ShapeError(
            f"{name} tem {values.size} valores; nível {n} exige 2^n = {2**n}",
            field=name,
        )


def build_walk(increments: Sequence[float], alpha: float, n: int) -> DyadicPath:
    """
    Passeio interpolado: nó k vale 2^(-n/alpha) (Y_1 + ... + Y_k).
    """
    y = np.asarray(increments, dtype=np.float64)
    _check_length(y, n)
    scale = 2.0 ** (-n / alpha)
    nodes = np.concatenate(([0.0], np.cumsum(y))) * scale
    return DyadicPath(level=n, node_values=nodes)


def from_increments(increments: Sequence[float], level: int) -> DyadicPath:
    """Caminho com valores nos nós dados pelas somas acumuladas, sem escala."""
    z = np.asarray(increments, dtype=np.float64)
    _check_length(z, level)
    return DyadicPath(level=level, node_values=np.concatenate(([0.0], np.cumsum(z))))


def evaluate(path: DyadicPath, t: ArrayLike) -> ArrayLike:
    """
    Interpolação afim exata; nos nós devolve node_values[k] sem erro.
    """
    arr = np.asarray(t, dtype=np.float64)
    if np.any(~((arr >= 0.0) & (arr <= 1.0))):
        raise DomainError("t deve estar em [0, 1]", field="t")
    scaled = arr * path.cells
    k = np.floor(scaled).astype(np.int64)
    frac = scaled - k
    # nó extra repetido para t = 1 (k = cells, frac = 0)
    v = np.append(path.node_values, path.node_values[-1])
    out = np.where(frac == 0.0, v[k], v[k] + frac * (v[k + 1] - v[k]))
    return float(out) if np.ndim(t) == 0 else out


def project(path: DyadicPath, m: int) -> DyadicPath:
    """pi_m: caminho de nível m que coincide com `path` nos nós k 2^-m."""
    if not (0 <= m <= path.level):
        raise DomainError(f"m={m} viola 0 <= m <= level={path.level}", field="m")
    stride = 2 ** (path.level - m)
    return DyadicPath(level=m, node_values=path.node_values[::stride])


def block_sums(
    increments: Sequence[float], n: int, m: int, alpha: float
) -> np.ndarray:
    """
    U_{m,j} = 2^(-(n-m)/alpha) vezes a soma dos incrementos do bloco j, com
    blocos de comprimento 2^(n-m).
    """
    y = np.asarray(increments, dtype=np.float64)
    _check_length(y, n)
    if not (0 <= m <= n):
        raise DomainError(f"m={m} viola 0 <= m <= n={n}", field="m")
    blocks = y.reshape(2**m, 2 ** (n - m)).sum(axis=1)
    return blocks * 2.0 ** (-(n - m) / alpha)


def sample_stable_path(law: StableLaw, level: int, stream: RngStream) -> DyadicPath:
    """
    Esqueleto estável exato em distribuição: incrementos iid 2^(-level/alpha) S(1).
    """
    if level < 0:
        raise DomainError(f"level={level} viola level >= 0", field="level")
    z = randlaws.sample_stable_many(law, stream, 2**level)
    return from_increments(z * 2.0 ** (-level / law.alpha), level)


def refine(path: DyadicPath, level: int) -> DyadicPath:
    """Mesmo caminho descrito num nível mais fino (refinamento exato)."""
    if level < path.level:
        raise DomainError(
            f"level={level} viola level >= {path.level} no refinamento", field="level"
        )
    if level == path.level:
        return path
    factor = 2 ** (level - path.level)
    v = path.node_values
    frac = np.arange(factor, dtype=np.float64) / factor
    inner = v[:-1, None] + frac[None, :] * np.diff(v)[:, None]
    return DyadicPath(level=level, node_values=np.append(inner.ravel(), v[-1]))


def combine(first: DyadicPath, second: DyadicPath, weight: float) -> DyadicPath:
    """first + weight * second, após refinamento ao nível comum."""
    level = max(first.level, second.level)
    a = refine(first, level).node_values
    b = refine(second, level).node_values
    return DyadicPath(level=level, node_values=a + weight * b)


def affine_path(c0: float, c1: float, level: int) -> DyadicPath:
    """f(t) = c0 + c1 t amostrado nos nós do nível `level`."""
    if level < 0:
        raise DomainError(f"level={level} viola level >= 0", field="level")
    t = np.arange(2**level + 1, dtype=np.float64) / 2**level
    return DyadicPath(level=level, node_values=c0 + c1 * t)


def identity_path(level: int) -> DyadicPath:
    return affine_path(0.0, 1.0, level)


def haar_coefficients(path: DyadicPath, m: int) -> np.ndarray:
    """
    <f, h_m^j> = sqrt(2^m) (f(t_{j+1}) - f(t_j)) nos nós grossos de nível m.
    """
    coarse = project(path, m)
    return math.sqrt(2**m) * np.diff(coarse.node_values)


def from_haar_coefficients(
    coefficients: Sequence[float], m: int, start: float = 0.0
) -> DyadicPath:
    """Inverso de `haar_coefficients`: caminho de nível m com f(0) = start."""
    c = np.asarray(coefficients, dtype=np.float64)
    _check_length(c, m, name="coefficients")
    increments = c / math.sqrt(2**m)
    nodes = start + np.concatenate(([0.0], np.cumsum(increments)))
    return DyadicPath(level=m, node_values=nodes)


# ========== CSV ==========


def to_csv(path: DyadicPath, stream: TextIO) -> None:
    """Escreve (t, value), um nó por linha; floats em repr (ida e volta exata)."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["t", "value"])
    for t, v in zip(path.nodes, path.node_values):
        writer.writerow([repr(float(t)), repr(float(v))])


def write_csv(path: DyadicPath, file: Union[str, Path]) -> None:
    with open(file, "w", encoding="utf-8", newline="") as fh:
        to_csv(path, fh)


def read_csv(file: Union[str, Path]) -> DyadicPath:
    """
    Lê um CSV (t, value) com cabeçalho e valida os nós diádicos
    t_k = k / 2^n, estritamente crescentes, 2^n + 1 linhas.
    """
    try:
        with open(file, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as e:
        raise ConfigurationError(f"não foi possível ler {file}: {e}", field="path")

    if not rows or [c.strip() for c in rows[0]] != ["t", "value"]:
        raise ConfigurationError("CSV de caminho exige o cabeçalho 't,value'", field="path")

    body = [r for r in rows[1:] if r]
    try:
        data = np.array([[float(c) for c in r] for r in body], dtype=np.float64)
    except ValueError as e:
        raise ConfigurationError(f"CSV de caminho malformado: {e}", field="path")
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 2:
        raise ConfigurationError(
            "CSV de caminho malformado: esperado ao menos 2 linhas com 2 colunas",
            field="path",
        )

    cells = data.shape[0] - 1
    level = cells.bit_length() - 1
    if 2**level != cells:
        raise ConfigurationError(
            f"CSV com {data.shape[0]} nós; esperado 2^n + 1", field="path"
        )
    t = data[:, 0]
    if np.any(np.diff(t) <= 0.0):
        raise ConfigurationError("abscissas t devem ser estritamente crescentes", field="path")
    expected = np.arange(cells + 1, dtype=np.float64) / cells
    if np.max(np.abs(t - expected)) > _NODE_TOLERANCE:
        raise ConfigurationError(
            f"abscissas t não são os nós diádicos k/2^{level}", field="path"
        )
    return DyadicPath(level=level, node_values=data[:, 1])
