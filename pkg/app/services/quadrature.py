# app/services/quadrature.py

"""
Regra de Gauss-Legendre e núcleos compilados (numba) da norma W_{eta,p}.

Convenções:
    - NODES/WEIGHTS guardam a regra de ordem BASE_ORDER em [0, 1];
    - integrais de |a + b c|^p numa direção são exatas (primitiva, ou série
      centrada quando a variação relativa é pequena);
    - onde |f(t) - f(s)| cruza zero o intervalo é partido e os nós são
      graduados em direção ao ponto singular;
    - os núcleos somam pares de células em ordem row-major, sem fastmath e
      sem paralelismo, então o resultado é estável bit a bit.
"""
import numpy as np
from numba import njit

BASE_ORDER = 8

# Pares distantes com d >= TAYLOR_MIN_DISTANCE e variação relativa
# (|a| + |b|) / 2 <= TAYLOR_MAX_SPREAD * |g0| usam a expansão de quarta ordem
TAYLOR_MIN_DISTANCE = 12
TAYLOR_MAX_SPREAD = 0.25

# Raio relativo (em comprimentos de subintervalo) para graduar um extremo
_GRADING_REACH = 0.5


def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nós e pesos de Gauss-Legendre de ordem `order` mapeados para [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


def _build_rule() -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = gauss_legendre(BASE_ORDER)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


NODES, WEIGHTS = _build_rule()


def distance_scales(cells: int, beta: float) -> np.ndarray:
    """d^(-beta) para d = 1..cells-1 (índice d; a posição 0 não é usada)."""
    scales = np.zeros(max(cells, 1))
    d = np.arange(1, scales.size, dtype=np.float64)
    scales[1:] = d ** (-beta)
    return scales


@njit(cache=True)
def affine_power_integral(a, b, c1, c2, p):
    """
    Integral exata de |a + b c|^p em c de c1 a c2.

    Variação pequena frente ao valor central: série de |1 + r V|^p com V
    uniforme centrada, até r^8 (resto < 1e-10 relativo para |r| <= 1/2).
    Caso contrário a primitiva, separando o cruzamento de zero.
    """
    length = c2 - c1
    if length <= 0.0:
        return 0.0
    mid = a + b * 0.5 * (c1 + c2)
    swing = abs(b) * length
    if swing <= 0.5 * abs(mid):
        if swing == 0.0:
            return abs(mid) ** p * length
        r2 = (swing / mid) ** 2
        k2 = p * (p - 1.0) / 2.0
        k4 = k2 * (p - 2.0) * (p - 3.0) / 12.0
        k6 = k4 * (p - 4.0) * (p - 5.0) / 30.0
        k8 = k6 * (p - 6.0) * (p - 7.0) / 56.0
        series = 1.0 + r2 * (k2 / 12.0 + r2 * (k4 / 80.0 + r2 * (k6 / 448.0 + r2 * k8 / 2304.0)))
        return abs(mid) ** p * length * series
    g1 = a + b * c1
    g2 = a + b * c2
    m1 = abs(g1) ** (p + 1.0)
    m2 = abs(g2) ** (p + 1.0)
    if g1 * g2 < 0.0:
        return (m1 + m2) / ((p + 1.0) * abs(b))
    return abs(m2 - m1) / ((p + 1.0) * abs(b))


@njit(cache=True)
def _zero(k0, k1):
    """Raiz de k0 + k1 x (inf quando k1 = 0)."""
    if k1 == 0.0:
        return np.inf
    return -k0 / k1


@njit(cache=True)
def _segments(lo, hi, z1, z2, points, left, right):
    """
    Parte [lo, hi] nos zeros interiores z1, z2 e marca para graduação os
    extremos que têm algum zero a até meio subintervalo.
    Devolve o número de subintervalos (pontos em points[0..count]).
    """
    first = min(z1, z2)
    second = max(z1, z2)
    points[0] = lo
    count = 1
    if lo < first < hi:
        points[count] = first
        count += 1
    if lo < second < hi and second > points[count - 1]:
        points[count] = second
        count += 1
    points[count] = hi
    for s in range(count):
        s0 = points[s]
        s1 = points[s + 1]
        reach = _GRADING_REACH * (s1 - s0)
        left[s] = abs(z1 - s0) <= reach or abs(z2 - s0) <= reach
        right[s] = abs(z1 - s1) <= reach or abs(z2 - s1) <= reach
    return count


@njit(cache=True)
def _graded_node(x, grade_left, grade_right):
    """Mapa x -> (phi(x), phi'(x)) em [0, 1] que concentra nós nos extremos marcados."""
    if grade_left and grade_right:
        return x**3 * (10.0 - 15.0 * x + 6.0 * x * x), 30.0 * x * x * (1.0 - x) ** 2
    if grade_left:
        return x**3, 3.0 * x * x
    if grade_right:
        y = 1.0 - x
        return 1.0 - y**3, 3.0 * y * y
    return x, 1.0


@njit(cache=True)
def lp_kernel(values, p):
    """Soma por célula de h * integral de |f|^p (f afim na célula)."""
    cells = values.size - 1
    h = 1.0 / cells
    total = 0.0
    for k in range(cells):
        a = values[k]
        b = values[k + 1] - values[k]
        total += affine_power_integral(a, b, 0.0, 1.0, p)
    return total * h


@njit(cache=True)
def adjacent_kernel(slopes, h, p, q, nodes, weights):
    """
    Pares de células vizinhas (i, i + 1), ambas as ordens.

    Com a = 1 - u, b = w e a = r c, b = r (1 - c) o integrando vira
    r^q |L_j + (L_i - L_j) c|^p; r <= 1 é separável (fator 1/(q + 1)),
    1 < r <= 2 integra c exatamente em [1 - 1/r, 1/r] e usa Gauss em r,
    partido onde o zero c* = -L_j / (L_i - L_j) toca um dos limites.
    """
    points = np.empty(4)
    left = np.zeros(3, dtype=np.bool_)
    right = np.zeros(3, dtype=np.bool_)
    total = 0.0
    for i in range(slopes.size - 1):
        lj = slopes[i + 1]
        diff = slopes[i] - lj
        inner = affine_power_integral(lj, diff, 0.0, 1.0, p)
        z1 = np.inf
        z2 = np.inf
        if diff != 0.0:
            root = -lj / diff
            if root != 1.0:
                z1 = 1.0 / (1.0 - root)
            if root != 0.0:
                z2 = 1.0 / root
        count = _segments(1.0, 2.0, z1, z2, points, left, right)
        outer = 0.0
        for s in range(count):
            s0 = points[s]
            length = points[s + 1] - s0
            for k in range(nodes.size):
                phi, dphi = _graded_node(nodes[k], left[s], right[s])
                r = s0 + length * phi
                g = affine_power_integral(lj, diff, 1.0 - 1.0 / r, 1.0 / r, p)
                outer += weights[k] * length * dphi * r**q * g
        total += inner / (q + 1.0) + outer
    return 2.0 * total * h ** (q + 1.0)


@njit(cache=True)
def far_pair_integral(c, a, b, d, p, beta, nodes, weights, points, left, right):
    """
    Integral de |c + a w - b u|^p (d + w - u)^(-beta) no quadrado unitário.

    Em (sigma, tau) = (u, w - u) a integral em sigma é exata; tau percorre
    [-1, 0] e [0, 1], partidos onde a reta de zeros sai do quadrado.
    `points`, `left` e `right` são áreas de trabalho.
    """
    e = a - b
    total = 0.0
    for half in range(2):
        if half == 0:
            lo = -1.0
            hi = 0.0
            z1 = _zero(c, b)
            z2 = _zero(c + e, a)
        else:
            lo = 0.0
            hi = 1.0
            z1 = _zero(c, a)
            z2 = _zero(c + e, b)
        count = _segments(lo, hi, z1, z2, points, left, right)
        for s in range(count):
            s0 = points[s]
            length = points[s + 1] - s0
            for k in range(nodes.size):
                phi, dphi = _graded_node(nodes[k], left[s], right[s])
                tau = s0 + length * phi
                if half == 0:
                    lower = -tau
                    upper = 1.0
                else:
                    lower = 0.0
                    upper = 1.0 - tau
                g = affine_power_integral(c + a * tau, e, lower, upper, p)
                total += weights[k] * length * dphi * g * (d + tau) ** (-beta)
    return total


@njit(cache=True)
def far_pair_expansion(g0, a, b, inv_d, p, beta):
    """
    Média de (1 + X)^p (1 + tau/d)^(-beta) no quadrado, com X = A W - B U,
    tau = W - U, A = a/g0, B = b/g0 e W, U uniformes em [-1/2, 1/2].

    Expansão até a quarta ordem; os termos de ordem ímpar têm média nula.
    """
    c1 = p
    c2 = c1 * (p - 1.0) / 2.0
    c3 = c2 * (p - 2.0) / 3.0
    c4 = c3 * (p - 3.0) / 4.0
    e1 = -beta
    e2 = e1 * (-beta - 1.0) / 2.0
    e3 = e2 * (-beta - 2.0) / 3.0
    e4 = e3 * (-beta - 3.0) / 4.0

    m2 = 1.0 / 12.0
    m4 = 1.0 / 80.0
    m22 = 1.0 / 144.0
    A = a / g0
    B = b / g0
    A2 = A * A
    B2 = B * B
    AB = A * B
    S = A + B
    Q = A2 + B2

    ex2 = Q * m2
    ext = S * m2
    et2 = 2.0 * m2
    ex4 = (A2 * A2 + B2 * B2) * m4 + 6.0 * A2 * B2 * m22
    ex3t = (A2 * A + B2 * B) * m4 + 3.0 * AB * S * m22
    ex2t2 = Q * m4 + (Q + 4.0 * AB) * m22
    ext3 = S * (m4 + 3.0 * m22)
    et4 = 2.0 * m4 + 6.0 * m22

    y = inv_d
    return (
        1.0
        + c2 * ex2
        + c4 * ex4
        + y * e1 * (c1 * ext + c3 * ex3t)
        + y * y * e2 * (et2 + c2 * ex2t2)
        + y**3 * c1 * e3 * ext3
        + y**4 * e4 * et4
    )


@njit(cache=True)
def far_kernel(values, slopes, h, p, beta, scales, nodes, weights):
    """
    Pares de células (i, j) com j - i >= 2, ambas as ordens.

    s = (i + u) h, t = (j + w) h, f(t) - f(s) = c + a w - b u com
    c = f_j - f_i, a = h L_j, b = h L_i. Pares distantes sem cruzamento de
    zero usam a expansão (uma potência por par); os demais, far_pair_integral.
    """
    cells = slopes.size
    points = np.empty(4)
    left = np.zeros(3, dtype=np.bool_)
    right = np.zeros(3, dtype=np.bool_)
    total = 0.0
    for i in range(cells):
        vi = values[i]
        b = h * slopes[i]
        for j in range(i + 2, cells):
            d = j - i
            c = values[j] - vi
            a = h * slopes[j]
            g0 = c + 0.5 * (a - b)
            spread = 0.5 * (abs(a) + abs(b))
            if g0 == 0.0 and spread == 0.0:
                continue
            if d >= TAYLOR_MIN_DISTANCE and spread <= TAYLOR_MAX_SPREAD * abs(g0):
                mean = far_pair_expansion(g0, a, b, 1.0 / d, p, beta)
                total += abs(g0) ** p * scales[d] * mean
            else:
                total += far_pair_integral(
                    c, a, b, float(d), p, beta, nodes, weights, points, left, right
                )
    return 2.0 * total * h ** (2.0 - beta)
