"""
Testes para a norma W_{eta,p} de caminhos lineares por partes.
"""

import math

import numpy as np
import pytest
from scipy import integrate

from app.core.exceptions import DomainError
from app.core.rng import RngStream
from app.schemas.common import SobolevParams
from app.schemas.path import DyadicPath
from app.services import paths, quadrature, randlaws, sobolev


def identity_norm_p(eta: float, p: float) -> float:
    """||t||^p = 1/(p+1) + 2/(q(q+1)), q = p(1 - eta)."""
    q = p * (1.0 - eta)
    return 1.0 / (p + 1.0) + 2.0 / (q * (q + 1.0))


@pytest.fixture
def monotone_path() -> DyadicPath:
    u = RngStream(31, 0).uniform(2**5)
    return paths.from_increments(u / 2**5, 5)


# ========== QUADRATURA ==========


@pytest.mark.unit
def test_gauss_legendre_exact_for_polynomials():
    """Testa que a ordem 3 integra t^5 exatamente em [0, 1]."""
    x, w = quadrature.gauss_legendre(3)
    assert np.sum(w * x**5) == pytest.approx(1.0 / 6.0, rel=1e-14)
    assert np.sum(w) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.unit
@pytest.mark.parametrize("p", [1.0, 1.2, 1.5])
@pytest.mark.parametrize("slope", [0.2, 1.5, -4.0])
def test_affine_power_integral_closed_form(p, slope):
    """Testa a integral de |1 + b c|^p em [0, 1] nos ramos da série e da primitiva."""
    end = 1.0 + slope
    if end >= 0.0:
        expected = (end ** (p + 1.0) - 1.0) / ((p + 1.0) * slope)
    else:
        expected = (1.0 + abs(end) ** (p + 1.0)) / ((p + 1.0) * abs(slope))
    value = quadrature.affine_power_integral(1.0, slope, 0.0, 1.0, p)
    assert value == pytest.approx(expected, rel=1e-12)


def scratch():
    return np.empty(4), np.zeros(3, dtype=np.bool_), np.zeros(3, dtype=np.bool_)


@pytest.mark.unit
@pytest.mark.parametrize("d", [12, 40, 300])
def test_far_expansion_matches_pair_integral(d):
    """Testa a expansão de pares distantes contra a integral graduada."""
    p, beta = 1.2, 1.24
    a, b, g0 = 0.011, -0.007, 0.09
    c = g0 - 0.5 * (a - b)
    nodes, weights = quadrature.NODES, quadrature.WEIGHTS
    exact = quadrature.far_pair_integral(c, a, b, float(d), p, beta, nodes, weights, *scratch())
    expansion = abs(g0) ** p * d ** (-beta) * quadrature.far_pair_expansion(
        g0, a, b, 1.0 / d, p, beta
    )
    assert expansion == pytest.approx(exact, rel=1e-7)


def adaptive_pair(c, a, b, d, p, beta):
    """Integral do par por quad aninhado, com os pontos de quebra da reta de zeros."""

    def inner(w):
        cut = (c + a * w) / b
        points = [cut] if 0.0 < cut < 1.0 else None
        value, _ = integrate.quad(
            lambda u: abs(c + a * w - b * u) ** p * (d + w - u) ** (-beta),
            0.0,
            1.0,
            points=points,
            epsabs=0.0,
            epsrel=1e-12,
            limit=200,
        )
        return value

    breaks = [x for x in (-c / a, (b - c) / a) if 0.0 < x < 1.0]
    value, _ = integrate.quad(
        inner, 0.0, 1.0, points=breaks or None, epsabs=0.0, epsrel=1e-11, limit=200
    )
    return value


@pytest.mark.unit
@pytest.mark.parametrize(
    "c, a, b, d",
    [(0.1, 0.9, 0.5, 2.0), (-0.05, 0.3, 0.4, 5.0), (0.02, -0.6, 0.1, 20.0)],
)
def test_far_pair_integral_with_sign_change(c, a, b, d):
    """Testa pares em que f(t) - f(s) troca de sinal contra quad adaptativo."""
    p, beta = 1.2, 1.24
    value = quadrature.far_pair_integral(
        c, a, b, d, p, beta, quadrature.NODES, quadrature.WEIGHTS, *scratch()
    )
    assert value == pytest.approx(adaptive_pair(c, a, b, d, p, beta), rel=1e-8)


# ========== PARTE L^p ==========


@pytest.mark.unit
def test_lp_part_constant():
    """Testa integral de |2|^1.5."""
    assert sobolev.lp_part(paths.affine_path(2.0, 0.0, 3), 1.5) == pytest.approx(2.0**1.5)


@pytest.mark.unit
def test_lp_part_zero_crossing():
    """Testa integral de |2t - 1|^p = 1/(p+1) com cruzamento de zero."""
    f = paths.affine_path(-1.0, 2.0, 0)
    assert sobolev.lp_part(f, 1.3) == pytest.approx(1.0 / 2.3, rel=1e-12)


@pytest.mark.unit
def test_lp_part_rejects_small_p():
    """Testa erro de domínio para p < 1."""
    with pytest.raises(DomainError):
        sobolev.lp_part(paths.identity_path(2), 0.5)


# ========== NORMA ==========


@pytest.mark.unit
@pytest.mark.parametrize("eta", [0.1, 0.25, 0.4])
@pytest.mark.parametrize("p", [1.0, 1.2, 1.5])
@pytest.mark.parametrize("level", [0, 2, 4])
def test_identity_closed_form(eta, p, level):
    """Testa ||t||^p contra a forma fechada em vários níveis."""
    params = SobolevParams(eta=eta, p=p)
    value = sobolev.norm_p(paths.identity_path(level), params)
    assert value == pytest.approx(identity_norm_p(eta, p), rel=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("eta", [0.1, 0.25, 0.4])
@pytest.mark.parametrize("p", [1.0, 1.2, 1.5])
def test_identity_closed_form_level_ten(eta, p):
    """Testa a forma fechada da identidade no nível 10."""
    params = SobolevParams(eta=eta, p=p)
    value = sobolev.norm_p(paths.identity_path(10), params)
    assert value == pytest.approx(identity_norm_p(eta, p), rel=1e-6)


@pytest.mark.unit
def test_identity_reference_value():
    """Testa ||t|| = 1.49802 para eta = 0.25, p = 1.2."""
    params = SobolevParams(eta=0.25, p=1.2)
    assert sobolev.norm(paths.identity_path(3), params) == pytest.approx(
        1.49802, abs=5e-6
    )
    assert identity_norm_p(0.25, 1.2) ** (1 / 1.2) == pytest.approx(1.49802, abs=5e-6)


@pytest.mark.unit
def test_constant_and_zero_paths(params):
    """Testa ||c|| = |c| e ||0|| = 0."""
    assert sobolev.norm(paths.affine_path(-2.0, 0.0, 4), params) == pytest.approx(2.0)
    assert sobolev.norm(paths.affine_path(0.0, 0.0, 4), params) == 0.0
    breakdown = sobolev.seminorm_breakdown(paths.affine_path(3.0, 0.0, 4), params)
    assert breakdown.total == 0.0


@pytest.mark.unit
def test_homogeneity(params, pareto):
    """Testa ||lambda f|| = |lambda| ||f||."""
    y = randlaws.sample_many(pareto, RngStream(32, 0), 2**5)
    f = paths.build_walk(y, 1.5, 5)
    base = sobolev.norm(f, params)
    for scale in (-3.0, 0.5, 7.25):
        assert sobolev.norm(scale * f, params) == pytest.approx(abs(scale) * base, rel=1e-12)


@pytest.mark.unit
def test_triangle_inequality(params, pareto):
    """Testa ||f + g|| <= ||f|| + ||g|| em pares aleatórios."""
    for r in range(5):
        y = randlaws.sample_many(pareto, RngStream(33, r), 2**5)
        z = randlaws.sample_many(pareto, RngStream(34, r), 2**4)
        f = paths.build_walk(y, 1.5, 5)
        g = paths.build_walk(z, 1.5, 4)
        assert sobolev.norm(f + g, params) <= (
            sobolev.norm(f, params) + sobolev.norm(g, params)
        ) * (1.0 + 1e-12)


@pytest.mark.unit
def test_refinement_invariance(monotone_path, params):
    """Testa que refinar o caminho não muda a norma."""
    base = sobolev.norm_p(monotone_path, params)
    for level in (6, 7):
        assert sobolev.norm_p(paths.refine(monotone_path, level), params) == pytest.approx(
            base, rel=1e-6
        )


@pytest.mark.unit
@pytest.mark.parametrize("seed", range(5))
def test_refinement_invariance_random_walk(params, pareto, seed):
    """Testa a invariância por refinamento em passeios de Pareto que cruzam os próprios valores."""
    y = randlaws.sample_many(pareto, RngStream(35, seed), 2**5)
    f = paths.build_walk(y, 1.5, 5)
    base = sobolev.norm_p(f, params)
    for level in (6, 7, 9):
        assert sobolev.norm_p(paths.refine(f, level), params) == pytest.approx(base, rel=1e-6)


@pytest.mark.unit
@pytest.mark.parametrize("seed", range(3))
def test_refinement_invariance_projection_gap(params, stable, seed):
    """Testa a invariância por refinamento em S - pi_2(S)."""
    s = paths.sample_stable_path(stable, 6, RngStream(36, seed))
    gap = s - paths.project(s, 2)
    base = sobolev.norm_p(gap, params)
    assert base > 0.0
    for level in (7, 8):
        assert sobolev.norm_p(paths.refine(gap, level), params) == pytest.approx(
            base, rel=1e-6
        )


@pytest.mark.unit
def test_breakdown_sums_to_seminorm(monotone_path, params):
    """Testa a soma das partes e a positividade de cada uma."""
    parts = sobolev.seminorm_breakdown(monotone_path, params)
    assert parts.same_cell > 0 and parts.adjacent > 0 and parts.far > 0
    assert parts.total == pytest.approx(sobolev.seminorm_p(monotone_path, params))


@pytest.mark.unit
def test_single_cell_is_all_same_cell(params):
    """Testa que no nível 0 só há o par da mesma célula."""
    parts = sobolev.seminorm_breakdown(paths.identity_path(0), params)
    assert parts.adjacent == 0.0 and parts.far == 0.0
    assert parts.same_cell == pytest.approx(2.0 / (params.q * (params.q + 1.0)))


@pytest.mark.unit
def test_diff_norm(monotone_path, params):
    """Testa diff_norm nula entre cópias e simétrica."""
    other = paths.identity_path(3)
    assert sobolev.diff_norm(monotone_path, monotone_path, params) == 0.0
    assert sobolev.diff_norm(monotone_path, other, params) == pytest.approx(
        sobolev.diff_norm(other, monotone_path, params), rel=1e-12
    )


# ========== IMERSÃO ==========


@pytest.mark.unit
def test_embedding_regimes():
    """Testa os regimes Hölder, crítico e Lebesgue."""
    lebesgue = sobolev.embedding(SobolevParams(eta=0.25, p=1.2))
    assert lebesgue.regime == "lebesgue"
    assert lebesgue.lebesgue_exponent == pytest.approx(1.2 / 0.7)

    holder = sobolev.embedding(SobolevParams(eta=0.6, p=1.9))
    assert holder.regime == "holder"
    assert holder.holder_exponent == pytest.approx(0.6 - 1.0 / 1.9)

    critical = sobolev.embedding(SobolevParams(eta=0.5, p=2.0))
    assert critical.regime == "lebesgue"
    assert math.isinf(critical.lebesgue_exponent)
