# app/cli/commands/plan.py

"""
Comando `plan`: kappa, upsilon e os níveis m = round(kappa n) e m ótimo.
"""

import json
from typing import Annotated, Optional

import typer

from app.cli import deps
from app.middleware.logging import logged_command
from app.services import experiments


@logged_command("plan")
def plan(
    alpha: Annotated[float, typer.Option("--alpha", help="1 < alpha < 2")] = 1.5,
    eta: Annotated[float, typer.Option("--eta", help="0 < eta < 1/alpha")] = 0.2,
    p: Annotated[float, typer.Option("--p", help="1 <= p < alpha")] = 1.2,
    gamma: Annotated[
        Optional[float],
        typer.Option("--gamma", help="Decaimento da perturbação (omitido: infinito)"),
    ] = None,
    n_values: Annotated[str, typer.Option("--n-values", help="'3,4,5' ou '3..9'")] = "3..9",
):
    """Imprime o plano em JSON na saída padrão."""
    kappa, upsilon = experiments.plan_kappa_upsilon(alpha, eta, p, gamma)
    levels = []
    for n in deps.parse_n_values(n_values):
        m = experiments.level_for(n, kappa)
        levels.append(
            {
                "n": n,
                "m": m,
                "m_optimal": experiments.optimal_level(n, alpha, eta, p, gamma),
                "bound_terms": list(experiments.bound_terms(n, m, alpha, eta, p, gamma)),
            }
        )
    payload = {"kappa": kappa, "upsilon": upsilon, "levels": levels}
    typer.echo(json.dumps(payload, indent=2))
