# app/cli/commands/sample.py

"""
Comando `sample`: sorteios iid de uma lei de incremento ou da estável.
"""

from pathlib import Path
from enum import Enum
from typing import Annotated, Union

import typer

from app.cli import output
from app.cli.deps import SeedOpt
from app.core.rng import RngStream
from app.middleware.logging import logged_command
from app.schemas.law import PerturbedTailLaw, StableLaw, SymmetricParetoLaw
from app.services import randlaws
from app.services.experiments import TAG_SAMPLE


class LawName(str, Enum):
    pareto = "pareto"
    perturbed = "perturbed"
    stable = "stable"


def build_law(
    law: LawName, alpha: float, A: float, K: float, gamma: float
) -> Union[SymmetricParetoLaw, PerturbedTailLaw, StableLaw]:
    """Lei a partir das flags; parâmetros inválidos levantam ValidationError."""
    if law == LawName.pareto:
        return SymmetricParetoLaw(alpha=alpha)
    if law == LawName.perturbed:
        return PerturbedTailLaw(alpha=alpha, A=A, K=K, gamma=gamma)
    return StableLaw(alpha=alpha)


@logged_command("sample")
def sample(
    law: Annotated[
        LawName, typer.Option("--law", help="Lei dos sorteios")
    ] = LawName.pareto,
    alpha: Annotated[float, typer.Option("--alpha", help="1 < alpha < 2")] = 1.5,
    A: Annotated[float, typer.Option("--A", help="Amplitude da cauda")] = 1.0,
    K: Annotated[float, typer.Option("--K", help="Amplitude da perturbação")] = 0.0,
    gamma: Annotated[float, typer.Option("--gamma", help="gamma > 0")] = 1.0,
    count: Annotated[int, typer.Option("--count", "-n", min=1)] = 1000,
    seed: SeedOpt = None,
    out: Annotated[Path, typer.Option("--out", "-o", help="Arquivo CSV")] = Path(
        "sample.csv"
    ),
):
    """Escreve `count` sorteios em CSV (index, value)."""
    chosen = build_law(law, alpha, A, K, gamma)
    stream = RngStream(seed or 0, (TAG_SAMPLE,))
    if isinstance(chosen, StableLaw):
        values = randlaws.sample_stable_many(chosen, stream, count)
    else:
        values = randlaws.sample_many(chosen, stream, count)
    if out.parent != Path("."):
        output.ensure_out_dir(out.parent)
    output.write_values(out, values)
    typer.echo(str(out))
