import logging
from pathlib import Path
from typing import Any, Dict, Optional

import typer

from slp_lab import __version__
from slp_lab.errors import InvalidInputError, InvariantViolationError
from slp_lab.report import FORMATS, demo_names, run_demo, serialize
from slp_lab.schema import schema_document

app = typer.Typer(help="slp-lab: demonstrations and audits for the foundations of statistical evidence")

# 終了コード
EXIT_INVALID_INPUT = 2
EXIT_INVARIANT_VIOLATION = 3

# ロガーの設定
logger = logging.getLogger('slp_lab')


@app.callback()
def callback(
    verbose: bool = typer.Option(False, "--verbose", help="Log progress (INFO) to stderr"),
    debug: bool = typer.Option(False, "--debug", help="Log details (DEBUG) to stderr"),
):
    """
    slp-lab command line
    """
    if debug:
        logger.setLevel(logging.DEBUG)
    elif verbose:
        logger.setLevel(logging.INFO)


@app.command()
def demo(
    name: str = typer.Argument(..., help="Demo to run (see `slp-lab list`)"),
    theta0: Optional[float] = typer.Option(None, help="Null value of theta for Bernoulli-family demos"),
    mu0: Optional[float] = typer.Option(None, help="Null value of mu for normal-family demos"),
    direction: Optional[str] = typer.Option(None, help="Alternative direction: less or greater"),
    sigma: Optional[float] = typer.Option(None, help="Known standard deviation"),
    n: Optional[int] = typer.Option(None, help="Number of trials, or the observed stopping n"),
    r: Optional[int] = typer.Option(None, help="Number of successes"),
    n_max: Optional[int] = typer.Option(None, "--n-max", help="Truncation of the optional-stopping rule"),
    reps: Optional[int] = typer.Option(None, help="Monte Carlo replications (>= 100)"),
    seed: Optional[int] = typer.Option(None, help="Seed (default: SLP_LAB_SEED or the built-in seed)"),
    weight: Optional[float] = typer.Option(None, help="Mixture weight of the first component"),
    semantics: Optional[str] = typer.Option(None, help="Audit semantics, e.g. unconditional,conditional[,p2-first]"),
    xbar: Optional[float] = typer.Option(None, help="Observed sample mean"),
    component: Optional[int] = typer.Option(None, "--component", help="Observed mixture component j (1 or 2)"),
    sampling: Optional[str] = typer.Option(None, help="Sampling rule for factorize: binomial or negative-binomial"),
    workers: Optional[int] = typer.Option(None, help="Parallel workers for Monte Carlo"),
    fmt: str = typer.Option("text", "--format", help=f"Output format: {', '.join(FORMATS)}"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the report to this file instead of stdout"),
):
    """
    Run a demonstration and print its report
    """
    given: Dict[str, Any] = {
        "theta0": theta0, "mu0": mu0, "direction": direction, "sigma": sigma, "n": n, "r": r,
        "n_max": n_max, "reps": reps, "seed": seed, "weight": weight, "semantics": semantics,
        "xbar": xbar, "j": component, "sampling": sampling, "workers": workers,
    }
    options = {key: value for key, value in given.items() if value is not None}

    try:
        if fmt not in FORMATS:
            raise InvalidInputError(f"Unsupported format {fmt!r}; choose one of {', '.join(FORMATS)}")
        data = serialize(run_demo(name, options), fmt)
    except InvalidInputError as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=EXIT_INVALID_INPUT)
    except InvariantViolationError as e:
        typer.echo(f"Internal invariant failed: {e}", err=True)
        raise typer.Exit(code=EXIT_INVARIANT_VIOLATION)
    except Exception as e:
        logger.exception(f"Unexpected error while running demo {name}")
        typer.echo(f"Internal error: {e}", err=True)
        raise typer.Exit(code=EXIT_INVARIANT_VIOLATION)

    if out is None:
        typer.echo(data, nl=False)
    else:
        out.write_bytes(data)
        typer.echo(f"Report written to {out}", err=True)


@app.command("list")
def list_demos():
    """
    List the available demos
    """
    for name in demo_names():
        typer.echo(name)


@app.command()
def schema():
    """
    Print the JSON schema of the report
    """
    typer.echo(schema_document(), nl=False)


@app.command()
def version():
    """
    Show the version
    """
    typer.echo(f"slp-lab {__version__}")


if __name__ == "__main__":
    app()
