"""Command-line front end.

Exit codes: 0 success, 1 validation failure (violations, non-states,
precondition/binding/parameter errors), 2 I/O or malformed input.
"""

from __future__ import annotations

import functools
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import click
import numpy as np

from config import get_config, set_config_name
from config.base import CLI_PROFILE
from groupoid_qm.domain.models import ClassicalObservable, Hamiltonian, PauliCoordinates
from groupoid_qm.errors import GroupoidQMError, InvalidSpecError
from groupoid_qm.services import serialization
from groupoid_qm.services.algebra import delta
from groupoid_qm.services.classical_limit import (
    EVOLUTION_KINDS,
    GENERATOR_MODES,
    classical_evolve,
    kernel_from_hamiltonian,
    markov_generator,
)
from groupoid_qm.services.dynamics import (
    density_rate,
    evolve_density,
    evolve_state,
    flow_series,
    heisenberg_integrate,
)
from groupoid_qm.services.groupoid_core import validate as validate_groupoid
from groupoid_qm.services.oscillator import ladder, oscillator, oscillator_hamiltonian, position_momentum
from groupoid_qm.services.qubit import pauli_compose, qubit
from groupoid_qm.services.representation import cstar_norm, fundamental_rep
from groupoid_qm.services.states import gns_construct

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2

INPUT_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)
OUTPUT_FILE = click.Path(dir_okay=False, path_type=Path)


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def handle_errors(command: Callable[..., Any]) -> Callable[..., Any]:
    """Map library exceptions to exit codes with a one-line diagnostic."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except InvalidSpecError as exc:
            _fail(str(exc), EXIT_INPUT)
        except OSError as exc:
            _fail(f"{exc.strerror or exc} ({exc.filename})" if exc.filename else str(exc), EXIT_INPUT)
        except GroupoidQMError as exc:
            _fail(str(exc), EXIT_VALIDATION)

    return wrapper


def _time_grid(t0: float, t1: float, steps: int) -> np.ndarray:
    if not t1 > t0:
        raise click.BadParameter(f"--t1 must exceed --t0 (got {t0} .. {t1})", param_hint="--t1")
    return np.linspace(t0, t1, steps + 1)


def time_grid_options(command: Callable[..., Any]) -> Callable[..., Any]:
    command = click.option(
        "--steps", type=click.IntRange(min=1), required=True, help="Number of grid intervals."
    )(command)
    command = click.option("--t1", type=float, required=True, help="Final time.")(command)
    command = click.option("--t0", type=float, required=True, help="Initial time.")(command)
    return command


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress at INFO level on stderr.")
def main(verbose: bool) -> None:
    """Groupoid-picture quantum mechanics on finite groupoids."""
    set_config_name(CLI_PROFILE)
    level = logging.INFO if verbose else get_config().runtime.log_level
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


@main.command()
@click.option("--groupoid", "groupoid_path", type=INPUT_FILE, required=True, help="Groupoid spec JSON.")
@click.option("--out", type=OUTPUT_FILE, help="Write the report here instead of stdout.")
@handle_errors
def validate(groupoid_path: Path, out: Optional[Path]) -> None:
    """Check the groupoid axioms; exit 1 when any is violated."""
    g = serialization.load_groupoid(groupoid_path)
    report = validate_groupoid(g)
    serialization.write_json(report.to_dict(), out)
    if not report.ok:
        _fail(f"{len(report.violations)} violation(s): {', '.join(sorted(report.kinds()))}", EXIT_VALIDATION)


@main.command("repr")
@click.option("--groupoid", "groupoid_path", type=INPUT_FILE, required=True, help="Groupoid spec JSON.")
@click.option("--element", "element_path", type=INPUT_FILE, required=True, help="Element coefficient JSON.")
@click.option("--out", type=OUTPUT_FILE, help="Write the matrix here instead of stdout.")
@handle_errors
def repr_command(groupoid_path: Path, element_path: Path, out: Optional[Path]) -> None:
    """Print the fundamental-representation matrix of an element."""
    g = serialization.load_groupoid(groupoid_path)
    f = serialization.load_element(g, element_path)
    payload = fundamental_rep(f).to_dict()
    payload["norm"] = cstar_norm(f).to_dict()
    serialization.write_json(payload, out)


def _labels(count: int) -> List[str]:
    return [str(i) for i in range(count)]


@main.command()
@click.option("--groupoid", "groupoid_path", type=INPUT_FILE, required=True, help="Groupoid spec JSON.")
@click.option("--hamiltonian", "hamiltonian_path", type=INPUT_FILE, required=True, help="Hamiltonian coefficients.")
@click.option("--element", "element_path", type=INPUT_FILE, help="Initial element (Heisenberg picture).")
@click.option("--state", "state_path", type=INPUT_FILE, help="Initial state weights (Schrödinger picture).")
@click.option("--density", "density_path", type=INPUT_FILE, help="Initial density matrix (Landau–von Neumann).")
@click.option(
    "--method", type=click.Choice(["flow", "rk4"]), default="flow", show_default=True, help="Element integrator."
)
@click.option("--step", type=float, help="RK4 step (defaults to the configured rk4_step).")
@time_grid_options
@click.option("--out", type=OUTPUT_FILE, help="CSV output; stdout when omitted.")
@handle_errors
def evolve(
    groupoid_path: Path,
    hamiltonian_path: Path,
    element_path: Optional[Path],
    state_path: Optional[Path],
    density_path: Optional[Path],
    method: str,
    step: Optional[float],
    t0: float,
    t1: float,
    steps: int,
    out: Optional[Path],
) -> None:
    """Evolve an element, a state or a density matrix on a uniform time grid."""
    chosen = [p for p in (element_path, state_path, density_path) if p is not None]
    if len(chosen) != 1:
        raise click.UsageError("Give exactly one of --element, --state or --density")
    times = _time_grid(t0, t1, steps)

    g = serialization.load_groupoid(groupoid_path)
    h = Hamiltonian(serialization.load_element(g, hamiltonian_path))

    if element_path is not None:
        f0 = serialization.load_element(g, element_path)
        if method == "rk4":
            series = heisenberg_integrate(h, f0, times, step=step, compare_with_flow=False)
        else:
            series = flow_series(h, f0, times)
        columns = serialization.complex_columns("f", _labels(g.n_transitions), series.coeffs)
    elif state_path is not None:
        rho = serialization.load_state(g, state_path)
        rows = np.array([evolve_state(h, t - times[0], rho).coeffs for t in times])
        columns = serialization.complex_columns("w", _labels(g.n_transitions), rows)
    else:
        H = fundamental_rep(h.h)
        rho0 = serialization.density_from_dict(serialization.read_json(density_path))
        densities = [evolve_density(H, rho0, t - times[0]) for t in times]
        entries = np.array([rho.entries.reshape(-1) for rho in densities])
        rates = np.array([density_rate(H, rho).reshape(-1) for rho in densities])
        dim = rho0.dim
        labels = [f"{i}_{j}" for i in range(dim) for j in range(dim)]
        columns = serialization.complex_columns("rho_", labels, entries)
        columns.update(serialization.complex_columns("drho_", labels, rates))

    logger.info("Evolved over %d grid points on [%g, %g]", times.size, t0, t1)
    serialization.write_csv(serialization.time_series_frame(times, columns), out)


def _probabilities(payload: Any) -> np.ndarray:
    values = payload.get("p0") if isinstance(payload, dict) else payload
    vector = serialization.complex_vector(values, field="p0")
    if np.any(vector.imag != 0):
        raise InvalidSpecError("p0 entries must be real", field="p0")
    return vector.real


@main.command()
@click.option("--groupoid", "groupoid_path", type=INPUT_FILE, required=True, help="Groupoid spec JSON.")
@click.option("--hamiltonian", "hamiltonian_path", type=INPUT_FILE, required=True, help="First-order part h1.")
@click.option("--mode", type=click.Choice(GENERATOR_MODES), default="symmetric_rates", show_default=True)
@click.option("--kind", type=click.Choice(EVOLUTION_KINDS), default="state", show_default=True)
@click.option("--state", "state_path", type=INPUT_FILE, required=True, help="JSON list of initial values p0.")
@time_grid_options
@click.option("--out", type=OUTPUT_FILE, required=True, help="CSV of p(τ).")
@click.option("--generator-out", type=OUTPUT_FILE, help="JSON for K; stdout when omitted.")
@handle_errors
def classical(
    groupoid_path: Path,
    hamiltonian_path: Path,
    mode: str,
    kind: str,
    state_path: Path,
    t0: float,
    t1: float,
    steps: int,
    out: Path,
    generator_out: Optional[Path],
) -> None:
    """Extract the Markov generator K from h1 and evolve p0 under it."""
    times = _time_grid(t0, t1, steps)
    g = serialization.load_groupoid(groupoid_path)
    h1 = serialization.load_element(g, hamiltonian_path)
    generator = markov_generator(kernel_from_hamiltonian(g, h1), mode=mode)
    p0 = ClassicalObservable(_probabilities(serialization.read_json(state_path)))
    series = classical_evolve(generator, p0, times, kind=kind)

    serialization.write_json(generator.to_dict(), generator_out)
    prefix = "p_" if kind == "state" else "f_"
    columns: Dict[str, np.ndarray] = {
        f"{prefix}{i}": np.real(series.values[:, i]) for i in range(series.values.shape[1])
    }
    serialization.write_csv(serialization.time_series_frame(series.times, columns), out)


@main.command()
@click.option("--groupoid", "groupoid_path", type=INPUT_FILE, required=True, help="Groupoid spec JSON.")
@click.option("--state", "state_path", type=INPUT_FILE, required=True, help="State weights JSON.")
@click.option("--tol", type=click.FloatRange(min=0.0), help="Positivity tolerance.")
@handle_errors
def gns(groupoid_path: Path, state_path: Path, tol: Optional[float]) -> None:
    """Report the GNS dimension, Gelfand ideal rank and reproducing residual."""
    g = serialization.load_groupoid(groupoid_path)
    rho = serialization.load_state(g, state_path)
    data = gns_construct(rho, tol)
    residual = 0.0
    for alpha in range(g.n_transitions):
        f = delta(g, alpha)
        reproduced = data.inner(data.cyclic_vector, data.rep(f).entries @ data.cyclic_vector)
        residual = max(residual, abs(reproduced - rho(f)))
    serialization.write_json(
        {
            "dim": data.dim,
            "ideal_rank": int(data.ideal_basis.shape[1]),
            "reproducing_residual": float(residual),
        }
    )


@main.group()
def model() -> None:
    """Emit the worked-example groupoids and elements."""


def _emit(out: Path, groupoid_payload: Dict[str, Any], elements: Dict[str, Any]) -> None:
    out.mkdir(parents=True, exist_ok=True)
    serialization.write_json(groupoid_payload, out / "groupoid.json")
    for name, f in elements.items():
        serialization.write_json(serialization.element_to_dict(f), out / f"{name}.json")
    click.echo(f"Wrote groupoid.json and {len(elements)} element file(s) to {out}")


@model.command("qubit")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), required=True)
@handle_errors
def model_qubit(out: Path) -> None:
    """Qubit groupoid plus the σ₃ and σ₁ observables (f3, f1)."""
    g = qubit()
    _emit(
        out,
        serialization.groupoid_to_dict(g),
        {
            "f3": pauli_compose(PauliCoordinates(0.0, 0.0, 0.0, 1.0), g),
            "f1": pauli_compose(PauliCoordinates(0.0, 1.0, 0.0, 0.0), g),
        },
    )


@model.command("oscillator")
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--levels", type=int, required=True, help="Truncation N (>= 2).")
@click.option("--omega", type=float, required=True, help="Frequency ω of h0.")
@handle_errors
def model_oscillator(out: Path, levels: int, omega: float) -> None:
    """Truncated oscillator: a, a_star, q, p and h0 = ω a*⋆a + 1/2."""
    g = oscillator(levels)
    a, a_star = ladder(levels, g)
    q, p = position_momentum(levels, g)
    h0 = oscillator_hamiltonian(levels, omega=omega, f=0.0, beta=0.5, g=g)
    _emit(
        out,
        serialization.groupoid_to_dict(g),
        {"a": a, "a_star": a_star, "q": q, "p": p, "h0": h0.h},
    )


__all__ = ["main", "handle_errors", "EXIT_OK", "EXIT_VALIDATION", "EXIT_INPUT"]
