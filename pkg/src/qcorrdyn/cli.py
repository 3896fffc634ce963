"""Command-line front end.

Exit codes: 0 success, 2 malformed input, 3 a state or parameter invariant is
violated, 4 the output could not be written.
"""
from __future__ import annotations

import json
import math
import sys
from pathlib import Path
from typing import Optional

import click
import numpy as np

from . import analysis
from .core import validate_density_matrix
from .correlations import CorrelationReport, full_report
from .dynamics import (
    CouplingGeometry,
    DynamicsParams,
    coupling_from_geometry,
    initial_state,
    iter_integrate,
    populations_sym_antisym,
)
from .errors import QCorrError

EXIT_PARSE, EXIT_INVARIANT, EXIT_IO = 2, 3, 4

COLUMNS = (
    "tau", "a", "b", "c", "mutual_info", "discord", "discord_branch", "mid",
    "mid_degenerate", "classical", "concurrence", "pop_sym", "pop_antisym",
)


def fmt(x) -> str:
    if x is None:
        return "none"
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    return f"{float(x) + 0.0:.12g}"


def _num(x):
    """12 significant digits for JSON output."""
    if isinstance(x, (bool, np.bool_, str)) or x is None:
        return x
    return float(f"{float(x) + 0.0:.12g}")


def fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def write_output(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        click.echo(text, nl=False)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        fail(EXIT_IO, f"cannot write {out}: {exc}")


def load_state_file(path: str):
    """Read {"matrix": [[[re, im] x 4] x 4]} and return the raw complex array."""
    try:
        data = json.loads(Path(path).read_text())
        arr = np.asarray(data["matrix"], dtype=float)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        fail(EXIT_PARSE, f"cannot parse state file {path}: {exc}")
    if arr.shape != (4, 4, 2):
        fail(EXIT_PARSE, f"state file {path}: expected 4x4 [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def report_row(tau: float, coeffs, rep: CorrelationReport, pops) -> list:
    a, b, c = coeffs
    return [
        tau, a, b, c, rep.mutual_info, rep.discord, rep.discord_branch, rep.mid,
        rep.mid_degenerate, rep.classical, rep.concurrence, pops.symmetric, pops.antisymmetric,
    ]


def render_table(rows: list, fmt_name: str, meta: dict, comment: Optional[str] = None,
                 columns=COLUMNS) -> str:
    if fmt_name == "json":
        payload = dict(meta)
        payload["columns"] = list(columns)
        payload["rows"] = [[_num(v) for v in row] for row in rows]
        return json.dumps(payload, indent=1) + "\n"
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(",".join(columns))
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


side_option = click.option("--side", type=click.Choice(["A", "B"]), default="B", show_default=True,
                           help="Qubit on which the discord/classical measurement acts.")
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None,
                          help="Output file (default: stdout).")
format_option = click.option("--format", "fmt_name", type=click.Choice(["csv", "json"]),
                             default="csv", show_default=True)


@click.group()
def main():
    """Correlation measures and dissipative dynamics of two coupled qubits."""


@main.command()
@click.argument("state_file", type=click.Path(dir_okay=False))
@side_option
@out_option
def report(state_file, side, out):
    """Full correlation report for the 4x4 state in STATE_FILE (JSON)."""
    raw = load_state_file(state_file)
    try:
        rho = validate_density_matrix(raw)
        rep = full_report(rho, side)
    except QCorrError as exc:
        fail(EXIT_INVARIANT, str(exc))
    payload = {k: _num(v) for k, v in rep.as_dict().items()}
    write_output(json.dumps(payload, indent=1) + "\n", out)


def _resolve_params(gamma, distance, dipole_cos, omega) -> tuple[DynamicsParams, bool]:
    if (gamma is None) == (distance is None):
        raise click.UsageError("give exactly one of --gamma or --distance")
    try:
        if distance is not None:
            p = coupling_from_geometry(CouplingGeometry(distance, dipole_cos))
            if omega is not None:
                p = DynamicsParams(p.gamma, omega)
            return p, True
        return DynamicsParams(gamma, omega or 0.0), False
    except QCorrError as exc:
        fail(EXIT_INVARIANT, str(exc))


def _integrated_rows(init, params, tau_max, points, step, side):
    spacing = tau_max / (points - 1)
    n_sub = max(1, math.ceil(spacing / step - 1e-9))
    rows = []
    for tau, rho in iter_integrate(init, params, tau_max, spacing / n_sub, record_every=n_sub):
        arr = rho.entries
        coeffs = (arr[0, 0].real, 0.5 * (arr[1, 1] + arr[2, 2]).real, arr[1, 2].real)
        rows.append(report_row(tau, coeffs, full_report(rho, side), populations_sym_antisym(rho)))
    return rows


def _series_rows(series: analysis.TimeSeries) -> list:
    return [
        report_row(float(t), tuple(series.coefficients[i]), series.reports[i], series.populations[i])
        for i, t in enumerate(series.taus)
    ]


@main.command()
@click.option("--gamma", type=float, default=None, help="Collective damping ratio Gamma_12/Gamma.")
@click.option("--distance", type=float, default=None, help="Qubit separation in wavelengths.")
@click.option("--dipole-cos", type=float, default=0.0, show_default=True,
              help="Cosine between dipole moment and separation axis.")
@click.option("--omega", type=float, default=None, help="Dipole-dipole shift Omega_12/Gamma.")
@click.option("--tau-max", type=float, default=10.0, show_default=True)
@click.option("--points", type=click.IntRange(min=2), default=501, show_default=True)
@click.option("--initial", default="ee", show_default=True, help="ee, eg, ge, gg or file:<path>.")
@click.option("--step", type=float, default=1e-3, show_default=True, help="Integrator step bound.")
@side_option
@out_option
@format_option
def evolve(gamma, distance, dipole_cos, omega, tau_max, points, initial, step, side, out, fmt_name):
    """Correlation time series for two qubits in a common reservoir."""
    params, from_geometry = _resolve_params(gamma, distance, dipole_cos, omega)
    if initial.startswith("file:"):
        init = load_state_file(initial[5:])
    elif initial in ("ee", "eg", "ge", "gg"):
        init = initial_state(initial).entries
    else:
        raise click.BadParameter(f"unknown initial state {initial!r}", param_hint="--initial")
    try:
        init = validate_density_matrix(init)
        if initial == "ee" and 0.0 <= params.gamma <= 1.0:
            rows = _series_rows(analysis.sweep(params.gamma, tau_max, points, side))
        else:
            rows = _integrated_rows(init, params, tau_max, points, step, side)
    except QCorrError as exc:
        fail(EXIT_INVARIANT, str(exc))
    comment = f"gamma={fmt(params.gamma)} omega={fmt(params.omega)}" if from_geometry else None
    meta = {"gamma": _num(params.gamma), "omega": _num(params.omega), "initial": initial}
    write_output(render_table(rows, fmt_name, meta, comment), out)


@main.command()
@click.option("--tau-max", type=float, default=10.0, show_default=True)
@click.option("--points", type=click.IntRange(min=2), default=501, show_default=True)
@side_option
@out_option
@format_option
def dicke(tau_max, points, side, out, fmt_name):
    """Correlation time series in the zero-separation (Dicke) limit."""
    try:
        rows = _series_rows(analysis.dicke_sweep(tau_max, points, side))
    except QCorrError as exc:
        fail(EXIT_INVARIANT, str(exc))
    write_output(render_table(rows, fmt_name, {"gamma": 1.0, "model": "dicke"}), out)


def parse_gamma_list(values) -> list[float]:
    gammas = []
    for chunk in values:
        for item in chunk.split(","):
            item = item.strip()
            if not item:
                continue
            try:
                gammas.append(float(item))
            except ValueError:
                raise click.BadParameter(f"not a number: {item!r}", param_hint="GAMMAS")
    if not gammas:
        raise click.BadParameter("no gamma values given", param_hint="GAMMAS")
    return gammas


@main.command()
@click.argument("gammas", nargs=-1, required=True)
@out_option
@format_option
def onset(gammas, out, fmt_name):
    """Entanglement onset time for each gamma (comma or space separated)."""
    values = parse_gamma_list(gammas)
    try:
        rows = [[g, analysis.onset_time(g)] for g in values]
    except QCorrError as exc:
        fail(EXIT_INVARIANT, str(exc))
    write_output(render_table(rows, fmt_name, {}, columns=("gamma", "tau_e")), out)


@main.command()
@click.option("--distance", type=float, required=True, help="Qubit separation in wavelengths.")
@click.option("--dipole-cos", type=float, default=0.0, show_default=True)
@out_option
@format_option
def coupling(distance, dipole_cos, out, fmt_name):
    """Collective damping and dipole-dipole shift for a given geometry."""
    try:
        p = coupling_from_geometry(CouplingGeometry(distance, dipole_cos))
    except QCorrError as exc:
        fail(EXIT_INVARIANT, str(exc))
    rows = [[distance, dipole_cos, p.gamma, p.omega]]
    write_output(render_table(rows, fmt_name, {}, columns=("distance", "dipole_cos", "gamma", "omega")), out)


@main.command("sweep-gamma")
@click.argument("gammas", nargs=-1, required=True)
@out_option
@format_option
def sweep_gamma(gammas, out, fmt_name):
    """Trajectory events (onset, MID = discord interval, degeneracy, decay) per gamma."""
    values = parse_gamma_list(gammas)
    rows = []
    try:
        for g in values:
            ev = analysis.find_events(g)
            iv = ev.mid_discord_interval
            rows.append([
                g, ev.onset_tau, ev.degeneracy_tau,
                iv.start if iv else None, iv.end if iv else None, ev.decay_rate,
            ])
    except QCorrError as exc:
        fail(EXIT_INVARIANT, str(exc))
    columns = ("gamma", "onset_tau", "degeneracy_tau", "interval_start", "interval_end", "decay_rate")
    write_output(render_table(rows, fmt_name, {}, columns=columns), out)


if __name__ == "__main__":
    main()
