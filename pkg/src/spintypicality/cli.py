"""Command-line front end: CSV tables for every profile, Monte Carlo runs.

All tabular output is CSV with a header row, LF line endings and
``--precision`` significant digits. Profiles are written wide: one
asymptotic column plus one column per requested spin count.
"""
from __future__ import annotations

import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import click
import numpy as np

from . import charfun, feee, rpse, sampling
from .exceptions import NumericalError, SingularityError, SpinTypicalityError, ValidityError
from .spectrum import EXACT_MAX_N, exact_degeneracy, gaussian_dos, log_degeneracies

INSET = 1e-9

DEFAULT_GRIDS = {
    "feee": "-1:0:51",
    "rpse": "-1:1:81",
    "eos": "-1:0:101",
}

FIG_DEFAULT_N = {
    2: (10,),
    3: (5, 10, 50),
    4: (5, 10),
    5: (10, 50),
    6: (10, 30, 100),
    7: (10, 50, 150),
    8: (1,),
    9: (10, 30, 100),
}


def _nan_on_failure(fn, *args, **kwargs):
    # a scan keeps going past points where a formula is invalid or singular
    try:
        return fn(*args, **kwargs)
    except (ValidityError, SingularityError, NumericalError):
        return math.nan


class Table:
    """Header plus rows, rendered once the whole table is computed."""

    def __init__(self, header, rows):
        self.header = list(header)
        self.rows = [list(r) for r in rows]

    def column(self, name):
        j = self.header.index(name)
        return np.array([r[j] for r in self.rows], dtype=float)


def _fmt(value, precision):
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        value = 0.0  # drop the sign of -0.0
    return f"{value:.{precision}g}"


def render_csv(table, precision):
    lines = [",".join(table.header)]
    lines += [",".join(_fmt(v, precision) for v in row) for row in table.rows]
    return "\n".join(lines) + "\n"


def _summary_scalars(table):
    scalars = {"rows": len(table.rows)}
    for name in table.header:
        col = table.column(name)
        finite = col[np.isfinite(col)]
        if finite.size:
            scalars[f"{name}_min"] = float(finite.min())
            scalars[f"{name}_max"] = float(finite.max())
    return scalars


def parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise click.BadParameter(f"expected start:stop:steps, got {text!r}", param_hint="--grid")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise click.BadParameter(f"expected start:stop:steps, got {text!r}", param_hint="--grid") from None
    if steps < 1:
        raise click.BadParameter("steps must be >= 1", param_hint="--grid")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise click.BadParameter("grid bounds must be finite", param_hint="--grid")
    return np.linspace(start, stop, steps) if steps > 1 else np.array([start])


def _checked_grid(text, low, high):
    grid = parse_grid(text)
    if np.any(grid < low) or np.any(grid > high):
        raise click.BadParameter(f"grid values must lie in [{low}, {high}]", param_hint="--grid")
    singular = np.abs(grid) >= 1.0
    if np.any(singular):
        click.echo(f"warning: grid endpoint(s) at |x| = 1 inset by {INSET:g}", err=True)
        grid = np.where(singular, np.sign(grid) * (1.0 - INSET), grid)
    return grid


def _map_rows(fn, grid, threads):
    if threads <= 1:
        return [fn(float(x)) for x in grid]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, (float(x) for x in grid)))


def _check_ns(ns, low=1):
    for n in ns:
        if n < low:
            raise click.BadParameter(f"n must be >= {low}, got {n}", param_hint="--n")
    return tuple(ns)


def spectrum_table(ns):
    rows = []
    for n in ns:
        logs = log_degeneracies(n)
        for j, i in enumerate(range(-n, n + 1)):
            exact = exact_degeneracy(n, i) if n <= EXACT_MAX_N else math.exp(logs[j])
            rows.append([n, i, exact, float(logs[j]), float(gaussian_dos(n, i)), charfun.dhat(n, i / n)])
    return Table(["n", "i", "exact_degeneracy", "log_degeneracy", "gaussian_dos", "log_degeneracy_charfun"], rows)


def fig2_table(n):
    full = spectrum_table((n,))
    keep = ["i", "exact_degeneracy", "gaussian_dos"]
    idx = [full.header.index(k) for k in keep]
    return Table(keep, ([r[j] for j in idx] for r in full.rows))


def feee_entropy_table(ns, grid, threads):
    header = ["u", "s_asymptotic"]
    for n in ns:
        header += [f"s_mean_n{n}", f"s_std_n{n}", f"s_exact_mean_n{n}"]

    def row(u):
        out = [u, (u + 1.0) * feee.LN3]
        for n in ns:
            spec = feee.FeeeSpec.from_energy_per_spin(n, u)
            try:
                lead = feee.feee_entropy_stats(spec)
                full = feee.feee_entropy_stats(spec, exact_mean=True)
            except ValidityError:
                out += [math.nan] * 3
                continue
            out += [lead.mean / n, lead.std / n, full.mean / n]
        return out

    return Table(header, _map_rows(row, grid, threads))


def feee_rdm_table(ns, grid, threads):
    header = ["u", "mu_minus_asymptotic", "mu_zero_asymptotic", "mu_plus_asymptotic", "r_asymptotic"]
    for n in ns:
        header += [f"mu_minus_n{n}", f"mu_zero_n{n}", f"mu_plus_n{n}", f"r_n{n}"]

    def row(u):
        out = [u, *feee.feee_rdm_asymptotic(u), _nan_on_failure(feee.r_asymptotic, u)]
        for n in ns:
            try:
                rdm = feee.feee_rdm_mean(feee.FeeeSpec.from_energy_per_spin(n, u))
            except ValidityError:
                out += [math.nan] * 4
                continue
            out += [*rdm, _nan_on_failure(feee.r_parameter, rdm)]
        return out

    return Table(header, _map_rows(row, grid, threads))


def _spec_at(n, q):
    # nudge up so that e.g. q = -0.3 at n = 10 lands on level -3
    return rpse.RpseSpec(n, max(-n, min(n, q * n + 1e-9)))


def rpse_scan_table(ns, grid, threads, integral=False):
    header = ["q_max", "log_ratio_per_spin_asymptotic", "u_asymptotic"]
    for n in ns:
        header += [f"log_ratio_per_spin_n{n}", f"log_ratio_per_spin_gaussian_n{n}"]
        if integral:
            header.append(f"log_ratio_per_spin_integral_n{n}")
        header += [f"u_n{n}", f"u_corrected_n{n}"]

    def row(q):
        out = [q, rpse.rpse_log_dimension_asymptotic(1, q), rpse.rpse_internal_energy_asymptotic(1, q)]
        for n in ns:
            spec = _spec_at(n, q)
            total = n * feee.LN3
            out += [
                (rpse.rpse_dimension_exact(spec).log - total) / n,
                (rpse.rpse_dimension_gaussian(spec).log - total) / n,
            ]
            if integral:
                # the continuum route uses the unfloored cutoff
                cont = rpse.RpseSpec.from_scaled_cutoff(n, q)
                out.append(_nan_on_failure(lambda: (rpse.rpse_dimension_integral(cont).log - total) / n))
            out += [
                rpse.rpse_internal_energy_exact(spec).u,
                _nan_on_failure(rpse.rpse_internal_energy_asymptotic, n, q, corrected=True),
            ]
        return out

    return Table(header, _map_rows(row, grid, threads))


def rpse_rdm_table(ns, grid, threads):
    header = ["q_max", "mu_minus_asymptotic", "mu_zero_asymptotic", "mu_plus_asymptotic"]
    for n in ns:
        header += [f"mu_minus_n{n}", f"mu_zero_n{n}", f"mu_plus_n{n}"]

    def row(q):
        out = [q, *rpse.rpse_rdm_asymptotic(q)]
        for n in ns:
            out += list(rpse.rpse_rdm_exact(_spec_at(n, q)))
        return out

    return Table(header, _map_rows(row, grid, threads))


def eos_table(grid, threads):
    def row(u):
        try:
            state = rpse.entropy_equation_of_state(1, u)
        except SingularityError as err:
            state = err.partial
        return [state.u, state.beta, state.s]

    return Table(["u", "beta", "s"], _map_rows(row, grid, threads))


def sample_table(ensemble, n, e_max, u, axis, count, seed, threads):
    obs = sampling.spin_operator(axis)
    if ensemble == "rpse":
        space = sampling.build_active_space(n, e_max)

        def draw(seed_, i):
            return sampling.sample_rpse(space, seed_, i)
    else:
        spec = feee.FeeeSpec.from_energy_per_spin(n, u)
        feee.feee_population_means(spec)  # validity gate before any sampling
        space = sampling.build_active_space(n, n)

        def draw(seed_, i):
            return sampling.sample_feee(spec, seed_, i)

    def stats(p):
        return [
            sampling.pure_state_entropy(p),
            sampling.expectation_energy(p, space),
            *sampling.reduced_dm(p, space),
            sampling.fluctuation_amplitude(p, obs, space),
        ]

    values = sampling.ensemble_values(draw, stats, count, seed, threads)
    header = ["index", "entropy", "energy", "mu_minus", "mu_zero", "mu_plus", "fluct"]
    rows = [[i, *map(float, v)] for i, v in enumerate(values)]
    return Table(header, rows), space, values


def _sample_scalars(ensemble, n, e_max, u, axis, space, values):
    scalars = {"count": int(values.shape[0]), "states": space.count}
    if values.shape[0] >= 2:
        st = sampling.summarize(values)
        for j, name in enumerate(["entropy", "energy", "mu_minus", "mu_zero", "mu_plus", "fluct"]):
            scalars[f"{name}_mean"] = float(st.mean[j])
            scalars[f"{name}_std_error"] = float(st.std_error[j])
    if ensemble == "rpse":
        spec = rpse.RpseSpec(n, e_max)
        log_count = math.log(space.count)
        scalars["entropy_reference"] = log_count - (1.0 - feee.EULER_GAMMA)
        scalars["entropy_simplex_exact"] = rpse.simplex_entropy_mean(log_count)
        rdm = rpse.rpse_rdm_exact(spec)
        scalars.update({f"{k}_exact": v for k, v in zip(("mu_minus", "mu_zero", "mu_plus"), rdm)})
        scalars["fluct_bound"] = sampling.fluctuation_bound(sampling.spin_operator(axis), rdm, space.count)
    else:
        spec = feee.FeeeSpec.from_energy_per_spin(n, u)
        scalars["entropy_reference"] = feee.feee_entropy_stats(spec, exact_mean=True).mean
        rdm = feee.feee_rdm_mean(spec)
        scalars.update({f"{k}_reference": v for k, v in zip(("mu_minus", "mu_zero", "mu_plus"), rdm)})
    return scalars


def _emit(ctx, table, command, config, started, scalars=None):
    opts = ctx.obj
    if opts["format"] == "csv":
        text = render_csv(table, opts["precision"])
    else:
        summary = {
            "command": command,
            "config": config,
            "scalars": scalars if scalars is not None else _summary_scalars(table),
            "wall_time": time.perf_counter() - started,
        }
        text = json.dumps(summary, indent=2, allow_nan=True) + "\n"
    out = opts["out"]
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


class _Group(click.Group):
    # module errors become exit status 1 with the message unchanged
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except SpinTypicalityError as err:
            raise click.ClickException(str(err)) from err


def _grid_option(f):
    return click.option("--grid", default=None, help="start:stop:steps (linspace, inclusive).")(f)


def _n_option(f):
    return click.option("--n", "ns", type=int, multiple=True, help="Spin count; repeat for several.")(f)


@click.group(cls=_Group)
@click.option("--out", default="-", show_default=True, help="Output path, '-' for stdout.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json-summary"]), default="csv", show_default=True)
@click.option("--threads", type=click.IntRange(min=1), default=None, help="Worker threads [default: cores].")
@click.option("--precision", type=click.IntRange(1, 17), default=10, show_default=True, help="Significant digits.")
@click.pass_context
def main(ctx, out, fmt, threads, precision):
    """Typicality of pure states for ideal spin-1 systems."""
    ctx.obj = {
        "out": out,
        "format": fmt,
        "threads": threads or os.cpu_count() or 1,
        "precision": precision,
    }


def _config(ctx, **extra):
    cfg = {k: v for k, v in ctx.obj.items()}
    cfg.update(extra)
    return cfg


@main.command()
@_n_option
@click.pass_context
def spectrum(ctx, ns):
    """Level degeneracies with their Gaussian and characteristic-function estimates."""
    started = time.perf_counter()
    ns = _check_ns(ns or (10,))
    _emit(ctx, spectrum_table(ns), "spectrum", _config(ctx, n=list(ns)), started)


@main.command("feee-entropy")
@_n_option
@_grid_option
@click.pass_context
def feee_entropy(ctx, ns, grid):
    """FEEE entropy per spin versus u = U/n."""
    started = time.perf_counter()
    ns = _check_ns(ns or (10,))
    grid = grid or DEFAULT_GRIDS["feee"]
    table = feee_entropy_table(ns, _checked_grid(grid, -1.0, 0.0), ctx.obj["threads"])
    _emit(ctx, table, "feee-entropy", _config(ctx, n=list(ns), grid=grid), started)


@main.command("feee-rdm")
@_n_option
@_grid_option
@click.pass_context
def feee_rdm(ctx, ns, grid):
    """FEEE reduced density matrix and R parameter versus u."""
    started = time.perf_counter()
    ns = _check_ns(ns or (10,), low=2)
    grid = grid or DEFAULT_GRIDS["feee"]
    table = feee_rdm_table(ns, _checked_grid(grid, -1.0, 0.0), ctx.obj["threads"])
    _emit(ctx, table, "feee-rdm", _config(ctx, n=list(ns), grid=grid), started)


@main.command("rpse-scan")
@_n_option
@_grid_option
@click.option("--integral", is_flag=True, help="Add the continuum-integral dimension column.")
@click.pass_context
def rpse_scan(ctx, ns, grid, integral):
    """RPSE dimension and internal energy versus q_max = e_max/n."""
    started = time.perf_counter()
    ns = _check_ns(ns or (10,))
    grid = grid or DEFAULT_GRIDS["rpse"]
    table = rpse_scan_table(ns, _checked_grid(grid, -1.0, 1.0), ctx.obj["threads"], integral)
    _emit(ctx, table, "rpse-scan", _config(ctx, n=list(ns), grid=grid, integral=integral), started)


@main.command("rpse-rdm")
@_n_option
@_grid_option
@click.pass_context
def rpse_rdm(ctx, ns, grid):
    """RPSE reduced density matrix versus q_max."""
    started = time.perf_counter()
    ns = _check_ns(ns or (10,), low=2)
    grid = grid or DEFAULT_GRIDS["rpse"]
    table = rpse_rdm_table(ns, _checked_grid(grid, -1.0, 1.0), ctx.obj["threads"])
    _emit(ctx, table, "rpse-rdm", _config(ctx, n=list(ns), grid=grid), started)


@main.command()
@_grid_option
@click.pass_context
def eos(ctx, grid):
    """Equation of state: beta and entropy per spin versus u."""
    started = time.perf_counter()
    grid = grid or DEFAULT_GRIDS["eos"]
    table = eos_table(_checked_grid(grid, -1.0, 0.0), ctx.obj["threads"])
    _emit(ctx, table, "eos", _config(ctx, grid=grid), started)


@main.command()
@click.option("--ensemble", type=click.Choice(["rpse", "feee"]), default="rpse", show_default=True)
@click.option("--n", "n", type=click.IntRange(min=2), default=8, show_default=True)
@click.option("--emax", type=int, default=None, help="RPSE energy cutoff (integer).")
@click.option("--u", "u", type=float, default=None, help="FEEE energy per spin.")
@click.option("--observable", type=click.Choice(["x", "y", "z"]), default="x", show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.pass_context
def sample(ctx, ensemble, n, emax, u, observable, samples, seed):
    """Per-sample entropy, energy, reduced density matrix and fluctuation amplitude."""
    started = time.perf_counter()
    if ensemble == "rpse" and emax is None:
        raise click.UsageError("--emax is required for --ensemble rpse")
    if ensemble == "feee" and u is None:
        raise click.UsageError("--u is required for --ensemble feee")
    table, space, values = sample_table(ensemble, n, emax, u, observable, samples, seed, ctx.obj["threads"])
    config = _config(ctx, ensemble=ensemble, n=n, emax=emax, u=u, observable=observable, samples=samples, seed=seed)
    scalars = None
    if ctx.obj["format"] == "json-summary":
        scalars = _sample_scalars(ensemble, n, emax, u, observable, space, values)
    _emit(ctx, table, "sample", config, started, scalars)


@main.command()
@click.option("--id", "fig_id", type=click.IntRange(2, 9), required=True, help="Figure number, 2 to 9.")
@_n_option
@_grid_option
@click.pass_context
def fig(ctx, fig_id, ns, grid):
    """Dataset behind one figure (asymptotic column plus one column per n)."""
    started = time.perf_counter()
    ns = _check_ns(ns or FIG_DEFAULT_N[fig_id])
    threads = ctx.obj["threads"]
    if fig_id == 2:
        if len(ns) != 1:
            raise click.BadParameter("figure 2 takes a single n", param_hint="--n")
        table = fig2_table(ns[0])
    elif fig_id in (3, 4, 8):
        grid = grid or DEFAULT_GRIDS["eos" if fig_id == 8 else "feee"]
        values = _checked_grid(grid, -1.0, 0.0)
        if fig_id == 3:
            table = feee_entropy_table(ns, values, threads)
        elif fig_id == 4:
            table = feee_rdm_table(_check_ns(ns, low=2), values, threads)
        else:
            table = eos_table(values, threads)
    else:
        grid = grid or DEFAULT_GRIDS["rpse"]
        values = _checked_grid(grid, -1.0, 1.0)
        if fig_id == 9:
            table = rpse_rdm_table(_check_ns(ns, low=2), values, threads)
        else:
            table = rpse_scan_table(ns, values, threads, integral=(fig_id == 6))
    _emit(ctx, table, f"fig{fig_id}", _config(ctx, id=fig_id, n=list(ns), grid=grid), started)


if __name__ == "__main__":  # pragma: no cover
    main()
