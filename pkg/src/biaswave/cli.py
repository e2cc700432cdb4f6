"""Command-line front end.

Subcommands: estimate (density from a single-column CSV), simulate (Monte
Carlo ASE tables), eff (relative-efficiency curves), wavelet-table (phi/psi
dump).  Exit codes: 0 success, 2 input error, 3 compute error.
"""

import csv
import json
import sys

import click
import numpy as np

from .estimator import (
    EstimatorConfig,
    METHODS,
    config_for_method,
    fit_power_density,
    resolve_j1,
)
from .filters import UnknownFilterError, load_filter
from .simulation import EXAMPLE_IDS, MonteCarloPlan, efficiency, run_monte_carlo
from .wavelets import DEFAULT_PRECISION, phi_offset_vectors, psi_offset_vectors
from .weights import WeightSyntaxError, weight_from_spec

EXIT_INPUT = 2
EXIT_COMPUTE = 3

_THRESHOLD_MODES = {"hard": "hard_universal", "soft": "soft_universal", "none": "none"}


def _fail(code, message):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _fmt(x):
    return f"{float(x):.17g}"


def _read_sample(path):
    """Single numeric column; optional header row; blank lines skipped."""
    rows = []
    try:
        with open(path, newline="") as fh:
            for lineno, line in enumerate(csv.reader(fh), start=1):
                if not line or not line[0].strip():
                    continue
                try:
                    rows.append(float(line[0]))
                except ValueError:
                    if lineno == 1 and not rows:  # header row
                        continue
                    _fail(EXIT_INPUT, f"{path}:{lineno}: not a number: {line[0]!r}")
    except OSError as exc:
        _fail(EXIT_INPUT, f"cannot read {path}: {exc}")
    if not rows:
        _fail(EXIT_INPUT, f"{path}: no observations")
    return np.asarray(rows, dtype=float)


def _parse_floats(text, flag):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        _fail(EXIT_INPUT, f"{flag}: expected comma-separated numbers, got {text!r}")


@click.group()
def main():
    """Wavelet power-density estimation from size-biased samples."""


@main.command()
@click.argument("input_path", type=click.Path())
@click.option("--output", "-o", required=True, type=click.Path(), help="Output CSV path.")
@click.option("--weight", default="1", help="Weight function spec (default unbiased).")
@click.option("--method", default="m2", type=click.Choice(sorted(METHODS)))
@click.option("--a", "a_override", type=float, default=None,
              help="Override the power a of the chosen method.")
@click.option("--j0", default=0, type=int)
@click.option("--j1", default=None, type=int)
@click.option("--p", default=0.45, type=float,
              help="Level rule exponent when --j1 is not given.")
@click.option("--filter", "filter_name", default="sym10")
@click.option("--threshold", default="hard", type=click.Choice(sorted(_THRESHOLD_MODES)))
@click.option("--grid", default=250, type=int, help="Number of evaluation points.")
@click.option("--epsilon", default=None, type=float)
def estimate(input_path, output, weight, method, a_override, j0, j1, p,
             filter_name, threshold, grid, epsilon):
    """Estimate the density from a single-column CSV of observations.

    Writes an `x,f_hat,f_hat_a` grid to OUTPUT and a JSON diagnostics
    sidecar to OUTPUT + ".json".
    """
    sample = _read_sample(input_path)
    if grid < 2:
        _fail(EXIT_INPUT, "--grid must be >= 2")
    try:
        w = weight_from_spec(weight)
    except WeightSyntaxError as exc:
        _fail(EXIT_INPUT, f"--weight: {exc}")
    if j1 is None:
        j1 = resolve_j1(p, sample.size)
    try:
        filt = load_filter(filter_name)
    except UnknownFilterError as exc:
        _fail(EXIT_INPUT, str(exc))
    try:
        opts = dict(threshold=_THRESHOLD_MODES[threshold], filter=filt, epsilon=epsilon)
        if a_override is None:
            config = config_for_method(method, j0, j1, **opts)
        else:
            _, warp_kind = METHODS[method]
            if a_override == 1.0 and warp_kind == "identity":
                opts["aux"] = "none"
            config = EstimatorConfig(a=a_override, j0=j0, j1=j1,
                                     warp_kind=warp_kind, **opts)
        fit = fit_power_density(sample, w, config)
        xs = np.linspace(sample.min(), sample.max(), grid)
        f_hat = fit.density(xs)
        f_hat_a = fit.power_density(xs)
    except Exception as exc:
        _fail(EXIT_COMPUTE, f"estimation failed: {exc}")
    with open(output, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "f_hat", "f_hat_a"])
        for x, fv, fav in zip(xs, f_hat, f_hat_a):
            writer.writerow([_fmt(x), _fmt(fv), _fmt(fav)])
    sidecar = {
        "method": method,
        "weight": weight,
        "a": config.a,
        "j0": config.j0,
        "j1": config.j1,
        "filter": config.filter.name,
        "threshold": config.threshold,
        "mu_hat": fit.diagnostics["mu_hat"],
        "sigma_hat": fit.diagnostics["sigma_hat"],
        "lambda": fit.diagnostics["lambda"],
        "g_floor_clamped": fit.diagnostics["g_floor_clamped"],
        "n": fit.diagnostics["n"],
        "transform": {"q": fit.transform.q, "s": fit.transform.s,
                      "epsilon": fit.transform.epsilon},
    }
    if "bandwidth" in fit.diagnostics:
        sidecar["bandwidth"] = fit.diagnostics["bandwidth"]
    with open(output + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


@main.command()
@click.option("--output", "-o", required=True, type=click.Path())
@click.option("--example", default="ex1", type=click.Choice(EXAMPLE_IDS))
@click.option("--n", "sizes", default="250,500,750,1000",
              help="Comma-separated sample sizes.")
@click.option("--p", "ps", default="0.20,0.45,0.70,0.95",
              help="Comma-separated level-rule exponents.")
@click.option("--methods", default="m1,m2,m3,m4")
@click.option("--reps", default=100, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--grid", default=250, type=int)
@click.option("--j0", default=0, type=int)
@click.option("--threshold", default="hard", type=click.Choice(sorted(_THRESHOLD_MODES)))
@click.option("--filter", "filter_name", default="sym10")
@click.option("--format", "fmt", default="csv", type=click.Choice(["csv", "json"]))
@click.option("--strict", is_flag=True, help="Exit 3 if any table cell fails.")
def simulate(output, example, sizes, ps, methods, reps, seed, grid, j0,
             threshold, filter_name, fmt, strict):
    """Run the Monte Carlo replication study and write the ASE table."""
    sizes_t = tuple(int(v) for v in _parse_floats(sizes, "--n"))
    ps_t = _parse_floats(ps, "--p")
    methods_t = tuple(m.strip() for m in methods.split(","))
    for m in methods_t:
        if m not in METHODS:
            _fail(EXIT_INPUT, f"--methods: unknown method {m!r}")
    if reps < 1:
        _fail(EXIT_INPUT, "--reps must be >= 1")
    try:
        load_filter(filter_name)
    except UnknownFilterError as exc:
        _fail(EXIT_INPUT, str(exc))
    plan = MonteCarloPlan(example=example, sample_sizes=sizes_t, ps=ps_t,
                          methods=methods_t, replications=reps, base_seed=seed,
                          n_grid=grid, j0=j0,
                          threshold=_THRESHOLD_MODES[threshold],
                          filter_name=filter_name)
    try:
        table = run_monte_carlo(plan)
    except Exception as exc:
        _fail(EXIT_COMPUTE, f"simulation failed: {exc}")
    with open(output, "w") as fh:
        fh.write(table.to_csv() if fmt == "csv" else table.to_json() + "\n")
    failed = [r for r in table.rows if "failed" in r]
    if failed:
        for r in failed:
            click.echo(f"cell failed: {r['method']} n={r['n']} p={r['p']}: "
                       f"{r['failed']}", err=True)
        if strict:
            sys.exit(EXIT_COMPUTE)


@main.command()
@click.option("--output", "-o", required=True, type=click.Path())
@click.option("--k-min", default=1, type=int)
@click.option("--k-max", default=400, type=int)
@click.option("--m", "ms", default="1,25,50,75", help="Comma-separated true regularities.")
@click.option("--n", default=1000, type=int)
@click.option("--case", default="both", type=click.Choice(["a_eq_1", "a_ne_1", "both"]))
def eff(output, k_min, k_max, ms, n, case):
    """Write the relative-efficiency curves as CSV `k,m,case,eff`."""
    if k_min < 1 or k_max < k_min:
        _fail(EXIT_INPUT, "need 1 <= k-min <= k-max")
    if n < 2:
        _fail(EXIT_INPUT, "--n must be >= 2")
    ms_t = tuple(int(v) for v in _parse_floats(ms, "--m"))
    if any(m < 1 for m in ms_t):
        _fail(EXIT_INPUT, "--m values must be >= 1")
    cases = ("a_eq_1", "a_ne_1") if case == "both" else (case,)
    with open(output, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["k", "m", "case", "eff"])
        for c in cases:
            for m in ms_t:
                for k in range(k_min, k_max + 1):
                    writer.writerow([k, m, c, _fmt(efficiency(k, m, n, c))])


@main.command("wavelet-table")
@click.option("--output", "-o", required=True, type=click.Path())
@click.option("--filter", "filter_name", default="sym10")
@click.option("--level", default=10, type=int, help="Dyadic grid refinement level.")
def wavelet_table(output, filter_name, level):
    """Dump phi/psi on a dyadic grid over the support as CSV `x,phi,psi`."""
    try:
        filt = load_filter(filter_name)
    except UnknownFilterError as exc:
        _fail(EXIT_INPUT, str(exc))
    if not 0 <= level <= 24:
        _fail(EXIT_INPUT, "--level must lie in [0, 24]")
    support = filt.support_length
    xs = np.arange(support * (1 << level) + 1) / float(1 << level)
    frac, whole = np.modf(xs)
    m = whole.astype(np.int64)
    inside = m < support
    rows = np.flatnonzero(inside)
    phi = np.zeros_like(xs)
    psi = np.zeros_like(xs)
    phi[inside] = phi_offset_vectors(filt, frac[inside], DEFAULT_PRECISION)[
        np.arange(rows.size), m[inside]]
    psi[inside] = psi_offset_vectors(filt, frac[inside], DEFAULT_PRECISION)[
        np.arange(rows.size), m[inside]]
    with open(output, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "phi", "psi"])
        for x, pv, sv in zip(xs, phi, psi):
            writer.writerow([_fmt(x), _fmt(pv), _fmt(sv)])


if __name__ == "__main__":
    main()
