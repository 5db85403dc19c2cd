"""Command-line front end.

Subcommands: gate-quality, search, velocity-error, timing, trajectory,
verify.  Values come from flags, then a flat key=value config file, then
built-in defaults that reproduce the reference setup (n=10, eta=10,
omega1 = 2pi x 4.9 kHz, marked 0011000000).  Swept flags accept a single
value, a comma list, or start:stop:step.  Exit codes: 0 success, 2 usage
error, 3 parameter-domain error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

from . import experiments
from .gates import DomainError, bitstring_to_index
from .records import fmt_float, render_records, write_records

EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

FIELDS = {
    "gate-quality": ["eta", "mu", "fidelity", "p_success"],
    "search": ["mu", "k", "p_success", "survival", "p_conditional"],
    "velocity-error": ["eta", "mu", "delta_t_us", "infidelity"],
    "timing": [
        "n",
        "mu",
        "iterations",
        "t0_s",
        "total_s",
        "cavity_decay_time_s",
        "atom_lifetime_s",
    ],
    "trajectory": ["atom", "z", "coupling_factor"],
    "verify": ["m", "mu", "t_factor", "max_component_error"],
}

DEFAULTS = {
    "n": "10",
    "eta": "10",
    "omega1_khz": "4.9",
    "marked": "0011000000",
    "format": "csv",
    "lambda0": "1.0",
    "kmax": "40",
    "mu": {
        "gate-quality": "0:0.1:0.01",
        "search": "0,0.05,0.1",
        "velocity-error": "0.05,0.1",
        "timing": "0.1",
        "verify": "0,0.05,0.1",
        "trajectory": "0",
    },
    "delta_t_us": "0:5:0.25",
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    n: int
    eta: list[float]
    mu: list[float]
    omega1: float
    marked: str
    kmax: int
    delta_t_us: list[float]
    iterations: int | None
    lambda0: float
    out: str | None
    format: str


def parse_grid(text: str) -> list[float]:
    """Parse a swept value: '2', '0,0.05,0.1', or 'start:stop:step'."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, stop, step = parts
            if step <= 0 or stop < start:
                raise ValueError
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [start + i * step for i in range(count)]
        return [float(p) for p in text.split(",") if p.strip() != ""]
    except ValueError:
        raise UsageError(f"cannot parse grid specification {text!r}") from None


def _read_config_file(path: str) -> dict[str, str]:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavity-grover",
        description="Amplitude-amplification search with dissipative "
        "cavity phase gates: quality sweeps, search traces, timing and "
        "placement data.",
    )
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    specs = {
        "gate-quality": "gate fidelity and survival over an (eta, mu) grid",
        "search": "search probability trace over iteration count",
        "velocity-error": "gate infidelity versus control-atom time delay",
        "timing": "gate, search and decoherence time budget",
        "trajectory": "atom track coordinates through the cavity mode",
        "verify": "closed forms versus the ODE integrator",
    }
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--n", type=int, default=None, help="qubit count")
        p.add_argument("--eta", default=None, help="coupling ratio (grid allowed)")
        p.add_argument("--mu", default=None, help="decay ratio (grid allowed)")
        p.add_argument(
            "--omega1-khz",
            type=float,
            default=None,
            dest="omega1_khz",
            help="control coupling in kHz, as the x2pi prefactor",
        )
        p.add_argument("--marked", default=None, help="marked logical bitstring")
        p.add_argument("--kmax", type=int, default=None, help="iteration limit")
        p.add_argument(
            "--delta-t-us",
            default=None,
            dest="delta_t_us",
            help="time delays in microseconds (grid allowed)",
        )
        p.add_argument(
            "--iterations", type=int, default=None, help="search iteration count"
        )
        p.add_argument(
            "--lambda0", type=float, default=None, help="mode wavelength, meters"
        )
        p.add_argument("--out", default=None, help="output file path")
        p.add_argument(
            "--format", default=None, choices=["csv", "json"], help="output format"
        )
        p.add_argument("--config", default=None, help="key=value config file")
    return parser


def parse_config(argv: list[str]) -> RunConfig:
    """Resolve a RunConfig from flags, config file and defaults."""
    parser = _build_parser()
    if not argv:
        parser.print_help()
        raise SystemExit(0)
    args = parser.parse_args(argv)
    if args.subcommand is None:
        parser.print_help()
        raise SystemExit(0)
    sub = args.subcommand

    try:
        file_values = _read_config_file(args.config) if args.config else {}
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None

    def pick(key: str, cast=None):
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            return cli_value
        if key in file_values:
            raw = file_values[key]
            try:
                return cast(raw) if cast else raw
            except ValueError:
                raise UsageError(f"config value {key}={raw!r} is malformed") from None
        default = DEFAULTS.get(key)
        if isinstance(default, dict):
            default = default[sub]
        if default is None or cast is None:
            return default
        return cast(default)

    n = pick("n", int)
    marked = pick("marked")
    iterations = pick("iterations", int)
    uses_marked = sub == "search" or (sub == "timing" and iterations is None)
    if uses_marked and (len(marked) != n or any(c not in "01" for c in marked)):
        raise UsageError(
            f"--marked must be {n} characters of 0/1 for --n {n}, got {marked!r}"
        )
    eta = parse_grid(str(pick("eta")))
    mu = parse_grid(str(pick("mu")))
    delta_t_us = parse_grid(str(pick("delta_t_us")))
    if any(v < 0 for v in mu) or any(v < 0 for v in delta_t_us):
        raise UsageError("mu and delta-t values must be non-negative")
    kmax = pick("kmax", int)
    if kmax < 1:
        raise UsageError(f"--kmax must be >= 1, got {kmax}")
    if iterations is not None and iterations < 1:
        raise UsageError(f"--iterations must be >= 1, got {iterations}")
    fmt = pick("format")
    if fmt not in ("csv", "json"):
        raise UsageError(f"--format must be csv or json, got {fmt!r}")

    return RunConfig(
        subcommand=sub,
        n=n,
        eta=eta,
        mu=mu,
        omega1=2 * math.pi * 1000.0 * pick("omega1_khz", float),
        marked=marked,
        kmax=kmax,
        delta_t_us=delta_t_us,
        iterations=iterations,
        lambda0=pick("lambda0", float),
        out=pick("out"),
        format=fmt,
    )


def _single(values: list[float], flag: str) -> float:
    if len(values) != 1:
        raise UsageError(f"{flag} takes a single value here, got {len(values)}")
    return values[0]


def physical_label(marked: str) -> str:
    """Atomic-level reading of a logical bitstring, qubit 1 first."""
    levels = []
    for j, bit in enumerate(marked, start=1):
        if j == 1:
            levels.append(("e" if bit == "0" else "g") + str(j))
        else:
            levels.append(("i" if bit == "0" else "g") + str(j))
    return "|" + " ".join(levels) + ">"


def execute(config: RunConfig) -> tuple[list[dict], list[str], list[str]]:
    """Dispatch a RunConfig; returns (records, fieldnames, summary lines)."""
    sub = config.subcommand
    summary: list[str] = []

    if sub == "gate-quality":
        records = experiments.gate_quality_sweep(
            config.eta, config.mu, n=config.n, omega1=config.omega1
        )
    elif sub == "search":
        bitstring_to_index(config.marked, config.n)
        eta = _single(config.eta, "--eta")
        records = experiments.search_sweep(
            n=config.n,
            marked=config.marked,
            mu_values=config.mu,
            eta=eta,
            k_max=config.kmax,
            omega1=config.omega1,
        )
        summary.append(f"marked {config.marked} = {physical_label(config.marked)}")
        for mu in sorted(config.mu):
            rows = [r for r in records if r["mu"] == mu]
            best = max(rows, key=lambda r: (r["p_success"], -r["k"]))
            summary.append(
                f"mu={fmt_float(mu)}: optimal k={best['k']} "
                f"p_success={fmt_float(best['p_success'])} "
                f"survival={fmt_float(best['survival'])}"
            )
    elif sub == "velocity-error":
        eta = _single(config.eta, "--eta")
        records = experiments.delay_error_sweep(
            [dt * 1e-6 for dt in config.delta_t_us],
            mu_values=config.mu,
            eta=eta,
            n=config.n,
            omega1=config.omega1,
        )
    elif sub == "timing":
        mu = _single(config.mu, "--mu")
        eta = _single(config.eta, "--eta")
        iterations = config.iterations
        if iterations is None:
            iterations = experiments.optimal_search_iterations(
                config.n, config.marked, mu, eta, config.kmax, config.omega1
            )
            summary.append(
                f"iterations not given: using search optimum k={iterations}"
            )
        budget = experiments.timing_budget(
            config.n, config.omega1, mu, iterations=iterations
        )
        records = [
            {
                "n": config.n,
                "mu": mu,
                "iterations": budget.iterations,
                "t0_s": budget.t0,
                "total_s": budget.total,
                "cavity_decay_time_s": budget.cavity_decay_time,
                "atom_lifetime_s": budget.atom_lifetime,
            }
        ]
        summary.append(
            f"t0={fmt_float(budget.t0 * 1e6)} us, "
            f"total={fmt_float(budget.total * 1e3)} ms over "
            f"{budget.iterations} iterations"
        )
    elif sub == "trajectory":
        eta = _single(config.eta, "--eta")
        plan = experiments.trajectory_plan(config.n, config.lambda0, eta)
        records = [
            {"atom": j + 1, "z": plan.z[j], "coupling_factor": plan.coupling_factor[j]}
            for j in range(config.n)
        ]
    elif sub == "verify":
        eta = _single(config.eta, "--eta")
        records = experiments.dynamics_crosscheck(
            mu_values=config.mu, eta=eta, omega1=config.omega1
        )
        worst = max(r["max_component_error"] for r in records)
        summary.append(f"max closed-form/ODE deviation: {fmt_float(worst)}")
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown subcommand {sub!r}")

    return records, FIELDS[sub], summary


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        config = parse_config(list(argv))
        records, fieldnames, summary = execute(config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    for line in summary:
        print(line)
    try:
        if config.out:
            write_records(records, config.format, config.out, fieldnames)
            print(f"wrote {len(records)} records to {config.out}")
        else:
            sys.stdout.write(render_records(records, config.format, fieldnames))
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
