"""``qdarwin`` command-line front end.

Exit codes: 0 success, 1 validation mismatch, 2 usage or schema error,
3 physical-regime error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import info, scattering
from .errors import (
    DegenerateInputError,
    DomainError,
    NoSolutionError,
    OracleSizeError,
    RegimeError,
    ScenarioError,
)
from .tables import FORMULA_VERSION, OutputTable, format_number, input_hash
from .validation import run_validation

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_REGIME = 0, 1, 2, 3
_GRID_TOL = 1e-12


class UsageError(Exception):
    pass


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` (stop included within 1e-12) or a comma list."""
    try:
        if ":" in text:
            start, stop, step = (float(p) for p in text.split(":"))
            if not step > 0 or stop < start:
                raise UsageError(f"bad grid {text!r}: need step > 0 and stop >= start")
            n = math.floor((stop - start) / step + _GRID_TOL / step)
            grid = start + step * np.arange(n + 1)
            if abs(grid[-1] - stop) <= _GRID_TOL:
                grid[-1] = stop
            return grid
        return np.array([float(p) for p in text.split(",") if p.strip()])
    except ValueError:
        raise UsageError(f"cannot parse grid {text!r}") from None


def _threads() -> int | None:
    value = os.environ.get("QDARWIN_THREADS")
    if not value:
        return None
    try:
        n = int(value)
    except ValueError:
        raise UsageError(f"QDARWIN_THREADS must be a positive integer, got {value!r}") from None
    if n < 1:
        raise UsageError(f"QDARWIN_THREADS must be a positive integer, got {value!r}")
    return n


def _parallel_map(fn, items):
    items = list(items)
    threads = _threads()
    if threads == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _load_scenario(ref: str) -> scattering.PhysicalScenario:
    path = Path(ref)
    if path.is_file():
        return scattering.load_scenario(path)
    if path.suffix == "" and os.sep not in ref:
        return scattering.bundled_scenario(ref)
    raise ScenarioError(f"scenario file {ref!r} not found")


def _factors(args) -> tuple[list[info.DecoherenceFactor], dict, scattering.PhysicalScenario | None]:
    """Decoherence factors from --gamma-exponent, --gamma, --t-range or a scenario."""
    inputs: dict = {}
    scenario = None
    if getattr(args, "scenario", None):
        if not args.times:
            raise UsageError("--scenario needs a non-empty --times list (seconds)")
        scenario = _load_scenario(args.scenario)
        tau = scattering.decoherence_time(scenario).tau_d
        exponents = [0.0 if math.isinf(tau) else t / tau for t in args.times]
        if any(t < 0 for t in args.times):
            raise UsageError("times must be non-negative")
        inputs = {"scenario": scenario.to_dict(), "times_s": list(args.times)}
    elif args.gamma_exponent is not None:
        exponents = list(args.gamma_exponent)
        inputs = {"gamma_exponent": exponents}
    elif args.gamma is not None:
        exponents = [info.DecoherenceFactor.from_value(g).exponent for g in args.gamma]
        inputs = {"gamma": list(args.gamma)}
    elif getattr(args, "t_range", None):
        exponents = list(parse_grid(args.t_range))
        inputs = {"t_range": args.t_range}
    else:
        raise UsageError("give --gamma-exponent, --gamma, --t-range or --scenario with --times")
    if not exponents:
        raise UsageError("the list of times is empty")
    if any(not x >= 0 for x in exponents):
        raise UsageError("t/tau_D values must be non-negative")
    return [info.DecoherenceFactor(x) for x in exponents], inputs, scenario


def _metadata(command: str, inputs: dict, **extra) -> dict:
    meta = {"command": command, "formula_version": FORMULA_VERSION, "scenario_hash": input_hash(inputs)}
    meta.update({k: str(v) for k, v in extra.items()})
    return meta


def cmd_pip(args) -> OutputTable:
    factors, inputs, scenario = _factors(args)
    illumination = args.illumination or (scenario.illumination.value if scenario else "point")
    grid = parse_grid(args.fractions)
    inputs.update(illumination=illumination, fractions=args.fractions)

    def curve(factor):
        return info.info_curve(factor, illumination, grid)

    rows = []
    for factor, c in zip(factors, _parallel_map(curve, factors)):
        for f, value in c.points:
            rows.append((factor.exponent, f, value, value / info.LN2))
    return OutputTable(
        ("t_over_tau", "f", "I_nats", "I_bits"),
        rows,
        _metadata("pip", inputs, illumination=illumination),
    )


def cmd_redundancy(args) -> OutputTable:
    if not 0.0 < args.delta < 1.0:
        raise UsageError(f"--delta must lie in (0, 1), got {args.delta}")
    factors, inputs, _ = _factors(args)
    if any(f.exponent <= 0.0 or math.isinf(f.exponent) for f in factors):
        raise UsageError("redundancy needs 0 < t/tau_D < inf")
    inputs.update(delta=args.delta)
    if args.delta >= 0.5:
        print(
            f"warning: the asymptotic estimate only holds for delta < 0.5; "
            f"R_asymptotic left empty for delta={args.delta}",
            file=sys.stderr,
        )

    def solve(factor):
        return info.redundancy_exact(factor, args.delta)

    rows = [
        (f.exponent, r.f_delta, r.redundancy, r.asymptotic, float(r.has_plateau))
        for f, r in zip(factors, _parallel_map(solve, factors))
    ]
    return OutputTable(
        ("t_over_tau", "f_delta", "R_exact", "R_asymptotic", "has_plateau"),
        rows,
        _metadata("redundancy", inputs, delta=format_number(args.delta)),
    )


def cmd_decohere(args) -> OutputTable:
    if not args.times:
        raise UsageError("--times must list at least one time (seconds)")
    if any(t < 0 for t in args.times):
        raise UsageError("times must be non-negative")
    scenario = _load_scenario(args.scenario)
    tau = scattering.decoherence_time(scenario)
    rows = []
    for t in args.times:
        factor = info.DecoherenceFactor(0.0 if math.isinf(tau.tau_d) else t / tau.tau_d)
        h = info.branch_entropy(factor)
        rows.append((t, factor.exponent, factor.value, h, h / info.LN2))
    inputs = {"scenario": scenario.to_dict(), "times_s": list(args.times)}
    return OutputTable(
        ("t_s", "t_over_tau", "gamma", "H_S_nats", "H_S_bits"),
        rows,
        _metadata(
            "decohere",
            inputs,
            regime=tau.regime.value,
            tau_d_s="inf" if math.isinf(tau.tau_d) else format_number(tau.tau_d),
        ),
    )


def scenario_report(scenario: scattering.PhysicalScenario, t: float, delta: float) -> dict:
    """The full scenario-to-redundancy pipeline with an SI audit trail."""
    if not t >= 0:
        raise UsageError("--time must be non-negative")
    if not 0.0 < delta < 1.0:
        raise UsageError(f"--delta must lie in (0, 1), got {delta}")
    notes: list[str] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        regime = scattering.resolve_regime(scenario)
    messages = list(dict.fromkeys(str(w.message) for w in caught))

    if regime is scattering.Regime.SATURATED:
        tau = scattering.decoherence_time_saturated(scenario)
    else:
        tau = scattering.decoherence_time_dipole(scenario)
    lam = scattering.thermal_peak_wavelength(scenario.temperature_K)
    quantities = [
        ("effective_radius", scattering.effective_radius(scenario.radius_m, scenario.epsilon), "m"),
        ("thermal_peak_wavelength", lam, "m"),
        ("photon_density", scattering.irradiance_to_density(scenario.irradiance_W_m2, scenario.temperature_K), "1/m^3"),
        ("regime", regime.value, ""),
        ("tau_d", None if math.isinf(tau.tau_d) else tau.tau_d, "s"),
        ("time", t, "s"),
    ]
    if math.isinf(tau.tau_d):
        notes.append("irradiance is zero: no decoherence, tau_D is infinite and redundancy is undefined")
    factor = info.DecoherenceFactor(0.0 if math.isinf(tau.tau_d) else t / tau.tau_d)
    h_s = info.branch_entropy(factor)
    quantities += [
        ("t_over_tau", factor.exponent, ""),
        ("ln_gamma", -factor.exponent, ""),
        ("gamma", factor.value, ""),
        ("H_S", h_s, "nats"),
        ("H_S_bits", h_s / info.LN2, "bits"),
    ]
    if math.isinf(tau.tau_d):
        f_delta = r_exact = r_asym = has_plateau = None
    elif factor.exponent == 0.0:
        notes.append("t = 0: the system is still pure, no records exist")
        f_delta, r_exact, r_asym, has_plateau = None, 0.0, 0.0, False
    else:
        result = info.redundancy_exact(factor, delta)
        f_delta, r_exact, r_asym, has_plateau = (
            result.f_delta,
            result.redundancy,
            result.asymptotic,
            result.has_plateau,
        )
    quantities += [
        ("delta", delta, ""),
        ("f_delta", f_delta, ""),
        ("R_exact", r_exact, ""),
        ("R_asymptotic", r_asym, ""),
        ("has_plateau", has_plateau, ""),
    ]
    inputs = {"scenario": scenario.to_dict(), "time_s": t, "delta": delta}
    return {
        "metadata": _metadata("scenario", inputs),
        "scenario": scenario.to_dict(),
        "quantities": {name: {"value": value, "unit": unit} for name, value, unit in quantities},
        "warnings": messages,
        "notes": notes,
    }


def _report_text(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    lines = [f"# {k}: {v}" for k, v in report["metadata"].items()]
    lines += [f"# warning: {w}" for w in report["warnings"]]
    lines += [f"# note: {n}" for n in report["notes"]]
    lines.append("quantity,value,unit")
    for name, entry in report["quantities"].items():
        value = entry["value"]
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = format_number(value)
        else:
            text = "" if value is None else str(value)
        lines.append(f"{name},{text},{entry['unit']}")
    return "\n".join(lines) + "\n"


def cmd_scenario(args) -> str:
    scenario = _load_scenario(args.scenario)
    report = scenario_report(scenario, args.time, args.delta)
    for message in report["warnings"]:
        print(f"warning: {message}", file=sys.stderr)
    for note in report["notes"]:
        print(f"note: {note}", file=sys.stderr)
    return _report_text(report, args.format)


def cmd_validate(args) -> tuple[str, int]:
    report = run_validation(max_n=args.max_n, tolerance=args.tolerance)
    if args.format == "json":
        text = json.dumps(report.to_dict(), indent=2) + "\n"
    else:
        text = "\n".join(report.lines()) + "\n"
    return text, EXIT_OK if report.passed else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", help="write to this file instead of standard output")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--gamma-exponent", type=float, nargs="*", metavar="X", help="Gamma = exp(-X), X = t/tau_D")
    source.add_argument("--gamma", type=float, nargs="*", metavar="G", help="raw decoherence factors in [0, 1]")
    source.add_argument("--scenario", help="scenario JSON file or bundled scenario name")
    source.add_argument("--times", type=float, nargs="*", metavar="T", help="times in seconds (with --scenario)")

    parser = argparse.ArgumentParser(prog="qdarwin", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pip", parents=[common, source], help="partial information plot data")
    p.add_argument("--illumination", choices=("point", "isotropic"))
    p.add_argument("--fractions", default="0:1:0.01", help="f grid as start:stop:step or a comma list")
    p.set_defaults(handler=cmd_pip)

    p = sub.add_parser("redundancy", parents=[common, source], help="redundancy versus time")
    p.add_argument("--delta", type=float, required=True, help="information deficit")
    p.add_argument("--t-range", help="t/tau_D grid as start:stop:step")
    p.set_defaults(handler=cmd_redundancy)

    p = sub.add_parser("decohere", parents=[common], help="decoherence time and factor of a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--times", type=float, nargs="+", required=True, metavar="T")
    p.set_defaults(handler=cmd_decohere)

    p = sub.add_parser("scenario", parents=[common], help="full pipeline report for a scenario")
    p.add_argument("scenario_file", nargs="?", help="scenario JSON file or bundled name")
    p.add_argument("--scenario", dest="scenario_opt")
    p.add_argument("--time", type=float, default=1e-6, help="illumination time in seconds")
    p.add_argument("--delta", type=float, default=0.1)
    p.set_defaults(handler=cmd_scenario)

    p = sub.add_parser("validate", parents=[common], help="oracle-versus-formula sweep (text report unless --format json)")
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.set_defaults(handler=cmd_validate)
    return parser


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "scenario":
        args.scenario = args.scenario_opt or args.scenario_file
        if not args.scenario:
            parser.error("scenario: give a scenario file or name")
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", scattering.RegimeWarning)
            result = args.handler(args)
        if args.command != "scenario":
            for message in dict.fromkeys(str(w.message) for w in caught):
                print(f"warning: {message}", file=sys.stderr)
    except UsageError as exc:
        print(f"qdarwin {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RegimeError as exc:
        print(f"qdarwin {args.command}: regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except (DomainError, ScenarioError, OracleSizeError, DegenerateInputError, NoSolutionError) as exc:
        print(f"qdarwin {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    code = EXIT_OK
    if isinstance(result, tuple):
        result, code = result
    if isinstance(result, OutputTable):
        result = result.dumps(args.format)
    _emit(result, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
