"""Command-line front end.

Commands: ``dop``, ``check-perfect``, ``sweep``, ``moment``.  All numeric
output uses the dot decimal separator independent of locale, and every
computation is deterministic.  Exit codes are a stable contract:

    0  success
    2  spec-file parse failure (diagnostic names the line)
    3  cutoff inadequacy (diagnostic names the minimal adequate cutoff)
    4  mixed-state input to check-perfect without --mixed
    5  unwritable output path
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .analytic import dop_second_analytic
from .dop import (
    METHOD_FIRST,
    METHOD_SECOND,
    DopReport,
    extremize_intensity,
    perfect_polarization_index,
    perfect_polarization_index_mixed,
)
from .errors import CutoffTooSmallError, SpecFileError
from .fock import (
    DensityOperator,
    FockState,
    MomentOrder,
    density_from_pure,
    normally_ordered_moment,
)
from .specfile import load_state_spec
from .states import Family, StateFamily

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CUTOFF = 3
EXIT_MIXED = 4
EXIT_OUTPUT = 5

_NORM_SLACK = 1e-9  # serialization round-off allowance on stored pure states


class _CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        n_chi, _, n_delta = text.lower().partition("x")
        grid = (int(n_chi), int(n_delta))
    except ValueError:
        raise _CliFailure(EXIT_PARSE, f"--grid must look like 64x64, got {text!r}") from None
    if grid[0] < 2 or grid[1] < 2:
        raise _CliFailure(EXIT_PARSE, f"--grid must be at least 2x2, got {text!r}")
    return grid


def _load_spec(path: str):
    try:
        return load_state_spec(path)
    except OSError as exc:
        raise _CliFailure(EXIT_PARSE, f"cannot read {path}: {exc}") from exc
    except SpecFileError as exc:
        raise _CliFailure(EXIT_PARSE, f"{path}: {exc}") from exc


def _apply_cutoff_override(spec, cutoff: int | None):
    if cutoff is None:
        return spec
    if isinstance(spec, StateFamily):
        return StateFamily(spec.family, spec.params, cutoff)
    # Re-embed explicit amplitudes; shrinking below the stored support is a
    # usage error, not a truncation we would apply silently.
    if cutoff < spec.cutoff:
        occupied = np.argwhere(np.abs(spec.amps) > 0)
        if occupied.size and int(occupied.max()) > cutoff:
            raise _CliFailure(
                EXIT_PARSE, f"--cutoff {cutoff} is below the stored state's support"
            )
    table = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    keep = min(cutoff, spec.cutoff) + 1
    table[:keep, :keep] = spec.amps[:keep, :keep]
    return FockState(cutoff, table, normalized=spec.normalized, lost_mass=spec.lost_mass)


def _normalized_pure(state: FockState) -> FockState:
    if state.normalized:
        return state
    norm_sq = state.norm_squared()
    if norm_sq == 0.0:
        raise _CliFailure(EXIT_PARSE, "state file holds the zero vector")
    if abs(norm_sq - 1.0) > _NORM_SLACK:
        raise _CliFailure(
            EXIT_PARSE, f"state is not normalized (squared norm {norm_sq:.17g})"
        )
    return FockState(state.cutoff, state.amps / math.sqrt(norm_sq), lost_mass=state.lost_mass)


def _build(spec):
    try:
        if isinstance(spec, StateFamily):
            return spec.build(), spec.resolved_cutoff()
        state = _normalized_pure(spec)
        return state, state.cutoff
    except CutoffTooSmallError as exc:
        raise _CliFailure(EXIT_CUTOFF, str(exc)) from exc


def _as_density(built) -> DensityOperator:
    return density_from_pure(built) if isinstance(built, FockState) else built


def _open_output(path: str):
    try:
        return open(path, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise _CliFailure(EXIT_OUTPUT, f"cannot write {path}: {exc}") from exc


def _print_report(report: DopReport) -> None:
    print(f"method: {report.method}")
    print(f"  max_intensity: {report.max_intensity:.12f}")
    print(f"  min_intensity: {report.min_intensity:.12f}")
    print(f"  argmax_chi_delta: {report.argmax.chi:.6f} {report.argmax.delta:.6f}")
    print(f"  argmin_chi_delta: {report.argmin.chi:.6f} {report.argmin.delta:.6f}")
    print(f"  degenerate: {'yes' if report.degenerate else 'no'}")
    print(f"  dop: {report.dop:.6f}")


def cmd_dop(args) -> int:
    spec = _apply_cutoff_override(_load_spec(args.state_file), args.cutoff)
    built, cutoff = _build(spec)
    rho = _as_density(built)
    grid = _parse_grid(args.grid)
    methods = [METHOD_FIRST, METHOD_SECOND] if args.method == "both" else [args.method]
    print(f"state: {args.state_file}")
    print(f"cutoff: {cutoff}")
    reports = [extremize_intensity(rho, method, grid, args.tol) for method in methods]
    for report in reports:
        _print_report(report)
    if args.output:
        with _open_output(args.output) as handle:
            handle.write(
                "method,max_intensity,min_intensity,argmax_chi,argmax_delta,"
                "argmin_chi,argmin_delta,dop\n"
            )
            for report in reports:
                handle.write(
                    f"{report.method},{report.max_intensity:.17g},{report.min_intensity:.17g},"
                    f"{report.argmax.chi:.17g},{report.argmax.delta:.17g},"
                    f"{report.argmin.chi:.17g},{report.argmin.delta:.17g},{report.dop:.17g}\n"
                )
    return EXIT_OK


def _print_index_result(result) -> None:
    if result.y_polarized:
        print("y-polarized")
        return
    if result.vacuum:
        print("vacuum: trivially polarized, p undefined")
        return
    verdict = "perfectly polarized" if result.polarized else "not perfectly polarized"
    print(f"{verdict}, residual {result.residual:.1e}")
    sign = "+" if result.p.imag >= 0 else "-"
    print(f"p = {result.p.real:.6f} {sign} {abs(result.p.imag):.6f}i")
    print(f"|p| = {result.amplitude_ratio:.6f}")
    print(f"arg p = {result.phase_difference:.6f}")


def cmd_check_perfect(args) -> int:
    spec = _apply_cutoff_override(_load_spec(args.state_file), args.cutoff)
    if isinstance(spec, StateFamily) and not spec.is_pure and not args.mixed:
        raise _CliFailure(
            EXIT_MIXED,
            f"family {spec.family.value} builds a mixed state; "
            "pass --mixed for the density-matrix criterion",
        )
    built, _ = _build(spec)
    if isinstance(built, FockState):
        result = perfect_polarization_index(built, tol=args.tol)
    else:
        result = perfect_polarization_index_mixed(built, tol=args.tol)
    _print_index_result(result)
    return EXIT_OK


def _parse_range(text: str) -> tuple[float, float, float]:
    tokens = text.split(":")
    if len(tokens) != 3:
        raise _CliFailure(EXIT_PARSE, f"--n0 must look like start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(tok) for tok in tokens)
    except ValueError:
        raise _CliFailure(EXIT_PARSE, f"--n0 values must be numbers, got {text!r}") from None
    if step <= 0.0:
        raise _CliFailure(EXIT_PARSE, "--n0 step must be positive")
    if start > stop:
        raise _CliFailure(EXIT_PARSE, "--n0 start must not exceed stop")
    return start, stop, step


def cmd_sweep(args) -> int:
    family = Family(args.family)
    if family not in (Family.PHASE_RANDOMIZED_COHERENT, Family.HIDDEN_POLARIZED):
        raise _CliFailure(
            EXIT_PARSE, f"sweep varies n0; family {family.value} has no n0 parameter"
        )
    start, stop, step = _parse_range(args.n0)
    grid = _parse_grid(args.grid)
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    rows = []
    for index in range(count):
        n0 = start + index * step
        spec = StateFamily(family, {"n0": n0}, args.cutoff)
        try:
            rho = spec.build()
        except CutoffTooSmallError as exc:
            raise _CliFailure(EXIT_CUTOFF, str(exc)) from exc
        first = extremize_intensity(rho, METHOD_FIRST, grid, args.tol).dop
        second = extremize_intensity(rho, METHOD_SECOND, grid, args.tol).dop
        analytic = dop_second_analytic(n0)
        rows.append((n0, first, second, analytic, abs(second - analytic)))
    lines = ["n0,dop_first,dop_second_numeric,dop_second_analytic,abs_err"]
    lines += [
        f"{n0:.10g},{first:.12g},{second:.12g},{analytic:.12g},{err:.12g}"
        for n0, first, second, analytic, err in rows
    ]
    text = "\n".join(lines) + "\n"
    if args.output:
        with _open_output(args.output) as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_moment(args) -> int:
    spec = _apply_cutoff_override(_load_spec(args.state_file), args.cutoff)
    built, _ = _build(spec)
    rho = _as_density(built)
    value = normally_ordered_moment(rho, MomentOrder(args.p, args.q, args.r, args.s))
    print(f"{value.real:.6f} {value.imag:.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twopol",
        description="Degree-of-polarization computations for two-mode quantum light.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cutoff", type=int, default=None, help="override the truncation")
    common.add_argument("--grid", default="64x64", help="coarse search grid, e.g. 64x64")
    common.add_argument("--tol", type=float, default=1e-10, help="refinement/residual tolerance")
    common.add_argument("--output", default=None, help="write machine-readable CSV here")
    sub = parser.add_subparsers(dest="command", required=True)

    cmd = sub.add_parser("dop", parents=[common], help="extremize intensities and report DOP")
    cmd.add_argument("state_file")
    cmd.add_argument("--method", choices=["first", "second", "both"], default="both")
    cmd.set_defaults(handler=cmd_dop)

    cmd = sub.add_parser(
        "check-perfect", parents=[common], help="perfect-polarization criterion"
    )
    cmd.add_argument("state_file")
    cmd.add_argument(
        "--mixed", action="store_true", help="use the density-matrix criterion variant"
    )
    cmd.set_defaults(handler=cmd_check_perfect)

    cmd = sub.add_parser("sweep", parents=[common], help="CSV sweep of DOP against n0")
    cmd.add_argument(
        "--family",
        default=Family.PHASE_RANDOMIZED_COHERENT.value,
        choices=[Family.PHASE_RANDOMIZED_COHERENT.value, Family.HIDDEN_POLARIZED.value],
    )
    cmd.add_argument("--n0", required=True, help="range as start:stop:step")
    cmd.set_defaults(handler=cmd_sweep)

    cmd = sub.add_parser("moment", parents=[common], help="normally ordered moment")
    cmd.add_argument("state_file")
    cmd.add_argument("-p", type=int, default=0, help="power of the x-mode creation operator")
    cmd.add_argument("-q", type=int, default=0, help="power of the y-mode creation operator")
    cmd.add_argument("-r", type=int, default=0, help="power of the x-mode annihilation operator")
    cmd.add_argument("-s", type=int, default=0, help="power of the y-mode annihilation operator")
    cmd.set_defaults(handler=cmd_moment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except _CliFailure as failure:
        print(f"error: {failure}", file=sys.stderr)
        return failure.code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
