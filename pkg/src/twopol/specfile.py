"""Line-oriented state-spec files: fockstate-v1 and family-v1.

Both formats are `key: value` text, one entry per line, starting with a
`format:` line.  Blank lines and lines starting with `#` are ignored;
unknown keys and duplicate entries are rejected with a line-numbered
diagnostic.  Numbers use decimal notation with an optional exponent and a
dot decimal separator regardless of locale.

fockstate-v1 carries explicit amplitudes:

    format: fockstate-v1
    cutoff: 2
    amp: 2 0 0.33333333333333331 0

family-v1 names a state family and its parameters:

    format: family-v1
    family: phase-randomized
    param: n0 1
    cutoff: 20        # optional; smallest adequate cutoff when absent

Amplitudes are written with 17 significant digits, so a write/parse round
trip reproduces every double bit-exactly.
"""

from __future__ import annotations

import numpy as np

from .errors import SpecFileError
from .fock import NORM_TOL, FockState
from .states import Family, StateFamily

FOCKSTATE_FORMAT = "fockstate-v1"
FAMILY_FORMAT = "family-v1"


def _significant_lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line


def _split_key(line: str, number: int) -> tuple[str, str]:
    if ":" not in line:
        raise SpecFileError(f"expected 'key: value', got {line!r}", line=number)
    key, _, value = line.partition(":")
    return key.strip(), value.strip()


def _parse_int(token: str, number: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise SpecFileError(f"{what} must be an integer, got {token!r}", line=number) from None


def _parse_float(token: str, number: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise SpecFileError(f"{what} must be a number, got {token!r}", line=number) from None


def _parse_fockstate(entries) -> FockState:
    cutoff = None
    amps = {}
    for number, key, value in entries:
        if key == "cutoff":
            if cutoff is not None:
                raise SpecFileError("duplicate cutoff line", line=number)
            cutoff = _parse_int(value, number, "cutoff")
            if cutoff < 0:
                raise SpecFileError("cutoff must be nonnegative", line=number)
        elif key == "amp":
            tokens = value.split()
            if len(tokens) != 4:
                raise SpecFileError("amp needs 'n_x n_y re im'", line=number)
            n_x = _parse_int(tokens[0], number, "n_x")
            n_y = _parse_int(tokens[1], number, "n_y")
            if (n_x, n_y) in amps:
                raise SpecFileError(f"duplicate amplitude for index ({n_x}, {n_y})", line=number)
            amps[(n_x, n_y)] = (
                complex(
                    _parse_float(tokens[2], number, "re"), _parse_float(tokens[3], number, "im")
                ),
                number,
            )
        else:
            raise SpecFileError(f"unknown key {key!r} in {FOCKSTATE_FORMAT}", line=number)
    if cutoff is None:
        raise SpecFileError(f"{FOCKSTATE_FORMAT} needs a cutoff line")
    table = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for (n_x, n_y), (amp, number) in amps.items():
        if n_x > cutoff or n_y > cutoff:
            raise SpecFileError(f"index ({n_x}, {n_y}) outside cutoff {cutoff}", line=number)
        table[n_x, n_y] = amp
    norm_sq = float(np.sum(np.abs(table) ** 2))
    return FockState(cutoff, table, normalized=abs(norm_sq - 1.0) <= NORM_TOL)


def _parse_family(entries) -> StateFamily:
    family = None
    cutoff = None
    params = {}
    for number, key, value in entries:
        if key == "family":
            if family is not None:
                raise SpecFileError("duplicate family line", line=number)
            try:
                family = Family(value)
            except ValueError:
                known = ", ".join(sorted(f.value for f in Family))
                raise SpecFileError(
                    f"unknown family {value!r} (known: {known})", line=number
                ) from None
        elif key == "param":
            tokens = value.split()
            if len(tokens) != 2:
                raise SpecFileError("param needs '<name> <value>'", line=number)
            if tokens[0] in params:
                raise SpecFileError(f"duplicate parameter {tokens[0]!r}", line=number)
            params[tokens[0]] = _parse_float(tokens[1], number, f"parameter {tokens[0]}")
        elif key == "cutoff":
            if cutoff is not None:
                raise SpecFileError("duplicate cutoff line", line=number)
            cutoff = _parse_int(value, number, "cutoff")
        else:
            raise SpecFileError(f"unknown key {key!r} in {FAMILY_FORMAT}", line=number)
    if family is None:
        raise SpecFileError(f"{FAMILY_FORMAT} needs a family line")
    try:
        return StateFamily(family, params, cutoff)
    except ValueError as exc:
        raise SpecFileError(str(exc)) from exc


def parse_state_spec(text: str) -> FockState | StateFamily:
    """Parse spec text into a FockState or a declarative StateFamily."""
    entries = []
    format_name = None
    for number, line in _significant_lines(text):
        key, value = _split_key(line, number)
        if format_name is None:
            if key != "format":
                raise SpecFileError("first entry must be the format line", line=number)
            if value not in (FOCKSTATE_FORMAT, FAMILY_FORMAT):
                raise SpecFileError(f"unknown format {value!r}", line=number)
            format_name = value
            continue
        if key == "format":
            raise SpecFileError("duplicate format line", line=number)
        entries.append((number, key, value))
    if format_name is None:
        raise SpecFileError("empty spec: missing format line")
    if format_name == FOCKSTATE_FORMAT:
        return _parse_fockstate(entries)
    return _parse_family(entries)


def load_state_spec(path) -> FockState | StateFamily:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_state_spec(handle.read())


def dump_fock_state(state: FockState) -> str:
    """Serialize a pure state; 17 significant digits round-trip bit-exactly."""
    lines = [f"format: {FOCKSTATE_FORMAT}", f"cutoff: {state.cutoff}"]
    for n_x in range(state.cutoff + 1):
        for n_y in range(state.cutoff + 1):
            amp = state.amps[n_x, n_y]
            if amp != 0:
                lines.append(f"amp: {n_x} {n_y} {amp.real:.17g} {amp.imag:.17g}")
    return "\n".join(lines) + "\n"


def save_fock_state(state: FockState, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(dump_fock_state(state))
