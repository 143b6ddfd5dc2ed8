"""Reading state and loop files.

State file::

    {"label": "bell", "amplitudes": [[0.7071, 0], [0, 0], [0, 0], [0.7071, 0]]}

with the unit-normalized amplitudes of ``|00>, |01>, |10>, |11>`` as
``[re, im]`` pairs.  Loop file::

    {"kind": "c_kappa", "kappa": 0.5236}
    {"kind": "spin5", "alpha": [[...5 numbers...], ...], "base": [0, 0, 0, 1, 0]}
    {"kind": "sampled", "points": [[xi0, xi1, xi2, xi3, xi4], ...]}

with optional ``t_end`` (default 2 pi) and ``n_steps`` (default 20000).
Either file may hold a single record or a list of records.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import QHopfError
from .holonomy import BELL_POINT, DEFAULT_STEPS, TWO_PI, LoopSpec, c_kappa_generator, spin5_generator
from .hopf import S4Point
from .state import TwoQubitState, state_from_unit_amplitudes


class InputError(QHopfError):
    """Malformed input file."""


@dataclass(frozen=True)
class StateRecord:
    state: TwoQubitState
    label: str | None = None


@dataclass(frozen=True)
class LoopRecord:
    kind: str
    loop: LoopSpec
    n_steps: int = DEFAULT_STEPS
    kappa: float | None = None
    label: str | None = None

    @property
    def t_end(self) -> float:
        return self.loop.t_end

    def path(self):
        """``(callable, period)`` describing the loop for the evolution module."""
        from .evolution import as_path

        return as_path(self.loop)


def _load_json(path) -> list[dict]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read file ({exc.strerror})") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    records = data if isinstance(data, list) else [data]
    for n, rec in enumerate(records):
        if not isinstance(rec, dict):
            raise InputError(f"{path}: record {n} is not an object")
    return records


def _where(path, n, key) -> str:
    return f"{path}: record {n}, field '{key}'"


def _complex_list(value, where) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: expected numbers") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError(f"{where}: expected a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def parse_state(rec: dict, where: str = "state") -> StateRecord:
    if "amplitudes" not in rec:
        raise InputError(f"{where}: missing field 'amplitudes'")
    amps = _complex_list(rec["amplitudes"], f"{where}, field 'amplitudes'")
    if amps.shape != (4,):
        raise InputError(f"{where}, field 'amplitudes': expected 4 amplitudes, got {amps.size}")
    try:
        state = state_from_unit_amplitudes(amps)
    except QHopfError as exc:
        raise type(exc)(f"{where}, field 'amplitudes': {exc}") from exc
    return StateRecord(state=state, label=rec.get("label"))


def load_states(path) -> list[StateRecord]:
    return [parse_state(rec, f"{path}: record {n}") for n, rec in enumerate(_load_json(path))]


def _number(rec, key, where, default=None) -> float:
    if key not in rec:
        if default is None:
            raise InputError(f"{where}: missing field '{key}'")
        return default
    try:
        return float(rec[key])
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}, field '{key}': expected a number") from exc


def parse_loop(rec: dict, where: str = "loop") -> LoopRecord:
    kind = rec.get("kind")
    t_end = _number(rec, "t_end", where, TWO_PI)
    n_steps = int(_number(rec, "n_steps", where, float(DEFAULT_STEPS)))
    if n_steps < 1:
        raise InputError(f"{where}, field 'n_steps': must be positive")
    label = rec.get("label")
    if kind == "c_kappa":
        kappa = _number(rec, "kappa", where)
        loop = LoopSpec.orbit(c_kappa_generator(kappa), BELL_POINT, t_end)
        return LoopRecord(kind, loop, n_steps, kappa=kappa, label=label)
    if kind == "spin5":
        if "alpha" not in rec:
            raise InputError(f"{where}: missing field 'alpha'")
        try:
            alpha = np.asarray(rec["alpha"], dtype=float)
            base = S4Point(rec.get("base", BELL_POINT.xi))
        except (TypeError, ValueError) as exc:
            raise InputError(f"{where}: {exc}") from exc
        if alpha.shape != (5, 5):
            raise InputError(f"{where}, field 'alpha': expected a 5x5 matrix")
        return LoopRecord(kind, LoopSpec.orbit(spin5_generator(alpha), base, t_end), n_steps, label=label)
    if kind == "sampled":
        if "points" not in rec:
            raise InputError(f"{where}: missing field 'points'")
        try:
            pts = np.asarray(rec["points"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise InputError(f"{where}, field 'points': expected numbers") from exc
        if pts.ndim != 2 or pts.shape[1] != 5 or len(pts) < 2:
            raise InputError(f"{where}, field 'points': expected at least two 5-vectors")
        return LoopRecord(kind, LoopSpec.sampled(pts), len(pts) - 1, label=label)
    raise InputError(f"{where}, field 'kind': expected 'c_kappa', 'spin5' or 'sampled', got {kind!r}")


def load_loops(path) -> list[LoopRecord]:
    return [parse_loop(rec, f"{path}: record {n}") for n, rec in enumerate(_load_json(path))]
