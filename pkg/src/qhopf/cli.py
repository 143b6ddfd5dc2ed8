"""Command line front end.

Usage::

    qhopf analyze STATE_FILE
    qhopf schmidt STATE_FILE --method both
    qhopf holonomy LOOP_FILE --compare
    qhopf evolve LOOP_FILE --mode adiabatic --ramp 50
    qhopf fidelity STATE_A STATE_B --formula hopf --formula matrix

Every command prints one ``key=value`` block per input record (``--json``
prints a JSON document instead).  Floats carry 15 significant digits.
Errors are reported on stderr as a single record and give exit status 1.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import density, evolution
from .errors import QHopfError
from .geodesics import schmidt_transport
from .holonomy import holonomy_closed_form, transport_loop
from .hopf import hopf_map, hopf_map_swapped, projector_of
from .io import load_loops, load_states
from .quaternion import Quaternion, QSpinor
from .state import SchmidtFrame, invariants, schmidt_svd, spinor_of_state

DIGITS = 15


@dataclass
class CommandResult:
    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------

def _num(x: float) -> str:
    return f"{x:.{DIGITS}g}"


def format_value(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _num(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        return f"{_num(v.real)}{'+' if v.imag >= 0 or np.isnan(v.imag) else '-'}{_num(abs(v.imag))}j"
    if isinstance(v, Quaternion):
        return format_value(v.array)
    if isinstance(v, QSpinor):
        return format_value(v.array)
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(format_value(x) for x in v) + "]"
    return str(v)


def jsonable(v):
    if v is None or isinstance(v, (str, bool)):
        return v
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        x = float(v)
        return float(_num(x)) if np.isfinite(x) else _num(x)
    if isinstance(v, (complex, np.complexfloating)):
        return [jsonable(v.real), jsonable(v.imag)]
    if isinstance(v, (Quaternion, QSpinor)):
        return jsonable(v.array)
    if isinstance(v, (list, tuple, np.ndarray)):
        return [jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: jsonable(x) for k, x in v.items()}
    return str(v)


def render_text(results: list[CommandResult]) -> str:
    blocks = []
    for n, res in enumerate(results):
        lines = [f"command={res.command}", f"item={n}"]
        for prefix, rec in (("input", res.inputs), ("output", res.outputs), ("diagnostic", res.diagnostics)):
            lines += [f"{prefix}.{k}={format_value(v)}" for k, v in rec.items()]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def render_json(results: list[CommandResult]) -> str:
    doc = [
        {
            "command": r.command,
            "inputs": jsonable(r.inputs),
            "outputs": jsonable(r.outputs),
            "diagnostics": jsonable(r.diagnostics),
        }
        for r in results
    ]
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_analyze(args) -> list[CommandResult]:
    out = []
    for rec in load_states(args.state):
        s = rec.state
        inv = invariants(s)
        out.append(
            CommandResult(
                "analyze",
                {"file": args.state, "label": rec.label},
                {
                    "z": inv.z,
                    "w": inv.w,
                    "zeta": inv.zeta,
                    "concurrence": inv.concurrence,
                    "lambda_plus": inv.lambda_plus,
                    "lambda_minus": inv.lambda_minus,
                    "entropy": inv.entropy,
                    "chi": inv.chi,
                    "xi": hopf_map(spinor_of_state(s)).xi,
                    "eta": hopf_map_swapped(s).xi,
                },
            )
        )
    return out


def _frame_outputs(prefix: str, f: SchmidtFrame) -> dict:
    return {
        f"{prefix}.D": f.D,
        f"{prefix}.sigma": f.sigma,
        f"{prefix}.phi": f.phi,
        f"{prefix}.tau": f.tau,
        f"{prefix}.epsilon": f.epsilon,
        f"{prefix}.U": f.U,
        f"{prefix}.V": f.V,
    }


def cmd_schmidt(args) -> list[CommandResult]:
    out = []
    for rec in load_states(args.state):
        res = CommandResult("schmidt", {"file": args.state, "label": rec.label, "method": args.method})
        frames = {}
        if args.method in ("svd", "both"):
            frames["svd"] = schmidt_svd(rec.state)
        if args.method in ("transport", "both"):
            frames["transport"] = schmidt_transport(rec.state)
        for name, f in frames.items():
            res.outputs.update(_frame_outputs(name, f))
        if len(frames) == 2:
            a, b = frames["svd"], frames["transport"]
            res.outputs["deviation"] = float(
                max(np.max(np.abs(a.D - b.D)), np.max(np.abs(a.product_terms() - b.product_terms())))
            )
        res.diagnostics["degenerate"] = frames[next(iter(frames))].degenerate
        out.append(res)
    return out


def cmd_holonomy(args) -> list[CommandResult]:
    out = []
    for rec in load_loops(args.loop):
        n_steps = args.steps or rec.n_steps
        res = CommandResult("holonomy", {"file": args.loop, "label": rec.label, "kind": rec.kind})
        if rec.kappa is not None:
            res.inputs["kappa"] = rec.kappa
        numeric = transport_loop(rec.loop, n_steps=n_steps)
        res.outputs["q"] = numeric.q
        res.diagnostics["n_steps"] = numeric.n_steps
        res.diagnostics["residual"] = numeric.residual
        if args.compare:
            if rec.loop.kind == "sampled":
                res.diagnostics["closed_form"] = "unavailable for sampled loops"
            else:
                _, closed = holonomy_closed_form(projector_of(rec.loop.base), rec.loop.S, rec.loop.t_end)
                res.outputs["closed_form"] = closed.q
                res.outputs["distance"] = numeric.distance(closed.q)
        out.append(res)
    return out


def cmd_evolve(args) -> list[CommandResult]:
    out = []
    for rec in load_loops(args.loop):
        res = CommandResult("evolve", {"file": args.loop, "label": rec.label, "kind": rec.kind, "mode": args.mode})
        path, period = rec.path()
        if args.mode == "cyclic":
            rep = evolution.cyclic_evolve(path, period, steps=args.steps or rec.n_steps)
        else:
            res.inputs["ramp_periods"] = args.ramp
            rep = evolution.adiabatic_evolve(path, args.ramp * period, period, steps=args.steps)
            res.outputs["dynamical_factor"] = rep.dynamical_factor
            res.diagnostics["leakage"] = rep.leakage
        res.outputs["geometric_phase"] = rep.geometric_phase
        res.outputs["holonomy_reference"] = rep.holonomy_reference
        res.outputs["distance_to_holonomy"] = rep.distance_to_holonomy
        res.outputs["dynamical_phase_bound"] = rep.dynamical_phase_bound
        res.outputs["final_state"] = rep.final_state
        res.diagnostics["ramp_time"] = rep.ramp_time
        res.diagnostics["steps"] = rep.steps
        res.diagnostics["norm_drift"] = rep.norm_drift
        out.append(res)
    return out


def cmd_fidelity(args) -> list[CommandResult]:
    formulas = args.formula or ["hopf"]
    if "all" in formulas:
        formulas = ["matrix", "hopf", "hyperbolic"]
    formulas = list(dict.fromkeys(formulas))
    states_a = load_states(args.state_a)
    states_b = load_states(args.state_b)
    if len(states_a) != len(states_b):
        raise QHopfError("the two state files hold different numbers of records")
    out = []
    for ra, rb in zip(states_a, states_b):
        res = CommandResult(
            "fidelity",
            {"file_a": args.state_a, "file_b": args.state_b, "label_a": ra.label, "label_b": rb.label},
        )
        values = {f: density.fidelity(ra.state, rb.state, f) for f in formulas}
        res.outputs.update(values)
        for f1, f2 in itertools.combinations(formulas, 2):
            res.diagnostics[f"deviation.{f1}.{f2}"] = abs(values[f1] - values[f2])
        out.append(res)
    return out


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print JSON instead of key=value lines")

    parser = argparse.ArgumentParser(prog="qhopf", description=__doc__.split("\n\n")[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="entanglement invariants and Hopf coordinates")
    p.add_argument("state")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("schmidt", parents=[common], help="Schmidt decomposition")
    p.add_argument("state")
    p.add_argument("--method", choices=["svd", "transport", "both"], default="svd")
    p.set_defaults(func=cmd_schmidt)

    p = sub.add_parser("holonomy", parents=[common], help="holonomy of a loop by numeric transport")
    p.add_argument("loop")
    p.add_argument("--compare", action="store_true", help="also evaluate the closed form for generator loops")
    p.add_argument("--steps", type=int, default=None, help="override the number of transport steps")
    p.set_defaults(func=cmd_holonomy)

    p = sub.add_parser("evolve", parents=[common], help="adiabatic or cyclic evolution around a loop")
    p.add_argument("loop")
    p.add_argument("--mode", choices=["adiabatic", "cyclic"], default="cyclic")
    p.add_argument("--ramp", type=float, default=50.0, help="adiabatic ramp time in loop periods (default 50)")
    p.add_argument("--steps", type=int, default=None, help="integrator steps")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("fidelity", parents=[common], help="fidelity between two states")
    p.add_argument("state_a")
    p.add_argument("state_b")
    p.add_argument(
        "--formula",
        action="append",
        choices=["matrix", "hopf", "hyperbolic", "overlap", "all"],
        help="repeatable; default hopf",
    )
    p.set_defaults(func=cmd_fidelity)
    return parser


def _error_record(exc: Exception, as_json: bool) -> str:
    if as_json:
        return json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
    return f"error={type(exc).__name__}\nmessage={exc}\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    as_json = getattr(args, "json", False)
    if args.command == "evolve" and args.ramp <= 0:
        parser.error("--ramp must be positive")
    try:
        results = args.func(args)
    except (QHopfError, ValueError) as exc:
        sys.stderr.write(_error_record(exc, as_json))
        return 1
    sys.stdout.write(render_json(results) if as_json else render_text(results))
    return 0


if __name__ == "__main__":
    sys.exit(main())
