"""Command-line front end.

    qwsearch search  --config cfg.json [--out DIR]
    qwsearch scale   --config cfg.json [--out DIR]
    qwsearch track   --config cfg.json [--trajectory traj.json] [--out DIR]
    qwsearch circuit --config cfg.json [--out DIR]

Exit codes: 0 success, 1 invalid configuration, 2 runtime failure.
``QWSEARCH_WORKERS`` sets the thread count for ``scale`` and ``track``.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .circuits import (
    circuit_statevector,
    circuit_unitary,
    export_qasm,
    gate_counts,
    phase_distance,
    search_circuit,
    step_circuit,
    wire_layout,
)
from .errors import QWSearchError, TrackingError
from .lattice import Boundary, LabeledMarks, LatticeConfig, Labeling, uniform_initial_state
from .operators import OracleSpec, dense_operator, step as walk_step
from .search import corner_marks, fit_inverse_log, run_search, scaling_sweep
from .tracking import Trajectory, TrackingConfig, reconstruct_order, track

VERIFY_MAX_WIDTH = 10


class ConfigError(QWSearchError):
    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


def _workers() -> int:
    raw = os.environ.get("QWSEARCH_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError("QWSEARCH_WORKERS", f"expected an integer, got {raw!r}") from None


def _load_json(path: Path, what: str = "config") -> Any:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(what, f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(what, f"{path} line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _int(cfg: dict, key: str, default: Any = ..., minimum: int | None = None) -> int:
    if key not in cfg:
        if default is ...:
            raise ConfigError(key, "required field is missing")
        return default
    value = cfg[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(key, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(key, f"must be >= {minimum}, got {value}")
    return value


def _number(cfg: dict, key: str) -> float:
    value = cfg.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    return float(value)


def _enum(cfg: dict, key: str, kind: type, default: Any) -> Any:
    value = cfg.get(key, default)
    try:
        return kind(value)
    except ValueError:
        allowed = ", ".join(repr(v.value) for v in kind)
        raise ConfigError(key, f"expected one of {allowed}, got {value!r}") from None


def _lattice(cfg: dict, side: int | None = None, labeling: Labeling | None = None) -> LatticeConfig:
    labeling = labeling or _enum(cfg, "labeling", Labeling, "none")
    layers = _int(cfg, "layers", 1 if labeling is Labeling.NONE else ..., minimum=1)
    try:
        return LatticeConfig(
            side if side is not None else _int(cfg, "side", minimum=2),
            _enum(cfg, "boundary", Boundary, "periodic"),
            layers,
            labeling,
        )
    except ValueError as exc:
        raise ConfigError("lattice", str(exc)) from None


def _marks(cfg: dict, lattice: LatticeConfig | None, required: bool = True) -> LabeledMarks | None:
    raw = cfg.get("marks")
    if raw is None:
        if required:
            raise ConfigError("marks", "no marked nodes given")
        return None
    triples = []
    if isinstance(raw, dict):
        for z, sites in raw.items():
            for site in sites:
                triples.append((*site, int(z)))
    elif isinstance(raw, list):
        for i, item in enumerate(raw):
            if not isinstance(item, list) or len(item) not in (2, 3):
                raise ConfigError(f"marks[{i}]", f"expected [x, y] or [x, y, z], got {item!r}")
            triples.append(tuple(item) if len(item) == 3 else (*item, 0))
    else:
        raise ConfigError("marks", "expected a list of [x, y, z] or a {layer: [[x, y], ...]} map")
    if not triples:
        raise ConfigError("marks", "no marked nodes given")
    for i, t in enumerate(triples):
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in t):
            raise ConfigError(f"marks[{i}]", f"coordinates must be integers, got {list(t)!r}")
    try:
        marks = LabeledMarks(tuple(triples))
        if lattice is not None:
            marks.validate(lattice)
    except ValueError as exc:
        raise ConfigError("marks", str(exc)) from None
    return marks


def _fmt(v: float) -> str:
    return repr(float(v))


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def _write_json(path: Path, payload: Any) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _describe(lattice: LatticeConfig) -> dict:
    return {
        "side": lattice.side,
        "boundary": lattice.boundary.value,
        "layers": lattice.layers,
        "labeling": lattice.labeling.value,
    }


def cmd_search(cfg: dict, out: Path) -> int:
    lattice = _lattice(cfg)
    marks = _marks(cfg, lattice)
    horizon = _int(cfg, "horizon", None, minimum=1)
    rec = run_search(lattice, marks, horizon)

    names = [f"p_{x}_{y}_{z}" for x, y, z in marks]
    rows = [[t, *rec.per_mark[t], rec.collective[t]] for t in range(rec.steps_run + 1)]
    _write_csv(out / "search.csv", ["step", *names, "collective"], rows)
    _write_json(
        out / "search_summary.json",
        {
            "lattice": _describe(lattice),
            "marks": [list(t) for t in marks],
            "steps_run": rec.steps_run,
            "t_op": rec.t_op,
            "p_succ": rec.p_succ,
            "per_mark_at_t_op": [float(p) for p in rec.per_mark[rec.t_op]],
            "amplified": rec.amplified,
        },
    )
    return 0


def cmd_scale(cfg: dict, out: Path) -> int:
    sides = cfg.get("sides")
    if not isinstance(sides, list) or not all(isinstance(s, int) and s >= 2 for s in sides):
        raise ConfigError("sides", "expected a list of integers >= 2")
    if len(sides) < 3:
        raise ConfigError("sides", f"need at least 3 sizes, got {len(sides)}")
    workers = _workers()
    labelings = cfg.get("labeling", "static")
    labelings = labelings if isinstance(labelings, list) else [labelings]
    horizon = _int(cfg, "horizon", None, minimum=1)
    status = 0
    for name in labelings:
        labeling = _enum({"labeling": name}, "labeling", Labeling, None)
        template = _lattice(cfg, side=max(sides), labeling=labeling)
        fixed = _marks(cfg, template, required=False)
        marks_for = (lambda c: fixed) if fixed is not None else corner_marks
        points = scaling_sweep(
            sides,
            template,
            marks_for,
            (lambda c: horizon) if horizon else None,
            workers=workers,
        )
        n_marks = len(points[0].per_mark)
        _write_csv(
            out / f"scale_{labeling.value}.csv",
            ["side", "N", "t_op", *[f"p_mark{i}" for i in range(n_marks)], "collective"],
            [[p.side, p.n_sites, p.t_op, *p.per_mark, p.collective] for p in points],
        )
        try:
            fit = fit_inverse_log([(p.n_sites, p.collective) for p in points])
            payload = {
                "labeling": labeling.value,
                "model": "p = a / ln(b N)",
                "a": fit.a,
                "b": fit.b,
                "rms_residual": fit.rms_residual,
                "relative_rms": fit.rms_residual / float(np.mean([p.collective for p in points])),
                "points": [list(q) for q in fit.points],
            }
        except QWSearchError as exc:
            print(f"error: fit failed for {labeling.value}: {exc}", file=sys.stderr)
            payload = {"labeling": labeling.value, "error": str(exc)}
            status = 2
        _write_json(out / f"scale_{labeling.value}_fit.json", payload)
    return status


def _trajectory(cfg: dict, base: Path, override: Path | None) -> tuple[list, dict]:
    source = override if override is not None else cfg.get("trajectory")
    if source is None:
        raise ConfigError("trajectory", "no trajectory given (config key or --trajectory)")
    if isinstance(source, list):
        data: Any = source
    else:
        path = Path(source)
        data = _load_json(path if path.is_absolute() or override else base / path, "trajectory")
    extra: dict = {}
    if isinstance(data, dict):
        extra = {k: data[k] for k in ("delta_t", "T") if k in data}
        data = data.get("positions")
    if not isinstance(data, list) or not data:
        raise ConfigError("trajectory", "expected a non-empty array of [x, y] pairs")
    for i, p in enumerate(data):
        if not (isinstance(p, list) and len(p) == 2 and all(isinstance(v, int) for v in p)):
            raise ConfigError(f"trajectory[{i}]", f"expected [x, y] integers, got {p!r}")
    return data, extra


def cmd_track(cfg: dict, out: Path, base: Path, trajectory_path: Path | None = None) -> int:
    workers = _workers()
    positions, extra = _trajectory(cfg, base, trajectory_path)
    merged = dict(extra)
    for key in ("delta_t", "T"):
        if key in cfg:
            if key in extra and float(extra[key]) != float(cfg[key]):
                raise ConfigError(key, f"config ({cfg[key]}) and trajectory ({extra[key]}) disagree")
            merged[key] = cfg[key]
    side = _int(cfg, "side", minimum=2)
    for i, (x, y) in enumerate(positions):
        if not (0 <= x < side and 0 <= y < side):
            raise ConfigError(f"trajectory[{i}]", f"point {[x, y]} is off the {side}x{side} lattice")
    try:
        tcfg = TrackingConfig(
            T=_number(merged, "T"),
            delta_t=_number(merged, "delta_t"),
            side=side,
            boundary=_enum(cfg, "boundary", Boundary, "periodic"),
            horizon=_int(cfg, "horizon", None, minimum=1),
        )
        traj = Trajectory(tuple(map(tuple, positions)), tcfg.delta_t)
    except TrackingError as exc:
        raise ConfigError("tracking", str(exc)) from None

    estimates = track(traj, tcfg, workers=workers)
    recon = reconstruct_order(estimates, tcfg)
    _write_json(
        out / "track.json",
        {
            "side": side,
            "T": tcfg.T,
            "delta_t": tcfg.delta_t,
            "layers": tcfg.m,
            "estimates": [
                {
                    "epoch": e.epoch,
                    "estimate": list(e.estimate) if e.estimate else None,
                    "truth": list(e.truth) if e.truth else None,
                    "probability": e.probability,
                    "amplification": e.amplification,
                    "t_op": e.t_op,
                    "active_marks": e.n_active,
                    "skipped": e.skipped,
                }
                for e in estimates
            ],
            "reconstructed": [list(p) for p in recon],
            "matches_input": recon == list(traj.positions),
        },
    )
    _write_csv(
        out / "track_epochs.csv",
        ["epoch", "x", "y", "z", "true_x", "true_y", "true_z", "probability", "amplification", "t_op"],
        [[e.epoch, *(e.estimate or ("", "", "")), *(e.truth or ("", "", "")), e.probability, e.amplification, e.t_op]
         for e in estimates],
    )
    return 0


def cmd_circuit(cfg: dict, out: Path) -> int:
    lattice = _lattice(cfg)
    if lattice.boundary is not Boundary.PERIODIC:
        raise ConfigError("boundary", "circuits are only generated for the periodic boundary")
    if not lattice.circuit_compatible:
        raise ConfigError(
            "lattice",
            f"side {lattice.side} and layers {lattice.layers} must be powers of two; "
            "try side 2, 4, 8, 16, ... and layers 1, 2, 4, ...",
        )
    marks = _marks(cfg, lattice)
    steps = _int(cfg, "steps", 1, minimum=0)
    variant = cfg.get("variant")
    if variant not in (None, "compact", "hadamard"):
        raise ConfigError("variant", f"expected 'compact' or 'hadamard', got {variant!r}")
    if variant == "compact" and lattice.labeling is Labeling.DYNAMIC:
        raise ConfigError("variant", "the compact diffusion only exists for the two-wire coin")

    circ = search_circuit(marks, lattice, steps, variant)
    (out / "circuit.qasm").write_text(export_qasm(circ), encoding="utf-8")
    report = gate_counts(step_circuit(marks, lattice, variant), lattice).as_dict()
    report["steps"] = steps
    report["wires"] = {k: list(v) for k, v in wire_layout(lattice).as_dict().items()}
    _write_json(out / "resources.json", report)

    if circ.width > VERIFY_MAX_WIDTH:
        print(
            f"notice: width {circ.width} exceeds {VERIFY_MAX_WIDTH} wires; verification skipped",
            file=sys.stderr,
        )
        _write_json(out / "verification.json", {"skipped": True, "width": circ.width})
        return 0
    spec = OracleSpec(marks, lattice)
    step_diff = phase_distance(circuit_unitary(step_circuit(marks, lattice, variant)), dense_operator(spec, "step"))
    state = uniform_initial_state(lattice)
    for _ in range(steps):
        state = walk_step(state, spec)
    sv_diff = phase_distance(state.amplitudes, circuit_statevector(circ))
    _write_json(
        out / "verification.json",
        {
            "skipped": False,
            "width": circ.width,
            "step_unitary_max_diff": step_diff,
            "statevector_max_diff": sv_diff,
            "tolerance": 1e-10,
            "passed": step_diff < 1e-10 and sv_diff < 1e-10,
        },
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwsearch", description=__doc__.split("\n")[0] if __doc__ else None)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("search", "run one search and record marked-node probabilities"),
        ("scale", "success probability versus lattice size, with a/ln(bN) fit"),
        ("track", "track a moving particle"),
        ("circuit", "emit OpenQASM and resource estimates"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--out", type=Path, default=Path("."))
        if name == "track":
            p.add_argument("--trajectory", type=Path, default=None)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_json(args.config)
        if not isinstance(cfg, dict):
            raise ConfigError("config", "top level must be a JSON object")
        args.out.mkdir(parents=True, exist_ok=True)
        if args.command == "search":
            return cmd_search(cfg, args.out)
        if args.command == "scale":
            return cmd_scale(cfg, args.out)
        if args.command == "track":
            return cmd_track(cfg, args.out, args.config.parent, args.trajectory)
        return cmd_circuit(cfg, args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (QWSearchError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
