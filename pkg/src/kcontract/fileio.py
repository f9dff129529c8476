"""JSON and CSV serialization for matrices, traces, and certificates.

Matrix JSON schema: {"rows": n, "cols": m, "data": [[...], ...]} (row-major
decimal floats).  CSV floats carry 17 significant digits so round trips are
exact; JSON floats use Python's shortest round-trip repr.
"""

from __future__ import annotations

import json

import numpy as np

from .certify import Certificate
from .compound import as_matrix
from .dynamics import FloquetResult, ParallelotopeTrace, SubspaceReport, Trajectory
from .errors import DimensionMismatch


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def matrix_to_json(a) -> dict:
    m = as_matrix(a)
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(v) for v in row] for row in m],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    for key in ("rows", "cols", "data"):
        if key not in obj:
            raise DimensionMismatch(f'matrix JSON missing "{key}"')
    m = as_matrix(obj["data"])
    if m.shape != (int(obj["rows"]), int(obj["cols"])):
        raise DimensionMismatch(
            f'matrix JSON claims shape ({obj["rows"]}, {obj["cols"]}) '
            f"but data has shape {m.shape}"
        )
    return m


def save_matrix_json(path: str, a) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_json(a), fh, sort_keys=True)
        fh.write("\n")


def load_matrix_json(path: str) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_json(json.load(fh))


def load_params_json(path: str) -> tuple[str | None, dict]:
    """Model parameter file: {"name": ..., "params": {...}}; both optional."""
    with open(path) as fh:
        obj = json.load(fh)
    return obj.get("name"), obj.get("params", {})


def jsonable(value):
    """Recursively convert numpy scalars/arrays into plain JSON types."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return [[float(v.real), float(v.imag)] for v in value.reshape(-1)]
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def certificate_to_json(cert: Certificate) -> dict:
    out = {
        "rule": cert.rule,
        "k": cert.k,
        "norm": cert.norm,
        "eta": float(cert.eta),
        "verdict": cert.verdict,
        "witness": jsonable(cert.witness),
        "grid": jsonable(cert.grid_meta),
    }
    if cert.extras:
        out["extras"] = jsonable(cert.extras)
    return out


def floquet_to_json(res: FloquetResult) -> dict:
    return {
        "period": res.period,
        "orbit_start": jsonable(res.orbit_start),
        "multipliers": jsonable(res.multipliers),
        "compound_spectral_radius": res.compound_spectral_radius,
        "verdict": res.verdict,
        "newton_residual": res.newton_residual,
        "newton_iterations": res.newton_iterations,
        "trivial_multiplier_error": res.trivial_multiplier_error,
        "monodromy": matrix_to_json(res.monodromy),
        "compound_monodromy": matrix_to_json(res.compound_monodromy),
    }


def subspace_to_json(rep: SubspaceReport) -> dict:
    return {
        "t_max": rep.t_max,
        "singular_values": jsonable(rep.singular_values),
        "decaying_dimension": rep.decaying_dimension,
        "required_dimension": rep.required_dimension,
        "compound_norm": rep.compound_norm,
        "compound_decayed": rep.compound_decayed,
        "consistent": rep.consistent,
        "sv_threshold": rep.sv_threshold,
        "decay_threshold": rep.decay_threshold,
    }


def write_trajectory_csv(path: str, traj: Trajectory, frames: np.ndarray | None = None) -> None:
    """Header "t,x1,...,xn" plus w{i}{j} columns when a frame stack is given."""
    n = traj.states.shape[1]
    cols = ["t"] + [f"x{i + 1}" for i in range(n)]
    if frames is not None:
        k = frames.shape[2]
        cols += [f"w{i + 1}{j + 1}" for j in range(k) for i in range(n)]
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for row in range(len(traj.times)):
            vals = [traj.times[row]] + list(traj.states[row])
            if frames is not None:
                vals += list(frames[row].T.reshape(-1))
            fh.write(",".join(_fmt(v) for v in vals) + "\n")


def write_trace_csv(path: str, trace: ParallelotopeTrace) -> None:
    with open(path, "w") as fh:
        fh.write("t,norm,log_norm\n")
        for t, nv in zip(trace.times, trace.norms):
            log = np.log(nv) if nv > 0 else -np.inf
            fh.write(f"{_fmt(t)},{_fmt(nv)},{_fmt(log)}\n")


def dump_json(obj: dict, path: str | None) -> str:
    """Serialize deterministically; write to path when given, return the text."""
    text = json.dumps(jsonable(obj), sort_keys=True, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text
