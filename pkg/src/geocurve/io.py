"""File formats: curve JSON/CSV, frame dumps and classification reports.

Floats are written with 17 significant digits so every value round-trips
exactly; output is otherwise fully determined by its input, which keeps
repeated runs byte-identical.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math

import numpy as np

from .ambient import SpaceSpec
from .classification import ClassificationReport
from .curves import Curve, arc_length_resample, curve_from_points
from .errors import InvalidArgumentError
from .framing import FrenetData, RMData


SPEED_GATE = 1e-3


class CurveFormatError(InvalidArgumentError):
    """Curve file is unreadable or does not follow the curve schema."""


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    text = format(x, ".17g")
    if "." not in text and "e" not in text and "n" not in text:
        text += ".0"
    return text


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text for plain containers, numpy scalars and arrays.

    Non-finite floats become ``null``. Lists of numbers stay on one line.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_text(path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")


# -- curves -----------------------------------------------------------------


def curve_to_dict(curve: Curve, meta: dict | None = None) -> dict:
    d = {
        "space": curve.space.to_dict(),
        "closed": bool(curve.closed),
        "samples": curve.samples,
        "arclength": curve.s,
    }
    if meta:
        d["meta"] = meta
    return d


def curve_from_dict(d: dict, resample: int | None = None) -> tuple[Curve, dict]:
    """Build a curve from its JSON form; returns ``(curve, meta)``.

    Samples without arc length, or whose arc length is not uniform and
    unit-speed, are resampled uniformly by arc length.
    """
    try:
        space = SpaceSpec.from_dict(d["space"])
        samples = np.asarray(d["samples"], dtype=float)
        closed = d.get("closed")
        s = d.get("arclength")
        s = None if s is None else np.asarray(s, dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise CurveFormatError(f"invalid curve document: {exc}") from exc
    if samples.ndim != 2:
        raise CurveFormatError("samples must be a list of coordinate lists")
    meta = d.get("meta") or {}
    if s is not None:
        curve = Curve(space, samples, s, bool(closed))
        # the speed estimate carries stencil truncation error on coarse curves, so the
        # gate only has to separate arc length from a genuinely different parameter
        if curve.is_uniform and curve.speed_error() < SPEED_GATE:
            return curve, meta
        n = resample or curve.n
    else:
        curve = curve_from_points(space, samples, closed)
        n = resample or curve.n
    return arc_length_resample(curve, n), meta


def write_curve_json(path, curve: Curve, meta: dict | None = None):
    write_text(path, dumps(curve_to_dict(curve, meta)))


def load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise CurveFormatError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from exc


def read_curve_json(path) -> tuple[Curve, dict]:
    doc = load_json(path)
    if not isinstance(doc, dict):
        raise CurveFormatError(f"{path}: top level must be an object")
    return curve_from_dict(doc)


def _csv_text(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt_float(float(x)) for x in row])
    return buf.getvalue()


def curve_to_csv(curve: Curve) -> str:
    header = ["s"] + [f"x{i}" for i in range(curve.space.dim)]
    return _csv_text(header, np.column_stack([curve.s, curve.samples]))


# -- frames -----------------------------------------------------------------


def frames_table(rm: RMData, frenet: FrenetData | None = None):
    """Column names and a 2-D array for a per-sample frame dump."""
    d = rm.space.dim
    m = rm.normals.shape[1]
    cols = ["s"] + [f"t_{k}" for k in range(d)]
    blocks = [rm.s[:, None], rm.t]
    for i in range(m):
        cols += [f"n{i + 1}_{k}" for k in range(d)]
        blocks.append(rm.normals[:, i])
    cols += [f"kappa{i + 1}" for i in range(m)]
    blocks.append(rm.kappa)
    if frenet is not None:
        labels = ["frenet_n", "frenet_b"] if frenet.frames.shape[1] == 3 else [
            f"frenet_e{i}" for i in range(1, frenet.frames.shape[1])]
        for j, lab in enumerate(labels, start=1):
            cols += [f"{lab}_{k}" for k in range(d)]
            blocks.append(frenet.frames[:, j])
        cols.append("frenet_kappa")
        blocks.append(frenet.kappa[:, None])
        for i in range(frenet.torsions.shape[1]):
            cols.append(f"frenet_tau{i + 1}" if frenet.torsions.shape[1] > 1 else "frenet_tau")
            blocks.append(frenet.torsions[:, i:i + 1])
    return cols, np.column_stack(blocks)


def frames_to_csv(rm: RMData, frenet: FrenetData | None = None) -> str:
    cols, table = frames_table(rm, frenet)
    return _csv_text(cols, table)


def frames_to_dict(rm: RMData, frenet: FrenetData | None = None, warnings=()) -> dict:
    d = {
        "space": rm.space.to_dict(),
        "closed": bool(rm.closed),
        "arclength": rm.s,
        "rm": {"tangent": rm.t, "normals": rm.normals, "development": rm.kappa},
        "frenet": None,
        "warnings": list(warnings),
    }
    if frenet is not None:
        d["frenet"] = {"frames": frenet.frames, "kappa": frenet.kappa,
                       "torsions": frenet.torsions}
    return d


# -- reports ----------------------------------------------------------------


def report_to_dict(report: ClassificationReport) -> dict:
    sph = report.spherical
    tg = report.totally_geodesic
    fit = sph.fit
    return {
        "spherical": {
            "is": bool(sph.is_geodesic_sphere),
            "z0": None if sph.z0 is None else float(sph.z0),
            "center": None if sph.center is None else sph.center,
            "residual": fit.rms_residual,
            "regime": sph.regime.value,
        },
        "totally_geodesic": {
            "is": bool(tg.is_totally_geodesic),
            "normal": tg.section.normal,
            "residual": tg.section.rms_residual,
        },
        "tolerances": dict(report.tolerances),
        "diagnostics": {
            "fit": {"a": fit.a, "c": fit.c, "scale": fit.scale, "null_dim": fit.null_dim},
            "center_spread": sph.center_spread,
            "development_test": {"pass": bool(tg.development_pass),
                                 "offset": tg.development_fit.c,
                                 "residual": tg.development_fit.rms_residual,
                                 "scale": tg.development_fit.scale},
            "section_test": {"pass": bool(tg.section_pass),
                             "relative_residual": tg.section.relative_residual,
                             "offset": tg.section.offset,
                             "unique": bool(tg.section.unique)},
            "conflict": bool(report.conflict),
        },
    }
