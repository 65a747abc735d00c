"""Reading waypoint documents and writing sampled-path, plan and SVG output."""

from __future__ import annotations

import csv
import io
import json
from importlib import resources
from typing import Optional, Sequence, TextIO

import jsonschema
import numpy as np

from .paths import WaypointPath


class InputError(ValueError):
    """A waypoint document is malformed or inconsistent."""


def waypoint_schema() -> dict:
    text = resources.files("mollipath").joinpath("schemas/waypoints.schema.json").read_text()
    return json.loads(text)


def parse_waypoints(text: str) -> WaypointPath:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"waypoint document is not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(doc, waypoint_schema())
    except jsonschema.ValidationError as exc:
        raise InputError(f"waypoint document rejected: {exc.message}") from exc
    dim = doc["dimension"]
    bad = [i for i, p in enumerate(doc["points"]) if len(p) != dim]
    if bad:
        raise InputError(f"point {bad[0]} does not have {dim} coordinates")
    try:
        return WaypointPath(np.array(doc["points"], dtype=float), closed=doc["closed"])
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def load_waypoints(path: str) -> WaypointPath:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise InputError(f"{path} is empty")
    return parse_waypoints(text)


def waypoints_document(path: WaypointPath) -> str:
    return json.dumps({"dimension": path.dimension, "closed": path.closed,
                       "points": path.points.tolist()}, indent=2)


def sample_columns(dimension: int, derivatives: bool = True, curvature: bool = True) -> list:
    names = "xyz"[:dimension]
    cols = ["t", *names]
    if derivatives:
        cols.extend("d" + c for c in names)
    if curvature and dimension in (2, 3):
        cols.append("kappa")
    return cols


def write_samples(out: TextIO, ts, positions, velocities=None, kappa=None) -> None:
    """Sampled-path table: ``t, x, y[, z], dx, dy[, dz], kappa``.

    Derivative and curvature columns are left out when not given.
    """
    n = len(ts)
    positions = np.asarray(positions).reshape(n, -1)
    blocks = [np.asarray(ts, dtype=float)[:, None], positions]
    if velocities is not None:
        blocks.append(np.asarray(velocities).reshape(n, -1))
    if kappa is not None:
        blocks.append(np.asarray(kappa).reshape(n, 1))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(sample_columns(positions.shape[1], velocities is not None,
                                   kappa is not None))
    for row in np.hstack(blocks):
        writer.writerow([repr(float(v)) for v in row])


def read_samples(text: str) -> dict:
    """Parse a sampled-path table back into column arrays."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    rows = np.array([[float(v) for v in r] for r in reader if r])
    return {name: rows[:, i] for i, name in enumerate(header)}


def write_plan(out: TextIO, plan) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["corner_index", "epsilon", "bound"])
    for c in plan.per_corner:
        writer.writerow([c.index, repr(float(c.epsilon)), repr(float(c.bound))])
    writer.writerow(["global_epsilon", repr(float(plan.global_epsilon))])
    writer.writerow(["exact", "true" if plan.exact else "false"])


def svg_document(curves: Sequence[tuple], annotations: Sequence[tuple] = (),
                 width: int = 640, title: Optional[str] = None) -> str:
    """Polylines in the x-y plane as an SVG string.

    ``curves`` holds ``(points, colour, label)``; ``annotations`` holds
    ``(x, y, text)``.  3D points are drawn by dropping ``z``.
    """
    xy = [np.asarray(p, dtype=float)[:, :2] for p, _, _ in curves]
    allpts = np.vstack(xy)
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    pad = 0.05 * span
    scale = (width - 40) / (span + 2 * pad)
    height = int((hi[1] - lo[1] + 2 * pad) * scale) + 40

    def project(p):
        return 20 + (p[0] - lo[0] + pad) * scale, height - 20 - (p[1] - lo[1] + pad) * scale

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">']
    if title:
        parts.append(f'<title>{title}</title>')
    for pts, (_, colour, label) in zip(xy, curves):
        coords = " ".join("%.3f,%.3f" % project(p) for p in pts)
        parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" '
                     f'points="{coords}"><title>{label}</title></polyline>')
    for x, y, text in annotations:
        px, py = project((x, y))
        parts.append(f'<text x="{px:.1f}" y="{py:.1f}" font-size="10">{text}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
