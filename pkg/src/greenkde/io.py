"""Model files and CSV tables.

Model and classifier files are JSON.  Floats are written with ``repr``
(shortest round-tripping decimal), so every real reloads bit-exactly.
"""
import csv
import json
import os

import numpy as np

from greenkde.classifier import LikelihoodModel
from greenkde.density import DensityModel
from greenkde.solver import FitConfig, FitReport

MODEL_FORMAT = "greenkde-model"
CLASSIFIER_FORMAT = "greenkde-classifier"
FORMAT_VERSION = 1


class FormatError(ValueError):
    """Malformed input file."""


class DimensionError(ValueError):
    """Input dimensions disagree."""


def model_to_dict(model):
    return {
        "format": MODEL_FORMAT,
        "version": FORMAT_VERSION,
        "dim": model.dim,
        "n_large_eval": model.n_large_eval,
        "contact_correction": model.contact_correction,
        "fit_config": model.fit_config.to_dict(),
        "report": model.report.to_dict(),
        "points": model.points.tolist(),
        "phi": model.phi.tolist(),
    }


def model_from_dict(d):
    if d.get("format") != MODEL_FORMAT:
        raise FormatError(f"not a {MODEL_FORMAT} document")
    if d.get("version") != FORMAT_VERSION:
        raise FormatError(f"unsupported model version {d.get('version')!r}")
    try:
        points = np.array(d["points"], dtype=np.float64)
        phi = np.array(d["phi"], dtype=np.float64)
        if points.ndim != 2 or points.shape[1] != d["dim"]:
            raise FormatError(f"point rows do not have dimension {d['dim']}")
        return DensityModel(
            points=points,
            phi=phi,
            fit_config=FitConfig(**d["fit_config"]),
            n_large_eval=d["n_large_eval"],
            report=FitReport.from_dict(d["report"]),
            contact_correction=d.get("contact_correction", True),
        )
    except (KeyError, TypeError) as e:
        raise FormatError(f"model document is missing or has bad field: {e}") from e


def _dump(obj, path):
    with open(path, "w") as f:
        json.dump(obj, f, indent=1)
        f.write("\n")


def _load(path):
    with open(path) as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise FormatError(f"{path}: not valid JSON ({e})") from e


def save_model(model, path):
    _dump(model_to_dict(model), path)


def load_model(path):
    return model_from_dict(_load(path))


def save_classifier(model, path):
    _dump(
        {
            "format": CLASSIFIER_FORMAT,
            "version": FORMAT_VERSION,
            "epsilon": model.epsilon,
            "signal": model_to_dict(model.signal),
            "background": model_to_dict(model.background),
        },
        path,
    )


def load_classifier(path):
    d = _load(path)
    if d.get("format") != CLASSIFIER_FORMAT:
        raise FormatError(f"{path}: not a {CLASSIFIER_FORMAT} document")
    try:
        return LikelihoodModel(model_from_dict(d["signal"]), model_from_dict(d["background"]), d["epsilon"])
    except KeyError as e:
        raise FormatError(f"{path}: classifier document is missing {e}") from e


def point_header(dim):
    return [f"x{i}" for i in range(dim)]


def write_table(path, header, rows):
    """Write a CSV table; floats via ``repr``, ``None`` as an empty cell."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(["" if v is None else repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def write_points(path, X, extra=None, extra_names=()):
    """Point CSV ``x0,...,x{n-1}`` with optional extra columns."""
    X = np.asarray(X, dtype=np.float64)
    dim = X.shape[1]
    header = point_header(dim) + list(extra_names)
    if extra is None:
        rows = (list(map(float, x)) for x in X)
    else:
        extra = np.asarray(extra, dtype=np.float64).reshape(X.shape[0], len(extra_names))
        rows = (list(map(float, x)) + list(map(float, e)) for x, e in zip(X, extra))
    write_table(path, header, rows)


def read_points(path, dim=None):
    """Read a point CSV; the dimension comes from the ``x0..x{n-1}`` header."""
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty file, expected a header") from None
        header = [h.strip() for h in header]
        n = len(header)
        if n < 2 or header != point_header(n):
            raise FormatError(f"{path}: header must be x0,...,x{{n-1}} with n >= 2, got {','.join(header)}")
        if dim is not None and n != dim:
            raise DimensionError(f"{path}: points are {n}-D, expected {dim}-D")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != n:
                raise FormatError(f"{path}:{lineno}: expected {n} values, got {len(row)}")
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise FormatError(f"{path}:{lineno}: non-numeric value") from None
    X = np.array(rows, dtype=np.float64).reshape(-1, n)
    if not np.all(np.isfinite(X)):
        raise FormatError(f"{path}: non-finite values")
    return X
