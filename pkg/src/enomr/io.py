"""CSV and manifest writers; all floating output is round-trip faithful."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from . import __version__
from . import extended as xt


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    return xt.format_scalar(x)


def write_profile_csv(path, xs, columns: dict, header_comments=()) -> None:
    """1D snapshot: x plus one column per field component."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        for line in header_comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(["x"] + list(columns))
        cols = [xt.to_float_array(v) for v in columns.values()]
        for i, x in enumerate(xs):
            writer.writerow([repr(float(x))] + [repr(float(c[i])) for c in cols])


def write_field2d_csv(path, xs, ys, components: dict, header_comments=()) -> None:
    """2D snapshot, row-major over y then x: x, y, components."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        for line in header_comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(["x", "y"] + list(components))
        comps = [xt.to_float_array(v) for v in components.values()]
        for j, y in enumerate(ys):
            for i, x in enumerate(xs):
                writer.writerow(
                    [repr(float(x)), repr(float(y))] + [repr(float(c[j, i])) for c in comps]
                )


def write_convergence_csv(path, rows, header_comments=()) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        for line in header_comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(["h", "l1", "order_l1", "linf", "order_linf", "floored"])
        for r in rows:
            writer.writerow(
                [
                    repr(float(r.h)),
                    r.l1_str,
                    "" if r.order_l1 is None else repr(float(r.order_l1)),
                    r.linf_str,
                    "" if r.order_linf is None else repr(float(r.order_linf)),
                    "yes" if r.floored else "no",
                ]
            )


def write_timing_csv(path, entries, header_comments=()) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        for line in header_comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(["scheme", "seconds_per_step", "ratio"])
        for name, secs, ratio in entries:
            writer.writerow([name, repr(float(secs)), repr(float(ratio))])


def write_manifest(out_dir, config: dict) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "manifest.txt"
    items = dict(config)
    items.setdefault("version", f"enomr-{__version__}")
    with path.open("w") as fh:
        for key in sorted(items):
            fh.write(f"{key}={items[key]}\n")
    return path


def mark_incomplete(out_dir, category: str, detail: str) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "INCOMPLETE").write_text(f"{category}: {detail}\n")
