"""Deterministic export of records, spectra and tables.

Two formats carry the same information:

* text: delimiter-separated values, one file per field, with a commented
  header naming columns and units; full double precision (%.17g).
* binary: a compact container with magic bytes "PLTR1", little-endian.
  Layout: magic | u32 meta length | meta (UTF-8 key=value lines) |
  u32 n_fields | u32 n_rows | u32 n_cols | f64 row-axis values |
  per-field (u16 name length, name, u8 is_complex) | row-major f64
  payloads, complex fields interleaved as (re, im).

Both embed the provenance echo so a run can be reproduced from any
output file.
"""

from __future__ import annotations

import struct
from dataclasses import fields as dataclass_fields
from pathlib import Path

import numpy as np

from .errors import IoError
from .records import SpatioTemporalRecord, SpectrumMap

MAGIC = b"PLTR1"
FLOAT_FMT = "%.17g"


def dataclass_lines(prefix: str, obj) -> list[str]:
    out = []
    for f in dataclass_fields(obj):
        out.append(f"{prefix}.{f.name} = {getattr(obj, f.name)!r}")
    return out


def provenance_lines(meta: dict) -> list[str]:
    """Flatten record meta (params, pulses, integrator) to key=value lines."""
    lines = []
    model = meta.get("model")
    if model is not None:
        lines += dataclass_lines("model", model)
    for i, spec in enumerate(meta.get("pulses") or []):
        lines += dataclass_lines(f"pulse{i}", spec)
    integ = meta.get("integrator")
    if integ is not None:
        lines += dataclass_lines("integrator", integ)
    for key in ("kind", "omega_ref", "scenario"):
        if key in meta:
            lines.append(f"{key} = {meta[key]!r}")
    return lines


def _complex_to_payload(arr: np.ndarray) -> np.ndarray:
    out = np.empty(arr.shape + (2,), dtype="<f8")
    out[..., 0] = arr.real
    out[..., 1] = arr.imag
    return out


def write_binary(path, axis_name: str, axis, fields: dict, meta_lines) -> Path:
    """Write the PLTR1 container; `fields` maps name -> (n_rows, n_cols)."""
    path = Path(path)
    axis = np.asarray(axis, dtype=float)
    names = list(fields)
    n_rows = len(axis)
    n_cols = fields[names[0]].shape[1] if names else 0
    meta = "\n".join([f"axis = {axis_name}", *meta_lines]).encode("utf-8")
    try:
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<I", len(meta)))
            fh.write(meta)
            fh.write(struct.pack("<III", len(names), n_rows, n_cols))
            fh.write(axis.astype("<f8").tobytes())
            for name in names:
                raw = name.encode("utf-8")
                is_complex = np.iscomplexobj(fields[name])
                fh.write(struct.pack("<H", len(raw)))
                fh.write(raw)
                fh.write(struct.pack("<B", 1 if is_complex else 0))
            for name in names:
                arr = fields[name]
                if arr.shape != (n_rows, n_cols):
                    raise IoError(
                        f"field {name!r} shape {arr.shape} != ({n_rows}, {n_cols})"
                    )
                if np.iscomplexobj(arr):
                    fh.write(_complex_to_payload(arr).tobytes())
                else:
                    fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path


def read_binary(path):
    """Read a PLTR1 container -> (axis_name, axis, fields, meta_lines)."""
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if blob[:5] != MAGIC:
        raise IoError(f"{path} is not a PLTR1 container")
    off = 5
    (meta_len,) = struct.unpack_from("<I", blob, off)
    off += 4
    meta_lines = blob[off : off + meta_len].decode("utf-8").splitlines()
    off += meta_len
    n_fields, n_rows, n_cols = struct.unpack_from("<III", blob, off)
    off += 12
    axis = np.frombuffer(blob, dtype="<f8", count=n_rows, offset=off).copy()
    off += 8 * n_rows
    headers = []
    for _ in range(n_fields):
        (name_len,) = struct.unpack_from("<H", blob, off)
        off += 2
        name = blob[off : off + name_len].decode("utf-8")
        off += name_len
        (is_complex,) = struct.unpack_from("<B", blob, off)
        off += 1
        headers.append((name, bool(is_complex)))
    fields = {}
    for name, is_complex in headers:
        count = n_rows * n_cols * (2 if is_complex else 1)
        flat = np.frombuffer(blob, dtype="<f8", count=count, offset=off).copy()
        off += 8 * count
        if is_complex:
            flat = flat.reshape(n_rows, n_cols, 2)
            fields[name] = flat[..., 0] + 1j * flat[..., 1]
        else:
            fields[name] = flat.reshape(n_rows, n_cols)
    axis_name = "axis"
    rest = []
    for line in meta_lines:
        if line.startswith("axis = "):
            axis_name = line[len("axis = "):]
        else:
            rest.append(line)
    return axis_name, axis, fields, rest


def write_text(path, axis_name, axis, name, values, meta_lines) -> Path:
    """One field as delimiter-separated text with a commented header."""
    path = Path(path)
    values = np.asarray(values)
    is_complex = np.iscomplexobj(values)
    n_cols = values.shape[1]
    if is_complex:
        cols = [f"re(site_{i})\tim(site_{i})" for i in range(n_cols)]
        flat = _complex_to_payload(values).reshape(values.shape[0], 2 * n_cols)
    else:
        cols = [f"site_{i}" for i in range(n_cols)]
        flat = values
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# poltrans field: {name}\n")
            for line in meta_lines:
                fh.write(f"# {line}\n")
            fh.write(f"# complex = {int(is_complex)}\n")
            fh.write("# columns: " + axis_name + "\t" + "\t".join(cols) + "\n")
            for row_axis, row in zip(axis, flat):
                fh.write(FLOAT_FMT % row_axis)
                fh.write("\t")
                fh.write("\t".join(FLOAT_FMT % v for v in row))
                fh.write("\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path


def read_text(path):
    """Read one text field file -> (axis, values) with complex restored."""
    path = Path(path)
    is_complex = False
    rows = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    if line.startswith("# complex = "):
                        is_complex = bool(int(line.rsplit("=", 1)[1]))
                    continue
                rows.append([float(tok) for tok in line.split("\t")])
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    data = np.asarray(rows)
    if data.size == 0:
        return np.empty(0), np.empty((0, 0))
    axis = data[:, 0]
    body = data[:, 1:]
    if is_complex:
        body = body[:, 0::2] + 1j * body[:, 1::2]
    return axis, body


def export_record(
    record: SpatioTemporalRecord, out_base, formats=("text", "binary")
) -> list[Path]:
    """Write a record in the selected formats; returns the written paths."""
    out_base = Path(out_base)
    meta_lines = provenance_lines(record.meta)
    written = []
    if "binary" in formats:
        written.append(
            write_binary(
                out_base.with_suffix(".plt"),
                "time_fs",
                record.times,
                record.fields,
                meta_lines,
            )
        )
    if "text" in formats:
        for name, arr in record.fields.items():
            path = out_base.parent / f"{out_base.name}_{name}.tsv"
            written.append(
                write_text(path, "time_fs", record.times, name, arr, meta_lines)
            )
    return written


def export_spectrum(
    spectrum: SpectrumMap, out_base, formats=("text", "binary"),
    name="deltaT", meta_lines=(),
) -> list[Path]:
    out_base = Path(out_base)
    lines = [*meta_lines, *(f"window.{k} = {v!r}" for k, v in spectrum.window.items())]
    written = []
    if "binary" in formats:
        written.append(
            write_binary(
                out_base.with_suffix(".plt"),
                "omega_eV",
                spectrum.omegas,
                {name: spectrum.values},
                lines,
            )
        )
    if "text" in formats:
        path = out_base.parent / f"{out_base.name}_{name}.tsv"
        written.append(
            write_text(path, "omega_eV", spectrum.omegas, name, spectrum.values, lines)
        )
    return written


def export_table(path, columns: dict, meta_lines=()) -> Path:
    """Small named-column TSV (sweep results, dispersion tables)."""
    path = Path(path)
    names = list(columns)
    arrays = [np.asarray(columns[n], dtype=float) for n in names]
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for line in meta_lines:
                fh.write(f"# {line}\n")
            fh.write("# columns: " + "\t".join(names) + "\n")
            for row in zip(*arrays):
                fh.write("\t".join(FLOAT_FMT % v for v in row) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path


def read_table(path) -> dict:
    path = Path(path)
    names = None
    rows = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line.startswith("# columns:"):
                    names = line.split(":", 1)[1].split()
                elif line and not line.startswith("#"):
                    rows.append([float(tok) for tok in line.split("\t")])
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if names is None:
        raise IoError(f"{path} lacks a column header")
    data = np.asarray(rows) if rows else np.empty((0, len(names)))
    return {n: data[:, i] for i, n in enumerate(names)}
