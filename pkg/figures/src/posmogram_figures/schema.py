"""Parsers for the two posmogram CLI file schemas.

Density files: a `lambda,re_I,im_I,density` column header, one block of
rows per mode introduced by a `# l=<l> m=<m> parity=<+|->` comment line.
Overlay files: a `lambda,density,sho_density` header with one data block
and an optional `# key=value ...` report line.  JSON documents mirror the
same content under "format": "posmogram-density" / "posmogram-sho-overlay".
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


class SchemaError(ValueError):
    """The input file does not conform to the documented schema."""


DENSITY_COLUMNS = ["lambda", "re_I", "im_I", "density"]
OVERLAY_COLUMNS = ["lambda", "density", "sho_density"]


@dataclass(frozen=True)
class DensityBlock:
    l: int
    m: int
    parity: str
    data: np.ndarray  # columns per DENSITY_COLUMNS

    @property
    def lambdas(self):
        return self.data[:, 0]

    @property
    def density(self):
        return self.data[:, 3]


@dataclass(frozen=True)
class Overlay:
    report: dict
    lambdas: np.ndarray
    density: np.ndarray
    sho_density: np.ndarray


def _parse_block_marker(line: str) -> tuple[int, int, str]:
    try:
        tags = dict(tok.split("=", 1) for tok in line[1:].split())
        return int(tags["l"]), int(tags["m"]), tags["parity"]
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"bad block marker {line!r}") from exc


def _read_rows(lines, width):
    rows = []
    for line in lines:
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError as exc:
            raise SchemaError(f"non-numeric data row {line!r}") from exc
        if len(rows[-1]) != width:
            raise SchemaError(f"expected {width} columns, got {len(rows[-1])}: {line!r}")
    if not rows:
        raise SchemaError("data block has no rows")
    return np.asarray(rows)


def read_density_file(path) -> list[DensityBlock]:
    text = open(path, encoding="utf-8").read()
    if text.lstrip().startswith("{"):
        return _density_from_json(text)
    header_seen = False
    blocks = []
    marker = None
    pending: list[str] = []

    def flush():
        if marker is not None:
            blocks.append(DensityBlock(*marker, _read_rows(pending, 4)))

    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("# l="):
            flush()
            marker = _parse_block_marker(line)
            pending = []
        elif line.startswith("#"):
            continue
        elif line[0].isalpha():
            if line != ",".join(DENSITY_COLUMNS):
                raise SchemaError(f"expected header {','.join(DENSITY_COLUMNS)!r}, got {line!r}")
            header_seen = True
        else:
            pending.append(line)
    flush()
    if not header_seen:
        raise SchemaError("missing density column header")
    if not blocks:
        raise SchemaError("no mode blocks found")
    return blocks


def _density_from_json(text: str) -> list[DensityBlock]:
    doc = json.loads(text)
    if doc.get("format") != "posmogram-density":
        raise SchemaError(f"unexpected JSON format {doc.get('format')!r}")
    blocks = []
    for rec in doc.get("modes", []):
        try:
            data = np.column_stack([rec["lambda"], rec["re_I"], rec["im_I"], rec["density"]])
            blocks.append(DensityBlock(int(rec["l"]), int(rec["m"]), rec["parity"], data))
        except KeyError as exc:
            raise SchemaError(f"density JSON record missing {exc}") from exc
    if not blocks:
        raise SchemaError("no mode records found")
    return blocks


def read_overlay_file(path) -> Overlay:
    text = open(path, encoding="utf-8").read()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        if doc.get("format") != "posmogram-sho-overlay":
            raise SchemaError(f"unexpected JSON format {doc.get('format')!r}")
        try:
            return Overlay(doc.get("report", {}), np.asarray(doc["lambda"], dtype=float),
                           np.asarray(doc["density"], dtype=float),
                           np.asarray(doc["sho_density"], dtype=float))
        except KeyError as exc:
            raise SchemaError(f"overlay JSON missing {exc}") from exc
    report: dict = {}
    rows: list[str] = []
    header_seen = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body and not body.startswith("posmogram"):
                for tok in body.split():
                    if "=" in tok:
                        key, val = tok.split("=", 1)
                        report[key] = val
            continue
        if line[0].isalpha():
            if line != ",".join(OVERLAY_COLUMNS):
                raise SchemaError(f"expected header {','.join(OVERLAY_COLUMNS)!r}, got {line!r}")
            header_seen = True
            continue
        rows.append(line)
    if not header_seen:
        raise SchemaError("missing overlay column header")
    data = _read_rows(rows, 3)
    return Overlay(report, data[:, 0], data[:, 1], data[:, 2])
