"""Text file formats for coefficients, signals and experiment reports.

Coefficient and signal files are line-oriented with a one-line magic
header, the band limit, then one sample or coefficient per line with 17
significant digits (enough for float64 round trips).  Report CSVs start
with ``# optisph <command> seed=<n>`` so downstream tooling can verify
what produced them.
"""

import csv
import math
from pathlib import Path

import numpy as np

from .errors import FileFormatError
from .transform import HarmonicCoefficients, SpatialSamples

COEF_MAGIC = "OPTISPH-COEF v1"
SIG_MAGIC = "OPTISPH-SIG v1"
REPORT_MAGIC = "# optisph"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_coefficients(path, coeffs: HarmonicCoefficients) -> None:
    L = coeffs.band_limit
    lines = [COEF_MAGIC, f"L {L}"]
    for idx in range(L * L):
        ell = math.isqrt(idx)
        m = idx - ell * ell - ell
        v = coeffs.values[idx]
        lines.append(f"{ell} {m} {_fmt(v.real)} {_fmt(v.imag)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def write_signal(path, samples: SpatialSamples) -> None:
    L = samples.band_limit
    lines = [SIG_MAGIC, f"L {L}"]
    for k in range(L):
        ring = samples.rings[k]
        for j in range(2 * k + 1):
            v = ring[j]
            lines.append(f"{k} {j} {_fmt(v.real)} {_fmt(v.imag)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def _read_body(path, magic):
    try:
        lines = Path(path).read_text(encoding="ascii").splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise FileFormatError(f"{path}: {exc}")
    if not lines or lines[0] != magic:
        raise FileFormatError(f"{path}: expected header {magic!r}")
    if len(lines) < 2 or not lines[1].startswith("L "):
        raise FileFormatError(f"{path}: missing band-limit line")
    try:
        band_limit = int(lines[1].split()[1])
    except (IndexError, ValueError):
        raise FileFormatError(f"{path}: malformed band-limit line {lines[1]!r}")
    if band_limit < 1:
        raise FileFormatError(f"{path}: band limit must be positive, got {band_limit}")
    body = [ln for ln in lines[2:] if ln.strip()]
    if len(body) != band_limit**2:
        raise FileFormatError(
            f"{path}: expected {band_limit**2} data lines, found {len(body)}"
        )
    return band_limit, body


def read_coefficients(path) -> HarmonicCoefficients:
    band_limit, body = _read_body(path, COEF_MAGIC)
    values = np.zeros(band_limit**2, dtype=np.complex128)
    for idx, line in enumerate(body):
        parts = line.split()
        if len(parts) != 4:
            raise FileFormatError(f"{path}: malformed line {line!r}")
        try:
            ell, m = int(parts[0]), int(parts[1])
            re, im = float(parts[2]), float(parts[3])
        except ValueError:
            raise FileFormatError(f"{path}: malformed line {line!r}")
        if ell * ell + ell + m != idx:
            raise FileFormatError(
                f"{path}: line {idx}: degree/order ({ell}, {m}) out of sequence"
            )
        values[idx] = complex(re, im)
    return HarmonicCoefficients(band_limit, values)


def read_signal(path) -> SpatialSamples:
    band_limit, body = _read_body(path, SIG_MAGIC)
    flat = np.zeros(band_limit**2, dtype=np.complex128)
    pos = 0
    for k in range(band_limit):
        for j in range(2 * k + 1):
            parts = body[pos].split()
            if len(parts) != 4:
                raise FileFormatError(f"{path}: malformed line {body[pos]!r}")
            try:
                kk, jj = int(parts[0]), int(parts[1])
                re, im = float(parts[2]), float(parts[3])
            except ValueError:
                raise FileFormatError(f"{path}: malformed line {body[pos]!r}")
            if (kk, jj) != (k, j):
                raise FileFormatError(
                    f"{path}: line {pos}: ring/sample ({kk}, {jj}) out of sequence"
                )
            flat[pos] = complex(re, im)
            pos += 1
    return SpatialSamples.from_flat(band_limit, flat)


def write_report(path, command: str, seed: int, fieldnames, rows) -> None:
    """CSV report with the standard provenance comment line on top."""
    with open(path, "w", newline="", encoding="ascii") as fh:
        fh.write(f"{REPORT_MAGIC} {command} seed={seed}\n")
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
