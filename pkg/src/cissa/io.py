"""Reading input series and writing decomposition / grouping results."""
from __future__ import annotations

import csv
import json
import wave
from pathlib import Path

import numpy as np

from . import __version__
from .decompose import Decomposition
from .errors import InputError, ParameterError
from .extension import ExtensionMode
from .grouping import CumulativeShare, Economic, GroupingResult, Manual, PsdPercentile
from .spectral import n_frequencies

FLOAT_FMT = "%.17g"


def _fmt(v: float) -> str:
    return FLOAT_FMT % v


def read_series(path, format: str | None = None, column: int = 1, header: bool | None = None,
                log_transform: bool = False) -> np.ndarray:
    """
    Load a univariate series from a CSV or WAV file.

    Parameters
    ----------
    path : str or Path
    format : {"csv", "wav"}, optional
        Inferred from the file suffix when omitted.
    column : int
        1-based CSV column holding the series.
    header : bool, optional
        Whether the CSV has a header line. When None, the first line is
        treated as a header if its selected field is not a number.
    log_transform : bool
        Take natural logs (all values must be positive).
    """
    path = Path(path)
    if format is None:
        format = "wav" if path.suffix.lower() == ".wav" else "csv"
    format = format.lower()
    if format == "csv":
        x = _read_csv(path, column, header)
    elif format == "wav":
        x = _read_wav(path)
    else:
        raise ParameterError(f"unsupported format {format!r}; use csv or wav")
    if x.size == 0:
        raise InputError(f"{path}: no samples found")
    if log_transform:
        bad = np.flatnonzero(x <= 0)
        if bad.size:
            raise InputError(f"{path}: sample {bad[0] + 1} is {x[bad[0]]:g}; log transform needs positive values")
        x = np.log(x)
    return x


def _read_csv(path: Path, column: int, header: bool | None) -> np.ndarray:
    if int(column) != column or column < 1:
        raise ParameterError(f"column must be a positive integer, got {column!r}")
    col = int(column) - 1
    with path.open(newline="") as fh:
        text = fh.read()
    try:
        dialect = csv.Sniffer().sniff(text[:4096], delimiters=",;\t ")
    except csv.Error:
        dialect = csv.excel
    rows = [(i, r) for i, r in enumerate(csv.reader(text.splitlines(), dialect), 1) if any(f.strip() for f in r)]
    values = []
    for pos, (lineno, row) in enumerate(rows):
        if col >= len(row):
            raise InputError(f"{path}:{lineno}: no column {column} (row has {len(row)} fields)")
        field = row[col].strip()
        try:
            v = float(field)
        except ValueError:
            if pos == 0 and header is not False:
                continue
            raise InputError(f"{path}:{lineno}: cannot parse {field!r} as a number") from None
        if pos == 0 and header:
            continue
        if not np.isfinite(v):
            raise InputError(f"{path}:{lineno}: non-finite value {field!r}")
        values.append(v)
    return np.asarray(values, dtype=np.float64)


def _read_wav(path: Path) -> np.ndarray:
    try:
        with wave.open(str(path), "rb") as wf:
            channels, width, n = wf.getnchannels(), wf.getsampwidth(), wf.getnframes()
            frames = wf.readframes(n)
    except (wave.Error, EOFError) as exc:
        raise InputError(f"{path}: unsupported or corrupt WAV file ({exc})") from None
    if channels != 1:
        raise InputError(f"{path}: WAV has {channels} channels; only mono is supported")
    if width != 2:
        raise InputError(f"{path}: WAV sample width is {8 * width} bits; only 16-bit PCM is supported")
    return np.frombuffer(frames, dtype="<i2").astype(np.float64) / 32768.0


def write_decomposition(dec: Decomposition, out_dir, extra_meta: dict | None = None) -> list[Path]:
    """
    Write ``components.csv``, ``psd.csv`` and ``meta.json`` to `out_dir`.

    Numbers are written with 17 significant digits so they read back
    bit-identical.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    header = [f"k={k} (w={(k - 1) / dec.L:.6f})" for k in range(1, dec.F + 1)]
    comp = out / "components.csv"
    with comp.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows([_fmt(v) for v in row] for row in dec.Z)
    spec = out / "psd.csv"
    with spec.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "w", "lambda"])
        for k, lam in enumerate(dec.psd, 1):
            w.writerow([k, _fmt((k - 1) / dec.L), _fmt(lam)])
    meta = {
        "T": dec.T,
        "L": dec.L,
        "F": dec.F,
        "extension": dec.mode.kind.value,
        "ar_order": dec.mode.ar_order,
        "negative_psd_k": [int(k) for k in dec.negative_psd],
        "version": __version__,
    }
    meta.update(extra_meta or {})
    meta_path = out / "meta.json"
    meta_path.write_text(json.dumps(meta, indent=2) + "\n")
    return [comp, spec, meta_path]


def read_decomposition(in_dir) -> Decomposition:
    """Inverse of :func:`write_decomposition`."""
    src = Path(in_dir)
    try:
        meta = json.loads((src / "meta.json").read_text())
        Z = np.loadtxt(src / "components.csv", delimiter=",", skiprows=1, ndmin=2)
        lam = np.loadtxt(src / "psd.csv", delimiter=",", skiprows=1, ndmin=2)[:, 2]
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"{src}: cannot read decomposition ({exc})") from None
    L = int(meta["L"])
    if Z.shape[1] != n_frequencies(L) or lam.size != L:
        raise InputError(f"{src}: components/psd shapes do not match L={L}")
    mode = ExtensionMode(meta.get("extension", "ar"), meta.get("ar_order"))
    return Decomposition(Z=Z, psd=lam, L=L, mode=mode)


def write_grouping(res: GroupingResult, out_dir) -> list[Path]:
    """Write ``groups.csv`` (one column per group), ``shares.csv`` and ``kg.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    groups = out / "groups.csv"
    with groups.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(res.names)
        w.writerows([_fmt(v) for v in row] for row in res.rc)
    shares = out / "shares.csv"
    with shares.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["group", "share", "percent"])
        for name, s in zip(res.names, res.sh):
            w.writerow([name, _fmt(s), f"{100 * s:.1f}"])
    kg = out / "kg.json"
    kg.write_text(json.dumps([{"group": n, "k": list(g)} for n, g in zip(res.names, res.kg)], indent=2) + "\n")
    return [groups, shares, kg]


def parse_group_spec(text: str):
    """
    Parse the command-line grouping mini-language.

    ``economic:S``, ``manual:@FILE.json`` or ``manual:[[..], ..]``,
    ``share:X`` and ``percentile:Q``.
    """
    kind, sep, arg = text.partition(":")
    if not sep or not arg:
        raise ParameterError(f"grouping spec {text!r} must look like KIND:VALUE")
    kind = kind.strip().lower()
    try:
        if kind == "economic":
            return Economic(int(arg))
        if kind == "share":
            return CumulativeShare(float(arg))
        if kind == "percentile":
            return PsdPercentile(float(arg))
    except ValueError as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(f"bad value in grouping spec {text!r}") from None
    if kind == "manual":
        if arg.startswith("@"):
            path = Path(arg[1:])
            try:
                raw = path.read_text()
            except OSError as exc:
                raise InputError(f"{path}: {exc.strerror}") from None
        else:
            raw = arg
        try:
            groups = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InputError(f"manual groups are not valid JSON: {exc}") from None
        if not isinstance(groups, list) or not all(isinstance(g, list) for g in groups):
            raise InputError("manual groups must be a JSON list of lists of indices")
        return Manual(tuple(tuple(g) for g in groups))
    raise ParameterError(f"unknown grouping kind {kind!r}; use economic, manual, share or percentile")
