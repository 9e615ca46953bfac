"""Record files and the 380-feature layout.

Layout: ECG II, PLETH and ABP wavelet blocks (six detail subbands x 20
statistics each) followed by 20 statistics of the ECG HRV series.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass

import numpy as np

from .hrv import detect_rpeaks, hrv_signal
from .stats import STAT_NAMES, stat_features
from .wavelet import WaveletSpec, dwt_decompose

log = logging.getLogger(__name__)

CHANNELS = ("ECG_II", "ABP", "PLETH")
SOURCES = ("ECG-wavelet", "PLETH-wavelet", "ABP-wavelet", "ECG-HRV")
WAVELET_BLOCKS = (("ECG-wavelet", "ECG_II", "db8"), ("PLETH-wavelet", "PLETH", "db4"), ("ABP-wavelet", "ABP", "db4"))
N_FEATURES = 3 * 6 * 20 + 20
_PREFIX = {"ECG-wavelet": "ecg_wav", "PLETH-wavelet": "pleth_wav", "ABP-wavelet": "abp_wav", "ECG-HRV": "ecg_hrv"}


class RecordFormatError(ValueError):
    pass


@dataclass
class Record:
    record_id: str
    fs: float
    label: int
    ecg: np.ndarray
    abp: np.ndarray
    pleth: np.ndarray

    def __post_init__(self):
        self.ecg = np.asarray(self.ecg, dtype=float)
        self.abp = np.asarray(self.abp, dtype=float)
        self.pleth = np.asarray(self.pleth, dtype=float)
        if not self.fs > 0:
            raise RecordFormatError("sampling rate must be positive")
        if not self.ecg.size == self.abp.size == self.pleth.size:
            raise RecordFormatError("channels differ in length")
        if self.label not in (0, 1):
            raise RecordFormatError("label must be 0 (false alarm) or 1 (true alarm)")

    def channel(self, name: str) -> np.ndarray:
        return {"ECG_II": self.ecg, "ABP": self.abp, "PLETH": self.pleth}[name]


@dataclass(frozen=True)
class Provenance:
    source: str
    subband: str
    statistic: int

    @property
    def name(self) -> str:
        return f"{_PREFIX[self.source]}_{self.subband}_{STAT_NAMES[self.statistic - 1]}"


def feature_layout() -> list[Provenance]:
    tags = []
    for source, _, _ in WAVELET_BLOCKS:
        for level in range(1, 7):
            tags.extend(Provenance(source, f"D{level}", k) for k in range(1, 21))
    tags.extend(Provenance("ECG-HRV", "HRV", k) for k in range(1, 21))
    return tags


FEATURE_NAMES = [p.name for p in feature_layout()]


def source_of(name: str) -> str:
    """Source group encoded in a feature name, or ``"untagged"``."""
    for source, prefix in _PREFIX.items():
        if name.startswith(prefix + "_"):
            return source
    return "untagged"


@dataclass
class FeatureVector:
    values: np.ndarray
    provenance: list[Provenance]
    hrv_valid: bool = True


def extract_all(record: Record) -> FeatureVector:
    values = []
    for _, channel, family in WAVELET_BLOCKS:
        for band in dwt_decompose(record.channel(channel), WaveletSpec(family)):
            values.append(stat_features(band))
    hrv_valid = True
    try:
        values.append(stat_features(hrv_signal(detect_rpeaks(record.ecg, record.fs), record.fs)))
    except ValueError as exc:
        log.warning("record %s: HRV unavailable (%s); zero block substituted", record.record_id, exc)
        values.append(np.zeros(20))
        hrv_valid = False
    out = np.concatenate(values)
    if not np.all(np.isfinite(out)):
        raise ValueError(f"record {record.record_id}: non-finite features")
    return FeatureVector(out, feature_layout(), hrv_valid)


def read_record(path) -> Record:
    """Parse a record file.

    First line: ``# fs=<Hz>,label=<true|false>[,id=<name>]``; second line:
    channel header naming ECG_II, ABP and PLETH; then one sample per row.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if len(lines) < 3 or not lines[0].startswith("#"):
        raise RecordFormatError(f"{path}: missing '# fs=...,label=...' sidecar line or data")
    meta = {}
    for part in lines[0].lstrip("#").split(","):
        if "=" in part:
            key, val = part.split("=", 1)
            meta[key.strip().lower()] = val.strip()
    try:
        fs = float(meta["fs"])
        label_text = meta["label"].lower()
    except (KeyError, ValueError):
        raise RecordFormatError(f"{path}: sidecar needs numeric fs and a label") from None
    if label_text not in ("true", "false", "1", "0"):
        raise RecordFormatError(f"{path}: label {meta['label']!r} is not true/false")
    rows = list(csv.reader(lines[1:]))
    header = [h.strip() for h in rows[0]]
    missing = [c for c in CHANNELS if c not in header]
    if missing:
        raise RecordFormatError(f"{path}: header lacks channels {missing}")
    try:
        data = np.array([[float(r[header.index(c)]) for c in CHANNELS] for r in rows[1:]])
    except (ValueError, IndexError):
        raise RecordFormatError(f"{path}: malformed sample row") from None
    if not np.all(np.isfinite(data)):
        raise RecordFormatError(f"{path}: non-finite samples")
    record_id = meta.get("id") or str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return Record(record_id, fs, int(label_text in ("true", "1")), data[:, 0], data[:, 1], data[:, 2])


def write_record(record: Record, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        label = "true" if record.label else "false"
        fh.write(f"# fs={record.fs:g},label={label},id={record.record_id}\n")
        fh.write(",".join(CHANNELS) + "\n")
        for e, a, p in zip(record.ecg, record.abp, record.pleth):
            fh.write(f"{float(e)!r},{float(a)!r},{float(p)!r}\n")
