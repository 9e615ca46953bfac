from .extract import (
    FEATURE_NAMES,
    N_FEATURES,
    SOURCES,
    Record,
    RecordFormatError,
    extract_all,
    read_record,
    source_of,
    write_record,
)
from .hrv import detect_rpeaks, hrv_signal
from .stats import STAT_NAMES, stat_features
from .wavelet import WaveletSpec, dwt_decompose, wavedec, waverec

__all__ = [
    "FEATURE_NAMES", "N_FEATURES", "SOURCES", "Record", "RecordFormatError", "extract_all",
    "read_record", "source_of", "write_record", "detect_rpeaks", "hrv_signal", "STAT_NAMES",
    "stat_features", "WaveletSpec", "dwt_decompose", "wavedec", "waverec",
]
