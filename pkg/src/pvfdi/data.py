"""PV forecasting datasets: ingestion, validation, normalization, splitting.

A dataset is an ordered collection of hourly samples, each pairing the
twelve ECMWF weather variables with a normalized PV power output. CSV is
the on-disk form: comma-separated, dot decimal, UTF-8, mandatory header
naming the twelve feature columns plus POWER (TIMESTAMP optional).
"""

import csv
import hashlib
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DatasetTooSmall,
    EmptyFile,
    InvalidCount,
    MissingColumn,
    NonNumericCell,
)
from .rng import stream

__all__ = [
    "FEATURE_NAMES",
    "FEATURE_UNITS",
    "N_FEATURES",
    "POWER_COLUMN",
    "TIMESTAMP_COLUMN",
    "FeatureVector",
    "Sample",
    "Dataset",
    "NormalizationStats",
    "SplitConfig",
    "load_csv",
    "save_csv",
    "normalize",
    "fit_normalization",
    "apply_normalization",
    "split",
    "synth_generate",
]

FEATURE_NAMES = (
    "tclw", "tciw", "sp", "rh", "tcc", "u10",
    "v10", "t2m", "ssrd", "strd", "tsr", "tp",
)
N_FEATURES = len(FEATURE_NAMES)

FEATURE_UNITS = {
    "tclw": "kg m-2",   # total column liquid water
    "tciw": "kg m-2",   # total column ice water
    "sp": "Pa",         # surface pressure
    "rh": "%",          # relative humidity
    "tcc": "0-1",       # total cloud cover
    "u10": "m s-1",     # 10-meter U wind component
    "v10": "m s-1",     # 10-meter V wind component
    "t2m": "K",         # 2-meter temperature
    "ssrd": "J m-2",    # surface solar radiation down
    "strd": "J m-2",    # surface thermal radiation down
    "tsr": "J m-2",     # top net solar radiation
    "tp": "m",          # total precipitation
}

POWER_COLUMN = "POWER"
TIMESTAMP_COLUMN = "TIMESTAMP"


@dataclass(frozen=True)
class FeatureVector:
    """One sample's twelve weather variables, all finite."""

    tclw: float
    tciw: float
    sp: float
    rh: float
    tcc: float
    u10: float
    v10: float
    t2m: float
    ssrd: float
    strd: float
    tsr: float
    tp: float

    def __post_init__(self):
        for name in FEATURE_NAMES:
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"feature {name!r} is not finite: {value!r}")

    @classmethod
    def from_array(cls, values) -> "FeatureVector":
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (N_FEATURES,):
            raise ValueError(f"expected {N_FEATURES} features, got shape {values.shape}")
        return cls(*map(float, values))

    def to_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in FEATURE_NAMES], dtype=np.float64)


@dataclass(frozen=True)
class Sample:
    """A feature vector with its PV power target and optional timestamp."""

    features: FeatureVector
    power: float
    timestamp: str | None = None

    def __post_init__(self):
        if not math.isfinite(self.power):
            raise ValueError(f"power is not finite: {self.power!r}")


@dataclass(frozen=True)
class NormalizationStats:
    """Per-column (min, max) pairs recorded when normalization was fit."""

    feature_min: np.ndarray
    feature_max: np.ndarray
    power_min: float
    power_max: float

    def __post_init__(self):
        fmin = np.asarray(self.feature_min, dtype=np.float64)
        fmax = np.asarray(self.feature_max, dtype=np.float64)
        if fmin.shape != (N_FEATURES,) or fmax.shape != (N_FEATURES,):
            raise ValueError("feature stats must have one (min, max) pair per column")
        fmin.flags.writeable = False
        fmax.flags.writeable = False
        object.__setattr__(self, "feature_min", fmin)
        object.__setattr__(self, "feature_max", fmax)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormalizationStats):
            return NotImplemented
        return (
            np.array_equal(self.feature_min, other.feature_min)
            and np.array_equal(self.feature_max, other.feature_max)
            and self.power_min == other.power_min
            and self.power_max == other.power_max
        )

    def column_stats(self) -> dict:
        """Column name -> (min, max), POWER included."""
        out = {
            name: (float(self.feature_min[i]), float(self.feature_max[i]))
            for i, name in enumerate(FEATURE_NAMES)
        }
        out[POWER_COLUMN] = (self.power_min, self.power_max)
        return out


class Dataset:
    """Ordered samples stored as immutable arrays.

    ``features`` has shape (n, 12) in FEATURE_NAMES column order and
    ``power`` shape (n,). Instances are immutable after construction and
    safe to share across threads.
    """

    def __init__(self, features, power, timestamps=None, normalization_stats=None):
        features = np.array(features, dtype=np.float64)
        power = np.array(power, dtype=np.float64)
        if features.ndim != 2 or features.shape[1] != N_FEATURES:
            raise ValueError(f"features must have shape (n, {N_FEATURES})")
        if power.shape != (features.shape[0],):
            raise ValueError("power must have one entry per sample")
        if features.shape[0] == 0:
            raise ValueError("dataset must be non-empty")
        if not np.isfinite(features).all():
            raise ValueError("features contain non-finite values")
        if not np.isfinite(power).all():
            raise ValueError("power contains non-finite values")
        if timestamps is not None:
            timestamps = tuple(str(t) for t in timestamps)
            if len(timestamps) != features.shape[0]:
                raise ValueError("timestamps must have one entry per sample")
        features.flags.writeable = False
        power.flags.writeable = False
        self._features = features
        self._power = power
        self._timestamps = timestamps
        self._stats = normalization_stats

    @property
    def features(self) -> np.ndarray:
        return self._features

    @property
    def power(self) -> np.ndarray:
        return self._power

    @property
    def timestamps(self):
        return self._timestamps

    @property
    def normalization_stats(self):
        return self._stats

    def __len__(self) -> int:
        return self._features.shape[0]

    def sample(self, i: int) -> Sample:
        ts = self._timestamps[i] if self._timestamps is not None else None
        return Sample(
            features=FeatureVector.from_array(self._features[i]),
            power=float(self._power[i]),
            timestamp=ts,
        )

    @property
    def samples(self) -> list:
        return [self.sample(i) for i in range(len(self))]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            np.array_equal(self._features, other._features)
            and np.array_equal(self._power, other._power)
            and self._timestamps == other._timestamps
            and self._stats == other._stats
        )

    def take(self, indices) -> "Dataset":
        """New dataset holding the given rows, in the given order."""
        indices = np.asarray(indices, dtype=np.intp)
        ts = None
        if self._timestamps is not None:
            ts = tuple(self._timestamps[i] for i in indices)
        return Dataset(
            self._features[indices],
            self._power[indices],
            timestamps=ts,
            normalization_stats=self._stats,
        )

    def replace(self, features=None, power=None) -> "Dataset":
        """Copy with some arrays swapped out; stats and timestamps kept."""
        return Dataset(
            self._features if features is None else features,
            self._power if power is None else power,
            timestamps=self._timestamps,
            normalization_stats=self._stats,
        )

    def to_csv_bytes(self) -> bytes:
        """Canonical CSV serialization (also the checksum domain)."""
        buf = io.StringIO()
        _write_csv(self, buf)
        return buf.getvalue().encode("utf-8")

    def checksum(self) -> str:
        return hashlib.sha256(self.to_csv_bytes()).hexdigest()


@dataclass(frozen=True)
class SplitConfig:
    """Seeded random train/test partition parameters."""

    train_ratio: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_ratio < 1.0:
            raise ValueError(f"train_ratio must lie in (0, 1), got {self.train_ratio!r}")


# --- CSV ingestion -------------------------------------------------------------

def _parse_cell(raw: str, row: int, column: str) -> float:
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise NonNumericCell(row, column, raw) from None
    if not math.isfinite(value):
        raise NonNumericCell(row, column, raw)
    return value


def load_csv(path) -> Dataset:
    """Read a dataset from CSV in file order; no normalization applied.

    The header must name all twelve feature columns and POWER; TIMESTAMP
    is optional and extra columns are ignored. Any cell that does not
    parse to a finite float (missing cells included) raises
    NonNumericCell with its 0-based data-row index.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = None
        for row in reader:
            if row and row[0].lstrip().startswith("#"):
                continue  # provenance comment lines
            header = row
            break
        if header is None:
            raise EmptyFile(path)
        header = [name.strip() for name in header]
        for name in FEATURE_NAMES:
            if name not in header:
                raise MissingColumn(name)
        if POWER_COLUMN not in header:
            raise MissingColumn(POWER_COLUMN)
        feature_idx = [header.index(name) for name in FEATURE_NAMES]
        power_idx = header.index(POWER_COLUMN)
        ts_idx = header.index(TIMESTAMP_COLUMN) if TIMESTAMP_COLUMN in header else None

        features, power, timestamps = [], [], []
        row_no = 0
        for row in reader:
            if not row or row[0].lstrip().startswith("#"):
                continue
            row = row + [""] * (len(header) - len(row))
            features.append(
                [_parse_cell(row[j], row_no, name) for j, name in zip(feature_idx, FEATURE_NAMES)]
            )
            power.append(_parse_cell(row[power_idx], row_no, POWER_COLUMN))
            if ts_idx is not None:
                timestamps.append(row[ts_idx])
            row_no += 1

    if not features:
        raise EmptyFile(path)
    return Dataset(
        np.asarray(features),
        np.asarray(power),
        timestamps=timestamps if ts_idx is not None else None,
    )


def _write_csv(dataset: Dataset, fh, header_comment: str | None = None) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    if header_comment:
        fh.write(f"# {header_comment}\n")
    columns = list(FEATURE_NAMES) + [POWER_COLUMN]
    if dataset.timestamps is not None:
        columns = [TIMESTAMP_COLUMN] + columns
    writer.writerow(columns)
    for i in range(len(dataset)):
        row = [repr(float(v)) for v in dataset.features[i]]
        row.append(repr(float(dataset.power[i])))
        if dataset.timestamps is not None:
            row = [dataset.timestamps[i]] + row
        writer.writerow(row)


def save_csv(dataset: Dataset, path, header_comment: str | None = None) -> None:
    """Write a dataset as CSV; floats use shortest round-tripping repr.

    Normalization stats are not persisted. ``header_comment`` adds one
    leading ``#`` provenance line, which load_csv skips.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        _write_csv(dataset, fh, header_comment)


# --- normalization -------------------------------------------------------------

def _scale_columns(values: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    span = hi - lo
    out = np.zeros_like(values)
    nonconst = span != 0
    out[..., nonconst] = (values[..., nonconst] - lo[nonconst]) / span[nonconst]
    return out


def fit_normalization(train: Dataset) -> NormalizationStats:
    """Per-column min/max computed from the training set only."""
    return NormalizationStats(
        feature_min=train.features.min(axis=0),
        feature_max=train.features.max(axis=0),
        power_min=float(train.power.min()),
        power_max=float(train.power.max()),
    )


def apply_normalization(dataset: Dataset, stats: NormalizationStats) -> Dataset:
    """Min-max scale all columns with the given stats; no clipping.

    Values outside the fitted range map outside [0, 1]; constant columns
    map to 0.0.
    """
    features = _scale_columns(dataset.features, stats.feature_min, stats.feature_max)
    span = stats.power_max - stats.power_min
    if span == 0:
        power = np.zeros(len(dataset))
    else:
        power = (dataset.power - stats.power_min) / span
    return Dataset(features, power, timestamps=dataset.timestamps, normalization_stats=stats)


def normalize(train: Dataset, others=()) -> tuple:
    """Min-max scale ``train`` and every dataset in ``others`` to train's range.

    Statistics come from ``train`` alone and are recorded on every
    output, so test-set values beyond the training extrema legitimately
    fall outside [0, 1].
    """
    stats = fit_normalization(train)
    train_norm = apply_normalization(train, stats)
    others_norm = [apply_normalization(d, stats) for d in others]
    return train_norm, others_norm


# --- splitting -----------------------------------------------------------------

def split(d: Dataset, cfg: SplitConfig) -> tuple:
    """Seeded uniformly-random partition into (train, test).

    The permutation is a pure function of cfg.seed; the first
    floor(n * train_ratio) permuted rows form the training set.
    """
    n = len(d)
    if n < 2:
        raise DatasetTooSmall(n, "need at least 2 samples to split")
    n_train = math.floor(n * cfg.train_ratio)
    if n_train == 0 or n_train == n:
        raise DatasetTooSmall(n, f"train_ratio {cfg.train_ratio} leaves an empty side")
    perm = stream(cfg.seed, "split").permutation(n)
    return d.take(perm[:n_train]), d.take(perm[n_train:])


# --- synthetic data ------------------------------------------------------------

# Raw sampling ranges for the synthetic generator, in each variable's
# native units. Features are drawn uniformly and independently.
SYNTH_RANGES = {
    "tclw": (0.0, 1.2),
    "tciw": (0.0, 0.8),
    "sp": (95000.0, 105000.0),
    "rh": (5.0, 100.0),
    "tcc": (0.0, 1.0),
    "u10": (-12.0, 12.0),
    "v10": (-12.0, 12.0),
    "t2m": (263.0, 313.0),
    "ssrd": (0.0, 3.6e6),
    "strd": (6.0e5, 1.6e6),
    "tsr": (0.0, 4.2e6),
    "tp": (0.0, 0.012),
}

# power = clamp01(A*ssrd' + B*tsr' - C*tcc' + e), primes denoting the
# generator's own [0, 1] rescaling of each raw range above.
SYNTH_SSRD_WEIGHT = 0.55
SYNTH_TSR_WEIGHT = 0.35
SYNTH_TCC_WEIGHT = 0.25
SYNTH_RESIDUAL_STD = 0.02


def synth_generate(n: int, seed: int, residual_std: float = SYNTH_RESIDUAL_STD) -> Dataset:
    """Deterministic synthetic PV dataset of ``n`` samples.

    Power is a clamped linear function of the internally rescaled solar
    radiation, top net radiation, and cloud cover, plus a seeded Gaussian
    residual. Same (n, seed) always yields the identical dataset.
    """
    if n < 10:
        raise InvalidCount(n, 10)
    rng = stream(seed, "synth")
    lo = np.array([SYNTH_RANGES[name][0] for name in FEATURE_NAMES])
    hi = np.array([SYNTH_RANGES[name][1] for name in FEATURE_NAMES])
    unit = rng.uniform(0.0, 1.0, size=(n, N_FEATURES))
    features = lo + unit * (hi - lo)

    col = {name: i for i, name in enumerate(FEATURE_NAMES)}
    signal = (
        SYNTH_SSRD_WEIGHT * unit[:, col["ssrd"]]
        + SYNTH_TSR_WEIGHT * unit[:, col["tsr"]]
        - SYNTH_TCC_WEIGHT * unit[:, col["tcc"]]
    )
    residual = rng.normal(0.0, 1.0, size=n) * residual_std
    power = np.clip(signal + residual, 0.0, 1.0)
    return Dataset(features, power)
