"""Gas-measurement records: CSV ingestion, validation, normalization, features.

A record holds the averaged concentrations (volume percent) of total
hydrocarbon (HC), oxygen, carbon monoxide and carbon dioxide together with a
binary explosion outcome.  The default feature set for both classifiers is
(HC, O2, O2/HC), each scaled to [-1, 1] by an affine map fitted on training
data only.
"""

from __future__ import annotations

import math
import os
import tempfile
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DataFormatError

CSV_HEADER = "hc,o2,co,co2,exploded"

RAW_COLUMNS = ("hc", "o2", "co", "co2")

#: Feature set used throughout: CO and CO2 are ingested and validated but do
#: not enter the default features; the HC/O2 ratio carries the interaction.
DEFAULT_ATTRIBUTES = ("hc", "o2", "ratio")

RATIO_O2_OVER_HC = "o2_over_hc"
RATIO_HC_OVER_O2 = "hc_over_o2"


@dataclass(frozen=True)
class GasSample:
    """One averaged measurement: concentrations in vol % plus the outcome."""

    hc: float
    o2: float
    co: float
    co2: float
    exploded: bool

    def __post_init__(self):
        for name in RAW_COLUMNS:
            # coerce numpy scalars so repr-based serialization stays clean
            value = float(getattr(self, name))
            object.__setattr__(self, name, value)
            if not math.isfinite(value):
                raise DataFormatError(f"{name} must be finite, got {value!r}")
            if value < 0:
                raise DataFormatError(f"{name} must be >= 0, got {value!r}")
        object.__setattr__(self, "exploded", bool(self.exploded))
        total = self.hc + self.o2 + self.co + self.co2
        if total > 100.0 + 1e-9:
            raise DataFormatError(
                f"concentrations sum to {total:.6g} vol %, above 100"
            )


@dataclass(frozen=True)
class Dataset:
    """Ordered, immutable collection of samples with a free-text source tag."""

    samples: tuple[GasSample, ...]
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        if not self.samples:
            raise DataFormatError("empty dataset")

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    @property
    def exploded(self) -> np.ndarray:
        """Boolean outcome per sample, in order."""
        return np.array([s.exploded for s in self.samples], dtype=bool)

    def class_counts(self) -> tuple[int, int]:
        """(number exploded, number not exploded)."""
        n_pos = int(self.exploded.sum())
        return n_pos, len(self) - n_pos

    def subset(self, indices) -> "Dataset":
        return Dataset(
            tuple(self.samples[i] for i in indices), provenance=self.provenance
        )


@dataclass(frozen=True)
class FeatureConfig:
    """Which raw attributes enter the model and how the ratio is oriented."""

    attributes: tuple[str, ...] = DEFAULT_ATTRIBUTES
    ratio: str = RATIO_O2_OVER_HC

    def __post_init__(self):
        object.__setattr__(self, "attributes", tuple(self.attributes))
        if not self.attributes:
            raise ValueError("at least one feature attribute is required")
        valid = set(RAW_COLUMNS) | {"ratio"}
        for name in self.attributes:
            if name not in valid:
                raise ValueError(f"unknown attribute {name!r}")
        if self.ratio not in (RATIO_O2_OVER_HC, RATIO_HC_OVER_O2):
            raise ValueError(f"unknown ratio orientation {self.ratio!r}")

    def raw_value(self, sample: GasSample, name: str) -> float:
        """Raw (unnormalized) value of one attribute for one sample."""
        if name != "ratio":
            return getattr(sample, name)
        if self.ratio == RATIO_O2_OVER_HC:
            if sample.hc == 0:
                raise DataFormatError("undefined ratio: hc is 0")
            return sample.o2 / sample.hc
        if sample.o2 == 0:
            raise DataFormatError("undefined ratio: o2 is 0")
        return sample.hc / sample.o2

    def raw_matrix(self, data: Dataset) -> np.ndarray:
        """(n_samples, n_attributes) matrix of raw attribute values."""
        return np.array(
            [[self.raw_value(s, a) for a in self.attributes] for s in data],
            dtype=float,
        )


@dataclass(frozen=True)
class NormalizationParams:
    """Per-attribute (min, max) observed on training data.

    The transform maps the training min to -1 and the training max to +1;
    values outside the training range map outside [-1, 1] on purpose, so that
    distribution drift stays visible.  A constant attribute (min == max) maps
    to 0, the midpoint of the target interval.
    """

    feature_config: FeatureConfig
    mins: tuple[float, ...]
    maxs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "mins", tuple(float(v) for v in self.mins))
        object.__setattr__(self, "maxs", tuple(float(v) for v in self.maxs))
        n = len(self.feature_config.attributes)
        if len(self.mins) != n or len(self.maxs) != n:
            raise ValueError("mins/maxs must match the attribute list")
        for name, lo, hi in zip(self.feature_config.attributes, self.mins, self.maxs):
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError(f"non-finite range for attribute {name!r}")
            if lo > hi:
                raise ValueError(f"min > max for attribute {name!r}")

    @property
    def attributes(self) -> tuple[str, ...]:
        return self.feature_config.attributes

    @property
    def constant_attributes(self) -> tuple[str, ...]:
        """Attributes whose observed min equals the observed max."""
        return tuple(
            name
            for name, lo, hi in zip(self.attributes, self.mins, self.maxs)
            if lo == hi
        )

    def transform(self, raw: np.ndarray) -> np.ndarray:
        """Apply the affine map column-wise to a (n, n_attributes) matrix."""
        raw = np.atleast_2d(np.asarray(raw, dtype=float))
        lo = np.array(self.mins)
        hi = np.array(self.maxs)
        span = hi - lo
        constant = span == 0
        safe_span = np.where(constant, 1.0, span)
        out = (2.0 * raw - hi - lo) / safe_span
        out[:, constant] = 0.0
        return out


def load_csv(path) -> Dataset:
    """Read a measurement CSV into a Dataset, preserving row order.

    The file must be UTF-8 with header ``hc,o2,co,co2,exploded``; lines
    starting with ``#`` are skipped.  Malformed rows are reported with their
    1-based physical line number.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except FileNotFoundError:
        raise DataFormatError(f"no such file: {path}") from None

    header_seen = False
    samples = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if not header_seen:
            if text != CSV_HEADER:
                raise DataFormatError(
                    f"line {lineno}: expected header {CSV_HEADER!r}, got {text!r}"
                )
            header_seen = True
            continue
        fields = [f.strip() for f in text.split(",")]
        if len(fields) != 5:
            raise DataFormatError(
                f"line {lineno}: expected 5 fields, got {len(fields)}"
            )
        try:
            concentrations = [_parse_concentration(f) for f in fields[:4]]
        except ValueError as exc:
            raise DataFormatError(f"line {lineno}: {exc}") from None
        if fields[4] not in ("0", "1"):
            raise DataFormatError(
                f"line {lineno}: exploded must be 0 or 1, got {fields[4]!r}"
            )
        try:
            samples.append(GasSample(*concentrations, exploded=fields[4] == "1"))
        except DataFormatError as exc:
            raise DataFormatError(f"line {lineno}: {exc}") from None

    if not header_seen:
        raise DataFormatError(f"missing header {CSV_HEADER!r} in {path}")
    if not samples:
        raise DataFormatError("empty dataset")
    return Dataset(tuple(samples), provenance=str(path))


def _parse_concentration(token: str) -> float:
    if not token or "_" in token:
        raise ValueError(f"malformed number {token!r}")
    try:
        return float(token)
    except ValueError:
        raise ValueError(f"malformed number {token!r}") from None


def write_csv(data: Dataset, path) -> None:
    """Write a Dataset in the ingestion format (atomic: temp file + rename)."""
    lines = [CSV_HEADER]
    for s in data:
        lines.append(
            f"{s.hc!r},{s.o2!r},{s.co!r},{s.co2!r},{1 if s.exploded else 0}"
        )
    atomic_write_text(path, "\n".join(lines) + "\n")


def atomic_write_text(path, text: str) -> None:
    """Write text to path via a temp file in the same directory plus rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-gasgate-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def fit_normalization(
    data: Dataset, feature_config: FeatureConfig = FeatureConfig()
) -> NormalizationParams:
    """Scan the training data for per-attribute (min, max).

    Constant attributes are legal but flagged with a warning; their transform
    maps every value to 0.
    """
    raw = feature_config.raw_matrix(data)
    params = NormalizationParams(
        feature_config,
        mins=tuple(raw.min(axis=0)),
        maxs=tuple(raw.max(axis=0)),
    )
    if params.constant_attributes:
        warnings.warn(
            f"constant attribute(s) {params.constant_attributes}: "
            "normalized value is pinned to 0",
            stacklevel=2,
        )
    return params


def apply_normalization(params: NormalizationParams, sample: GasSample) -> np.ndarray:
    """Featurize one sample: raw attribute values, then the fitted affine map."""
    raw = np.array(
        [params.feature_config.raw_value(sample, a) for a in params.attributes]
    )
    return params.transform(raw)[0]


def featurize(params: NormalizationParams, data: Dataset) -> np.ndarray:
    """Featurize a whole dataset into an (n, n_attributes) matrix."""
    return params.transform(params.feature_config.raw_matrix(data))


LABEL_SCHEMES = ("zero-one", "plus-minus-one")


def encode_labels(data: Dataset, scheme: str) -> np.ndarray:
    """Encode outcomes as integers: explosion is 1 in both schemes."""
    if scheme not in LABEL_SCHEMES:
        raise ValueError(f"unknown label scheme {scheme!r}; use one of {LABEL_SCHEMES}")
    negative = 0 if scheme == "zero-one" else -1
    return np.where(data.exploded, 1, negative)


def split_train_test(
    data: Dataset, train_fraction: float, seed: int
) -> tuple[Dataset, Dataset]:
    """Deterministic shuffled split; train size = round(n * fraction)."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = len(data)
    n_train = int(math.floor(n * train_fraction + 0.5))
    if n_train == 0 or n_train == n:
        raise ValueError(
            f"fraction {train_fraction} on {n} samples leaves an empty side"
        )
    order = np.random.default_rng(seed).permutation(n)
    return data.subset(order[:n_train]), data.subset(order[n_train:])
