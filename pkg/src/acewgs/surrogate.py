"""Inference side of the theory-guided surrogate model.

A design is encoded onto the bundle's feature schema (one-hot composition
slots carrying wt%, preparation-method slots carrying 1, reaction
conditions carrying their values), normalized, and pushed through an
ensemble of small dense networks. Each member's raw logit z is mapped to
a conversion x_eq * sigmoid(z), which keeps every prediction strictly
inside the thermodynamic ceiling; the ensemble mean is the prediction and
the population standard deviation is its uncertainty.

Weights are pluggable: a ModelBundle is a JSON file with base64-encoded
little-endian float64 blobs, so round trips are bit-exact.
"""

from __future__ import annotations

import base64
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from acewgs import _kernels, thermo
from acewgs.catalog import Catalog
from acewgs.errors import (
    DimensionChainBroken,
    FormatError,
    InvalidDesign,
    NonFiniteActivation,
    SchemaMismatch,
    UnknownCatalogId,
)
from acewgs.thermo import FeedComposition

CONDITION_SLOTS = (
    "cond:temperature_c",
    "cond:y_co",
    "cond:y_h2o",
    "cond:y_co2",
    "cond:y_h2",
    "cond:y_n2",
    "cond:time_on_stream_h",
    "cond:w_f_ratio",
)

ACTIVATIONS = ("relu", "linear")


@dataclass(frozen=True)
class CatalystDesign:
    """One point of the design space: composition, preparation, conditions."""

    base_metal: str
    base_wt_pct: float
    support: str
    prep_method: str
    temperature_c: float
    feed: FeedComposition
    time_on_stream_h: float
    w_f_ratio: float
    promoter: str | None = None
    promoter_wt_pct: float = 0.0

    def __post_init__(self):
        if self.base_wt_pct < 0 or self.promoter_wt_pct < 0:
            raise InvalidDesign("weight percentages must be non-negative")
        if self.base_wt_pct + self.promoter_wt_pct > 100 + 1e-9:
            raise InvalidDesign("base + promoter wt% exceeds 100")
        if self.promoter is None and self.promoter_wt_pct > 0:
            raise InvalidDesign("promoter wt% given without a promoter")

    @property
    def support_wt_pct(self) -> float:
        return 100.0 - self.base_wt_pct - self.promoter_wt_pct


@dataclass(frozen=True)
class Layer:
    weights: np.ndarray   # (out, in), float64, row-major
    bias: np.ndarray      # (out,)
    activation: str       # "relu" | "linear"


@dataclass(frozen=True)
class ModelBundle:
    feature_schema: tuple[str, ...]
    mean: np.ndarray
    std: np.ndarray
    members: tuple[tuple[Layer, ...], ...]

    def __post_init__(self):
        if len(self.members) < 1:
            raise FormatError("ensemble needs at least one member")
        if np.any(self.std <= 0):
            raise FormatError("normalization std must be > 0 for every feature")
        if self.mean.shape != (len(self.feature_schema),) or \
                self.std.shape != (len(self.feature_schema),):
            raise FormatError("normalization length differs from schema length")
        for m, layers in enumerate(self.members):
            width = len(self.feature_schema)
            for i, layer in enumerate(layers):
                out, fin = layer.weights.shape
                if fin != width:
                    raise DimensionChainBroken(
                        f"member {m} layer {i}: expects {fin} inputs, gets {width}")
                if layer.bias.shape != (out,):
                    raise DimensionChainBroken(
                        f"member {m} layer {i}: bias length {layer.bias.shape}")
                if layer.activation not in ACTIVATIONS:
                    raise FormatError(f"unknown activation {layer.activation!r}")
                width = out
            if width != 1:
                raise DimensionChainBroken(
                    f"member {m}: final layer must output one logit, not {width}")

    @property
    def slot_index(self) -> dict:
        return {name: i for i, name in enumerate(self.feature_schema)}


@dataclass(frozen=True)
class Prediction:
    conversion: float    # percent, mean over ensemble members
    uncertainty: float   # percent, population std over members
    x_eq: float          # percent, thermodynamic ceiling


# --- encoding ----------------------------------------------------------------

def encode(design: CatalystDesign, bundle: ModelBundle) -> np.ndarray:
    """Normalized feature vector for one design."""
    return encode_batch([design], bundle)[0]


def encode_batch(designs: list[CatalystDesign], bundle: ModelBundle) -> np.ndarray:
    index = bundle.slot_index
    for slot in CONDITION_SLOTS:
        if slot not in index:
            raise SchemaMismatch(f"schema lacks required condition slot {slot!r}")
    raw = np.zeros((len(designs), len(bundle.feature_schema)))
    for r, d in enumerate(designs):
        _set_slot(raw, r, index, f"base:{d.base_metal}", d.base_wt_pct)
        _set_slot(raw, r, index, f"support:{d.support}", d.support_wt_pct)
        if d.promoter is not None:
            _set_slot(raw, r, index, f"promoter:{d.promoter}", d.promoter_wt_pct)
        _set_slot(raw, r, index, f"prep:{d.prep_method}", 1.0)
        raw[r, index["cond:temperature_c"]] = d.temperature_c
        raw[r, index["cond:y_co"]] = d.feed.y_co
        raw[r, index["cond:y_h2o"]] = d.feed.y_h2o
        raw[r, index["cond:y_co2"]] = d.feed.y_co2
        raw[r, index["cond:y_h2"]] = d.feed.y_h2
        raw[r, index["cond:y_n2"]] = d.feed.y_n2
        raw[r, index["cond:time_on_stream_h"]] = d.time_on_stream_h
        raw[r, index["cond:w_f_ratio"]] = d.w_f_ratio
    return (raw - bundle.mean) / bundle.std


def _set_slot(raw, row, index, name, value):
    col = index.get(name)
    if col is None:
        raise UnknownCatalogId(f"no schema slot for {name!r}")
    raw[row, col] = value


# --- inference ---------------------------------------------------------------

def sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def member_logits(x: np.ndarray, bundle: ModelBundle) -> np.ndarray:
    """(members, n) raw logits for a batch of encoded designs."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    out = np.empty((len(bundle.members), x.shape[0]))
    for m, layers in enumerate(bundle.members):
        weights = [l.weights for l in layers]
        biases = [l.bias for l in layers]
        relu = [1 if l.activation == "relu" else 0 for l in layers]
        out[m] = _kernels.mlp_forward(x, weights, biases, relu)[:, 0]
    return out


def predict(design: CatalystDesign, bundle: ModelBundle) -> Prediction:
    """Theory-clamped conversion prediction for one design."""
    x = encode(design, bundle)
    z = member_logits(x, bundle)[:, 0]
    if not np.all(np.isfinite(z)):
        raise NonFiniteActivation("ensemble produced a non-finite logit")
    eq = thermo.equilibrium_conversion(
        design.feed, thermo.celsius_to_kelvin(design.temperature_c))
    x_eq_pct = 100.0 * eq.x_eq
    conversions = x_eq_pct * sigmoid(z)
    return Prediction(conversion=float(np.mean(conversions)),
                      uncertainty=float(np.std(conversions)),
                      x_eq=x_eq_pct)


def predict_batch(designs: list[CatalystDesign], bundle: ModelBundle) -> list[Prediction]:
    """Vectorized predict() for the optimizer hot path."""
    if not designs:
        return []
    x = encode_batch(designs, bundle)
    z = member_logits(x, bundle)
    t_kelvin = np.array([thermo.celsius_to_kelvin(d.temperature_c) for d in designs])
    x_eq = thermo.equilibrium_conversion_batch(
        t_kelvin,
        np.array([d.feed.y_co for d in designs]),
        np.array([d.feed.y_h2o for d in designs]),
        np.array([d.feed.y_co2 for d in designs]),
        np.array([d.feed.y_h2 for d in designs]),
    )
    x_eq_pct = 100.0 * x_eq
    conversions = x_eq_pct[None, :] * sigmoid(z)
    mean = np.mean(conversions, axis=0)
    std = np.std(conversions, axis=0)
    finite = np.all(np.isfinite(z), axis=0)
    out = []
    for i in range(len(designs)):
        if not finite[i]:
            raise NonFiniteActivation("ensemble produced a non-finite logit")
        out.append(Prediction(conversion=float(mean[i]), uncertainty=float(std[i]),
                              x_eq=float(x_eq_pct[i])))
    return out


# --- bundle persistence --------------------------------------------------------

def _encode_blob(arr: np.ndarray) -> str:
    return base64.b64encode(np.ascontiguousarray(arr, dtype="<f8").tobytes()).decode()


def _decode_blob(blob: str, shape: tuple) -> np.ndarray:
    raw = base64.b64decode(blob.encode())
    expected = int(np.prod(shape)) * 8
    if len(raw) != expected:
        raise FormatError(f"weight blob holds {len(raw)} bytes, expected {expected}")
    return np.frombuffer(raw, dtype="<f8").reshape(shape).copy()


def save_bundle(bundle: ModelBundle, path: str | Path) -> None:
    doc = {
        "format_version": 1,
        "feature_schema": list(bundle.feature_schema),
        "normalization": {
            "mean": _encode_blob(bundle.mean),
            "std": _encode_blob(bundle.std),
        },
        "ensemble": [
            [
                {
                    "rows": int(l.weights.shape[0]),
                    "cols": int(l.weights.shape[1]),
                    "weights": _encode_blob(l.weights),
                    "bias": _encode_blob(l.bias),
                    "activation": l.activation,
                }
                for l in layers
            ]
            for layers in bundle.members
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=1), encoding="utf-8")


def load_bundle(path: str | Path) -> ModelBundle:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise FormatError(f"bundle is not valid JSON: {exc}") from None
    try:
        if doc.get("format_version") != 1:
            raise FormatError(f"unsupported bundle version {doc.get('format_version')!r}")
        schema = tuple(doc["feature_schema"])
        n = len(schema)
        mean = _decode_blob(doc["normalization"]["mean"], (n,))
        std = _decode_blob(doc["normalization"]["std"], (n,))
        members = []
        for layers_doc in doc["ensemble"]:
            layers = []
            for ld in layers_doc:
                shape = (int(ld["rows"]), int(ld["cols"]))
                layers.append(Layer(weights=_decode_blob(ld["weights"], shape),
                                    bias=_decode_blob(ld["bias"], (shape[0],)),
                                    activation=ld["activation"]))
            members.append(tuple(layers))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bundle is missing required keys: {exc}") from None
    return ModelBundle(feature_schema=schema, mean=mean, std=std,
                       members=tuple(members))
