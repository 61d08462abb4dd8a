#!/usr/bin/env python3
"""Generate the committed reference model bundle.

The true trained weights are not published, so the packaged bundle is a
fixed-seed stand-in with the right shape: a 5-member ensemble of small
dense networks over the catalog-derived 93-slot feature schema. Rerunning
this script reproduces src/acewgs/data/reference.bundle.json bit for bit.
"""

from pathlib import Path

import numpy as np

from acewgs.catalog import Catalog
from acewgs.surrogate import CONDITION_SLOTS, Layer, ModelBundle, save_bundle

SEED = 20250811
MEMBERS = 5
HIDDEN = (32, 16)

# Normalization for condition slots: plausible operating-scale means/stds.
COND_NORM = {
    "cond:temperature_c": (275.0, 75.0),
    "cond:y_co": (0.08, 0.08),
    "cond:y_h2o": (0.2, 0.15),
    "cond:y_co2": (0.06, 0.06),
    "cond:y_h2": (0.1, 0.12),
    "cond:y_n2": (0.55, 0.25),
    "cond:time_on_stream_h": (12.0, 20.0),
    "cond:w_f_ratio": (60.0, 90.0),
}


def build_schema(catalog: Catalog) -> list[str]:
    schema = []
    schema += [f"base:{i}" for i in catalog.base_metals]
    schema += [f"support:{i}" for i in catalog.supports]
    schema += [f"promoter:{i}" for i in catalog.promoters]
    schema += [f"prep:{i}" for i in catalog.prep_methods]
    schema += list(CONDITION_SLOTS)
    return schema


def build_bundle() -> ModelBundle:
    catalog = Catalog.load()
    schema = build_schema(catalog)
    n = len(schema)
    mean = np.zeros(n)
    std = np.ones(n)
    for i, name in enumerate(schema):
        if name.startswith(("base:", "support:", "promoter:")):
            std[i] = 10.0   # wt% scale
        elif name in COND_NORM:
            mean[i], std[i] = COND_NORM[name]

    rng = np.random.default_rng(SEED)
    members = []
    sizes = (n,) + HIDDEN + (1,)
    for _ in range(MEMBERS):
        layers = []
        for li in range(len(sizes) - 1):
            fan_in, fan_out = sizes[li], sizes[li + 1]
            w = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_out, fan_in))
            b = rng.normal(0.0, 0.1, size=fan_out)
            act = "relu" if li < len(sizes) - 2 else "linear"
            layers.append(Layer(weights=w, bias=b, activation=act))
        members.append(tuple(layers))
    return ModelBundle(feature_schema=tuple(schema), mean=mean, std=std,
                       members=tuple(members))


def main():
    out = Path(__file__).parent.parent / "src" / "acewgs" / "data" / "reference.bundle.json"
    bundle = build_bundle()
    save_bundle(bundle, out)
    print(f"wrote {out} ({out.stat().st_size} bytes, "
          f"{len(bundle.feature_schema)} features, {len(bundle.members)} members)")


if __name__ == "__main__":
    main()
