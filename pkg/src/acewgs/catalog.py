"""Design catalog: the categorical vocabulary of the inverse model."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

try:
    import tomllib
except ImportError:  # python 3.10
    import tomli as tomllib

from acewgs.errors import UnknownCatalogId

GROUPS = ("base_metals", "supports", "promoters", "prep_methods")


@dataclass(frozen=True)
class Catalog:
    base_metals: dict
    supports: dict
    promoters: dict
    prep_methods: dict

    @classmethod
    def load(cls, path: str | Path | None = None) -> "Catalog":
        """Load a catalog TOML; defaults to the packaged catalog."""
        if path is None:
            raw = resources.files("acewgs").joinpath("data/catalog.toml").read_bytes()
        else:
            raw = Path(path).read_bytes()
        data = tomllib.loads(raw.decode("utf-8"))
        missing = [g for g in GROUPS if g not in data]
        if missing:
            raise UnknownCatalogId(f"catalog lacks sections: {', '.join(missing)}")
        return cls(**{g: dict(data[g]) for g in GROUPS})

    def group(self, name: str) -> dict:
        return getattr(self, name)

    def require(self, group: str, cat_id: str) -> str:
        """Display name for an id, or UnknownCatalogId."""
        table = self.group(group)
        if cat_id not in table:
            raise UnknownCatalogId(f"{cat_id!r} is not a known entry of {group}")
        return table[cat_id]

    def as_dict(self) -> dict:
        return {g: dict(self.group(g)) for g in GROUPS}
