"""Complete intersections in products of projective spaces, and the Fano catalog.

Smoothness and transversality of the complete intersections are assumed
throughout, never checked.  The catalog stores tabulated invariants for every
entry; where an entry carries a complete-intersection model, the invariants
can be recomputed by adjunction and compared (:func:`verify_entry`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence, Union

import jsonschema

from .chern_ring import (
    AmbientProduct,
    CohomologyClass,
    integrate,
    invert_unit,
    total_chern_ambient,
)

__all__ = [
    "CatalogEntry",
    "CatalogError",
    "CompleteIntersection",
    "DivisorClass",
    "Verification",
    "ci_anticanonical",
    "ci_euler_char",
    "ci_integrate",
    "ci_total_chern",
    "default_catalog",
    "dump_catalog",
    "load_catalog",
    "parse_catalog",
    "verify_entry",
]


@dataclass(frozen=True)
class DivisorClass:
    multidegree: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "multidegree", tuple(int(d) for d in self.multidegree))

    def __len__(self):
        return len(self.multidegree)

    def __iter__(self):
        return iter(self.multidegree)

    @property
    def is_ample(self) -> bool:
        return all(d > 0 for d in self.multidegree)

    def scale(self, k: int) -> "DivisorClass":
        return DivisorClass(tuple(k * d for d in self.multidegree))

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        if len(other) != len(self):
            raise ValueError("divisor classes of different lengths")
        return DivisorClass(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + other.scale(-1)

    def to_class(self, ambient: AmbientProduct) -> CohomologyClass:
        return ambient.linear(self.multidegree)

    def __str__(self):
        return "(" + ",".join(str(d) for d in self.multidegree) + ")"


def _as_divisor(d) -> DivisorClass:
    return d if isinstance(d, DivisorClass) else DivisorClass(tuple(d))


@dataclass(frozen=True)
class CompleteIntersection:
    ambient: AmbientProduct
    divisors: tuple[DivisorClass, ...] = ()

    def __post_init__(self):
        amb = self.ambient
        if not isinstance(amb, AmbientProduct):
            amb = AmbientProduct(tuple(amb))
            object.__setattr__(self, "ambient", amb)
        divs = tuple(_as_divisor(d) for d in self.divisors)
        for d in divs:
            if len(d) != amb.rank:
                raise ValueError(
                    f"divisor {d} has {len(d)} entries but the ambient has {amb.rank} factors"
                )
        object.__setattr__(self, "divisors", divs)
        if self.dim < 1:
            raise ValueError(
                f"{len(divs)} divisor(s) in an ambient of dimension {amb.dim} leave no variety"
            )

    @classmethod
    def of(cls, ambient: Sequence[int], *divisors: Sequence[int]) -> "CompleteIntersection":
        return cls(AmbientProduct(tuple(ambient)), tuple(DivisorClass(tuple(d)) for d in divisors))

    @property
    def dim(self) -> int:
        return self.ambient.dim - len(self.divisors)

    def fundamental(self) -> CohomologyClass:
        """Ambient class Poincare dual to X: the product of its divisor classes."""
        cls = self.ambient.one()
        for d in self.divisors:
            cls = cls * d.to_class(self.ambient)
        return cls

    def __str__(self):
        if not self.divisors:
            return str(self.ambient)
        return f"{' + '.join(str(d) for d in self.divisors)} in {self.ambient}"


def ci_total_chern(X: CompleteIntersection) -> CohomologyClass:
    """c(TX) = c(TM) / prod_j (1 + delta_j), represented in the ambient ring."""
    c = total_chern_ambient(X.ambient)
    for d in X.divisors:
        c = c * invert_unit(1 + d.to_class(X.ambient))
    return c


def ci_integrate(X: CompleteIntersection, c: CohomologyClass) -> int:
    if c.ambient != X.ambient:
        raise ValueError(f"class lives on {c.ambient}, variety on {X.ambient}")
    return integrate(c * X.fundamental())


def ci_euler_char(X: CompleteIntersection) -> int:
    return ci_integrate(X, ci_total_chern(X).homogeneous_part(X.dim))


def ci_anticanonical(X: CompleteIntersection) -> DivisorClass:
    c1 = DivisorClass(tuple(n + 1 for n in X.ambient.factor_dims))
    for d in X.divisors:
        c1 = c1 - d
    return c1


# --- catalog ---------------------------------------------------------------

class CatalogError(ValueError):
    """Schema or invariant violation in a catalog file."""


_CI_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["ambient", "divisors"],
    "properties": {
        "ambient": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}},
        "divisors": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
    },
}

CATALOG_SCHEMA = {
    "type": "array",
    "items": {
        "type": "object",
        "additionalProperties": False,
        "required": [
            "id", "description", "dim_c", "picard_rank", "index",
            "deg_a3", "euler", "very_ample_generator", "provenance",
        ],
        "properties": {
            "id": {"type": "string", "minLength": 1},
            "description": {"type": "string"},
            "dim_c": {"type": "integer", "minimum": 1},
            "picard_rank": {"type": "integer", "minimum": 1},
            "index": {"type": "integer"},
            "deg_a3": {"type": "integer"},
            "euler": {"type": "integer"},
            "very_ample_generator": {"type": "boolean"},
            "ci_model": _CI_SCHEMA,
            "polarization": {"type": "array", "items": {"type": "integer"}},
            "provenance": {"type": "string"},
        },
    },
}


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    description: str
    dim_c: int
    picard_rank: int
    index: int
    deg_a3: int
    euler: int
    very_ample_generator: bool
    provenance: str = ""
    ci_model: Optional[CompleteIntersection] = None
    polarization: Optional[DivisorClass] = None

    def __post_init__(self):
        if self.index < 1:
            raise CatalogError(f"{self.id}: index must be >= 1, got {self.index}")
        if self.deg_a3 <= 0:
            raise CatalogError(f"{self.id}: deg_a3 must be positive, got {self.deg_a3}")
        if self.ci_model is not None:
            X = self.ci_model
            if X.dim != self.dim_c:
                raise CatalogError(
                    f"{self.id}: ci_model has dimension {X.dim}, entry says {self.dim_c}"
                )
            if self.polarization is None:
                raise CatalogError(f"{self.id}: ci_model given without polarization")
            if len(self.polarization) != X.ambient.rank:
                raise CatalogError(f"{self.id}: polarization length does not match ambient")
            anti = ci_anticanonical(X)
            if anti != self.polarization.scale(self.index):
                raise CatalogError(
                    f"{self.id}: anticanonical class {anti} != index {self.index} "
                    f"x polarization {self.polarization}"
                )

    @property
    def sort_key(self):
        return _id_key(self.id)

    @property
    def anticanonical(self) -> Optional[DivisorClass]:
        return None if self.ci_model is None else ci_anticanonical(self.ci_model)

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "description": self.description,
            "dim_c": self.dim_c,
            "picard_rank": self.picard_rank,
            "index": self.index,
            "deg_a3": self.deg_a3,
            "euler": self.euler,
            "very_ample_generator": self.very_ample_generator,
        }
        if self.ci_model is not None:
            out["ci_model"] = {
                "ambient": list(self.ci_model.ambient.factor_dims),
                "divisors": [list(d) for d in self.ci_model.divisors],
            }
        if self.polarization is not None:
            out["polarization"] = list(self.polarization)
        out["provenance"] = self.provenance
        return out


def _id_key(ident: str):
    parts = []
    for p in ident.split("-"):
        parts.append((0, int(p), "") if p.isdigit() else (1, 0, p))
    return tuple(parts)


def _entry_from_json(obj: dict, where: str) -> CatalogEntry:
    ci = None
    if "ci_model" in obj:
        m = obj["ci_model"]
        try:
            ci = CompleteIntersection.of(m["ambient"], *m["divisors"])
        except ValueError as exc:
            raise CatalogError(f"{where}.ci_model: {exc}") from None
    pol = DivisorClass(tuple(obj["polarization"])) if "polarization" in obj else None
    try:
        return CatalogEntry(
            id=obj["id"],
            description=obj["description"],
            dim_c=obj["dim_c"],
            picard_rank=obj["picard_rank"],
            index=obj["index"],
            deg_a3=obj["deg_a3"],
            euler=obj["euler"],
            very_ample_generator=obj["very_ample_generator"],
            provenance=obj["provenance"],
            ci_model=ci,
            polarization=pol,
        )
    except CatalogError as exc:
        raise CatalogError(f"{where}: {exc}") from None


def parse_catalog(data) -> list[CatalogEntry]:
    """Validate already-decoded JSON data and build entries."""
    validator = jsonschema.Draft202012Validator(CATALOG_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path)
        raise CatalogError(f"{path}: {err.message}")
    entries = []
    seen = set()
    for i, obj in enumerate(data):
        if obj["id"] in seen:
            raise CatalogError(f"$[{i}].id: duplicate id {obj['id']!r}")
        seen.add(obj["id"])
        entries.append(_entry_from_json(obj, f"$[{i}]"))
    return entries


def load_catalog(path: Union[str, Path]) -> list[CatalogEntry]:
    """Read and validate a catalog file.  An empty file is an empty catalog."""
    text = Path(path).read_text(encoding="utf-8")
    if not text.strip():
        return []
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{path}: invalid JSON: {exc}") from None
    return parse_catalog(data)


def default_catalog() -> list[CatalogEntry]:
    """The bundled catalog of Fano 3-folds with small anticanonical genus."""
    ref = resources.files("pencilpairs").joinpath("data/fano_catalog.json")
    return parse_catalog(json.loads(ref.read_text(encoding="utf-8")))


def dump_catalog(entries: Sequence[CatalogEntry]) -> str:
    return json.dumps([e.to_json() for e in entries], indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class Verification:
    id: str
    checkable: bool
    tabulated: dict = field(default_factory=dict)
    computed: dict = field(default_factory=dict)

    @property
    def mismatches(self) -> list[str]:
        return [k for k in self.computed if self.computed[k] != self.tabulated.get(k)]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        if not self.checkable:
            return (
                f"not checkable; tabulated: χ={self.tabulated['euler']}, "
                f"deg {self.tabulated['deg_a3']}"
            )
        if self.ok:
            return "all match"
        return "mismatch: " + ", ".join(
            f"{k} computed {self.computed[k]} vs tabulated {self.tabulated[k]}"
            for k in self.mismatches
        )


def verify_entry(e: CatalogEntry) -> Verification:
    """Recompute deg_a3, euler and the index relation from the CI model, if any."""
    tab = {"deg_a3": e.deg_a3, "euler": e.euler}
    if e.ci_model is None:
        return Verification(e.id, False, tab, {})
    X = e.ci_model
    anti = ci_anticanonical(X)
    deg = ci_integrate(X, anti.to_class(X.ambient) ** X.dim)
    tab["index_relation"] = True
    computed = {
        "deg_a3": deg,
        "euler": ci_euler_char(X),
        "index_relation": e.polarization is not None and anti == e.polarization.scale(e.index),
    }
    return Verification(e.id, True, tab, computed)
