"""Dehn twists acting on middle homology, and formal words in them.

A configuration is a lattice H_n(F) with its intersection pairing plus a set
of sphere classes.  Twists act by the Picard-Lefschetz formula

    tau_L(h) = h + eps_n (h . v_L) v_L,   eps_n = (-1)^((n+1)(n+2)/2).

Sign convention for self-pairings: 0 for odd n and (-1)^(n(n+1)/2) * 2 for
even n, so that tau_L(v_L) = (-1)^(n+1) v_L in every dimension.  Words act
right to left: "a b c" is tau_a tau_b tau_c, applying tau_c first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np
import sympy

__all__ = [
    "CobordismCombination",
    "ConfigError",
    "IntersectionLattice",
    "Move",
    "MoveError",
    "SphereClass",
    "SphereConfiguration",
    "TwistWord",
    "apply_move",
    "cobordism_chi",
    "dehn_twist_matrix",
    "int_det",
    "load_config",
    "p_of_word",
    "parity_check",
    "parse_word",
    "tau_of_word",
    "twist_length_combination",
]

RELATIONS = ("disjoint", "one_point", "unknown")


class ConfigError(ValueError):
    pass


class MoveError(ValueError):
    pass


def twist_sign(n: int) -> int:
    return (-1) ** ((n + 1) * (n + 2) // 2)


def sphere_self_pairing(n: int) -> int:
    return 0 if n % 2 else (-1) ** (n * (n + 1) // 2) * 2


def _int_matrix(rows) -> np.ndarray:
    rows = [[int(x) for x in row] for row in rows]
    if not rows:
        return np.zeros((0, 0), dtype=object)
    if len({len(r) for r in rows}) != 1:
        raise ConfigError("gram matrix rows have different lengths")
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    out[:, :] = rows
    return out


@dataclass(frozen=True, eq=False)
class IntersectionLattice:
    n: int
    gram: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("n must be positive")
        g = _int_matrix([list(r) for r in self.gram])
        if g.shape[0] != g.shape[1]:
            raise ConfigError(f"gram matrix must be square, got shape {g.shape}")
        sym = g.T if self.n % 2 == 0 else -g.T
        if not (g == sym).all():
            kind = "symmetric" if self.n % 2 == 0 else "antisymmetric"
            raise ConfigError(f"gram matrix must be {kind} for n={self.n}")
        g.setflags(write=False)
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return self.gram.shape[0]

    def pair(self, h, v) -> int:
        return int(np.dot(np.asarray(h, dtype=object), self.gram.dot(np.asarray(v, dtype=object))))

    def identity(self) -> np.ndarray:
        return np.identity(self.rank, dtype=int).astype(object)


@dataclass(frozen=True)
class SphereClass:
    id: str
    v: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))


def _rel_key(a: str, b: str) -> frozenset:
    return frozenset((a, b))


@dataclass(frozen=True, eq=False)
class SphereConfiguration:
    lattice: IntersectionLattice
    spheres: tuple[SphereClass, ...]
    relations: Mapping[frozenset, str] = field(default_factory=dict)

    def __post_init__(self):
        spheres = tuple(self.spheres)
        ids = [s.id for s in spheres]
        if len(set(ids)) != len(ids):
            raise ConfigError("duplicate sphere ids")
        for s in spheres:
            if len(s.v) != self.lattice.rank:
                raise ConfigError(f"sphere {s.id} has length {len(s.v)}, lattice rank {self.lattice.rank}")
        rels = {}
        for key, rel in dict(self.relations).items():
            key = frozenset(key)
            if rel not in RELATIONS:
                raise ConfigError(f"unknown relation {rel!r}")
            if len(key) != 2 or not key <= set(ids):
                raise ConfigError(f"relation refers to unknown or repeated ids {sorted(key)}")
            a, b = sorted(key)
            p = self.lattice.pair(self.by_id_in(spheres, a).v, self.by_id_in(spheres, b).v)
            if rel == "disjoint" and p != 0:
                raise ConfigError(f"{a} and {b} marked disjoint but pair to {p}")
            if rel == "one_point" and abs(p) != 1:
                raise ConfigError(f"{a} and {b} marked one_point but pair to {p}")
            rels[key] = rel
        object.__setattr__(self, "spheres", spheres)
        object.__setattr__(self, "relations", rels)

    @staticmethod
    def by_id_in(spheres, ident):
        for s in spheres:
            if s.id == ident:
                return s
        raise KeyError(ident)

    def sphere(self, ident: str) -> SphereClass:
        try:
            return self.by_id_in(self.spheres, ident)
        except KeyError:
            raise ConfigError(f"unknown sphere id {ident!r}") from None

    def relation(self, a: str, b: str) -> str:
        if a == b:
            return "same"
        return self.relations.get(_rel_key(a, b), "unknown")

    @property
    def n(self) -> int:
        return self.lattice.n

    def with_sphere(self, s: SphereClass) -> "SphereConfiguration":
        return replace(self, spheres=self.spheres + (s,))

    def fresh_id(self, base: str) -> str:
        taken = {s.id for s in self.spheres}
        if base not in taken:
            return base
        i = 2
        while f"{base}#{i}" in taken:
            i += 1
        return f"{base}#{i}"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "gram": [[int(x) for x in row] for row in self.lattice.gram],
            "spheres": [{"id": s.id, "v": list(s.v)} for s in self.spheres],
            "relations": [
                {"a": a, "b": b, "rel": rel}
                for a, b, rel in sorted((*sorted(k), r) for k, r in self.relations.items())
            ],
        }


def config_from_json(data: dict) -> SphereConfiguration:
    unknown = set(data) - {"n", "gram", "spheres", "relations"}
    if unknown:
        raise ConfigError(f"unknown field(s) {sorted(unknown)}")
    try:
        lattice = IntersectionLattice(int(data["n"]), data["gram"])
        spheres = tuple(SphereClass(str(s["id"]), tuple(s["v"])) for s in data["spheres"])
        rels = {_rel_key(r["a"], r["b"]): r["rel"] for r in data.get("relations", [])}
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed configuration: missing or bad field {exc}") from None
    return SphereConfiguration(lattice, spheres, rels)


def load_config(path: Union[str, Path]) -> SphereConfiguration:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    return config_from_json(data)


# --- twists --------------------------------------------------------------

def dehn_twist_matrix(config: SphereConfiguration, ident: str, exponent: int = 1) -> np.ndarray:
    """Matrix of tau_L (exponent +1) or its inverse (exponent -1) on H_n(F)."""
    lat = config.lattice
    s = config.sphere(ident)
    v = np.array(s.v, dtype=object)
    self_pair = lat.pair(v, v)
    want = sphere_self_pairing(lat.n)
    if self_pair != want:
        raise ConfigError(
            f"sphere {ident} has self-pairing {self_pair}; n={lat.n} requires {want}"
        )
    eps = twist_sign(lat.n)
    gv = lat.gram.dot(v)
    outer = np.outer(v, gv)
    if exponent == 1:
        return lat.identity() + eps * outer
    if exponent == -1:
        # 1 + eps * self_pair is +-1, so the inverse stays integral
        return lat.identity() - (eps // (1 + eps * self_pair)) * outer
    raise ValueError("exponent must be +1 or -1")


@dataclass(frozen=True)
class TwistWord:
    letters: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        letters = tuple((str(i), int(e)) for i, e in self.letters)
        for _, e in letters:
            if e not in (1, -1):
                raise ValueError("exponents must be +1 or -1")
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return " ".join(i if e == 1 else f"{i}^-1" for i, e in self.letters)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((i, -e) for i, e in reversed(self.letters)))

    def __add__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord(self.letters + other.letters)


def parse_word(text: str) -> TwistWord:
    letters = []
    for tok in text.split():
        if tok.endswith("^-1"):
            ident, e = tok[:-3], -1
        elif tok.endswith("^1"):
            ident, e = tok[:-2], 1
        else:
            ident, e = tok, 1
        if not ident or "^" in ident:
            raise ValueError(f"malformed letter {tok!r}")
        letters.append((ident, e))
    return TwistWord(tuple(letters))


def _word(w: Union[TwistWord, str]) -> TwistWord:
    return parse_word(w) if isinstance(w, str) else w


def tau_of_word(config: SphereConfiguration, w: Union[TwistWord, str]) -> np.ndarray:
    w = _word(w)
    m = config.lattice.identity()
    for ident, e in w.letters:
        m = m.dot(dehn_twist_matrix(config, ident, e))
    return m


def p_of_word(w: Union[TwistWord, str]) -> int:
    return sum(e for _, e in _word(w).letters)


# --- moves ---------------------------------------------------------------

MOVE_KINDS = ("commute", "braid", "slide", "slide_right", "cancel")


@dataclass(frozen=True)
class Move:
    """A rewrite at ``position`` (0-based letter index).

    commute      a b   -> b a             (a, b disjoint)
    braid        a b a -> b a b           (a, b meet once; equal exponents)
    slide        a b   -> c a,  c = tau_a(b)
    slide_right  a b   -> b c,  c = tau_b^-1(a)
    cancel       a a^-1 -> (empty)
    """

    kind: str
    position: int

    def __post_init__(self):
        if self.kind not in MOVE_KINDS:
            raise MoveError(f"unknown move {self.kind!r}; expected one of {', '.join(MOVE_KINDS)}")

    @classmethod
    def parse(cls, text: str) -> "Move":
        kind, _, pos = text.partition(":")
        try:
            return cls(kind, int(pos))
        except ValueError:
            raise MoveError(f"move must look like KIND:POSITION, got {text!r}") from None


def _mint(config: SphereConfiguration, base: str, ident: str, exponent: int, target: str):
    m = dehn_twist_matrix(config, ident, exponent)
    v = m.dot(np.array(config.sphere(target).v, dtype=object))
    new = SphereClass(config.fresh_id(base), tuple(int(x) for x in v))
    return config.with_sphere(new), new.id


def apply_move(
    config: SphereConfiguration, w: Union[TwistWord, str], move: Move
) -> tuple[SphereConfiguration, TwistWord]:
    w = _word(w)
    L = list(w.letters)
    i = move.position
    width = 3 if move.kind == "braid" else 2
    if i < 0 or i + width > len(L):
        raise MoveError(f"{move.kind} needs {width} letters at position {i}; word has {len(L)}")
    for ident, _ in L[i:i + width]:
        config.sphere(ident)

    (a, ea), (b, eb) = L[i], L[i + 1]
    if move.kind == "commute":
        rel = config.relation(a, b)
        if rel != "disjoint":
            raise MoveError(f"relation of {a},{b} is {rel}, commute requires disjoint")
        L[i], L[i + 1] = L[i + 1], L[i]
    elif move.kind == "braid":
        c, ec = L[i + 2]
        if c != a:
            raise MoveError(f"braid needs a pattern a b a, found {a} {b} {c}")
        if not ea == eb == ec:
            raise MoveError("braid needs equal exponents on all three letters")
        rel = config.relation(a, b)
        if rel != "one_point":
            raise MoveError(f"relation is {rel}, braid requires one_point")
        L[i:i + 3] = [(b, ea), (a, ea), (b, ea)]
    elif move.kind == "slide":
        base = f"{a}.{b}" if ea == 1 else f"{a}^-1.{b}"
        config, c = _mint(config, base, a, ea, b)
        L[i:i + 2] = [(c, eb), (a, ea)]
    elif move.kind == "slide_right":
        base = f"{b}^-1.{a}" if eb == 1 else f"{b}.{a}"
        config, c = _mint(config, base, b, -eb, a)
        L[i:i + 2] = [(b, eb), (c, ea)]
    else:
        if a != b or ea != -eb:
            raise MoveError(f"cancel needs a letter next to its inverse, found {a}^{ea} {b}^{eb}")
        del L[i:i + 2]
    return config, TwistWord(tuple(L))


# --- determinant / parity ------------------------------------------------

def int_det(m: np.ndarray) -> int:
    if m.shape[0] == 0:
        return 1
    return int(sympy.Matrix(m.tolist()).det(method="bareiss"))


@dataclass(frozen=True)
class ParityReport:
    det: int
    p: int
    identity: bool
    verdict: str

    @property
    def consistent(self) -> bool:
        return self.verdict != "violation"


def parity_check(config: SphereConfiguration, w: Union[TwistWord, str]) -> ParityReport:
    """Determinant-line check: for even n each twist has determinant -1.

    A word acting trivially on H_n must then have even exponent sum.
    """
    if config.n % 2:
        raise ValueError(f"not applicable: the determinant argument needs n even, got n={config.n}")
    w = _word(w)
    m = tau_of_word(config, w)
    det = int_det(m)
    p = p_of_word(w)
    ident = bool((m == config.lattice.identity()).all())
    if ident and p % 2:
        verdict = "violation"
    elif det == (-1) ** p:
        verdict = "consistent"
    else:
        verdict = "violation"
    return ParityReport(det, p, ident, verdict)


# --- complex cobordism Euler numbers -------------------------------------

@dataclass(frozen=True)
class CobordismCombination:
    """Integer combination of products of complex projective spaces.

    terms: (coefficient, (a1, ..., aj)) stands for coefficient * [CP^a1 x ... x CP^aj].
    """

    terms: tuple[tuple[int, tuple[int, ...]], ...]

    def __post_init__(self):
        terms = tuple((int(c), tuple(int(a) for a in dims)) for c, dims in self.terms)
        for _, dims in terms:
            if any(a < 0 for a in dims):
                raise ValueError("projective space dimensions must be non-negative")
        object.__setattr__(self, "terms", terms)

    @property
    def complex_dims(self) -> set[int]:
        return {sum(d) for _, d in self.terms}


def cobordism_chi(c: CobordismCombination) -> int:
    total = 0
    for coeff, dims in c.terms:
        e = 1
        for a in dims:
            e *= a + 1
        total += coeff * e
    return total


def twist_length_combination(n: int, m: int) -> CobordismCombination:
    """The explicit class with top Chern number +-m in complex dimension n.

    n odd:  m [CP^n] - (m/2) [CP^1 x CP^(n-1)]        (m must be even)
    n even: m(n-1) [CP^n] - (mn/2) [CP^1 x CP^(n-1)]
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if n % 2:
        if m % 2:
            raise ValueError("m must be even when n is odd")
        return CobordismCombination(((m, (n,)), (-(m // 2), (1, n - 1))))
    return CobordismCombination(((m * (n - 1), (n,)), (-(m * n // 2), (1, n - 1))))
