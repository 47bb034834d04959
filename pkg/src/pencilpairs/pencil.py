"""Counting formulas for Lefschetz pencils.

Every count here is an exact integer.  The alternating sum in
:func:`crit_count_master` is the reference against which every specialized
closed form is checked; :class:`PencilInvariants` enforces it on construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .chern_ring import CohomologyClass, invert_unit
from .varieties import CompleteIntersection, DivisorClass, ci_integrate, ci_total_chern

__all__ = [
    "K3_MODELS",
    "PencilInvariants",
    "PolarizedSurface",
    "RuledSurfaceSpec",
    "base_locus_euler",
    "cp2_pencil_invariants",
    "crit_count_chern",
    "crit_count_master",
    "divisor_euler",
    "fano_crit_count",
    "fano_pencil_invariants",
    "fillings_report",
    "k3_genus",
    "model_for_genus",
    "pencil_invariants",
    "ruled_pencil_invariants",
    "surface_pencil_invariants",
]


def crit_count_master(chi_X: int, chi_Z: int, chi_B: int, dim_c: int) -> int:
    """#Crit = (-1)^dim (chi(X) - 2 chi(Z) + chi(B))."""
    if dim_c not in (2, 3):
        raise ValueError(f"unsupported dimension {dim_c}; only 2 and 3 are handled")
    return (-1) ** dim_c * (chi_X - 2 * chi_Z + chi_B)


@dataclass(frozen=True)
class PencilInvariants:
    dim_c: int
    chi_X: int
    chi_Z: int
    chi_B: int
    crit: int
    fiber_genus: Optional[int] = None
    punctures: Optional[int] = None

    def __post_init__(self):
        expected = crit_count_master(self.chi_X, self.chi_Z, self.chi_B, self.dim_c)
        if self.crit != expected:
            raise ValueError(f"crit={self.crit} disagrees with the alternating sum {expected}")
        if self.dim_c == 2:
            if self.chi_B < 0:
                raise ValueError(f"a surface pencil has chi_B = #B >= 0, got {self.chi_B}")
            if self.chi_Z % 2:
                raise ValueError(f"chi of a curve is even, got {self.chi_Z}")
            if self.punctures != self.chi_B:
                raise ValueError("punctures must equal #B")
            if self.fiber_genus != 1 - self.chi_Z // 2:
                raise ValueError("fiber genus must equal 1 - chi_Z/2")

    @property
    def boundary_twists(self) -> Optional[int]:
        return self.punctures

    def as_dict(self) -> dict:
        return {
            "dim_c": self.dim_c,
            "chi_X": self.chi_X,
            "chi_Z": self.chi_Z,
            "chi_B": self.chi_B,
            "crit": self.crit,
            "fiber_genus": self.fiber_genus,
            "punctures": self.punctures,
        }


@dataclass(frozen=True)
class PolarizedSurface:
    """A polarized surface known only through its numbers.

    ``chi`` is chi(X) = int c2, ``l_sq`` is int c1(L)^2 and ``l_k`` is
    int c1(L) c1(X).
    """

    chi: int
    l_sq: int
    l_k: int


Variety = Union[CompleteIntersection, PolarizedSurface]


def _check_ample(X: CompleteIntersection, L: DivisorClass):
    L = L if isinstance(L, DivisorClass) else DivisorClass(tuple(L))
    if len(L) != X.ambient.rank:
        raise ValueError(f"bundle {L} does not match ambient {X.ambient}")
    if not L.is_ample:
        raise ValueError(f"bundle {L} is not ample")
    if X.dim not in (2, 3):
        raise ValueError(f"unsupported dimension {X.dim}; only 2 and 3 are handled")
    return L


def _chern_data(X: CompleteIntersection, L: DivisorClass):
    c = ci_total_chern(X)
    return c, L.to_class(X.ambient)


def divisor_euler(X: Variety, L: Optional[DivisorClass] = None) -> int:
    """chi of a smooth member Z of |L|, by adjunction c(TZ) = c(TX)/(1 + L)."""
    if isinstance(X, PolarizedSurface):
        return X.l_k - X.l_sq
    L = _check_ample(X, L)
    c, l = _chern_data(X, L)
    cz = (c * invert_unit(1 + l)).homogeneous_part(X.dim - 1)
    return ci_integrate(X, l * cz)


def base_locus_euler(X: Variety, L: Optional[DivisorClass] = None) -> int:
    """chi of the base locus B = Z0 ∩ Z1; for surfaces this is #B."""
    if isinstance(X, PolarizedSurface):
        return X.l_sq
    L = _check_ample(X, L)
    c, l = _chern_data(X, L)
    cb = (c * invert_unit((1 + l) ** 2)).homogeneous_part(X.dim - 2)
    return ci_integrate(X, l * l * cb)


def crit_count_chern(X: Variety, L: Optional[DivisorClass] = None) -> int:
    """#Crit written directly as a Chern number of (X, L).

    dim 2:  int c2 + (3 c1(L) - 2 c1(X)) c1(L)
    dim 3:  -chi(X) + int 2 c2 L - 3 c1 L^2 + 4 L^3
    """
    if isinstance(X, PolarizedSurface):
        return X.chi + 3 * X.l_sq - 2 * X.l_k
    L = _check_ample(X, L)
    c, l = _chern_data(X, L)
    c1, c2 = c.homogeneous_part(1), c.homogeneous_part(2)
    if X.dim == 2:
        return ci_integrate(X, c2 + (3 * l - 2 * c1) * l)
    chi = ci_integrate(X, c.homogeneous_part(3))
    return -chi + ci_integrate(X, 2 * c2 * l - 3 * c1 * l * l + 4 * l * l * l)


def pencil_invariants(X: CompleteIntersection, L: DivisorClass) -> PencilInvariants:
    L = _check_ample(X, L)
    c = ci_total_chern(X)
    chi_X = ci_integrate(X, c.homogeneous_part(X.dim))
    chi_Z = divisor_euler(X, L)
    chi_B = base_locus_euler(X, L)
    crit = crit_count_master(chi_X, chi_Z, chi_B, X.dim)
    if X.dim == 2:
        return PencilInvariants(2, chi_X, chi_Z, chi_B, crit, 1 - chi_Z // 2, chi_B)
    return PencilInvariants(3, chi_X, chi_Z, chi_B, crit)


def surface_pencil_invariants(S: PolarizedSurface) -> PencilInvariants:
    chi_Z = divisor_euler(S)
    chi_B = base_locus_euler(S)
    return PencilInvariants(
        2, S.chi, chi_Z, chi_B, crit_count_master(S.chi, chi_Z, chi_B, 2), 1 - chi_Z // 2, chi_B
    )


# --- Fano 3-folds with L = k * anticanonical -----------------------------

def fano_crit_count(chi: int, deg_a3: int, k: int) -> int:
    """Twist count of the pencil for A^k on a Fano 3-fold, using int c1 c2 = 24."""
    if deg_a3 <= 0:
        raise ValueError("deg_a3 must be positive")
    if k < 1:
        raise ValueError("k must be positive")
    return -chi + 48 * k + k * k * (4 * k - 3) * deg_a3


def fano_pencil_invariants(chi: int, deg_a3: int, k: int) -> PencilInvariants:
    """Full invariants for A^k, from (chi, deg_a3) alone."""
    chi_Z = 24 * k - k * k * deg_a3 + k**3 * deg_a3
    chi_B = k * k * deg_a3 - 2 * k**3 * deg_a3
    return PencilInvariants(3, chi, chi_Z, chi_B, crit_count_master(chi, chi_Z, chi_B, 3))


def index_crit_count(chi: int, index: int, deg_a3: int, l: int) -> int:
    """Twist count for L^l where L is the index generator (A = L^index).

    Uses int c2 L = 24/index, int c1 L^2 = deg/index^2, int L^3 = deg/index^3;
    each must be integral.
    """
    c2l, r1 = divmod(24, index)
    c1ll, r2 = divmod(deg_a3, index**2)
    lll, r3 = divmod(deg_a3, index**3)
    if r1 or r2 or r3:
        raise ValueError(f"index {index} and degree {deg_a3} give non-integral Chern numbers")
    return -chi + 2 * l * c2l - 3 * l * l * c1ll + 4 * l**3 * lll


def k3_genus(index: int, deg_a3: int) -> int:
    """Genus of the polarized anticanonical K3: 1 + deg / (2 index^2)."""
    q, r = divmod(deg_a3, 2 * index * index)
    if r:
        raise ValueError(
            f"genus 1 + {deg_a3}/(2*{index}^2) is not an integer; catalog data inconsistent"
        )
    return 1 + q


# genus -> (ambient description, degree vector, annotation)
K3_MODELS: dict[int, tuple[str, tuple[int, ...], str]] = {
    3: ("CP⁴", (1, 4), ""),
    4: ("CP⁵", (1, 2, 3), ""),
    5: ("CP⁶", (1, 2, 2, 2), "four conditions cutting a surface force a 6-dimensional ambient, not CP⁵"),
    6: ("G(2,5) ⊂ CP⁹", (1, 1, 1, 2), ""),
    7: (
        "OG(5,10) ⊂ CP¹⁵",
        (1,) * 8,
        "a 10-dimensional ambient needs eight conditions, not five",
    ),
    8: ("G(2,6) ⊂ CP¹⁴", (1,) * 6, ""),
    9: ("LG(3,6) ⊂ CP¹³", (1,) * 4, ""),
    10: ("G₂/P ⊂ CP¹³", (1,) * 3, ""),
}


def model_for_genus(g: int) -> tuple[str, tuple[int, ...]]:
    if g not in K3_MODELS:
        raise ValueError(f"no projective model recorded for genus {g} (need 3 <= g <= 10)")
    ambient, degrees, _ = K3_MODELS[g]
    return ambient, degrees


# --- surface families ---------------------------------------------------

@dataclass(frozen=True)
class RuledSurfaceSpec:
    """X_{chi,d} = P(C + l) over a curve of Euler characteristic chi, deg l = -d,
    polarized by the k-th power of the tautological bundle."""

    chi: int
    d: int
    k: int = 1

    def __post_init__(self):
        if self.chi > 2 or self.chi % 2:
            raise ValueError(f"chi={self.chi} is not the Euler characteristic of a closed curve")
        if self.k < 1:
            raise ValueError("k must be positive")
        # deg >= 2g + 1 = 3 - chi makes the dual line bundle very ample
        if self.d < max(1, 3 - self.chi):
            raise ValueError(f"d={self.d} too small for chi={self.chi}; need d >= {3 - self.chi}")

    def surface(self) -> PolarizedSurface:
        return PolarizedSurface(
            chi=2 * self.chi, l_sq=self.d * self.k**2, l_k=self.k * (self.chi + self.d)
        )


def ruled_pencil_invariants(s: RuledSurfaceSpec) -> PencilInvariants:
    chi, d, k = s.chi, s.d, s.k
    chi_Z = k * (chi + d - d * k)
    return PencilInvariants(
        dim_c=2,
        chi_X=2 * chi,
        chi_Z=chi_Z,
        chi_B=d * k * k,
        crit=3 * d * k * k + 2 * (chi - k * d - k * chi),
        fiber_genus=1 - chi_Z // 2,
        punctures=d * k * k,
    )


def cp2_pencil_invariants(d: int) -> PencilInvariants:
    if d < 1:
        raise ValueError("degree must be positive")
    return PencilInvariants(
        dim_c=2,
        chi_X=3,
        chi_Z=3 * d - d * d,
        chi_B=d * d,
        crit=3 * (d - 1) ** 2,
        fiber_genus=(d - 1) * (d - 2) // 2,
        punctures=d * d,
    )


def ruled_filling_euler(chi: int, d: int, k: int) -> int:
    """chi(X_{chi,d} minus a divisor of L^k)."""
    return 2 * chi - k * chi - k * d + d * k * k


@dataclass(frozen=True)
class FillingsReport:
    n: int
    values: tuple[tuple[str, int], ...]

    @property
    def distinct(self) -> bool:
        vals = [v for _, v in self.values]
        return len(set(vals)) == len(vals)


def fillings_report(N: int) -> FillingsReport:
    """Euler characteristics of the fillings of the boundary of a degree-2^N curve
    neighbourhood in CP^2: one ruled filling per factorization 2^N = 2^i * 2^(N-i),
    plus the complement of the curve itself."""
    if N < 2:
        raise ValueError("N must be at least 2")
    values = []
    for i in range(1, N):
        m, k = 2**i, 2 ** (N - i)
        values.append((f"i={i}", ruled_filling_euler(m * (3 - m), m * m, k)))
    D = 2**N
    # chi(CP^2) - chi(smooth degree-D curve)
    values.append(("CP2", 3 - (3 * D - D * D)))
    return FillingsReport(N, tuple(values))
