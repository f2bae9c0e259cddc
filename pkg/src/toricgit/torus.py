"""Torus actions on affine space and their GIT chamber combinatorics.

A torus of rank ``r`` acts on ``N`` coordinates through an integer weight
matrix whose ``j``-th column is the character scaling coordinate ``j``.
Orbits are identified with support sets.  An orbit is semistable for a
character ``chi`` iff some invariant section is nonzero on it, which
happens iff ``chi`` lies in the cone spanned by the supported weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exact import (
    Cone,
    cone_contains,
    cone_intersect,
    feasible,
    is_zero,
    primitive,
    rank,
)


class CertificateFails(Exception):
    """The orbits admit a common polarization, so no obstruction exists."""

    def __init__(self, chi, message=None):
        self.chi = tuple(chi)
        super().__init__(message or f"orbits are simultaneously semistable for chi={self.chi}")


@dataclass(frozen=True)
class TorusAction:
    rank: int
    coords: tuple[str, ...]
    weights: tuple[tuple[int, ...], ...]  # r rows x N columns

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        object.__setattr__(self, "weights", tuple(tuple(int(x) for x in row) for row in self.weights))
        if len(self.weights) != self.rank:
            raise ValueError(f"weight matrix has {len(self.weights)} rows, rank is {self.rank}")
        if any(len(row) != len(self.coords) for row in self.weights):
            raise ValueError("weight matrix column count must equal number of coordinates")
        if len(set(self.coords)) != len(self.coords):
            raise ValueError("coordinate names must be unique")

    @property
    def num_coords(self) -> int:
        return len(self.coords)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.weights)

    def index(self, name: str) -> int:
        try:
            return self.coords.index(name)
        except ValueError:
            raise KeyError(f"unknown coordinate {name!r}") from None

    def orbit(self, *names: str) -> "OrbitClass":
        return OrbitClass(frozenset(self.index(n) for n in names))

    @classmethod
    def from_columns(cls, columns, coords=None):
        columns = [tuple(c) for c in columns]
        r = len(columns[0]) if columns else 0
        if coords is None:
            coords = [f"z{j + 1}" for j in range(len(columns))]
        return cls(r, tuple(coords), tuple(tuple(c[i] for c in columns) for i in range(r)))

    def to_json(self) -> dict:
        return {"rank": self.rank, "coords": list(self.coords),
                "weights": [list(self.column(j)) for j in range(self.num_coords)]}

    @classmethod
    def from_json(cls, data: dict) -> "TorusAction":
        cols = data["weights"]
        r = int(data["rank"])
        if any(len(c) != r for c in cols):
            raise ValueError("each weight entry must list rank-many integers")
        return cls.from_columns(cols, data["coords"])


@dataclass(frozen=True)
class OrbitClass:
    support: frozenset

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(int(i) for i in self.support))

    def names(self, action: TorusAction) -> list[str]:
        return [action.coords[j] for j in sorted(self.support)]

    def to_json(self, action: TorusAction) -> dict:
        return {"support": self.names(action)}

    @classmethod
    def from_json(cls, data: dict, action: TorusAction) -> "OrbitClass":
        return cls(frozenset(action.index(n) for n in data["support"]))


@dataclass(frozen=True)
class OnePS:
    """A one-parameter subgroup of a diagonal torus given by integer weights."""

    w: tuple[int, ...]

    def normalized(self) -> tuple[int, ...]:
        n = len(self.w)
        total = sum(self.w)
        if total % n == 0:
            return tuple(x - total // n for x in self.w)
        return tuple(n * x - total for x in self.w)


def action_from_subtorus(s: int, t: int, c) -> TorusAction:
    """The rank-``t`` torus acting on ``y_1..y_s, x_1..x_t``.

    ``y_i`` is scaled by ``prod_j lambda_j ** c[i][j]`` and ``x_j`` by
    ``lambda_j``.
    """
    c = [list(row) for row in c]
    if len(c) != s or any(len(row) != t for row in c):
        raise ValueError(f"exponent matrix must be {s} x {t}")
    if any(x < 0 for row in c for x in row):
        raise ValueError("exponents c_ij must be nonnegative")
    coords = [f"y{i + 1}" for i in range(s)] + [f"x{j + 1}" for j in range(t)]
    cols = [tuple(row) for row in c] + [tuple(int(i == j) for i in range(t)) for j in range(t)]
    return TorusAction.from_columns(cols, coords)


def cyclic_exponents(t: int, near: int = 1, far: int = 2) -> list[list[int]]:
    """The exponent pattern ``y_i -> lambda_i * lambda_{i+1}**2 * y_i`` (indices mod t)."""
    c = [[0] * t for _ in range(t)]
    for i in range(t):
        c[i][i] += near
        c[i][(i + 1) % t] += far
    return c


def example30(t: int):
    """The rank-``t`` action of the cyclic example together with its orbits ``C_i``.

    ``C_i`` is cut out by ``x_i = 0`` and ``y_j = 0`` for ``j != i``.
    """
    if t < 2:
        raise ValueError("the cyclic example needs t >= 2")
    A = action_from_subtorus(t, t, cyclic_exponents(t))
    orbits = []
    for i in range(t):
        names = [f"y{i + 1}"] + [f"x{j + 1}" for j in range(t) if j != i]
        orbits.append(A.orbit(*names))
    return A, orbits


def semistable_cone(A: TorusAction, O: OrbitClass) -> Cone:
    return Cone(A.rank, tuple(A.column(j) for j in sorted(O.support)))


def _spans(A: TorusAction, O: OrbitClass) -> bool:
    cols = [A.column(j) for j in sorted(O.support)]
    return bool(cols) and rank(cols) == A.rank


def orbit_semistable(A: TorusAction, O: OrbitClass, chi) -> bool:
    if not any(chi):
        return True
    return cone_contains(semistable_cone(A, O), chi)


def orbit_stable(A: TorusAction, O: OrbitClass, chi) -> bool:
    if not _spans(A, O):
        return False
    return cone_contains(semistable_cone(A, O), chi, mode="relative_interior")


def _lp_common_character(A: TorusAction, orbits, stable: bool):
    """Search for a nonzero chi in every orbit cone by one LP per sign pattern.

    Variables are chi followed by one coefficient block per orbit; each
    block expresses chi as a combination of that orbit's weights.
    """
    r = A.rank
    blocks = []
    offset = r
    for O in orbits:
        cols = [A.column(j) for j in sorted(O.support)]
        blocks.append((offset, cols))
        offset += len(cols)
    nvars = offset
    eqs = []
    for off, cols in blocks:
        for i in range(r):
            row = [0] * nvars
            row[i] = 1
            for k, col in enumerate(cols):
                row[off + k] = -col[i]
            eqs.append(row)
    coeffs = range(r, nvars)
    if stable:
        # every cone is full-dimensional here, so a common interior point
        # can be scaled away from the origin
        x = feasible(nvars, equalities=eqs, positive=coeffs)
        if x is None:
            return None
        if any(x[:r]):
            return x[:r]
    for i in range(r):
        for sign in (1, -1):
            unit = [0] * nvars
            unit[i] = sign
            if stable:
                x = feasible(nvars, equalities=eqs, weak=[(unit, 1)], positive=coeffs)
            else:
                x = feasible(nvars, equalities=eqs, weak=[(unit, 1)], nonneg=coeffs)
            if x is not None:
                return x[:r]
    return None


def simultaneous_polarization(A: TorusAction, orbits: Sequence[OrbitClass], mode: str = "semistable"):
    """A nonzero primitive integral character good for every orbit, or ``None``.

    ``mode`` is ``"semistable"`` or ``"stable"``.  The returned character is
    re-checked against each orbit's facet description before it is handed out.
    """
    if not orbits:
        raise ValueError("need at least one orbit")
    if mode not in ("semistable", "stable"):
        raise ValueError(f"unknown mode {mode!r}")
    stable = mode == "stable"
    if stable and not all(_spans(A, O) for O in orbits):
        return None
    chi = _lp_common_character(A, orbits, stable)
    if chi is None:
        return None
    chi = primitive(chi)
    check = orbit_stable if stable else orbit_semistable
    if not all(check(A, O, chi) for O in orbits):
        raise AssertionError(f"witness {chi} failed independent membership check")
    return chi


@dataclass
class NonQPCertificate:
    orbits: list
    mode: str
    intersection_dim: int
    subset_witnesses: list = field(default_factory=list)  # (subset indices, chi)
    transcript: list = field(default_factory=list)

    def to_json(self, action: TorusAction) -> dict:
        return {
            "mode": self.mode,
            "orbits": [O.to_json(action) for O in self.orbits],
            "intersection_dim": self.intersection_dim,
            "subset_witnesses": [{"subset": list(s), "chi": list(chi)}
                                 for s, chi in self.subset_witnesses],
            "transcript": list(self.transcript),
        }

    @classmethod
    def from_json(cls, data: dict, action: TorusAction) -> "NonQPCertificate":
        return cls([OrbitClass.from_json(o, action) for o in data["orbits"]],
                   data["mode"], int(data["intersection_dim"]),
                   [(tuple(w["subset"]), tuple(w["chi"])) for w in data["subset_witnesses"]],
                   list(data.get("transcript", [])))


def verify_certificate(A: TorusAction, cert: NonQPCertificate) -> bool:
    stable = cert.mode == "stable"
    check = orbit_stable if stable else orbit_semistable
    for subset, chi in cert.subset_witnesses:
        if not any(chi) or not all(check(A, cert.orbits[i], chi) for i in subset):
            return False
    if stable:
        return simultaneous_polarization(A, cert.orbits, "stable") is None
    cones = [semistable_cone(A, O) for O in cert.orbits]
    return is_zero(cone_intersect(cones)) and cert.intersection_dim == 0


def nonqp_certificate(A: TorusAction, orbits: Sequence[OrbitClass], mode: str = "semistable") -> NonQPCertificate:
    """Certify that no single polarization makes all ``orbits`` semistable (or stable).

    The obstruction shows the orbits do not lie in one quasi-projective open
    subset of the quotient.  Every proper subset that does admit a common
    polarization is recorded with a witness.
    """
    orbits = list(orbits)
    if len(orbits) < 2:
        raise ValueError("a certificate needs at least two orbits")
    transcript = []
    if mode == "semistable":
        inter = cone_intersect([semistable_cone(A, O) for O in orbits])
        transcript.append(f"intersection of {len(orbits)} semistable cones has dimension {inter.dim}")
        lp = simultaneous_polarization(A, orbits, "semistable")
        if not is_zero(inter):
            raise CertificateFails(lp if lp is not None else inter.generators[0])
        if lp is not None:
            raise AssertionError("cone intersection and LP disagree")
        dim = 0
    elif mode == "stable":
        lp = simultaneous_polarization(A, orbits, "stable")
        if lp is not None:
            raise CertificateFails(lp, f"orbits are simultaneously stable for chi={lp}")
        transcript.append("no character lies in every relative interior")
        dim = 0
    else:
        raise ValueError(f"unknown mode {mode!r}")

    cones = [semistable_cone(A, O) for O in orbits]
    if mode == "stable":
        spans = [_spans(A, O) for O in orbits]

        def good(i, chi):
            return spans[i] and cone_contains(cones[i], chi, "relative_interior")
    else:
        def good(i, chi):
            return cone_contains(cones[i], chi)

    # bottom-up sweep: a subset with an infeasible sub-subset is infeasible
    witnesses = []
    found: list = []
    infeasible: set = set()
    n = len(orbits)
    for size in range(1, n):
        for subset in combinations(range(n), size):
            if size > 1 and any(subset[:k] + subset[k + 1:] in infeasible for k in range(size)):
                infeasible.add(subset)
                continue
            chi = next((w for w in found if all(good(i, w) for i in subset)), None)
            if chi is None:
                chi = simultaneous_polarization(A, [orbits[i] for i in subset], mode)
                if chi is None:
                    infeasible.add(subset)
                    continue
                found.append(chi)
            witnesses.append((subset, chi))
    transcript.append(f"{len(witnesses)} proper subsets admit a common polarization")
    return NonQPCertificate(orbits, mode, dim, witnesses, transcript)


@dataclass
class SeparationReport:
    pairs: list  # (i, j, chi or None)

    @property
    def separated(self) -> bool:
        return all(chi is not None for _, _, chi in self.pairs)

    @property
    def failures(self) -> list:
        return [(i, j) for i, j, chi in self.pairs if chi is None]

    def to_json(self) -> dict:
        return {"separated": self.separated,
                "pairs": [{"pair": [i, j], "chi": None if chi is None else list(chi)}
                          for i, j, chi in self.pairs]}


def separated_pairs(A: TorusAction, orbits: Sequence[OrbitClass]) -> SeparationReport:
    orbits = list(orbits)
    pairs = []
    for i, j in combinations(range(len(orbits)), 2):
        pairs.append((i, j, simultaneous_polarization(A, [orbits[i], orbits[j]], "stable")))
    return SeparationReport(pairs)


# ---------------------------------------------------------------------------
# plane curves and the Hilbert-Mumford weight


def plane_curve_min_weight(d: int, m: int, lam: OnePS | Sequence[int] = (1, 1, -2)) -> int:
    """Smallest 1-PS weight among monomials of a degree-``d`` curve with an
    ``m``-fold point at ``(0:0:1)``.

    Such a curve only uses monomials ``x^a y^b z^c`` with ``c <= d - m``.
    A positive minimum means the curve is destabilized by ``lam``.
    """
    if not 0 <= m <= d:
        raise ValueError(f"need 0 <= m <= d, got m={m}, d={d}")
    w = lam.normalized() if isinstance(lam, OnePS) else OnePS(tuple(lam)).normalized()
    best = None
    for c in range(d - m + 1):
        for a in range(d - c + 1):
            b = d - c - a
            val = a * w[0] + b * w[1] + c * w[2]
            if best is None or val < best:
                best = val
    return best


def genus_condition(d: int, m: int) -> bool:
    """``binom(d-1, 2) - binom(m, 2) > binom(d-1, 2) / 2``, compared exactly."""
    if d < 1:
        raise ValueError("degree must be positive")
    return Fraction(math.comb(m, 2)) < Fraction(math.comb(d - 1, 2), 2)


def find_unstable_smoothable(d_max: int) -> list[tuple[int, int]]:
    """All ``(d, m)`` with ``3m > 2d`` for which the genus bound still holds."""
    return [(d, m) for d in range(1, d_max + 1) for m in range(d + 1)
            if 3 * m > 2 * d and genus_condition(d, m)]
