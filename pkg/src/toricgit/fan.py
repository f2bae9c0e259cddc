"""Simplicial fans, their Cox quotient presentations, and projectivity tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from .exact import (
    Cone,
    cone_contains,
    determinant,
    dot,
    feasible,
    integer_kernel,
    inverse,
    is_saturated,
    mat_mul,
    rank,
    row_lattice_hnf,
    transpose,
)
from .torus import OrbitClass, TorusAction, simultaneous_polarization

MAX_SUBSET_VARS = 16


class InvalidFanError(ValueError):
    def __init__(self, diagnostics: "FanDiagnostics"):
        self.diagnostics = diagnostics
        super().__init__("; ".join(diagnostics.issues))


class TorsionError(ValueError):
    """The class group has torsion; only free class groups are supported."""


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple
    max_cones: tuple

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(sorted(tuple(sorted(int(i) for i in c)) for c in self.max_cones))
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        for r in rays:
            if len(r) != self.rank:
                raise ValueError(f"ray {r} does not live in Z^{self.rank}")
        for c in cones:
            if any(not 0 <= i < len(rays) for i in c):
                raise ValueError(f"cone {c} refers to a missing ray")

    @property
    def num_rays(self) -> int:
        return len(self.rays)

    def cone(self, k: int) -> Cone:
        return Cone(self.rank, tuple(self.rays[i] for i in self.max_cones[k]))

    def ray_matrix(self, cone=None) -> list[list[int]]:
        idx = range(self.num_rays) if cone is None else cone
        return [list(self.rays[i]) for i in idx]

    def to_json(self) -> dict:
        return {"rank": self.rank, "rays": [list(r) for r in self.rays],
                "cones": [list(c) for c in self.max_cones]}

    @classmethod
    def from_json(cls, data: dict) -> "Fan":
        return cls(int(data["rank"]), tuple(tuple(r) for r in data["rays"]),
                   tuple(tuple(c) for c in data["cones"]))


@dataclass(frozen=True)
class CoxPresentation:
    degrees: tuple  # k x N, column j is the class of variable j
    primitive_collections: tuple
    coords: tuple = field(default=())

    def __post_init__(self):
        degrees = tuple(tuple(int(x) for x in row) for row in self.degrees)
        prims = tuple(sorted((tuple(sorted(int(i) for i in p)) for p in self.primitive_collections),
                             key=lambda p: (len(p), p)))
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "primitive_collections", prims)
        n = self.num_vars
        if not self.coords:
            object.__setattr__(self, "coords", tuple(f"z{j + 1}" for j in range(n)))
        else:
            object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) != n:
            raise ValueError("need one coordinate name per variable")
        if any(len(row) != n for row in degrees):
            raise ValueError("degree matrix rows have inconsistent length")
        for p in prims:
            if any(not 0 <= i < n for i in p):
                raise ValueError(f"primitive collection {p} refers to a missing variable")

    @property
    def num_vars(self) -> int:
        if self.degrees:
            return len(self.degrees[0])
        return len(self.coords)

    @property
    def class_rank(self) -> int:
        return len(self.degrees)

    def degree(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.degrees)

    def action(self) -> TorusAction:
        return TorusAction.from_columns([self.degree(j) for j in range(self.num_vars)], self.coords)

    def to_json(self) -> dict:
        return {"coords": list(self.coords),
                "degrees": [list(self.degree(j)) for j in range(self.num_vars)],
                "primitive_collections": [[self.coords[i] for i in p]
                                          for p in self.primitive_collections]}

    @classmethod
    def from_json(cls, data: dict) -> "CoxPresentation":
        cols = data["degrees"]
        coords = tuple(data.get("coords") or (f"z{j + 1}" for j in range(len(cols))))
        k = len(cols[0]) if cols else 0
        if any(len(c) != k for c in cols):
            raise ValueError("every variable needs a degree of the same length")
        degrees = tuple(tuple(c[i] for c in cols) for i in range(k))
        prims = []
        for p in data["primitive_collections"]:
            prims.append(tuple(coords.index(x) if isinstance(x, str) else int(x) for x in p))
        return cls(degrees, tuple(prims), coords)


@dataclass
class FanDiagnostics:
    issues: list = field(default_factory=list)
    offending_pair: tuple | None = None

    @property
    def ok(self) -> bool:
        return not self.issues


def validate_fan(F: Fan) -> FanDiagnostics:
    """Check rays, strong convexity and the common-face condition.

    Two cones meet in a common face iff some linear form vanishes on their
    shared rays and is positive on the other rays of the first cone and
    negative on the other rays of the second; this is one exact LP per pair.
    """
    diag = FanDiagnostics()
    n = F.rank
    seen = {}
    for i, r in enumerate(F.rays):
        if not any(r):
            diag.issues.append(f"ray {i} is zero")
            continue
        if math.gcd(*r) != 1:
            diag.issues.append(f"ray {i} = {r} is not primitive")
        if r in seen:
            diag.issues.append(f"rays {seen[r]} and {i} coincide")
        seen.setdefault(r, i)
    for k, c in enumerate(F.max_cones):
        rows = [F.rays[i] for i in c]
        if feasible(n, strict=rows) is None:
            diag.issues.append(f"cone {list(c)} is not strongly convex")
    for a, b in combinations(range(len(F.max_cones)), 2):
        sa, sb = set(F.max_cones[a]), set(F.max_cones[b])
        eqs = [F.rays[i] for i in sa & sb]
        strict = [F.rays[i] for i in sa - sb] + [tuple(-x for x in F.rays[i]) for i in sb - sa]
        if feasible(n, equalities=eqs, strict=strict) is None:
            diag.issues.append(
                f"cones {list(F.max_cones[a])} and {list(F.max_cones[b])} do not meet in a common face")
            if diag.offending_pair is None:
                diag.offending_pair = (F.max_cones[a], F.max_cones[b])
    return diag


def _is_simplicial(F: Fan) -> bool:
    return all(rank(F.ray_matrix(c)) == len(c) for c in F.max_cones)


def is_smooth(F: Fan) -> bool:
    """Every maximal cone's rays extend to a basis of the lattice."""
    for c in F.max_cones:
        rows = F.ray_matrix(c)
        if rank(rows) != len(rows) or not is_saturated(rows):
            return False
    return True


def is_complete(F: Fan) -> bool:
    """Wall-count criterion for pure simplicial fans.

    Valid pure fans whose every wall borders exactly two maximal cones have
    no boundary, so their support is all of ``Q^n``.
    """
    if not _is_simplicial(F):
        raise ValueError("completeness test only handles simplicial fans")
    n = F.rank
    if not F.max_cones or any(len(c) != n for c in F.max_cones):
        return False
    walls: dict = {}
    for c in F.max_cones:
        for w in combinations(c, n - 1):
            walls[w] = walls.get(w, 0) + 1
    return all(v == 2 for v in walls.values())


def _walls(F: Fan):
    """Pairs ``(a, b, extra)`` of maximal cones sharing a wall; ``extra`` is the
    ray of ``b`` outside ``a``."""
    n = F.rank
    out = []
    for a, b in combinations(range(len(F.max_cones)), 2):
        sa, sb = set(F.max_cones[a]), set(F.max_cones[b])
        if len(sa & sb) == n - 1:
            (extra,) = sb - sa
            out.append((a, b, extra))
    return out


@dataclass
class SupportFunction:
    functionals: tuple  # one rational vector per maximal cone

    def value(self, F: Fan, ray_index: int) -> Fraction:
        for k, c in enumerate(F.max_cones):
            if ray_index in c:
                return dot(self.functionals[k], F.rays[ray_index])
        raise KeyError(ray_index)

    def to_json(self) -> dict:
        return {"functionals": [[str(x) for x in m] for m in self.functionals]}


def verify_support_function(F: Fan, psi: SupportFunction) -> bool:
    m = psi.functionals
    for a, b in combinations(range(len(F.max_cones)), 2):
        for i in set(F.max_cones[a]) & set(F.max_cones[b]):
            if dot(m[a], F.rays[i]) != dot(m[b], F.rays[i]):
                return False
    for a, b, extra in _walls(F):
        r = F.rays[extra]
        if not dot(m[a], r) > dot(m[b], r):
            return False
    return True


def projective_support_function(F: Fan) -> SupportFunction | None:
    """A strictly convex piecewise-linear function on ``F``, or ``None``.

    One functional per maximal cone; neighbours agree on shared rays, and
    across each wall the functional of one side, extended linearly, lies
    strictly above the other side on the far ray.  Such a function exists
    iff the toric variety is projective.
    """
    if not _is_simplicial(F) or not is_complete(F):
        raise ValueError("support functions are only searched on complete simplicial fans")
    n = F.rank
    k = len(F.max_cones)
    nvars = n * k

    def block(idx, vec, sign=1):
        row = [0] * nvars
        for t, x in enumerate(vec):
            row[idx * n + t] += sign * x
        return row

    eqs = []
    for a, b in combinations(range(k), 2):
        for i in set(F.max_cones[a]) & set(F.max_cones[b]):
            r = F.rays[i]
            eqs.append([x + y for x, y in zip(block(a, r), block(b, r, -1))])
    strict = []
    for a, b, extra in _walls(F):
        r = F.rays[extra]
        strict.append([x + y for x, y in zip(block(a, r), block(b, r, -1))])
    x = feasible(nvars, equalities=eqs, strict=strict)
    if x is None:
        return None
    psi = SupportFunction(tuple(tuple(x[a * n:(a + 1) * n]) for a in range(k)))
    if not verify_support_function(F, psi):
        raise AssertionError("support function witness failed re-verification")
    return psi


# ---------------------------------------------------------------------------
# Cox correspondence


def _subsets_avoiding(num_vars: int, prims) -> list[tuple[int, ...]]:
    if num_vars > MAX_SUBSET_VARS:
        raise ValueError(f"subset enumeration limited to {MAX_SUBSET_VARS} variables")
    prim_sets = [frozenset(p) for p in prims]
    good = []
    for size in range(num_vars, -1, -1):
        for s in combinations(range(num_vars), size):
            ss = frozenset(s)
            if any(p <= ss for p in prim_sets):
                continue
            if any(ss < g for g in good):
                continue
            good.append(ss)
    return sorted(tuple(sorted(g)) for g in good)


def primitive_collections(F: Fan) -> tuple[tuple[int, ...], ...]:
    """Minimal sets of rays not contained in a single maximal cone."""
    if F.num_rays > MAX_SUBSET_VARS:
        raise ValueError(f"subset enumeration limited to {MAX_SUBSET_VARS} rays")
    cones = [frozenset(c) for c in F.max_cones]
    out = []
    for size in range(1, F.num_rays + 1):
        for s in combinations(range(F.num_rays), size):
            ss = frozenset(s)
            if any(ss <= c for c in cones):
                continue
            if any(frozenset(p) <= ss for p in out):
                continue
            out.append(s)
    return tuple(out)


def cox_of_fan(F: Fan) -> CoxPresentation:
    R = F.ray_matrix()
    if rank(R) != F.rank:
        raise ValueError("rays must span the ambient space")
    if not is_saturated(transpose(R)):
        raise TorsionError("class group has torsion")
    degrees = row_lattice_hnf(integer_kernel(transpose(R), F.num_rays))
    return CoxPresentation(degrees, primitive_collections(F),
                           tuple(f"z{j + 1}" for j in range(F.num_rays)))


def maximal_cones_of(P: CoxPresentation) -> list[tuple[int, ...]]:
    return _subsets_avoiding(P.num_vars, P.primitive_collections)


def fan_of_cox(P: CoxPresentation) -> Fan:
    N, k = P.num_vars, P.class_rank
    if rank(P.degrees) != k:
        raise ValueError("degree matrix must have full row rank")
    K = integer_kernel(P.degrees, N) if P.degrees else [[int(i == j) for j in range(N)] for i in range(N)]
    if len(K) != N - k:
        raise ValueError(f"kernel has rank {len(K)}, expected {N - k}")
    K = row_lattice_hnf(K)
    rays = tuple(tuple(col) for col in transpose(K, N))
    F = Fan(N - k, rays, tuple(maximal_cones_of(P)))
    diag = validate_fan(F)
    if not diag.ok:
        raise InvalidFanError(diag)
    return F


def git_ample_character(P: CoxPresentation):
    """A character stable on every distinguished orbit, or ``None``.

    The distinguished orbit of a maximal cone is supported on the variables
    outside it; a character in the interior of all their weight cones is an
    ample class of the quotient.
    """
    A = P.action()
    orbits = [OrbitClass(frozenset(set(range(P.num_vars)) - set(c))) for c in maximal_cones_of(P)]
    if not orbits:
        return None
    return simultaneous_polarization(A, orbits, "stable")


def git_nef_character(P: CoxPresentation):
    """A nonzero character semistable on every distinguished orbit, or ``None``."""
    A = P.action()
    orbits = [OrbitClass(frozenset(set(range(P.num_vars)) - set(c))) for c in maximal_cones_of(P)]
    if not orbits:
        return None
    return simultaneous_polarization(A, orbits, "semistable")


# ---------------------------------------------------------------------------
# comparing fans


def canonical_form(F: Fan):
    """Invariant of ``F`` under GL(n, Z) with ray labels held fixed."""
    return row_lattice_hnf(transpose(F.ray_matrix(), F.rank)), F.max_cones


def fans_isomorphic(F: Fan, G: Fan):
    """A relabeling ``perm`` (ray i of F -> ray perm[i] of G) realized by an
    element of GL(n, Z), or ``None``."""
    if (F.rank, F.num_rays, len(F.max_cones)) != (G.rank, G.num_rays, len(G.max_cones)):
        return None
    n = F.rank
    base = next((c for c in F.max_cones if len(c) == n and rank(F.ray_matrix(c)) == n), None)
    if base is None:
        raise ValueError("need a full-dimensional simplicial cone to anchor the search")
    S = transpose(F.ray_matrix(base))
    S_inv = inverse(S)
    g_cones = set(G.max_cones)
    ray_index = {r: i for i, r in enumerate(G.rays)}
    for target in G.max_cones:
        if len(target) != n:
            continue
        for order in permutations(target):
            T = transpose(G.ray_matrix(order))
            g = mat_mul(T, S_inv)
            if any(Fraction(x).denominator != 1 for row in g for x in row):
                continue
            if abs(determinant(g)) != 1:
                continue
            perm = []
            for r in F.rays:
                image = tuple(int(dot(row, r)) for row in g)
                if image not in ray_index:
                    break
                perm.append(ray_index[image])
            else:
                mapped = {tuple(sorted(perm[i] for i in c)) for c in F.max_cones}
                if mapped == g_cones:
                    return tuple(perm)
    return None


def cone_containing(F: Fan, v):
    for k in range(len(F.max_cones)):
        if cone_contains(F.cone(k), v):
            return k
    return None


# ---------------------------------------------------------------------------
# standard fans


def projective_space(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)] + [tuple([-1] * n)]
    cones = list(combinations(range(n + 1), n))
    return Fan(n, tuple(rays), tuple(cones))


def product_of_lines() -> Fan:
    rays = ((1, 0), (-1, 0), (0, 1), (0, -1))
    return Fan(2, rays, ((0, 2), (0, 3), (1, 2), (1, 3)))


def hirzebruch(a: int) -> Fan:
    rays = ((1, 0), (0, 1), (-1, a), (0, -1))
    return Fan(2, rays, ((0, 1), (1, 2), (2, 3), (0, 3)))


EXAMPLE31_COORDS = ("y1", "y2", "y3", "x1", "x2", "x3", "x4")
EXAMPLE31_DEGREES = ((1, 1, 0, 1), (1, 1, 1, 0), (1, 0, 1, 1),
                     (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
EXAMPLE31_COLLECTIONS = (("y1", "x1"), ("y1", "x4"), ("y2", "x1"), ("y2", "x2"),
                         ("y3", "x1"), ("y3", "x3"), ("x2", "x3", "x4"))


def example31_json() -> dict:
    return {"coords": list(EXAMPLE31_COORDS),
            "degrees": [list(d) for d in EXAMPLE31_DEGREES],
            "primitive_collections": [list(p) for p in EXAMPLE31_COLLECTIONS]}


def example31() -> CoxPresentation:
    """The seven-variable presentation of the Miyake-Oda threefold."""
    return CoxPresentation.from_json(example31_json())
