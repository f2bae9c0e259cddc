"""Exact rational and integer linear algebra, polyhedral cones, LP feasibility.

Everything here works over :class:`fractions.Fraction` and Python ints, so
every answer is a certificate rather than a floating point estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import NamedTuple, Sequence

Vector = tuple
MAX_CONE_DIM = 12


class ResourceLimitError(RuntimeError):
    """Raised when a computation is asked to run beyond desk scale."""


# ---------------------------------------------------------------------------
# small helpers


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact computations")
    return Fraction(x)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def lcm_of_denominators(v) -> int:
    out = 1
    for x in v:
        out = math.lcm(out, Fraction(x).denominator)
    return out


def primitive(v) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    v = [as_fraction(x) for x in v]
    m = lcm_of_denominators(v)
    ints = [int(x * m) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def mat_vec(M, v):
    return tuple(dot(row, v) for row in M)


def transpose(M, ncols: int | None = None):
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    Bt = transpose(B)
    return [[dot(row, col) for col in Bt] for row in A]


def _row_echelon(M):
    """Fraction row echelon form; returns (rows, pivot columns)."""
    A = [[as_fraction(x) for x in row] for row in M]
    pivots = []
    r = 0
    ncols = len(A[0]) if A else 0
    for j in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][j] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][j]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][j] != 0:
                f = A[i][j]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(j)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def rank(M) -> int:
    if not M:
        return 0
    return len(_row_echelon(M)[1])


def determinant(M) -> Fraction:
    n = len(M)
    A = [[as_fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for j in range(n):
        p = next((i for i in range(j, n) if A[i][j] != 0), None)
        if p is None:
            return Fraction(0)
        if p != j:
            A[j], A[p] = A[p], A[j]
            det = -det
        det *= A[j][j]
        for i in range(j + 1, n):
            if A[i][j] != 0:
                f = A[i][j] / A[j][j]
                A[i] = [a - f * b for a, b in zip(A[i], A[j])]
    return det


def inverse(M) -> list[list[Fraction]]:
    n = len(M)
    aug = [[as_fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    R, piv = _row_echelon(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R[:n]]


def solve(A, b):
    """Return one rational solution x of A x = b, or None."""
    ncols = len(A[0]) if A else 0
    aug = [[as_fraction(x) for x in row] + [as_fraction(bi)] for row, bi in zip(A, b)]
    R, piv = _row_echelon(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for row, j in zip(R, piv):
        x[j] = row[-1]
    return tuple(x)


# ---------------------------------------------------------------------------
# integer lattices


def hermite_normal_form(M):
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ M == H``.  Pivots are
    positive and entries above a pivot are reduced into ``[0, pivot)``; zero
    rows sit at the bottom.
    """
    H = [[int(x) for x in row] for row in M]
    m = len(H)
    n = len(H[0]) if H else 0
    U = identity(m)

    def swap(i, k):
        H[i], H[k] = H[k], H[i]
        U[i], U[k] = U[k], U[i]

    def addmul(i, k, q):  # row_i -= q * row_k
        H[i] = [a - q * b for a, b in zip(H[i], H[k])]
        U[i] = [a - q * b for a, b in zip(U[i], U[k])]

    r = 0
    for j in range(n):
        if r == m:
            break
        found = False
        while True:
            nz = [i for i in range(r, m) if H[i][j] != 0]
            if not nz:
                break
            found = True
            p = min(nz, key=lambda i: abs(H[i][j]))
            swap(r, p)
            clean = True
            for i in range(r + 1, m):
                if H[i][j]:
                    addmul(i, r, H[i][j] // H[r][j])
                    if H[i][j]:
                        clean = False
            if clean:
                break
        if not found:
            continue
        if H[r][j] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][j] // H[r][j]
            if q:
                addmul(i, r, q)
        r += 1
    return H, U


def hnf_rank(H) -> int:
    return sum(1 for row in H if any(row))


def integer_kernel(M, ncols: int | None = None) -> list[list[int]]:
    """Saturated lattice basis (as rows) of ``{v in Z^n : M v = 0}``."""
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    if not M:
        return identity(n)
    H, U = hermite_normal_form(transpose(M))
    return [U[i] for i in range(n) if not any(H[i])]


def row_lattice_hnf(rows, ncols: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Canonical form of the lattice spanned by ``rows`` (nonzero HNF rows)."""
    if not rows:
        return ()
    H, _ = hermite_normal_form(rows)
    return tuple(tuple(row) for row in H if any(row))


def same_lattice(A, B) -> bool:
    return row_lattice_hnf(A) == row_lattice_hnf(B)


def in_lattice(rows, v) -> bool:
    """True iff the integer vector ``v`` is a Z-combination of ``rows``."""
    if not any(v):
        return True
    if not rows:
        return False
    return row_lattice_hnf(list(rows) + [list(v)]) == row_lattice_hnf(rows)


def is_saturated(rows) -> bool:
    """True iff the column image of ``rows``-as-columns is saturated.

    Equivalently: the row lattice of ``rows`` equals its rational span
    intersected with the integer lattice.  Checked through the HNF of the
    transpose, whose pivots must all be 1.
    """
    if not rows:
        return True
    H, _ = hermite_normal_form(transpose(rows))
    k = len(rows)
    if hnf_rank(H) < k:
        return False
    for i in range(k):
        pivot = next(x for x in H[i] if x != 0)
        if pivot != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# exact LP feasibility


def _phase_one(rows, rhs, width):
    """Find ``z >= 0`` with ``rows z = rhs`` by phase-one simplex.

    ``rows`` are sparse dicts ``{column: coefficient}``.  Pricing is Dantzig's
    rule; after a run of degenerate pivots it falls back to Bland's rule,
    which cannot cycle.
    """
    m = len(rows)
    art = width  # artificial columns width .. width + m - 1
    T = []
    b = []
    for i, (row, bi) in enumerate(zip(rows, rhs)):
        row = {j: Fraction(a) for j, a in row.items() if a}
        bi = Fraction(bi)
        if bi < 0:
            row = {j: -a for j, a in row.items()}
            bi = -bi
        row[art + i] = Fraction(1)
        T.append(row)
        b.append(bi)
    basis = [art + i for i in range(m)]
    obj: dict = {}
    obj_val = Fraction(0)
    for row, bi in zip(T, b):
        for j, a in row.items():
            if j < art:
                obj[j] = obj.get(j, 0) - a
        obj_val -= bi
    obj = {j: a for j, a in obj.items() if a}

    degenerate_run = 0
    while True:
        negative = [j for j, a in obj.items() if a < 0]
        if not negative:
            break
        if degenerate_run > 20:
            enter = min(negative)
        else:
            enter = min(negative, key=lambda j: (obj[j], j))
        best = None
        for i in range(m):
            a = T[i].get(enter)
            if a is not None and a > 0:
                key = (b[i] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise AssertionError("unbounded phase one")
        leave = best[1]
        degenerate_run = degenerate_run + 1 if best[0][0] == 0 else 0
        inv = 1 / T[leave][enter]
        prow = {j: a * inv for j, a in T[leave].items()}
        pb = b[leave] * inv
        T[leave], b[leave] = prow, pb
        for i in range(m):
            if i == leave:
                continue
            f = T[i].get(enter)
            if f is None:
                continue
            row = T[i]
            for j, a in prow.items():
                v = row.get(j, 0) - f * a
                if v:
                    row[j] = v
                else:
                    row.pop(j, None)
            b[i] -= f * pb
        f = obj.get(enter)
        if f is not None:
            for j, a in prow.items():
                v = obj.get(j, 0) - f * a
                if v:
                    obj[j] = v
                else:
                    obj.pop(j, None)
            obj_val -= f * pb
        basis[leave] = enter

    if obj_val != 0:
        return None
    z = [Fraction(0)] * width
    for i, j in enumerate(basis):
        if j < width:
            z[j] = b[i]
    return z


def _normalize_constraints(cons, nvars):
    out = []
    for c in cons:
        if len(c) == 2 and isinstance(c[0], (list, tuple)):
            row, rhs = c
        else:
            row, rhs = c, 0
        row = [as_fraction(x) for x in row]
        if len(row) != nvars:
            raise ValueError(f"constraint has {len(row)} coefficients, expected {nvars}")
        out.append((row, as_fraction(rhs)))
    return out


def check_witness(x, equalities=(), weak=(), strict=(), nonneg=(), positive=()) -> bool:
    n = len(x)
    for row, rhs in _normalize_constraints(equalities, n):
        if dot(row, x) != rhs:
            return False
    for row, rhs in _normalize_constraints(weak, n):
        if dot(row, x) < rhs:
            return False
    for row, rhs in _normalize_constraints(strict, n):
        if dot(row, x) <= rhs:
            return False
    if any(x[j] < 0 for j in nonneg) or any(x[j] <= 0 for j in positive):
        return False
    return True


def feasible(nvars: int, equalities=(), weak=(), strict=(), nonneg=(), positive=()):
    """Exact feasibility of a mixed system over Q.

    Each constraint is either a coefficient row (right-hand side 0) or a
    pair ``(row, rhs)``; the meaning is ``row.x == rhs``, ``row.x >= rhs``
    and ``row.x > rhs`` respectively.  ``nonneg`` and ``positive`` list
    variable indices with sign constraints.  Returns a verified rational
    witness tuple or ``None``.

    Inhomogeneous systems are homogenized with ``x0 > 0``.  Every strict
    condition then reads ``row.x - rhs*x0 >= tau`` with ``tau >= 1``, which is
    equivalent because the homogeneous system is invariant under positive
    scaling.
    """
    eqs = _normalize_constraints(equalities, nvars)
    ges = _normalize_constraints(weak, nvars)
    gts = _normalize_constraints(strict, nvars)
    nonneg, positive = set(nonneg), set(positive)
    nonneg -= positive
    if not (eqs or ges or gts or positive):
        return tuple(Fraction(0) for _ in range(nvars))

    # column layout: one or two columns per variable, then x0, tau, slacks
    cols: dict[int, list[tuple[int, int]]] = {}
    width = 0
    for j in range(nvars):
        if j in nonneg or j in positive:
            cols[j] = [(width, 1)]
            width += 1
        else:
            cols[j] = [(width, 1), (width + 1, -1)]
            width += 2
    homogeneous = all(rhs == 0 for _, rhs in eqs + ges + gts)
    ix0 = None
    if not homogeneous:
        ix0 = width
        width += 1
    itau = width
    width += 1

    def base(row, rhs):
        r: dict = {}
        for j, a in enumerate(row):
            if not a:
                continue
            for c, sgn in cols[j]:
                r[c] = r.get(c, 0) + sgn * a
            if j in positive:  # x_j = mu_j + tau
                r[itau] = r.get(itau, 0) + a
        if rhs:
            r[ix0] = -rhs
        return r

    rows, rhs_vec = [], []
    for row, rhs in eqs:
        rows.append(base(row, rhs))
        rhs_vec.append(0)
    for row, rhs in ges:
        r = base(row, rhs)
        r[width] = -1
        width += 1
        rows.append(r)
        rhs_vec.append(0)
    for row, rhs in gts:
        r = base(row, rhs)
        r[itau] = r.get(itau, 0) - 1
        r[width] = -1
        width += 1
        rows.append(r)
        rhs_vec.append(0)
    if ix0 is not None:  # x0 - tau >= 0
        rows.append({ix0: 1, itau: -1, width: -1})
        width += 1
        rhs_vec.append(0)
    rows.append({itau: 1, width: -1})  # tau >= 1
    width += 1
    rhs_vec.append(1)

    z = _phase_one(rows, rhs_vec, width)
    if z is None:
        return None
    scale = z[ix0] if ix0 is not None else Fraction(1)
    x = []
    for j in range(nvars):
        val = sum(sgn * z[c] for c, sgn in cols[j])
        if j in positive:
            val += z[itau]
        x.append(val / scale)
    x = tuple(x)
    if not check_witness(x, eqs, ges, gts, nonneg, positive):
        raise AssertionError("LP produced a witness that fails substitution")
    return x


# ---------------------------------------------------------------------------
# polyhedral cones


class Facet(NamedTuple):
    normal: tuple[int, ...]
    equality: bool  # True: <normal, x> == 0 is an implicit equation


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone given by generators.

    Generators are stored as primitive integer vectors (zero generators and
    duplicates dropped).  The facet description is computed on first use.
    """

    ambient_dim: int
    generators: tuple = field(default=())

    def __post_init__(self):
        gens = []
        for g in self.generators:
            if len(g) != self.ambient_dim:
                raise ValueError(
                    f"generator {tuple(g)} does not live in dimension {self.ambient_dim}")
            p = primitive(g)
            if any(p) and p not in gens:
                gens.append(p)
        object.__setattr__(self, "generators", tuple(sorted(gens)))

    @cached_property
    def equations(self) -> tuple[tuple[int, ...], ...]:
        """Integer basis of the orthogonal complement of the linear span."""
        if not self.generators:
            return tuple(tuple(r) for r in identity(self.ambient_dim))
        return tuple(tuple(r) for r in integer_kernel(self.generators, self.ambient_dim))

    @property
    def dim(self) -> int:
        return self.ambient_dim - len(self.equations)

    @cached_property
    def facets(self) -> tuple[Facet, ...]:
        return cone_facets(self)

    @property
    def inequalities(self) -> tuple[tuple[int, ...], ...]:
        return tuple(f.normal for f in self.facets if not f.equality)

    def __contains__(self, v) -> bool:
        return cone_contains(self, v)


def cone_facets(C: Cone) -> tuple[Facet, ...]:
    """Facet system of ``C``: implicit equations plus facet inequalities.

    Candidate normals are orthogonal to ``dim - 1`` independent generators and
    lie in the span of the cone; a candidate is a facet iff every generator
    sits on one side of it.
    """
    if C.ambient_dim > MAX_CONE_DIM:
        raise ResourceLimitError(
            f"facet enumeration limited to dimension {MAX_CONE_DIM}, got {C.ambient_dim}")
    eqs = [list(e) for e in C.equations]
    out = [Facet(tuple(e), True) for e in eqs]
    k = C.dim
    if k == 0:
        return tuple(out)
    gens = C.generators
    found = set()
    for combo in combinations(range(len(gens)), k - 1):
        rows = [list(gens[i]) for i in combo] + eqs
        ker = integer_kernel(rows, C.ambient_dim)
        if len(ker) != 1:
            continue
        y = ker[0]
        vals = [dot(y, g) for g in gens]
        if all(v >= 0 for v in vals):
            normal = tuple(y)
        elif all(v <= 0 for v in vals):
            normal = tuple(-a for a in y)
        else:
            continue
        found.add(normal)
    out.extend(Facet(nrm, False) for nrm in sorted(found))
    return tuple(out)


def satisfies_facets(C: Cone, v, strict: bool = False) -> bool:
    for normal, eq in C.facets:
        val = dot(normal, v)
        if eq:
            if val != 0:
                return False
        elif val < 0 or (strict and val == 0):
            return False
    return True


def in_generator_hull(C: Cone, v, strict: bool = False) -> bool:
    """Decide membership by solving for generator coefficients directly.

    ``strict`` asks for all coefficients positive, which characterizes the
    relative interior.  Independent of the facet description.
    """
    v = [as_fraction(x) for x in v]
    if len(v) != C.ambient_dim:
        raise ValueError("dimension mismatch")
    k = len(C.generators)
    if k == 0:
        return not any(v)
    eqs = [([g[i] for g in C.generators], v[i]) for i in range(C.ambient_dim)]
    if strict:
        return feasible(k, equalities=eqs, positive=range(k)) is not None
    return feasible(k, equalities=eqs, nonneg=range(k)) is not None


def cone_contains(C: Cone, v, mode: str = "closure") -> bool:
    if len(v) != C.ambient_dim:
        raise ValueError(f"vector of length {len(v)} in a cone of dimension {C.ambient_dim}")
    if mode == "closure":
        return satisfies_facets(C, v)
    if mode == "relative_interior":
        return satisfies_facets(C, v, strict=True)
    raise ValueError(f"unknown membership mode {mode!r}")


def dual_cone(C: Cone) -> Cone:
    gens = list(C.inequalities)
    for e in C.equations:
        gens.append(e)
        gens.append(tuple(-x for x in e))
    return Cone(C.ambient_dim, tuple(gens))


def cone_intersect(cones: Sequence[Cone]) -> Cone:
    if not cones:
        raise ValueError("need at least one cone")
    n = cones[0].ambient_dim
    if any(c.ambient_dim != n for c in cones):
        raise ValueError("cones live in different ambient dimensions")
    gens = []
    for c in cones:
        gens.extend(dual_cone(c).generators)
    return dual_cone(Cone(n, tuple(gens)))


def is_zero(C: Cone) -> bool:
    return not C.generators


def has_nonzero_point(C: Cone):
    """LP route to ``not is_zero``: search the facet system for a nonzero point."""
    n = C.ambient_dim
    eqs = [f.normal for f in C.facets if f.equality]
    ges = [f.normal for f in C.facets if not f.equality]
    for j in range(n):
        for sign in (1, -1):
            unit = [0] * n
            unit[j] = sign
            x = feasible(n, equalities=eqs, weak=ges + [(unit, 1)])
            if x is not None:
                return x
    return None
