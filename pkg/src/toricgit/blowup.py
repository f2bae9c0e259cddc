"""Weighted blow ups of a smooth point and cyclic quotient singularities.

Monomials are exponent tuples.  A cyclic quotient ``1/d(b_1, ..., b_n)`` is
affine space modulo the ``d``-th roots of unity acting with exponents ``b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .exact import as_fraction


# ---------------------------------------------------------------------------
# weights and monomial ideals


@dataclass(frozen=True)
class WeightVector:
    a: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        if not a or any(x < 1 for x in a):
            raise ValueError(f"weights must be positive integers, got {a}")
        object.__setattr__(self, "a", a)

    @classmethod
    def from_shorthand(cls, s: int, t: int, d: int) -> "WeightVector":
        """``(d^s, 1^t)``: ``s`` copies of ``d`` followed by ``t`` ones."""
        return cls((d,) * s + (1,) * t)

    @classmethod
    def parse(cls, text: str) -> "WeightVector":
        """Parse ``"2,1,1"`` or the power shorthand ``"3^2,1^3"``."""
        out = []
        for part in text.replace(" ", "").strip("()").split(","):
            if "^" in part:
                base, exp = part.split("^")
                out.extend([int(base)] * int(exp))
            elif part:
                out.append(int(part))
        return cls(tuple(out))

    def __len__(self):
        return len(self.a)

    def __iter__(self):
        return iter(self.a)

    def __str__(self):
        return "(" + ", ".join(map(str, self.a)) + ")"


def _weights(a) -> tuple[int, ...]:
    return a.a if isinstance(a, WeightVector) else WeightVector(tuple(a)).a


def monomial_weight(m, a) -> int:
    a = _weights(a)
    if len(m) != len(a):
        raise ValueError("exponent vector and weights differ in length")
    return sum(mi * ai for mi, ai in zip(m, a))


def divides(m, n) -> bool:
    return all(x <= y for x, y in zip(m, n))


def minimalize(monomials) -> list[tuple[int, ...]]:
    """Minimal elements under divisibility, sorted."""
    mons = sorted(set(tuple(m) for m in monomials), key=lambda m: (sum(m), m))
    out = []
    for m in mons:
        if not any(divides(g, m) for g in out):
            out.append(m)
    return sorted(out)


def ideal_generators(a, c: int) -> list[tuple[int, ...]]:
    """Minimal monomial generators of the ideal of monomials of weight >= c.

    A minimal generator has each exponent at most ``ceil(c / a_i)``, so the
    search box is finite.
    """
    a = _weights(a)
    if c < 0:
        raise ValueError("weight threshold must be nonnegative")
    if c == 0:
        return [tuple(0 for _ in a)]
    box = [range(-(-c // ai) + 1) for ai in a]
    hits = (m for m in product(*box) if monomial_weight(m, a) >= c)
    return minimalize(hits)


def same_monomial_ideal(gens1, gens2) -> bool:
    """Mutual divisibility: every generator of each side is a multiple of one on the other."""
    return (all(any(divides(g, h) for g in gens1) for h in gens2)
            and all(any(divides(g, h) for g in gens2) for h in gens1))


def claimed_ideal(s: int, t: int, c: int) -> list[tuple[int, ...]]:
    """Generators of ``(u_1, ..., u_s) + (x_1, ..., x_t)^c``."""
    n = s + t
    gens = [tuple(int(k == i) for k in range(n)) for i in range(s)]
    for e in product(range(c + 1), repeat=t):
        if sum(e) == c:
            gens.append((0,) * s + e)
    return gens


def verify_Ic_claim(s: int, t: int, d: int) -> bool:
    """For weights ``(d^s, 1^t)`` and every ``1 <= c <= d``, ``I_c`` equals
    ``(u_1..u_s) + m_x^c``."""
    if s < 1 or t < 1 or d < 1:
        raise ValueError("need s, t, d >= 1")
    a = WeightVector.from_shorthand(s, t, d)
    return all(same_monomial_ideal(ideal_generators(a, c), claimed_ideal(s, t, c))
               for c in range(1, d + 1))


# ---------------------------------------------------------------------------
# cyclic quotients


@dataclass(frozen=True, eq=False)
class CyclicQuotient:
    order: int
    weights: tuple[int, ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("group order must be positive")
        object.__setattr__(self, "weights", tuple(int(b) % self.order for b in self.weights))

    @property
    def dim(self) -> int:
        return len(self.weights)

    def canonical(self) -> tuple[int, tuple[int, ...]]:
        """Lexicographically least sorted weight vector over all generators of the group."""
        d = self.order
        best = None
        for k in range(1, d + 1):
            if math.gcd(k, d) != 1:
                continue
            cand = tuple(sorted((k * b) % d for b in self.weights))
            if best is None or cand < best:
                best = cand
        return d, best if best is not None else ()

    def __eq__(self, other):
        if not isinstance(other, CyclicQuotient):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    @property
    def smooth_factor_dim(self) -> int:
        """Number of coordinates on which the group acts trivially."""
        return sum(1 for b in self.weights if b == 0)

    def core(self) -> "CyclicQuotient":
        """The factor left after splitting off trivially acted-on coordinates."""
        return CyclicQuotient(self.order, tuple(b for b in self.weights if b))

    def is_smooth(self) -> bool:
        """Chevalley-Shephard-Todd: smooth iff the group is generated by
        pseudoreflections (elements moving exactly one coordinate)."""
        d = self.order
        g = d
        for k in range(1, d):
            moved = sum(1 for b in self.weights if (k * b) % d)
            if moved == 1:
                g = math.gcd(g, k)
        return g == 1 or d == 1

    def __str__(self):
        return f"1/{self.order}(" + ",".join(map(str, self.weights)) + ")"

    def to_json(self) -> dict:
        return {"order": self.order, "weights": list(self.weights), "smooth": self.is_smooth()}


def standard_quotient(d: int, t: int) -> CyclicQuotient:
    """``1/d(1, (-1)^t)``."""
    return CyclicQuotient(d, (1,) + (-1,) * t)


@dataclass(frozen=True)
class ChartDescription:
    index: int
    quotient: CyclicQuotient
    projection: tuple  # projection[j]: exponents of u_j in the chart variables

    def pullback(self, m) -> tuple[int, ...]:
        """Exponent vector of the pullback of ``u^m`` to this chart."""
        n = len(m)
        out = [0] * n
        for j, mj in enumerate(m):
            for k, e in enumerate(self.projection[j]):
                out[k] += mj * e
        return tuple(out)


def charts(a) -> list[ChartDescription]:
    a = _weights(a)
    n = len(a)
    out = []
    for i in range(n):
        b = tuple(1 if j == i else -a[j] for j in range(n))
        proj = []
        for j in range(n):
            e = [0] * n
            if j == i:
                e[i] = a[i]
            else:
                e[j] = 1
                e[i] = a[j]
            proj.append(tuple(e))
        out.append(ChartDescription(i, CyclicQuotient(a[i], b), tuple(proj)))
    return out


@dataclass(frozen=True)
class ChartType:
    """A chart up to isomorphism: ``A^smooth_dim x core``."""

    smooth_dim: int
    core: CyclicQuotient

    @property
    def singular(self) -> bool:
        return not self.core.is_smooth()

    def __str__(self):
        if not self.singular:
            return f"A^{self.smooth_dim + self.core.dim} (smooth)"
        prefix = f"A^{self.smooth_dim} x " if self.smooth_dim else ""
        return f"{prefix}A^{self.core.dim}/{self.core}"


def classify_singularities(a) -> list[ChartType]:
    out = []
    for ch in charts(a):
        q = ch.quotient
        out.append(ChartType(q.smooth_factor_dim, q.core()))
    return out


# ---------------------------------------------------------------------------
# discrepancies


@dataclass(frozen=True)
class BlowupDiscrepancy:
    discrepancy: Fraction  # coefficient of E in K_Y - f^*K_X
    log_discrepancy: Fraction  # discrepancy + 1, i.e. sum of the weights


def blowup_discrepancy(a) -> BlowupDiscrepancy:
    a = _weights(a)
    total = Fraction(sum(a))
    return BlowupDiscrepancy(total - 1, total)


def lattice_coset(Q: CyclicQuotient, v) -> int | None:
    """The ``k`` with ``v - (k/d) b`` integral, or ``None`` if ``v`` is outside the lattice."""
    v = [as_fraction(x) for x in v]
    d = Q.order
    for k in range(d):
        if all((x - Fraction(k * b, d)).denominator == 1 for x, b in zip(v, Q.weights)):
            return k
    return None


def in_quotient_lattice(Q: CyclicQuotient, v) -> bool:
    return len(v) == Q.dim and lattice_coset(Q, v) is not None


def is_primitive_in(Q: CyclicQuotient, v) -> bool:
    v = [as_fraction(x) for x in v]
    if not any(v):
        return False
    g = 0
    for x in v:
        g = math.gcd(g, (x * Q.order).numerator)
    return not any(in_quotient_lattice(Q, [x / j for x in v]) for j in range(2, g + 1))


def toric_discrepancy(Q: CyclicQuotient, v) -> Fraction:
    """Discrepancy of the toric divisor with valuation vector ``v`` over ``A^n / Q``."""
    v = [as_fraction(x) for x in v]
    if len(v) != Q.dim:
        raise ValueError("valuation vector has the wrong length")
    if not in_quotient_lattice(Q, v):
        raise ValueError(f"{tuple(map(str, v))} is not in the lattice of {Q}")
    if any(x < 0 for x in v):
        raise ValueError("valuation vector must lie in the nonnegative orthant")
    if not is_primitive_in(Q, v):
        raise ValueError("valuation vector is not primitive")
    return sum(v) - 1


@dataclass(frozen=True)
class TowerStep:
    level: int
    divisor: tuple[int, ...]  # weights of the weighted projective space E_i
    step_discrepancy: Fraction
    cumulative_discrepancy: Fraction
    valuation: tuple
    residual: CyclicQuotient

    def to_json(self) -> dict:
        return {"level": self.level,
                "divisor": "P(" + ",".join(map(str, self.divisor)) + ")",
                "step_discrepancy": str(self.step_discrepancy),
                "cumulative_discrepancy": str(self.cumulative_discrepancy),
                "valuation": [str(x) for x in self.valuation],
                "residual": str(self.residual),
                "residual_smooth": self.residual.is_smooth()}


@dataclass(frozen=True)
class ResolutionTower:
    d: int
    t: int
    base: CyclicQuotient
    steps: tuple

    def to_json(self) -> dict:
        return {"d": self.d, "t": self.t, "singularity": str(self.base),
                "steps": [s.to_json() for s in self.steps]}


def resolution_tower(d: int, t: int) -> ResolutionTower:
    """Resolve ``1/d(1, (-1)^t)`` by repeated ``(d-i, 1^t)`` weighted blow ups."""
    if d < 2 or t < 1:
        raise ValueError("need d >= 2 and t >= 1")
    base = standard_quotient(d, t)
    steps = []
    for i in range(1, d):
        v = (Fraction(d - i, d),) + (Fraction(i, d),) * t
        steps.append(TowerStep(
            level=i,
            divisor=(d - i,) + (1,) * t,
            step_discrepancy=Fraction(t - 1, d - i + 1),
            cumulative_discrepancy=toric_discrepancy(base, v),
            valuation=v,
            residual=standard_quotient(d - i, t),
        ))
    return ResolutionTower(d, t, base, tuple(steps))


@dataclass(frozen=True)
class DiscrepancyScan:
    minimum: Fraction
    argmin: tuple
    unique: bool
    candidates: int


def _interior_points(Q: CyclicQuotient, bound: Fraction):
    """Primitive lattice points with every coordinate positive and sum <= bound."""
    d, n = Q.order, Q.dim
    limit = math.floor(bound * d)

    def compositions(total, parts):
        if parts == 1:
            yield (total,)
            return
        for first in range(1, total - parts + 2):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    for s in range(n, limit + 1):
        for w in compositions(s, n):
            v = tuple(Fraction(x, d) for x in w)
            if in_quotient_lattice(Q, v) and is_primitive_in(Q, v):
                yield v


def minimal_discrepancy_scan(d: int, t: int, bound) -> DiscrepancyScan:
    """Enumerate exceptional toric valuations over the singular point of
    ``1/d(1, (-1)^t)`` and report the least discrepancy.

    Valuations centred at the singular point have all coordinates positive;
    points on the boundary of the orthant are centred on larger strata.
    """
    bound = as_fraction(bound)
    if bound < Fraction(t - 1 + d, d):
        raise ValueError("bound too small to reach the expected minimiser")
    if d < 1 or t < 1:
        raise ValueError("need d >= 1 and t >= 1")
    Q = standard_quotient(d, t)
    points = list(_interior_points(Q, bound))
    values = {v: sum(v) - 1 for v in points}
    best = min(values.values())
    argmins = sorted(v for v, val in values.items() if val == best)
    # re-derive in the opposite order to catch order dependence
    best_rev = min(sum(v) - 1 for v in reversed(points))
    if best_rev != best:
        raise AssertionError("minimum depends on enumeration order")
    return DiscrepancyScan(best, argmins[0], len(argmins) == 1, len(points))


def polarization_coefficients(e):
    """Distinct positive integers ``b`` and ``c`` with ``c*e_i - b_i >= 0``."""
    e = [as_fraction(x) for x in e]
    if not e or any(x <= 0 for x in e):
        raise ValueError("coefficients must be a nonempty list of positive rationals")
    b = list(range(1, len(e) + 1))
    c = max(math.ceil(Fraction(bi) / ei) for bi, ei in zip(b, e))
    return b, c
