"""Normal forms ``y_i + h_i(x)`` for ideals modulo ``m^d`` and their torus symmetries.

Variables are ordered ``y_1..y_s, x_1..x_t``.  All polynomial arithmetic is
truncated: monomials of total degree ``>= d`` are discarded on creation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exact import as_fraction, integer_kernel, inverse, rank


class DegenerateLinearPart(ValueError):
    """The y-linear coefficients of the generators are not invertible."""


class TruncPoly:
    """Polynomial in ``nvars`` variables with rational coefficients, truncated at degree ``d``."""

    __slots__ = ("nvars", "d", "terms")

    def __init__(self, nvars: int, d: int, terms: Mapping | None = None):
        if d < 1:
            raise ValueError("truncation degree must be positive")
        self.nvars = nvars
        self.d = d
        self.terms: dict[tuple[int, ...], Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e}")
            c = as_fraction(c)
            if c and sum(e) < d:
                self.terms[e] = self.terms.get(e, Fraction(0)) + c
                if not self.terms[e]:
                    del self.terms[e]

    @classmethod
    def zero(cls, nvars, d):
        return cls(nvars, d)

    @classmethod
    def constant(cls, nvars, d, c):
        return cls(nvars, d, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars, d, k):
        return cls(nvars, d, {tuple(int(i == k) for i in range(nvars)): 1})

    def _like(self, terms):
        return TruncPoly(self.nvars, self.d, terms)

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return self._like(out)

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_fraction(c)
        return self._like({e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncPoly):
            return self.scale(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            s1 = sum(e1)
            for e2, c2 in other.terms.items():
                if s1 + sum(e2) >= self.d:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return self._like(out)

    __rmul__ = scale

    def __pow__(self, k: int):
        out = TruncPoly.constant(self.nvars, self.d, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return (isinstance(other, TruncPoly) and self.nvars == other.nvars
                and self.d == other.d and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, self.d, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, e) -> Fraction:
        return self.terms.get(tuple(e), Fraction(0))

    def min_degree(self) -> int | None:
        return min((sum(e) for e in self.terms), default=None)

    def substitute(self, images: Sequence["TruncPoly"]) -> "TruncPoly":
        """Replace variable ``k`` by ``images[k]`` (all in the same ring)."""
        out = TruncPoly.zero(images[0].nvars, images[0].d)
        powers: dict[tuple[int, int], TruncPoly] = {}
        for e, c in self.terms.items():
            term = TruncPoly.constant(out.nvars, out.d, c)
            for k, p in enumerate(e):
                if p:
                    if (k, p) not in powers:
                        powers[(k, p)] = images[k] ** p
                    term = term * powers[(k, p)]
            out = out + term
        return out

    def to_json(self) -> list[dict]:
        return [{"monomial exponents": list(e), "coeff": str(c)}
                for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data, nvars: int, d: int) -> "TruncPoly":
        terms: dict = {}
        for item in data:
            e = tuple(item.get("monomial exponents", item.get("exponents")))
            c = Fraction(str(item["coeff"]))
            terms[e] = terms.get(e, Fraction(0)) + c
        return cls(nvars, d, terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{list(e)}" for e, c in sorted(self.terms.items()))


@dataclass(frozen=True)
class NormalForm:
    s: int
    t: int
    d: int
    h: tuple  # s TruncPoly over x_1..x_t

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(self.h))
        if len(self.h) != self.s:
            raise ValueError("need one h_i per y-variable")
        for p in self.h:
            if p.nvars != self.t or p.d != self.d:
                raise ValueError("h_i must be polynomials in the t x-variables truncated at d")
            if p.coeff((0,) * self.t):
                raise ValueError("h_i must vanish at the origin")

    def generators(self) -> list[TruncPoly]:
        """``y_i + h_i(x)`` in the full ring."""
        n = self.s + self.t
        out = []
        for i, p in enumerate(self.h):
            g = TruncPoly.var(n, self.d, i)
            g = g + TruncPoly(n, self.d, {(0,) * self.s + e: c for e, c in p.terms.items()})
            out.append(g)
        return out

    def to_json(self) -> dict:
        return {"s": self.s, "t": self.t, "d": self.d, "h": [p.to_json() for p in self.h]}

    @classmethod
    def from_json(cls, data: dict) -> "NormalForm":
        s, t, d = int(data["s"]), int(data["t"]), int(data["d"])
        return cls(s, t, d, tuple(TruncPoly.from_json(p, t, d) for p in data["h"]))


def _y_linear_matrix(gens, s) -> list[list[Fraction]]:
    n = gens[0].nvars
    return [[g.coeff(tuple(int(k == j) for k in range(n))) for j in range(s)] for g in gens]


def normalize(generators: Sequence[TruncPoly], s: int) -> NormalForm:
    """The unique generating set ``y_i + h_i(x)`` of the ideal ``(generators) + m^d``."""
    gens = list(generators)
    if len(gens) != s or s < 1:
        raise ValueError("need exactly s generators")
    n, d = gens[0].nvars, gens[0].d
    t = n - s
    if t < 0 or any(g.nvars != n or g.d != d for g in gens):
        raise ValueError("generators must share one ring")
    if any(g.coeff((0,) * n) for g in gens):
        raise ValueError("generators must vanish at the origin")
    L = _y_linear_matrix(gens, s)
    if rank(L) < s:
        raise DegenerateLinearPart(f"y-linear coefficient matrix {L} is singular")
    Linv = inverse(L)
    gens = [sum((g.scale(Linv[i][j]) for j, g in enumerate(gens)), TruncPoly.zero(n, d))
            for i in range(s)]
    # u_i = y_i + r_i(x, y); modulo the ideal y_i = -r_i(x, y), iterated to a fixed point
    rest = [g - TruncPoly.var(n, d, i) for i, g in enumerate(gens)]
    xs = [TruncPoly.var(n, d, s + j) for j in range(t)]
    images = [TruncPoly.zero(n, d)] * s
    for _ in range(d + 1):
        new = [-r.substitute(images + xs) for r in rest]
        if new == images:
            break
        images = new
    else:
        raise AssertionError("elimination did not stabilise")
    h = []
    for img in images:
        if any(any(e[:s]) for e in img.terms):
            raise AssertionError("y-variables survived elimination")
        h.append(TruncPoly(t, d, {e[s:]: -c for e, c in img.terms.items()}))
    return NormalForm(s, t, d, tuple(h))


def _nonzero(scalars):
    out = [as_fraction(c) for c in scalars]
    if any(c == 0 for c in out):
        raise ValueError("torus scalars must be nonzero")
    return out


def act_on_normal_form(mu, lam, nf: NormalForm) -> NormalForm:
    """Image of ``nf`` under ``y_i -> mu_i y_i, x_j -> lam_j x_j``, renormalized."""
    mu, lam = _nonzero(mu), _nonzero(lam)
    if len(mu) != nf.s or len(lam) != nf.t:
        raise ValueError("scalar vector lengths must be s and t")
    h = []
    for m, p in zip(mu, nf.h):
        terms = {}
        for e, c in p.terms.items():
            w = c / m
            for l, k in zip(lam, e):
                w *= l ** k
            terms[e] = w
        h.append(TruncPoly(nf.t, nf.d, terms))
    return NormalForm(nf.s, nf.t, nf.d, tuple(h))


def act_on_generators(mu, lam, gens: Sequence[TruncPoly]) -> list[TruncPoly]:
    """Substitute ``y_i -> mu_i y_i`` and ``x_j -> lam_j x_j`` into raw generators."""
    scalars = _nonzero(list(mu) + list(lam))
    out = []
    for g in gens:
        terms = {}
        for e, c in g.terms.items():
            w = c
            for v, k in zip(scalars, e):
                w *= v ** k
            terms[e] = w
        out.append(TruncPoly(g.nvars, g.d, terms))
    return out


def stabilizer(nf: NormalForm) -> list[list[int]]:
    """Saturated basis of the cocharacters ``(m, l)`` of ``(C*)^(s+t)`` fixing ``nf``.

    A monomial ``x^e`` of ``h_i`` is fixed iff ``m_i = <l, e>``.
    """
    rows = []
    for i, p in enumerate(nf.h):
        for e in p.terms:
            rows.append([int(k == i) for k in range(nf.s)] + [-x for x in e])
    return integer_kernel(rows, nf.s + nf.t)


def _check_c(nf: NormalForm, c):
    c = [tuple(int(x) for x in row) for row in c]
    if len(c) != nf.s or any(len(row) != nf.t for row in c):
        raise ValueError("c must be an s x t matrix")
    if any(x < 0 for row in c for x in row):
        raise ValueError("c must be nonnegative")
    if any(sum(row) > nf.d - 1 for row in c):
        raise ValueError("each row sum of c must be at most d - 1")
    return c


def in_W0(nf: NormalForm, c) -> bool:
    c = _check_c(nf, c)
    return all(p.coeff(row) != 0 for p, row in zip(nf.h, c))


def t_prime_normalize(nf: NormalForm, c) -> NormalForm:
    """Rescale each ``h_i`` so the coefficient of ``x^{c_i}`` is 1."""
    if not in_W0(nf, c):
        raise ValueError("normal form is not in W0 for this exponent matrix")
    return NormalForm(nf.s, nf.t, nf.d,
                      tuple(p.scale(1 / p.coeff(row)) for p, row in zip(nf.h, _check_c(nf, c))))


def monomial_form(c, d: int) -> NormalForm:
    """The distinguished form ``h_i = x^{c_i}``."""
    c = [tuple(int(x) for x in row) for row in c]
    t = len(c[0])
    return NormalForm(len(c), t, d, tuple(TruncPoly(t, d, {row: 1}) for row in c))


def torus_lattice(c) -> list[list[int]]:
    """Cocharacters ``(c l, l)``: the rows ``(c e_k, e_k)``."""
    t = len(c[0])
    return [[row[k] for row in c] + [int(j == k) for j in range(t)] for k in range(t)]
