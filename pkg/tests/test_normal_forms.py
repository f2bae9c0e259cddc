import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from toricgit.exact import same_lattice
from toricgit.normal_forms import (
    DegenerateLinearPart,
    NormalForm,
    TruncPoly,
    act_on_generators,
    act_on_normal_form,
    in_W0,
    monomial_form,
    normalize,
    stabilizer,
    t_prime_normalize,
    torus_lattice,
)
from toricgit.torus import cyclic_exponents


def random_poly(rng, n, d, const=False, density=0.4):
    terms = {}
    for e in product(range(d), repeat=n):
        if sum(e) >= d or (not const and sum(e) == 0):
            continue
        if rng.random() < density:
            terms[e] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    return TruncPoly(n, d, terms)


def random_generators(rng, s, t, d):
    n = s + t
    while True:
        gens = [random_poly(rng, n, d) for _ in range(s)]
        try:
            normalize(gens, s)
            return gens
        except DegenerateLinearPart:
            continue


def in_ideal_mod_md(f, nf):
    """Reduce f by y_i -> -h_i(x); f lies in the ideal iff the result vanishes."""
    s, t = nf.s, nf.t
    n = s + t
    images = [TruncPoly(n, nf.d, {(0,) * s + e: -c for e, c in p.terms.items()}) for p in nf.h]
    images += [TruncPoly.var(n, nf.d, s + j) for j in range(t)]
    return not f.substitute(images)


def test_already_normal():
    u = TruncPoly(3, 3, {(1, 0, 0): 1, (0, 1, 1): 1})
    nf = normalize([u], 1)
    assert nf.h[0] == TruncPoly(2, 3, {(1, 1): 1})


def test_two_step_elimination():
    u = TruncPoly(3, 3, {(1, 0, 0): 2, (0, 1, 0): 2, (1, 1, 0): 2})
    nf = normalize([u], 1)
    assert nf.h[0] == TruncPoly(2, 3, {(1, 0): 1, (2, 0): -1})
    assert in_ideal_mod_md(u, nf)


def test_degenerate_linear_part():
    y = TruncPoly(4, 3, {(1, 0, 0, 0): 1, (0, 1, 0, 0): 1})
    with pytest.raises(DegenerateLinearPart):
        normalize([y, y], 2)


def test_act_examples():
    nf = NormalForm(1, 2, 4, (TruncPoly(2, 4, {(1, 2): 1}),))
    assert act_on_normal_form([4], [1, 2], nf) == nf
    assert act_on_normal_form([1], [1, 1], nf) == nf
    lin = NormalForm(1, 2, 3, (TruncPoly(2, 3, {(1, 0): 1}),))
    assert act_on_normal_form([1], [3, 1], lin).h[0] == TruncPoly(2, 3, {(1, 0): 3})
    with pytest.raises(ValueError):
        act_on_normal_form([0], [1, 1], lin)


def test_stabilizer_examples():
    c = cyclic_exponents(3)
    S = stabilizer(monomial_form(c, 4))
    assert len(S) == 3
    assert same_lattice(S, torus_lattice(c))
    zero = NormalForm(2, 2, 3, (TruncPoly(2, 3), TruncPoly(2, 3)))
    assert len(stabilizer(zero)) == 4
    finite = NormalForm(1, 1, 3, (TruncPoly(1, 3, {(1,): 1, (2,): 1}),))
    assert stabilizer(finite) == []


def test_w0_and_t_prime():
    c = cyclic_exponents(3)
    nf = monomial_form(c, 4)
    assert in_W0(nf, c)
    assert t_prime_normalize(nf, c) == nf
    scaled = NormalForm(1, 2, 4, (TruncPoly(2, 4, {(1, 2): 5, (1, 0): 1}),))
    norm = t_prime_normalize(scaled, [[1, 2]])
    assert norm.h[0].coeff((1, 2)) == 1
    assert t_prime_normalize(norm, [[1, 2]]) == norm
    missing = NormalForm(1, 2, 4, (TruncPoly(2, 4, {(1, 0): 1}),))
    assert not in_W0(missing, [[1, 2]])
    with pytest.raises(ValueError):
        t_prime_normalize(missing, [[1, 2]])
    with pytest.raises(ValueError):
        in_W0(nf, [[3, 1, 0]] * 3)


def test_json_roundtrip():
    nf = NormalForm(1, 2, 3, (TruncPoly(2, 3, {(1, 0): Fraction(1, 2), (0, 2): -1}),))
    data = nf.to_json()
    assert data["h"][0][0] == {"monomial exponents": [0, 2], "coeff": "-1"}
    assert NormalForm.from_json(data) == nf


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3), st.integers(2, 4))
def test_normal_form_depends_only_on_ideal(seed, s, t, d):
    rng = random.Random(seed)
    gens = random_generators(rng, s, t, d)
    nf = normalize(gens, s)
    for g in gens:
        assert in_ideal_mod_md(g, nf)
    # re-generate: u_i <- u_i + p * u_j, then an invertible linear recombination
    i, j = rng.randrange(s), rng.randrange(s)
    p = random_poly(rng, s + t, d, const=(i != j))
    regen = list(gens)
    if i != j:
        regen[i] = regen[i] + p * regen[j]
    regen = [g.scale(rng.choice([1, 2, -3])) for g in regen]
    assert normalize(regen, s) == nf


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_equivariance(seed):
    rng = random.Random(seed)
    s, t, d = rng.randint(1, 2), rng.randint(1, 3), rng.randint(2, 4)
    gens = random_generators(rng, s, t, d)
    mu = [Fraction(rng.choice([-3, -1, 1, 2, 5]), rng.randint(1, 3)) for _ in range(s)]
    lam = [Fraction(rng.choice([-2, 1, 3]), rng.randint(1, 2)) for _ in range(t)]
    left = normalize(act_on_generators(mu, lam, gens), s)
    right = act_on_normal_form(mu, lam, normalize(gens, s))
    assert left == right


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_t_prime_preserves_stabilizer(seed):
    rng = random.Random(seed)
    s, t, d = rng.randint(1, 3), rng.randint(1, 3), 4
    c = [[rng.randint(0, 1) for _ in range(t)] for _ in range(s)]
    for row in c:
        if not any(row):
            row[0] = 1
    h = []
    for row in c:
        p = random_poly(rng, t, d, density=0.2)
        p = p + TruncPoly(t, d, {tuple(row): rng.choice([2, -1, Fraction(1, 3)])})
        if not p.coeff(tuple(row)):
            p = p + TruncPoly(t, d, {tuple(row): 1})
        h.append(p)
    nf = NormalForm(s, t, d, tuple(h))
    assert in_W0(nf, c)
    assert same_lattice(stabilizer(t_prime_normalize(nf, c)), stabilizer(nf))


def test_distinguished_form_rank_equals_t():
    for t in range(1, 4):
        c = [[(i + j) % 2 + (i == j) for j in range(t)] for i in range(t)]
        S = stabilizer(monomial_form(c, 4))
        assert len(S) == t
        assert same_lattice(S, torus_lattice(c))
