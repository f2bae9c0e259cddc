from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from toricgit.torus import (
    CertificateFails,
    NonQPCertificate,
    OrbitClass,
    TorusAction,
    action_from_subtorus,
    example30,
    find_unstable_smoothable,
    genus_condition,
    nonqp_certificate,
    orbit_semistable,
    orbit_stable,
    plane_curve_min_weight,
    semistable_cone,
    separated_pairs,
    simultaneous_polarization,
    verify_certificate,
)


def monomial_oracle(A, orbit, chi, kmax=8, emax=12):
    """Is some k*chi (k <= kmax) the weight of a monomial supported on the orbit?"""
    support = sorted(orbit.support)
    if not any(chi):
        return True
    weights = set()
    for e in product(range(emax + 1), repeat=len(support)):
        weights.add(tuple(sum(x * A.column(j)[i] for x, j in zip(e, support)) for i in range(A.rank)))
    return any(tuple(k * c for c in chi) in weights for k in range(1, kmax + 1))


def test_cyclic_action_facets():
    A, orbits = example30(3)
    expected = [{(1, 0, 0), (0, 0, 1), (-2, 1, 0)},
                {(1, 0, 0), (0, 1, 0), (0, -2, 1)},
                {(0, 1, 0), (0, 0, 1), (1, 0, -2)}]
    for O, exp in zip(orbits, expected):
        C = semistable_cone(A, O)
        assert {f.normal for f in C.facets} == exp
        assert not any(f.equality for f in C.facets)


def test_cyclic_action_certificate_and_separation():
    A, orbits = example30(3)
    cert = nonqp_certificate(A, orbits)
    pairs = [(s, chi) for s, chi in cert.subset_witnesses if len(s) == 2]
    assert len(pairs) == 3
    assert verify_certificate(A, cert)
    assert separated_pairs(A, orbits).separated


def test_cyclic_rank_two_flags_a_pair():
    A, orbits = example30(2)
    assert verify_certificate(A, nonqp_certificate(A, orbits))
    assert separated_pairs(A, orbits).failures == [(0, 1)]


def test_certificate_json_roundtrip():
    A, orbits = example30(3)
    cert = nonqp_certificate(A, orbits)
    back = NonQPCertificate.from_json(cert.to_json(A), A)
    assert back.subset_witnesses == cert.subset_witnesses
    assert verify_certificate(A, back)


def test_certificate_fails_with_witness():
    A = TorusAction.from_columns([(1, 0), (0, 1), (1, 1)])
    orbits = [OrbitClass(frozenset({0, 1})), OrbitClass(frozenset({2}))]
    with pytest.raises(CertificateFails) as info:
        nonqp_certificate(A, orbits)
    assert all(orbit_semistable(A, O, info.value.chi) for O in orbits)


def test_single_orbit_rejected():
    A, orbits = example30(3)
    with pytest.raises(ValueError):
        nonqp_certificate(A, orbits[:1])


def test_action_and_json():
    A = action_from_subtorus(1, 2, [[0, 3]])
    assert A.column(0) == (0, 3)
    assert TorusAction.from_json(A.to_json()) == A
    with pytest.raises(ValueError):
        action_from_subtorus(1, 2, [[-1, 0]])


def test_stable_requires_spanning_support():
    A = TorusAction.from_columns([(1, 0), (0, 1)])
    assert orbit_semistable(A, OrbitClass(frozenset({0})), (1, 0))
    assert not orbit_stable(A, OrbitClass(frozenset({0})), (1, 0))
    assert orbit_stable(A, OrbitClass(frozenset({0, 1})), (1, 1))
    assert simultaneous_polarization(A, [OrbitClass(frozenset({0, 1}))], "stable") == (1, 1)


columns = st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size=1, max_size=3)


@settings(max_examples=60, deadline=None)
@given(columns, st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.data())
def test_semistability_matches_monomial_oracle(cols, chi, data):
    A = TorusAction.from_columns(cols)
    support = data.draw(st.sets(st.integers(0, len(cols) - 1), min_size=1))
    O = OrbitClass(frozenset(support))
    assert orbit_semistable(A, O, chi) == monomial_oracle(A, O, chi)


def brute_min_weight(d, m, w=(1, 1, -2)):
    best = None
    for a in range(d + 1):
        for b in range(d - a + 1):
            c = d - a - b
            if a + b >= m:  # vanishes to order m at (0:0:1)
                val = a * w[0] + b * w[1] + c * w[2]
                best = val if best is None else min(best, val)
    return best


def test_min_weight_closed_form():
    for d in range(1, 31):
        for m in range(d + 1):
            assert plane_curve_min_weight(d, m) == brute_min_weight(d, m) == 3 * m - 2 * d


def test_genus_condition_edge_cases():
    assert genus_condition(50, 34)
    assert not genus_condition(50, 35)
    assert not genus_condition(2, 0)
    assert genus_condition(3, 0)


def test_unstable_smoothable_search():
    assert find_unstable_smoothable(20) == []
    found = find_unstable_smoothable(60)
    assert (50, 34) in found
    assert all(plane_curve_min_weight(d, m) > 0 for d, m in found)
