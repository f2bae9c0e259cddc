from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from toricgit.blowup import (
    CyclicQuotient,
    WeightVector,
    blowup_discrepancy,
    charts,
    classify_singularities,
    ideal_generators,
    minimal_discrepancy_scan,
    polarization_coefficients,
    resolution_tower,
    standard_quotient,
    toric_discrepancy,
    verify_Ic_claim,
)


def brute_generators(a, c, box=8):
    """Minimal monomials of weight >= c found by a plain box search."""
    hits = [m for m in product(range(box), repeat=len(a))
            if sum(x * w for x, w in zip(m, a)) >= c]
    return sorted(m for m in hits
                  if not any(n != m and all(x <= y for x, y in zip(n, m)) for n in hits))


def test_weight_parsing():
    assert WeightVector.parse("3^2,1^3").a == (3, 3, 1, 1, 1)
    assert WeightVector.parse("2,1,1").a == (2, 1, 1)
    assert WeightVector.from_shorthand(1, 2, 4).a == (4, 1, 1)
    with pytest.raises(ValueError):
        WeightVector((0, 1))


def test_ideal_generator_examples():
    assert ideal_generators((1, 1), 2) == [(0, 2), (1, 1), (2, 0)]
    assert ideal_generators((2, 1), 0) == [(0, 0)]
    assert ideal_generators((3, 1, 1), 2) == [(0, 0, 2), (0, 1, 1), (0, 2, 0), (1, 0, 0)]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=3), st.integers(0, 6))
def test_ideal_generators_match_oracle(a, c):
    assert ideal_generators(a, c) == brute_generators(a, c)


def test_Ic_claim_small():
    assert verify_Ic_claim(1, 2, 3)
    assert verify_Ic_claim(2, 3, 4)


def test_charts_of_211():
    kinds = classify_singularities((2, 1, 1))
    assert [k.singular for k in kinds] == [True, False, False]
    assert kinds[0].core == CyclicQuotient(2, (1, 1, 1))


def test_chart_pullback():
    ch = charts((2, 1, 1))[0]
    # u_1 = v_1^2, u_2 = v_1 v_2, u_3 = v_1 v_3
    assert ch.pullback((1, 0, 0)) == (2, 0, 0)
    assert ch.pullback((0, 1, 1)) == (2, 1, 1)


def test_claim_type_for_d_s_t():
    for s, t, d in [(2, 3, 3), (3, 2, 2), (1, 4, 5)]:
        kinds = classify_singularities(WeightVector.from_shorthand(s, t, d))
        for k in kinds[:s]:
            assert k.smooth_dim == s - 1
            assert k.core == standard_quotient(d, t)
        assert not any(k.singular for k in kinds[s:])


def test_cyclic_quotient_canonical_form():
    assert CyclicQuotient(5, (1, 2)) == CyclicQuotient(5, (3, 1))
    assert CyclicQuotient(5, (1, 2)) != CyclicQuotient(5, (1, 1))
    assert len({CyclicQuotient(4, (1, 3, 3)), CyclicQuotient(4, (3, 1, 1))}) == 1
    assert str(CyclicQuotient(3, (1, -1))) == "1/3(1,2)"


def test_pseudoreflection_smoothness():
    assert CyclicQuotient(3, (1, 0)).is_smooth()
    assert not CyclicQuotient(3, (1, 2)).is_smooth()
    assert CyclicQuotient(1, (0, 0)).is_smooth()
    assert not CyclicQuotient(2, (1, 1)).is_smooth()


def test_discrepancies():
    assert blowup_discrepancy((1, 1, 1)).discrepancy == 2
    assert blowup_discrepancy((2, 1, 1)).log_discrepancy == 4
    Q = standard_quotient(4, 3)
    assert toric_discrepancy(Q, [Fraction(3, 4)] + [Fraction(1, 4)] * 3) == Fraction(1, 2)
    with pytest.raises(ValueError):
        toric_discrepancy(Q, [Fraction(1, 3)] * 4)
    with pytest.raises(ValueError):
        toric_discrepancy(Q, [Fraction(3, 2)] + [Fraction(1, 2)] * 3)  # twice (3/4, 1/4, ...)


def test_resolution_tower_d4():
    tower = resolution_tower(4, 3)
    assert len(tower.steps) == 3
    assert [st.divisor for st in tower.steps] == [(3, 1, 1, 1), (2, 1, 1, 1), (1, 1, 1, 1)]
    assert tower.steps[0].cumulative_discrepancy == Fraction(1, 2)
    assert tower.steps[-1].residual.is_smooth()
    assert tower.to_json()["steps"][1]["cumulative_discrepancy"] == "1"


@pytest.mark.parametrize("d", range(2, 7))
def test_tower_cumulative_discrepancy(d):
    t = 3
    for st_ in resolution_tower(d, t).steps:
        assert st_.cumulative_discrepancy == Fraction(st_.level * (t - 1), d)
        assert st_.residual == standard_quotient(d - st_.level, t)


def test_scan_unique_minimum():
    scan = minimal_discrepancy_scan(5, 3, Fraction(12, 5))
    assert scan.minimum == Fraction(2, 5) and scan.unique
    assert scan.argmin == (Fraction(4, 5),) + (Fraction(1, 5),) * 3
    with pytest.raises(ValueError):
        minimal_discrepancy_scan(5, 3, 1)


def test_scan_examples():
    s3 = minimal_discrepancy_scan(3, 3, 3)
    assert (s3.minimum, s3.unique) == (Fraction(2, 3), True)
    assert s3.argmin == (Fraction(2, 3),) + (Fraction(1, 3),) * 3
    s2 = minimal_discrepancy_scan(2, 3, 3)
    assert (s2.minimum, s2.unique) == (1, True)
    s1 = minimal_discrepancy_scan(1, 3, 4)
    assert (s1.minimum, s1.argmin) == (3, (1, 1, 1, 1))


def test_discrepancy_examples():
    assert blowup_discrepancy((5, 1, 1, 1)).discrepancy == 7
    assert blowup_discrepancy((1,)).discrepancy == 0
    assert toric_discrepancy(CyclicQuotient(1, (0, 0, 0)), (1, 1, 1)) == 2
    assert toric_discrepancy(standard_quotient(2, 3), [Fraction(1, 2)] * 4) == 1


def test_polarization_coefficients():
    b, c = polarization_coefficients([Fraction(1, 2), Fraction(1, 3), 2])
    assert len(set(b)) == 3 and all(x > 0 for x in b)
    assert all(c * e - x >= 0 for e, x in zip([Fraction(1, 2), Fraction(1, 3), 2], b))
    assert polarization_coefficients([Fraction(1, 2)] * 3) == ([1, 2, 3], 6)
    assert polarization_coefficients([2, 3]) == ([1, 2], 1)
    with pytest.raises(ValueError):
        polarization_coefficients([0])
