from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from xchannel.errors import OracleScopeError, OrderingError, UnsupportedConfigError
from xchannel.oracle import oracle_max_dof, oracle_max_dof_naive
from xchannel.planner import (
    AntennaConfig,
    BlockPlan,
    Case,
    Scenario,
    classify,
    format_rational,
    iter_configs,
    kernel_dims,
    outer_bound,
    parse_rational,
    plan,
    plan_blocks,
    plan_violations,
)


def cfg(*dims):
    return AntennaConfig(*dims)


@pytest.mark.parametrize("dims,case,x", [
    ((2, 2, 2, 1), Case.A, None),
    ((6, 3, 3, 3), Case.B1, None),
    ((8, 4, 4, 3), Case.B2, None),
    ((4, 4, 3, 2), Case.B3, None),
    ((7, 6, 6, 5), Case.C, 2),
    ((7, 4, 4, 4), Case.C, 1),
    ((5, 4, 4, 3), Case.C, 0),
])
def test_classify_transmit_rich(dims, case, x):
    tag = classify(cfg(*dims))
    assert tag.scenario is Scenario.TRANSMIT_RICH
    assert tag.case is case
    assert tag.x == x


def test_classify_receive_rich_mirror():
    assert classify(cfg(2, 1, 2, 2)).case is Case.A_PRIME
    assert classify(cfg(3, 3, 6, 3)).case is Case.B1_PRIME
    assert classify(cfg(3, 2, 5, 3)).case is Case.B2_PRIME
    assert classify(cfg(3, 3, 5, 4)).case is Case.B3_PRIME
    assert classify(cfg(3, 3, 4, 4)).case is Case.C_PRIME
    assert classify(cfg(3, 3, 4, 4)).x == 1


def test_classify_unsupported():
    assert classify(cfg(1, 1, 1, 1)).case is Case.UNSUPPORTED
    assert classify(cfg(3, 1, 1, 1)).case is Case.UNSUPPORTED
    assert classify(cfg(1, 1, 3, 1)).case is Case.UNSUPPORTED
    with pytest.raises(UnsupportedConfigError):
        plan(cfg(1, 1, 1, 1))


def test_classify_mixed_ordering_rejected():
    with pytest.raises(OrderingError):
        classify(cfg(1, 2, 1, 1))
    with pytest.raises(OrderingError):
        classify(cfg(4, 2, 3, 1))


def test_nonpositive_antennas_rejected():
    with pytest.raises(ValueError):
        AntennaConfig(0, 1, 1, 1)
    with pytest.raises(ValueError):
        AntennaConfig(2.5, 1, 1, 1)


def test_tie_break_boundaries():
    # M1+M2 = 2N1+N2 belongs to B
    assert classify(cfg(5, 4, 3, 3)).case.family == "B"
    # M1+M2 = 3N2 < 2N1+N2 belongs to C with x = 0
    t = classify(cfg(5, 4, 4, 3))
    assert (t.case, t.x) == (Case.C, 0)
    # M1+M2 = 3N2 = 2N1+N2 belongs to B
    assert classify(cfg(3, 3, 2, 2)).case.family == "B"


def test_all_equal_defaults_to_transmit_rich():
    assert classify(cfg(3, 3, 3, 3)).scenario is Scenario.TRANSMIT_RICH
    tag = classify(cfg(3, 3, 3, 3), prefer=Scenario.RECEIVE_RICH)
    assert (tag.scenario, tag.case, tag.x) == (Scenario.RECEIVE_RICH, Case.C_PRIME, 3)


def blocks(p):
    return p.L, p.K, p.J, p.G


@pytest.mark.parametrize("dims,L,K,J,G,dof", [
    ((7, 6, 5, 4), (3, 2, 0), (2, 2, 1), (2, 2, 0), (1, 1, 1), Fraction(17, 2)),
    ((8, 4, 4, 3), (3, 2, 0), (2, 2, 1), (1, 1, 0), (0, 0, 1), Fraction(13, 2)),
    ((5, 4, 4, 3), (2, 2, 0), (1, 1, 2), (1, 1, 0), (0, 0, 2), Fraction(6)),
    ((7, 6, 6, 5), (2, 2, 1), (1, 1, 3), (1, 1, 1), (0, 0, 4), Fraction(17, 2)),
    ((7, 4, 4, 4), (3, 3, 0), (3, 3, 0), (0, 0, 1), (0, 0, 1), Fraction(7)),
    ((6, 3, 3, 3), (2, 1, 1), (2, 1, 1), (0, 0, 1), (0, 0, 1), Fraction(5)),
    ((2, 2, 2, 1), (1, 0, 0), (0, 0, 1), (1, 1, 0), (0, 0, 1), Fraction(5, 2)),
    ((8, 7, 5, 5), (3, 3, 0), (3, 3, 0), (2, 2, 0), (2, 2, 0), Fraction(10)),
    ((4, 4, 3, 2), (2, 1, 0), (1, 1, 0), (2, 1, 0), (1, 1, 0), Fraction(5)),
])
def test_worked_example_plans(dims, L, K, J, G, dof):
    p = plan(cfg(*dims))
    assert blocks(p) == (L, K, J, G)
    assert p.dof == dof
    assert plan_violations(p) == []


@pytest.mark.parametrize("dims,bound", [
    ((2, 2, 2, 1), Fraction(5, 2)),
    ((7, 4, 4, 4), Fraction(22, 3)),
    ((6, 3, 3, 3), Fraction(6)),
    ((3, 3, 4, 4), Fraction(16, 3)),
    ((2, 1, 8, 8), Fraction(3)),
])
def test_outer_bound(dims, bound):
    assert outer_bound(cfg(*dims)) == bound


def test_outer_bound_unsupported():
    with pytest.raises(UnsupportedConfigError):
        outer_bound(cfg(1, 1, 1, 1))


def test_receive_rich_case_c_prime_mod1():
    p = plan(cfg(3, 3, 4, 4))
    assert (p.K1, p.K2, p.G1, p.G2, p.L1, p.L2, p.J1, p.J2) == (3, 0, 3, 0, 2, 0, 2, 0)
    assert p.dof == 5
    assert kernel_dims(p.config) == (4, 4)


def test_receive_rich_case_c_prime_mod2_uses_table_form():
    # the mirror of (7,6,6,5); its m11 length must equal Q11 of the original
    p = plan(cfg(6, 5, 7, 6))
    assert p.tag.x == 2
    assert (p.K1, p.G1, p.G2, p.L1, p.J1) == (3, 3, 1, 5, 5)
    assert p.Q11 == plan(cfg(7, 6, 6, 5)).Q11


def test_receive_rich_b3_far_from_boundary():
    p = plan(cfg(2, 1, 8, 8))
    assert p.tag.case is Case.B3_PRIME
    assert kernel_dims(p.config) == (0, 0)
    assert (p.Q11, p.Q21, p.Q12, p.Q22) == (2, 2, 1, 1)
    assert p.dof == 3 == p.outer_bound


def test_receive_rich_b3_boundary_first_set():
    # N1+N2 = 2M1+M2 and M1 > 2(N2-M2)
    p = plan(cfg(3, 3, 5, 4))
    assert (p.K1, p.K2, p.G1, p.G2, p.L1, p.L2, p.J1, p.J2) == (2, 0, 2, 0, 4, 0, 4, 0)
    assert p.dof == 6 == p.outer_bound


def test_receive_rich_b3_boundary_second_set_respects_budgets():
    # N1+N2 = 2M1+M2, M1 <= 2(N2-M2) and N1 > N2
    p = plan(cfg(5, 3, 7, 6))
    assert (p.K1, p.K2, p.G1, p.G2, p.L1, p.L2, p.J1, p.J2) == (2, 3, 2, 0, 4, 1, 4, 0)
    assert plan_violations(p) == []
    assert p.dof == 8 == p.outer_bound


def test_b1_prime_and_b2_prime():
    p = plan(cfg(3, 3, 6, 3))
    assert (p.K1, p.K2, p.G1, p.G2, p.L1, p.J1) == (0, 1, 0, 1, 4, 4)
    p = plan(cfg(3, 2, 5, 3))
    assert p.tag.case is Case.B2_PRIME
    assert (p.K2, p.G2, p.L1, p.J1) == (2, 1, 3, 3)


def test_every_plan_is_feasible_up_to_eight():
    bad = [(c, plan_violations(plan(c))) for c in iter_configs(8) if plan_violations(plan(c))]
    assert bad == []


def test_gap_law():
    for c in iter_configs(8, Scenario.TRANSMIT_RICH):
        p = plan(c)
        fam = p.tag.case
        if fam in (Case.A, Case.B3):
            assert p.gap == 0
        elif fam is Case.B2:
            assert p.gap == Fraction(1, 2)
        elif fam is Case.B1:
            assert p.gap == 1
        else:
            assert p.gap == [Fraction(0), Fraction(1, 3), Fraction(1, 6)][p.tag.x % 3]


def test_symmetry_up_to_eight():
    for c in iter_configs(8, Scenario.TRANSMIT_RICH):
        p = plan(c)
        s = c.swapped()
        q = plan_blocks(s, classify(s, prefer=Scenario.RECEIVE_RICH))
        assert q.dof == p.dof
        assert (q.Q11, q.Q21, q.Q12, q.Q22) == (p.Q11, p.Q12, p.Q21, p.Q22)


def test_iter_configs_sorted_and_valid():
    configs = list(iter_configs(4))
    assert configs == sorted(configs)
    assert all(c.is_transmit_rich or c.is_receive_rich for c in configs)
    assert cfg(1, 1, 1, 1) not in configs
    assert cfg(1, 1, 1, 1) in list(iter_configs(4, include_unsupported=True))


def test_plan_dict_round_trip():
    for c in [cfg(7, 6, 5, 4), cfg(3, 3, 4, 4), cfg(7, 6, 6, 5)]:
        p = plan(c)
        assert BlockPlan.from_dict(p.to_dict()) == p


def test_plan_dict_detects_inconsistent_dof():
    d = plan(cfg(7, 6, 5, 4)).to_dict()
    d["dof"] = "9"
    with pytest.raises(ValueError):
        BlockPlan.from_dict(d)


def test_format_rational():
    assert format_rational(Fraction(17, 2)) == "17/2"
    assert format_rational(Fraction(6, 1)) == "6"
    assert format_rational(Fraction(2, 6)) == "1/3"
    assert parse_rational("13/2") == Fraction(13, 2)


def test_block_plan_rejects_negative():
    with pytest.raises(ValueError):
        BlockPlan(cfg(2, 2, 2, 1), classify(cfg(2, 2, 2, 1)), L1=-1)


# --- oracle -----------------------------------------------------------------

@pytest.mark.parametrize("dims,dof", [
    ((2, 2, 2, 1), Fraction(5, 2)),
    ((4, 4, 3, 2), Fraction(5)),
    ((7, 4, 4, 4), Fraction(7)),
    ((3, 3, 4, 4), Fraction(5)),
])
def test_oracle_examples(dims, dof):
    assert oracle_max_dof(cfg(*dims)) == dof


def test_oracle_scope():
    with pytest.raises(OracleScopeError):
        oracle_max_dof(cfg(9, 1, 1, 1))


def test_oracle_unsupported_is_zero():
    assert oracle_max_dof(cfg(1, 1, 1, 1)) == 0


def test_reduced_oracle_matches_literal_enumeration():
    for c in iter_configs(4, include_unsupported=True):
        assert oracle_max_dof(c) == oracle_max_dof_naive(c), c


@given(st.sampled_from(list(iter_configs(8))))
def test_oracle_agrees_with_plan(c):
    assert oracle_max_dof(c) == plan(c).dof
