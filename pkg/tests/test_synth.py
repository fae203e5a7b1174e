import numpy as np
import pytest

from xchannel.errors import PlanInfeasibleError, ShapeError
from xchannel.planner import AntennaConfig, BlockPlan, Scenario, classify, plan
from xchannel.realmap import colinearity_residual, jrotate, numeric_rank, realify_matrix, relative_residual
from xchannel.synth import (
    MESSAGES,
    PrecoderSet,
    generate_channels,
    synth_receive_rich,
    synth_transmit_rich,
    synthesize,
)


def test_channel_dimensions():
    ch = generate_channels(AntennaConfig(2, 2, 2, 1), seed=3)
    assert ch.H11.shape == (2, 2)
    assert ch.H21.shape == (1, 2)
    assert ch.H12.shape == (2, 2)
    assert ch.H22.shape == (1, 2)


def test_channels_deterministic():
    c = AntennaConfig(7, 6, 5, 4)
    a, b = generate_channels(c, 11), generate_channels(c, 11)
    for r, t in MESSAGES:
        assert np.array_equal(a.H(r, t), b.H(r, t))
    assert not np.array_equal(a.H11, generate_channels(c, 12).H11)


def test_channel_statistics():
    ch = generate_channels(AntennaConfig(100, 100, 100, 100), seed=0)
    entries = np.concatenate([ch.H(r, t).ravel() for r, t in MESSAGES])
    assert entries.size == 40000
    assert abs(entries.mean()) <= 0.05
    assert abs(np.mean(np.abs(entries) ** 2) - 1.0) <= 0.1


def test_channel_shape_validation():
    c = AntennaConfig(2, 2, 2, 1)
    ch = generate_channels(c, 0)
    with pytest.raises(ShapeError):
        type(ch)(c, ch.H11, ch.H12, ch.H11, ch.H22)


def test_nulling_for_small_case_a():
    c = AntennaConfig(2, 2, 2, 1)
    p = plan(c)
    for seed in range(20):
        ch = generate_channels(c, seed)
        pre = synth_transmit_rich(ch, p, seed)
        v11 = pre.message(1, 1).V
        assert v11.shape == (4, 1)
        assert relative_residual(realify_matrix(ch.H21), v11) <= 1e-9
        assert pre.message(2, 1).V.shape[1] == 0


def test_alignment_pair_is_colinear():
    c = AntennaConfig(7, 6, 5, 4)
    p = plan(c)
    ch = generate_channels(c, 5)
    pre = synthesize(ch, p, 6)
    a = ch.Hbar(1, 1) @ pre.message(2, 1).U[:, 0]
    b = ch.Hbar(1, 2) @ pre.message(2, 2).U[:, 0]
    assert colinearity_residual(a, b) <= 1e-9
    assert numeric_rank(np.column_stack([a, b])) == 1


def test_group_sizes_and_unit_norms():
    for dims in [(7, 6, 5, 4), (7, 6, 6, 5), (6, 3, 3, 3)]:
        c = AntennaConfig(*dims)
        p = plan(c)
        ch = generate_channels(c, 1)
        pre = synthesize(ch, p, 2)
        for r, t in MESSAGES:
            g = pre.message(r, t)
            L = p.blocks(r, t)
            assert (g.V.shape[1], g.W.shape[1], g.U.shape[1]) == L
            if g.count:
                assert np.allclose(np.linalg.norm(g.matrix, axis=0), 1.0)


def test_j_pairing_exact():
    c = AntennaConfig(8, 7, 5, 5)
    ch = generate_channels(c, 0)
    pre = synthesize(ch, plan(c), 0)
    for r, t in MESSAGES:
        g = pre.message(r, t)
        n = g.W.shape[1]
        assert np.array_equal(g.W, jrotate(g.V[:, :n]))


def test_case_c_extra_vectors_are_unaligned():
    c = AntennaConfig(7, 6, 6, 5)
    p = plan(c)
    assert p.G3 > p.K3
    ch = generate_channels(c, 4)
    pre = synthesize(ch, p, 4)
    U21, U22 = pre.message(2, 1).U, pre.message(2, 2).U
    assert U22.shape[1] == p.G3
    seen = ch.Hbar(1, 1) @ U21
    extra = ch.Hbar(1, 2) @ U22[:, p.K3:]
    assert numeric_rank(np.hstack([seen, extra])) == p.G3


def test_synthesis_deterministic():
    c = AntennaConfig(5, 4, 4, 3)
    p = plan(c)
    ch = generate_channels(c, 9)
    a, b = synthesize(ch, p, 10), synthesize(ch, p, 10)
    for key in MESSAGES:
        assert np.array_equal(a.matrix(*key), b.matrix(*key))


def test_plan_channel_mismatch():
    ch = generate_channels(AntennaConfig(7, 6, 5, 4), 0)
    with pytest.raises(ShapeError):
        synth_transmit_rich(ch, plan(AntennaConfig(8, 4, 4, 3)), 0)
    with pytest.raises(ShapeError):
        synth_receive_rich(ch, plan(AntennaConfig(7, 6, 5, 4)), 0)


def test_receive_rich_kernel_dimension_and_triples():
    c = AntennaConfig(3, 3, 4, 4)
    p = plan(c)
    ch = generate_channels(c, 1)
    Hb = np.block([
        [np.eye(8), -ch.Hbar(1, 1), np.zeros((8, 6))],
        [np.eye(8), np.zeros((8, 6)), -ch.Hbar(1, 2)],
    ])
    assert Hb.shape == (16, 20)
    assert Hb.shape[1] - numeric_rank(Hb) == 4
    pre = synth_receive_rich(ch, p, 2)
    h = pre.align[1]
    assert h.shape[1] == p.K1
    for t in (1, 2):
        x = pre.message(2, t).V
        assert np.max(np.linalg.norm(ch.Hbar(1, t) @ x - h, axis=0) / np.linalg.norm(h, axis=0)) <= 1e-9
    assert numeric_rank(h) == p.K1
    assert numeric_rank(pre.tx_matrix(1)) == pre.tx_matrix(1).shape[1]


def test_receive_rich_empty_kernel_rejects_aligned_blocks():
    c = AntennaConfig(2, 1, 8, 8)
    ch = generate_channels(c, 0)
    tag = classify(c)
    ok = synth_receive_rich(ch, plan(c), 0)
    assert ok.align[1].shape[1] == 0
    bad = BlockPlan(c, tag, K1=1, G1=1, K2=1, L2=2, J2=1)
    with pytest.raises(PlanInfeasibleError):
        synth_receive_rich(ch, bad, 0)


def test_complex_view_round_trips():
    c = AntennaConfig(7, 6, 5, 4)
    ch = generate_channels(c, 0)
    pre = synthesize(ch, plan(c), 0)
    V = pre.complex_matrix(2, 1)
    assert V.shape == (7, 5)
    # nulled columns vanish through the complex channel too
    assert np.linalg.norm(ch.H11 @ V[:, :4]) <= 1e-9
