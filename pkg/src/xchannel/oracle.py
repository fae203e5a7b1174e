"""Brute-force maximum of the integer DoF programs for small antenna counts.

The block lengths enter every constraint only through a few sums. A sorted
pair ``a2 <= a1 <= b`` can reach exactly the sums ``0..2b``, so each pair is
enumerated by its sum. Likewise the receive-rich free blocks only matter
through their per-transmitter totals. Within those reduced coordinates the
search is exhaustive. The test suite checks it against a literal
enumeration of every tuple on small configurations.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .errors import OracleScopeError, UnsupportedConfigError
from .planner import AntennaConfig, Case, CaseTag, Scenario, classify, kernel_dims

__all__ = ["ORACLE_MAX_ANTENNAS", "oracle_max_dof", "oracle_max_dof_naive"]

ORACLE_MAX_ANTENNAS = 8


def _check_scope(cfg: AntennaConfig, limit: int = ORACLE_MAX_ANTENNAS) -> None:
    if max(cfg.as_tuple()) > limit:
        raise OracleScopeError(f"{cfg}: oracle enumerates only antenna counts <= {limit}")


def oracle_max_dof(cfg: AntennaConfig, tag: CaseTag | None = None) -> Fraction:
    """Largest ``sum(Q)/2`` over every integer plan obeying the case's program.

    Returns ``Fraction(0)`` when no plan keeps all four messages non-empty.

    Raises
    ------
    OracleScopeError
        If any antenna count exceeds :data:`ORACLE_MAX_ANTENNAS`.
    """
    _check_scope(cfg)
    tag = classify(cfg) if tag is None else tag
    if tag.scenario is Scenario.TRANSMIT_RICH:
        best = _transmit_rich_best(cfg, relaxed=tag.case in (Case.C, Case.UNSUPPORTED) and tag.x is not None)
    else:
        best = _receive_rich_best(cfg)
    return Fraction(max(best, 0), 2)


def _pair_sums(bound: int) -> np.ndarray:
    return np.arange(0, 2 * max(bound, 0) + 1)


def _side_best(sum_a: np.ndarray, sum_b: np.ndarray, third_a: int, third_b: int,
               cap: int, exact: bool) -> int:
    """Best ``sA + sB`` with ``sA + tA >= 1``, ``sB + tB >= 1`` and the budget."""
    a = sum_a[:, None]
    b = sum_b[None, :]
    total = a + b
    ok = (a + third_a >= 1) & (b + third_b >= 1)
    ok &= (total == cap) if exact else (total <= cap)
    if not ok.any():
        return -1
    return int(total[ok].max())


def _transmit_rich_best(cfg: AntennaConfig, relaxed: bool) -> int:
    M1, M2, N1, N2 = cfg.as_tuple()
    sK, sG = _pair_sums(M1 - N1), _pair_sums(M2 - N1)
    sJ, sL = _pair_sums(M2 - N2), _pair_sums(M1 - N2)
    best = -1
    if relaxed:
        thirds = (
            (k3, g3, l3, j3)
            for g3 in range(N1 + 1) for k3 in range(g3 + 1)
            for j3 in range(N2 + 1) for l3 in range(j3 + 1)
        )
    else:
        thirds = ((k3, k3, l3, l3) for k3 in range(N1 + 1) for l3 in range(N2 + 1))
    for k3, g3, l3, j3 in thirds:
        # receiver 2 hosts K, G and the J3 interference direction
        r2 = _side_best(sK, sG, k3, g3, 2 * N2 - j3 - k3 - g3, exact=not relaxed)
        if r2 < 0:
            continue
        # receiver 1 hosts L, J and the G3 interference directions
        r1 = _side_best(sL, sJ, l3, j3, 2 * N1 - g3 - l3 - j3, exact=not relaxed)
        if r1 < 0:
            continue
        best = max(best, r2 + r1 + k3 + g3 + l3 + j3)
    return best


def _receive_rich_best(cfg: AntennaConfig) -> int:
    M1, M2, N1, N2 = cfg.as_tuple()
    k1, k2 = kernel_dims(cfg)
    best = -1
    for a in range(k1 + 1):          # K1' = G1'
        for b in range(k2 + 1):      # L1' = J1'
            # s1 = L2' + K2' (transmitter 1 free blocks), s2 = J2' + G2'
            need1 = int(a == 0) + int(b == 0)
            need2 = need1
            cap1 = 2 * M1 - a - b
            cap2 = 2 * M2 - a - b
            if cap1 < need1 or cap2 < need2:
                continue
            s1 = np.arange(need1, cap1 + 1)[:, None]
            s2 = np.arange(need2, cap2 + 1)[None, :]
            free = s1 + s2
            ok = (2 * b + a + free <= 2 * N1) & (2 * a + b + free <= 2 * N2)
            if ok.any():
                best = max(best, 2 * a + 2 * b + int(free[ok].max()))
    return best


def oracle_max_dof_naive(cfg: AntennaConfig, tag: CaseTag | None = None, limit: int = 4) -> Fraction:
    """Literal enumeration of every block tuple; only practical for tiny configs."""
    _check_scope(cfg, limit)
    tag = classify(cfg) if tag is None else tag
    M1, M2, N1, N2 = cfg.as_tuple()
    best = -1
    if tag.scenario is Scenario.TRANSMIT_RICH:
        relaxed = tag.x is not None
        rng = lambda hi: range(max(hi, -1) + 1)
        for K1, K2 in ((p, q) for p in rng(M1 - N1) for q in range(p + 1)):
            for G1, G2 in ((p, q) for p in rng(M2 - N1) for q in range(p + 1)):
                for J1, J2 in ((p, q) for p in rng(M2 - N2) for q in range(p + 1)):
                    for L1, L2 in ((p, q) for p in rng(M1 - N2) for q in range(p + 1)):
                        for K3, G3, L3, J3 in itertools.product(rng(N1), rng(N1), rng(N2), rng(N2)):
                            if relaxed:
                                if not (K3 <= G3 and L3 <= J3):
                                    continue
                            elif not (K3 == G3 and L3 == J3):
                                continue
                            d2 = K1 + K2 + K3 + G1 + G2 + G3
                            d1 = L1 + L2 + L3 + J1 + J2 + J3
                            if relaxed:
                                if d2 > 2 * N2 - J3 or d1 > 2 * N1 - G3:
                                    continue
                            elif d2 != 2 * N2 - J3 or d1 != 2 * N1 - G3:
                                continue
                            if min(K1 + K2 + K3, G1 + G2 + G3, J1 + J2 + J3, L1 + L2 + L3) < 1:
                                continue
                            best = max(best, d1 + d2)
    else:
        k1, k2 = kernel_dims(cfg)
        for a, b in itertools.product(range(k1 + 1), range(k2 + 1)):
            for K2, G2, L2, J2 in itertools.product(range(2 * N2 + 1), repeat=4):
                if b + L2 + a + K2 > 2 * M1 or b + J2 + a + G2 > 2 * M2:
                    continue
                if 2 * b + L2 + J2 + a + K2 + G2 > 2 * N1:
                    continue
                if 2 * a + K2 + G2 + b + L2 + J2 > 2 * N2:
                    continue
                if min(b + L2, a + K2, b + J2, a + G2) < 1:
                    continue
                best = max(best, 2 * a + 2 * b + K2 + G2 + L2 + J2)
    return Fraction(max(best, 0), 2)
