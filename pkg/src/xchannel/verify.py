"""Numerical certification of a synthesized precoder set.

Every receiver sees its two desired messages plus whatever the other two
messages leak into it. The verifier checks that leaked signals are
either nulled or aligned in pairs. It then stacks the desired columns with
one column per aligned pair (and one per unaligned leak) and checks that the
stack has full rank within the receiver's real dimensions.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ShapeError, Unsolvable
from .planner import Scenario, format_rational
from .realmap import (
    DEFAULT_POLICY,
    TolerancePolicy,
    colinearity_residual,
    jrotate,
    numeric_rank,
    relative_residual,
)
from .synth import ChannelSet, PrecoderSet

__all__ = [
    "Budget",
    "VerificationReport",
    "ReceiverSystem",
    "receiver_system",
    "verify_all",
    "decode_zero_forcing",
]

log = logging.getLogger(__name__)

# a residual this close to the tolerance is suspicious even though it passes
_WARN_FACTOR = 10.0


@dataclass(frozen=True)
class Budget:
    occupied: int
    available: int

    @property
    def ok(self) -> bool:
        return self.occupied <= self.available

    def to_dict(self) -> dict:
        return {"occupied": self.occupied, "available": self.available, "ok": self.ok}


@dataclass
class VerificationReport:
    nulling_ok: bool
    pairing_ok: bool
    alignment_ok: bool
    tx_rank_ok: bool
    rx1_rank_ok: bool
    rx2_rank_ok: bool
    residuals: dict
    ranks: dict
    achieved_dof: Fraction
    planned_dof: Fraction
    budget_r1: Budget
    budget_r2: Budget
    warnings: list = field(default_factory=list)

    @property
    def conditions(self) -> dict:
        return {
            "nulling": self.nulling_ok,
            "pairing": self.pairing_ok,
            "alignment": self.alignment_ok,
            "tx_rank": self.tx_rank_ok,
            "rx1_rank": self.rx1_rank_ok,
            "rx2_rank": self.rx2_rank_ok,
            "budget_r1": self.budget_r1.ok,
            "budget_r2": self.budget_r2.ok,
            "dof": self.achieved_dof == self.planned_dof,
        }

    @property
    def passed(self) -> bool:
        return all(self.conditions.values())

    def failures(self) -> list[str]:
        return [name for name, ok in self.conditions.items() if not ok]

    def to_dict(self) -> dict:
        conds = {}
        for name, ok in self.conditions.items():
            conds[name] = {"ok": bool(ok), "residual": self.residuals.get(name)}
        return {
            "passed": self.passed,
            "conditions": conds,
            "ranks": dict(self.ranks),
            "achieved_dof": format_rational(self.achieved_dof),
            "planned_dof": format_rational(self.planned_dof),
            "budget_r1": self.budget_r1.to_dict(),
            "budget_r2": self.budget_r2.to_dict(),
            "warnings": list(self.warnings),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


@dataclass
class ReceiverSystem:
    """Everything arriving at one receiver, in realified form.

    ``desired`` stacks the message to this receiver from T1, then from T2.
    ``interference`` holds one column per aligned pair (when the pair really
    is aligned) followed by every unaligned leak.
    """

    receiver: int
    desired: np.ndarray
    desired_split: int
    interference: np.ndarray
    pair_residuals: np.ndarray

    @property
    def stacked(self) -> np.ndarray:
        return np.hstack([self.desired, self.interference])

    @property
    def rows(self) -> int:
        return self.desired.shape[0]


def _leaks(pre: PrecoderSet, other: int):
    """Aligned and free leak groups of the two messages meant for ``other``.

    Returns ``(A1, F1, A2, F2)`` where column ``i`` of ``A1`` (from T1) is
    meant to align with column ``i`` of ``A2`` (from T2).
    """
    g1 = pre.message(other, 1)
    g2 = pre.message(other, 2)
    if pre.scenario is Scenario.TRANSMIT_RICH:
        a = min(g1.U.shape[1], g2.U.shape[1])
        return g1.U[:, :a], g1.U[:, a:], g2.U[:, :a], g2.U[:, a:]
    return g1.V, g1.W, g2.V, g2.W


def receiver_system(ch: ChannelSet, pre: PrecoderSet, receiver: int,
                    pol: TolerancePolicy = DEFAULT_POLICY) -> ReceiverSystem:
    if receiver not in (1, 2):
        raise ShapeError(f"receiver must be 1 or 2, got {receiver!r}")
    if ch.config != pre.plan.config:
        raise ShapeError(f"channels are for {ch.config}, precoders for {pre.plan.config}")
    r, o = receiver, 3 - receiver
    H1, H2 = ch.Hbar(r, 1), ch.Hbar(r, 2)
    for t, H in ((1, H1), (2, H2)):
        for key in ((r, t), (o, t)):
            if pre.matrix(*key).shape[0] != H.shape[1]:
                raise ShapeError(f"precoders of m{key[0]}{key[1]} do not match H{r}{t}")
    d1 = H1 @ pre.matrix(r, 1)
    d2 = H2 @ pre.matrix(r, 2)
    A1, F1, A2, F2 = _leaks(pre, o)
    seen1 = H1 @ A1
    seen2 = H2 @ A2
    pair_res = np.array([colinearity_residual(seen1[:, i], seen2[:, i]) for i in range(seen1.shape[1])])
    aligned = pair_res <= pol.residual_rel_tol
    cols = [seen1[:, aligned], seen1[:, ~aligned], seen2[:, ~aligned], H1 @ F1, H2 @ F2]
    return ReceiverSystem(
        receiver=r,
        desired=np.hstack([d1, d2]),
        desired_split=d1.shape[1],
        interference=np.hstack(cols),
        pair_residuals=pair_res,
    )


def _nulling_residual(ch: ChannelSet, pre: PrecoderSet) -> float:
    if pre.scenario is not Scenario.TRANSMIT_RICH:
        return 0.0
    worst = 0.0
    for r, t in pre.groups:
        g = pre.message(r, t)
        # V and W of a message to r must vanish at the other receiver
        H = ch.Hbar(3 - r, t)
        for block in (g.V, g.W):
            if block.shape[1]:
                worst = max(worst, relative_residual(H, block))
    return worst


def _pairing_residual(pre: PrecoderSet) -> float:
    if pre.scenario is not Scenario.TRANSMIT_RICH:
        return 0.0
    worst = 0.0
    for g in pre.groups.values():
        n = g.W.shape[1]
        if n == 0:
            continue
        if n > g.V.shape[1]:
            return float("inf")
        diff = np.max(np.abs(g.W - jrotate(g.V[:, :n])))
        worst = max(worst, float(diff))
    return worst


def _kernel_residual(ch: ChannelSet, pre: PrecoderSet) -> float:
    """Worst ``||H x - h|| / ||h||`` over the receive-rich alignment triples."""
    worst = 0.0
    for r in (1, 2):
        h = pre.align.get(r)
        if h is None or h.shape[1] == 0:
            continue
        o = 3 - r
        for t in (1, 2):
            x = pre.message(o, t).V
            diff = np.linalg.norm(ch.Hbar(r, t) @ x - h, axis=0)
            scale = np.linalg.norm(h, axis=0)
            scale[scale == 0.0] = 1.0
            worst = max(worst, float(np.max(diff / scale)))
    return worst


def verify_all(ch: ChannelSet, plan, pre: PrecoderSet,
               pol: TolerancePolicy = DEFAULT_POLICY) -> VerificationReport:
    """Run every check and count the decodable real streams.

    A receiver's rank check passes when the stack of desired and interference
    columns has rank ``min(rows, columns)``. Whether that stack fits the
    receiver at all is reported separately by the budgets. The achieved DoF is
    half the number of desired directions left after projecting out the
    interference, summed over both receivers.
    """
    if plan.config != ch.config or pre.plan.config != ch.config:
        raise ShapeError("channels, plan and precoders describe different configurations")
    for (r, t), g in pre.groups.items():
        if g.count != plan.q(r, t):
            raise ShapeError(f"m{r}{t} has {g.count} precoders, plan asks for {plan.q(r, t)}")

    tol = pol.residual_rel_tol
    residuals: dict = {}
    ranks: dict = {}
    warnings: list[str] = []

    residuals["nulling"] = _nulling_residual(ch, pre)
    residuals["pairing"] = _pairing_residual(pre)

    systems = {r: receiver_system(ch, pre, r, pol) for r in (1, 2)}
    pair_worst = max((float(s.pair_residuals.max()) for s in systems.values() if s.pair_residuals.size), default=0.0)
    alignment_ok = pair_worst <= tol
    if pre.scenario is Scenario.RECEIVE_RICH:
        kres = _kernel_residual(ch, pre)
        pair_worst = max(pair_worst, kres)
        alignment_ok = alignment_ok and kres <= tol
        for r in (1, 2):
            h = pre.align.get(r, np.zeros((0, 0)))
            ranks[f"align_r{r}"] = numeric_rank(h, pol) if h.size else 0
            alignment_ok = alignment_ok and ranks[f"align_r{r}"] == h.shape[1]
    residuals["alignment"] = pair_worst

    tx_ok = True
    for t in (1, 2):
        P = pre.tx_matrix(t)
        ranks[f"tx{t}"] = numeric_rank(P, pol) if P.size else 0
        tx_ok = tx_ok and ranks[f"tx{t}"] == P.shape[1]

    rx_ok = {}
    decodable = 0
    budgets = {}
    for r, sysm in systems.items():
        S = sysm.stacked
        rank_s = numeric_rank(S, pol) if S.size else 0
        rank_i = numeric_rank(sysm.interference, pol) if sysm.interference.size else 0
        ranks[f"rx{r}"] = rank_s
        ranks[f"rx{r}_interference"] = rank_i
        ranks[f"rx{r}_columns"] = S.shape[1]
        rx_ok[r] = rank_s == min(S.shape)
        decodable += min(rank_s - rank_i, sysm.desired.shape[1])
        budgets[r] = Budget(S.shape[1], sysm.rows)

    for name in ("nulling", "alignment"):
        value = residuals[name]
        if tol / _WARN_FACTOR < value <= tol:
            warnings.append(f"{name} residual {value:.2e} within {_WARN_FACTOR:g}x of tolerance")
    for w in warnings:
        log.warning("%s: %s", plan.config, w)

    return VerificationReport(
        nulling_ok=residuals["nulling"] <= tol,
        pairing_ok=residuals["pairing"] == 0.0,
        alignment_ok=alignment_ok,
        tx_rank_ok=tx_ok,
        rx1_rank_ok=rx_ok[1],
        rx2_rank_ok=rx_ok[2],
        residuals=residuals,
        ranks=ranks,
        achieved_dof=Fraction(decodable, 2),
        planned_dof=plan.dof,
        budget_r1=budgets[1],
        budget_r2=budgets[2],
        warnings=warnings,
    )


def decode_zero_forcing(ch: ChannelSet, pre: PrecoderSet, received, receiver: int,
                        pol: TolerancePolicy = DEFAULT_POLICY) -> dict:
    """Least-squares separation of the desired streams at one receiver.

    Returns ``{(receiver, 1): values, (receiver, 2): values}``. These are the
    coefficients of the desired columns in the realified received vector.

    Raises
    ------
    Unsolvable
        If desired and interference columns together are rank deficient.
    """
    sysm = receiver_system(ch, pre, receiver, pol)
    y = np.asarray(received, dtype=float)
    if y.shape[0] != sysm.rows:
        raise ShapeError(f"received vector has {y.shape[0]} rows, receiver has {sysm.rows}")
    S = sysm.stacked
    if numeric_rank(S, pol) < S.shape[1]:
        raise Unsolvable(
            f"receiver {receiver}: {S.shape[1]} columns but rank {numeric_rank(S, pol)}"
        )
    coeffs, *_ = np.linalg.lstsq(S, y, rcond=None)
    k = sysm.desired_split
    n = sysm.desired.shape[1]
    return {(receiver, 1): coeffs[:k], (receiver, 2): coeffs[k:n]}
