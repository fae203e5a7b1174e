"""Channel generation and precoder construction for a block plan.

Everything is stored in the realified (interleaved Re/Im) layout.  In the
transmit-rich scenario each message has three groups of vectors:

* ``V`` lies in the null space of the cross channel towards the unintended
  receiver,
* ``W`` is the ``j``-rotation of the leading ``V`` vectors, so it is nulled too,
* ``U`` reaches the unintended receiver and is aligned there with the other
  transmitter's ``U`` group.

In the receive-rich scenario a message has an aligned group ``V`` taken from
the kernel of a stacked alignment matrix and a free group ``W``; ``U`` is
empty.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import PlanInfeasibleError, ShapeError, SynthesisError
from .planner import AntennaConfig, BlockPlan, Scenario
from .realmap import (
    DEFAULT_POLICY,
    TolerancePolicy,
    derealify_vector,
    jrotate,
    null_space,
    numeric_rank,
    realify_matrix,
    realify_vector,
    solve_exact,
)

__all__ = [
    "MESSAGES",
    "ChannelSet",
    "MessagePrecoders",
    "PrecoderSet",
    "generate_channels",
    "synthesize",
    "synth_transmit_rich",
    "synth_receive_rich",
    "MAX_REDRAWS",
]

log = logging.getLogger(__name__)

#: message keys ``(receiver, transmitter)`` in a fixed order
MESSAGES = ((1, 1), (2, 1), (1, 2), (2, 2))

MAX_REDRAWS = 16


@dataclass(frozen=True)
class ChannelSet:
    """The four complex channel matrices; ``H[(r, t)]`` has ``N_r`` rows and ``M_t`` columns."""

    config: AntennaConfig
    H11: np.ndarray
    H12: np.ndarray
    H21: np.ndarray
    H22: np.ndarray
    seed: object = None

    def __post_init__(self):
        cfg = self.config
        n = {1: cfg.N1, 2: cfg.N2}
        m = {1: cfg.M1, 2: cfg.M2}
        for (r, t) in MESSAGES:
            H = np.asarray(self.H(r, t))
            if H.shape != (n[r], m[t]):
                raise ShapeError(f"H{r}{t} must be {n[r]}x{m[t]}, got {H.shape}")
            if not np.all(np.isfinite(H)):
                raise ValueError(f"H{r}{t} has non-finite entries")

    def H(self, r: int, t: int) -> np.ndarray:
        return getattr(self, f"H{r}{t}")

    def Hbar(self, r: int, t: int) -> np.ndarray:
        return realify_matrix(self.H(r, t))


def generate_channels(cfg: AntennaConfig, seed=None) -> ChannelSet:
    """Draw i.i.d. circularly symmetric complex Gaussian entries with unit variance.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts; the same
    seed always yields the same channel set.
    """
    rng = np.random.default_rng(seed)
    n = {1: cfg.N1, 2: cfg.N2}
    m = {1: cfg.M1, 2: cfg.M2}
    mats = {}
    for r, t in ((1, 1), (1, 2), (2, 1), (2, 2)):
        shape = (n[r], m[t])
        mats[f"H{r}{t}"] = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    return ChannelSet(cfg, seed=seed, **mats)


@dataclass
class MessagePrecoders:
    """Realified precoding columns of one message, grouped by role."""

    V: np.ndarray
    W: np.ndarray
    U: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return np.hstack([self.V, self.W, self.U])

    @property
    def count(self) -> int:
        return self.V.shape[1] + self.W.shape[1] + self.U.shape[1]


@dataclass
class PrecoderSet:
    """Precoders for all four messages plus, when receive-rich, the alignment directions.

    ``align[r]`` holds the common received directions ``h`` of the interference
    pairs aligned at receiver ``r`` (receive-rich only).
    """

    plan: BlockPlan
    groups: dict
    align: dict = field(default_factory=dict)
    seed: object = None
    redraws: int = 0

    @property
    def scenario(self) -> Scenario:
        return self.plan.scenario

    def message(self, r: int, t: int) -> MessagePrecoders:
        return self.groups[(r, t)]

    def matrix(self, r: int, t: int) -> np.ndarray:
        return self.groups[(r, t)].matrix

    def complex_matrix(self, r: int, t: int) -> np.ndarray:
        """Complex ``M_t x Q_rt`` view of the same precoders."""
        return derealify_vector(self.matrix(r, t))

    def tx_matrix(self, t: int) -> np.ndarray:
        """All columns leaving transmitter ``t`` (message to R1 first)."""
        return np.hstack([self.matrix(1, t), self.matrix(2, t)])


def _empty(rows: int) -> np.ndarray:
    return np.zeros((rows, 0))


def _unit_columns(A: np.ndarray) -> np.ndarray:
    if A.shape[1] == 0:
        return A
    norms = np.linalg.norm(A, axis=0)
    norms[norms == 0.0] = 1.0
    return A / norms


def _complex_gaussian(rng, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _check_dims(ch: ChannelSet, plan: BlockPlan, scenario: Scenario) -> None:
    if ch.config != plan.config:
        raise ShapeError(f"channels are for {ch.config}, plan is for {plan.config}")
    if plan.scenario is not scenario:
        raise ShapeError(f"expected a {scenario.value} plan, got {plan.tag}")


def _full_column_rank(A: np.ndarray, pol: TolerancePolicy) -> bool:
    return A.shape[1] == 0 or numeric_rank(A, pol) == A.shape[1]


# --------------------------------------------------------------------------
# transmit-rich
# --------------------------------------------------------------------------

def _nulled_groups(H_cross: np.ndarray, n_v: int, n_w: int, rng, pol: TolerancePolicy):
    """``n_v`` generic unit vectors from ``null(H_cross)`` and ``j`` times the first ``n_w``."""
    M = H_cross.shape[1]
    if n_v == 0:
        return _empty(2 * M), _empty(2 * M)
    basis = null_space(H_cross, pol)
    if basis.shape[1] < n_v:
        raise PlanInfeasibleError(
            f"null space has {basis.shape[1]} complex dimensions, plan needs {n_v}"
        )
    # an orthonormal frame of a random subspace is still a generic choice
    v, _ = np.linalg.qr(basis @ _complex_gaussian(rng, (basis.shape[1], n_v)))
    vbar = realify_vector(v)
    return vbar, jrotate(vbar[:, :n_w])


def _aligned_pair(H_own: np.ndarray, H_other: np.ndarray, n_own: int, n_paired: int,
                  n_other: int, rng, pol: TolerancePolicy):
    """Random ``U`` for one transmitter and matching ``U`` for the other.

    The first ``n_paired`` vectors of the second group solve
    ``H_other u' = H_own u`` so both land on the same received direction; the
    remaining ``n_other - n_paired`` are fresh draws.
    """
    M_own = H_own.shape[1]
    M_other = H_other.shape[1]
    u, _ = np.linalg.qr(_complex_gaussian(rng, (M_own, n_own)))
    if n_paired:
        target = H_own @ u[:, :n_paired]
        paired = solve_exact(H_other, target, pol)
    else:
        paired = np.zeros((M_other, 0), dtype=complex)
    extra = _complex_gaussian(rng, (M_other, n_other - n_paired))
    u_other = np.hstack([paired, extra])
    if n_other:
        u_other /= np.linalg.norm(u_other, axis=0)
    return realify_vector(u), realify_vector(u_other)


def synth_transmit_rich(ch: ChannelSet, plan: BlockPlan, seed=None,
                        pol: TolerancePolicy = DEFAULT_POLICY,
                        max_redraws: int = MAX_REDRAWS) -> PrecoderSet:
    """Null-space, ``j``-paired and aligned precoders for a transmit-rich plan.

    Random parts are redrawn (at most ``max_redraws`` times) until both
    per-transmitter precoder matrices have full column rank.

    Raises
    ------
    ShapeError
        If the plan does not belong to the channel set's configuration.
    SynthesisError
        If no draw reaches full rank.
    """
    _check_dims(ch, plan, Scenario.TRANSMIT_RICH)
    rng = np.random.default_rng(seed)
    p = plan
    for attempt in range(max_redraws):
        v21, w21 = _nulled_groups(ch.H11, p.K1, p.K2, rng, pol)
        v22, w22 = _nulled_groups(ch.H12, p.G1, p.G2, rng, pol)
        v11, w11 = _nulled_groups(ch.H21, p.L1, p.L2, rng, pol)
        v12, w12 = _nulled_groups(ch.H22, p.J1, p.J2, rng, pol)
        # interference from m21/m22 meets at R1, from m11/m12 at R2
        u21, u22 = _aligned_pair(ch.H11, ch.H12, p.K3, min(p.K3, p.G3), p.G3, rng, pol)
        u11, u12 = _aligned_pair(ch.H21, ch.H22, p.L3, min(p.L3, p.J3), p.J3, rng, pol)
        groups = {
            (1, 1): MessagePrecoders(v11, w11, u11),
            (2, 1): MessagePrecoders(v21, w21, u21),
            (1, 2): MessagePrecoders(v12, w12, u12),
            (2, 2): MessagePrecoders(v22, w22, u22),
        }
        out = PrecoderSet(plan, groups, seed=seed, redraws=attempt)
        if _full_column_rank(out.tx_matrix(1), pol) and _full_column_rank(out.tx_matrix(2), pol):
            return out
        log.debug("transmit-rich draw %d lost rank, redrawing", attempt)
    raise SynthesisError(f"{plan.config}: no full-rank precoder draw in {max_redraws} attempts")


# --------------------------------------------------------------------------
# receive-rich
# --------------------------------------------------------------------------

def _kernel_triples(Ha: np.ndarray, Hb: np.ndarray, count: int, rng, pol: TolerancePolicy):
    """Solve ``Ha x = Hb y = h`` jointly in the real domain.

    Returns ``(h, x, y)`` with ``count`` columns each, scaled so that the
    precoder parts ``x`` and ``y`` have unit root-mean-square norm while the
    equalities stay exact.
    """
    Hbar_a = realify_matrix(Ha)
    Hbar_b = realify_matrix(Hb)
    n = Hbar_a.shape[0]
    ma, mb = Hbar_a.shape[1], Hbar_b.shape[1]
    if count == 0:
        return _empty(n), _empty(ma), _empty(mb)
    eye = np.eye(n)
    stacked = np.block([
        [eye, -Hbar_a, np.zeros((n, mb))],
        [eye, np.zeros((n, ma)), -Hbar_b],
    ])
    basis = null_space(stacked, pol)
    if basis.shape[1] < count:
        raise PlanInfeasibleError(
            f"alignment kernel has dimension {basis.shape[1]}, plan needs {count}"
        )
    combos, _ = np.linalg.qr(basis @ rng.standard_normal((basis.shape[1], count)))
    h, x, y = combos[:n], combos[n:n + ma], combos[n + ma:]
    scale = np.sqrt((np.sum(x ** 2, axis=0) + np.sum(y ** 2, axis=0)) / 2.0)
    return h / scale, x / scale, y / scale


def _random_real_unit(rng, rows: int, count: int) -> np.ndarray:
    if count > rows:
        return _unit_columns(rng.standard_normal((rows, count)))
    q, _ = np.linalg.qr(rng.standard_normal((rows, count)))
    return q


def synth_receive_rich(ch: ChannelSet, plan: BlockPlan, seed=None,
                       pol: TolerancePolicy = DEFAULT_POLICY,
                       max_redraws: int = MAX_REDRAWS) -> PrecoderSet:
    """Kernel-aligned and free precoders for a receive-rich plan.

    Raises
    ------
    PlanInfeasibleError
        If an alignment kernel is smaller than the aligned block it must host.
    SynthesisError
        If the free groups never complete the transmitter ranks.
    """
    _check_dims(ch, plan, Scenario.RECEIVE_RICH)
    rng = np.random.default_rng(seed)
    p = plan
    cfg = plan.config
    # m21 and m22 meet at R1; m11 and m12 meet at R2
    h1, v21, v22 = _kernel_triples(ch.H11, ch.H12, p.K1, rng, pol)
    h2, v11, v12 = _kernel_triples(ch.H21, ch.H22, p.L1, rng, pol)
    for attempt in range(max_redraws):
        w21 = _random_real_unit(rng, 2 * cfg.M1, p.K2)
        w11 = _random_real_unit(rng, 2 * cfg.M1, p.L2)
        w12 = _random_real_unit(rng, 2 * cfg.M2, p.J2)
        w22 = _random_real_unit(rng, 2 * cfg.M2, p.G2)
        groups = {
            (1, 1): MessagePrecoders(v11, w11, _empty(2 * cfg.M1)),
            (2, 1): MessagePrecoders(v21, w21, _empty(2 * cfg.M1)),
            (1, 2): MessagePrecoders(v12, w12, _empty(2 * cfg.M2)),
            (2, 2): MessagePrecoders(v22, w22, _empty(2 * cfg.M2)),
        }
        out = PrecoderSet(plan, groups, align={1: h1, 2: h2}, seed=seed, redraws=attempt)
        if _full_column_rank(out.tx_matrix(1), pol) and _full_column_rank(out.tx_matrix(2), pol):
            return out
        log.debug("receive-rich draw %d lost rank, redrawing free groups", attempt)
    raise SynthesisError(f"{cfg}: free groups never completed the transmitter ranks")


def synthesize(ch: ChannelSet, plan: BlockPlan, seed=None,
               pol: TolerancePolicy = DEFAULT_POLICY) -> PrecoderSet:
    """Dispatch on the plan's scenario."""
    if plan.scenario is Scenario.TRANSMIT_RICH:
        return synth_transmit_rich(ch, plan, seed, pol)
    return synth_receive_rich(ch, plan, seed, pol)
