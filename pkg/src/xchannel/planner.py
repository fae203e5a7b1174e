"""Case classification and closed-form block-length plans.

Two antenna orderings are handled.  In the transmit-rich scenario
(``M1 >= M2 >= N1 >= N2``) every message vector is split into a null-space
block (``v``), its ``j``-rotated twin (``w``) and an aligned block (``u``); the
twelve block lengths are ``L`` (m11), ``K`` (m21), ``J`` (m12) and ``G`` (m22).
In the receive-rich scenario (``N1 >= N2 >= M1 >= M2``) every message has an
aligned block and a free block, stored in the first two slots; the third
slot stays zero.

All DoF bookkeeping is exact (:class:`fractions.Fraction`).
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any

from .errors import OrderingError, UnsupportedConfigError

__all__ = [
    "Scenario",
    "Case",
    "AntennaConfig",
    "CaseTag",
    "BlockPlan",
    "classify",
    "plan_blocks",
    "outer_bound",
    "plan",
    "plan_violations",
    "kernel_dims",
    "iter_configs",
    "format_rational",
    "parse_rational",
]


class Scenario(str, enum.Enum):
    TRANSMIT_RICH = "TransmitRich"
    RECEIVE_RICH = "ReceiveRich"


class Case(str, enum.Enum):
    A = "A"
    B1 = "B1"
    B2 = "B2"
    B3 = "B3"
    C = "C"
    A_PRIME = "Aprime"
    B1_PRIME = "B1prime"
    B2_PRIME = "B2prime"
    B3_PRIME = "B3prime"
    C_PRIME = "Cprime"
    UNSUPPORTED = "Unsupported"

    @property
    def family(self) -> str:
        """Letter of the case family ("A", "B", "C") or "" when unsupported."""
        return "" if self is Case.UNSUPPORTED else self.value[0]


@dataclass(frozen=True, order=True)
class AntennaConfig:
    M1: int
    M2: int
    N1: int
    N2: int

    def __post_init__(self):
        for name in ("M1", "M2", "N1", "N2"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
            object.__setattr__(self, name, int(value))

    @property
    def is_transmit_rich(self) -> bool:
        return self.M1 >= self.M2 >= self.N1 >= self.N2

    @property
    def is_receive_rich(self) -> bool:
        return self.N1 >= self.N2 >= self.M1 >= self.M2

    def swapped(self) -> "AntennaConfig":
        """Exchange the roles of transmitters and receivers (``M <-> N``)."""
        return AntennaConfig(self.N1, self.N2, self.M1, self.M2)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.M1, self.M2, self.N1, self.N2)

    def __str__(self):
        return "({},{},{},{})".format(*self.as_tuple())


@dataclass(frozen=True)
class CaseTag:
    scenario: Scenario
    case: Case
    x: int | None = None

    @property
    def supported(self) -> bool:
        return self.case is not Case.UNSUPPORTED

    def __str__(self):
        base = f"{self.scenario.value} {self.case.value}"
        return base if self.x is None else f"{base} (x={self.x})"


BLOCK_NAMES = ("L1", "L2", "L3", "K1", "K2", "K3", "J1", "J2", "J3", "G1", "G2", "G3")


@dataclass(frozen=True)
class BlockPlan:
    """Real-stream counts per message block, plus the derived totals.

    ``L`` blocks belong to m11, ``K`` to m21, ``J`` to m12 and ``G`` to m22.
    """

    config: AntennaConfig
    tag: CaseTag
    L1: int = 0
    L2: int = 0
    L3: int = 0
    K1: int = 0
    K2: int = 0
    K3: int = 0
    J1: int = 0
    J2: int = 0
    J3: int = 0
    G1: int = 0
    G2: int = 0
    G3: int = 0

    def __post_init__(self):
        for name in BLOCK_NAMES:
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValueError(f"block {name} must be a nonnegative integer, got {value!r}")
            object.__setattr__(self, name, int(value))

    @property
    def scenario(self) -> Scenario:
        return self.tag.scenario

    @property
    def L(self) -> tuple[int, int, int]:
        return (self.L1, self.L2, self.L3)

    @property
    def K(self) -> tuple[int, int, int]:
        return (self.K1, self.K2, self.K3)

    @property
    def J(self) -> tuple[int, int, int]:
        return (self.J1, self.J2, self.J3)

    @property
    def G(self) -> tuple[int, int, int]:
        return (self.G1, self.G2, self.G3)

    @property
    def Q11(self) -> int:
        return sum(self.L)

    @property
    def Q21(self) -> int:
        return sum(self.K)

    @property
    def Q12(self) -> int:
        return sum(self.J)

    @property
    def Q22(self) -> int:
        return sum(self.G)

    def q(self, r: int, t: int) -> int:
        """Length of the message vector from transmitter ``t`` to receiver ``r``."""
        return {(1, 1): self.Q11, (2, 1): self.Q21, (1, 2): self.Q12, (2, 2): self.Q22}[(r, t)]

    def blocks(self, r: int, t: int) -> tuple[int, int, int]:
        return {(1, 1): self.L, (2, 1): self.K, (1, 2): self.J, (2, 2): self.G}[(r, t)]

    @property
    def total_streams(self) -> int:
        return self.Q11 + self.Q21 + self.Q12 + self.Q22

    @property
    def dof(self) -> Fraction:
        return Fraction(self.total_streams, 2)

    @property
    def outer_bound(self) -> Fraction:
        return outer_bound(self.config, self.tag)

    @property
    def gap(self) -> Fraction:
        return self.outer_bound - self.dof

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "config": asdict(self.config),
            "scenario": self.tag.scenario.value,
            "case": self.tag.case.value,
            "x": self.tag.x,
            "blocks": {name: getattr(self, name) for name in BLOCK_NAMES},
            "Q": {"Q11": self.Q11, "Q21": self.Q21, "Q12": self.Q12, "Q22": self.Q22},
            "dof": format_rational(self.dof),
            "outer_bound": format_rational(self.outer_bound),
            "gap": format_rational(self.gap),
        }
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "BlockPlan":
        cfg = AntennaConfig(**data["config"])
        tag = CaseTag(Scenario(data["scenario"]), Case(data["case"]), data.get("x"))
        result = cls(cfg, tag, **data["blocks"])
        if "dof" in data and parse_rational(data["dof"]) != result.dof:
            raise ValueError(f"dof {data['dof']} disagrees with the block lengths ({result.dof})")
        return result


def format_rational(value: Fraction) -> str:
    """``"p/q"``, or ``"p"`` when the denominator is one."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------

def classify(cfg: AntennaConfig, prefer: Scenario = Scenario.TRANSMIT_RICH) -> CaseTag:
    """Assign the configuration to exactly one case.

    Configurations satisfying both orderings (all four counts equal) go to
    the ``prefer`` scenario, transmit-rich unless asked otherwise.

    Raises
    ------
    OrderingError
        If neither ``M1>=M2>=N1>=N2`` nor ``N1>=N2>=M1>=M2`` holds.
    """
    if cfg.is_transmit_rich and cfg.is_receive_rich and prefer is Scenario.RECEIVE_RICH:
        case, x = _classify_family(cfg.N1, cfg.N2, cfg.M1, cfg.M2, primed=True)
        return CaseTag(Scenario.RECEIVE_RICH, case, x)
    if cfg.is_transmit_rich:
        case, x = _classify_family(cfg.M1, cfg.M2, cfg.N1, cfg.N2, primed=False)
        return CaseTag(Scenario.TRANSMIT_RICH, case, x)
    if cfg.is_receive_rich:
        case, x = _classify_family(cfg.N1, cfg.N2, cfg.M1, cfg.M2, primed=True)
        return CaseTag(Scenario.RECEIVE_RICH, case, x)
    raise OrderingError(
        f"{cfg} fits neither M1>=M2>=N1>=N2 nor N1>=N2>=M1>=M2"
    )


def _classify_family(big1: int, big2: int, small1: int, small2: int, primed: bool):
    # big = the richer side, small = the poorer side; primed cases mirror M <-> N.
    total = big1 + big2
    names = {
        "A": Case.A_PRIME if primed else Case.A,
        "B1": Case.B1_PRIME if primed else Case.B1,
        "B2": Case.B2_PRIME if primed else Case.B2,
        "B3": Case.B3_PRIME if primed else Case.B3,
        "C": Case.C_PRIME if primed else Case.C,
    }
    if total >= 2 * small1 + small2:
        if big2 == small1 == small2:
            # every message non-empty needs small1 >= 2
            return (Case.UNSUPPORTED if small1 == 1 else names["B1"]), None
        if big2 == small1:
            return names["B2"], None
        return names["B3"], None
    if total > 3 * small2:
        return names["A"], None
    x = 3 * small2 - total
    if small1 == 1:
        return Case.UNSUPPORTED, x
    return names["C"], x


# --------------------------------------------------------------------------
# outer bound
# --------------------------------------------------------------------------

def outer_bound(cfg: AntennaConfig, tag: CaseTag | None = None) -> Fraction:
    """Outer-bound DoF of the case the configuration belongs to."""
    tag = classify(cfg) if tag is None else tag
    if not tag.supported:
        raise UnsupportedConfigError(f"{cfg} has no supported case")
    M1, M2, N1, N2 = cfg.as_tuple()
    family = tag.case.family
    if tag.scenario is Scenario.RECEIVE_RICH:
        M1, M2, N1, N2 = N1, N2, M1, M2
    if family == "A":
        return Fraction(M1 + M2 + N2, 2)
    if family == "B":
        return Fraction(N1 + N2)
    return Fraction(2 * (M1 + M2), 3)


# --------------------------------------------------------------------------
# block plans
# --------------------------------------------------------------------------

def kernel_dims(cfg: AntennaConfig) -> tuple[int, int]:
    """Nullities of the stacked receive-rich alignment matrices at R1 and R2."""
    M1, M2, N1, N2 = cfg.as_tuple()
    return max(2 * M1 + 2 * M2 - 2 * N1, 0), max(2 * M1 + 2 * M2 - 2 * N2, 0)


def plan_blocks(cfg: AntennaConfig, tag: CaseTag | None = None) -> BlockPlan:
    """Closed-form block lengths for the configuration's case.

    Raises
    ------
    UnsupportedConfigError
        If the tag is ``Unsupported``.
    """
    tag = classify(cfg) if tag is None else tag
    if not tag.supported:
        raise UnsupportedConfigError(
            f"{cfg}: no plan keeps all four messages non-empty"
        )
    builder = _BUILDERS[tag.case]
    return BlockPlan(cfg, tag, **builder(cfg, tag))


def plan(cfg: AntennaConfig | tuple[int, int, int, int]) -> BlockPlan:
    """Classify and plan in one call; accepts a plain 4-tuple."""
    if not isinstance(cfg, AntennaConfig):
        cfg = AntennaConfig(*cfg)
    return plan_blocks(cfg, classify(cfg))


def _plan_a(cfg, tag):
    M1, M2, N1, N2 = cfg.as_tuple()
    k3 = 2 * N1 + N2 - M1 - M2
    half = M1 - M2 + N2
    return dict(
        K1=M1 - N1, K2=M1 - N1, K3=k3,
        G1=M2 - N1, G2=M2 - N1, G3=k3,
        J1=M2 - N2, J2=M2 - N2, J3=0,
        L1=_ceil_div(half, 2), L2=half // 2, L3=0,
    )


def _plan_b1(cfg, tag):
    _, _, N1, N2 = cfg.as_tuple()
    return dict(
        J3=1, G3=1, K3=1, L3=1,
        K1=N2 - 1, K2=N2 - 2,
        L1=N1 - 1, L2=N1 - 2,
    )


def _plan_b2(cfg, tag):
    _, M2, _, N2 = cfg.as_tuple()
    return dict(
        J3=0, L3=0, K3=1, G3=1,
        K1=N2 - 1, K2=N2 - 1,
        J1=M2 - N2, J2=M2 - N2,
        L1=N2, L2=N2 - 1,
    )


def _plan_b3(cfg, tag):
    _, M2, N1, N2 = cfg.as_tuple()
    out = {}
    if 2 * (M2 - N1) >= N2:
        out.update(G1=_ceil_div(N2, 2), K1=_ceil_div(N2, 2), G2=N2 // 2, K2=N2 // 2)
    else:
        out.update(G1=M2 - N1, G2=M2 - N1, K1=N1 + N2 - M2, K2=N1 + N2 - M2)
    if 2 * (M2 - N2) >= N1:
        out.update(L1=_ceil_div(N1, 2), J1=_ceil_div(N1, 2), L2=N1 // 2, J2=N1 // 2)
    else:
        out.update(J1=M2 - N2, J2=M2 - N2, L1=N1 + N2 - M2, L2=N1 + N2 - M2)
    return out


def _plan_c(cfg, tag):
    M1, M2, N1, N2 = cfg.as_tuple()
    x = tag.x
    two_thirds = (2 * x) // 3
    return dict(
        K1=M1 - N1, K2=M1 - N1,
        G1=M2 - N1, G2=M2 - N1,
        L1=M1 - N2, L2=M1 - N2,
        J1=M2 - N2, J2=M2 - N2,
        L3=two_thirds,
        K3=2 * (N1 - N2) + two_thirds,
        G3=2 * N1 + N2 - M1 - M2 - x // 3,
        J3=3 * N2 - M1 - M2 - _ceil_div(x - 1, 3),
    )


def _plan_a_prime(cfg, tag):
    _, M2, N1, N2 = cfg.as_tuple()
    aligned_r1 = N2 - N1 + M2
    aligned_r2 = N1 - N2 + M2
    return dict(
        G1=aligned_r1, G2=0,
        K1=aligned_r1, K2=N1 + N2 - 3 * M2,
        L1=aligned_r2, L2=0,
        J1=aligned_r2, J2=0,
    )


def _plan_b1_prime(cfg, tag):
    M2 = cfg.M2
    return dict(K1=0, K2=1, G1=0, G2=1, L1=2 * M2 - 2, L2=0, J1=2 * M2 - 2, J2=0)


def _plan_b2_prime(cfg, tag):
    _, M2, _, N2 = cfg.as_tuple()
    return dict(K1=0, K2=2 * (N2 - M2), G1=0, G2=1, L1=2 * M2 - 1, L2=0, J1=2 * M2 - 1, J2=0)


def _plan_b3_prime(cfg, tag):
    # Message lengths mirror subcase B3; the aligned blocks fill the alignment
    # kernels exactly, which both receiver budgets force once the transmitters
    # are saturated.  At N1 + N2 = 2*M1 + M2 this reproduces the boundary
    # parameter sets for either sign of M1 - 2*(N2 - M2).
    M1, M2, _, N2 = cfg.as_tuple()
    q21 = min(2 * (N2 - M2), M1)
    q22 = min(2 * (N2 - M1), M2)
    q11 = 2 * M1 - q21
    q12 = 2 * M2 - q22
    k1, k2 = kernel_dims(cfg)
    return dict(
        K1=k1, K2=q21 - k1,
        G1=k1, G2=q22 - k1,
        L1=k2, L2=q11 - k2,
        J1=k2, J2=q12 - k2,
    )


def _plan_c_prime(cfg, tag):
    _, M2, N1, N2 = cfg.as_tuple()
    x = tag.x
    two_thirds = (2 * x) // 3
    aligned_r1 = 2 * (N2 - M2) + two_thirds
    aligned_r2 = 2 * (N1 - M2) + two_thirds
    extra_g2 = 0
    if x % 3 == 1:
        aligned_r1 += 1
    elif x % 3 == 2:
        extra_g2 = 1
    return dict(
        K1=aligned_r1, K2=0,
        G1=aligned_r1, G2=extra_g2,
        L1=aligned_r2, L2=0,
        J1=aligned_r2, J2=0,
    )


_BUILDERS = {
    Case.A: _plan_a,
    Case.B1: _plan_b1,
    Case.B2: _plan_b2,
    Case.B3: _plan_b3,
    Case.C: _plan_c,
    Case.A_PRIME: _plan_a_prime,
    Case.B1_PRIME: _plan_b1_prime,
    Case.B2_PRIME: _plan_b2_prime,
    Case.B3_PRIME: _plan_b3_prime,
    Case.C_PRIME: _plan_c_prime,
}


# --------------------------------------------------------------------------
# feasibility
# --------------------------------------------------------------------------

def plan_violations(p: BlockPlan) -> list[str]:
    """Names of every scheme constraint the plan breaks (empty when feasible)."""
    if p.scenario is Scenario.TRANSMIT_RICH:
        return _transmit_rich_violations(p)
    return _receive_rich_violations(p)


def _transmit_rich_violations(p: BlockPlan) -> list[str]:
    M1, M2, N1, N2 = p.config.as_tuple()
    bad = []
    checks = {
        "K2<=K1<=M1-N1": p.K2 <= p.K1 <= M1 - N1,
        "G2<=G1<=M2-N1": p.G2 <= p.G1 <= M2 - N1,
        "J2<=J1<=M2-N2": p.J2 <= p.J1 <= M2 - N2,
        "L2<=L1<=M1-N2": p.L2 <= p.L1 <= M1 - N2,
        "K3<=G3<=N1": p.K3 <= p.G3 <= N1,
        "L3<=J3<=N2": p.L3 <= p.J3 <= N2,
        "D2+J3<=2N2": p.Q21 + p.Q22 + p.J3 <= 2 * N2,
        "D1+G3<=2N1": p.Q11 + p.Q12 + p.G3 <= 2 * N1,
    }
    if p.tag.case.family in ("A", "B"):
        checks["K3==G3"] = p.K3 == p.G3
        checks["L3==J3"] = p.L3 == p.J3
        checks["D2+J3==2N2"] = p.Q21 + p.Q22 + p.J3 == 2 * N2
        checks["D1+K3==2N1"] = p.Q11 + p.Q12 + p.K3 == 2 * N1
    for r, t in ((1, 1), (2, 1), (1, 2), (2, 2)):
        checks[f"Q{r}{t}>=1"] = p.q(r, t) >= 1
    bad.extend(name for name, ok in checks.items() if not ok)
    return bad


def _receive_rich_violations(p: BlockPlan) -> list[str]:
    M1, M2, N1, N2 = p.config.as_tuple()
    k1, k2 = kernel_dims(p.config)
    checks = {
        "third blocks zero": p.L3 == p.K3 == p.J3 == p.G3 == 0,
        "K1'==G1'<=kerdim(R1)": p.K1 == p.G1 <= k1,
        "L1'==J1'<=kerdim(R2)": p.L1 == p.J1 <= k2,
        "Q11'+Q21'<=2M1": p.Q11 + p.Q21 <= 2 * M1,
        "Q12'+Q22'<=2M2": p.Q12 + p.Q22 <= 2 * M2,
        "R1 budget": p.L1 + p.L2 + p.J1 + p.J2 + p.K1 + p.K2 + p.G2 <= 2 * N1,
        "R2 budget": p.K1 + p.K2 + p.G1 + p.G2 + p.L1 + p.L2 + p.J2 <= 2 * N2,
    }
    for r, t in ((1, 1), (2, 1), (1, 2), (2, 2)):
        checks[f"Q{r}{t}'>=1"] = p.q(r, t) >= 1
    return [name for name, ok in checks.items() if not ok]


def iter_configs(max_antennas: int, scenario: Scenario | None = None, include_unsupported: bool = False):
    """Yield every ordered configuration with all counts in ``1..max_antennas``.

    Configurations are produced in ascending ``(M1, M2, N1, N2)`` order.
    """
    rng = range(1, max_antennas + 1)
    for M1 in rng:
        for M2 in rng:
            for N1 in rng:
                for N2 in rng:
                    cfg = AntennaConfig(M1, M2, N1, N2)
                    if not (cfg.is_transmit_rich or cfg.is_receive_rich):
                        continue
                    tag = classify(cfg)
                    if scenario is not None and tag.scenario is not scenario:
                        continue
                    if not include_unsupported and not tag.supported:
                        continue
                    yield cfg


def block_names() -> tuple[str, ...]:
    return BLOCK_NAMES

