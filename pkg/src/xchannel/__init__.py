"""Asymmetric interference alignment and cancellation for 2x2 MIMO X channels.

Typical use::

    from xchannel import AntennaConfig, plan, generate_channels, synthesize, verify_all

    p = plan((7, 6, 5, 4))
    ch = generate_channels(p.config, seed=1)
    report = verify_all(ch, p, synthesize(ch, p, seed=2))
    assert report.passed and report.achieved_dof == p.dof
"""

from .errors import (
    DecodeError,
    DomainError,
    OracleScopeError,
    OrderingError,
    PlanInfeasibleError,
    ShapeError,
    SynthesisError,
    Unsolvable,
    UnsupportedConfigError,
    XChannelError,
)
from .oracle import oracle_max_dof
from .planner import (
    AntennaConfig,
    BlockPlan,
    Case,
    CaseTag,
    Scenario,
    classify,
    format_rational,
    iter_configs,
    outer_bound,
    plan,
    plan_blocks,
    plan_violations,
)
from .realmap import (
    DEFAULT_POLICY,
    TolerancePolicy,
    jrotate,
    null_space,
    numeric_rank,
    realify_matrix,
    realify_vector,
    solve_exact,
)
from .sim import TrialConfig, TrialResult, run_trials
from .structcode import ConstellationParam, ConstellationPoint, decode, encode, power_constraint
from .synth import ChannelSet, PrecoderSet, generate_channels, synth_receive_rich, synth_transmit_rich, synthesize
from .verify import VerificationReport, decode_zero_forcing, verify_all

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
