"""Exception hierarchy shared by every module of the package."""


class XChannelError(Exception):
    """Base class for all errors raised by :mod:`xchannel`."""


class OrderingError(XChannelError, ValueError):
    """Antenna counts fit neither the transmit-rich nor the receive-rich ordering."""


class UnsupportedConfigError(XChannelError, ValueError):
    """Configuration is ordered but no X-channel plan with every message non-empty exists."""


class OracleScopeError(XChannelError, ValueError):
    """Brute-force oracle asked to enumerate beyond its antenna bound."""


class DomainError(XChannelError, ValueError):
    """Constellation point outside the legal alphabet."""


class DecodeError(XChannelError, ValueError):
    """Integer is not a codeword of the structured code."""


class Unsolvable(XChannelError, ArithmeticError):
    """Linear system has no solution within the residual tolerance."""


class ShapeError(XChannelError, ValueError):
    """Array dimensions disagree with the antenna configuration or plan."""


class PlanInfeasibleError(XChannelError, ValueError):
    """Plan asks for more aligned directions than the alignment kernel provides."""


class SynthesisError(XChannelError, RuntimeError):
    """Precoder construction failed repeatedly, signalling a pathological channel draw."""
