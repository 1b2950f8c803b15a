"""Gradient-exchange latency of wireless decentralized learning.

Random geometric communication graphs, TIN conflict graphs, greedy
time-sharing schedules and the closed-form latency bounds that go with them.
"""

from gradex.config import ConfigError, ExchangeMode, NetworkConfig

__all__ = ["ConfigError", "ExchangeMode", "NetworkConfig"]
__version__ = "0.1.0"
