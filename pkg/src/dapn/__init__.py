"""Deterministic arithmetic Petri nets and the universal net PolyUPN(15,29)."""

from .engine import Mode, run, step
from .model import Net, validate_net
from .netgen import build_polyupn, compile_tm

__all__ = ["Mode", "Net", "build_polyupn", "compile_tm", "run", "step", "validate_net"]
