"""Deterministic firing of a DAPN.

Each step, transitions are scanned in index order.  The first one with a
positive instance count fires.  In multichannel mode it fires in all of its
instances at once; in sequential mode it fires once, which reproduces the
classical one-token-at-a-time behaviour.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from typing import IO, Optional

from .model import INHIBITOR, Marking, Net

# Firability of an inhibitor arc on an empty place.  Never escapes
# ``instances`` for a valid net since a regular input always bounds the minimum.
UNBOUNDED = math.inf


class Mode(enum.Enum):
    MULTICHANNEL = "multichannel"
    SEQUENTIAL = "sequential"


@dataclass(frozen=True)
class FiringEvent:
    step: int
    transition: int
    instances: int


@dataclass
class Trace:
    events: list[FiringEvent] = field(default_factory=list)
    snapshots: dict[int, Marking] = field(default_factory=dict)
    halted: bool = False
    length: int = 0  # number of steps taken, kept even when events are not recorded

    def total_instances(self) -> int:
        return sum(e.instances for e in self.events)

    def write_csv(self, stream: IO[str], n_places: int | None = None) -> None:
        """Write ``step,transition,instances[,p1..pm]``; markings only on snapshot rows."""
        writer = csv.writer(stream, lineterminator="\n")
        header = ["step", "transition", "instances"]
        if n_places:
            header += [f"p{j}" for j in range(1, n_places + 1)]
        writer.writerow(header)
        for e in self.events:
            row = [e.step, e.transition, e.instances]
            if n_places:
                snap = self.snapshots.get(e.step)
                row += list(snap) if snap is not None else [""] * n_places
            writer.writerow(row)


def via(x: int, y: int) -> int | float:
    """Per-arc firability: floor division for a regular arc, 0 or unbounded for an inhibitor."""
    if x < 0:
        raise ValueError(f"marking must be nonnegative, got {x}")
    if y >= 1:
        return x // y
    if y == INHIBITOR:
        return 0 if x > 0 else UNBOUNDED
    raise ValueError(f"arc weight must be -1 or positive, got {y}")


def instances(net: Net, marking: Marking, t: int) -> int:
    """Number of instances of transition ``t`` (1-based) enabled at ``marking``."""
    ct = net.compiled[t - 1]
    for j in ct.inhibitors:
        if marking[j]:
            return 0
    return min(marking[j] // w for j, w in ct.inputs)


def select(net: Net, marking: Marking) -> Optional[int]:
    for t, ct in enumerate(net.compiled, 1):
        if _enabled(ct, marking):
            return t
    return None


def _enabled(ct, marking) -> bool:
    for j in ct.inhibitors:
        if marking[j]:
            return False
    for j, w in ct.inputs:
        if marking[j] < w:
            return False
    return True


def _fire(ct, marking: list[int], v: int) -> None:
    for j, w in ct.inputs:
        marking[j] -= v * w
    for j, w in ct.outputs:
        marking[j] += v * w


def step(
    net: Net, marking: Marking, mode: Mode = Mode.MULTICHANNEL, index: int = 0
) -> Optional[tuple[Marking, FiringEvent]]:
    """Fire one step.  Returns None when no transition is firable (the net halts)."""
    t = select(net, marking)
    if t is None:
        return None
    v = instances(net, marking, t) if mode is Mode.MULTICHANNEL else 1
    new = list(marking)
    _fire(net.compiled[t - 1], new, v)
    assert min(new, default=0) >= 0
    return tuple(new), FiringEvent(index, t, v)


def run(
    net: Net,
    marking: Marking | None = None,
    mode: Mode = Mode.MULTICHANNEL,
    budget: int = 1000,
    snapshot_every: int | None = None,
    start: int = 0,
    record: bool = True,
) -> tuple[Trace, Marking]:
    """Step until the net halts or ``budget`` steps have been taken.

    With ``snapshot_every=s`` the marking after every event whose step index
    is a multiple of ``s`` is kept in ``trace.snapshots``.  ``record=False``
    drops the event list (for long sequential runs); ``trace.length`` still
    counts the steps.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    if snapshot_every is not None and snapshot_every < 1:
        raise ValueError("snapshot_every must be >= 1")
    mu = list(net.initial_marking if marking is None else marking)
    compiled = net.compiled
    multi = mode is Mode.MULTICHANNEL
    trace = Trace()
    events = trace.events
    for k in range(start, start + budget):
        for t, ct in enumerate(compiled, 1):
            if _enabled(ct, mu):
                break
        else:
            trace.halted = True
            break
        if multi:
            v = min(mu[j] // w for j, w in ct.inputs)
        else:
            v = 1
        _fire(ct, mu, v)
        trace.length += 1
        if record:
            events.append(FiringEvent(k, t, v))
        if snapshot_every and k % snapshot_every == 0:
            trace.snapshots[k] = tuple(mu)
    else:
        # budget exhausted; the final marking may still be dead
        trace.halted = select(net, tuple(mu)) is None
    return trace, tuple(mu)
