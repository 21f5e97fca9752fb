"""Cross-validation of a compiled net against the TM oracle.

The engine is run boundary to boundary: one macro step is every event from
one boundary marking up to and including the finisher that produces the
next.  After each macro step the decoded configuration must agree with the
oracle on a window around the head.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import IO, Iterator, Optional

from . import engine, tm
from .engine import FiringEvent, Mode
from .model import Marking, Net
from .netgen import BoundaryError, PolyNetLayout, extract_config, initial_marking, is_boundary

PER_STEP_BOUND = 14
# Engine steps allowed per macro step before the run is declared stuck.
_RUNAWAY = 64


@dataclass
class MacroStep:
    events: list[FiringEvent]
    marking: Marking
    halted: bool = False

    @property
    def engine_steps(self) -> int:
        return len(self.events)

    @property
    def max_instances(self) -> int:
        return max((e.instances for e in self.events), default=0)

    @property
    def total_instances(self) -> int:
        return sum(e.instances for e in self.events)


def macro_steps(
    net: Net, layout: PolyNetLayout, marking: Marking, mode: Mode = Mode.MULTICHANNEL
) -> Iterator[MacroStep]:
    """Yield one MacroStep per simulated TM step, forever or until the net halts."""
    finishers = set(layout.finishers)
    index = 0
    while True:
        events: list[FiringEvent] = []
        while True:
            result = engine.step(net, marking, mode, index)
            if result is None:
                yield MacroStep(events, marking, halted=True)
                return
            marking, event = result
            index += 1
            events.append(event)
            if event.transition in finishers and is_boundary(layout, marking):
                break
            if len(events) > _RUNAWAY and mode is Mode.MULTICHANNEL:
                yield MacroStep(events, marking, halted=True)
                return
        yield MacroStep(events, marking)


def check_shape(layout: PolyNetLayout, events: list[FiringEvent]) -> list[str]:
    """Compare one macro step against the expected pattern.

    Pattern: optional lb, optional rb, one FS transition (1 instance), then for
    each of the six tape stages an optional worker of the FS move's direction
    followed by that stage's mover; the last stage ends with the finisher.
    """
    roles = [layout.role(e.transition) for e in events]
    i = 0
    for injector in ("lb", "rb"):
        if i < len(roles) and roles[i] == injector:
            i += 1
    if i >= len(roles) or not roles[i].startswith("fs_"):
        return [f"expected an FS transition at position {i}, got {roles[i:i + 1]}"]
    if events[i].instances != 1:
        return [f"FS transition fired {events[i].instances} instances"]
    move = layout.fs_moves[events[i].transition]
    i += 1
    for s in range(1, 7):
        if i < len(roles) and roles[i] == f"w{s}_{move}":
            i += 1
        closer = f"mv{s}" if s < 6 else f"fin_{move}"
        if i >= len(roles) or roles[i] != closer:
            return [f"expected {closer} at position {i}, got {roles[i:i + 1]}"]
        i += 1
    if i != len(roles):
        return [f"trailing events {roles[i:]}"]
    return []


def tape_phase_sequence(layout: PolyNetLayout, fs_move: str, x_new: int, left: int, right: int) -> list[tuple[int, int]]:
    """Firing sequence (transition, instances) predicted for the tape phase.

    ``left``/``right`` are the side codes and ``x_new`` the written symbol
    code right after the FS transition fired.  Workers with zero instances
    do not fire and are omitted.
    """
    r = layout.radix
    src, dst = (right, left) if fs_move == "left" else (left, right)
    counts = [src, src * r, x_new, dst // r, dst % r, dst // r]
    seq = []
    for s, v in enumerate(counts, 1):
        if v:
            seq.append((layout.worker(s, fs_move), v))
        seq.append((layout.mover(s) if s < 6 else layout.finisher(fs_move), 1))  # type: ignore[arg-type]
    return seq


@dataclass
class Mismatch:
    tm_step: int
    reason: str
    expected: list[str] = field(default_factory=list)
    actual: list[str] = field(default_factory=list)

    def __str__(self) -> str:
        text = f"step {self.tm_step}: {self.reason}"
        if self.expected or self.actual:
            text += f"\n  oracle: {' '.join(self.expected)}\n  net:    {' '.join(self.actual)}"
        return text


@dataclass
class ValidationReport:
    tm_steps_checked: int = 0
    engine_steps_used: int = 0
    per_step: list[int] = field(default_factory=list)
    first_mismatch: Optional[Mismatch] = None
    max_code_bits: int = 0
    bit_constant: float = 0.0  # smallest c with code bits <= log2(radix) * (i + c) at every step i
    shape_errors: list[str] = field(default_factory=list)
    bound_errors: list[str] = field(default_factory=list)
    halted: bool = False

    @property
    def passed(self) -> bool:
        return self.first_mismatch is None and not self.shape_errors and not self.bound_errors

    @property
    def max_ratio(self) -> int:
        return max(self.per_step, default=0)

    def summary(self) -> str:
        lines = [
            f"TM steps checked:   {self.tm_steps_checked}",
            f"engine steps used:  {self.engine_steps_used}"
            f" (max {self.max_ratio} per TM step, bound {PER_STEP_BOUND})",
            f"max code bits:      {self.max_code_bits} (constant c = {self.bit_constant:.3f})",
        ]
        if self.halted:
            lines.append("machine halted")
        if self.first_mismatch:
            lines.append(f"first mismatch:     {self.first_mismatch}")
        lines += [f"shape: {e}" for e in self.shape_errors[:5]]
        lines += [f"bound: {e}" for e in self.bound_errors[:5]]
        lines.append("PASSED" if self.passed else "FAILED")
        return "\n".join(lines)


def _code_bits(layout: PolyNetLayout, marking: Marking) -> int:
    L, R = marking[layout.place("L") - 1], marking[layout.place("R") - 1]
    return max(L.bit_length(), R.bit_length())


def cross_validate(
    net: Net,
    layout: PolyNetLayout,
    spec: tm.TmSpec,
    cfg: tm.TmConfig,
    k: int,
    window_radius: int = 16,
) -> ValidationReport:
    if k < 0:
        raise ValueError("k must be >= 0")
    report = ValidationReport()
    marking = initial_marking(layout, spec, cfg)
    log_r = math.log2(layout.radix)

    def compare(i: int, mu: Marking, oracle_cfg: tm.TmConfig) -> bool:
        bits = _code_bits(layout, mu)
        report.max_code_bits = max(report.max_code_bits, bits)
        report.bit_constant = max(report.bit_constant, bits / log_r - i)
        try:
            got = extract_config(layout, spec, mu)
        except BoundaryError as e:
            report.first_mismatch = Mismatch(i, f"cannot decode marking: {e}")
            return False
        want_w = tm.window(spec, oracle_cfg, window_radius)
        got_w = tm.window(spec, got, window_radius)
        if want_w != got_w or got.state != oracle_cfg.state:
            reason = "window differs" if want_w != got_w else f"state {got.state} != {oracle_cfg.state}"
            report.first_mismatch = Mismatch(i, reason, [oracle_cfg.state] + want_w, [got.state] + got_w)
            return False
        return True

    oracle = cfg
    if not compare(0, marking, oracle):
        return report
    # only a start with both zones empty needs lb and rb before the same FS firing
    allowance = int(marking[layout.place("L") - 1] == marking[layout.place("R") - 1] == 0)

    steps = macro_steps(net, layout, marking)
    for i in range(1, k + 1):
        oracle_halts = (oracle.head, oracle.state) not in spec.rules
        macro = next(steps)
        report.engine_steps_used += macro.engine_steps
        if macro.halted or oracle_halts:
            if not (macro.halted and oracle_halts):
                who = "net" if macro.halted else "oracle"
                report.first_mismatch = Mismatch(i, f"only the {who} halted")
            report.halted = True
            break
        report.per_step.append(macro.engine_steps)
        report.tm_steps_checked = i
        bound = PER_STEP_BOUND + (allowance if i == 1 else 0)
        if macro.engine_steps > bound:
            report.bound_errors.append(f"step {i}: {macro.engine_steps} engine steps > {bound}")
        for err in check_shape(layout, macro.events):
            report.shape_errors.append(f"step {i}: {err}")
        oracle = tm.tm_step(spec, oracle)
        if not compare(i, macro.marking, oracle):
            break
    total_bound = PER_STEP_BOUND * report.tm_steps_checked + allowance
    if report.engine_steps_used > total_bound:
        report.bound_errors.append(f"total {report.engine_steps_used} engine steps > {total_bound}")
    return report


@dataclass(frozen=True)
class ComplexityRow:
    tm_step: int
    engine_steps: int
    bits: int  # bits held in L and R together at the boundary
    max_instances: int
    sequential_steps: Optional[int] = None  # sum of instances over the macro step


SEQUENTIAL_CAP = 6


def complexity_report(
    net: Net, layout: PolyNetLayout, spec: tm.TmSpec, cfg: tm.TmConfig, k: int
) -> list[ComplexityRow]:
    rows = []
    marking = initial_marking(layout, spec, cfg)
    L, R = layout.place("L") - 1, layout.place("R") - 1
    steps = macro_steps(net, layout, marking)
    for i in range(1, k + 1):
        macro = next(steps)
        if macro.halted:
            break
        mu = macro.marking
        rows.append(
            ComplexityRow(
                i,
                macro.engine_steps,
                mu[L].bit_length() + mu[R].bit_length(),
                macro.max_instances,
                macro.total_instances if i <= SEQUENTIAL_CAP else None,
            )
        )
    return rows


def format_table(rows: list[ComplexityRow]) -> str:
    header = ("tm_step", "engine_steps", "bits", "max_instances", "sequential_steps")
    body = [
        (r.tm_step, r.engine_steps, r.bits, r.max_instances, "" if r.sequential_steps is None else r.sequential_steps)
        for r in rows
    ]
    widths = [max(len(str(x)) for x in col) for col in zip(header, *body)]
    return "\n".join(
        "  ".join(str(x).rjust(w) for x, w in zip(line, widths)) for line in [header, *body]
    ) + "\n"


def write_csv(rows: list[ComplexityRow], stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["tm_step", "engine_steps", "bits", "max_instances"])
    for r in rows:
        writer.writerow([r.tm_step, r.engine_steps, r.bits, r.max_instances])


@dataclass(frozen=True)
class ContrastRow:
    tm_step: int
    multichannel_steps: int
    sequential_steps: int
    same_marking: bool


def sequential_contrast(net: Net, layout: PolyNetLayout, marking: Marking, k: int) -> list[ContrastRow]:
    """Replay ``k`` macro steps in sequential mode and compare boundary markings.

    For each macro step the sequential engine is given exactly as many steps
    as the multichannel run fired instances.  Token counts grow about
    fivefold per TM step, so keep ``k`` small.
    """
    rows = []
    seq_marking = marking
    steps = macro_steps(net, layout, marking)
    for i in range(1, k + 1):
        macro = next(steps)
        if macro.halted:
            break
        budget = macro.total_instances
        trace, seq_marking = engine.run(net, seq_marking, Mode.SEQUENTIAL, budget, record=False)
        rows.append(ContrastRow(i, macro.engine_steps, trace.length, seq_marking == macro.marking))
    return rows
