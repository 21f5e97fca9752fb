"""Static structure of a deterministic arithmetic Petri net.

A net is the quadruple (places, transitions, arcs, initial marking).  Places
and transitions are identified by their 1-based position; a transition's
index is also its priority (smaller index fires first).  Names are metadata.

Arcs carry the weight used by the firing rule: a positive integer for a
regular arc, ``INHIBITOR`` (-1) for an inhibitor arc.  Inhibitor arcs only
ever point from a place into a transition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

INHIBITOR = -1

Marking = tuple[int, ...]


class NetError(ValueError):
    """Raised when a net violates its structural invariants."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True, order=True)
class Arc:
    """One arc between place ``place`` and transition ``transition``.

    ``output`` is False for place->transition arcs and True for
    transition->place arcs.
    """

    transition: int
    output: bool
    place: int
    weight: int

    @property
    def inhibitor(self) -> bool:
        return self.weight == INHIBITOR

    @property
    def regular(self) -> bool:
        return self.weight >= 1

    def sort_key(self) -> tuple[int, int, int]:
        # inputs, then outputs, then inhibitors; place index breaks ties
        rank = 2 if self.inhibitor else (1 if self.output else 0)
        return (self.transition, rank, self.place)


@dataclass(frozen=True)
class CompiledTransition:
    inputs: tuple[tuple[int, int], ...]  # (0-based place, weight)
    inhibitors: tuple[int, ...]
    outputs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Net:
    name: str
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    arcs: tuple[Arc, ...]
    initial_marking: Marking = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "places", tuple(self.places))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "arcs", tuple(sorted(self.arcs, key=Arc.sort_key)))
        marking = tuple(self.initial_marking) or (0,) * len(self.places)
        object.__setattr__(self, "initial_marking", marking)

    @property
    def n_places(self) -> int:
        return len(self.places)

    @property
    def n_transitions(self) -> int:
        return len(self.transitions)

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    def place_id(self, name: str) -> int:
        return self.places.index(name) + 1

    def transition_id(self, name: str) -> int:
        return self.transitions.index(name) + 1

    def place_name(self, index: int) -> str:
        return self.places[index - 1]

    def transition_name(self, index: int) -> str:
        return self.transitions[index - 1]

    def arcs_of(self, transition: int) -> list[Arc]:
        return [a for a in self.arcs if a.transition == transition]

    def marking_dict(self, marking: Marking) -> dict[str, int]:
        return dict(zip(self.places, marking))

    def marking_from(self, counts: dict[str, int]) -> Marking:
        """Build a marking from place names; unnamed places get zero."""
        unknown = set(counts) - set(self.places)
        if unknown:
            raise KeyError(f"unknown places: {sorted(unknown)}")
        return tuple(counts.get(p, 0) for p in self.places)

    def with_marking(self, marking: Iterable[int]) -> Net:
        return Net(self.name, self.places, self.transitions, self.arcs, tuple(marking))

    @cached_property
    def compiled(self) -> tuple[CompiledTransition, ...]:
        """Per-transition arc lists in the shape the engine consumes."""
        out = []
        for t in range(1, self.n_transitions + 1):
            arcs = self.arcs_of(t)
            out.append(
                CompiledTransition(
                    inputs=tuple((a.place - 1, a.weight) for a in arcs if not a.output and a.regular),
                    inhibitors=tuple(a.place - 1 for a in arcs if a.inhibitor and not a.output),
                    outputs=tuple((a.place - 1, a.weight) for a in arcs if a.output),
                )
            )
        return tuple(out)

    def check(self) -> Net:
        problems = validate_net(self)
        if problems:
            raise NetError(problems)
        return self


def validate_net(net: Net) -> list[str]:
    """Return every structural violation of ``net``; an empty list means valid."""
    problems: list[str] = []
    m, n = net.n_places, net.n_transitions

    for kind, names in (("place", net.places), ("transition", net.transitions)):
        seen: set[str] = set()
        for name in names:
            if name in seen:
                problems.append(f"duplicate {kind} name {name!r}")
            seen.add(name)
    clash = set(net.places) & set(net.transitions)
    for name in sorted(clash):
        problems.append(f"name {name!r} used for both a place and a transition")

    if len(net.initial_marking) != m:
        problems.append(f"initial marking has {len(net.initial_marking)} components, expected {m}")
    for j, count in enumerate(net.initial_marking, 1):
        if not isinstance(count, int) or count < 0:
            problems.append(f"initial marking of p{j} is {count!r}, must be a nonnegative integer")

    pairs: set[tuple[int, int, bool]] = set()
    for arc in net.arcs:
        label = f"arc t{arc.transition}{'->' if arc.output else '<-'}p{arc.place}"
        if not 1 <= arc.place <= m:
            problems.append(f"{label}: unknown place")
        if not 1 <= arc.transition <= n:
            problems.append(f"{label}: unknown transition")
        if arc.output and arc.inhibitor:
            problems.append(f"{label}: inhibitor on output")
        elif not (arc.regular or arc.inhibitor):
            problems.append(f"{label}: weight {arc.weight} is neither >= 1 nor inhibitor")
        key = (arc.transition, arc.place, arc.output)
        if key in pairs:
            problems.append(f"{label}: duplicate arc")
        pairs.add(key)

    has_regular_input = {a.transition for a in net.arcs if not a.output and a.regular}
    for t in range(1, n + 1):
        if t not in has_regular_input:
            problems.append(f"transition t{t} ({net.transitions[t - 1]}): no regular input")
    return problems
