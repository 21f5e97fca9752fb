"""Construction of PolyUPN(15,29) and a TM -> DAPN compiler.

Places (fixed roles)::

    p1 U      encoded state          p9  scratch for S*radix
    p2 X      encoded head symbol    p10 control (stage 2)
    p3 L      code of the left zone  p11 control (stage 3)
    p4 R      code of the right zone p12 control (stage 5)
    p5 STEP   macro-step token       p13 control (stage 6)
    p6 MOVE   control (stage 1)      p14 scratch for S div radix
    p7 RIGHT  last move was right    p15 LEFT  last move was left
    p8 MOVE1  control (stage 4)

Transitions, in priority order: ``lb`` and ``rb`` inject a blank word into
an empty side code; the FS block holds one transition per (symbol, state)
pair in descending (symbol code, state code) order; then six tape stages,
each a pair of direction-specific workers followed by the control mover
(the last stage is followed by the two finishers instead).

Control flow is a moving zero: every control place holds a token except the
one naming the active stage.  Workers and movers test for that zero with
inhibitor arcs, and workers are gated on direction by an inhibitor from the
opposite direction flag.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

from . import encoding
from .encoding import Side
from .model import INHIBITOR, Arc, Marking, Net
from .tm import Move, TmConfig, TmError, TmSpec

PLACES = (
    "U", "X", "L", "R", "STEP", "MOVE", "RIGHT", "MOVE1",
    "p9", "p10", "p11", "p12", "p13", "p14", "LEFT",
)  # fmt: skip
CONTROL = ("MOVE", "p10", "p11", "MOVE1", "p12", "p13")
REFERENCE_ARC_COUNT = 125


class BoundaryError(ValueError):
    pass


# (control place, left-move source -> target, right-move source -> target,
#  which end of the arc carries the radix)
_STAGES = (
    ("MOVE", ("R", "p9"), ("L", "p9"), "out"),  # S := S*radix ...
    ("p10", ("p9", "R"), ("p9", "L"), None),
    ("p11", ("X", "R"), ("X", "L"), None),  # ... + X
    ("MOVE1", ("L", "p14"), ("R", "p14"), "in"),  # S div radix, S mod radix left behind
    ("p12", ("L", "X"), ("R", "X"), None),  # X := S mod radix
    ("p13", ("p14", "L"), ("p14", "R"), None),  # S := S div radix
)

# Each pair is listed in priority order.  The push stages put the left-move
# worker first and the pop stages the right-move worker first, so that a
# left move runs t11 t13 t14 t16 t17 t19 t21 t22 t24 t25 t27 t28.
_PAIR_ORDER = (("left", "right"),) * 3 + (("right", "left"),) * 3


@dataclass(frozen=True)
class PolyNetLayout:
    places: dict[str, int]
    transitions: dict[str, int]
    fs: dict[tuple[int, int], int]  # (symbol code, state code) -> transition
    fs_moves: dict[int, Move]
    halts: dict[tuple[int, int], int] = field(default_factory=dict)
    radix: int = 5
    blank_codes: tuple[int, int] = (167, 13596)

    def place(self, role: str) -> int:
        return self.places[role]

    def __getitem__(self, role: str) -> int:
        return self.transitions[role]

    @property
    def control_places(self) -> tuple[int, ...]:
        return tuple(self.places[c] for c in CONTROL)

    def worker(self, stage: int, move: Move) -> int:
        return self.transitions[f"w{stage}_{move}"]

    def mover(self, stage: int) -> int:
        return self.transitions[f"mv{stage}"]

    def finisher(self, move: Move) -> int:
        return self.transitions[f"fin_{move}"]

    @property
    def finishers(self) -> tuple[int, int]:
        return self.finisher("left"), self.finisher("right")

    def role(self, t: int) -> str:
        for name, idx in self.transitions.items():
            if idx == t:
                return name
        raise KeyError(t)


def _tape_block(radix: int) -> Iterator[tuple[str, dict, dict, tuple]]:
    for s, (ctrl, left, right, scaled) in enumerate(_STAGES, 1):
        ends = {"left": left, "right": right}
        for move in _PAIR_ORDER[s - 1]:
            src, dst = ends[move]
            w_in = radix if scaled == "in" else 1
            w_out = radix if scaled == "out" else 1
            opposite = "RIGHT" if move == "left" else "LEFT"
            yield f"w{s}_{move}", {src: w_in}, {dst: w_out}, (ctrl, opposite)
        if s < 6:
            nxt = CONTROL[s]
            yield f"mv{s}", {nxt: 1}, {ctrl: 1}, (ctrl,)
    yield "fin_left", {"LEFT": 1}, {"p13": 1, "STEP": 1}, ()
    yield "fin_right", {"RIGHT": 1}, {"p13": 1, "STEP": 1}, ()


def _assemble(name: str, rows, marking: dict[str, int] | None = None) -> Net:
    transitions = []
    arcs = []
    pid = {p: j for j, p in enumerate(PLACES, 1)}
    for t, (tname, ins, outs, inhib) in enumerate(rows, 1):
        transitions.append(tname)
        arcs += [Arc(t, False, pid[p], w) for p, w in ins.items() if w]
        arcs += [Arc(t, True, pid[p], w) for p, w in outs.items() if w]
        arcs += [Arc(t, False, pid[p], INHIBITOR) for p in inhib]
    init = tuple((marking or {}).get(p, 0) for p in PLACES)
    return Net(name, PLACES, tuple(transitions), tuple(arcs), init).check()


def _control_marking() -> dict[str, int]:
    return {"STEP": 1, **{c: 1 for c in CONTROL}}


def _layout(net: Net, radix: int, blanks: tuple[int, int]) -> PolyNetLayout:
    transitions = {name: t for t, name in enumerate(net.transitions, 1)}
    fs, halts, moves = {}, {}, {}
    left, right = net.place_id("LEFT"), net.place_id("RIGHT")
    for name, t in transitions.items():
        kind, _, codes = name.partition("_")
        if kind not in ("fs", "halt"):
            continue
        sx, su = (int(c) for c in codes.split("_"))
        if kind == "halt":
            halts[sx, su] = t
            continue
        fs[sx, su] = t
        outs = {a.place for a in net.arcs_of(t) if a.output}
        moves[t] = "left" if left in outs else "right"
        assert (left in outs) != (right in outs)
    places = {p: j for j, p in enumerate(net.places, 1)}
    return PolyNetLayout(places, transitions, fs, moves, halts, radix, blanks)


def build_polyupn() -> tuple[Net, PolyNetLayout]:
    """PolyUPN(15,29) written out as an explicit table."""
    rows = [
        ("lb", {"STEP": 1}, {"STEP": 1, "L": 167}, ("L",)),
        ("rb", {"STEP": 1}, {"STEP": 1, "R": 13596}, ("R",)),
        # FS block: (x, u) -> (x', move, u'); codes 0=1 1=2 0/=3 1/=4, u1=0 u2=1
        ("fs_4_1", {"STEP": 1, "MOVE": 1, "X": 4, "U": 1}, {"X": 2, "U": 1, "RIGHT": 1}, ()),
        ("fs_4_0", {"STEP": 1, "MOVE": 1, "X": 4}, {"X": 4, "LEFT": 1}, ()),
        ("fs_3_1", {"STEP": 1, "MOVE": 1, "X": 3, "U": 1}, {"X": 1, "U": 1, "RIGHT": 1}, ()),
        ("fs_3_0", {"STEP": 1, "MOVE": 1, "X": 3}, {"X": 4, "LEFT": 1}, ()),
        ("fs_2_1", {"STEP": 1, "MOVE": 1, "X": 2, "U": 1}, {"X": 3, "U": 1, "LEFT": 1}, ()),
        ("fs_2_0", {"STEP": 1, "MOVE": 1, "X": 2}, {"X": 4, "U": 1, "LEFT": 1}, ()),
        ("fs_1_1", {"STEP": 1, "MOVE": 1, "X": 1, "U": 1}, {"X": 4, "RIGHT": 1}, ()),
        ("fs_1_0", {"STEP": 1, "MOVE": 1, "X": 1}, {"X": 3, "LEFT": 1}, ()),
        # MA5LR: S := S*5 + X on the side the head leaves
        ("w1_left", {"R": 1}, {"p9": 5}, ("MOVE", "RIGHT")),
        ("w1_right", {"L": 1}, {"p9": 5}, ("MOVE", "LEFT")),
        ("mv1", {"p10": 1}, {"MOVE": 1}, ("MOVE",)),
        ("w2_left", {"p9": 1}, {"R": 1}, ("p10", "RIGHT")),
        ("w2_right", {"p9": 1}, {"L": 1}, ("p10", "LEFT")),
        ("mv2", {"p11": 1}, {"p10": 1}, ("p10",)),
        ("w3_left", {"X": 1}, {"R": 1}, ("p11", "RIGHT")),
        ("w3_right", {"X": 1}, {"L": 1}, ("p11", "LEFT")),
        ("mv3", {"MOVE1": 1}, {"p11": 1}, ("p11",)),
        # MD5LR: X := S mod 5, S := S div 5 on the side the head enters
        ("w4_right", {"R": 5}, {"p14": 1}, ("MOVE1", "LEFT")),
        ("w4_left", {"L": 5}, {"p14": 1}, ("MOVE1", "RIGHT")),
        ("mv4", {"p12": 1}, {"MOVE1": 1}, ("MOVE1",)),
        ("w5_right", {"R": 1}, {"X": 1}, ("p12", "LEFT")),
        ("w5_left", {"L": 1}, {"X": 1}, ("p12", "RIGHT")),
        ("mv5", {"p13": 1}, {"p12": 1}, ("p12",)),
        ("w6_right", {"p14": 1}, {"R": 1}, ("p13", "LEFT")),
        ("w6_left", {"p14": 1}, {"L": 1}, ("p13", "RIGHT")),
        ("fin_left", {"LEFT": 1}, {"p13": 1, "STEP": 1}, ()),
        ("fin_right", {"RIGHT": 1}, {"p13": 1, "STEP": 1}, ()),
    ]
    marking = {**_control_marking(), "U": 0, "X": 1, "L": 167, "R": 13596}
    net = _assemble("polyupn_wutm24", rows, marking)
    return net, _layout(net, 5, (167, 13596))


def _check_codes(spec: TmSpec) -> None:
    if sorted(spec.symbols.values()) != list(range(1, len(spec.symbols) + 1)):
        raise TmError("symbol codes must be a permutation of 1..|symbols|")
    zero = [s for s, c in spec.states.items() if c == 0]
    if len(zero) > 1:
        raise TmError(f"states {zero} all have code 0; at most one state may omit the U arc")
    if sorted(spec.states.values()) != list(range(len(spec.states))):
        raise TmError("state codes must be a permutation of 0..|states|-1")


def compile_tm(spec: TmSpec) -> tuple[Net, PolyNetLayout]:
    """Compile a weakly universal TM into a DAPN with the PolyUPN layout.

    Missing rules become ``halt_*`` transitions that swallow the STEP token,
    so the net deadlocks exactly where the machine would stop.
    """
    _check_codes(spec)
    radix = spec.radix
    sw_l = encoding.pack([spec.symbols[s] for s in spec.left_blank], Side.LEFT, radix)
    sw_r = encoding.pack([spec.symbols[s] for s in spec.right_blank], Side.RIGHT, radix)

    rows = [
        ("lb", {"STEP": 1}, {"STEP": 1, "L": sw_l}, ("L",)),
        ("rb", {"STEP": 1}, {"STEP": 1, "R": sw_r}, ("R",)),
    ]
    # exact (x, u) must outrank every pair with a smaller code on either
    # component, since those are enabled by the same marking
    pairs = sorted(
        ((x, u) for x in spec.symbols for u in spec.states),
        key=lambda p: (spec.symbols[p[0]], spec.states[p[1]]),
        reverse=True,
    )
    for x, u in pairs:
        sx, su = spec.symbols[x], spec.states[u]
        rule = spec.rules.get((x, u))
        if rule is None:
            rows.append((f"halt_{sx}_{su}", {"STEP": 1, "X": sx, "U": su}, {"X": sx, "U": su}, ()))
            continue
        flag = "LEFT" if rule.move == "left" else "RIGHT"
        outs = {"X": spec.symbols[rule.write], "U": spec.states[rule.state], flag: 1}
        rows.append((f"fs_{sx}_{su}", {"STEP": 1, "MOVE": 1, "X": sx, "U": su}, outs, ()))
    rows.extend(_tape_block(radix))

    start = spec.start_config()
    marking = {
        **_control_marking(),
        "U": spec.states[start.state],
        "X": spec.symbols[start.head],
        "L": sw_l,
        "R": sw_r,
    }
    net = _assemble("polyupn_" + re.sub(r"[^A-Za-z0-9_]", "_", spec.name), rows, marking)
    return net, _layout(net, radix, (sw_l, sw_r))


def initial_marking(layout: PolyNetLayout, spec: TmSpec, cfg: TmConfig) -> Marking:
    """Boundary marking holding ``cfg``; empty zones give a zero code."""
    counts = dict.fromkeys(PLACES, 0)
    counts.update(_control_marking())
    counts["U"] = spec.states[cfg.state]
    counts["X"] = spec.symbols[cfg.head]
    counts["L"] = encoding.pack([spec.symbols[s] for s in cfg.left], Side.LEFT, layout.radix)
    counts["R"] = encoding.pack([spec.symbols[s] for s in cfg.right], Side.RIGHT, layout.radix)
    mu = [0] * len(layout.places)
    for role, j in layout.places.items():
        mu[j - 1] = counts[role]
    return tuple(mu)


def boundary_problems(layout: PolyNetLayout, marking: Marking) -> list[str]:
    get = lambda role: marking[layout.places[role] - 1]  # noqa: E731
    problems = []
    if get("STEP") != 1:
        problems.append(f"STEP={get('STEP')}")
    for c in CONTROL:
        if get(c) != 1:
            problems.append(f"{c}={get(c)}")
    for p in ("LEFT", "RIGHT", "p9", "p14"):
        if get(p) != 0:
            problems.append(f"{p}={get(p)}")
    return problems


def is_boundary(layout: PolyNetLayout, marking: Marking) -> bool:
    return not boundary_problems(layout, marking)


def extract_config(layout: PolyNetLayout, spec: TmSpec, marking: Marking) -> TmConfig:
    problems = boundary_problems(layout, marking)
    if problems:
        raise BoundaryError("not a boundary marking: " + ", ".join(problems))
    get = lambda role: marking[layout.places[role] - 1]  # noqa: E731
    try:
        left = encoding.unpack(get("L"), Side.LEFT, layout.radix)
        right = encoding.unpack(get("R"), Side.RIGHT, layout.radix)
    except encoding.MalformedCode as e:
        raise BoundaryError(str(e)) from None
    return TmConfig(
        spec.state_by_code(get("U")),
        tuple(spec.symbol_by_code(d) for d in left),
        spec.symbol_by_code(get("X")),
        tuple(spec.symbol_by_code(d) for d in right),
    )


def arc_breakdown(net: Net, layout: PolyNetLayout) -> dict[str, int]:
    groups = {"blank injectors": 0, "FS block": 0, "workers": 0, "movers": 0, "finishers": 0}
    for arc in net.arcs:
        role = layout.role(arc.transition)
        if role in ("lb", "rb"):
            groups["blank injectors"] += 1
        elif role.startswith(("fs_", "halt_")):
            groups["FS block"] += 1
        elif role.startswith("w"):
            groups["workers"] += 1
        elif role.startswith("mv"):
            groups["movers"] += 1
        else:
            groups["finishers"] += 1
    return groups


def build_log(net: Net, layout: PolyNetLayout) -> str:
    lines = [f"net {net.name}: {net.n_places} places, {net.n_transitions} transitions"]
    lines.append("places:")
    lines += [f"  p{j:<2} {role}" for role, j in layout.places.items()]
    lines.append("transitions:")
    for role, t in layout.transitions.items():
        extra = f" ({layout.fs_moves[t]} move)" if t in layout.fs_moves else ""
        lines.append(f"  t{t:<2} {role}{extra}")
    lines.append("arcs:")
    for group, count in arc_breakdown(net, layout).items():
        lines.append(f"  {group:<16} {count}")
    delta = net.n_arcs - REFERENCE_ARC_COUNT
    lines.append(f"  total            {net.n_arcs} (reference {REFERENCE_ARC_COUNT}, delta {delta:+d})")
    lines.append(f"radix {layout.radix}, blank codes {layout.blank_codes[0]} {layout.blank_codes[1]}")
    return "\n".join(lines) + "\n"

