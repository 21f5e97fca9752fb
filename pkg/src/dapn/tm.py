"""Direct interpreter for weakly universal Turing machines.

The tape is a finite working zone flanked by infinite periodic blank words:
``left_blank`` repeats to the left, ``right_blank`` to the right.  When the
head walks off an empty zone one whole blank word is materialized.

TM description files are line oriented (``#`` starts a comment)::

    state <name> code <int>
    symbol <token> code <int>
    blank left <tokens>
    blank right <tokens>
    rule <symbol> <state> -> <symbol> <left|right> <state>
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Literal, NamedTuple, Optional

Move = Literal["left", "right"]


class TmError(ValueError):
    pass


class TmFormatError(TmError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class Halted(Exception):
    """No rule for the current (symbol, state) pair."""


class Rule(NamedTuple):
    write: str
    move: Move
    state: str


@dataclass(frozen=True)
class TmSpec:
    name: str
    states: dict[str, int]
    symbols: dict[str, int]
    rules: dict[tuple[str, str], Rule]
    left_blank: tuple[str, ...]
    right_blank: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "left_blank", tuple(self.left_blank))
        object.__setattr__(self, "right_blank", tuple(self.right_blank))
        if not self.left_blank or not self.right_blank:
            raise TmError("blank words must be nonempty")
        for s in self.left_blank + self.right_blank:
            if s not in self.symbols:
                raise TmError(f"blank word uses unknown symbol {s!r}")
        for (sym, st), rule in self.rules.items():
            if sym not in self.symbols or st not in self.states:
                raise TmError(f"rule for unknown pair ({sym}, {st})")
            if rule.write not in self.symbols or rule.state not in self.states:
                raise TmError(f"rule ({sym}, {st}) targets an unknown symbol or state")
            if rule.move not in ("left", "right"):
                raise TmError(f"rule ({sym}, {st}) has move {rule.move!r}")

    @property
    def radix(self) -> int:
        return len(self.symbols) + 1

    @property
    def total(self) -> bool:
        return all((x, u) in self.rules for x in self.symbols for u in self.states)

    def symbol_by_code(self, code: int) -> str:
        for s, c in self.symbols.items():
            if c == code:
                return s
        raise TmError(f"no symbol has code {code}")

    def state_by_code(self, code: int) -> str:
        for s, c in self.states.items():
            if c == code:
                return s
        raise TmError(f"no state has code {code}")

    def start_config(self, state: str | None = None) -> TmConfig:
        """Blank start: one blank word on each side, head on the code-1 symbol."""
        if state is None:
            state = min(self.states, key=self.states.__getitem__)
        return TmConfig(state, self.left_blank, self.symbol_by_code(1), self.right_blank)


@dataclass(frozen=True)
class TmConfig:
    state: str
    left: tuple[str, ...]  # head-adjacent cell last
    head: str
    right: tuple[str, ...]  # head-adjacent cell first
    left_extensions: int = 0
    right_extensions: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))


def tm_step(spec: TmSpec, cfg: TmConfig) -> TmConfig:
    try:
        write, move, state = spec.rules[cfg.head, cfg.state]
    except KeyError:
        raise Halted(f"no rule for ({cfg.head}, {cfg.state})") from None
    left, right = cfg.left, cfg.right
    lext, rext = cfg.left_extensions, cfg.right_extensions
    if move == "left":
        if not left:
            left, lext = spec.left_blank, lext + 1
        return TmConfig(state, left[:-1], left[-1], (write,) + right, lext, rext)
    if not right:
        right, rext = spec.right_blank, rext + 1
    return TmConfig(state, left + (write,), right[0], right[1:], lext, rext)


@dataclass
class TmRun:
    config: TmConfig
    log: list[tuple[str, str, Move]] = field(default_factory=list)  # (state, head, move)
    halted: bool = False


def tm_run(spec: TmSpec, cfg: TmConfig, k: int) -> TmRun:
    if k < 0:
        raise ValueError("k must be >= 0")
    result = TmRun(cfg)
    for _ in range(k):
        c = result.config
        rule = spec.rules.get((c.head, c.state))
        if rule is None:
            result.halted = True
            break
        result.log.append((c.state, c.head, rule.move))
        result.config = tm_step(spec, c)
    return result


def window(spec: TmSpec, cfg: TmConfig, w: int) -> list[str]:
    """The 2w+1 cells centered on the head, blank words repeating past the zones."""
    if w < 0:
        raise ValueError("radius must be >= 0")
    left = list(reversed(cfg.left))  # outward from the head
    lb = list(reversed(spec.left_blank))
    while len(left) < w:
        left.extend(lb)
    right = list(cfg.right)
    while len(right) < w:
        right.extend(spec.right_blank)
    return list(reversed(left[:w])) + [cfg.head] + right[:w]


def extend_left(spec: TmSpec, cfg: TmConfig) -> TmConfig:
    return replace(cfg, left=spec.left_blank + cfg.left)


def extend_right(spec: TmSpec, cfg: TmConfig) -> TmConfig:
    return replace(cfg, right=cfg.right + spec.right_blank)


def parse_tm(text: str, name: str = "tm") -> TmSpec:
    states: dict[str, int] = {}
    symbols: dict[str, int] = {}
    rules: dict[tuple[str, str], Rule] = {}
    blanks: dict[str, tuple[str, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        kw = toks[0]
        if kw in ("state", "symbol"):
            if len(toks) != 4 or toks[2] != "code":
                raise TmFormatError(lineno, f"expected '{kw} <name> code <int>'")
            table = states if kw == "state" else symbols
            if toks[1] in table:
                raise TmFormatError(lineno, f"duplicate {kw} {toks[1]!r}")
            try:
                table[toks[1]] = int(toks[3])
            except ValueError:
                raise TmFormatError(lineno, f"bad code {toks[3]!r}") from None
        elif kw == "blank":
            if len(toks) < 3 or toks[1] not in ("left", "right"):
                raise TmFormatError(lineno, "expected 'blank left|right <tokens>'")
            blanks[toks[1]] = tuple(toks[2:])
        elif kw == "rule":
            if len(toks) != 7 or toks[3] != "->" or toks[5] not in ("left", "right"):
                raise TmFormatError(
                    lineno, "expected 'rule <symbol> <state> -> <symbol> <left|right> <state>'"
                )
            key = (toks[1], toks[2])
            if key in rules:
                raise TmFormatError(lineno, f"duplicate rule for {key}")
            rules[key] = Rule(toks[4], toks[5], toks[6])  # type: ignore[arg-type]
        else:
            raise TmFormatError(lineno, f"unknown keyword {kw!r}")
    if set(blanks) != {"left", "right"}:
        raise TmError("both 'blank left' and 'blank right' are required")
    return TmSpec(name, states, symbols, rules, blanks["left"], blanks["right"])


def format_tm(spec: TmSpec) -> str:
    lines = [f"state {s} code {c}" for s, c in spec.states.items()]
    lines += [f"symbol {s} code {c}" for s, c in spec.symbols.items()]
    lines.append("blank left " + " ".join(spec.left_blank))
    lines.append("blank right " + " ".join(spec.right_blank))
    for (x, u), r in spec.rules.items():
        lines.append(f"rule {x} {u} -> {r.write} {r.move} {r.state}")
    return "\n".join(lines) + "\n"


def bundled(name: str) -> Optional[str]:
    """Text of a TM file shipped with the package, or None."""
    stem = Path(name).name.removesuffix(".tm")
    res = resources.files("dapn") / "data" / f"{stem}.tm"
    return res.read_text(encoding="utf-8") if res.is_file() else None


def load_tm(path: str | Path) -> TmSpec:
    """Read a TM file; a bare name like ``wutm24.tm`` falls back to the bundled copy."""
    p = Path(path)
    stem = p.name.removesuffix(".tm")
    if p.is_file():
        return parse_tm(p.read_text(encoding="utf-8"), stem)
    text = bundled(p.name)
    if text is None:
        raise FileNotFoundError(str(path))
    return parse_tm(text, stem)


def wutm24() -> TmSpec:
    return parse_tm(bundled("wutm24"), "wutm24")  # type: ignore[arg-type]


def parse_tape(spec: TmSpec, text: str) -> tuple[tuple[str, ...], str, tuple[str, ...]]:
    """Split ``"a b [c] d"`` into (left zone, head, right zone).

    Without brackets the head is the first token.
    """
    toks = text.split()
    if not toks:
        raise TmError("empty tape")
    marked = [i for i, t in enumerate(toks) if t.startswith("[") and t.endswith("]")]
    if len(marked) > 1:
        raise TmError("more than one head marker")
    pos = marked[0] if marked else 0
    if marked:
        toks[pos] = toks[pos][1:-1]
    for t in toks:
        if t not in spec.symbols:
            raise TmError(f"unknown symbol {t!r}")
    return tuple(toks[:pos]), toks[pos], tuple(toks[pos + 1 :])
