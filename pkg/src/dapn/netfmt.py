"""Line-oriented text format for nets (``.dapn``).

::

    net <ident>
    place <ident> init <decimal>          # declaration order = place index
    trans <ident>                          # declaration order = priority
    arc <place> -> <trans> mult <decimal>  # regular input
    arc <trans> -> <place> mult <decimal>  # output
    inhibit <place> -o <trans>

``#`` starts a comment; blank lines are ignored.  Names must be declared
before they are used and are unique across places and transitions.
"""

from __future__ import annotations

import re

from .model import INHIBITOR, Arc, Net

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*\Z")
_DECIMAL = re.compile(r"[0-9]+\Z")


class NetFormatError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        self.line, self.column, self.message = line, column, message
        super().__init__(f"{line}:{column}: {message}")


def _tokens(line: str) -> list[tuple[int, str]]:
    """Split a line into (1-based column, token) pairs, dropping comments."""
    line = line.split("#", 1)[0]
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]


class _Parser:
    def __init__(self) -> None:
        self.name: str | None = None
        self.places: dict[str, int] = {}
        self.transitions: dict[str, int] = {}
        self.trans_lines: dict[int, int] = {}
        self.marking: list[int] = []
        self.arcs: dict[tuple[int, int, bool], Arc] = {}
        self.lineno = 0

    def fail(self, column: int, message: str) -> NetFormatError:
        return NetFormatError(self.lineno, column, message)

    def expect(self, toks, shape: str) -> None:
        words = shape.split()
        for (col, tok), w in zip(toks, words):
            if w[0] != "<" and tok != w:
                raise self.fail(col, f"expected '{shape}'")
        if len(toks) != len(words):
            col = toks[len(words)][0] if len(toks) > len(words) else toks[-1][0]
            raise self.fail(col, f"expected '{shape}'")

    def ident(self, col: int, tok: str) -> str:
        if not _IDENT.match(tok):
            raise self.fail(col, f"bad identifier {tok!r}")
        return tok

    def decimal(self, col: int, tok: str) -> int:
        if not _DECIMAL.match(tok):
            raise self.fail(col, f"bad decimal {tok!r}")
        return int(tok)

    def declare(self, col: int, name: str, table: dict[str, int]) -> int:
        self.ident(col, name)
        if name in self.places or name in self.transitions:
            raise self.fail(col, f"duplicate name {name!r}")
        table[name] = len(table) + 1
        return table[name]

    def add_arc(self, col: int, arc: Arc) -> None:
        key = (arc.transition, arc.place, arc.output)
        if key in self.arcs:
            raise self.fail(col, "duplicate arc")
        self.arcs[key] = arc

    def line(self, toks) -> None:
        (col, kw), rest = toks[0], toks[1:]
        if kw == "net":
            self.expect(toks, "net <ident>")
            if self.name is not None:
                raise self.fail(col, "second 'net' line")
            self.name = self.ident(*rest[0])
            return
        if self.name is None:
            raise self.fail(col, "document must start with 'net <ident>'")
        if kw == "place":
            self.expect(toks, "place <ident> init <decimal>")
            self.declare(*rest[0], self.places)
            self.marking.append(self.decimal(*rest[2]))
        elif kw == "trans":
            self.expect(toks, "trans <ident>")
            t = self.declare(*rest[0], self.transitions)
            self.trans_lines[t] = self.lineno
        elif kw == "arc":
            self.expect(toks, "arc <src> -> <dst> mult <decimal>")
            (c1, src), (c2, dst), (c3, mult) = rest[0], rest[2], rest[4]
            weight = self.decimal(c3, mult)
            if weight < 1:
                raise self.fail(c3, "mult < 1")
            if src in self.places and dst in self.transitions:
                self.add_arc(c1, Arc(self.transitions[dst], False, self.places[src], weight))
            elif src in self.transitions and dst in self.places:
                self.add_arc(c1, Arc(self.transitions[src], True, self.places[dst], weight))
            else:
                bad, col = (src, c1) if src not in self.places and src not in self.transitions else (dst, c2)
                if bad in self.places or bad in self.transitions:
                    raise self.fail(c1, "arc must join a place and a transition")
                raise self.fail(col, f"unknown endpoint {bad!r}")
        elif kw == "inhibit":
            self.expect(toks, "inhibit <place> -o <trans>")
            (c1, src), (c2, dst) = rest[0], rest[2]
            if src not in self.places:
                raise self.fail(c1, f"unknown endpoint {src!r}" if src not in self.transitions else "inhibitor must start at a place")
            if dst not in self.transitions:
                raise self.fail(c2, f"unknown endpoint {dst!r}")
            self.add_arc(c1, Arc(self.transitions[dst], False, self.places[src], INHIBITOR))
        else:
            raise self.fail(col, f"unknown keyword {kw!r}")

    def finish(self) -> Net:
        if self.name is None:
            raise NetFormatError(max(self.lineno, 1), 1, "empty document")
        regular = {a.transition for a in self.arcs.values() if not a.output and a.regular}
        for name, t in self.transitions.items():
            if t not in regular:
                self.lineno = self.trans_lines[t]
                raise self.fail(
                    7, f"transition {name!r} has no regular input arc; transitions without one are prohibited"
                )
        return Net(
            self.name,
            tuple(self.places),
            tuple(self.transitions),
            tuple(self.arcs.values()),
            tuple(self.marking),
        ).check()


def parse_net(text: str) -> Net:
    p = _Parser()
    for p.lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if toks:
            p.line(toks)
    return p.finish()


def serialize_net(net: Net) -> str:
    lines = [f"net {net.name}"]
    lines += [f"place {p} init {m}" for p, m in zip(net.places, net.initial_marking)]
    lines += [f"trans {t}" for t in net.transitions]
    for a in net.arcs:  # already in canonical order
        p, t = net.place_name(a.place), net.transition_name(a.transition)
        if a.inhibitor:
            lines.append(f"inhibit {p} -o {t}")
        elif a.output:
            lines.append(f"arc {t} -> {p} mult {a.weight}")
        else:
            lines.append(f"arc {p} -> {t} mult {a.weight}")
    return "\n".join(lines) + "\n"
