"""Radix-5 tape-word codes for WUTM(2,4).

A word on one side of the head is packed into a single integer whose least
significant digit is the cell adjacent to the head.  Symbol codes are 1..4,
so a valid code never contains the digit 0 and the empty word packs to 0.
The generic ``pack``/``unpack`` take any radix; the compiler uses them with
radix = number of symbols + 1.
"""

from __future__ import annotations

import enum
from typing import Iterable, Sequence

RADIX = 5


class MalformedCode(ValueError):
    pass


class TapeSymbol(str, enum.Enum):
    S0 = "0"
    S1 = "1"
    S0_SLASH = "0/"
    S1_SLASH = "1/"

    def __str__(self) -> str:
        return self.value


class StateName(str, enum.Enum):
    U1 = "u1"
    U2 = "u2"

    def __str__(self) -> str:
        return self.value


class Side(enum.Enum):
    LEFT = "left"  # the zone to the left of the head; its rightmost cell is nearest
    RIGHT = "right"  # the zone to the right of the head; its leftmost cell is nearest


_SYMBOL_CODES = {TapeSymbol.S0: 1, TapeSymbol.S1: 2, TapeSymbol.S0_SLASH: 3, TapeSymbol.S1_SLASH: 4}
_STATE_CODES = {StateName.U1: 0, StateName.U2: 1}
_SYMBOLS_BY_CODE = {c: s for s, c in _SYMBOL_CODES.items()}
_STATES_BY_CODE = {c: s for s, c in _STATE_CODES.items()}

BLANK_LEFT = (TapeSymbol.S0, TapeSymbol.S0, TapeSymbol.S0_SLASH, TapeSymbol.S1)
BLANK_RIGHT = (
    TapeSymbol.S0,
    TapeSymbol.S1_SLASH,
    TapeSymbol.S0_SLASH,
    TapeSymbol.S0_SLASH,
    TapeSymbol.S0,
    TapeSymbol.S1_SLASH,
)


def symbol_code(s: TapeSymbol | str) -> int:
    return _SYMBOL_CODES[TapeSymbol(s)]


def state_code(u: StateName | str) -> int:
    return _STATE_CODES[StateName(u)]


def symbol_from_code(code: int) -> TapeSymbol:
    try:
        return _SYMBOLS_BY_CODE[code]
    except KeyError:
        raise MalformedCode(f"no tape symbol has code {code}") from None


def state_from_code(code: int) -> StateName:
    try:
        return _STATES_BY_CODE[code]
    except KeyError:
        raise MalformedCode(f"no state has code {code}") from None


def pack(digits: Sequence[int], side: Side, radix: int = RADIX) -> int:
    """Pack digit codes written left-to-right into one integer.

    The head-adjacent digit is least significant: the last one for
    ``Side.LEFT`` and the first one for ``Side.RIGHT``.
    """
    if side is Side.RIGHT:
        digits = digits[::-1]
    code = 0
    for d in digits:
        if not 0 < d < radix:
            raise MalformedCode(f"digit {d} outside 1..{radix - 1}")
        code = code * radix + d
    return code


def unpack(code: int, side: Side, radix: int = RADIX) -> list[int]:
    if code < 0:
        raise MalformedCode(f"negative code {code}")
    digits = []
    while code:
        code, d = divmod(code, radix)
        if not d:
            raise MalformedCode("zero digit in tape code")
        digits.append(d)
    # digits are now head-adjacent first
    if side is Side.LEFT:
        digits.reverse()
    return digits


def parse_word(text: str) -> list[TapeSymbol]:
    return [TapeSymbol(tok) for tok in text.split()]


def format_word(word: Iterable[TapeSymbol | str]) -> str:
    return " ".join(str(s) for s in word)


def encode_word(word: Sequence[TapeSymbol | str], side: Side) -> int:
    try:
        # str-valued members hash like their text, so "0/" and S0_SLASH both hit
        return pack([_SYMBOL_CODES[s] for s in word], side)  # type: ignore[index]
    except KeyError as e:
        raise ValueError(f"unknown tape symbol {e.args[0]!r}") from None


def decode_word(code: int, side: Side) -> list[TapeSymbol]:
    return [_SYMBOLS_BY_CODE[d] for d in unpack(code, side)]


def blank_codes() -> tuple[int, int]:
    return encode_word(BLANK_LEFT, Side.LEFT), encode_word(BLANK_RIGHT, Side.RIGHT)
