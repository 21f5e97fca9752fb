import random

import pytest
from hypothesis import given, settings

from dapn.netfmt import NetFormatError, parse_net, serialize_net

from .nets import nets, random_net

HEADER = "net n\nplace a init 1\nplace b init 0\ntrans t\n"


def test_golden_file_parses_to_polyupn(polyupn, data_dir):
    net, _ = polyupn
    text = (data_dir / "polyupn_15_29.dapn").read_text()
    assert parse_net(text) == net
    assert serialize_net(net) == text


def test_roundtrip_polyupn(polyupn):
    net, _ = polyupn
    assert parse_net(serialize_net(net)) == net
    assert serialize_net(net) == serialize_net(net)


@settings(max_examples=200)
@given(nets)
def test_roundtrip_random_nets(net):
    assert parse_net(serialize_net(net)) == net


def test_canonical_order_ignores_declaration_order_of_arcs():
    a = HEADER + "arc t -> b mult 2\ninhibit b -o t\narc a -> t mult 1\n"
    b = HEADER + "arc a -> t mult 1\narc t -> b mult 2\ninhibit b -o t\n"
    assert serialize_net(parse_net(a)) == serialize_net(parse_net(b))
    assert serialize_net(parse_net(a)).endswith("arc a -> t mult 1\narc t -> b mult 2\ninhibit b -o t\n")


def test_comments_blank_lines_and_big_decimals():
    text = "# header\n\nnet n  # name\nplace a init 123456789012345678901234567890\nplace b init 0\ntrans t\narc a -> t mult 5\n"
    net = parse_net(text)
    assert net.initial_marking[0] == 123456789012345678901234567890


@pytest.mark.parametrize(
    "body, line, column, fragment",
    [
        ("arc a -> t mult 0\n", 5, 17, "mult < 1"),
        ("arc a -> t mult -1\n", 5, 17, "bad decimal"),
        ("arc a -> zz mult 1\n", 5, 10, "unknown endpoint"),
        ("arc a -> b mult 1\n", 5, 5, "place and a transition"),
        ("arc a -> t mult 1\narc a -> t mult 2\n", 6, 5, "duplicate arc"),
        ("arc a -> t mult 1\ninhibit a -o t\n", 6, 9, "duplicate arc"),
        ("place a init 3\n", 5, 7, "duplicate name"),
        ("trans a\n", 5, 7, "duplicate name"),
        ("frob a\n", 5, 1, "unknown keyword"),
        ("arc a => t mult 1\n", 5, 7, "expected"),
        ("inhibit t -o t\n", 5, 9, "inhibitor must start at a place"),
        ("inhibit b -o t\n", 4, 7, "no regular input"),
    ],
)
def test_positioned_errors(body, line, column, fragment):
    with pytest.raises(NetFormatError) as info:
        parse_net(HEADER + body)
    err = info.value
    assert fragment in err.message
    assert (err.line, err.column) == (line, column), str(err)


def test_transition_with_only_inhibitors_cites_the_prohibition():
    with pytest.raises(NetFormatError, match="transitions without one are prohibited"):
        parse_net(HEADER + "inhibit a -o t\n")


def test_missing_net_line():
    with pytest.raises(NetFormatError, match="must start"):
        parse_net("place a init 1\n")
    with pytest.raises(NetFormatError, match="empty"):
        parse_net("# nothing\n")


def test_two_hundred_random_nets_roundtrip():
    rng = random.Random(2024)
    for _ in range(200):
        net = random_net(rng, max_places=8, max_transitions=8, max_tokens=10**30)
        assert parse_net(serialize_net(net)) == net
