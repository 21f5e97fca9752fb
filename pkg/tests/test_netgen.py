import pytest
from hypothesis import given
from hypothesis import strategies as st

from dapn import engine, netgen, tm
from dapn.encoding import Side, pack
from dapn.harness import tape_phase_sequence
from dapn.netfmt import serialize_net
from dapn.netgen import BoundaryError, PolyNetLayout
from dapn.tm import Rule, TmConfig

from .test_tm import TABLE_1

side_codes = st.lists(st.integers(1, 4), min_size=1, max_size=40).map(lambda d: pack(d, Side.LEFT))
boundary_cells = st.tuples(st.integers(1, 4), st.integers(0, 1), side_codes, side_codes)


def boundary(net, x, u, left, right):
    mu = dict(zip(net.places, net.initial_marking))
    mu.update(X=x, U=u, L=left, R=right)
    return net.marking_from(mu)


def arcs_by_place(net, t):
    ins, outs, inhib = {}, {}, set()
    for a in net.arcs_of(t):
        name = net.place_name(a.place)
        if a.inhibitor:
            inhib.add(name)
        elif a.output:
            outs[name] = a.weight
        else:
            ins[name] = a.weight
    return ins, outs, inhib


def test_structure(polyupn):
    net, layout = polyupn
    assert (net.n_places, net.n_transitions) == (15, 29)
    assert abs(net.n_arcs - netgen.REFERENCE_ARC_COUNT) <= 3
    assert net.n_arcs == 125
    assert [layout.place(p) for p in ("STEP", "MOVE", "RIGHT", "MOVE1", "LEFT")] == [5, 6, 7, 8, 15]
    assert [layout.place(f"p{j}") for j in range(9, 15)] == list(range(9, 15))


def test_fs_block_encodes_table_1(polyupn):
    net, layout = polyupn
    assert len(layout.fs) == 8
    for (sx, su), (wx, move, wu) in TABLE_1.items():
        ins, outs, inhib = arcs_by_place(net, layout.fs[sx, su])
        expected_in = {"STEP": 1, "MOVE": 1, "X": sx, **({"U": su} if su else {})}
        flag = "LEFT" if move == "left" else "RIGHT"
        expected_out = {"X": wx, flag: 1, **({"U": wu} if wu else {})}
        assert (ins, outs, inhib) == (expected_in, expected_out, set())


def test_fs_priority_order_and_left_movers(polyupn):
    net, layout = polyupn
    order = sorted(TABLE_1, reverse=True)
    assert [layout.fs[p] for p in order] == list(range(3, 11))
    left = sorted(layout.fs[p] for p, (_, move, _) in TABLE_1.items() if move == "left")
    assert left == [4, 6, 7, 8, 10]


def test_blank_injectors(polyupn):
    net, layout = polyupn
    assert (layout["lb"], layout["rb"]) == (1, 2)
    assert arcs_by_place(net, 1) == ({"STEP": 1}, {"STEP": 1, "L": 167}, {"L"})
    assert arcs_by_place(net, 2) == ({"STEP": 1}, {"STEP": 1, "R": 13596}, {"R"})


def test_tape_block_gating(polyupn):
    net, layout = polyupn
    control = netgen.CONTROL
    for s in range(1, 7):
        for move, opposite in (("left", "RIGHT"), ("right", "LEFT")):
            _, _, inhib = arcs_by_place(net, layout.worker(s, move))
            assert inhib == {control[s - 1], opposite}
            assert layout.worker(s, move) < (layout.mover(s) if s < 6 else layout.finisher(move))
    assert [layout.mover(s) for s in range(1, 6)] == [13, 16, 19, 22, 25]
    for s in range(1, 6):
        ins, outs, inhib = arcs_by_place(net, layout.mover(s))
        assert (ins, outs, inhib) == ({control[s]: 1}, {control[s - 1]: 1}, {control[s - 1]})
    # every zero test is an inhibitor: no regular arc tests a control place for a token
    for t in list(layout.fs.values()) + [layout.mover(s) for s in range(1, 6)]:
        ins, outs, _ = arcs_by_place(net, t)
        for place in control:
            assert not (place in ins and place in outs)


def test_finishers(polyupn):
    net, layout = polyupn
    assert layout.finishers == (28, 29)
    assert arcs_by_place(net, 28) == ({"LEFT": 1}, {"p13": 1, "STEP": 1}, set())
    assert arcs_by_place(net, 29) == ({"RIGHT": 1}, {"p13": 1, "STEP": 1}, set())


def test_initial_control_marking(polyupn):
    net, _ = polyupn
    mu = net.marking_dict(net.initial_marking)
    assert {p: mu[p] for p in ("STEP", "MOVE", "MOVE1", "p10", "p11", "p12", "p13")} == dict.fromkeys(
        ("STEP", "MOVE", "MOVE1", "p10", "p11", "p12", "p13"), 1
    )
    assert mu["LEFT"] == mu["RIGHT"] == mu["p9"] == mu["p14"] == 0


def test_compile_wutm_matches_hand_built_table(polyupn, wutm):
    net, layout = polyupn
    compiled, clayout = netgen.compile_tm(wutm)
    assert serialize_net(compiled) == serialize_net(net)
    assert clayout == layout


def test_compile_rejects_ambiguous_state_codes():
    spec = tm.TmSpec("t", {"a": 0, "b": 0}, {"x": 1}, {}, ("x",), ("x",))
    with pytest.raises(tm.TmError, match="code 0"):
        netgen.compile_tm(spec)


def test_compile_rejects_bad_symbol_codes():
    spec = tm.TmSpec("t", {"a": 0}, {"x": 1, "y": 3}, {}, ("x",), ("x",))
    with pytest.raises(tm.TmError, match="permutation"):
        netgen.compile_tm(spec)


def test_initial_marking_and_extract(polyupn, wutm):
    net, layout = polyupn
    cfg = wutm.start_config()
    mu = netgen.initial_marking(layout, wutm, cfg)
    assert mu == net.initial_marking
    d = net.marking_dict(mu)
    assert (d["L"], d["R"], d["U"], d["X"]) == (167, 13596, 0, 1)
    assert netgen.extract_config(layout, wutm, mu) == cfg
    empty = netgen.initial_marking(layout, wutm, TmConfig("u2", (), "1/", ()))
    assert net.marking_dict(empty)["L"] == net.marking_dict(empty)["R"] == 0


words = st.lists(st.sampled_from(["0", "1", "0/", "1/"]), max_size=20).map(tuple)


@given(st.sampled_from(["u1", "u2"]), words, st.sampled_from(["0", "1", "0/", "1/"]), words)
def test_extract_inverts_initial_marking(state, left, head, right):
    spec = tm.wutm24()
    _, layout = netgen.build_polyupn()
    cfg = TmConfig(state, left, head, right)
    assert netgen.extract_config(layout, spec, netgen.initial_marking(layout, spec, cfg)) == cfg


def test_extract_rejects_non_boundary(polyupn, wutm):
    net, layout = polyupn
    mu = net.marking_dict(net.initial_marking)
    with pytest.raises(BoundaryError, match="MOVE=0"):
        netgen.extract_config(layout, wutm, net.marking_from({**mu, "MOVE": 0}))
    with pytest.raises(BoundaryError, match="zero digit"):
        netgen.extract_config(layout, wutm, net.marking_from({**mu, "L": 25}))


@given(boundary_cells)
def test_single_fs_step_at_boundary(cells):
    net, layout = netgen.build_polyupn()
    x, u, left, right = cells
    marking, event = engine.step(net, boundary(net, x, u, left, right))
    assert event.transition == layout.fs[x, u] and event.instances == 1
    wx, move, wu = TABLE_1[x, u]
    d = net.marking_dict(marking)
    assert (d["X"], d["U"], d["LEFT"], d["RIGHT"]) == (wx, wu, move == "left", move == "right")
    assert d["STEP"] == d["MOVE"] == 0


@given(boundary_cells)
def test_tape_phase_sequence(cells):
    net, layout = netgen.build_polyupn()
    x, u, left, right = cells
    wx, move, wu = TABLE_1[x, u]
    marking, _ = engine.step(net, boundary(net, x, u, left, right))
    expected = tape_phase_sequence(layout, move, wx, left, right)
    trace, final = engine.run(net, marking, budget=len(expected))
    assert [(e.transition, e.instances) for e in trace.events] == expected
    assert len(expected) <= 12
    assert netgen.is_boundary(layout, final)
    d = net.marking_dict(final)
    if move == "left":
        assert (d["R"], d["L"], d["X"]) == (right * 5 + wx, left // 5, left % 5)
    else:
        assert (d["L"], d["R"], d["X"]) == (left * 5 + wx, right // 5, right % 5)


def test_left_move_sequence_of_the_proof(polyupn):
    net, layout = polyupn
    marking, _ = engine.step(net, net.initial_marking)  # (0, u1) moves left
    trace, _ = engine.run(net, marking, budget=12)
    assert [e.transition for e in trace.events] == [11, 13, 14, 16, 17, 19, 21, 22, 24, 25, 27, 28]
    assert [e.instances for e in trace.events][::2] == [13596, 13596 * 5, 3, 33, 2, 33]


def test_exclusivity_and_fs_preconditions(polyupn):
    net, layout = polyupn
    trace, _ = engine.run(net, budget=3000, snapshot_every=1)
    control = [layout.place(c) - 1 for c in netgen.CONTROL]
    left, right = layout.place("LEFT") - 1, layout.place("RIGHT") - 1
    X, U, L, R = (layout.place(p) - 1 for p in "XULR")
    marking = net.initial_marking
    fs = set(layout.fs.values())
    for e in trace.events:
        if e.transition in fs:
            assert 1 <= marking[X] <= 4 and marking[U] in (0, 1) and marking[L] >= 1 and marking[R] >= 1
        marking = trace.snapshots[e.step]
        assert sum(marking[j] == 0 for j in control) <= 1
        assert marking[left] + marking[right] <= 1


def test_partial_machine_compiles_to_a_deadlocking_net():
    spec = tm.TmSpec("h", {"a": 0}, {"x": 1, "y": 2}, {("x", "a"): Rule("y", "right", "a")}, ("x",), ("y",))
    assert tm.tm_run(spec, spec.start_config(), 10).halted
    net, layout = netgen.compile_tm(spec)
    assert set(layout.halts) == {(2, 0)}
    trace, final = engine.run(net, budget=100)
    assert trace.halted
    assert net.marking_dict(final)["STEP"] == 0
    assert trace.events[-1].transition == layout["halt_2_0"]


def test_build_log(polyupn):
    net, layout = polyupn
    log = netgen.build_log(net, layout)
    assert "t4  fs_4_0 (left move)" in log
    assert "total            125 (reference 125, delta +0)" in log
    assert sum(netgen.arc_breakdown(net, layout).values()) == net.n_arcs


def test_layout_lookup(polyupn):
    _, layout = polyupn
    assert isinstance(layout, PolyNetLayout)
    assert layout.role(13) == "mv1"
    with pytest.raises(KeyError):
        layout.role(99)
