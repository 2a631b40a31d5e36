import io
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliquespan.clique import Clique, Message, run_rounds
from cliquespan.errors import BudgetViolation, InputError, RoutingAdmissibilityError, SimulationTimeout


class BroadcastOnce:
    def init(self, v, n, _):
        return {"v": v, "n": n, "got": []}

    def step(self, s, r, inbox):
        out = [Message(s["v"], w, (s["v"],)) for w in range(s["n"]) if w != s["v"]]
        return s, out, True


class Echo:
    """First round sends own ID to the next node; second round forwards what arrived, then halts."""

    def init(self, v, n, _):
        return {"v": v, "n": n, "seen": []}

    def step(self, s, r, inbox):
        s["seen"].extend(m.payload for m in inbox)
        nxt = (s["v"] + 1) % s["n"]
        if r == 0:  # rounds are numbered from 0
            return s, [Message(s["v"], nxt, (s["v"],))], False
        return s, [Message(s["v"], nxt, m.payload) for m in inbox], True


class Chatty:
    def init(self, v, n, _):
        return v

    def step(self, s, r, inbox):
        return s, [Message(s, (s + 1) % 2, (1, 2))], False


def test_broadcast_program():
    _, led = run_rounds([BroadcastOnce() for _ in range(3)])
    assert led.rounds == 1 and led.max_sent == 2


def test_echo_halts_in_two_rounds():
    states, led = run_rounds([Echo() for _ in range(3)])
    assert led.rounds == 2
    assert states[1]["seen"][0] == (0,)


def test_budget_violation_in_plain_round():
    with pytest.raises(BudgetViolation):
        run_rounds([Chatty(), Chatty()])


def test_timeout():
    with pytest.raises(SimulationTimeout):
        run_rounds([Chatty(), Chatty()], max_rounds=3, clique=Clique(2, message_budget=2))


def test_violation_recorded_without_abort():
    cq = Clique(2, abort_on_violation=False)
    cq.exchange([Message(0, 1, (1, 2))])
    assert cq.ledger.violations and cq.ledger.rounds == 1


def test_routing_all_to_all():
    cq = Clique(4)
    inbox = cq.route([Message(u, v, (u,)) for u in range(4) for v in range(4)])
    assert [len(b) for b in inbox] == [4, 4, 4, 4]
    assert cq.ledger.routing_rounds == 1


def test_routing_overload_rejected():
    cq = Clique(4)
    with pytest.raises(RoutingAdmissibilityError):
        cq.route([Message(u % 4, 0, (1,)) for u in range(16)])


@given(st.integers(2, 40))
def test_permutation_routing_saturates_receivers(n):
    cq = Clique(n)
    msgs = [Message(i, (i + 1) % n, (0,)) for i in range(n) for _ in range(n)]
    inbox = cq.route(msgs)
    assert all(len(b) == n for b in inbox)
    assert cq.ledger.max_received == n == cq.ledger.max_routing_load


def test_route_batched_splits_and_charges():
    cq = Clique(3)
    msgs = [Message(0, 1, (i,)) for i in range(7)]
    inbox = cq.route_batched(msgs)
    assert len(inbox[1]) == 7 and cq.ledger.routing_rounds == 3


def test_routing_cost_multiplies():
    cq = Clique(3, routing_cost=4)
    cq.route([Message(0, 1, (1,))])
    assert cq.ledger.routing_rounds == 4 and cq.ledger.total == 4


def test_relabeled_translates_ids():
    cq = Clique(10)
    sub = cq.relabeled([7, 3, 5])
    inbox = sub.route([Message(0, 2, ("x",))])
    assert inbox[2][0].src == 0 and cq.ledger.routing_rounds == 1


def test_bad_ids_rejected():
    with pytest.raises(InputError):
        Clique(3).exchange([Message(0, 3, (1,))])


def test_transcript_dump():
    cq = Clique(3, record_transcript=True)
    cq.exchange([Message(0, 1, (5,))], note="hello")
    buf = io.StringIO()
    cq.dump_transcript(buf)
    row = json.loads(buf.getvalue().splitlines()[0])
    assert row["kind"] == "plain" and row["note"] == "hello"
