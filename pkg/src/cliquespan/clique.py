"""Round-based congested-clique simulator with bandwidth accounting.

A *word* is the unit of bandwidth: one word fits a couple of vertex IDs and a
small tag. In a plain round each ordered pair may carry ``message_budget``
words. Lenzen routing is a charged primitive: any message set in which every
node sends and receives at most ``n * message_budget`` words is delivered at a
cost of ``routing_cost`` rounds.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Any, Iterable, NamedTuple, Protocol, Sequence

from .errors import BudgetViolation, InputError, RoutingAdmissibilityError, SimulationTimeout


class Message(NamedTuple):
    src: int
    dst: int
    payload: tuple

    @property
    def word_count(self) -> int:
        return len(self.payload)


@dataclass
class RoundLedger:
    rounds: int = 0
    routing_rounds: int = 0
    per_round_max_sent: list[int] = field(default_factory=list)
    per_round_max_received: list[int] = field(default_factory=list)
    violations: list[tuple[int, int, str]] = field(default_factory=list)
    kinds: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.rounds + self.routing_rounds

    @property
    def max_sent(self) -> int:
        return max(self.per_round_max_sent, default=0)

    @property
    def max_received(self) -> int:
        return max(self.per_round_max_received, default=0)

    @property
    def max_routing_load(self) -> int:
        """Largest per-vertex word count sent or received in any routing round."""
        loads = [
            max(s, r)
            for k, s, r in zip(self.kinds, self.per_round_max_sent, self.per_round_max_received)
            if k == "routing"
        ]
        return max(loads, default=0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "rounds": self.rounds,
            "routing_rounds": self.routing_rounds,
            "max_sent": self.max_sent,
            "max_received": self.max_received,
            "max_routing_load": self.max_routing_load,
            "violations": [list(v) for v in self.violations],
        }


def _sorted_inboxes(n: int, messages: Sequence[Message]) -> list[list[Message]]:
    # Stable sort on src keeps emission order within a sender.
    inboxes: list[list[Message]] = [[] for _ in range(n)]
    for msg in sorted(messages, key=lambda m: m.src):
        inboxes[msg.dst].append(msg)
    return inboxes


class Clique:
    """Simulated congested clique on ``n`` nodes sharing one :class:`RoundLedger`."""

    def __init__(
        self,
        n: int,
        message_budget: int = 1,
        routing_cost: int = 1,
        abort_on_violation: bool = True,
        record_transcript: bool = False,
    ):
        if n < 1:
            raise InputError("clique needs at least one node")
        if message_budget < 1 or routing_cost < 1:
            raise InputError("message_budget and routing_cost must be >= 1")
        self.n = n
        self.message_budget = message_budget
        self.routing_cost = routing_cost
        self.abort_on_violation = abort_on_violation
        self.ledger = RoundLedger()
        self.transcript: list[dict[str, Any]] | None = [] if record_transcript else None

    @property
    def word_limit(self) -> int:
        return self.n * self.message_budget

    # ------------------------------------------------------------------ internals

    def _violation(self, vertex: int, kind: str) -> None:
        index = len(self.ledger.kinds)
        self.ledger.violations.append((index, vertex, kind))
        if self.abort_on_violation:
            raise BudgetViolation(index, vertex, kind)

    def _record(self, kind: str, sent: dict[int, int], received: dict[int, int], note: str = "") -> None:
        ms = max(sent.values(), default=0)
        mr = max(received.values(), default=0)
        copies = 1 if kind == "plain" else self.routing_cost
        for _ in range(copies):
            self.ledger.kinds.append(kind)
            self.ledger.per_round_max_sent.append(ms)
            self.ledger.per_round_max_received.append(mr)
        if kind == "plain":
            self.ledger.rounds += 1
        else:
            self.ledger.routing_rounds += self.routing_cost
        if note:
            self.ledger.notes.append(note)
        if self.transcript is not None:
            self.transcript.append(
                {
                    "round": len(self.ledger.kinds) - 1,
                    "kind": kind,
                    "note": note,
                    "sent": sorted(sent.items()),
                    "received": sorted(received.items()),
                }
            )

    def _check_ids(self, messages: Sequence[Message]) -> None:
        for m in messages:
            if not (0 <= m.src < self.n and 0 <= m.dst < self.n):
                raise InputError(f"message {m.src}->{m.dst} addresses a node outside [0, {self.n})")
            if m.word_count < 1:
                raise InputError(f"message {m.src}->{m.dst} carries no words")

    # ------------------------------------------------------------------ primitives

    def exchange(self, messages: Iterable[Message], note: str = "") -> list[list[Message]]:
        """One plain round; each ordered pair carries at most ``message_budget`` words."""
        msgs = list(messages)
        self._check_ids(msgs)
        pair: Counter[tuple[int, int]] = Counter()
        sent: Counter[int] = Counter()
        received: Counter[int] = Counter()
        for m in msgs:
            w = m.word_count
            pair[(m.src, m.dst)] += w
            sent[m.src] += w
            received[m.dst] += w
        for (u, _v), w in sorted(pair.items()):
            if w > self.message_budget:
                self._violation(u, "pair")
        self._record("plain", sent, received, note)
        return _sorted_inboxes(self.n, msgs)

    def broadcast(self, senders: Iterable[int], note: str = "") -> None:
        """Account one plain round in which each sender sends one word to every node.

        Broadcast contents are then common knowledge, so callers read them
        directly instead of materializing ``n^2`` messages.
        """
        snd = set(senders)
        fanout = self.n - 1
        sent = {u: fanout for u in snd} if fanout else {}
        received: dict[int, int] = {}
        if snd and fanout:
            received = {v: len(snd) - (v in snd) for v in range(self.n)}
        self._record("plain", sent, received, note)

    def route(self, messages: Iterable[Message], note: str = "") -> list[list[Message]]:
        """One Lenzen-routing invocation; rejects inadmissible loads."""
        msgs = list(messages)
        self._check_ids(msgs)
        sent: Counter[int] = Counter()
        received: Counter[int] = Counter()
        for m in msgs:
            sent[m.src] += m.word_count
            received[m.dst] += m.word_count
        limit = self.word_limit
        for kind, load in (("source", sent), ("target", received)):
            for v in sorted(load):
                if load[v] > limit:
                    if self.abort_on_violation:
                        raise RoutingAdmissibilityError(v, kind, load[v], limit)
                    self._violation(v, f"routing-{kind}")
        self._record("routing", sent, received, note)
        return _sorted_inboxes(self.n, msgs)

    def route_batched(self, messages: Iterable[Message], note: str = "") -> list[list[Message]]:
        """Split an over-full message set into admissible routing invocations.

        Needed only when ``n`` is tiny relative to the constant factors hidden
        in per-node loads; each batch is charged as a separate invocation.
        """
        msgs = list(messages)
        limit = self.word_limit
        batches: list[list[Message]] = []
        loads: list[tuple[Counter[int], Counter[int]]] = []
        for m in msgs:
            if m.word_count > limit:
                raise RoutingAdmissibilityError(m.src, "source", m.word_count, limit)
            for b, (s, r) in enumerate(loads):
                if s[m.src] + m.word_count <= limit and r[m.dst] + m.word_count <= limit:
                    break
            else:
                batches.append([])
                loads.append((Counter(), Counter()))
                b = len(batches) - 1
            batches[b].append(m)
            loads[b][0][m.src] += m.word_count
            loads[b][1][m.dst] += m.word_count
        if not batches:
            self._record("routing", {}, {}, note)
            return [[] for _ in range(self.n)]
        delivered: list[Message] = []
        for batch in batches:
            self.route(batch, note)
            delivered.extend(batch)
        return _sorted_inboxes(self.n, delivered)

    def charge(
        self,
        plain: int = 0,
        routing: int = 0,
        max_sent: int = 0,
        max_received: int = 0,
        note: str = "",
    ) -> None:
        """Account rounds of a primitive whose traffic is modelled, not materialized."""
        limit_plain = (self.n - 1) * self.message_budget
        for _ in range(plain):
            if max_sent > max(limit_plain, 1) or max_received > max(limit_plain, 1):
                self._violation(-1, "charged-plain")
            self._record("plain", {-1: max_sent}, {-1: max_received}, note)
        for _ in range(routing):
            if max_sent > self.word_limit or max_received > self.word_limit:
                self._violation(-1, "charged-routing")
            self._record("routing", {-1: max_sent}, {-1: max_received}, note)

    def relabeled(self, labels: Sequence[int]) -> "RelabeledClique":
        return RelabeledClique(self, labels)

    def dump_transcript(self, fp: IO[str]) -> None:
        for row in self.transcript or []:
            fp.write(json.dumps(row, sort_keys=True) + "\n")


class RelabeledClique:
    """Addresses a subset of the parent's nodes by local indices ``0..len(labels)-1``.

    Used for virtual graphs whose nodes are simulated by designated real
    vertices; budgets stay those of the parent clique.
    """

    def __init__(self, parent: Clique, labels: Sequence[int]):
        if len(set(labels)) != len(labels):
            raise InputError("relabeling must be injective")
        self.parent = parent
        self.labels = list(labels)
        self.n = len(self.labels)
        self._inverse = {g: i for i, g in enumerate(self.labels)}

    @property
    def ledger(self) -> RoundLedger:
        return self.parent.ledger

    @property
    def word_limit(self) -> int:
        return self.parent.word_limit

    def _lift(self, messages: Iterable[Message]) -> list[Message]:
        lab = self.labels
        return [Message(lab[m.src], lab[m.dst], m.payload) for m in messages]

    def _lower(self, inboxes: list[list[Message]]) -> list[list[Message]]:
        inv = self._inverse
        out: list[list[Message]] = [[] for _ in range(self.n)]
        for g, box in enumerate(inboxes):
            if g in inv:
                out[inv[g]] = [Message(inv[m.src], inv[m.dst], m.payload) for m in box]
        return out

    def exchange(self, messages, note: str = ""):
        return self._lower(self.parent.exchange(self._lift(messages), note))

    def route(self, messages, note: str = ""):
        return self._lower(self.parent.route(self._lift(messages), note))

    def route_batched(self, messages, note: str = ""):
        return self._lower(self.parent.route_batched(self._lift(messages), note))

    def broadcast(self, senders, note: str = ""):
        self.parent.broadcast((self.labels[s] for s in senders), note)

    def charge(self, *args, **kwargs):
        self.parent.charge(*args, **kwargs)


# ---------------------------------------------------------------------- node programs


class NodeProgram(Protocol):
    def init(self, vertex: int, n: int, local_input: Any) -> Any: ...

    def step(self, state: Any, round_index: int, inbox: list[Message]) -> tuple[Any, list[Message], bool]: ...


def run_rounds(
    programs: Sequence[NodeProgram],
    local_inputs: Sequence[Any] | None = None,
    max_rounds: int = 1000,
    clique: Clique | None = None,
) -> tuple[list[Any], RoundLedger]:
    """Run synchronous plain rounds until every node halts.

    A round is counted whenever at least one node is still running at its
    start. Messages addressed to halted nodes are delivered but never read.
    """
    n = len(programs)
    if max_rounds < 1:
        raise InputError("max_rounds must be >= 1")
    clique = clique or Clique(n)
    if clique.n != n:
        raise InputError(f"got {n} programs for a clique of {clique.n} nodes")
    inputs = list(local_inputs) if local_inputs is not None else [None] * n
    states = [p.init(v, n, inputs[v]) for v, p in enumerate(programs)]
    halted = [False] * n
    inboxes: list[list[Message]] = [[] for _ in range(n)]
    r = 0
    while not all(halted):
        if r >= max_rounds:
            raise SimulationTimeout(f"{sum(not h for h in halted)} node(s) still running after {max_rounds} rounds")
        outgoing: list[Message] = []
        for v in range(n):
            if halted[v]:
                continue
            states[v], out, stop = programs[v].step(states[v], r, inboxes[v])
            for m in out:
                if m.src != v:
                    raise InputError(f"node {v} emitted a message claiming source {m.src}")
            outgoing.extend(out)
            halted[v] = bool(stop)
        inboxes = clique.exchange(outgoing, note=f"program round {r}")
        r += 1
    return states, clique.ledger
