"""Two-party execution runtime.

`party_stepper` turns a scheduled program into a stream of step batches
for one party: every node's script is advanced at its planned steps and
the frames of all scripts active in a step are merged into one batch.
Three drivers consume the stream: a lockstep driver that runs both
parties in one call (tests, bulk checks), a channel driver for real
inproc/tcp sessions, and a threaded wrapper that runs both channel ends
in one process.

All online randomness is pre-staged (input shares and dealer triples),
so a fixed staging yields bit-identical transcripts on every run.
"""

from __future__ import annotations

import json
import threading
import time
from collections import namedtuple
from dataclasses import dataclass, field

from .dealer import TripleStore
from .errors import MpcError, PlanError, ProtocolDesync
from .numeric import TolerancePolicy
from .program import Plan
from .protocols import KIND_PUBLIC, OP_SPECS, Value
from .sharing import KIND_ADDITIVE, KIND_MULTIPLICATIVE
from .transport import (
    Channel,
    Frame,
    SCALAR_TAGS,
    SessionTranscript,
    Tag,
    encode_payload,
)

StepBatch = namedtuple("StepBatch", "step sends expects")
# sends: [(node, tag, value)], expects: [(node, tag)]


@dataclass
class PartyContext:
    party: int
    store: TripleStore
    tol: TolerancePolicy = field(default_factory=TolerancePolicy)
    session_id: int = 1


def inputs_from_records(records, party: int) -> dict[str, Value]:
    env = {}
    for rec in records:
        if rec.party == party:
            env[rec.ref] = Value(rec.kind, rec.value)
    return env


@dataclass
class _Task:
    pn: object
    gen: object
    started: bool = False
    inbox: tuple = ()
    done: bool = False


def _run_to_completion(gen):
    try:
        next(gen)
    except StopIteration as fin:
        return fin.value
    raise ProtocolDesync("local-only node attempted to communicate")


def _deferred(spec, party, node, env, tol, std, resh):
    """Delay script construction to first advance, so a node reads its
    inputs only after its dependencies have completed."""
    result = yield from spec.build(party, node, env, tol, std, resh)
    return result


def party_stepper(plan: Plan, party: int, inputs: dict, ctx: PartyContext):
    """Generator of StepBatch objects for one party.

    Yields one batch per communication step; the driver sends the batch,
    then feeds back the received payloads in expectation order.  Returns
    the final value environment.
    """
    env: dict[str, Value] = dict(inputs)
    for ref, kind in plan.input_kinds.items():
        if ref not in env:
            raise PlanError(f"missing program input {ref!r} for party {party}")
        if env[ref].kind != kind:
            raise PlanError(
                f"input {ref!r} staged as {env[ref].kind}, program needs {kind}")

    tasks = []
    for pn in plan.nodes:
        spec = OP_SPECS[pn.node.op]
        std = [ctx.store.next_standard() for _ in pn.std_ids]
        resh = [ctx.store.next_resharing() for _ in pn.resh_ids]
        for slot, want in zip(std, pn.std_ids):
            if slot.triple_id != want:
                raise ProtocolDesync(
                    f"standard triple id {slot.triple_id} != planned {want}; "
                    "stores out of sync with the plan")
        for slot, want in zip(resh, pn.resh_ids):
            if slot.triple_id != want:
                raise ProtocolDesync(
                    f"resharing triple id {slot.triple_id} != planned {want}; "
                    "stores out of sync with the plan")
        tasks.append(_Task(pn, _deferred(spec, party, pn.node, env,
                                         ctx.tol, std, resh)))

    def settle(task, result):
        kind = OP_SPECS[task.pn.node.op].output_kind
        env[task.pn.node.out] = Value(kind, result)
        task.done = True

    def run_ready_locals(completed_step):
        for task in tasks:
            if not task.done and task.pn.phases == 0 and task.pn.end <= completed_step:
                settle(task, _run_to_completion(task.gen))

    run_ready_locals(0)
    for step in range(1, plan.steps + 1):
        sends, expects, routing = [], [], []
        for task in tasks:
            if task.done or task.pn.phases == 0:
                continue
            if not (task.pn.start <= step <= task.pn.end):
                continue
            try:
                if task.started:
                    phase = task.gen.send(task.inbox)
                else:
                    phase = next(task.gen)
                    task.started = True
            except StopIteration as fin:
                settle(task, fin.value)
                continue
            out = task.pn.node.out
            sends.extend((out, tag, value) for tag, value in phase.sends)
            expects.extend((out, tag) for tag in phase.expects)
            routing.append((task, len(phase.expects)))
        incoming = yield StepBatch(step, tuple(sends), tuple(expects))
        pos = 0
        for task, width in routing:
            task.inbox = tuple(incoming[pos:pos + width])
            pos += width
            if step == task.pn.end:
                try:
                    task.gen.send(task.inbox)
                except StopIteration as fin:
                    settle(task, fin.value)
                else:
                    raise ProtocolDesync(
                        f"node {task.pn.node.out} yielded past its planned phases")
        run_ready_locals(step)
    for task in tasks:
        if not task.done:
            raise ProtocolDesync(f"node {task.pn.node.out} never completed")
    return env


def _combine(kind: str, mine: float, theirs: float) -> float:
    if kind == KIND_ADDITIVE:
        return mine + theirs
    if kind == KIND_MULTIPLICATIVE:
        return mine * theirs
    raise ProtocolDesync(f"cannot combine kind {kind}")


# --- lockstep driver ---------------------------------------------------------

@dataclass
class LocalRun:
    env_p1: dict
    env_p2: dict
    transcript: SessionTranscript
    revealed: dict

    def reveal(self, ref: str) -> float:
        v1, v2 = self.env_p1[ref], self.env_p2[ref]
        if v1.kind == KIND_PUBLIC:
            return v1.value
        return _combine(v1.kind, v1.value, v2.value)


def _advance(stepper, payloads):
    try:
        if payloads is None:
            return next(stepper), None
        return stepper.send(payloads), None
    except StopIteration as fin:
        return None, fin.value


def _route(expects, sends):
    if len(expects) != len(sends):
        raise ProtocolDesync(
            f"expected {len(expects)} frames, peer sent {len(sends)}")
    payloads = []
    for (want_node, want_tag), (node, tag, value) in zip(expects, sends):
        if want_tag is not tag or want_node != node:
            raise ProtocolDesync(
                f"expected {want_tag.name} for {want_node}, "
                f"got {tag.name} for {node}")
        payloads.append(value)
    return payloads


def run_local(plan: Plan, inputs_p1: dict, inputs_p2: dict,
              store_p1: TripleStore, store_p2: TripleStore,
              tol: TolerancePolicy | None = None, session_id: int = 1,
              reveal: tuple = ()) -> LocalRun:
    """Drive both parties in lockstep inside one call.

    Functionally identical to a channel session: each step's outgoing
    frames are computed on both sides before either side consumes them.
    """
    tol = tol or TolerancePolicy()
    ctx1 = PartyContext(1, store_p1, tol, session_id)
    ctx2 = PartyContext(2, store_p2, tol, session_id)
    s1 = party_stepper(plan, 1, inputs_p1, ctx1)
    s2 = party_stepper(plan, 2, inputs_p2, ctx2)
    transcript = SessionTranscript(session_id)
    b1, env1 = _advance(s1, None)
    b2, env2 = _advance(s2, None)
    while b1 is not None or b2 is not None:
        if b1 is None or b2 is None:
            raise ProtocolDesync("parties disagree on session length")
        if b1.step != b2.step:
            raise ProtocolDesync(f"step skew: {b1.step} vs {b2.step}")
        for node, tag, value in b1.sends:
            transcript.log(b1.step, 1, node, tag, value)
        for node, tag, value in b2.sends:
            transcript.log(b2.step, 2, node, tag, value)
        in1 = _route(b1.expects, b2.sends)
        in2 = _route(b2.expects, b1.sends)
        b1, env1 = _advance(s1, in1)
        b2, env2 = _advance(s2, in2)
    run = LocalRun(env1, env2, transcript, {})
    for ref in reveal:
        run.revealed[ref] = run.reveal(ref)
    return run


# --- channel driver ----------------------------------------------------------

@dataclass
class RunOutcome:
    party: int
    env: dict
    revealed: dict
    transcript: SessionTranscript
    duration: float


def _hello_payload(plan: Plan, ctx: PartyContext, reveal) -> bytes:
    body = {
        "party": ctx.party,
        "digest": plan.digest().hex(),
        "reveal": list(reveal),
        "cursors": list(ctx.store.cursors),
    }
    return b"hello:" + json.dumps(body, sort_keys=True).encode("ascii")


def _check_hello(mine: dict, frame: Frame, ctx: PartyContext) -> None:
    if frame.tag is not Tag.CONTROL or not frame.payload.startswith(b"hello:"):
        raise ProtocolDesync("expected session hello")
    theirs = json.loads(frame.payload[len(b"hello:"):].decode("ascii"))
    if theirs["party"] != 3 - ctx.party:
        raise ProtocolDesync(f"peer claims party {theirs['party']}")
    if theirs["digest"] != mine["digest"]:
        raise ProtocolDesync("parties plan different programs")
    if theirs["reveal"] != mine["reveal"]:
        raise ProtocolDesync("parties disagree on reveal set")
    if theirs["cursors"] != mine["cursors"]:
        raise ProtocolDesync(
            f"triple cursors diverge: {mine['cursors']} vs {theirs['cursors']}")


def _try_send_abort(channel: Channel, session_id: int, err: MpcError) -> None:
    try:
        payload = f"abort:{type(err).__name__}:{err}".encode("utf-8", "replace")
        channel.send(Frame(session_id, 0, Tag.CONTROL, payload))
    except MpcError:
        pass


def _raise_peer_abort(frame: Frame) -> None:
    from .errors import error_by_name

    text = frame.payload[len(b"abort:"):].decode("utf-8", "replace")
    name, _, message = text.partition(":")
    raise error_by_name(name)(f"peer aborted: {message}")


def execute(plan: Plan, ctx: PartyContext, inputs: dict, channel: Channel,
            reveal: tuple = (), transcript: SessionTranscript | None = None,
            ) -> RunOutcome:
    """Run one party of a session over a channel."""
    started = time.perf_counter()
    transcript = transcript or SessionTranscript(ctx.session_id)
    reveal = tuple(sorted(reveal))
    me, peer = ctx.party, 3 - ctx.party
    sid = ctx.session_id

    hello = _hello_payload(plan, ctx, reveal)
    channel.send(Frame(sid, 0, Tag.CONTROL, hello))
    first = channel.recv()
    if first.tag is Tag.CONTROL and first.payload.startswith(b"abort:"):
        _raise_peer_abort(first)
    _check_hello(json.loads(hello[len(b"hello:"):]), first, ctx)

    stepper = party_stepper(plan, me, inputs, ctx)
    try:
        batch, env = _advance(stepper, None)
        while batch is not None:
            for node, tag, value in batch.sends:
                payload = encode_payload(tag, value)
                channel.send(Frame(sid, batch.step, tag, payload))
                transcript.log(batch.step, me, node, tag, payload)
            incoming = []
            for node, tag in batch.expects:
                frame = channel.recv()
                if frame.tag is Tag.CONTROL and frame.payload.startswith(b"abort:"):
                    _raise_peer_abort(frame)
                if frame.session_id != sid:
                    raise ProtocolDesync(
                        f"session {frame.session_id} != {sid}")
                if frame.step != batch.step or frame.tag is not tag:
                    raise ProtocolDesync(
                        f"expected {tag.name}@{batch.step} for {node}, got "
                        f"{frame.tag.name}@{frame.step}")
                transcript.log(batch.step, peer, node, tag, frame.payload)
                incoming.append(frame.scalar() if tag in SCALAR_TAGS
                                else frame.sign())
            batch, env = _advance(stepper, incoming)
    except MpcError as err:
        _try_send_abort(channel, sid, err)
        raise

    revealed = {}
    if reveal:
        step = plan.steps + 1
        waiting = []
        for ref in reveal:
            if ref not in env:
                raise PlanError(f"cannot reveal unknown ref {ref!r}")
            value = env[ref]
            if value.kind == KIND_PUBLIC:
                revealed[ref] = value.value
                continue
            payload = encode_payload(Tag.SHARE, value.value)
            channel.send(Frame(sid, step, Tag.SHARE, payload))
            transcript.log(step, me, ref, Tag.SHARE, payload)
            waiting.append(ref)
        for ref in waiting:
            frame = channel.recv()
            if frame.tag is Tag.CONTROL and frame.payload.startswith(b"abort:"):
                _raise_peer_abort(frame)
            if frame.tag is not Tag.SHARE or frame.step != step:
                raise ProtocolDesync("expected reveal share")
            transcript.log(step, peer, ref, Tag.SHARE, frame.payload)
            value = env[ref]
            revealed[ref] = _combine(value.kind, value.value, frame.scalar())

    return RunOutcome(me, env, revealed, transcript,
                      time.perf_counter() - started)


def run_over_channels(plan: Plan, inputs_p1: dict, inputs_p2: dict,
                      store_p1: TripleStore, store_p2: TripleStore,
                      channel_p1: Channel, channel_p2: Channel,
                      tol: TolerancePolicy | None = None, session_id: int = 1,
                      reveal: tuple = ()) -> tuple[RunOutcome, RunOutcome]:
    """Run both parties over a channel pair, one thread per party."""
    tol = tol or TolerancePolicy()
    outcomes: dict[int, RunOutcome] = {}
    failures: dict[int, BaseException] = {}

    def work(party, channel, inputs, store):
        ctx = PartyContext(party, store, tol, session_id)
        try:
            outcomes[party] = execute(plan, ctx, inputs, channel, reveal=reveal)
        except BaseException as exc:  # noqa: BLE001 - ferried to the caller
            failures[party] = exc
        finally:
            channel.close()

    threads = [
        threading.Thread(target=work, args=(1, channel_p1, inputs_p1, store_p1)),
        threading.Thread(target=work, args=(2, channel_p2, inputs_p2, store_p2)),
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    if failures:
        raise failures[min(failures)]
    return outcomes[1], outcomes[2]
