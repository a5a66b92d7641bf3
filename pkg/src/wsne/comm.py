"""Two-party communication protocols with exact bit accounting.

Each player is an :class:`Endpoint` holding only its own payoff matrix.  A
protocol is a pair of generator coroutines, one per endpoint, that talk only
through bit strings; :func:`run_parties` alternates between them at message
boundaries and records every message in a :class:`Transcript`.

Orientation convention: every endpoint sees its own matrix with its own pure
strategies as rows (``R`` for the row player, ``C^T`` for the column player),
so the same party code serves both seats.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from types import SimpleNamespace
from typing import Any, Generator, NamedTuple

import numpy as np

from .algorithms import (
    ONE_THIRD,
    TWO_THIRDS,
    NotFoundError,
    NotWinLoseError,
    find_matching_pennies_rows,
    mp_profile,
    optimal_z,
    split_step_four,
)
from .apxne import THETA, mix_with_response
from .game import TOL, BimatrixGame, MixedStrategy, Profile, Step
from .zerosum import solve_zero_sum

DEFAULT_C = 2.0
DEFAULT_VALUE_BITS = 32
DEFAULT_BUDGET_K = 16
MAX_RESAMPLES = 64
TAG_BITS = 4


class Side(str, enum.Enum):
    ROW = "row"
    COL = "col"

    @property
    def other(self) -> "Side":
        return Side.COL if self is Side.ROW else Side.ROW


class ProtocolError(RuntimeError):
    pass


class ResampleLimitExceeded(RuntimeError):
    pass


# --- bit codecs ---------------------------------------------------------------


def index_width(n: int) -> int:
    """Bits for an index in range(n): ceil(log2 n), zero when n == 1."""
    return (n - 1).bit_length()


def gamma_length(v: int) -> int:
    """Length of the Elias-gamma code of v >= 1."""
    return 2 * (v.bit_length() - 1) + 1


class BitWriter:
    def __init__(self):
        self._parts: list[str] = []

    def uint(self, v: int, width: int) -> "BitWriter":
        if width == 0:
            if v != 0:
                raise ValueError("nonzero value in zero-width field")
            return self
        if not 0 <= v < (1 << width):
            raise ValueError(f"{v} does not fit in {width} bits")
        self._parts.append(format(v, f"0{width}b"))
        return self

    def fixed(self, value: float, bits: int) -> "BitWriter":
        return self.uint(quantize_level(value, bits), bits)

    def gamma(self, v: int) -> "BitWriter":
        if v < 1:
            raise ValueError("gamma code needs v >= 1")
        b = format(v, "b")
        self._parts.append("0" * (len(b) - 1) + b)
        return self

    def getvalue(self) -> str:
        return "".join(self._parts)


class BitReader:
    def __init__(self, bits: str):
        self.bits = bits
        self.pos = 0

    def uint(self, width: int) -> int:
        if width == 0:
            return 0
        chunk = self.bits[self.pos : self.pos + width]
        if len(chunk) != width:
            raise ProtocolError("message truncated")
        self.pos += width
        return int(chunk, 2)

    def fixed(self, bits: int) -> float:
        return self.uint(bits) / ((1 << bits) - 1)

    def gamma(self) -> int:
        zeros = 0
        while self.bits[self.pos + zeros] == "0":
            zeros += 1
        self.pos += zeros
        return self.uint(zeros + 1)

    def done(self) -> bool:
        return self.pos == len(self.bits)


def quantize_level(value: float, bits: int) -> int:
    if not -1e-12 <= value <= 1 + 1e-12:
        raise ValueError(f"fixed-point value {value} outside [0, 1]")
    return int(round(min(max(value, 0.0), 1.0) * ((1 << bits) - 1)))


def quantize(value: float, bits: int) -> float:
    return quantize_level(value, bits) / ((1 << bits) - 1)


# --- transcript and scheduler -------------------------------------------------

TAGS = ("sampled", "value", "index", "flag", "payoffs", "bits")


@dataclass(frozen=True)
class Message:
    sender: Side
    tag: str
    payload: str
    sender_received: int  # messages the sender had consumed before sending this

    @property
    def bit_length(self) -> int:
        return TAG_BITS + gamma_length(len(self.payload) + 1) + len(self.payload)


@dataclass
class Transcript:
    messages: list[Message] = field(default_factory=list)
    notes: dict[str, Any] = field(default_factory=dict)

    @property
    def total_bits(self) -> int:
        return sum(m.bit_length for m in self.messages)

    def bits_by_sender(self) -> dict[str, int]:
        out = {s.value: 0 for s in Side}
        for m in self.messages:
            out[m.sender.value] += m.bit_length
        return out

    def to_text(self) -> str:
        lines = [f"{m.sender.value} {m.tag} {m.bit_length}" for m in self.messages]
        lines.append(f"total {self.total_bits}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict[str, Any]:
        return {
            "messages": [
                {"sender": m.sender.value, "tag": m.tag, "bits": m.bit_length} for m in self.messages
            ],
            "total_bits": self.total_bits,
        }


class Send(NamedTuple):
    tag: str
    payload: str


RECV = "recv"

Party = Generator[Any, Any, Any]


def run_parties(row: Party, col: Party, transcript: Transcript | None = None):
    """Drive two party coroutines to completion; returns (row_out, col_out, transcript)."""
    if transcript is None:
        transcript = Transcript()
    gens = {Side.ROW: row, Side.COL: col}
    inbox: dict[Side, deque] = {Side.ROW: deque(), Side.COL: deque()}
    consumed = {Side.ROW: 0, Side.COL: 0}
    results: dict[Side, Any] = {}
    actions: dict[Side, Any] = {}

    def resume(side, value):
        try:
            actions[side] = gens[side].send(value)
        except StopIteration as stop:
            results[side] = stop.value
            actions.pop(side, None)

    for side in (Side.ROW, Side.COL):
        resume(side, None)
    while len(results) < 2:
        progressed = False
        for side in (Side.ROW, Side.COL):
            while side in actions:
                act = actions[side]
                if isinstance(act, Send):
                    if act.tag not in TAGS:
                        raise ProtocolError(f"unknown tag {act.tag!r}")
                    msg = Message(side, act.tag, act.payload, consumed[side])
                    transcript.messages.append(msg)
                    inbox[side.other].append(msg)
                    resume(side, None)
                elif act == RECV:
                    if not inbox[side]:
                        break
                    consumed[side] += 1
                    resume(side, inbox[side].popleft())
                else:
                    raise ProtocolError(f"party yielded {act!r}")
                progressed = True
        if not progressed and len(results) < 2:
            raise ProtocolError("deadlock: both parties waiting")
    return results[Side.ROW], results[Side.COL], transcript


def _recv(tag: str):
    msg = yield RECV
    if msg.tag != tag:
        raise ProtocolError(f"expected {tag!r} message, got {msg.tag!r}")
    return BitReader(msg.payload)


def replay_party(transcript: Transcript, side: Side) -> Party:
    """Re-emit ``side``'s recorded messages, consuming input exactly as it did.

    A replayed party holds no matrix at all, so re-running a protocol against
    one shows the other party's behavior depends on it only through bits.
    """
    mine = [m for m in transcript.messages if m.sender is side]
    total_in = sum(1 for m in transcript.messages if m.sender is not side)
    got = 0
    for m in mine:
        while got < m.sender_received:
            yield RECV
            got += 1
        yield Send(m.tag, m.payload)
    while got < total_in:
        yield RECV
        got += 1
    return None


# --- endpoints and sampled strategies -------------------------------------------


@dataclass(frozen=True, eq=False)
class Endpoint:
    """One player: a seat, its own payoff matrix and a private RNG seed.

    ``own_matrix`` is indexed [row strategy, column strategy] as in the game,
    i.e. ``R`` for the row seat and ``C`` for the column seat.
    """

    side: Side
    own_matrix: np.ndarray
    rng_seed: int = 0

    def __post_init__(self):
        M = np.array(self.own_matrix, dtype=float)
        M.setflags(write=False)
        object.__setattr__(self, "own_matrix", M)

    @property
    def n(self) -> int:
        return self.own_matrix.shape[0]

    def as_row(self) -> np.ndarray:
        """Own matrix with own strategies as rows."""
        return self.own_matrix if self.side is Side.ROW else self.own_matrix.T

    def rng(self) -> np.random.Generator:
        return np.random.default_rng([self.rng_seed, 0 if self.side is Side.ROW else 1])


def endpoints(game: BimatrixGame, seed: int = 0) -> tuple[Endpoint, Endpoint]:
    """Split a game into the two blind endpoints (test and harness convenience)."""
    return Endpoint(Side.ROW, game.R, seed), Endpoint(Side.COL, game.C, seed)


@dataclass(frozen=True)
class SampledStrategy:
    support: tuple[int, ...]
    counts: tuple[int, ...]
    k: int
    n: int

    def strategy(self) -> MixedStrategy:
        p = np.zeros(self.n)
        p[list(self.support)] = np.array(self.counts, dtype=float) / self.k
        return MixedStrategy.from_weights(p)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(c / self.k for c in self.counts)


def sample_count(n: int, eps: float, c: float = DEFAULT_C) -> int:
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return math.ceil(c * math.log(max(n, 2)) / eps**2)


def encode_sampled(s: SampledStrategy) -> str:
    w = BitWriter()
    w.uint(len(s.support) - 1, index_width(s.n))
    wk = index_width(s.k)
    for i, c in zip(s.support, s.counts):
        w.uint(i, index_width(s.n)).uint(c - 1, wk)
    return w.getvalue()


def decode_sampled(reader: BitReader, n: int, k: int) -> SampledStrategy:
    m = reader.uint(index_width(n)) + 1
    sup, cnt = [], []
    for _ in range(m):
        sup.append(reader.uint(index_width(n)))
        cnt.append(reader.uint(index_width(k)) + 1)
    if sum(cnt) != k:
        raise ProtocolError("sample counts do not add up to k")
    return SampledStrategy(tuple(sup), tuple(cnt), k, n)


def _payoff_vector(A: np.ndarray, p: np.ndarray, over_own: bool) -> np.ndarray:
    # over_own: p ranges over the rows of A (own strategies)
    return p @ A if over_own else A @ p


def draw_sampled(
    A: np.ndarray,
    x: MixedStrategy,
    eps: float,
    rng: np.random.Generator,
    over_own: bool = True,
    c: float = DEFAULT_C,
) -> SampledStrategy:
    """Empirical distribution of k draws from ``x``, resampled until it is
    eps-close to ``x`` on every payoff the sender can see in ``A``."""
    n = x.n
    k = sample_count(n, eps, c)
    target = _payoff_vector(A, x.probs, over_own)
    for _ in range(MAX_RESAMPLES):
        counts = rng.multinomial(k, x.probs)
        emp = counts / k
        if np.abs(_payoff_vector(A, emp, over_own) - target).max() <= eps:
            sup = np.flatnonzero(counts)
            return SampledStrategy(tuple(int(i) for i in sup), tuple(int(counts[i]) for i in sup), k, n)
    raise ResampleLimitExceeded(f"no {eps}-close sample in {MAX_RESAMPLES} attempts (k={k})")


class Channel:
    """Synchronous channel for one-way transmissions outside a full protocol."""

    def __init__(self, transcript: Transcript | None = None):
        self.transcript = transcript if transcript is not None else Transcript()

    def send(self, sender: Side, tag: str, payload: str) -> BitReader:
        self.transcript.messages.append(Message(sender, tag, payload, 0))
        return BitReader(payload)


def transmit_sampled(
    sender: Endpoint,
    x: MixedStrategy,
    eps: float,
    channel: Channel,
    over_own: bool = True,
    c: float = DEFAULT_C,
    rng: np.random.Generator | None = None,
) -> SampledStrategy:
    """Send a small-support approximation of ``x``; returns what the receiver decodes."""
    rng = sender.rng() if rng is None else rng
    s = draw_sampled(sender.as_row(), x, eps, rng, over_own, c)
    reader = channel.send(sender.side, "sampled", encode_sampled(s))
    return decode_sampled(reader, x.n, s.k)


# --- protocol building blocks -------------------------------------------------------


@dataclass(frozen=True)
class CommConfig:
    c: float = DEFAULT_C
    value_bits: int = DEFAULT_VALUE_BITS
    budget_k: float = DEFAULT_BUDGET_K


def bit_budget(n: int, eps: float, K: float = DEFAULT_BUDGET_K) -> float:
    lg = max(1, math.ceil(math.log2(max(n, 2))))
    return K * lg * lg / eps**2


class PartyResult(NamedTuple):
    strategy: MixedStrategy
    step: Step
    info: dict


def _exchange(side: Side, outgoing: list[Send], tags: list[str]):
    """Row sends first, then column; returns readers for the opponent's messages."""
    got = []
    if side is Side.ROW:
        for m in outgoing:
            yield m
    for t in tags:
        got.append((yield from _recv(t)))
    if side is Side.COL:
        for m in outgoing:
            yield m
    return got


def _send_sampled(s: SampledStrategy) -> Send:
    return Send("sampled", encode_sampled(s))


def _send_values(vals, bits) -> Send:
    w = BitWriter()
    for v in vals:
        w.fixed(float(v), bits)
    return Send("payoffs", w.getvalue())


def _read_values(reader: BitReader, count: int, bits: int) -> np.ndarray:
    return np.array([reader.fixed(bits) for _ in range(count)])


def _send_flag(flag: bool, index: int | None = None, n: int = 1) -> Send:
    w = BitWriter().uint(int(flag), 1)
    if index is not None:
        w.uint(index, index_width(n))
    return Send("flag", w.getvalue())


def _values_and_roles(ep: Endpoint, v: float, cfg: CommConfig):
    v_q = quantize(v, cfg.value_bits)
    (r,) = yield from _exchange(ep.side, [Send("value", BitWriter().fixed(v_q, cfg.value_bits).getvalue())], ["value"])
    v_opp = r.fixed(cfg.value_bits)
    v_row, v_col = (v_q, v_opp) if ep.side is Side.ROW else (v_opp, v_q)
    leader = Side.COL if v_col > v_row + TOL else Side.ROW
    return v_q, v_opp, leader


def _pure(n: int, i: int) -> MixedStrategy:
    return MixedStrategy.pure(n, i)


# --- 0.6528 + eps WSNE --------------------------------------------------------------


def _wsne_party(ep: Endpoint, eps: float, z: float, cfg: CommConfig):
    n = ep.n
    A = ep.as_row()
    rng = ep.rng()
    sol = solve_zero_sum(A)
    v_q, v_opp, leader = yield from _values_and_roles(ep, sol.value, cfg)
    if n == 1:
        return PartyResult(_pure(1, 0), Step.TRIVIAL, {})
    prec = eps / 2
    k = sample_count(n, prec, cfg.c)
    sec_s = draw_sampled(A, sol.x, prec, rng, True, cfg.c)
    pun_s = draw_sampled(A, sol.y, prec, rng, False, cfg.c)
    r1, r2 = yield from _exchange(ep.side, [_send_sampled(sec_s), _send_sampled(pun_s)], ["sampled", "sampled"])
    opp_sec = decode_sampled(r1, n, k).strategy()
    opp_pun = decode_sampled(r2, n, k).strategy()

    v_lead = v_q if leader is ep.side else v_opp
    thresh = TWO_THIRDS - z
    info = {"leader": leader.value, "v_lead": v_lead}
    if v_lead <= thresh + prec + TOL:
        return PartyResult(opp_pun, Step.IMPROVED_STEP2, info)

    bits = cfg.value_bits
    if leader is ep.side:
        xs, ys = sec_s.strategy(), pun_s.strategy()
        r = yield from _recv("flag")
        if r.uint(1):
            return PartyResult(xs, Step.IMPROVED_STEP3, info)
        j_star = r.uint(index_width(n))
        sup = xs.support()
        yield _send_values(A[sup, j_star], bits)
        col_a = np.full(n, np.nan)
        col_a[sup] = [quantize(v, bits) for v in A[sup, j_star]]
        split = _split_from_column(xs, col_a, j_star, z, n)
        r = yield from _recv("flag")
        if r.uint(1):
            return PartyResult(split.x_B, Step.IMPROVED_STEP4, info)
        j_prime = r.uint(index_width(n))
        yield _send_values(A[sup, j_prime], bits)
        rd = yield from _recv("payoffs")
        b_js = _read_values(rd, len(sup), bits)
        b_jp = _read_values(rd, len(sup), bits)
        a_js = col_a[sup]
        a_jp = np.array([quantize(v, bits) for v in A[sup, j_prime]])
        res = _step5_shared(n, sup, split, j_star, j_prime, a_js, a_jp, b_js, b_jp, z)
        return PartyResult(res[0], res[2], info)

    # follower: role matrix has leader strategies as rows
    Bm = A.T
    xs, ys = opp_sec, opp_pun
    pay = xs.probs @ Bm
    if pay.max() <= thresh + prec + TOL:
        yield _send_flag(True)
        return PartyResult(ys, Step.IMPROVED_STEP3, info)
    j_star = int(np.argmax(pay))
    yield _send_flag(False, j_star, n)
    sup = xs.support()
    rd = yield from _recv("payoffs")
    col_a = np.full(n, np.nan)
    col_a[sup] = _read_values(rd, len(sup), bits)
    split = _split_from_column(xs, col_a, j_star, z, n)
    pay_B = split.x_B.probs @ Bm
    if pay_B.max() - pay_B[j_star] <= thresh + TOL:
        yield _send_flag(True)
        return PartyResult(_pure(n, j_star), Step.IMPROVED_STEP4, info)
    j_prime = int(np.argmax(pay_B))
    yield _send_flag(False, j_prime, n)
    rd = yield from _recv("payoffs")
    a_jp = _read_values(rd, len(sup), bits)
    b_js_raw, b_jp_raw = Bm[sup, j_star], Bm[sup, j_prime]
    w = BitWriter()
    for v in list(b_js_raw) + list(b_jp_raw):
        w.fixed(float(v), bits)
    yield Send("payoffs", w.getvalue())
    b_js = np.array([quantize(v, bits) for v in b_js_raw])
    b_jp = np.array([quantize(v, bits) for v in b_jp_raw])
    res = _step5_shared(n, sup, split, j_star, j_prime, col_a[sup], a_jp, b_js, b_jp, z)
    return PartyResult(res[1], res[2], info)


def _split_from_column(xs: MixedStrategy, col_a: np.ndarray, j_star: int, z: float, n: int):
    """Step-four split computed from the transmitted column of the leader's matrix."""
    R = np.full((n, n), np.nan)
    R[:, j_star] = col_a
    return split_step_four(SimpleNamespace(R=R), xs, j_star, z)


def _step5_shared(n, sup, split, j_star, j_prime, a_js, a_jp, b_js, b_jp, z):
    """Step five from payoffs both parties know; returns (leader strat, follower strat, step)."""
    lo = ONE_THIRD + z
    for j, a, b in ((j_star, a_js, b_js), (j_prime, a_jp, b_jp)):
        for k, i in enumerate(sup):
            if a[k] >= lo and b[k] >= lo:
                return _pure(n, i), _pure(n, j), Step.IMPROVED_STEP5_PURE
    R = np.full((n, n), np.nan)
    C = np.full((n, n), np.nan)
    R[sup, j_star], R[sup, j_prime] = a_js, a_jp
    C[sup, j_star], C[sup, j_prime] = b_js, b_jp
    try:
        b, s = find_matching_pennies_rows(R, C, split, j_prime, z)
    except NotFoundError:
        return split.x_B, _pure(n, j_star), Step.IMPROVED_STEP5_FALLBACK
    prof = mp_profile(n, b, s, j_star, j_prime, z)
    return prof.row, prof.col, Step.IMPROVED_STEP5_MP


def _assemble(row_res: PartyResult, col_res: PartyResult, transcript: Transcript) -> tuple[Profile, Transcript]:
    if row_res.step != col_res.step:
        raise ProtocolError(f"parties disagree on the branch: {row_res.step} vs {col_res.step}")
    transcript.notes.update(step=row_res.step.value, **row_res.info)
    return Profile(row_res.strategy, col_res.strategy), transcript


def _check_pair(row: Endpoint, col: Endpoint) -> None:
    if row.side is not Side.ROW or col.side is not Side.COL:
        raise ValueError("pass the row endpoint first and the column endpoint second")
    if row.n != col.n:
        raise ValueError("endpoints disagree on n")


def protocol_wsne(
    row: Endpoint, col: Endpoint, eps: float, z: float | None = None, cfg: CommConfig = CommConfig()
) -> tuple[Profile, Transcript]:
    """(0.6528 + eps)-WSNE with O(log^2 n / eps^2) bits.

    Sampled strategies are sent at precision eps/2 and the value thresholds
    are raised by eps/2, which makes the eps guarantee deterministic given
    the senders' local checks.
    """
    _check_pair(row, col)
    z = optimal_z() if z is None else z
    r, c, t = run_parties(_wsne_party(row, eps, z, cfg), _wsne_party(col, eps, z, cfg))
    return _assemble(r, c, t)


# --- (3 - sqrt 5)/2 + eps NE -----------------------------------------------------------


def _ne_party(ep: Endpoint, eps: float, cfg: CommConfig):
    n = ep.n
    A = ep.as_row()
    rng = ep.rng()
    sol = solve_zero_sum(A)
    v_q, v_opp, leader = yield from _values_and_roles(ep, sol.value, cfg)
    if n == 1:
        return PartyResult(_pure(1, 0), Step.TRIVIAL, {})
    k = sample_count(n, eps, cfg.c)
    v_lead = v_q if leader is ep.side else v_opp
    info = {"leader": leader.value, "v_lead": v_lead}
    if v_lead <= THETA + TOL:
        pun_s = draw_sampled(A, sol.y, eps, rng, False, cfg.c)
        (r,) = yield from _exchange(ep.side, [_send_sampled(pun_s)], ["sampled"])
        return PartyResult(decode_sampled(r, n, k).strategy(), Step.APXNE_STEP1, info)
    if leader is ep.side:
        sec_s = draw_sampled(A, sol.x, eps, rng, True, cfg.c)
        yield _send_sampled(sec_s)
        r = yield from _recv("index")
        j = r.uint(index_width(n))
        best = int(np.argmax(A[:, j]))
        return PartyResult(mix_with_response(sec_s.strategy(), best, v_lead), Step.APXNE_STEP2, info)
    r = yield from _recv("sampled")
    xs = decode_sampled(r, n, k).strategy()
    j = int(np.argmax(A @ xs.probs))
    yield Send("index", BitWriter().uint(j, index_width(n)).getvalue())
    return PartyResult(_pure(n, j), Step.APXNE_STEP2, info)


def protocol_ne(
    row: Endpoint, col: Endpoint, eps: float, cfg: CommConfig = CommConfig()
) -> tuple[Profile, Transcript]:
    """((3 - sqrt 5)/2 + eps)-NE with O(log^2 n / eps^2) bits."""
    _check_pair(row, col)
    r, c, t = run_parties(_ne_party(row, eps, cfg), _ne_party(col, eps, cfg))
    return _assemble(r, c, t)


# --- win-lose (0.5 + eps) WSNE -----------------------------------------------------------


def _winlose_party(ep: Endpoint, eps: float, cfg: CommConfig):
    n = ep.n
    A = ep.as_row()
    if not np.all((A == 0) | (A == 1)):
        raise NotWinLoseError(f"{ep.side.value} matrix is not win-lose")
    rng = ep.rng()
    sol = solve_zero_sum(A)
    v_q, v_opp, leader = yield from _values_and_roles(ep, sol.value, cfg)
    if n == 1:
        return PartyResult(_pure(1, 0), Step.TRIVIAL, {})
    k = sample_count(n, eps, cfg.c)
    v_lead = v_q if leader is ep.side else v_opp
    info = {"leader": leader.value, "v_lead": v_lead}
    if v_lead <= 0.5 + TOL:
        pun_s = draw_sampled(A, sol.y, eps, rng, False, cfg.c)
        (r,) = yield from _exchange(ep.side, [_send_sampled(pun_s)], ["sampled"])
        return PartyResult(decode_sampled(r, n, k).strategy(), Step.WINLOSE_STEP2, info)

    if leader is ep.side:
        sec_s = draw_sampled(A, sol.x, eps, rng, True, cfg.c)
        xs = sec_s.strategy()
        yield _send_sampled(sec_s)
        r = yield from _recv("flag")
        if r.uint(1):
            yield _send_sampled(draw_sampled(A, sol.y, eps, rng, False, cfg.c))
            return PartyResult(xs, Step.WINLOSE_STEP3, info)
        j_star = r.uint(index_width(n))
        sup = xs.support()
        w = BitWriter()
        for i in sup:
            w.uint(int(A[i, j_star]), 1)
        yield Send("bits", w.getvalue())
        r = yield from _recv("flag")
        if r.uint(1):
            return PartyResult(_pure(n, r.uint(index_width(n))), Step.WINLOSE_STEP4, info)
        yield _send_sampled(draw_sampled(A, sol.y, eps, rng, False, cfg.c))
        return PartyResult(xs, Step.WINLOSE_FALLBACK, info)

    r = yield from _recv("sampled")
    xs = decode_sampled(r, n, k).strategy()
    pay = A @ xs.probs  # follower's payoff for each of its strategies
    j_star = int(np.argmax(pay))
    if pay[j_star] <= 0.5 + eps + TOL:
        yield _send_flag(True)
        r = yield from _recv("sampled")
        return PartyResult(decode_sampled(r, n, k).strategy(), Step.WINLOSE_STEP3, info)
    yield _send_flag(False, j_star, n)
    sup = xs.support()
    r = yield from _recv("bits")
    lead_bits = [r.uint(1) for _ in sup]
    hit = next((i for i, a in zip(sup, lead_bits) if a == 1 and A[j_star, i] == 1), None)
    if hit is not None:
        yield _send_flag(True, hit, n)
        return PartyResult(_pure(n, j_star), Step.WINLOSE_STEP4, info)
    yield _send_flag(False)
    r = yield from _recv("sampled")
    return PartyResult(decode_sampled(r, n, k).strategy(), Step.WINLOSE_FALLBACK, info)


def protocol_winlose(
    row: Endpoint, col: Endpoint, eps: float, cfg: CommConfig = CommConfig()
) -> tuple[Profile, Transcript]:
    """(0.5 + eps)-WSNE of a win-lose game with O(log^2 n / eps^2) bits."""
    _check_pair(row, col)
    r, c, t = run_parties(_winlose_party(row, eps, cfg), _winlose_party(col, eps, cfg))
    return _assemble(r, c, t)


PROTOCOLS = {"wsne": protocol_wsne, "ne": protocol_ne, "winlose": protocol_winlose}
