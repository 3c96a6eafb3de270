"""Block-sequence games and strategies.

Four games are played below a ground block sequence ``X``:

``ASYMPTOTIC`` (F)
    I names a natural ``n``; II answers with a nonzero ``y`` in the span of
    ``X`` with ``min supp(y) > n``.
``GOWERS`` (G)
    I plays a block sequence ``Y`` lying in the span of ``X``; II answers with
    a nonzero vector of the span of ``Y``.
``FINITIZED`` (G*)
    I reveals one vector at a time; II answers each with ``0`` (a pass) or a
    nonzero vector of the span of the vectors revealed since II's last
    nonzero answer, after which the round buffer is cleared.
``RESTRICTED`` (G_H)
    Gowers game where every block move of I must pass a membership oracle.

In all games II's nonzero answers must form a block sequence above the
prefix, and the outcome is the prefix followed by those answers.  I's
"infinite" block moves are finite :class:`BlockSeq` values here.

Strategies are callables ``strategy(state) -> move`` that may raise
:class:`StrategyExhausted`.  All tie-breaking goes through the canonical span
order of :mod:`blockramsey.vecspace`.
"""
from __future__ import annotations

import dataclasses
import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from .osc import find_in_class
from .vecspace import DEFAULT_BOUND, BlockSeq, Vector, in_span, precedes


class GameKind(enum.Enum):
    ASYMPTOTIC = "asymptotic"
    GOWERS = "gowers"
    FINITIZED = "finitized"
    RESTRICTED = "restricted"


GOWERS_LIKE = (GameKind.GOWERS, GameKind.RESTRICTED)

I, II = "I", "II"


# moves ---------------------------------------------------------------------


@dataclass(frozen=True)
class NatMove:
    n: int


@dataclass(frozen=True)
class BlockMove:
    blocks: BlockSeq


@dataclass(frozen=True)
class VecMove:
    v: Vector


@dataclass(frozen=True)
class Reply:
    v: Vector


Move = Union[NatMove, BlockMove, VecMove, Reply]


def move_to_json(m: Move) -> dict:
    if isinstance(m, NatMove):
        return {"type": "nat", "value": m.n}
    if isinstance(m, BlockMove):
        return {"type": "block", "value": m.blocks.to_json()}
    if isinstance(m, VecMove):
        return {"type": "vec", "value": m.v.to_json()}
    if isinstance(m, Reply):
        return {"type": "reply", "value": m.v.to_json()}
    raise TypeError(f"not a move: {m!r}")


def move_from_json(d: dict, p: int) -> Move:
    t, val = d["type"], d["value"]
    if t == "nat":
        return NatMove(int(val))
    if t == "block":
        return BlockMove(BlockSeq.from_json(val, p))
    if t == "vec":
        return VecMove(Vector.from_json(val))
    if t == "reply":
        return Reply(Vector.from_json(val))
    raise ValueError(f"unknown move type {t!r}")


# legality ------------------------------------------------------------------


class RejectReason(enum.Enum):
    WRONG_SHAPE = "WrongShape"
    SUPPORT_TOO_LOW = "SupportTooLow"
    NOT_IN_SPAN = "NotInSpan"
    NOT_BLOCK_COMPATIBLE = "NotBlockCompatible"
    ORACLE_REJECTED = "OracleRejected"


@dataclass(frozen=True)
class Rejection:
    reason: RejectReason
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.reason.value}: {self.detail}" if self.detail else self.reason.value


class IllegalMove(ValueError):
    def __init__(self, rejection: Rejection):
        super().__init__(str(rejection))
        self.rejection = rejection


class StrategyExhausted(Exception):
    """A strategy has no legal move within its search bound."""

    def __init__(self, message: str = "", round: int | None = None):
        super().__init__(message)
        self.round = round


class CatalogExhausted(StrategyExhausted):
    pass


Oracle = Callable[[BlockSeq], bool]


@dataclass(frozen=True)
class GameState:
    kind: GameKind
    ground: BlockSeq
    prefix: BlockSeq
    history: tuple = ()
    outcome: BlockSeq = None  # prefix + II's nonzero replies
    buffer: BlockSeq = None  # G* only: I's vectors since II's last nonzero reply
    oracle: Oracle | None = field(default=None, compare=False)

    @property
    def p(self) -> int:
        return self.ground.p

    @property
    def turn(self) -> str:
        return I if len(self.history) % 2 == 0 else II

    @property
    def replies(self) -> BlockSeq:
        """II's nonzero replies without the prefix."""
        return self.outcome[len(self.prefix):]

    @property
    def rounds_played(self) -> int:
        return len(self.outcome) - len(self.prefix)

    @property
    def last_I_move(self) -> Move | None:
        for m in reversed(self.history):
            if not isinstance(m, Reply):
                return m
        return None

    def allowed_span(self) -> BlockSeq:
        """Block sequence whose span (above the outcome) II may answer from.

        Only meaningful when it is II's turn.
        """
        floor = self.outcome.max_supp
        last = self.last_I_move
        if self.kind is GameKind.ASYMPTOTIC:
            return self.ground.tail(max(floor, last.n))
        if self.kind is GameKind.FINITIZED:
            return self.buffer.tail(floor)
        return last.blocks.tail(floor)


def new_game(
    kind: GameKind,
    ground: BlockSeq,
    prefix: BlockSeq | None = None,
    oracle: Oracle | None = None,
) -> GameState:
    """Empty game below ``ground``, I to move.

    Prefix blocks must either lie in the span of ``ground`` or sit entirely
    below its first block.
    """
    kind = GameKind(kind)
    if prefix is None:
        prefix = BlockSeq((), ground.p)
    if prefix.p != ground.p:
        raise ValueError("prefix and ground live over different fields")
    if kind is GameKind.RESTRICTED and oracle is None:
        raise ValueError("the restricted Gowers game needs a family oracle")
    start = ground[0].min_supp if ground else float("inf")
    for k, x in enumerate(prefix):
        if not (x.max_supp < start or in_span(x, ground)):
            raise ValueError(f"prefix block {k} is neither in the ground span nor below it")
    empty = BlockSeq((), ground.p)
    return GameState(kind, ground, prefix, (), prefix, empty, oracle)


def validate_move(s: GameState, m: Move) -> Rejection | None:
    """``None`` if ``m`` is legal in ``s``, otherwise the reason it is not."""
    kind = s.kind
    if s.turn == I:
        if kind is GameKind.ASYMPTOTIC:
            if not isinstance(m, NatMove) or m.n < 0:
                return Rejection(RejectReason.WRONG_SHAPE, "I plays a natural number in F")
            return None
        if kind is GameKind.FINITIZED:
            if not isinstance(m, VecMove) or not m.v or m.v.p != s.p:
                return Rejection(RejectReason.WRONG_SHAPE, "I plays a nonzero vector in G*")
            if s.buffer and m.v.min_supp <= s.buffer.max_supp:
                return Rejection(RejectReason.NOT_BLOCK_COMPATIBLE, "must lie above I's previous vector")
            if not in_span(m.v, s.ground):
                return Rejection(RejectReason.NOT_IN_SPAN, "not in the span of the ground sequence")
            return None
        if not isinstance(m, BlockMove) or not m.blocks or m.blocks.p != s.p:
            return Rejection(RejectReason.WRONG_SHAPE, "I plays a nonempty block sequence")
        if not precedes(m.blocks, s.ground):
            return Rejection(RejectReason.NOT_IN_SPAN, "block move is not below the ground sequence")
        if kind is GameKind.RESTRICTED and not s.oracle(m.blocks):
            return Rejection(RejectReason.ORACLE_REJECTED, "block move is outside the family")
        return None

    if not isinstance(m, Reply) or m.v.p != s.p:
        return Rejection(RejectReason.WRONG_SHAPE, "II answers with a vector")
    y = m.v
    if not y:
        if kind is GameKind.FINITIZED:
            return None
        return Rejection(RejectReason.WRONG_SHAPE, "only G* allows II to pass with 0")
    last = s.last_I_move
    if kind is GameKind.ASYMPTOTIC and y.min_supp <= last.n:
        return Rejection(RejectReason.SUPPORT_TOO_LOW, f"min supp {y.min_supp} <= {last.n}")
    if y.min_supp <= s.outcome.max_supp:
        return Rejection(
            RejectReason.NOT_BLOCK_COMPATIBLE,
            f"min supp {y.min_supp} <= {s.outcome.max_supp}, the end of the outcome so far",
        )
    if kind is GameKind.ASYMPTOTIC:
        span = s.ground
    elif kind is GameKind.FINITIZED:
        span = s.buffer
    else:
        span = last.blocks
    if not in_span(y, span):
        return Rejection(RejectReason.NOT_IN_SPAN, "reply is outside the allowed span")
    return None


def step(s: GameState, m: Move) -> GameState:
    rej = validate_move(s, m)
    if rej is not None:
        raise IllegalMove(rej)
    history = s.history + (m,)
    if isinstance(m, VecMove):
        return dataclasses.replace(s, history=history, buffer=s.buffer.append(m.v))
    if isinstance(m, Reply) and m.v:
        buffer = BlockSeq((), s.p) if s.kind is GameKind.FINITIZED else s.buffer
        return dataclasses.replace(s, history=history, outcome=s.outcome.append(m.v), buffer=buffer)
    return dataclasses.replace(s, history=history)


@dataclass(frozen=True)
class Transcript:
    kind: GameKind
    moves: tuple
    outcome: BlockSeq
    exhausted: bool = False
    reason: str = ""
    state: GameState | None = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        d = {
            "kind": self.kind.value,
            "moves": [move_to_json(m) for m in self.moves],
            "outcome": self.outcome.to_json(),
            "exhausted": self.exhausted,
        }
        if self.reason:
            d["reason"] = self.reason
        return d


def run(s: GameState, strat_I, strat_II, rounds: int, max_moves: int = 100_000) -> Transcript:
    """Alternate the strategies until II has made ``rounds`` nonzero replies.

    A :class:`StrategyExhausted` from either side ends play and is recorded in
    the transcript; illegal moves from a strategy propagate as
    :class:`IllegalMove`.
    """
    target = s.rounds_played + rounds
    exhausted, reason = False, ""
    start = len(s.history)
    while s.rounds_played < target:
        if len(s.history) - start >= max_moves:
            exhausted, reason = True, f"move limit {max_moves} reached"
            break
        strat = strat_I if s.turn == I else strat_II
        try:
            m = strat(s)
        except StrategyExhausted as exc:
            exhausted = True
            reason = f"{s.turn}: {exc}" if str(exc) else f"{s.turn} exhausted"
            break
        s = step(s, m)
    return Transcript(s.kind, s.history, s.outcome, exhausted, reason, s)


def replay(t: Transcript | dict, ground: BlockSeq, prefix: BlockSeq | None = None,
           oracle: Oracle | None = None) -> list[tuple[int, Rejection]]:
    """Re-validate every move of a transcript; returns the rejections found."""
    if isinstance(t, dict):
        kind = GameKind(t["kind"])
        moves = [move_from_json(m, ground.p) for m in t["moves"]]
    else:
        kind, moves = t.kind, t.moves
    s = new_game(kind, ground, prefix, oracle)
    bad = []
    for i, m in enumerate(moves):
        rej = validate_move(s, m)
        if rej is not None:
            bad.append((i, rej))
            continue
        s = step(s, m)
    return bad


# strategies ----------------------------------------------------------------


class Strategy:
    """Base class: a named, parametrized, deterministic move function."""

    name = "strategy"

    def params(self) -> dict:
        return {}

    def describe(self) -> dict:
        return {"name": self.name, **self.params()}

    def __call__(self, s: GameState) -> Move:
        raise NotImplementedError


class ClassChaser(Strategy):
    """II: reply ``k`` is the canonically first allowed vector in ``A_{targets[k]}``.

    In G* it passes while the round buffer has no such vector.
    """

    name = "class-chaser"

    def __init__(self, targets: Sequence[int], bound: int = DEFAULT_BOUND):
        self.targets = tuple(int(t) for t in targets)
        if any(t < 0 for t in self.targets):
            raise ValueError("class indices are naturals")
        self.bound = bound

    def params(self):
        return {"targets": list(self.targets), "bound": self.bound}

    def __call__(self, s: GameState) -> Reply:
        k = s.rounds_played
        if k >= len(self.targets):
            raise StrategyExhausted(f"no target for reply {k}", round=k)
        span = s.allowed_span()
        # a truncated span keeps the canonical first element if it has one
        v = find_in_class(span[: self.bound], self.targets[k], bound=None)
        if v is None:
            if s.kind is GameKind.FINITIZED:
                return Reply(Vector.zero(s.p))
            raise StrategyExhausted(
                f"no vector of class {self.targets[k]} in the allowed span", round=k
            )
        return Reply(v)


class Encoder(ClassChaser):
    """II in G/G_H: reply ``k`` is the first vector of I's ``k``-th move in ``A_{z[k]}``
    with support above reply ``k - 1``.
    """

    name = "encoder"

    def __init__(self, z: Sequence[int], bound: int = DEFAULT_BOUND):
        z = tuple(int(a) for a in z)
        if any(a >= b for a, b in zip(z, z[1:])):
            raise ValueError("z must be strictly increasing")
        super().__init__(z, bound)
        self.z = z

    def params(self):
        return {"z": list(self.z), "bound": self.bound}


class FirstVector(Strategy):
    """II: always the canonically first allowed vector (the first block, up to tails)."""

    name = "first-vector"

    def __call__(self, s: GameState) -> Reply:
        span = s.allowed_span()
        if not span:
            if s.kind is GameKind.FINITIZED:
                return Reply(Vector.zero(s.p))
            raise StrategyExhausted("allowed span is empty", round=s.rounds_played)
        return Reply(span[0])


class TailPlayer(Strategy):
    """I in F: play the top of II's last reply, 0 at the start."""

    name = "tail"

    def __call__(self, s: GameState) -> NatMove:
        replies = s.replies
        return NatMove(replies.max_supp if replies else 0)


class CatalogPlayer(Strategy):
    """I in G/G_H: round ``k`` plays ``catalog[k]`` cut down to its tail above II's last reply."""

    name = "catalog"

    def __init__(self, catalog: Sequence[BlockSeq]):
        if not catalog:
            raise ValueError("catalog must be nonempty")
        self.catalog = tuple(catalog)

    def params(self):
        return {"catalog": [c.to_json() for c in self.catalog]}

    def __call__(self, s: GameState) -> BlockMove:
        k = s.rounds_played
        if k >= len(self.catalog):
            raise CatalogExhausted(f"catalog has {len(self.catalog)} entries", round=k)
        Y = self.catalog[k].tail(s.outcome.max_supp)
        if not Y:
            raise CatalogExhausted(f"catalog entry {k} has nothing above the outcome", round=k)
        return BlockMove(Y)


class FeedPlayer(Strategy):
    """I in G*: reveal ``blocks[k]`` (tail above II's last reply) one vector at a time."""

    name = "feed"

    def __init__(self, blocks: Sequence[BlockSeq]):
        self.blocks = tuple(blocks)

    def params(self):
        return {"blocks": [b.to_json() for b in self.blocks]}

    def __call__(self, s: GameState) -> VecMove:
        k = s.rounds_played
        if k >= len(self.blocks):
            raise CatalogExhausted(f"only {len(self.blocks)} blocks to feed", round=k)
        Y = self.blocks[k].tail(s.outcome.max_supp)
        i = len(s.buffer)
        if i >= len(Y):
            raise CatalogExhausted(f"block {k} fully revealed without a reply", round=k)
        return VecMove(Y[i])


class InducedGowers(Strategy):
    """II in G from a II strategy for G*: reveal I's block move one vector at a
    time to the G* strategy and answer with its first nonzero reply.
    """

    name = "induced"

    def __init__(self, star: Strategy):
        self.star = star

    def params(self):
        return {"star": self.star.describe()}

    def __call__(self, s: GameState) -> Reply:
        Y = s.last_I_move.blocks.tail(s.outcome.max_supp)
        scratch = dataclasses.replace(
            s, kind=GameKind.FINITIZED, history=(), buffer=BlockSeq((), s.p), oracle=None
        )
        for y in Y:
            scratch = dataclasses.replace(scratch, buffer=scratch.buffer.append(y), history=(VecMove(y),))
            r = self.star(scratch)
            if r.v:
                return Reply(r.v)
        raise StrategyExhausted("G* strategy never committed on this block", round=s.rounds_played)


def strategy_class_chaser(targets: Sequence[int], bound: int = DEFAULT_BOUND) -> ClassChaser:
    return ClassChaser(targets, bound)


def strategy_encoder(z: Sequence[int], bound: int = DEFAULT_BOUND) -> Encoder:
    return Encoder(z, bound)


def strategy_tail_I() -> TailPlayer:
    return TailPlayer()


def strategy_catalog_I(catalog: Sequence[BlockSeq]) -> CatalogPlayer:
    return CatalogPlayer(catalog)


def _covering_ground(blocks: Iterable[BlockSeq], p: int) -> BlockSeq:
    top = max((Y.max_supp for Y in blocks), default=-1)
    return BlockSeq.basis(range(top + 1), p)


def _resolve_p(I_blocks, ground, p) -> int:
    if p is not None:
        return p
    if ground is not None:
        return ground.p
    if I_blocks:
        return I_blocks[0].p
    raise ValueError("cannot infer the field from an empty block list; pass p")


def simulate_gowers_via_finitized(
    strat_II_star: Strategy,
    I_blocks: Sequence[BlockSeq],
    ground: BlockSeq | None = None,
    prefix: BlockSeq | None = None,
    p: int | None = None,
) -> BlockSeq:
    """Play G*, with I revealing each of ``I_blocks`` one vector at a time.

    Returns II's replies.  Raises :class:`StrategyExhausted` if some block is
    fully revealed without II committing.
    """
    I_blocks = tuple(I_blocks)
    p = _resolve_p(I_blocks, ground, p)
    if ground is None:
        ground = _covering_ground(I_blocks, p)
    s = new_game(GameKind.FINITIZED, ground, prefix)
    t = run(s, FeedPlayer(I_blocks), strat_II_star, len(I_blocks))
    if t.exhausted:
        raise StrategyExhausted(t.reason, round=t.state.rounds_played)
    return t.state.replies


def play_gowers_directly(
    strat_II: Strategy,
    I_blocks: Sequence[BlockSeq],
    ground: BlockSeq | None = None,
    prefix: BlockSeq | None = None,
    p: int | None = None,
) -> BlockSeq:
    """G with I playing ``I_blocks`` via :class:`CatalogPlayer`; returns II's replies."""
    I_blocks = tuple(I_blocks)
    p = _resolve_p(I_blocks, ground, p)
    if not I_blocks:
        return BlockSeq((), p)
    if ground is None:
        ground = _covering_ground(I_blocks, p)
    s = new_game(GameKind.GOWERS, ground, prefix)
    t = run(s, CatalogPlayer(I_blocks), strat_II, len(I_blocks))
    if t.exhausted:
        raise StrategyExhausted(t.reason, round=t.state.rounds_played)
    return t.state.replies


__all__ = [
    "GameKind", "NatMove", "BlockMove", "VecMove", "Reply", "RejectReason", "Rejection",
    "IllegalMove", "StrategyExhausted", "CatalogExhausted", "GameState", "Transcript",
    "new_game", "validate_move", "step", "run", "replay", "Strategy", "ClassChaser",
    "Encoder", "FirstVector", "TailPlayer", "CatalogPlayer", "FeedPlayer", "InducedGowers",
    "strategy_class_chaser", "strategy_encoder", "strategy_tail_I", "strategy_catalog_I",
    "simulate_gowers_via_finitized", "play_gowers_directly", "move_to_json", "move_from_json",
]
