"""Coding a real through finite initial segments, and the encode/play/decode
pipeline built on the encoder strategy.

Finite sets of naturals are coded by their binary indicator,
``f(S) = sum(2**i for i in S)``.  For a bit string ``g`` the set
``z(g) = {f(g & n) : n <= len(g)}`` (``g & n`` being the set bits of ``g``
below ``n``) lets any subset of ``z`` be decoded back into a prefix of ``g``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .games import CatalogPlayer, Encoder, GameKind, StrategyExhausted, Transcript, new_game, run
from .osc import asymptotic_class
from .vecspace import BlockSeq, Vector, decompose


class Inconsistent(ValueError):
    """The decoded sets are not the initial cuts of a single bit string."""


def encode_set(S: Iterable[int]) -> int:
    out = 0
    for i in set(S):
        if i < 0:
            raise ValueError("sets of naturals only")
        out |= 1 << i
    return out


def decode_set(k: int) -> frozenset[int]:
    if k < 0:
        raise ValueError("codes are naturals")
    return frozenset(i for i, b in enumerate(reversed(bin(k)[2:])) if b == "1")


def _check_bits(g: str):
    if g.strip("01"):
        raise ValueError(f"not a bit string: {g!r}")


def cut(g: str, n: int) -> frozenset[int]:
    """``g & n``: indices below ``n`` where ``g`` has a 1."""
    return frozenset(i for i, b in enumerate(g[:n]) if b == "1")


@dataclass(frozen=True)
class ZTrace:
    g_prefix: str
    z_elements: frozenset[int]

    def sorted(self) -> list[int]:
        return sorted(self.z_elements)


def z_of(g_prefix: str) -> ZTrace:
    _check_bits(g_prefix)
    return ZTrace(g_prefix, frozenset(encode_set(cut(g_prefix, n)) for n in range(len(g_prefix) + 1)))


def recover_prefix(w: Iterable[int]) -> str:
    """The prefix of ``g`` pinned down by a finite subset ``w`` of ``z(g)``.

    Each element decodes to a cut ``g & n`` with ``n`` above its largest
    member, so the largest cut fixes every bit up to its maximum.  The cuts
    have to be initial segments of one another, otherwise no single ``g``
    explains ``w`` and :class:`Inconsistent` is raised.
    """
    codes = sorted(set(w))
    if codes and codes[0] < 0:
        raise ValueError("codes are naturals")
    # on codes, "a is an initial cut of b" reads b & (2**(max a + 1) - 1) == a;
    # the relation is transitive, so neighbours in numeric order decide it
    for small, big in zip(codes, codes[1:]):
        if big & ((1 << small.bit_length()) - 1) != small:
            raise Inconsistent(f"{sorted(decode_set(small))} is not an initial cut of {sorted(decode_set(big))}")
    return bin(codes[-1])[2:][::-1] if codes and codes[-1] else ""


def realizable_by_bruteforce(w: Iterable[int], max_len: int) -> bool:
    """Whether ``w`` is a subset of ``z(g)`` for some bit string of length ``<= max_len``."""
    w = set(w)
    for L in range(max_len + 1):
        for k in range(2**L):
            g = format(k, f"0{L}b") if L else ""
            if w <= z_of(g).z_elements:
                return True
    return False


# pipeline ------------------------------------------------------------------


@dataclass(frozen=True)
class PipelineResult:
    z: tuple[int, ...]
    outcome: BlockSeq
    transcript: Transcript


def _ground_for(catalog: Sequence[BlockSeq]) -> BlockSeq:
    p = catalog[0].p
    top = max(Y.max_supp for Y in catalog)
    return BlockSeq.basis(range(top + 1), p)


def pipeline_encode_play(
    z: Sequence[int],
    I_catalog: Sequence[BlockSeq],
    rounds: int | None = None,
    ground: BlockSeq | None = None,
) -> PipelineResult:
    """Run the encoder for ``z`` against a catalog player in the Gowers game.

    Raises :class:`StrategyExhausted` (with ``.round`` set) if some round has
    no vector of the required class, and checks every reply's class.
    """
    z = tuple(z)
    if rounds is None:
        rounds = len(z)
    if rounds > len(z):
        raise ValueError("more rounds than entries of z")
    if not I_catalog:
        raise ValueError("empty catalog")
    if ground is None:
        ground = _ground_for(I_catalog)
    s = new_game(GameKind.GOWERS, ground)
    t = run(s, CatalogPlayer(I_catalog), Encoder(z), rounds)
    if t.exhausted:
        raise StrategyExhausted(t.reason, round=t.state.rounds_played)
    replies = t.state.replies
    for k, y in enumerate(replies):
        if asymptotic_class(y) != z[k]:
            raise AssertionError(f"reply {k} has class {asymptotic_class(y)}, expected {z[k]}")
    return PipelineResult(z, replies, t)


def pipeline_decode(v: Vector, outcome: BlockSeq) -> frozenset[int]:
    """Classes of the outcome vectors that occur in ``v`` with nonzero coefficient."""
    if not v:
        raise ValueError("decode needs a nonzero vector")
    coeffs = decompose(v, outcome)
    return frozenset(asymptotic_class(y) for c, y in zip(coeffs, outcome) if c)


def basis_catalog(rounds: int, width: int, p: int, start: int = 0) -> list[BlockSeq]:
    """``rounds`` disjoint runs of ``width`` consecutive basis vectors."""
    return [BlockSeq.basis(range(start + k * width, start + (k + 1) * width), p) for k in range(rounds)]
