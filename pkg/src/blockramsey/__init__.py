"""Desk-scale Ramsey theory of block sequences over prime fields."""
from .vecspace import (
    DEFAULT_BOUND,
    BlockSeq,
    BoundExceeded,
    FieldMismatch,
    FieldSpec,
    NotBlockSequence,
    NotInSpan,
    Vector,
    decompose,
    enumerate_span,
    in_span,
    precedes,
    support,
    tail,
)
from .osc import asymptotic_class, find_in_class, osc, osc_image, partition_class

__version__ = "0.1.0"
