"""Elementary Petri nets tracking the state of a single operand.

Places describe the operand's states and transitions its state changes.
Arc weights are stored in two nonnegative ``|S| x |E|`` matrices: ``m_neg``
(place -> transition, tokens consumed) and ``m_pos`` (transition -> place,
tokens produced).  Markings are plain 1-D integer arrays.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from hfgt.exceptions import OperandNetError

__all__ = [
    "OperandNet",
    "build_operand_net",
    "net_from_incidence",
    "incidence",
    "enabled",
    "fire",
]


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class OperandNet:
    operand_id: int
    places: tuple[str, ...]
    transitions: tuple[str, ...]
    m_pos: np.ndarray
    m_neg: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.places), len(self.transitions)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OperandNet):
            return NotImplemented
        return (
            self.operand_id == other.operand_id
            and self.places == other.places
            and self.transitions == other.transitions
            and np.array_equal(self.m_pos, other.m_pos)
            and np.array_equal(self.m_neg, other.m_neg)
        )

    def arcs(self) -> list[tuple[str, str, int]]:
        """Arcs as ``(source, target, weight)``, place->transition arcs first."""
        out = []
        for s, e in zip(*np.nonzero(self.m_neg)):
            out.append((self.places[s], self.transitions[e], int(self.m_neg[s, e])))
        for s, e in zip(*np.nonzero(self.m_pos)):
            out.append((self.transitions[e], self.places[s], int(self.m_pos[s, e])))
        return out


def _unique(names: Iterable[str], what: str) -> tuple[str, ...]:
    names = tuple(names)
    seen = set()
    for n in names:
        if n in seen:
            raise OperandNetError(f"duplicate {what} name {n!r}")
        seen.add(n)
    return names


def _check_no_isolated(transitions: Sequence[str], m_pos, m_neg) -> None:
    touched = (m_pos.sum(axis=0) + m_neg.sum(axis=0)) > 0
    for e, name in enumerate(transitions):
        if not touched[e]:
            raise OperandNetError(f"isolated transition {name!r} has no arcs")


def build_operand_net(
    operand_id: int,
    places: Iterable[str],
    transitions: Iterable[str],
    arcs: Iterable,
) -> OperandNet:
    """Build a net from named arcs.

    Each arc is ``(source, target)`` or ``(source, target, weight)``; a
    place->transition arc feeds ``m_neg`` and a transition->place arc feeds
    ``m_pos``.  Repeated arcs accumulate their weights.

    Raises :class:`~hfgt.exceptions.OperandNetError` for duplicate names, an
    arc endpoint that is not a declared place/transition, a non-positive
    weight, or a transition without arcs.
    """
    places = _unique(places, "place")
    transitions = _unique(transitions, "transition")
    clash = set(places) & set(transitions)
    if clash:
        raise OperandNetError(f"names used as both place and transition: {sorted(clash)}")
    p_idx = {p: i for i, p in enumerate(places)}
    t_idx = {t: i for i, t in enumerate(transitions)}
    m_pos = np.zeros((len(places), len(transitions)), dtype=np.int64)
    m_neg = np.zeros_like(m_pos)

    for arc in arcs:
        if isinstance(arc, dict):
            src, dst, w = arc.get("from"), arc.get("to"), arc.get("weight", 1)
        else:
            arc = tuple(arc)
            if len(arc) not in (2, 3):
                raise OperandNetError(f"malformed arc {arc!r}")
            src, dst = arc[:2]
            w = arc[2] if len(arc) == 3 else 1
        if isinstance(w, bool) or not isinstance(w, (int, np.integer)) or w <= 0:
            raise OperandNetError(f"arc {src!r}->{dst!r} has non-positive weight {w!r}")
        if src in p_idx and dst in t_idx:
            m_neg[p_idx[src], t_idx[dst]] += w
        elif src in t_idx and dst in p_idx:
            m_pos[p_idx[dst], t_idx[src]] += w
        else:
            raise OperandNetError(
                f"arc {src!r}->{dst!r} must join a declared place and transition"
            )

    _check_no_isolated(transitions, m_pos, m_neg)
    return OperandNet(operand_id, places, transitions, _frozen(m_pos), _frozen(m_neg))


def net_from_incidence(
    operand_id: int,
    places: Sequence[str],
    transitions: Sequence[str],
    m_pos,
    m_neg,
) -> OperandNet:
    """Rebuild a net directly from its two arc-weight matrices."""
    places = _unique(places, "place")
    transitions = _unique(transitions, "transition")
    m_pos = np.asarray(m_pos, dtype=np.int64)
    m_neg = np.asarray(m_neg, dtype=np.int64)
    shape = (len(places), len(transitions))
    if m_pos.shape != shape or m_neg.shape != shape:
        raise OperandNetError(
            f"incidence matrices must have shape {shape}, got {m_pos.shape} and {m_neg.shape}"
        )
    if (m_pos < 0).any() or (m_neg < 0).any():
        raise OperandNetError("arc weights must be nonnegative")
    _check_no_isolated(transitions, m_pos, m_neg)
    return OperandNet(operand_id, places, transitions, _frozen(m_pos), _frozen(m_neg))


def incidence(net: OperandNet) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(m_pos, m_neg, m_pos - m_neg)``."""
    return net.m_pos, net.m_neg, net.m_pos - net.m_neg


def _check_marking(net: OperandNet, marking) -> np.ndarray:
    tokens = np.asarray(marking, dtype=np.int64)
    if tokens.shape != (len(net.places),):
        raise OperandNetError(
            f"marking has shape {tokens.shape}, net has {len(net.places)} places"
        )
    if (tokens < 0).any():
        raise OperandNetError("marking has negative token counts")
    return tokens


def enabled(net: OperandNet, marking) -> frozenset[int]:
    """Indices of transitions whose input places hold enough tokens."""
    tokens = _check_marking(net, marking)
    if not net.transitions:
        return frozenset()
    ok = (tokens[:, None] >= net.m_neg).all(axis=0)
    return frozenset(int(e) for e in np.flatnonzero(ok))


def fire(net: OperandNet, marking, transition: int | str) -> np.ndarray:
    """Fire one transition and return the successor marking."""
    tokens = _check_marking(net, marking)
    if isinstance(transition, str):
        try:
            e = net.transitions.index(transition)
        except ValueError:
            raise OperandNetError(f"unknown transition {transition!r}") from None
    else:
        e = int(transition)
        if not 0 <= e < len(net.transitions):
            raise OperandNetError(f"transition index {e} out of range")
    if (tokens < net.m_neg[:, e]).any():
        raise OperandNetError(f"transition {net.transitions[e]!r} is not enabled")
    return tokens - net.m_neg[:, e] + net.m_pos[:, e]
