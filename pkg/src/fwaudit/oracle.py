"""Brute-force ground truth for ruleset behaviour.

Everything here treats a ruleset as a black-box packet classifier under
first-match semantics and checks it point by point, independently of the
interval algebra the transforms are built on.  Exhaustive checks
materialize the whole packet space as a dense grid (bounded by an
explicit budget); sampled checks draw seeded random packets and are
advisory only.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, DomainTooLargeError
from .intervals import DomainSpec
from .rules import Decision, Rule, Ruleset

DEFAULT_BUDGET = 10_000_000

Packet = tuple[int, ...]


class Outcome(str, Enum):
    ACCEPT = "accept"
    DENY = "deny"
    NO_MATCH = "no_match"


_OUTCOME_CODE = {Decision.ACCEPT: 1, Decision.DENY: 0}
_CODE_OUTCOME = {1: Outcome.ACCEPT, 0: Outcome.DENY, -1: Outcome.NO_MATCH}


@dataclass(frozen=True, slots=True)
class EquivalenceResult:
    """Verdict of an equivalence check, with the first disagreeing packet."""

    equivalent: bool
    counterexample: Packet | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def evaluate(ruleset: Ruleset, packet: Packet) -> Outcome:
    """Decision of the first rule matching the packet, or NO_MATCH."""
    ruleset.domain.check_packet(packet)
    for rule in ruleset.rules:
        if any(box.contains(packet) for box in rule.condition):
            return Outcome(rule.decision.value)
    return Outcome.NO_MATCH


def _check_budget(domain: DomainSpec, budget: int) -> None:
    size = domain.size()
    if size > budget:
        raise DomainTooLargeError(
            f"domain holds {size} packets, over the exhaustive budget of {budget}; "
            "use sample_equivalent for domains this large"
        )


def _grid_shape(domain: DomainSpec) -> tuple[int, ...]:
    return tuple(a.hi - a.lo + 1 for a in domain.attributes)


def _first_match_grid(domain: DomainSpec, rules: tuple[Rule, ...]) -> np.ndarray:
    """Grid over the whole packet space holding the first matching rule's
    index into ``rules``, or -1 where nothing matches."""
    grid = np.full(_grid_shape(domain), -1, dtype=np.int32)
    for idx, rule in enumerate(rules):
        for box in rule.condition:
            region = grid[
                tuple(
                    slice(iv.lo - a.lo, iv.hi - a.lo + 1)
                    for iv, a in zip(box.intervals, domain.attributes)
                )
            ]
            region[region == -1] = idx
    return grid


def _outcome_grid(domain: DomainSpec, rules: tuple[Rule, ...]) -> np.ndarray:
    codes = np.array([_OUTCOME_CODE[r.decision] for r in rules] + [-1], dtype=np.int8)
    return codes[_first_match_grid(domain, rules)]


def _first_difference(domain: DomainSpec, a: np.ndarray, b: np.ndarray) -> Packet | None:
    diff = np.flatnonzero(a.ravel() != b.ravel())
    if diff.size == 0:
        return None
    # C-order ravel makes the first flat index the lexicographically
    # smallest packet in attribute order.
    coords = np.unravel_index(int(diff[0]), a.shape)
    return tuple(int(c) + attr.lo for c, attr in zip(coords, domain.attributes))


def _apply_default(grid: np.ndarray, default: Decision | None) -> np.ndarray:
    if default is None:
        return grid
    return np.where(grid == -1, _OUTCOME_CODE[default], grid)


def equivalent(
    r1: Ruleset,
    r2: Ruleset,
    budget: int = DEFAULT_BUDGET,
    default: Decision | None = None,
) -> EquivalenceResult:
    """Exhaustively compare two rulesets packet for packet.

    By default outcomes are compared three-valued (accept / deny /
    no-match), so a positive verdict holds under any default policy.
    Passing ``default`` folds no-match into that decision first, which is
    how a rewritten ruleset is checked against its declared policy.
    """
    if r1.domain != r2.domain:
        raise DomainError("rulesets declare different domains")
    _check_budget(r1.domain, budget)
    g1 = _apply_default(_outcome_grid(r1.domain, r1.rules), default)
    g2 = _apply_default(_outcome_grid(r2.domain, r2.rules), default)
    witness = _first_difference(r1.domain, g1, g2)
    return EquivalenceResult(witness is None, witness)


def find_shadowed(ruleset: Ruleset, budget: int = DEFAULT_BUDGET) -> set[int]:
    """Positions of rules that are never any packet's first match."""
    _check_budget(ruleset.domain, budget)
    grid = _first_match_grid(ruleset.domain, ruleset.rules)
    reached = set(np.unique(grid).tolist())
    return {r.position for idx, r in enumerate(ruleset.rules) if idx not in reached}


def find_redundant(ruleset: Ruleset, budget: int = DEFAULT_BUDGET) -> set[int]:
    """Positions of non-shadowed rules whose removal changes no packet's outcome."""
    _check_budget(ruleset.domain, budget)
    shadowed = find_shadowed(ruleset, budget)
    base = _outcome_grid(ruleset.domain, ruleset.rules)
    redundant = set()
    for idx, rule in enumerate(ruleset.rules):
        if rule.position in shadowed:
            continue
        rest = ruleset.rules[:idx] + ruleset.rules[idx + 1 :]
        if np.array_equal(base, _outcome_grid(ruleset.domain, rest)):
            redundant.add(rule.position)
    return redundant


def _sample_outcomes(rules: tuple[Rule, ...], columns: list[np.ndarray]) -> np.ndarray:
    n = columns[0].size
    out = np.full(n, -1, dtype=np.int8)
    unclaimed = np.ones(n, dtype=bool)
    for rule in rules:
        matched = np.zeros(n, dtype=bool)
        for box in rule.condition:
            m = np.ones(n, dtype=bool)
            for iv, col in zip(box.intervals, columns):
                m &= (col >= iv.lo) & (col <= iv.hi)
            matched |= m
        take = matched & unclaimed
        out[take] = _OUTCOME_CODE[rule.decision]
        unclaimed &= ~matched
    return out


def sample_equivalent(
    r1: Ruleset,
    r2: Ruleset,
    samples: int,
    seed: int,
    default: Decision | None = None,
) -> EquivalenceResult:
    """Compare outcomes on seeded uniform random packets.

    Advisory only: agreement on every sample is evidence, not proof, of
    equivalence.  Identical (rulesets, samples, seed) always draw the
    same packets.
    """
    if r1.domain != r2.domain:
        raise DomainError("rulesets declare different domains")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    columns = [
        rng.integers(a.lo, a.hi, size=samples, endpoint=True, dtype=np.int64)
        for a in r1.domain.attributes
    ]
    o1 = _apply_default(_sample_outcomes(r1.rules, columns), default)
    o2 = _apply_default(_sample_outcomes(r2.rules, columns), default)
    diff = np.flatnonzero(o1 != o2)
    if diff.size == 0:
        return EquivalenceResult(True)
    first = int(diff[0])
    return EquivalenceResult(False, tuple(int(col[first]) for col in columns))
