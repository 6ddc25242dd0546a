"""Ruleset audits: discover shadowed and redundant rules, rewrite to a
pairwise-disjoint equivalent, and reduce to permissions or prohibitions.

Two audits are offered.  ``detection`` strips every overlap between rules
and reports every rule that ends up empty as shadowed; it cannot tell
shadowing from redundancy.  ``complete_detection`` first strips overlap
only between rules with differing decisions, then probes each survivor
for absorption by later same-decision rules, so it can label the two
error kinds separately.  Both return rulesets whose rules are pairwise
disjoint and order-independent, packet-for-packet equivalent to the
input.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from enum import Enum

from .errors import DisjointnessError
from .intervals import Box, bounding_box, box_intersects, boxes_pairwise_disjoint
from .rules import Decision, Rule, Ruleset, exclusion


class WarningKind(str, Enum):
    SHADOWING = "shadowing"
    REDUNDANCY = "redundancy"


class RewriteMode(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True, slots=True)
class RuleWarning:
    position: int
    kind: WarningKind


@dataclass(frozen=True, slots=True)
class AuditStats:
    input_rules: int
    output_rules: int
    output_boxes: int
    elapsed_ms: float


@dataclass(frozen=True, slots=True)
class AuditReport:
    """Outcome of one audit run.

    ``transformed`` holds the surviving rules (emptied rules removed);
    ``warnings`` lists every rule that was flagged, sorted by original
    position, and records which audit produced them via ``algorithm``.
    """

    algorithm: str
    transformed: Ruleset
    warnings: tuple[RuleWarning, ...]
    stats: AuditStats


def _assemble(algorithm: str, original: Ruleset, rules: list[Rule], t0: float) -> AuditReport:
    warnings = []
    for r in rules:
        if r.shadowing:
            warnings.append(RuleWarning(r.position, WarningKind.SHADOWING))
        if r.redundancy:
            warnings.append(RuleWarning(r.position, WarningKind.REDUNDANCY))
    warnings.sort(key=lambda w: w.position)
    transformed = Ruleset(original.domain, tuple(r for r in rules if not r.is_empty))
    stats = AuditStats(
        input_rules=len(original.rules),
        output_rules=len(transformed.rules),
        output_boxes=transformed.total_boxes(),
        elapsed_ms=(time.perf_counter() - t0) * 1000.0,
    )
    return AuditReport(algorithm, transformed, tuple(warnings), stats)


def _hulls(rules: list[Rule]) -> list[Box | None]:
    return [bounding_box(r.condition) for r in rules]


def _hulls_touch(a: Box | None, b: Box | None) -> bool:
    # a rule pair whose condition hulls are disjoint is untouched by
    # exclusion, so the O(boxes * boxes) subtraction can be skipped
    return a is not None and b is not None and box_intersects(a, b)


def detection(ruleset: Ruleset) -> AuditReport:
    """Exclude every earlier rule from every later one.

    Rules whose condition ends up empty are reported as shadowing, even
    when they are really redundant; use ``complete_detection`` to tell
    the two apart.
    """
    t0 = time.perf_counter()
    rules = list(ruleset.rules)
    hulls = _hulls(rules)
    for i in range(len(rules) - 1):
        for j in range(i + 1, len(rules)):
            if _hulls_touch(hulls[i], hulls[j]):
                rules[j] = exclusion(rules[j], rules[i])
                hulls[j] = bounding_box(rules[j].condition)
            if rules[j].is_empty and not rules[j].shadowing:
                rules[j] = replace(rules[j], shadowing=True)
    return _assemble("detection", ruleset, rules, t0)


def _absorbed_by_later(rules: list[Rule], hulls: list[Box | None], i: int) -> bool:
    """Is rule i's condition fully covered by later rules with its decision?"""
    temp = rules[i]
    hull = hulls[i]
    for j in range(i + 1, len(rules)):
        if temp.decision == rules[j].decision:
            if _hulls_touch(hull, hulls[j]):
                temp = exclusion(temp, rules[j])
                hull = bounding_box(temp.condition)
            if temp.is_empty:
                return True
    return False


def test_redundancy(ruleset: Ruleset, i: int) -> bool:
    """Probe rule i (1-based) for absorption by later same-decision rules.

    Works on a copy; the ruleset is never modified.
    """
    if not 1 <= i <= len(ruleset.rules):
        raise IndexError(f"rule index {i} out of range 1..{len(ruleset.rules)}")
    rules = list(ruleset.rules)
    return _absorbed_by_later(rules, _hulls(rules), i - 1)


def complete_detection(ruleset: Ruleset) -> AuditReport:
    """Two-phase audit that separates shadowing from redundancy.

    Phase 1 excludes each rule from every later rule with a different
    decision, flagging emptied rules as shadowing.  Phase 2 walks the
    survivors in order: a rule absorbed by later same-decision rules is
    emptied and flagged redundant; otherwise it is excluded from later
    same-decision rules, flagging any newly emptied ones as shadowing.
    """
    t0 = time.perf_counter()
    rules = list(ruleset.rules)
    hulls = _hulls(rules)
    n = len(rules)

    for i in range(n - 1):
        for j in range(i + 1, n):
            if rules[i].decision != rules[j].decision and _hulls_touch(hulls[i], hulls[j]):
                rules[j] = exclusion(rules[j], rules[i])
                hulls[j] = bounding_box(rules[j].condition)
            if rules[j].is_empty and not rules[j].shadowing:
                rules[j] = replace(rules[j], shadowing=True)

    for i in range(n - 1):
        if rules[i].is_empty:
            # Already settled (and flagged) by an earlier step: excluding
            # against it is the identity, and probing it for redundancy
            # would only relabel a rule that is not really there anymore.
            continue
        if _absorbed_by_later(rules, hulls, i):
            rules[i] = replace(rules[i], condition=(), redundancy=True)
            hulls[i] = None
        else:
            for j in range(i + 1, n):
                if rules[i].decision == rules[j].decision and _hulls_touch(hulls[i], hulls[j]):
                    rules[j] = exclusion(rules[j], rules[i])
                    hulls[j] = bounding_box(rules[j].condition)
                if not rules[j].redundancy and rules[j].is_empty and not rules[j].shadowing:
                    rules[j] = replace(rules[j], shadowing=True)
    return _assemble("complete", ruleset, rules, t0)


def rewrite(ruleset: Ruleset, mode: RewriteMode) -> Ruleset:
    """Keep only accept rules (positive) or only deny rules (negative).

    Valid only on a pairwise-disjoint ruleset, and equivalent to it only
    under the matching default policy: positive rewriting assumes a
    closed (default-deny) policy, negative an open (default-accept) one.
    Disjointness is verified, not trusted.
    """
    mode = RewriteMode(mode)
    all_boxes = [box for r in ruleset.rules for box in r.condition]
    if not boxes_pairwise_disjoint(all_boxes):
        raise DisjointnessError("rewrite needs a pairwise-disjoint ruleset; run an audit first")
    keep = Decision.ACCEPT if mode is RewriteMode.POSITIVE else Decision.DENY
    return Ruleset(ruleset.domain, tuple(r for r in ruleset.rules if r.decision is keep))
