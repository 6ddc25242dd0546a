from pathlib import Path

import pytest

from fwaudit import Box, DomainSpec, Rule, Ruleset
from fwaudit.rules import Decision

FIXTURES = Path(__file__).parent.parent / "fixtures"

# the worked five-rule example used throughout: two attributes s and d
SD = DomainSpec.of(("s", 1, 100), ("d", 1, 100))


def box(*pairs):
    return Box.from_pairs(*pairs)


def rule(position, decision, *boxes):
    return Rule(position, tuple(Box.from_pairs(*b) for b in boxes), Decision(decision))


def make_table1():
    return Ruleset(
        SD,
        (
            rule(1, "deny", ((1, 30), (20, 45))),
            rule(2, "accept", ((20, 60), (25, 35))),
            rule(3, "accept", ((40, 70), (20, 45))),
            rule(4, "deny", ((15, 45), (25, 30))),
            rule(5, "accept", ((25, 45), (20, 40))),
        ),
    )


@pytest.fixture
def table1():
    return make_table1()
