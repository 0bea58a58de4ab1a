"""Executable property suite for the essentiality theory.

Seven properties are checked per (automaton, term) instance:

1. essential-prefix-closed: the essential position set contains every
   prefix of each of its members.
2. ind-prefix-determined: every set of positions independent of a fixed
   position is prefix determined w.r.t. the term's positions.
3. fictive-prefix-determined: the fictive position set is prefix
   determined w.r.t. the term's positions.
4. determining-implies-fictive: when a determining subtree exists, the
   positions it certifies as prunable are indeed fictive.
5. separable-strong-chain: a separable essential position stays
   essential in every subterm along the one-level-at-a-time chain up to
   the root.
6. oracle-agreement: the factored essentiality search agrees with a
   direct double loop over all assignment pairs.
7. prune-soundness: pruning preserves every run result and its node
   accounting is consistent.

All seven hold for linear terms (no repeated variables) over any
complete deterministic automaton; the bundled generator only produces
such terms, so suite failures on generated instances indicate bugs.
On terms where one variable occurs at several independent positions,
properties 1, 3 and 5 can have genuine counterexamples (a repeated
variable couples subtrees that are positionally independent); the suite
then reports honest findings rather than bugs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

from .automaton import (
    DEFAULT_BUDGET,
    Automaton,
    parse_automaton,
    render_automaton,
    run,
)
from .errors import EnumerationBudgetExceeded, InvalidPositionError
from .essential import essential_positions, is_essential_subtree, is_separable
from .generate import DEFAULT_SIGNATURE, GenParams, SplitMix64, random_automaton, random_term
from .reduction import (
    cost_report,
    determining_subtree,
    fictive_from_determining,
    freeze_fictive,
    runs_equal_all,
)
from .terms import (
    Position,
    Signature,
    Term,
    is_prefix_closed,
    is_prefix_determined,
    ind_positions,
    parse_term,
    positions,
    render_term,
    subterm_at,
    variables,
)

PROPERTY_NAMES = (
    "essential-prefix-closed",
    "ind-prefix-determined",
    "fictive-prefix-determined",
    "determining-implies-fictive",
    "separable-strong-chain",
    "oracle-agreement",
    "prune-soundness",
)


@dataclass
class PropertyFailure:
    """One counterexample, serialized so it can be replayed exactly."""

    prop: str
    detail: str
    automaton_text: str
    term_text: str
    seed: int | None = None

    def to_json(self) -> str:
        payload = {
            "property": self.prop,
            "detail": self.detail,
            "automaton": self.automaton_text,
            "term": self.term_text,
            "seed": self.seed,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


@dataclass
class PropertyOutcome:
    name: str
    instances_checked: int = 0
    failures: list[PropertyFailure] = field(default_factory=list)
    budget_exceeded: int = 0


@dataclass
class PropertyReport:
    outcomes: dict[str, PropertyOutcome]

    @classmethod
    def empty(cls) -> "PropertyReport":
        return cls({name: PropertyOutcome(name) for name in PROPERTY_NAMES})

    @property
    def total_failures(self) -> int:
        return sum(len(o.failures) for o in self.outcomes.values())

    @property
    def total_budget_exceeded(self) -> int:
        return sum(o.budget_exceeded for o in self.outcomes.values())

    def merge(self, other: "PropertyReport") -> None:
        for name, o in other.outcomes.items():
            mine = self.outcomes[name]
            mine.instances_checked += o.instances_checked
            mine.failures.extend(o.failures)
            mine.budget_exceeded += o.budget_exceeded


def essential_by_definition(aut: Automaton, t: Term, p: Position, *,
                            budget: int = DEFAULT_BUDGET) -> bool:
    """Direct double loop over all pairs of total assignments.

    Keeps none of the factored-search structure: pairs are filtered by
    the agreement condition after the fact.  Used as the independent
    oracle for :func:`fta.essential.is_essential_subtree`.
    """
    if p not in positions(t):
        raise InvalidPositionError(f"{p} is not a position of the term")
    vs = sorted(variables(t))
    inner = variables(subterm_at(t, p))
    outer_idx = [i for i, v in enumerate(vs) if v not in inner]
    consts = aut.signature.constants
    count = len(consts) ** len(vs)
    if count * count > budget:
        raise EnumerationBudgetExceeded(count * count, budget)
    evaluated = []
    for values in product(consts, repeat=len(vs)):
        tr = run(aut, dict(zip(vs, values)), t)
        evaluated.append((values, tr.per_position[p], tr.result))
    for values1, sub1, root1 in evaluated:
        for values2, sub2, root2 in evaluated:
            if any(values1[i] != values2[i] for i in outer_idx):
                continue
            if sub1 != sub2 and root1 != root2:
                return True
    return False


def verify_properties(aut: Automaton, t: Term, *, budget: int = DEFAULT_BUDGET,
                      seed: int | None = None) -> PropertyReport:
    """Run all seven properties on one instance."""
    report = PropertyReport.empty()
    aut_text = render_automaton(aut)
    term_text = render_term(t)

    def attempt(name: str, fn) -> None:
        outcome = report.outcomes[name]
        outcome.instances_checked += 1
        try:
            details = fn()
        except EnumerationBudgetExceeded:
            outcome.budget_exceeded += 1
            return
        for detail in details:
            outcome.failures.append(PropertyFailure(name, detail, aut_text, term_text, seed))

    pos = positions(t)

    # The essentiality report backs properties 1, 3, 4 and 5.
    ess_report = None
    ess_error: EnumerationBudgetExceeded | None = None
    try:
        ess_report = essential_positions(aut, t, budget=budget)
    except EnumerationBudgetExceeded as exc:
        ess_error = exc

    def need_report():
        if ess_report is None:
            raise ess_error
        return ess_report

    def p1():
        rep = need_report()
        if not is_prefix_closed(rep.essential_positions):
            bad = [
                str(p) for p in rep.essential_positions
                if p.indices and p.parent() not in rep.essential_positions
            ]
            return [f"essential positions not prefix closed at: {', '.join(bad)}"]
        return []

    def p2():
        return [
            f"independent positions of {p} not prefix determined"
            for p in pos
            if not is_prefix_determined(ind_positions(t, p), pos)
        ]

    def p3():
        rep = need_report()
        if not is_prefix_determined(rep.fictive_positions, pos):
            return ["fictive positions not prefix determined"]
        return []

    def p4():
        rep = need_report()
        det = determining_subtree(aut, t, budget=budget)
        if det is None:
            return []
        claim = fictive_from_determining(aut, t, det, budget=budget)
        return [
            f"claimed-fictive position {q} is essential (determining subtree {det})"
            for q in claim
            if q not in rep.fictive_positions
        ]

    def p5():
        rep = need_report()
        details = []
        for p in rep.essential_positions:
            if not is_separable(aut, t, [p], budget=budget).separable:
                continue
            for cut in range(len(p.indices), -1, -1):
                prefix = Position(p.indices[:cut])
                rel = p.suffix_after(prefix)
                if is_essential_subtree(aut, subterm_at(t, prefix), rel, budget=budget) is None:
                    details.append(
                        f"separable position {p} is not essential within the subtree at {prefix}"
                    )
        return details

    def p6():
        details = []
        for p in pos:
            fast = is_essential_subtree(aut, t, p, budget=budget) is not None
            slow = essential_by_definition(aut, t, p, budget=budget)
            if fast != slow:
                details.append(
                    f"essentiality of {p}: search says {fast}, enumeration says {slow}"
                )
        return details

    def p7():
        red = freeze_fictive(aut, t, budget=budget)
        details = []
        if not runs_equal_all(aut, t, red.reduced_term, budget=budget):
            details.append(f"pruning to {render_term(red.reduced_term)} changed a run result")
        original, reduced, saved = cost_report(t, red.reduced_term)
        if not (0.0 <= saved <= 1.0) or reduced > original:
            details.append(f"inconsistent node accounting: {original} -> {reduced}")
        return details

    attempt(PROPERTY_NAMES[0], p1)
    attempt(PROPERTY_NAMES[1], p2)
    attempt(PROPERTY_NAMES[2], p3)
    attempt(PROPERTY_NAMES[3], p4)
    attempt(PROPERTY_NAMES[4], p5)
    attempt(PROPERTY_NAMES[5], p6)
    attempt(PROPERTY_NAMES[6], p7)
    return report


def check_random_instances(*, seed: int, count: int,
                           signature: Signature = DEFAULT_SIGNATURE,
                           max_depth: int = 4, var_pool: int = 4,
                           max_states: int = 3,
                           budget: int = DEFAULT_BUDGET) -> PropertyReport:
    """Run the suite over ``count`` seeded random instances."""
    report = PropertyReport.empty()
    rng = SplitMix64(seed)
    for _ in range(count):
        state_count = 1 + rng.below(max_states)
        term_seed = rng.next_u64()
        aut_seed = rng.next_u64()
        t = random_term(GenParams(signature, max_depth, var_pool, state_count, term_seed))
        aut = random_automaton(GenParams(signature, max_depth, var_pool, state_count, aut_seed))
        report.merge(verify_properties(aut, t, budget=budget, seed=seed))
    return report


def replay_failure(artifact_json: str, *, budget: int = DEFAULT_BUDGET) -> PropertyReport:
    """Re-run the suite on a serialized failure artifact."""
    payload = json.loads(artifact_json)
    sig, aut = parse_automaton(payload["automaton"])
    t = parse_term(payload["term"], sig)
    return verify_properties(aut, t, budget=budget, seed=payload.get("seed"))
