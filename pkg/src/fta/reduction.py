"""Automaton-aware term pruning.

Two reductions are combined, both preserving every run result:

* freezing: a maximal fictive subtree whose variables occur nowhere
  else is replaced by a minimal ground term with the same state (for
  the first canonical assignment of its variables; fictiveness plus
  variable locality makes the choice irrelevant to the root state);
* truncation: when some proper essential subtree gets the same state as
  the whole term under every assignment, running over that subtree
  alone suffices, so it can replace the whole term.

Soundness never rests on the argument alone: reductions can be
re-checked exhaustively against the original term.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automaton import (
    DEFAULT_BUDGET,
    Automaton,
    canonical_ground,
    enumerate_assignments,
    run,
)
from .errors import FtaError, PremiseViolatedError
from .essential import _RunCache, _witness_at, essential_positions
from .terms import (
    Node,
    Position,
    PositionSet,
    ROOT,
    Term,
    ind_positions,
    node_count,
    positions,
    replace_at,
    subterm_at,
    substitute,
    variable_positions,
    variables,
)

__all__ = [
    "ReductionReport",
    "runs_equal_all",
    "determining_subtree",
    "fictive_from_determining",
    "freeze_fictive",
    "check_reduction",
    "cost_report",
]


@dataclass(frozen=True)
class ReductionReport:
    original_nodes: int
    reduced_nodes: int
    determining_position: Position | None
    frozen_positions: PositionSet
    reduced_term: Term


def runs_equal_all(aut: Automaton, t: Term, t2: Term, *,
                   budget: int = DEFAULT_BUDGET) -> bool:
    """True iff every total assignment gives both terms the same state."""
    joint = variables(t) | variables(t2)
    for gamma in enumerate_assignments(joint, aut.signature, budget=budget):
        if run(aut, gamma, t).result != run(aut, gamma, t2).result:
            return False
    return True


def determining_subtree(aut: Automaton, t: Term, *,
                        budget: int = DEFAULT_BUDGET) -> Position | None:
    """Proper position whose subtree is essential and matches the whole
    term's state under every assignment; None when no such position
    exists.  Chosen for maximal savings: smallest subtree first, ties
    broken by the lexicographically least position."""
    cache = _RunCache(aut, t)
    candidates = sorted(
        (p for p in positions(t) if p != ROOT),
        key=lambda p: (node_count(subterm_at(t, p)), p.indices),
    )
    for p in candidates:
        if not runs_equal_all(aut, t, subterm_at(t, p), budget=budget):
            continue
        if _witness_at(aut, t, p, budget, cache) is not None:
            return p
    return None


def fictive_from_determining(aut: Automaton, t: Term, p: Position, *,
                             budget: int = DEFAULT_BUDGET) -> PositionSet:
    """Positions provably fictive given a determining subtree at ``p``.

    Requires the subtree at ``p`` to be essential and to match the whole
    term's state under every assignment (else PremiseViolatedError).
    The claim covers every position independent of ``p`` that brings at
    least one new variable and shares none with the subtree at ``p``:
    a witness for such a position would have to agree on the subtree's
    variables, forcing equal subtree states and hence equal root states.
    Positions that share variables with the subtree at ``p`` are not
    claimed; a shared variable can flip the subtree and the root
    together, making such a position genuinely essential.
    """
    if _witness_at(aut, t, p, budget, _RunCache(aut, t)) is None:
        raise PremiseViolatedError(f"position {p} is not essential")
    if not runs_equal_all(aut, t, subterm_at(t, p), budget=budget):
        raise PremiseViolatedError(
            f"the subtree at {p} does not match the term's state everywhere"
        )
    p_vars = variables(subterm_at(t, p))
    claim = []
    for q in ind_positions(t, p):
        q_vars = variables(subterm_at(t, q))
        if q_vars and not (q_vars & p_vars):
            claim.append(q)
    return PositionSet(claim)


def freeze_fictive(aut: Automaton, t: Term, *,
                   budget: int = DEFAULT_BUDGET, check: bool = False) -> ReductionReport:
    """Prune ``t`` without changing any run result.

    Every maximal fictive position whose variables occur only inside its
    subtree is frozen: the variables are fixed to the first constants
    and the resulting ground subtree is replaced by its state's minimal
    ground representative.  If a determining subtree exists and is
    smaller than the frozen term, it becomes the reduced term instead.
    With ``check=True`` the reduction is re-verified exhaustively.
    """
    report = essential_positions(aut, t, budget=budget)
    fictive = set(report.fictive_positions)
    occurrences = variable_positions(t)
    reps = canonical_ground(aut)
    consts = aut.signature.constants

    frozen: list[Position] = []
    pruned = t
    for p in sorted(fictive, key=lambda q: q.order_key):
        if any(anc in fictive for anc in _proper_prefixes(p)):
            continue  # not maximal
        sub = subterm_at(t, p)
        sub_vars = variables(sub)
        local = all(
            p.is_prefix_of(occ)
            for v in sub_vars
            for occ in occurrences[v]
        )
        if not local:
            continue
        grounded = substitute(sub, {v: Node(consts[0]) for v in sub_vars})
        state = run(aut, {}, grounded).result
        if node_count(reps[state]) >= node_count(sub):
            continue  # representative would not shrink the term
        pruned = replace_at(pruned, p, reps[state])
        frozen.append(p)

    determining = determining_subtree(aut, t, budget=budget)
    reduced = pruned
    if determining is not None:
        candidate = subterm_at(t, determining)
        if node_count(candidate) < node_count(pruned):
            reduced = candidate

    result = ReductionReport(
        original_nodes=node_count(t),
        reduced_nodes=node_count(reduced),
        determining_position=determining,
        frozen_positions=PositionSet(frozen),
        reduced_term=reduced,
    )
    if check:
        check_reduction(aut, t, result, budget=budget)
    return result


def check_reduction(aut: Automaton, original: Term, report: ReductionReport, *,
                    budget: int = DEFAULT_BUDGET) -> int:
    """Exhaustively re-check a reduction; returns the number of
    assignments compared.  Raises on any mismatch."""
    if not runs_equal_all(aut, original, report.reduced_term, budget=budget):
        raise FtaError("reduction changed a run result; this is a bug")
    joint = variables(original) | variables(report.reduced_term)
    return len(aut.signature.constants) ** len(joint)


def cost_report(t: Term, t2: Term) -> tuple[int, int, float]:
    """(original node count, reduced node count, fraction saved)."""
    original = node_count(t)
    reduced = node_count(t2)
    return (original, reduced, 1.0 - reduced / original)


def _proper_prefixes(p: Position):
    for i in range(len(p.indices)):
        yield Position(p.indices[:i])
