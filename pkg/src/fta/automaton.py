"""Complete deterministic bottom-up tree automata.

An automaton has a finite state set, a subset of final states and, for
every symbol of arity n, a transition table defined on all n-tuples of
states (a single-valued total function).  Runs label every position of
a term with a state, starting from the leaves: variable leaves through
an assignment (variable -> constant), constant leaves directly.

File format (line oriented, ``#`` comments)::

    signature: 0/0 1/0 g/1 f1/2 f2/2
    states: q0 q1
    final: q1
    rule: 0 -> q0
    rule: g(q0) -> q1
    rule: f1(q0,q1) -> q0
    ...

Assignments map variable indices to nullary symbols and are written
``x1=0,x2=1`` on the command line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping

from .errors import (
    AutomatonSyntaxError,
    EnumerationBudgetExceeded,
    FtaError,
    UnboundVariableError,
    UnknownSymbolError,
    ValidationError,
)
from .terms import (
    Node,
    Position,
    Signature,
    StateLeaf,
    Term,
    Var,
    render_term,
    substitute,
    variables,
)

#: Default cap on exhaustive searches (assignments or candidate pairs
#: per query).  Exceeding it raises, it never truncates silently.
DEFAULT_BUDGET = 2 ** 20

Assignment = dict[int, str]

_STATE_RE = re.compile(r"[A-Za-z0-9_]+\Z")
_RULE_RE = re.compile(r"([A-Za-z0-9_]+)\s*(?:\((.*)\))?\Z")


@dataclass(frozen=True)
class Automaton:
    """States, final states and the transition tables over a signature.

    ``rules`` maps ``(symbol, argument-state-tuple)`` to the resulting
    state; constants use the empty tuple.  Construction does not check
    completeness: run :func:`validate` (parsing does so automatically).
    """

    signature: Signature
    states: tuple[str, ...]
    final: frozenset[str]
    rules: dict[tuple[str, tuple[str, ...]], str] = field(repr=False)

    def step(self, symbol: str, args: tuple[str, ...]) -> str:
        state = self.rules.get((symbol, args))
        if state is None:
            raise FtaError(f"no transition for {_lhs(symbol, args)}")
        return state


@dataclass(frozen=True)
class RunTrace:
    """The state at every position of a term, for one run."""

    result: str
    per_position: dict[Position, str]


def _lhs(symbol: str, args: tuple[str, ...]) -> str:
    return symbol if not args else f"{symbol}({','.join(args)})"


# ---------------------------------------------------------------------------
# parsing / validation


def parse_automaton(text: str) -> tuple[Signature, Automaton]:
    """Parse the file format above and validate the result.

    Raises :class:`AutomatonSyntaxError` for malformed lines and
    :class:`ValidationError` (carrying the defect list) for incomplete,
    nondeterministic or otherwise ill-formed automata.
    """
    sig_pairs: list[tuple[str, int]] | None = None
    states: list[str] | None = None
    final: list[str] | None = None
    raw_rules: list[tuple[int, str, tuple[str, ...], str]] = []

    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise AutomatonSyntaxError("expected 'key: value'", line_no)
        key, rest = key.strip(), rest.strip()
        if key == "signature":
            if sig_pairs is not None:
                raise AutomatonSyntaxError("duplicate signature line", line_no)
            sig_pairs = []
            for tok in rest.split():
                name, sep2, arity = tok.partition("/")
                if not sep2 or not arity.isdigit():
                    raise AutomatonSyntaxError(f"bad symbol declaration {tok!r}", line_no)
                sig_pairs.append((name, int(arity)))
        elif key == "states":
            if states is not None:
                raise AutomatonSyntaxError("duplicate states line", line_no)
            states = rest.split()
            for q in states:
                if not _STATE_RE.match(q):
                    raise AutomatonSyntaxError(f"bad state name {q!r}", line_no)
        elif key == "final":
            if final is not None:
                raise AutomatonSyntaxError("duplicate final line", line_no)
            final = rest.split()
        elif key == "rule":
            lhs_text, sep2, target = rest.partition("->")
            if not sep2:
                raise AutomatonSyntaxError("rule needs '->'", line_no)
            m = _RULE_RE.match(lhs_text.strip())
            if not m:
                raise AutomatonSyntaxError(f"bad rule left-hand side {lhs_text.strip()!r}", line_no)
            symbol, argtext = m.group(1), m.group(2)
            args = tuple(a.strip() for a in argtext.split(",")) if argtext else ()
            target = target.strip()
            if not target or len(target.split()) != 1:
                raise AutomatonSyntaxError(f"bad rule target {target!r}", line_no)
            raw_rules.append((line_no, symbol, args, target))
        else:
            raise AutomatonSyntaxError(f"unknown directive {key!r}", line_no)

    if sig_pairs is None:
        raise AutomatonSyntaxError("missing 'signature:' line")
    if states is None:
        raise AutomatonSyntaxError("missing 'states:' line")
    if final is None:
        raise AutomatonSyntaxError("missing 'final:' line")

    try:
        sig = Signature(sig_pairs)
    except ValueError as exc:
        raise AutomatonSyntaxError(str(exc)) from None

    defects: list[str] = []
    if len(set(states)) != len(states):
        defects.append("duplicate state declarations")
    state_set = set(states)

    rules: dict[tuple[str, tuple[str, ...]], str] = {}
    for line_no, symbol, args, target in raw_rules:
        arity = sig.arity(symbol)
        if arity is None:
            defects.append(f"unknown symbol in rule: {symbol}")
            continue
        if len(args) != arity:
            defects.append(f"rule arity mismatch: {_lhs(symbol, args)} (arity {arity})")
            continue
        unknown = [q for q in (*args, target) if q not in state_set]
        if unknown:
            defects.append(f"unknown state in rule: {_lhs(symbol, args)} -> {target}")
            continue
        key = (symbol, args)
        if key in rules:
            if rules[key] != target:
                defects.append(f"nondeterministic: {_lhs(symbol, args)} -> {rules[key]} / {target}")
            continue
        rules[key] = target

    aut = Automaton(sig, tuple(states), frozenset(final), rules)
    defects.extend(validate(sig, aut))
    if defects:
        raise ValidationError(defects)
    return sig, aut


def validate(sig: Signature, aut: Automaton) -> list[str]:
    """Defect list; empty iff the automaton is complete and deterministic.

    The rule mapping is single-valued by construction, so duplicates are
    reported where the rules are assembled (see :func:`parse_automaton`).
    """
    defects = []
    for q in aut.final:
        if q not in aut.states:
            defects.append(f"final state not in Q: {q}")
    state_set = set(aut.states)
    for (symbol, args), target in aut.rules.items():
        arity = sig.arity(symbol)
        if arity is None:
            defects.append(f"unknown symbol in rule: {symbol}")
        elif arity != len(args):
            defects.append(f"rule arity mismatch: {_lhs(symbol, args)} (arity {arity})")
        if any(q not in state_set for q in (*args, target)):
            defects.append(f"unknown state in rule: {_lhs(symbol, args)} -> {target}")
    for symbol, arity in sig.symbols:
        for combo in product(aut.states, repeat=arity):
            if (symbol, combo) not in aut.rules:
                defects.append(f"missing: {_lhs(symbol, combo)}")
    return defects


def render_automaton(aut: Automaton) -> str:
    """Canonical file-format text; round-trips with :func:`parse_automaton`."""
    sig = aut.signature
    lines = [
        "signature: " + " ".join(f"{n}/{a}" for n, a in sig.symbols),
        "states: " + " ".join(aut.states),
        "final: " + " ".join(q for q in aut.states if q in aut.final),
    ]
    for symbol, arity in sig.symbols:
        for combo in product(aut.states, repeat=arity):
            target = aut.rules.get((symbol, combo))
            if target is not None:
                lines.append(f"rule: {_lhs(symbol, combo)} -> {target}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# assignments


def check_assignment(sig: Signature, gamma: Mapping[int, str]) -> None:
    """Every assignment image must be a nullary symbol of ``sig``."""
    for v, c in gamma.items():
        arity = sig.arity(c)
        if arity is None:
            raise UnknownSymbolError(f"assignment value {c!r} for x{v} is not a symbol")
        if arity != 0:
            raise UnknownSymbolError(f"assignment value {c!r} for x{v} is not nullary")


def parse_assignment(text: str, sig: Signature) -> Assignment:
    """Parse ``x1=0,x2=1`` (commas or whitespace between bindings)."""
    gamma: Assignment = {}
    for part in re.split(r"[,\s]+", text.strip()):
        if not part:
            continue
        name, sep, value = part.partition("=")
        if not sep:
            raise UnknownSymbolError(f"bad assignment binding {part!r}")
        m = re.match(r"x([1-9][0-9]*)\Z", name.strip())
        if not m:
            raise UnknownSymbolError(f"{name.strip()!r} is not a variable")
        gamma[int(m.group(1))] = value.strip()
    check_assignment(sig, gamma)
    return gamma


def render_assignment(gamma: Mapping[int, str]) -> str:
    if not gamma:
        return "(empty)"
    return " ".join(f"x{v}={gamma[v]}" for v in sorted(gamma))


def enumerate_assignments(var_indices, sig: Signature, *,
                          budget: int = DEFAULT_BUDGET) -> Iterator[Assignment]:
    """All assignments of constants to ``var_indices``, odometer order.

    Variables ascend by index; the highest index cycles fastest and the
    constants cycle in declaration order, so the first assignment maps
    everything to the first constant.  Yields exactly
    ``len(constants) ** len(var_indices)`` assignments; if that exceeds
    ``budget`` the error is raised before any work is done.
    """
    vs = sorted(var_indices)
    consts = sig.constants
    count = len(consts) ** len(vs)
    if count > budget:
        raise EnumerationBudgetExceeded(count, budget)
    for values in product(consts, repeat=len(vs)):
        yield dict(zip(vs, values))


# ---------------------------------------------------------------------------
# runs


def run(aut: Automaton, gamma: Mapping[int, str], t: Term) -> RunTrace:
    """Bottom-up run of ``aut`` over ``t`` under ``gamma``.

    ``gamma`` must bind every variable of ``t``; bindings for other
    variables are ignored (runs only depend on the variables that occur).
    """
    check_assignment(aut.signature, gamma)
    per: dict[Position, str] = {}

    def ev(node: Term, path: tuple[int, ...]) -> str:
        if isinstance(node, Var):
            c = gamma.get(node.index)
            if c is None:
                raise UnboundVariableError(f"x{node.index} is not bound by the assignment")
            state = aut.step(c, ())
        elif isinstance(node, StateLeaf):
            if node.state not in aut.states:
                raise FtaError(f"@{node.state} is not a state of the automaton")
            state = node.state
        else:
            args = tuple(ev(c, path + (i,)) for i, c in enumerate(node.children, 1))
            state = aut.step(node.symbol, args)
        per[Position(path)] = state
        return state

    result = ev(t, ())
    return RunTrace(result=result, per_position=per)


def partial_run(aut: Automaton, gamma: Mapping[int, str], t: Term) -> Term:
    """Reduce ``t`` as far as the (possibly partial) ``gamma`` allows.

    Substitutes the bound variables, then collapses every node whose
    children are all state leaves (constants included) into its state
    leaf, to fixpoint.  A total assignment yields a single state leaf
    equal to the run result; unbound variables block reduction above
    them.  A single bottom-up pass reaches the fixpoint, and the result
    is independent of collapse order.
    """
    check_assignment(aut.signature, gamma)
    grounded = substitute(t, {v: Node(c) for v, c in gamma.items()})

    def collapse(node: Term) -> Term:
        if isinstance(node, (Var, StateLeaf)):
            return node
        kids = tuple(collapse(c) for c in node.children)
        if all(isinstance(k, StateLeaf) for k in kids):
            return StateLeaf(aut.step(node.symbol, tuple(k.state for k in kids)))
        return Node(node.symbol, kids)

    return collapse(grounded)


def accepts(aut: Automaton, t: Term, *, budget: int = DEFAULT_BUDGET) -> Assignment | None:
    """First assignment (in enumeration order) reaching a final state.

    Returns None when no assignment is accepting.  Ground terms need the
    single empty assignment, so acceptance is a plain evaluation.
    """
    for gamma in enumerate_assignments(variables(t), aut.signature, budget=budget):
        if run(aut, gamma, t).result in aut.final:
            return gamma
    return None


def canonical_ground(aut: Automaton) -> dict[str, Term]:
    """A minimal ground representative for every reachable state.

    Representatives have minimal depth; ties are broken by render
    length, then lexicographically.  States no ground term reaches are
    absent.  Every constant's state is present, and the state a frozen
    ground subtree evaluates to always has a representative.
    """
    sig = aut.signature
    chosen: dict[str, tuple[int, Term, str]] = {}  # state -> (depth, term, text)
    layer = 0
    while True:
        candidates: dict[str, tuple[tuple[int, str], Term]] = {}

        def offer(state: str, term: Term):
            if state is None or state in chosen:
                return
            text = render_term(term)
            key = (len(text), text)
            if state not in candidates or key < candidates[state][0]:
                candidates[state] = (key, term)

        if layer == 0:
            for c in sig.constants:
                offer(aut.rules.get((c, ())), Node(c))
        else:
            ready = [q for q in aut.states if q in chosen]
            for symbol, arity in sig.symbols:
                if arity == 0:
                    continue
                for combo in product(ready, repeat=arity):
                    if max(chosen[q][0] for q in combo) != layer - 1:
                        continue
                    term = Node(symbol, tuple(chosen[q][1] for q in combo))
                    offer(aut.rules.get((symbol, combo)), term)
        if not candidates:
            break
        for state, ((_, text), term) in candidates.items():
            chosen[state] = (layer, term, text)
        layer += 1
    return {q: chosen[q][1] for q in aut.states if q in chosen}
