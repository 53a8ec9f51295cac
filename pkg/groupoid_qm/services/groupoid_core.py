"""Construction, validation and structure queries for finite groupoids.

Transitions are stored units first (in event order), then non-units in a
constructor-defined order, so indices are reproducible across runs and files.
"""

from __future__ import annotations

import logging
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from groupoid_qm.domain.models import FiniteGroupoid, GroupoidSpec, Transition
from groupoid_qm.domain.reports import ValidationReport, Violation
from groupoid_qm.errors import ComponentError, InvalidSpecError

logger = logging.getLogger(__name__)

Key = Tuple[int, ...]


def _require_positive(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise InvalidSpecError(f"{name} must be a positive integer, got {value!r}", field=name)
    return int(value)


def _assemble(
    events: Sequence[str],
    keys: Sequence[Key],
    labels: Sequence[str],
    endpoints: Callable[[Key], Tuple[int, int]],
    compose_keys: Callable[[Key, Key], Optional[Key]],
    inverse_key: Callable[[Key], Key],
    kind: str,
    spec: Optional[GroupoidSpec],
) -> FiniteGroupoid:
    """Tabulate a groupoid whose transitions are identified by hashable keys.

    The first len(events) keys must be the units in event order.
    """
    index: Dict[Hashable, int] = {key: i for i, key in enumerate(keys)}
    transitions = []
    for key, label in zip(keys, labels):
        source, target = endpoints(key)
        transitions.append(Transition(source=source, target=target, label=label))

    n = len(keys)
    table = np.full((n, n), -1, dtype=np.int64)
    for b, beta in enumerate(keys):
        for a, alpha in enumerate(keys):
            result = compose_keys(beta, alpha)
            if result is not None:
                table[b, a] = index[result]

    groupoid = FiniteGroupoid(
        events=tuple(events),
        transitions=tuple(transitions),
        unit_of=np.arange(len(events)),
        inverse_of=np.array([index[inverse_key(key)] for key in keys], dtype=np.int64),
        compose_table=table,
        kind=kind,
        spec=spec,
    )
    logger.debug(
        "Built %s groupoid: %d events, %d transitions",
        kind,
        groupoid.n_events,
        groupoid.n_transitions,
    )
    return groupoid


def _pair_keys(members: Sequence[int]) -> List[Key]:
    """Non-unit pairs of a component: (hi, lo) then (lo, hi) for lo < hi."""
    keys: List[Key] = []
    ordered = sorted(members)
    for i, lo in enumerate(ordered):
        for hi in ordered[i + 1:]:
            keys.append((hi, lo))
            keys.append((lo, hi))
    return keys


def _pair_label(key: Key) -> str:
    return "(" + ",".join(str(part) for part in key) + ")"


def _compose_pairs(beta: Key, alpha: Key) -> Optional[Key]:
    # (a,b)∘(b,c) = (a,c)
    if beta[1] != alpha[0]:
        return None
    return (beta[0], alpha[1])


def _union_of_pairs(n: int, components: Sequence[Sequence[int]], kind: str, spec: GroupoidSpec) -> FiniteGroupoid:
    keys: List[Key] = [(a, a) for a in range(n)]
    for members in components:
        keys.extend(_pair_keys(members))
    return _assemble(
        events=[str(a) for a in range(n)],
        keys=keys,
        labels=[_pair_label(key) for key in keys],
        endpoints=lambda key: (key[1], key[0]),
        compose_keys=_compose_pairs,
        inverse_key=lambda key: (key[1], key[0]),
        kind=kind,
        spec=spec,
    )


def build_pair_groupoid(n: int) -> FiniteGroupoid:
    """Pair groupoid on n events: transitions (a, b): b → a.

    Raises:
        InvalidSpecError: If n is not a positive integer.
    """
    n = _require_positive(n, "n")
    return _union_of_pairs(n, [list(range(n))], "pair", GroupoidSpec(kind="pair", n=n))


def _graph_components(n: int, edges: Iterable[Sequence[int]]) -> List[List[int]]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        root_a, root_b = find(a), find(b)
        if root_a != root_b:
            parent[max(root_a, root_b)] = min(root_a, root_b)

    grouped: Dict[int, List[int]] = {}
    for event in range(n):
        grouped.setdefault(find(event), []).append(event)
    return sorted(grouped.values(), key=lambda members: members[0])


def build_from_graph(n: int, edges: Sequence[Sequence[int]]) -> FiniteGroupoid:
    """Groupoid generated by a graph: the union of pair groupoids over its components.

    Raises:
        InvalidSpecError: If n is not positive or an edge endpoint is out of range.
    """
    n = _require_positive(n, "n")
    checked: List[Tuple[int, int]] = []
    for position, edge in enumerate(edges):
        field = f"edges[{position}]"
        if not isinstance(edge, (list, tuple)) or len(edge) != 2:
            raise InvalidSpecError(f"Edge must be a pair of integers, got {edge!r}", field=field)
        a, b = _table_int(edge[0], field), _table_int(edge[1], field)
        if not (0 <= a < n and 0 <= b < n):
            raise InvalidSpecError(
                f"Edge {edge!r} has an endpoint outside 0..{n - 1}", field=f"edges[{position}]"
            )
        checked.append((a, b))
    components = _graph_components(n, checked)
    spec = GroupoidSpec(kind="graph", n=n, edges=tuple(checked))
    return _union_of_pairs(n, components, "graph", spec)


def build_pair_times_group(n: int, m: int) -> FiniteGroupoid:
    """Pair groupoid times the cyclic group Z_m.

    (a, b, g)∘(b, c, h) = (a, c, g + h mod m); the isotropy group at every
    event is Z_m.
    """
    n = _require_positive(n, "n")
    m = _require_positive(m, "m")
    keys: List[Key] = [(a, a, 0) for a in range(n)]
    keys.extend((a, a, g) for a in range(n) for g in range(1, m))
    for hi, lo in _pair_keys(range(n))[::2]:
        keys.extend((hi, lo, g) for g in range(m))
        keys.extend((lo, hi, g) for g in range(m))

    def compose_keys(beta: Key, alpha: Key) -> Optional[Key]:
        if beta[1] != alpha[0]:
            return None
        return (beta[0], alpha[1], (beta[2] + alpha[2]) % m)

    return _assemble(
        events=[str(a) for a in range(n)],
        keys=keys,
        labels=[_pair_label(key) for key in keys],
        endpoints=lambda key: (key[1], key[0]),
        compose_keys=compose_keys,
        inverse_key=lambda key: (key[1], key[0], (-key[2]) % m),
        kind="pair_times_group",
        spec=GroupoidSpec(kind="pair_times_group", n=n, m=m),
    )


def _table_int(value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InvalidSpecError(f"Expected an integer, got {value!r}", field=field)
    return int(value)


def build_from_tables(tables: Dict[str, Any]) -> FiniteGroupoid:
    """Explicit groupoid from full tables.

    Expected keys: events (labels), transitions ({source, target, label}),
    units, inverse, compose ([beta, alpha, result] triples). Structural
    problems raise InvalidSpecError; axiom violations are left to `validate`.
    """
    if not isinstance(tables, dict):
        raise InvalidSpecError("tables must be an object", field="tables")
    for name in ("events", "transitions", "units", "inverse", "compose"):
        if not isinstance(tables.get(name), list):
            raise InvalidSpecError(f"tables.{name} must be a list", field=f"tables.{name}")

    transitions = []
    for position, record in enumerate(tables["transitions"]):
        field = f"tables.transitions[{position}]"
        if not isinstance(record, dict):
            raise InvalidSpecError("Transition must be an object", field=field)
        transitions.append(
            Transition(
                source=_table_int(record.get("source"), f"{field}.source"),
                target=_table_int(record.get("target"), f"{field}.target"),
                label=str(record.get("label", position)),
            )
        )

    n = len(transitions)
    table = np.full((n, n), -1, dtype=np.int64)
    for position, triple in enumerate(tables["compose"]):
        field = f"tables.compose[{position}]"
        if not isinstance(triple, list) or len(triple) != 3:
            raise InvalidSpecError("Compose entry must be [beta, alpha, result]", field=field)
        beta, alpha, result = (_table_int(value, field) for value in triple)
        if not (0 <= beta < n and 0 <= alpha < n):
            raise InvalidSpecError("Compose entry refers to a missing transition", field=field)
        table[beta, alpha] = result

    units = [_table_int(value, f"tables.units[{i}]") for i, value in enumerate(tables["units"])]
    inverse = [_table_int(value, f"tables.inverse[{i}]") for i, value in enumerate(tables["inverse"])]
    groupoid = FiniteGroupoid(
        events=tuple(str(label) for label in tables["events"]),
        transitions=tuple(transitions),
        unit_of=np.array(units, dtype=np.int64),
        inverse_of=np.array(inverse, dtype=np.int64),
        compose_table=table,
        kind="explicit",
        spec=GroupoidSpec(kind="explicit", tables=tables),
    )
    logger.debug("Loaded explicit groupoid: %d events, %d transitions", groupoid.n_events, n)
    return groupoid


def build_groupoid(spec: GroupoidSpec) -> FiniteGroupoid:
    """
    Build the groupoid described by a spec.

    Raises:
        InvalidSpecError: If the parameters do not fit the declared kind.
    """
    if spec.kind == "pair":
        return build_pair_groupoid(spec.n)
    if spec.kind == "graph":
        return build_from_graph(spec.n, spec.edges)
    if spec.kind == "pair_times_group":
        return build_pair_times_group(spec.n, spec.m)
    if spec.kind == "explicit":
        if spec.tables is None:
            raise InvalidSpecError("explicit groupoids need tables", field="tables")
        return build_from_tables(spec.tables)
    raise InvalidSpecError(f"Unknown groupoid kind: {spec.kind!r}", field="kind")


def compose(g: FiniteGroupoid, beta: int, alpha: int) -> Optional[int]:
    """β∘α, or None when s(β) ≠ t(α)."""
    result = g.compose_table[g.check_transition(beta), g.check_transition(alpha)]
    return None if result < 0 else int(result)


def with_compose_entry(g: FiniteGroupoid, beta: int, alpha: int, result: int) -> FiniteGroupoid:
    """Copy of g with one composition cell overwritten (use -1 to undefine it)."""
    table = g.compose_table.copy()
    table[g.check_transition(beta), g.check_transition(alpha)] = result
    return FiniteGroupoid(
        events=g.events,
        transitions=g.transitions,
        unit_of=g.unit_of,
        inverse_of=g.inverse_of,
        compose_table=table,
        kind="explicit",
    )


def _typing_violations(g: FiniteGroupoid) -> List[Violation]:
    table = g.compose_table
    expected = g.sources[:, None] == g.targets[None, :]
    defined = table >= 0
    violations: List[Violation] = []

    for b, a in zip(*np.nonzero(defined & ~expected)):
        violations.append(
            Violation("typing", (int(b), int(a)), f"{b}∘{a} is defined although s({b}) ≠ t({a})")
        )
    for b, a in zip(*np.nonzero(~defined & expected)):
        violations.append(
            Violation("typing", (int(b), int(a)), f"{b}∘{a} is undefined although s({b}) = t({a})")
        )

    beta, alpha = np.nonzero(defined & expected)
    result = table[beta, alpha]
    wrong = (g.sources[result] != g.sources[alpha]) | (g.targets[result] != g.targets[beta])
    for b, a, r in zip(beta[wrong], alpha[wrong], result[wrong]):
        violations.append(
            Violation(
                "typing",
                (int(b), int(a)),
                f"{b}∘{a} = {r} does not run from s({a}) to t({b})",
            )
        )
    return violations


def _associativity_violations(g: FiniteGroupoid) -> List[Violation]:
    table = g.compose_table
    violations: List[Violation] = []
    defined = table >= 0
    for c in range(g.n_transitions):
        left_factor = table[c]
        beta, alpha = np.nonzero((left_factor[:, None] >= 0) & defined)
        if beta.size == 0:
            continue
        left = table[c, table[beta, alpha]]
        right = table[left_factor[beta], alpha]
        bad = left != right
        for b, a, lhs, rhs in zip(beta[bad], alpha[bad], left[bad], right[bad]):
            violations.append(
                Violation(
                    "associativity",
                    (c, int(b), int(a)),
                    f"{c}∘({b}∘{a}) = {_show(lhs)} but ({c}∘{b})∘{a} = {_show(rhs)}",
                )
            )
    return violations


def _show(index: int) -> str:
    return "undefined" if index < 0 else str(int(index))


def _unit_violations(g: FiniteGroupoid) -> List[Violation]:
    table = g.compose_table
    violations: List[Violation] = []
    for a, unit in enumerate(g.unit_of):
        if g.sources[unit] != a or g.targets[unit] != a:
            violations.append(Violation("unit", (int(unit),), f"unit of event {a} is not a loop at {a}"))
    for alpha in range(g.n_transitions):
        right_unit = g.unit_of[g.sources[alpha]]
        left_unit = g.unit_of[g.targets[alpha]]
        if table[alpha, right_unit] != alpha:
            violations.append(
                Violation("unit", (alpha, int(right_unit)), f"{alpha}∘1_s({alpha}) ≠ {alpha}")
            )
        if table[left_unit, alpha] != alpha:
            violations.append(
                Violation("unit", (int(left_unit), alpha), f"1_t({alpha})∘{alpha} ≠ {alpha}")
            )
    return violations


def _inverse_violations(g: FiniteGroupoid) -> List[Violation]:
    table = g.compose_table
    violations: List[Violation] = []
    for alpha, inverse in enumerate(g.inverse_of):
        if table[alpha, inverse] != g.unit_of[g.targets[alpha]]:
            violations.append(
                Violation("inverse", (alpha, int(inverse)), f"{alpha}∘{inverse} ≠ 1_t({alpha})")
            )
        if table[inverse, alpha] != g.unit_of[g.sources[alpha]]:
            violations.append(
                Violation("inverse", (int(inverse), alpha), f"{inverse}∘{alpha} ≠ 1_s({alpha})")
            )
    return violations


def validate(g: FiniteGroupoid) -> ValidationReport:
    """Exhaustively check typing, associativity, units and inverses."""
    report = ValidationReport(n_events=g.n_events, n_transitions=g.n_transitions)
    report.violations.extend(_typing_violations(g))
    report.violations.extend(_associativity_violations(g))
    report.violations.extend(_unit_violations(g))
    report.violations.extend(_inverse_violations(g))
    if report.violations:
        logger.info("Groupoid validation found %d violations", len(report.violations))
    return report


def isotropy_group(g: FiniteGroupoid, a: int) -> List[int]:
    a = g.check_event(a)
    return np.nonzero((g.sources == a) & (g.targets == a))[0].tolist()


def sprays(g: FiniteGroupoid, a: int) -> Tuple[List[int], List[int]]:
    """(G₊(a), G₋(a)): transitions starting at a, transitions ending at a."""
    a = g.check_event(a)
    return np.nonzero(g.sources == a)[0].tolist(), np.nonzero(g.targets == a)[0].tolist()


def hom_set(g: FiniteGroupoid, a: int, a_prime: int) -> List[int]:
    """G(a, a′): transitions a → a′."""
    a, a_prime = g.check_event(a), g.check_event(a_prime)
    return np.nonzero((g.sources == a) & (g.targets == a_prime))[0].tolist()


def orbit(g: FiniteGroupoid, a: int) -> List[int]:
    a = g.check_event(a)
    return sorted(set(g.targets[g.sources == a].tolist()) | {a})


def connected_components(g: FiniteGroupoid) -> List[List[int]]:
    seen: set = set()
    components = []
    for a in range(g.n_events):
        if a not in seen:
            members = orbit(g, a)
            seen.update(members)
            components.append(members)
    return components


def require_connected(g: FiniteGroupoid) -> None:
    """
    Raises:
        ComponentError: Naming the events outside the component of event 0.
    """
    reachable = set(orbit(g, 0))
    outside = [a for a in range(g.n_events) if a not in reachable]
    if outside:
        raise ComponentError(
            f"Groupoid is not connected; events {outside} lie outside the component of event 0",
            events=outside,
        )


def restrict_to_component(g: FiniteGroupoid, a: int) -> Tuple[FiniteGroupoid, List[int], List[int]]:
    """Subgroupoid over orbit(a).

    Returns:
        (subgroupoid, original event ids, original transition ids)
    """
    events = orbit(g, a)
    event_map = {old: new for new, old in enumerate(events)}
    # units first, in event order
    units = [int(g.unit_of[old]) for old in events]
    unit_set = set(units)
    kept = units + [
        alpha
        for alpha in range(g.n_transitions)
        if int(g.sources[alpha]) in event_map and alpha not in unit_set
    ]
    transition_map = {old: new for new, old in enumerate(kept)}

    transitions = [
        Transition(
            source=event_map[int(g.sources[old])],
            target=event_map[int(g.targets[old])],
            label=g.transitions[old].label,
        )
        for old in kept
    ]
    sub_table = g.compose_table[np.ix_(kept, kept)]
    remapped = np.full(sub_table.shape, -1, dtype=np.int64)
    for (i, j), value in np.ndenumerate(sub_table):
        if value >= 0:
            remapped[i, j] = transition_map.get(int(value), -1)

    subgroupoid = FiniteGroupoid(
        events=tuple(g.events[old] for old in events),
        transitions=tuple(transitions),
        unit_of=np.arange(len(events)),
        inverse_of=np.array([transition_map[int(g.inverse_of[old])] for old in kept], dtype=np.int64),
        compose_table=remapped,
        kind="explicit",
    )
    return subgroupoid, events, kept


__all__ = [
    "build_pair_groupoid",
    "build_from_graph",
    "build_pair_times_group",
    "build_from_tables",
    "build_groupoid",
    "compose",
    "with_compose_entry",
    "validate",
    "isotropy_group",
    "sprays",
    "hom_set",
    "orbit",
    "connected_components",
    "require_connected",
    "restrict_to_component",
]
