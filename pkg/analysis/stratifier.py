import networkx as nx

from datalog_types import *


class Stratum:

    def __init__(self, *, index: int, preds: list[str], rules: list[Rule], recursive_preds: set[str]):
        self.index = index
        # declaration order
        self.preds = preds
        self.rules = rules
        self.recursive_preds = recursive_preds

    def is_recursive(self, rule: Rule) -> bool:
        return any(not negated and pred in self.recursive_preds for pred, negated in rule.body_preds())

    def __repr__(self):
        return f"Stratum({self.index}, preds={self.preds}, recursive={sorted(self.recursive_preds)}, rules={len(self.rules)})"


def dependency_graph(p: Program) -> nx.DiGraph:
    """Edges run from body predicate to head predicate; `negated` is set if any occurrence is negated."""
    graph = nx.DiGraph()
    for name in p.declarations:
        graph.add_node(name)
    for rule in p.rules:
        head = rule.head.pred
        for pred, negated in rule.body_preds():
            if graph.has_edge(pred, head):
                graph.edges[pred, head]["negated"] |= negated
            else:
                graph.add_edge(pred, head, negated=negated)
    return graph


def stratify(p: Program) -> list[Stratum]:
    graph = dependency_graph(p)
    condensed = nx.condensation(graph)
    mapping: dict[str, int] = condensed.graph["mapping"]

    for rule in p.rules:
        head = rule.head.pred
        for pred, negated in rule.body_preds():
            if negated and mapping[pred] == mapping[head]:
                path: list[str] = nx.shortest_path(graph, head, pred)
                cycle = [*path, head]
                raise StratificationError(
                    f"negation occurs within recursion: !{pred} in rule #{rule.id} ({rule}), "
                    f"cycle {' -> '.join(cycle)}",
                    (pred, head), cycle,
                )

    def first_declared(component: int) -> int:
        return min(p.declarations[pred].index for pred in condensed.nodes[component]["members"])

    rules_by_head: dict[str, list[Rule]] = {}
    for rule in p.rules:
        rules_by_head.setdefault(rule.head.pred, []).append(rule)

    strata: list[Stratum] = []
    for component in nx.lexicographical_topological_sort(condensed, key=first_declared):
        members: set[str] = condensed.nodes[component]["members"]
        preds = sorted(members, key=lambda name: p.declarations[name].index)
        rules = sorted((r for pred in preds for r in rules_by_head.get(pred, [])), key=lambda r: r.id)
        if not rules:
            continue
        if len(members) > 1:
            recursive_preds = set(members)
        else:
            recursive_preds = {pred for pred in members if graph.has_edge(pred, pred)}
        strata.append(Stratum(index=len(strata), preds=preds, rules=rules, recursive_preds=recursive_preds))
    return strata
