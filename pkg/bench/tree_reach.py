import logging
import os
import random

logger = logging.getLogger("driver")

TREE_REACH_PROGRAM = """\
// reachability over a tree whose edges carry propositional labels;
// a node is reached when the conjunction of labels on its path is satisfiable
.decl edge(4) input
.decl reach(2) output

reach(0, @true()).
reach(Y, F) :- reach(X, Phi), edge(X, Y, V, S), F = @conj(Phi, @lit(V, S)), @is_sat(F) = 1.
"""

# (parent, child, literal variable, literal sign)
Edge = tuple[int, int, int, int]

SMALL_TREE_EDGES: list[Edge] = [(0, 1, 1, 1), (0, 2, 2, 1), (1, 3, 3, 1), (2, 4, 4, 1)]


def generate_tree(depth: int, branching: int, contradiction_rate: float = 0.0, seed: int = 0) -> list[Edge]:
    """Edges of a complete tree, nodes numbered breadth-first from the root 0.

    An edge normally carries the positive literal of its child's id. An edge leaving a non-root
    node instead carries, with probability contradiction_rate, the complement of a literal already
    on the path to its parent, which makes the whole subtree under it unreachable.
    """
    if depth < 1 or branching < 1:
        raise ValueError("depth and branching must be at least 1")
    if not 0.0 <= contradiction_rate <= 1.0:
        raise ValueError("contradiction rate must be within [0, 1]")
    rng = random.Random(seed)
    edges: list[Edge] = []
    paths: dict[int, list[tuple[int, int]]] = {0: []}
    level = [0]
    next_id = 1
    for _ in range(depth):
        next_level: list[int] = []
        for parent in level:
            for _ in range(branching):
                child = next_id
                next_id += 1
                path = paths[parent]
                if path and rng.random() < contradiction_rate:
                    var, sign = rng.choice(path)
                    label = (var, 1 - sign)
                else:
                    label = (child, 1)
                edges.append((parent, child, *label))
                paths[child] = [*path, label]
                next_level.append(child)
        level = next_level
    return edges


def edges_tsv(edges: list[Edge]) -> str:
    return "".join("\t".join(str(x) for x in edge) + "\n" for edge in edges)


def write_instance(out_dir: str, edges: list[Edge]) -> tuple[str, str]:
    """Writes <out>/tree_reach.dl and <out>/facts/edge.facts; returns both paths."""
    facts_dir = os.path.join(out_dir, "facts")
    os.makedirs(facts_dir, exist_ok=True)
    program_path = os.path.join(out_dir, "tree_reach.dl")
    with open(program_path, "w", encoding="utf-8") as f:
        f.write(TREE_REACH_PROGRAM)
    facts_path = os.path.join(facts_dir, "edge.facts")
    with open(facts_path, "w", encoding="utf-8") as f:
        f.write(edges_tsv(edges))
    logger.info(f"wrote {program_path} and {len(edges)} edges to {facts_path}")
    return program_path, facts_path


def bench_gen(kind: str, out_dir: str, depth: int = 2, branching: int = 2, contradiction_rate: float = 0.0,
              seed: int = 0) -> tuple[str, str]:
    match kind:
        case "small-tree":
            edges = list(SMALL_TREE_EDGES)
        case "tree-reach":
            edges = generate_tree(depth, branching, contradiction_rate, seed)
        case _:
            raise ValueError(f"unknown benchmark kind {kind}")
    return write_instance(out_dir, edges)


__all__ = ["TREE_REACH_PROGRAM", "SMALL_TREE_EDGES", "Edge", "generate_tree", "edges_tsv", "write_instance",
           "bench_gen"]
