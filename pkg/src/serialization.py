"""
Text formats for graphs, partitions, host plans and embeddings.

Edge list:      "n m" header, then "u v" rows with u < v
Colored list:   "n m", "c <count>", then "u v color" rows
Partition:      "t <nominal> t* <effective> eps <p/q> d <cap>", then "W<i>: v v ..."
Host plan:      "d <size> eps <p/q>", "V<i>: ..." rows, "K:" and one clique per line
Embedding:      "n <count>", then "h g" rows; rainbow rows add the colors of
                the edges to smaller-index neighbours ("-" when none)
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

from src.embed import Embedding
from src.graph_core import ColoredGraph, Graph, normalize_edge
from src.host_prep import HostPlan
from src.partition import LayeredPartition

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _lines(path: PathLike) -> Iterator[Tuple[int, str]]:
    with open(path, 'r', encoding='utf-8') as handle:
        for number, raw in enumerate(handle, start=1):
            line = raw.strip()
            if line:
                yield number, line


def _ints(line: str, number: int, count: Optional[int] = None) -> List[int]:
    try:
        values = [int(tok) for tok in line.split()]
    except ValueError:
        raise ValueError(f"line {number}: expected integers, got {line!r}")
    if count is not None and len(values) != count:
        raise ValueError(f"line {number}: expected {count} integers, got {line!r}")
    return values


def _write(path: PathLike, rows: List[str]) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as handle:
        handle.write('\n'.join(rows) + '\n')


# edge lists

def write_edge_list(graph: Union[Graph, ColoredGraph], path: PathLike) -> None:
    if isinstance(graph, ColoredGraph):
        rows = [f"{graph.base.n} {graph.base.num_edges}", f"c {graph.color_count}"]
        rows += [f"{u} {v} {graph.colors[(u, v)]}" for u, v in graph.base.sorted_edges()]
    else:
        rows = [f"{graph.n} {graph.num_edges}"]
        rows += [f"{u} {v}" for u, v in graph.sorted_edges()]
    _write(path, rows)


def _read_edges(path: PathLike) -> Tuple[int, Optional[int], List[Tuple[int, int, Optional[int]]]]:
    lines = list(_lines(path))
    if not lines:
        raise ValueError(f"{path}: empty file")
    number, header = lines[0]
    n, m = _ints(header, number, 2)
    colors = None
    body = lines[1:]
    if body and body[0][1].startswith('c '):
        colors = int(body[0][1].split()[1])
        body = body[1:]
    if len(body) != m:
        raise ValueError(f"{path}: header says {m} edges, found {len(body)}")

    rows = []
    width = 2 if colors is None else 3
    for number, line in body:
        values = _ints(line, number, width)
        u, v = values[0], values[1]
        if not 0 <= u < v < n:
            raise ValueError(f"line {number}: need 0 <= u < v < {n}, got {line!r}")
        col = values[2] if colors is not None else None
        if col is not None and not 1 <= col <= colors:
            raise ValueError(f"line {number}: color {col} outside [1..{colors}]")
        rows.append((u, v, col))
    return n, colors, rows


def read_edge_list(path: PathLike) -> Graph:
    n, _, rows = _read_edges(path)
    return Graph(n, ((u, v) for u, v, _ in rows))


def read_colored_edge_list(path: PathLike) -> ColoredGraph:
    n, colors, rows = _read_edges(path)
    if colors is None:
        raise ValueError(f"{path}: missing 'c <count>' header")
    graph = Graph(n, ((u, v) for u, v, _ in rows))
    return ColoredGraph(graph, colors, {(u, v): col for u, v, col in rows})


# partitions

def write_partition(partition: LayeredPartition, path: PathLike) -> None:
    rows = [
        f"t {partition.nominal_depth} t* {partition.effective_depth} "
        f"eps {partition.epsilon.numerator}/{partition.epsilon.denominator} d {partition.back_degree_cap}"
    ]
    for i, layer in enumerate(partition.layers):
        rows.append(f"W{i}: " + ' '.join(str(v) for v in layer) if layer else f"W{i}:")
    _write(path, rows)


def read_partition(path: PathLike, construction: str = 'general') -> LayeredPartition:
    lines = list(_lines(path))
    if not lines:
        raise ValueError(f"{path}: empty file")
    number, header = lines[0]
    tokens = header.split()
    if len(tokens) != 8 or tokens[0::2] != ['t', 't*', 'eps', 'd']:
        raise ValueError(f"line {number}: malformed partition header {header!r}")
    nominal, effective, cap = int(tokens[1]), int(tokens[3]), int(tokens[7])
    epsilon = Fraction(tokens[5])

    layers = []
    for i, (number, line) in enumerate(lines[1:]):
        label, _, rest = line.partition(':')
        if label != f"W{i}":
            raise ValueError(f"line {number}: expected W{i}, got {label!r}")
        layers.append(tuple(_ints(rest, number)))
    if len(layers) != effective + 2:
        raise ValueError(f"{path}: t*={effective} needs {effective + 2} layers, found {len(layers)}")
    return LayeredPartition(tuple(layers), epsilon, cap, nominal, construction)


# host plans

def write_host_plan(plan: HostPlan, path: PathLike) -> None:
    rows = [f"d {plan.clique_size} eps {plan.epsilon.numerator}/{plan.epsilon.denominator}"]
    for i, part in enumerate(plan.slices):
        rows.append(f"V{i}: " + ' '.join(str(v) for v in part) if part else f"V{i}:")
    rows.append("K:")
    rows.extend(' '.join(str(v) for v in clique) for clique in plan.cliques)
    _write(path, rows)


def read_host_plan(path: PathLike) -> HostPlan:
    lines = list(_lines(path))
    if not lines:
        raise ValueError(f"{path}: empty file")
    number, header = lines[0]
    tokens = header.split()
    if len(tokens) != 4 or tokens[0] != 'd' or tokens[2] != 'eps':
        raise ValueError(f"line {number}: malformed plan header {header!r}")
    size, epsilon = int(tokens[1]), Fraction(tokens[3])

    slices: List[Tuple[int, ...]] = []
    cliques: List[Tuple[int, ...]] = []
    in_cliques = False
    for number, line in lines[1:]:
        if line == 'K:':
            in_cliques = True
            continue
        if in_cliques:
            clique = tuple(_ints(line, number))
            if len(clique) != size:
                raise ValueError(f"line {number}: clique of size {len(clique)}, expected {size}")
            cliques.append(clique)
            continue
        label, _, rest = line.partition(':')
        if label != f"V{len(slices)}":
            raise ValueError(f"line {number}: expected V{len(slices)}, got {label!r}")
        slices.append(tuple(_ints(rest, number)))
    if not slices:
        raise ValueError(f"{path}: no slices")
    return HostPlan(tuple(slices), tuple(cliques), size, epsilon)


# embeddings

def write_embedding(embedding: Embedding, path: PathLike, target: Optional[Graph] = None) -> None:
    """
    With `target`, each row also lists the colors of the edges from h to its
    smaller-index neighbours (the rainbow variant).
    """
    mapping = embedding.mapping
    rows = [f"n {len(mapping)}"]
    for h in sorted(mapping):
        row = f"{h} {mapping[h]}"
        if target is not None:
            cols = [str(embedding.colors[normalize_edge(u, h)]) for u in target.adjacency(h) if u < h]
            row += ' ' + (','.join(cols) if cols else '-')
        rows.append(row)
    _write(path, rows)


def read_embedding(path: PathLike, target: Optional[Graph] = None) -> Embedding:
    lines = list(_lines(path))
    if not lines:
        raise ValueError(f"{path}: empty file")
    number, header = lines[0]
    tokens = header.split()
    if len(tokens) != 2 or tokens[0] != 'n':
        raise ValueError(f"line {number}: malformed embedding header {header!r}")
    count = int(tokens[1])
    if len(lines) - 1 != count:
        raise ValueError(f"{path}: header says {count} rows, found {len(lines) - 1}")

    embedding = Embedding()
    pairs = []
    for number, line in lines[1:]:
        parts = line.split()
        h, g = _ints(' '.join(parts[:2]), number, 2)
        pairs.append((h, g))
        if target is None:
            continue
        if len(parts) != 3:
            raise ValueError(f"line {number}: missing color column")
        earlier = [u for u in target.adjacency(h) if u < h]
        cols = [] if parts[2] == '-' else [int(c) for c in parts[2].split(',')]
        if len(cols) != len(earlier):
            raise ValueError(f"line {number}: {len(cols)} colors for {len(earlier)} earlier neighbours")
        for u, col in zip(earlier, cols):
            embedding.colors[normalize_edge(u, h)] = col
    embedding.assign(0, pairs)
    return embedding
