from typing import Dict, Tuple

import graphviz as gv  # type: ignore
import numpy as np

from .calculus import range_check
from .polynomials import random_poly
from .spaces import basis
from .utils.printing import operator, subscript

# (source, target, operator) for the first order operators between the two monogenic pieces of 𝓗_k
Edges = (('Mk', 'Mk', 'Rk'), ('uMk1', 'Mk', 'Tk'), ('Mk', 'uMk1', 'Tk_star'), ('uMk1', 'uMk1', 'Qk'))


class OperatorDiagram:
    def __init__(self, samples: int = 2, xdeg: int = 2, seed: int = 0) -> None:
        self.samples = samples
        self.xdeg = xdeg
        self.seed = seed

    def make_node_label(self, kind: str, k: int) -> str:
        return f'𝓜{subscript(k)}' if kind == 'Mk' else f'u𝓜{subscript(k - 1)}'

    def annotations(self, m: int, k: int) -> Dict[str, bool]:
        """Whether each operator lands in its target space on a few random test functions."""
        rng = np.random.default_rng([self.seed, m, k])
        out = {}
        for source, _, name in Edges:
            elements = basis(m, k, source).elements[:self.samples]
            functions = [b * random_poly(m, {'x': range(1, self.xdeg + 1)}, rng) for b in elements]
            out[name] = all(range_check(m, k, f, name).ok for f in functions)
        return out

    def diagram_to_gv(self, m: int, k: int) -> gv.Digraph:
        checks = self.annotations(m, k)
        graph = gv.Digraph()
        graph.attr(label=f'm={m}, k={k}')
        for kind in ('Mk', 'uMk1'):
            graph.node(kind, label=self.make_node_label(kind, k), _attributes={'shape': 'rectangle', 'color': 'gray'})
        for source, target, name in Edges:
            ok = checks[name]
            graph.edge(source, target, f'{operator(name, k)} {"✓" if ok else "✗"}',
                       _attributes={'color': 'black' if ok else 'red'})
        return graph

    def __call__(self, m: int, k: int, view: bool = True, **kwargs) -> gv.Digraph:
        graph = self.diagram_to_gv(m, k)
        if view:
            graph.render(view=True, **kwargs)
        return graph


def edge_labels(graph: gv.Digraph) -> Tuple[str, ...]:
    return tuple(line.strip() for line in graph.body if '->' in line)


diagram = OperatorDiagram()
