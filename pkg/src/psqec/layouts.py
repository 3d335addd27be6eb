"""Qubit placement and adjacency graphs constraining which CNOTs are legal.

Two families ship: rotated planar grids (d*d data qubits at integer
coordinates, (d-1)^2 ancillas interleaved at half-integer coordinates,
with ancilla-ancilla edges so flags can hook onto syndrome ancillas) and
a 43-qubit degree-4 layout hosting the two-logical-qubit code with one
ancilla chain per stabilizer generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

ROLE_DATA = "data"
ROLE_ANCILLA = "ancilla"


@dataclass
class Layout:
    """Qubits (stable integer ids from 1), positions, roles and CNOT edges."""

    name: str
    positions: Dict[int, Tuple[float, float]]
    roles: Dict[int, str]
    edges: Set[FrozenSet[int]]
    # Optional stabilizer overlays: name -> (weight, data support, ancilla chain).
    overlays: Dict[str, Tuple[int, Tuple[int, ...], Tuple[int, ...]]] = field(default_factory=dict)

    def __post_init__(self):
        for e in self.edges:
            a, b = tuple(e)
            if a == b:
                raise ValueError("self-loop edge")
            if a not in self.roles or b not in self.roles:
                raise ValueError("edge endpoint not a listed qubit")

    @property
    def qubits(self) -> List[int]:
        return sorted(self.roles)

    @property
    def data_qubits(self) -> List[int]:
        return sorted(q for q, r in self.roles.items() if r == ROLE_DATA)

    @property
    def ancilla_qubits(self) -> List[int]:
        return sorted(q for q, r in self.roles.items() if r == ROLE_ANCILLA)

    def degree(self, q: int) -> int:
        return sum(1 for e in self.edges if q in e)

    def neighbors(self, q: int) -> List[int]:
        out = []
        for e in self.edges:
            if q in e:
                (other,) = e - {q}
                out.append(other)
        return sorted(out)


def is_adjacent(layout: Layout, a: int, b: int) -> bool:
    """Edge-set membership; unknown ids raise."""
    if a not in layout.roles or b not in layout.roles:
        raise KeyError(f"unknown qubit id in {(a, b)}")
    if a == b:
        return False
    return frozenset((a, b)) in layout.edges


def build_grid_layout(d: int, green_edges: bool = True) -> Layout:
    """Rotated-grid layout for a distance-d patch: d*d data, (d-1)^2 ancillas.

    Data qubit at grid (row r, col c) has id 1 + d*r + c.  Ancillas sit at
    the interior dual positions; grey edges join each ancilla to its four
    diagonal data neighbors, green edges join ancillas one unit apart.
    """
    positions: Dict[int, Tuple[float, float]] = {}
    roles: Dict[int, str] = {}
    edges: Set[FrozenSet[int]] = set()
    for r in range(d):
        for c in range(d):
            q = 1 + d * r + c
            positions[q] = (float(c), float(r))
            roles[q] = ROLE_DATA
    anc0 = d * d + 1
    anc_id: Dict[Tuple[int, int], int] = {}
    for r in range(d - 1):
        for c in range(d - 1):
            q = anc0 + (d - 1) * r + c
            anc_id[(r, c)] = q
            positions[q] = (c + 0.5, r + 0.5)
            roles[q] = ROLE_ANCILLA
            for dr in (0, 1):
                for dc in (0, 1):
                    edges.add(frozenset((q, 1 + d * (r + dr) + (c + dc))))
    if green_edges:
        for (r, c), q in anc_id.items():
            for r2, c2 in ((r + 1, c), (r, c + 1)):
                if (r2, c2) in anc_id:
                    edges.add(frozenset((q, anc_id[(r2, c2)])))
    return Layout(name=f"grid{d}", positions=positions, roles=roles, edges=edges)


def build_rotated_grid() -> Layout:
    """The 25-qubit planar layout: 16 data and 9 ancilla qubits."""
    layout = build_grid_layout(4)
    layout.name = "grid25"
    return layout


def _sycamore_gadgets() -> List[Tuple[str, List[Tuple[int, ...]], List[Tuple[int, ...]]]]:
    # Each gadget: (name, chain of ancilla slots, data ids per slot).
    # Data ids use grid numbering 1..16 (row-major); slot data () marks a
    # syndrome/router ancilla, slots are chained in listed order.
    def block(rows, cols):
        return [1 + 4 * r + c for r in rows for c in cols]

    return [
        ("c1", [(1, 2), (), (5, 6)], block((0, 1), (0, 1))),
        ("c2", [(3, 4), (), (7, 8)], block((0, 1), (2, 3))),
        ("c3", [(9, 10), (), (13, 14)], block((2, 3), (0, 1))),
        ("c4", [(11, 12), (), (15, 16)], block((2, 3), (2, 3))),
        ("row0", [(1, 2), (), (3, 4)], block((0,), range(4))),
        ("rows12", [(5, 6), (7, 8), (), (9, 10), (11, 12)], block((1, 2), range(4))),
        ("cols12", [(2, 6), (10, 14), (), (3, 7), (11, 15)], block(range(4), (1, 2))),
    ]


def build_sycamore_subset() -> Layout:
    """43-qubit degree-4 layout hosting the k=2 code with generators overlaid.

    16 data qubits plus one ancilla chain per stabilizer generator (five
    weight-4 generators with three ancillas each, two weight-8 generators
    with six).  Only the ancillas measuring a weight-8 stabilizer reach
    degree 4; every other qubit has degree at most 3.
    """
    positions: Dict[int, Tuple[float, float]] = {}
    roles: Dict[int, str] = {}
    edges: Set[FrozenSet[int]] = set()
    overlays: Dict[str, Tuple[int, Tuple[int, ...], Tuple[int, ...]]] = {}
    for r in range(4):
        for c in range(4):
            q = 1 + 4 * r + c
            positions[q] = (2.0 * c, 2.0 * r)
            roles[q] = ROLE_DATA

    next_id = 17
    for gi, (name, slots, support) in enumerate(_sycamore_gadgets()):
        chain: List[int] = []
        weight8 = len(support) == 8
        for si, slot in enumerate(slots):
            q = next_id
            next_id += 1
            chain.append(q)
            # Spread ancillas near their data on a diagonal offset per gadget.
            if slot:
                cx = sum(positions[d][0] for d in slot) / len(slot)
                cy = sum(positions[d][1] for d in slot) / len(slot)
            else:
                cx = sum(positions[d][0] for d in support) / len(support)
                cy = sum(positions[d][1] for d in support) / len(support)
            positions[q] = (cx + 0.3 + 0.1 * gi, cy + 0.5 + 0.1 * si)
            roles[q] = ROLE_ANCILLA
            for d in slot:
                edges.add(frozenset((q, d)))
        for a, b in zip(chain, chain[1:]):
            edges.add(frozenset((a, b)))
        if weight8:
            # Pure flag on the syndrome slot keeps double faults detectable.
            syn = chain[len(slots) // 2]
            q = next_id
            next_id += 1
            positions[q] = (positions[syn][0] + 0.4, positions[syn][1] + 0.4)
            roles[q] = ROLE_ANCILLA
            edges.add(frozenset((q, syn)))
            chain.append(q)
        overlays[name] = (len(support), tuple(support), tuple(chain))

    return Layout(name="sycamore43", positions=positions, roles=roles, edges=edges, overlays=overlays)


def save_layout(layout: Layout, path: str) -> None:
    lines = [f"psqec-layout v1 {layout.name}"]
    for q in layout.qubits:
        x, y = layout.positions[q]
        lines.append(f"q {q} {x!r} {y!r} {layout.roles[q]}")
    for e in sorted(tuple(sorted(e)) for e in layout.edges):
        lines.append(f"e {e[0]} {e[1]}")
    for name, (w, support, ancillas) in sorted(layout.overlays.items()):
        sup = ",".join(map(str, support))
        anc = ",".join(map(str, ancillas))
        lines.append(f"o {name} {w} {sup} {anc}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_layout(path: str) -> Layout:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    head = lines[0].split()
    if head[:2] != ["psqec-layout", "v1"]:
        raise ValueError(f"unrecognized layout header: {lines[0]!r}")
    name = head[2] if len(head) > 2 else "layout"
    positions: Dict[int, Tuple[float, float]] = {}
    roles: Dict[int, str] = {}
    edges: Set[FrozenSet[int]] = set()
    overlays: Dict[str, Tuple[int, Tuple[int, ...], Tuple[int, ...]]] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "q":
            q = int(parts[1])
            positions[q] = (float(parts[2]), float(parts[3]))
            roles[q] = parts[4]
        elif parts[0] == "e":
            edges.add(frozenset((int(parts[1]), int(parts[2]))))
        elif parts[0] == "o":
            support = tuple(int(t) for t in parts[3].split(","))
            ancillas = tuple(int(t) for t in parts[4].split(","))
            overlays[parts[1]] = (int(parts[2]), support, ancillas)
        else:
            raise ValueError(f"bad layout line: {ln!r}")
    return Layout(name=name, positions=positions, roles=roles, edges=edges, overlays=overlays)
