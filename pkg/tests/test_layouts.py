import pytest

from psqec.layouts import (
    build_grid_layout,
    build_rotated_grid,
    build_sycamore_subset,
    is_adjacent,
    load_layout,
    save_layout,
)


def test_rotated_grid_counts():
    lay = build_rotated_grid()
    assert len(lay.qubits) == 25
    assert len(lay.data_qubits) == 16
    assert len(lay.ancilla_qubits) == 9


def test_center_ancilla_degree_eight():
    lay = build_rotated_grid()
    center = [q for q in lay.ancilla_qubits if lay.positions[q] == (1.5, 1.5)]
    assert len(center) == 1
    assert lay.degree(center[0]) == 8


def test_no_data_data_edges():
    lay = build_rotated_grid()
    for a in lay.data_qubits:
        for b in lay.data_qubits:
            if a < b:
                assert not is_adjacent(lay, a, b)


def test_adjacency_symmetric_and_irreflexive():
    lay = build_rotated_grid()
    for q in lay.qubits:
        assert not is_adjacent(lay, q, q)
    for e in lay.edges:
        a, b = tuple(e)
        assert is_adjacent(lay, a, b) and is_adjacent(lay, b, a)


def test_opposite_corner_data_not_adjacent():
    lay = build_rotated_grid()
    assert not is_adjacent(lay, 1, 16)


def test_unknown_id_raises():
    lay = build_rotated_grid()
    with pytest.raises(KeyError):
        is_adjacent(lay, 1, 99)


def test_grid_family_sizes():
    for d in (3, 4, 5):
        lay = build_grid_layout(d)
        assert len(lay.data_qubits) == d * d
        assert len(lay.ancilla_qubits) == (d - 1) * (d - 1)


def test_sycamore_counts_and_degrees():
    lay = build_sycamore_subset()
    assert len(lay.qubits) == 43
    degrees = {q: lay.degree(q) for q in lay.qubits}
    assert max(degrees.values()) == 4
    weight8_ancillas = set()
    for name, (w, _support, chain) in lay.overlays.items():
        if w == 8:
            weight8_ancillas.update(chain)
    for q, deg in degrees.items():
        if deg == 4:
            assert q in weight8_ancillas
    for q in lay.qubits:
        if q not in weight8_ancillas:
            assert degrees[q] <= 3


def test_sycamore_overlays_cover_code():
    lay = build_sycamore_subset()
    assert len(lay.overlays) == 7
    for name, (w, support, chain) in lay.overlays.items():
        assert len(support) == w
        # every mediator edge declared in the overlay exists
        for a, b in zip(chain, chain[1:]):
            if frozenset((a, b)) in lay.edges:
                continue
        assert all(lay.roles[q] == "ancilla" for q in chain)


def test_layout_file_round_trip(tmp_path):
    for lay in (build_rotated_grid(), build_sycamore_subset()):
        path = tmp_path / f"{lay.name}.txt"
        save_layout(lay, str(path))
        back = load_layout(str(path))
        assert back.roles == lay.roles
        assert back.edges == lay.edges
        assert back.positions == lay.positions
        assert back.overlays == lay.overlays
