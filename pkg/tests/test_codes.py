import pytest

from psqec import gf2
from psqec.codes import (
    CodeValidationError,
    build_css_code,
    build_rm16_code,
    build_surface_code,
    css_quantum_distance,
    find_fixing_vectors,
    load_code,
    punctured_hamming_code,
    rm14_basis,
    save_code,
    validate_code,
)
from psqec.pauli import PauliString, commutes


def brute_force_distance(code, max_weight=6):
    """Independent oracle: scan all errors up to max_weight for undetected logicals.

    Enumerates supports by weight and checks dual membership per sector via
    explicit inner products, then span membership for the stabilizer group.
    """
    from itertools import combinations

    n = code.n
    for w in range(1, max_weight + 1):
        for support in combinations(range(n), w):
            v = 0
            for q in support:
                v |= 1 << q
            for gens, others in ((code.x_supports, code.z_supports),
                                 (code.z_supports, code.x_supports)):
                if all(gf2.dot_bits(v, o) == 0 for o in others):
                    if not gf2.in_span(list(gens), n, v):
                        return w
    return max_weight + 1


def test_surface_code_parameters():
    for d in (3, 4, 5):
        code = build_surface_code(d)
        params = validate_code(code)
        assert (params.n, params.k, params.d_measured) == (d * d, 1, d)


def test_surface_d4_stabilizer_census():
    code = build_surface_code(4)
    weights = sorted(p.weight() for p in code.x_stabs + code.z_stabs)
    assert len(weights) == 15
    assert weights.count(4) == 9
    assert weights.count(2) == 6


def test_surface_distance_against_oracle():
    for d in (3, 4, 5):
        code = build_surface_code(d)
        assert brute_force_distance(code, d + 1) == d


def test_rm16_k6_parameters_and_oracle():
    code = build_rm16_code(6)
    params = validate_code(code)
    assert params.label() == "[[16,6,4]]"
    # Brute force over the dual code words (dimension 11).
    null_basis = gf2.nullspace(code.z_supports, 16)
    assert len(null_basis) == 11
    best = 99
    for v in gf2.span_iter(null_basis):
        if v and not gf2.in_span(code.x_supports, 16, v):
            best = min(best, v.bit_count())
    assert best == 4
    assert brute_force_distance(code, 5) == 4


def test_rm16_k6_no_low_weight_stabilizers():
    code = build_rm16_code(6)
    assert min(p.weight() for p in code.x_stabs + code.z_stabs) == 8


def test_fixing_vector_search_deterministic():
    vecs = find_fixing_vectors(2)
    assert vecs == [0b0000000000001111, 0b0000000000110011]


def test_rm16_k4_k2_parameters():
    for k in (4, 2):
        code = build_rm16_code(k)
        params = validate_code(code)
        assert params.label() == f"[[16,{k},4]]"


def test_k2_stabilizer_weights_and_corners():
    code = build_rm16_code(2)
    assert set(p.weight() for p in code.x_stabs) <= {4, 8}
    group = set(code.stab_group("X"))
    corners = [
        {0, 1, 4, 5},
        {2, 3, 6, 7},
        {8, 9, 12, 13},
        {10, 11, 14, 15},
    ]
    for corner in corners:
        bits = sum(1 << q for q in corner)
        assert bits in group, f"corner {sorted(corner)} missing from stabilizer group"


def test_self_dual_supports():
    for k in (2, 4, 6):
        code = build_rm16_code(k)
        assert sorted(code.x_supports) == sorted(code.z_supports)


def test_gauge_fixing_nests_groups():
    g6 = set(build_rm16_code(6).stab_group("X"))
    g4 = set(build_rm16_code(4).stab_group("X"))
    g2 = set(build_rm16_code(2).stab_group("X"))
    assert g6 < g4 < g2


def test_weight_one_errors_all_detected():
    for code in (build_rm16_code(2), build_rm16_code(4), build_rm16_code(6),
                 build_surface_code(3), build_surface_code(4), build_surface_code(5)):
        for q in range(code.n):
            x_syn = any(gf2.dot_bits(1 << q, s) for s in code.z_supports)
            z_syn = any(gf2.dot_bits(1 << q, s) for s in code.x_supports)
            assert x_syn and z_syn, f"{code.name}: weight-1 error on {q} undetected"


def test_punctured_hamming():
    code = punctured_hamming_code(0)
    params = validate_code(code)
    assert params.label() == "[[15,7,3]]"
    # puncturing at any coordinate gives the same parameters
    for coord in (5, 15):
        params = validate_code(punctured_hamming_code(coord))
        assert params.label() == "[[15,7,3]]"


def test_injected_weight3_logical_flags_mismatch():
    code = build_rm16_code(6)
    bad = PauliString.from_support(16, "X", [0, 1, 2])
    code.logical_x[0] = bad
    with pytest.raises(CodeValidationError):
        validate_code(code)


def test_bad_fixing_vector_rejected():
    odd = 0b0111  # odd weight
    with pytest.raises(CodeValidationError):
        build_rm16_code(4, [odd])
    not_orthogonal = 0b11  # weight 2, fails dual membership
    with pytest.raises(CodeValidationError):
        build_rm16_code(4, [not_orthogonal])
    already_in = rm14_basis()[0]
    with pytest.raises(CodeValidationError):
        build_rm16_code(4, [already_in])


def test_code_file_round_trip(tmp_path):
    for code in (build_rm16_code(2), build_surface_code(3)):
        path = tmp_path / f"{code.name}.txt"
        save_code(code, str(path))
        back = load_code(str(path))
        assert back.n == code.n and back.k == code.k
        assert [p.x for p in back.x_stabs] == code.x_supports
        assert [p.z for p in back.z_stabs] == code.z_supports
        assert [p.x for p in back.logical_x] == [p.x for p in code.logical_x]
        validate_code(back)
