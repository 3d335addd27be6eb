import numpy as np
import pytest
from hypothesis import given, strategies as st

from psqec.pauli import PauliString, commutes, propagate_through_cnot


def pauli_strings(n=8):
    mask = (1 << n) - 1
    return st.builds(
        lambda x, z: PauliString(n, x & mask, z & mask),
        st.integers(0, mask),
        st.integers(0, mask),
    )


def test_label_round_trip():
    p = PauliString.from_label("IXYZ")
    assert p.label() == "IXYZ"
    assert p.weight() == 3
    assert p.x_weight() == 2 and p.z_weight() == 2


def test_commutes_basics():
    X = PauliString.from_label("XI")
    Z = PauliString.from_label("ZI")
    assert not commutes(X, Z)
    assert commutes(PauliString.from_label("XX"), PauliString.from_label("ZZ"))
    ident = PauliString(2)
    for label in ("XI", "IZ", "YY", "XZ"):
        assert commutes(PauliString.from_label(label), ident)


def test_commutes_length_mismatch():
    with pytest.raises(ValueError):
        commutes(PauliString(2), PauliString(3))


def test_cnot_textbook_rules():
    xc = PauliString.from_label("XI")
    assert propagate_through_cnot(xc, 0, 1).label() == "XX"
    zt = PauliString.from_label("IZ")
    assert propagate_through_cnot(zt, 0, 1).label() == "ZZ"
    # Y on both qubits keeps its bit pattern under x=(1,1),z=(1,1) -> x=(1,0),z=(0,1)
    yy = PauliString.from_label("YY")
    out = propagate_through_cnot(yy, 0, 1)
    assert (out.x, out.z) == (0b01, 0b10)


def _unitary_conjugation_oracle():
    """Conjugate all 16 two-qubit Paulis by the CNOT unitary and read back supports."""
    I = np.eye(2)
    X = np.array([[0, 1], [1, 0]], dtype=complex)
    Z = np.array([[1, 0], [0, -1]], dtype=complex)
    Y = 1j * X @ Z
    mats = {"I": I, "X": X, "Y": Y, "Z": Z}
    # Qubit 0 = control: |0><0| I + |1><1| X on target.
    P0 = np.array([[1, 0], [0, 0]])
    P1 = np.array([[0, 0], [0, 1]])
    cnot = np.kron(P0, I) + np.kron(P1, X)
    table = {}
    for a in "IXYZ":
        for b in "IXYZ":
            conj = cnot @ np.kron(mats[a], mats[b]) @ cnot.conj().T
            for a2 in "IXYZ":
                for b2 in "IXYZ":
                    ref = np.kron(mats[a2], mats[b2])
                    for phase in (1, -1, 1j, -1j):
                        if np.allclose(conj, phase * ref):
                            table[a + b] = a2 + b2
    return table


def test_cnot_matches_unitary_oracle():
    oracle = _unitary_conjugation_oracle()
    assert len(oracle) == 16
    for label, want in oracle.items():
        got = propagate_through_cnot(PauliString.from_label(label), 0, 1)
        assert got.label() == want, f"{label} -> {got.label()}, oracle says {want}"


@given(pauli_strings(), pauli_strings(), pauli_strings())
def test_symplectic_product_bilinear(a, b, c):
    # sp(a, bc) = sp(a, b) xor sp(a, c)
    assert commutes(a, b * c) == (commutes(a, b) == commutes(a, c))


@given(pauli_strings())
def test_cnot_involution(p):
    assert propagate_through_cnot(propagate_through_cnot(p, 2, 5), 2, 5) == p


@given(pauli_strings(), pauli_strings())
def test_cnot_preserves_commutation(a, b):
    fa = propagate_through_cnot(a, 1, 6)
    fb = propagate_through_cnot(b, 1, 6)
    assert commutes(a, b) == commutes(fa, fb)


@given(pauli_strings())
def test_multiplication_self_inverse(p):
    assert (p * p).is_identity()


def test_index_errors():
    p = PauliString(4)
    with pytest.raises(ValueError):
        propagate_through_cnot(p, 1, 1)
    with pytest.raises(ValueError):
        propagate_through_cnot(p, 0, 4)
