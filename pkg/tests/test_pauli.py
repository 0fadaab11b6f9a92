import numpy as np
import pytest
from hypothesis import given, strategies as st

from xyz2dec.errors import UsageError
from xyz2dec.pauli import PauliString, commutes, multiply, weight


def pauli_strings(n):
    bits = st.lists(st.integers(0, 3), min_size=n, max_size=n)
    return bits.map(lambda v: PauliString(
        n,
        np.array([b & 1 for b in v], dtype=np.uint8),
        np.array([b >> 1 for b in v], dtype=np.uint8),
    ))


def test_label_round_trip():
    for lbl in ("I", "X", "Y", "Z", "XIZY", "XYZXYZ"):
        assert PauliString.from_label(lbl).to_label() == lbl


def test_multiply_single_qubit():
    x = PauliString.from_label("X")
    z = PauliString.from_label("Z")
    assert multiply(x, z).to_label() == "Y"


def test_multiply_hexagon_by_link():
    hexagon = PauliString.from_label("XYZXYZ")
    link = PauliString.from_label("XXIIII")
    assert multiply(hexagon, link).to_label() == "IZZXYZ"


def test_self_inverse():
    p = PauliString.from_label("XYZZYX")
    assert multiply(p, p) == PauliString.identity(6)


def test_commutes_examples():
    assert not commutes(PauliString.from_label("X"), PauliString.from_label("Z"))
    assert commutes(PauliString.from_label("XX"), PauliString.from_label("ZZ"))
    assert commutes(PauliString.from_label("XYZ"), PauliString.identity(3))


def test_weight():
    assert weight(PauliString.identity(5)) == 0
    assert weight(PauliString.from_label("XIZY")) == 3
    assert weight(PauliString.from_label("Z" * 18)) == 18


def test_length_mismatch_rejected():
    with pytest.raises(UsageError):
        multiply(PauliString.identity(2), PauliString.identity(3))
    with pytest.raises(UsageError):
        commutes(PauliString.identity(2), PauliString.identity(3))


@given(pauli_strings(5), pauli_strings(5))
def test_commutes_symmetric(a, b):
    assert commutes(a, b) == commutes(b, a)


@given(pauli_strings(4), pauli_strings(4), pauli_strings(4))
def test_multiply_associative(a, b, c):
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@given(pauli_strings(4), pauli_strings(4), pauli_strings(4))
def test_commutation_is_bilinear(a, b, c):
    assert commutes(a, multiply(b, c)) == (commutes(a, b) == commutes(a, c))
