import itertools

import numpy as np
import pytest

from xyz2dec import _gf2
from xyz2dec.codes import (
    LIFT_REPRESENTATIVES,
    build_xyz2,
    build_yzzy,
    lift,
    logical_class,
    syndrome,
)
from xyz2dec.errors import ContractViolation, UsageError
from xyz2dec.pauli import PauliString, commutes, multiply, weight

DISTANCES = (2, 3, 5, 7)


def _all_commute(gens):
    for a, b in itertools.combinations(gens, 2):
        if not commutes(a, b):
            return False
    return True


@pytest.mark.parametrize("d", DISTANCES)
def test_yzzy_structure(d):
    code = build_yzzy(d)
    assert code.n == d * d
    assert code.num_generators == d * d - 1
    assert _all_commute(code.generators)
    for g in code.generators:
        assert weight(g) in (2, 4)
    for logical in (code.logical_x, code.logical_y, code.logical_z):
        assert all(commutes(logical, g) for g in code.generators)
    assert not commutes(code.logical_x, code.logical_z)
    assert code.logical_y == multiply(code.logical_x, code.logical_z)
    # one encoded qubit: generators are independent
    rows = np.array([np.concatenate([g.x, g.z]) for g in code.generators], dtype=np.uint8)
    assert _gf2.rank(rows) == code.num_generators


@pytest.mark.parametrize("d", DISTANCES)
def test_xyz2_structure(d):
    code, cmap = build_xyz2(d)
    assert code.n == 2 * d * d
    assert cmap.num_links == d * d
    assert code.num_generators == 2 * d * d - 1
    # links first, each an XX pair on (2u, 2u+1)
    for u in range(d * d):
        link = code.generators[u]
        assert weight(link) == 2
        assert link.x[2 * u] == 1 and link.x[2 * u + 1] == 1
        assert not link.z.any()
    assert _all_commute(code.generators)
    for logical in (code.logical_x, code.logical_y, code.logical_z):
        assert all(commutes(logical, g) for g in code.generators)
    assert not commutes(code.logical_x, code.logical_z)
    rows = np.array([np.concatenate([g.x, g.z]) for g in code.generators], dtype=np.uint8)
    assert _gf2.rank(rows) == code.num_generators


@pytest.mark.parametrize("d", DISTANCES)
def test_xyz2_logical_representatives(d):
    code, _ = build_xyz2(d)
    # canonical choices: all-Z for the Z logical, X on d top qubits for X
    assert code.logical_z.z.all() and not code.logical_z.x.any()
    assert weight(code.logical_z) == 2 * d * d
    if d % 2 == 1:
        # a pure-X string of even weight commutes with all-Z, so the
        # weight-d X representative only exists at odd distance
        assert weight(code.logical_x) == d
        assert not code.logical_x.z.any()


def test_lift_single_site_representatives():
    _, cmap = build_xyz2(3)
    for label, rep in LIFT_REPRESENTATIVES.items():
        upper = PauliString.single(9, 4, label)
        low = lift(upper, cmap)
        assert low.to_label()[8:10] == rep
        assert set(low.to_label()[:8]) <= {"I"} and set(low.to_label()[10:]) <= {"I"}


def test_lift_is_a_homomorphism_modulo_links():
    upper_code = build_yzzy(3)
    _, cmap = build_xyz2(3)
    rng = np.random.default_rng(7)
    for _ in range(50):
        a = PauliString(9, rng.integers(0, 2, 9, dtype=np.uint8),
                        rng.integers(0, 2, 9, dtype=np.uint8))
        b = PauliString(9, rng.integers(0, 2, 9, dtype=np.uint8),
                        rng.integers(0, 2, 9, dtype=np.uint8))
        # lift(X) lift(Z) = ZZ.XI = YZ while lift(XZ) = lift(Y) = ZY, so the
        # two sides may differ, but only by a product of XX link stabilizers.
        diff = multiply(lift(multiply(a, b), cmap),
                        multiply(lift(a, cmap), lift(b, cmap)))
        assert not diff.z.any()
        assert (diff.x[0::2] == diff.x[1::2]).all()
    # lifted upper generators commute with every link
    code, _ = build_xyz2(3)
    for g in upper_code.generators:
        low = lift(g, cmap)
        assert all(commutes(low, code.generators[u]) for u in range(9))


def _pure_distance(code, pauli: str) -> int:
    """Minimum weight of a nontrivial logical made purely of ``pauli``.

    Enumerates the full GF(2) null space of the relevant generator block,
    so this is an independent exhaustive oracle (usable for small d only).
    """
    mat = code.gen_z if pauli == "X" else code.gen_x
    basis = np.array(_gf2.null_space(mat), dtype=np.uint8)
    k = len(basis)
    assert 0 < k <= 16
    bits = ((np.arange(1, 2 ** k)[:, None] >> np.arange(k)) & 1).astype(np.uint8)
    combos = bits @ basis % 2
    lx, lz = code.logical_x, code.logical_z
    if pauli == "X":
        # symplectic product of a pure-X candidate with L is L.z . x
        nontrivial = ((combos @ lx.z) | (combos @ lz.z)) % 2 == 1
    else:
        nontrivial = ((combos @ lx.x) | (combos @ lz.x)) % 2 == 1
    weights = combos.sum(axis=1)
    return int(weights[nontrivial].min())


@pytest.mark.parametrize("d", (2, 3))
def test_pure_distances_exhaustive(d):
    code, _ = build_xyz2(d)
    assert _pure_distance(code, "X") == d
    assert _pure_distance(code, "Z") == 2 * d * d


def test_syndrome_and_class():
    code, _ = build_xyz2(3)
    for g in code.generators:
        assert not syndrome(code, g).any()
        assert logical_class(code, g) == "I"
    assert logical_class(code, PauliString.identity(18)) == "I"
    assert logical_class(code, code.logical_x) == "X"
    assert logical_class(code, code.logical_y) == "Y"
    assert logical_class(code, code.logical_z) == "Z"
    # multiplying by a stabilizer never changes the class
    combo = multiply(code.logical_x, code.generators[5])
    assert logical_class(code, combo) == "X"
    # single-qubit error syndromes are nonzero and indexed consistently
    err = PauliString.single(18, 0, "Z")
    syn = syndrome(code, err)
    assert syn[0] == 1  # anticommutes with its own XX link
    with pytest.raises(ContractViolation):
        logical_class(code, err)


def test_invalid_inputs():
    with pytest.raises(UsageError):
        build_yzzy(1)
    with pytest.raises(UsageError):
        build_xyz2(0)
    code, _ = build_xyz2(2)
    with pytest.raises(UsageError):
        syndrome(code, PauliString.identity(5))
