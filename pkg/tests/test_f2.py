import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eoexact.errors import EmptyInput
from eoexact.f2 import (
    AffineSpace,
    bit_at,
    complement,
    dot,
    f2_affine_span,
    hamming,
    is_balanced,
    mask_to_string,
    nullspace,
    rref,
    solve_linear_system,
    string_to_mask,
    weight_excess,
)


def test_string_conventions():
    n, m = string_to_mask("0101")
    assert (n, m) == (4, 0b0101)
    assert mask_to_string(m, n) == "0101"
    # x1 is the most significant bit
    assert bit_at(m, 0, n) == 0
    assert bit_at(m, 1, n) == 1
    assert complement(m, n) == 0b1010
    assert is_balanced(m, n)
    assert weight_excess(0b1110, 4) == 2


def test_span_singleton():
    sp = f2_affine_span(["0101"])
    assert sp.offset == 0b0101 and sp.basis == ()
    assert sp.size() == 1
    assert sp.contains(0b0101) and not sp.contains(0b1010)


def test_span_pair():
    sp = f2_affine_span(["0011", "1100"])
    assert sp.offset == 0b0011
    assert sp.basis == (0b1111,)
    assert sorted(sp.elements()) == [0b0011, 0b1100]


def test_span_triple():
    sp = f2_affine_span(["1100", "1010", "1001"])
    assert sp.size() == 4
    assert sorted(sp.elements()) == sorted([0b1100, 0b1010, 0b1001, 0b1111])


def test_span_closure_by_enumeration():
    strings = [0b0011, 0b0101, 0b1010]
    sp = f2_affine_span(strings, n=4)
    elems = set(sp.elements())
    for a in elems:
        for b in elems:
            for c in elems:
                assert a ^ b ^ c in elems
    for s in strings:
        assert s in elems


def test_span_empty_input():
    with pytest.raises(EmptyInput):
        f2_affine_span([])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 255), min_size=1, max_size=6))
def test_span_idempotent_and_minimal(masks):
    sp = f2_affine_span(masks, n=8)
    again = f2_affine_span(list(sp.elements()), n=8)
    assert again == sp
    # every element is an odd xor of inputs: check containment both ways
    for m in masks:
        assert sp.contains(m)


def test_coordinates_roundtrip():
    sp = f2_affine_span([0b1100, 0b1010, 0b1001], n=4)
    for el in sp.elements():
        t = sp.coordinates(el)
        v = sp.offset
        for ti, b in zip(t, sp.basis):
            if ti:
                v ^= b
        assert v == el


def test_parity_checks():
    sp = f2_affine_span([0b0011, 0b1100], n=4)
    checks = sp.parity_checks()
    assert len(checks) == 3
    for h in checks:
        want = dot(h, sp.offset)
        for el in sp.elements():
            assert dot(h, el) == want


def test_rref_unique_pivots():
    basis = rref([0b1111, 0b0111, 0b0011], 4)
    pivots = [b.bit_length() - 1 for b in basis]
    assert len(set(pivots)) == len(basis)
    for b in basis:
        for other in basis:
            if other is not b:
                assert not (other >> (b.bit_length() - 1)) & 1


def test_nullspace_orthogonal():
    rows = [0b110010, 0b001110]
    for h in nullspace(rows, 6):
        for r in rows:
            assert dot(h, r) == 0
    assert len(nullspace(rows, 6)) == 4


def test_solve_linear_system():
    # x0 ^ x1 = 1, x1 ^ x2 = 0
    sol = solve_linear_system([(0b011, 1), (0b110, 0)], 3)
    assert sol is not None
    particular, basis = sol
    def check(v):
        assert hamming(v & 0b011) % 2 == 1
        assert hamming(v & 0b110) % 2 == 0
    check(particular)
    for b in basis:
        check(particular ^ b)
    assert len(basis) == 1
    # inconsistent
    assert solve_linear_system([(0b01, 0), (0b01, 1)], 2) is None
    # all free
    particular, basis = solve_linear_system([], 3)
    assert particular == 0 and len(basis) == 3


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 63), st.integers(0, 1)), max_size=8))
def test_solve_linear_system_random(eqs):
    out = solve_linear_system(eqs, 6)
    truth = [v for v in range(64)
             if all(hamming(v & m) % 2 == b for m, b in eqs)]
    if out is None:
        assert truth == []
        return
    particular, basis = out
    got = set()
    for combo in range(1 << len(basis)):
        v = particular
        for i, bb in enumerate(basis):
            if (combo >> i) & 1:
                v ^= bb
        got.add(v)
    assert got == set(truth)
