"""Bit-string conventions and F2 linear algebra on int bitsets.

A length-n assignment string is stored as an int whose most significant of
the n bits is variable x1 (so the string "0101" is 0b0101 with n = 4).
Linear-system variables elsewhere use plain LSB-first bit indices; functions
document which convention they take.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import EmptyInput, EOError


def string_to_mask(s: str) -> tuple[int, int]:
    """Parse a 01-string into (length, mask)."""
    if not s or any(ch not in "01" for ch in s):
        raise EOError(f"bad bit string {s!r}")
    return len(s), int(s, 2)


def mask_to_string(mask: int, n: int) -> str:
    return format(mask, f"0{n}b")


def bit_at(mask: int, pos: int, n: int) -> int:
    """Bit of variable x_{pos+1} (0-based pos, MSB-first)."""
    return (mask >> (n - 1 - pos)) & 1


def set_bit(mask: int, pos: int, n: int, value: int) -> int:
    b = 1 << (n - 1 - pos)
    return (mask | b) if value else (mask & ~b)


def hamming(mask: int) -> int:
    return bin(mask).count("1")


def is_balanced(mask: int, n: int) -> bool:
    return 2 * hamming(mask) == n


def weight_excess(mask: int, n: int) -> int:
    """Number of ones minus number of zeros."""
    return 2 * hamming(mask) - n


def complement(mask: int, n: int) -> int:
    return mask ^ ((1 << n) - 1)


def dot(a: int, b: int) -> int:
    return hamming(a & b) & 1


def rref(rows: Iterable[int], n: int) -> list[int]:
    """Reduced row echelon basis; every pivot bit occurs in one row only."""
    basis: list[int] = []
    for row in rows:
        for b in basis:
            if (row >> (b.bit_length() - 1)) & 1:
                row ^= b
        if row:
            p = row.bit_length() - 1
            basis = [b ^ row if (b >> p) & 1 else b for b in basis]
            basis.append(row)
            basis.sort(reverse=True)
    return basis


def reduce_against(mask: int, basis: Iterable[int]) -> int:
    for b in basis:
        if (mask >> (b.bit_length() - 1)) & 1:
            mask ^= b
    return mask


def nullspace(rows: list[int], n: int) -> list[int]:
    """Basis of {h : dot(h, r) = 0 for every row r}, bit positions shared with rows."""
    basis = rref(rows, n)
    pivots = {b.bit_length() - 1 for b in basis}
    free = [p for p in range(n) if p not in pivots]
    out: list[int] = []
    for f in free:
        h = 1 << f
        for b in basis:
            if (b >> f) & 1:
                h |= 1 << (b.bit_length() - 1)
        out.append(h)
    return out


@dataclass(frozen=True)
class AffineSpace:
    """Affine subspace of F2^n: offset + span(basis).

    Canonical form: basis in reduced row echelon form, offset with all pivot
    bits cleared.  Equality of canonical spaces is field-by-field.
    """

    n: int
    offset: int
    basis: tuple[int, ...]

    @staticmethod
    def make(n: int, offset: int, rows: Iterable[int]) -> AffineSpace:
        basis = rref(rows, n)
        for b in basis:
            p = b.bit_length() - 1
            if offset & (1 << p):
                offset ^= b
        return AffineSpace(n, offset, tuple(basis))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def size(self) -> int:
        return 1 << len(self.basis)

    def contains(self, mask: int) -> bool:
        return reduce_against(mask ^ self.offset, self.basis) == 0

    def elements(self) -> Iterator[int]:
        k = len(self.basis)
        for combo in range(1 << k):
            v = self.offset
            for i in range(k):
                if (combo >> i) & 1:
                    v ^= self.basis[i]
            yield v

    def coordinates(self, mask: int) -> tuple[int, ...]:
        """Coefficients t with mask == offset xor sum(t_i * basis_i)."""
        if not self.contains(mask):
            raise EOError("mask not in affine space")
        rel = mask ^ self.offset
        return tuple((rel >> (b.bit_length() - 1)) & 1 for b in self.basis)

    def parity_checks(self) -> list[int]:
        """Vectors h with: mask in space implies dot(h, mask) == dot(h, offset)."""
        return nullspace(list(self.basis), self.n)


def f2_affine_span(strings: Iterable[int] | Iterable[str], n: int | None = None) -> AffineSpace:
    """Minimal affine space containing the given equal-length strings."""
    masks: list[int] = []
    for s in strings:
        if isinstance(s, str):
            ln, m = string_to_mask(s)
            if n is None:
                n = ln
            elif n != ln:
                raise EOError("strings of unequal length")
            masks.append(m)
        else:
            masks.append(int(s))
    if not masks:
        raise EmptyInput("affine span of an empty set")
    if n is None:
        raise EOError("length required for integer masks")
    base = masks[0]
    return AffineSpace.make(n, base, [m ^ base for m in masks[1:]])


def solve_linear_system(equations: list[tuple[int, int]], nvars: int):
    """Solve a system of XOR equations over LSB-indexed variables.

    Each equation is (mask, bit) meaning xor of the masked variables equals
    bit.  Returns None when inconsistent, else (particular, free_basis) where
    free_basis spans the solution space around the particular solution.
    """
    rows: list[tuple[int, int]] = []
    for mask, bit in equations:
        for rmask, rbit in rows:
            if (mask >> (rmask.bit_length() - 1)) & 1:
                mask ^= rmask
                bit ^= rbit
        if mask:
            p = mask.bit_length() - 1
            rows = [(rm ^ mask, rb ^ bit) if (rm >> p) & 1 else (rm, rb) for rm, rb in rows]
            rows.append((mask, bit))
        elif bit:
            return None
    pivots = {mask.bit_length() - 1 for mask, _ in rows}
    # With free variables at 0, each pivot variable equals its row's bit.
    particular = 0
    for mask, bit in rows:
        if bit:
            particular |= 1 << (mask.bit_length() - 1)
    free = [q for q in range(nvars) if q not in pivots]
    basis: list[int] = []
    for f in free:
        vec = 1 << f
        for mask, _ in rows:
            if (mask >> f) & 1:
                vec |= 1 << (mask.bit_length() - 1)
        basis.append(vec)
    return particular, basis
