"""Signatures (arity-k value tables) and the single-signature gadget calculus.

Index convention: the table of an arity-k signature has 2^k entries; entry
``idx`` is the value on the string whose bit for variable x_{p+1} is
``(idx >> (k-1-p)) & 1`` (MSB-first, matching the rendered 01-string).
Port arguments in this module are 0-based.  Zero signatures are legal values
throughout; callers test for triviality where they care.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import f2
from .errors import (
    ArityMismatch,
    CapExceeded,
    EOError,
    LiteralSyntaxError,
    NotEO,
    PortError,
    ZeroSignature,
)
from .values import ONE, ZERO, ExactValue, FieldMode, GAUSS_MODE, as_value, parse_value, render_value

ARITY_CAP = 16


@dataclass(frozen=True)
class Signature:
    """Total table from {0,1}^arity to exact values."""

    arity: int
    values: tuple[ExactValue, ...]
    name: str | None = None

    def __post_init__(self):
        if self.arity < 0 or self.arity > ARITY_CAP:
            raise CapExceeded(f"arity {self.arity} outside [0, {ARITY_CAP}]")
        if len(self.values) != 1 << self.arity:
            raise ArityMismatch(
                f"table has {len(self.values)} entries, arity {self.arity} needs {1 << self.arity}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Signature):
            return NotImplemented
        return self.arity == other.arity and self.values == other.values

    def __hash__(self) -> int:
        return hash((self.arity, self.values))

    # -- access ----------------------------------------------------------

    def value(self, mask: int) -> ExactValue:
        return self.values[mask]

    def value_at(self, string: str) -> ExactValue:
        n, mask = f2.string_to_mask(string)
        if n != self.arity:
            raise ArityMismatch(f"string length {n} vs arity {self.arity}")
        return self.values[mask]

    def support(self) -> tuple[int, ...]:
        return tuple(m for m, v in enumerate(self.values) if not v.is_zero())

    def support_strings(self) -> tuple[str, ...]:
        return tuple(f2.mask_to_string(m, self.arity) for m in self.support())

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)

    def is_eo(self) -> bool:
        """True when every support string is balanced (needs even arity unless zero)."""
        return all(f2.is_balanced(m, self.arity) for m in self.support())

    def scaled(self, c) -> Signature:
        c = as_value(c)
        return Signature(self.arity, tuple(c * v for v in self.values))

    def map_values(self, fn: Callable[[ExactValue], ExactValue]) -> Signature:
        return Signature(self.arity, tuple(fn(v) for v in self.values))

    def with_name(self, name: str | None) -> Signature:
        return Signature(self.arity, self.values, name)

    def __repr__(self) -> str:
        label = self.name or "sig"
        entries = ", ".join(
            f"{f2.mask_to_string(m, self.arity)}={render_value(self.values[m])}"
            for m in self.support())
        return f"<{label}/{self.arity}: {entries or '0'}>"


def from_entries(arity: int, entries: dict[str, object] | dict[int, object],
                 name: str | None = None) -> Signature:
    """Build a signature from a sparse {string-or-mask: value} mapping."""
    table = [ZERO] * (1 << arity)
    for key, val in entries.items():
        if isinstance(key, str):
            n, mask = f2.string_to_mask(key)
            if n != arity:
                raise ArityMismatch(f"key {key!r} vs arity {arity}")
        else:
            mask = int(key)
        table[mask] = as_value(val)
    return Signature(arity, tuple(table), name)


@dataclass(frozen=True)
class BinaryDiseq:
    """Binary signature supported on {01, 10}: value a at 01, b at 10."""

    a: ExactValue
    b: ExactValue

    def as_signature(self, name: str | None = None) -> Signature:
        return Signature(2, (ZERO, self.a, self.b, ZERO), name)

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def normalized(self) -> tuple["BinaryDiseq", ExactValue, bool]:
        """Scale (and possibly swap slots) so the first slot holds 1.

        Returns (normal form, scale, swapped): the original equals
        scale * (normal form), slots swapped first when |b| > |a|.
        By convention a tie keeps the 01-slot as the unit.
        """
        from .values import compare_abs
        a, b = self.a, self.b
        swapped = False
        if a.is_zero() and b.is_zero():
            raise ZeroSignature("cannot normalise the zero binary signature")
        if a.is_zero() or (not b.is_zero() and compare_abs(a, b) < 0):
            a, b = b, a
            swapped = True
        return BinaryDiseq(ONE, b / a), a, swapped

    @property
    def parameter(self) -> ExactValue:
        """r with the normal form != (1, r)."""
        return self.normalized()[0].b


def as_binary_diseq(sig: Signature) -> BinaryDiseq | None:
    """View an arity-2 signature as a generalized binary disequality, if it is one."""
    if sig.arity != 2:
        return None
    if not sig.values[0].is_zero() or not sig.values[3].is_zero():
        return None
    return BinaryDiseq(sig.values[1], sig.values[2])


# -- named constructors -------------------------------------------------------


def equality(arity: int) -> Signature:
    table = [ZERO] * (1 << arity)
    table[0] = ONE
    table[(1 << arity) - 1] = ONE
    return Signature(arity, tuple(table), f"eq{arity}")


def diseq(arity: int) -> Signature:
    """Disequality of even arity 2d: 1 when x_1..x_d all differ from x_{d+1}..x_{2d}."""
    if arity % 2 != 0 or arity < 2:
        raise ArityMismatch("disequality needs positive even arity")
    d = arity // 2
    hi = ((1 << d) - 1) << d
    lo = (1 << d) - 1
    return from_entries(arity, {hi: ONE, lo: ONE}, f"neq{arity}")


def gen_diseq(alpha: str, a, b, name: str | None = None) -> Signature:
    """Signature with support {alpha, complement(alpha)}, values a and b."""
    n, mask = f2.string_to_mask(alpha)
    return from_entries(n, {mask: as_value(a), f2.complement(mask, n): as_value(b)},
                        name or f"neq{n}ab")


def symmetric(entries: Sequence[object]) -> Signature:
    """Symmetric signature [f_0, ..., f_r]: value f_i on every weight-i string."""
    arity = len(entries) - 1
    if arity < 0:
        raise ArityMismatch("symmetric signature needs at least one entry")
    vals = [as_value(e) for e in entries]
    table = [vals[f2.hamming(m)] for m in range(1 << arity)]
    return Signature(arity, tuple(table))


def delta0() -> Signature:
    return symmetric([1, 0]).with_name("delta0")


def delta1() -> Signature:
    return symmetric([0, 1]).with_name("delta1")


def pin_signature() -> Signature:
    """The binary pin: value 1 at 01 only (fixes its ports to 0 and 1)."""
    return BinaryDiseq(ONE, ZERO).as_signature("delta")


def neq2() -> Signature:
    return diseq(2).with_name("neq2")


def build_named(kind: str, *args, eo: bool = False, **kwargs) -> Signature:
    """Dispatch constructor for the standard signatures."""
    if kind == "equality":
        return equality(*args)
    if kind == "diseq":
        return diseq(*args)
    if kind == "gen_diseq":
        alpha = args[0]
        if eo:
            n, mask = f2.string_to_mask(alpha)
            if not f2.is_balanced(mask, n):
                raise NotEO(f"support string {alpha} is not balanced")
        return gen_diseq(*args, **kwargs)
    if kind == "symmetric":
        return symmetric(*args)
    if kind == "delta0":
        return delta0()
    if kind == "delta1":
        return delta1()
    if kind == "pin":
        return pin_signature()
    raise EOError(f"unknown signature kind {kind!r}")


# -- calculus -----------------------------------------------------------------


def tensor(f: Signature, g: Signature) -> Signature:
    """Tensor product; f's variables come first."""
    arity = f.arity + g.arity
    table = [ZERO] * (1 << arity)
    for mf, vf in enumerate(f.values):
        if vf.is_zero():
            continue
        base = mf << g.arity
        for mg, vg in enumerate(g.values):
            if not vg.is_zero():
                table[base | mg] = vf * vg
    return Signature(arity, tuple(table))


def _check_ports(f: Signature, i: int, j: int) -> None:
    if f.arity < 2:
        raise PortError("operation needs arity at least 2")
    if i == j or not (0 <= i < f.arity) or not (0 <= j < f.arity):
        raise PortError(f"bad port pair ({i}, {j}) for arity {f.arity}")


def remaining_ports(arity: int, removed: Iterable[int]) -> tuple[int, ...]:
    removed = set(removed)
    return tuple(p for p in range(arity) if p not in removed)


def _restrict(f: Signature, i: int, j: int, bi: int, bj: int) -> Signature:
    """Table over the remaining ports with x_i, x_j fixed."""
    k = f.arity
    rest = remaining_ports(k, (i, j))
    table = [ZERO] * (1 << (k - 2))
    for idx in range(1 << (k - 2)):
        mask = 0
        for pos, port in enumerate(rest):
            if (idx >> (len(rest) - 1 - pos)) & 1:
                mask |= 1 << (k - 1 - port)
        if bi:
            mask |= 1 << (k - 1 - i)
        if bj:
            mask |= 1 << (k - 1 - j)
        table[idx] = f.values[mask]
    return Signature(k - 2, tuple(table))


def self_loop(f: Signature, i: int, j: int, w: BinaryDiseq | None = None,
              orientation: str = "ij") -> Signature:
    """Close ports i and j through a weighted binary disequality.

    Orientation "ij" yields a*f[x_i=0,x_j=1] + b*f[x_i=1,x_j=0]; "ji" swaps
    the two weights.  Both wiring directions of the weight vertex are
    reachable this way.
    """
    _check_ports(f, i, j)
    if w is None:
        w = BinaryDiseq(ONE, ONE)
    if orientation not in ("ij", "ji"):
        raise PortError(f"bad orientation {orientation!r}")
    a, b = (w.a, w.b) if orientation == "ij" else (w.b, w.a)
    low = _restrict(f, i, j, 0, 1)
    high = _restrict(f, i, j, 1, 0)
    table = tuple(a * lo + b * hi for lo, hi in zip(low.values, high.values))
    return Signature(f.arity - 2, table)


def pin_pair(f: Signature, i: int, j: int, pattern: str) -> Signature:
    """Fix ports (i, j) to the given two-bit pattern ("01" or "10")."""
    _check_ports(f, i, j)
    if pattern not in ("01", "10"):
        raise PortError(f"bad pin pattern {pattern!r}")
    return _restrict(f, i, j, int(pattern[0]), int(pattern[1]))


def dual(f: Signature) -> Signature:
    """Value table with every input string complemented."""
    k = f.arity
    full = (1 << k) - 1
    return Signature(k, tuple(f.values[m ^ full] for m in range(1 << k)))


def permute(f: Signature, perm: Sequence[int]) -> Signature:
    """Reorder ports: new variable p reads old variable perm[p] (0-based)."""
    k = f.arity
    if sorted(perm) != list(range(k)):
        raise PortError(f"bad permutation {perm!r}")
    table = [ZERO] * (1 << k)
    for new_mask in range(1 << k):
        old_mask = 0
        for new_pos in range(k):
            if (new_mask >> (k - 1 - new_pos)) & 1:
                old_mask |= 1 << (k - 1 - perm[new_pos])
        table[new_mask] = f.values[old_mask]
    return Signature(k, tuple(table))


def signature_matrix(f: Signature, split: int) -> list[list[ExactValue]]:
    """2^split x 2^(k-split) matrix; rows indexed by x_1..x_split."""
    k = f.arity
    if not 0 <= split <= k:
        raise PortError(f"bad split {split} for arity {k}")
    cols = 1 << (k - split)
    return [[f.values[(r << (k - split)) | c] for c in range(cols)]
            for r in range(1 << split)]


# -- signature files ----------------------------------------------------------


def parse_signature_blocks(text: str, mode: FieldMode = GAUSS_MODE) -> list[Signature]:
    """Parse the line-based signature format.

    Blocks start with ``signature <name> arity <k>``; each following
    ``<bitstring> <value-literal>`` line sets one entry; omitted strings are
    zero; ``#`` starts a comment.
    """
    sigs: list[Signature] = []
    current: dict[str, object] | None = None
    cur_name = ""
    cur_arity = -1

    def flush():
        nonlocal current
        if current is not None:
            sigs.append(from_entries(cur_arity, current, cur_name))
            current = None

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "signature":
            flush()
            if len(parts) != 4 or parts[2] != "arity":
                raise LiteralSyntaxError(f"line {lineno}: bad signature header {raw!r}")
            cur_name = parts[1]
            try:
                cur_arity = int(parts[3])
            except ValueError:
                raise LiteralSyntaxError(f"line {lineno}: bad arity in {raw!r}") from None
            current = {}
            continue
        if current is None:
            raise LiteralSyntaxError(f"line {lineno}: entry before signature header")
        bits = parts[0]
        if len(bits) != cur_arity or any(c not in "01" for c in bits):
            raise LiteralSyntaxError(f"line {lineno}: bad bit string {bits!r}")
        current[bits] = parse_value(" ".join(parts[1:]), mode)
    flush()
    return sigs


def render_signature_block(sig: Signature, name: str | None = None) -> str:
    name = name or sig.name or "f"
    lines = [f"signature {name} arity {sig.arity}"]
    for m in sig.support():
        lines.append(f"{f2.mask_to_string(m, sig.arity)} {render_value(sig.values[m])}")
    return "\n".join(lines) + "\n"


def load_signature_file(path, mode: FieldMode = GAUSS_MODE) -> dict[str, Signature]:
    with open(path, "r", encoding="utf-8") as fh:
        blocks = parse_signature_blocks(fh.read(), mode)
    out: dict[str, Signature] = {}
    for sig in blocks:
        if sig.name in out:
            raise LiteralSyntaxError(f"duplicate signature name {sig.name!r}")
        out[sig.name] = sig
    return out


BUILTIN_SIGNATURES: dict[str, Signature] = {
    "neq2": neq2(),
    "delta": pin_signature(),
    "delta0": delta0(),
    "delta1": delta1(),
}
