"""Shared randomized generators for the test suite (deterministic via seeds)."""

from __future__ import annotations

import random
from fractions import Fraction

from eoexact import f2
from eoexact.f2 import AffineSpace
from eoexact.grids import Grid
from eoexact.signatures import Signature, from_entries
from eoexact.values import ExactValue, I, ONE, ZERO

V = ExactValue.rational


def rand_value(rng: random.Random, allow_i: bool = True) -> ExactValue:
    re = Fraction(rng.randint(-4, 4), rng.choice([1, 1, 1, 2, 3]))
    im = Fraction(rng.randint(-3, 3)) if allow_i and rng.random() < 0.4 else Fraction(0)
    return ExactValue.gauss(re, im)


def rand_nonzero_value(rng: random.Random, allow_i: bool = True) -> ExactValue:
    while True:
        v = rand_value(rng, allow_i)
        if not v.is_zero():
            return v


def rand_eo_signature(rng: random.Random, arity: int, density: float = 0.7,
                      nonzero: bool = False) -> Signature:
    """Random signature supported on balanced strings only."""
    while True:
        entries = {}
        for m in range(1 << arity):
            if f2.is_balanced(m, arity) and rng.random() < density:
                v = rand_value(rng)
                if not v.is_zero():
                    entries[m] = v
        if entries or not nonzero:
            return from_entries(arity, entries)


def rand_affine_signature(rng: random.Random, arity: int) -> Signature:
    """Random member of the affine class, built from its normal form."""
    n = arity
    dim = rng.randint(0, min(n, 3))
    rows = [rng.randrange(1, 1 << n) for _ in range(dim)]
    offset = rng.randrange(1 << n)
    space = AffineSpace.make(n, offset, rows)
    d = space.dimension
    lam = rand_nonzero_value(rng)
    lin = [rng.randrange(4) for _ in range(d)]
    quad = {(i, j): rng.randrange(2) for i in range(d) for j in range(i + 1, d)}
    entries = {}
    for el in space.elements():
        t = space.coordinates(el)
        e = sum(lin[i] * t[i] for i in range(d))
        e += 2 * sum(quad[i, j] * t[i] * t[j] for (i, j) in quad)
        entries[el] = lam * (I ** (e % 4))
    return from_entries(arity, entries)


def rand_product_signature(rng: random.Random, arity: int) -> Signature:
    """Random member of the product class: pins, parity groups, rank-1 weights."""
    ports = list(range(arity))
    rng.shuffle(ports)
    pins: dict[int, int] = {}
    groups: list[list[int]] = []
    for p in ports:
        r = rng.random()
        if r < 0.25 or not groups:
            if r < 0.15:
                pins[p] = rng.randrange(2)
            else:
                groups.append([p])
        else:
            rng.choice(groups).append(p)
    parity = {}
    for g in groups:
        for idx, p in enumerate(g):
            parity[p] = 0 if idx == 0 else rng.randrange(2)
    lam = rand_nonzero_value(rng)
    weights = [(rand_nonzero_value(rng), rand_nonzero_value(rng)) for _ in groups]
    entries = {}
    for combo in range(1 << len(groups)):
        mask = 0
        val = lam
        for gi, g in enumerate(groups):
            rep = (combo >> gi) & 1
            val = val * weights[gi][rep]
            for p in g:
                if rep ^ parity[p]:
                    mask |= 1 << (arity - 1 - p)
        for p, b in pins.items():
            if b:
                mask |= 1 << (arity - 1 - p)
        entries[mask] = val
    return from_entries(arity, entries)


def rand_closed_grid(rng: random.Random, signatures: list[Signature],
                     max_vertices: int = 5, max_edges: int = 10) -> Grid:
    """Random closed grid over the given signatures (ports matched at random)."""
    while True:
        nv = rng.randint(1, max_vertices)
        chosen = [rng.choice(signatures) for _ in range(nv)]
        slots = [(v, p) for v, sig in enumerate(chosen) for p in range(sig.arity)]
        if len(slots) % 2 != 0 or len(slots) // 2 > max_edges:
            continue
        rng.shuffle(slots)
        edges = []
        ok = True
        while slots:
            a = slots.pop()
            b = slots.pop()
            if a == b:
                ok = False
                break
            edges.append((a, b))
        if not ok:
            continue
        return Grid.make([(f"v{i}", sig) for i, sig in enumerate(chosen)], edges)


def rand_single_weighted_signature(rng: random.Random, arity: int) -> Signature:
    """Random signature with all support at one Hamming weight."""
    d = rng.randint(0, arity)
    candidates = [m for m in range(1 << arity) if f2.hamming(m) == d]
    rng.shuffle(candidates)
    take = candidates[: rng.randint(1, len(candidates))]
    entries = {m: rand_nonzero_value(rng) for m in take}
    return from_entries(arity, entries)
