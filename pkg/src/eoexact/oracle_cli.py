"""Stand-alone satisfiability responder for the clause-form oracle protocol.

Reads one problem from stdin: one clause per line, clauses are space
separated nonzero integer literals (positive = variable true), blank lines
ignored.  Writes a single response line: ``SAT <signed literal per
variable>`` or ``UNSAT``.  Kept dependency-free so subprocess startup stays
cheap.
"""

from __future__ import annotations

import sys


def parse_clauses(text: str) -> tuple[list[list[int]], int]:
    clauses: list[list[int]] = []
    nvars = 0
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        lits = [int(tok) for tok in line.split()]
        if any(l == 0 for l in lits):
            raise ValueError("literal 0 is not allowed")
        clauses.append(lits)
        nvars = max(nvars, max(abs(l) for l in lits))
    return clauses, nvars


def solve(clauses: list[list[int]], nvars: int) -> dict[int, bool] | None:
    assign: dict[int, bool] = {}

    def value(lit: int) -> bool | None:
        v = assign.get(abs(lit))
        if v is None:
            return None
        return v if lit > 0 else not v

    def propagate() -> list[int] | None:
        """Unit propagation; returns trail of variables set, None on conflict."""
        trail: list[int] = []
        changed = True
        while changed:
            changed = False
            for clause in clauses:
                unassigned = None
                satisfied = False
                count = 0
                for lit in clause:
                    val = value(lit)
                    if val is True:
                        satisfied = True
                        break
                    if val is None:
                        unassigned = lit
                        count += 1
                if satisfied:
                    continue
                if count == 0:
                    for v in trail:
                        del assign[v]
                    return None
                if count == 1:
                    assign[abs(unassigned)] = unassigned > 0
                    trail.append(abs(unassigned))
                    changed = True
        return trail

    def dfs() -> bool:
        trail = propagate()
        if trail is None:
            return False
        var = next((v for v in range(1, nvars + 1) if v not in assign), None)
        if var is None:
            return True
        for choice in (False, True):
            assign[var] = choice
            if dfs():
                return True
            del assign[var]
        for v in trail:
            del assign[v]
        return False

    if dfs():
        return {v: assign.get(v, False) for v in range(1, nvars + 1)}
    return None


def main(argv: list[str] | None = None) -> int:
    text = sys.stdin.read()
    try:
        clauses, nvars = parse_clauses(text)
    except ValueError as exc:
        print(f"ERROR {exc}")
        return 2
    model = solve(clauses, nvars)
    if model is None:
        print("UNSAT")
    else:
        lits = " ".join(str(v if model[v] else -v) for v in range(1, nvars + 1))
        print(f"SAT {lits}".rstrip())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
