"""The named tournaments ``H0`` .. ``H19`` (every class on at most 5 vertices).

Most names are pinned by structure.  The remaining 5-vertex names are fixed by
the reference coefficient tables: the recomputed ``B(F1; J)``, ``B(F2; J)``,
``B(F3; J)`` must equal the stored ones.  Every admissible assignment is
enumerated, so the result is known to be unique.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

from .tournaments import (
    Tournament,
    c3_plus_sink,
    c3_plus_source,
    canonical,
    cyclic4,
    enumerate_tournaments,
    is_regular,
    reverse,
)

NAMES = tuple(f"H{i}" for i in range(20))

_NAME_RE = re.compile(r"^H_?\{?(\d+)\}?$", re.IGNORECASE)


class CatalogError(RuntimeError):
    """``code`` is ``NO_ASSIGNMENT`` or ``AMBIGUOUS``."""

    def __init__(self, code: str, detail: str):
        self.code = code
        super().__init__(f"{code}: {detail}")


@dataclass(frozen=True)
class Catalog:
    assignment: dict
    unique: bool
    _inverse: dict = field(default_factory=dict, repr=False, compare=False)

    def get(self, name: str) -> Tournament:
        m = _NAME_RE.match(name.strip())
        if not m or f"H{int(m.group(1))}" not in self.assignment:
            raise KeyError(f"unknown catalog name {name!r}")
        return self.assignment[f"H{int(m.group(1))}"]

    def __getitem__(self, name: str) -> Tournament:
        return self.get(name)

    def name_of(self, t: Tournament) -> str | None:
        if t.n > 5:
            return None
        return self._inverse.get(canonical(t))

    def names(self) -> dict:
        """``{canonical tournament: name}``."""
        return dict(self._inverse)

    def display_names(self) -> dict:
        """``{canonical tournament: short name}``, preferring ``TTk``/``C3``/``C4``."""
        return {t: self.labels(t).split("/")[0] for t in self._inverse}

    def labels(self, t: Tournament) -> str:
        """Display label such as ``TT3/H2`` or ``C3/H3``."""
        c = canonical(t)
        parts = []
        if c == Tournament.transitive(c.n) and c.n >= 2:
            parts.append(f"TT{c.n}")
        if c.n == 3 and c == canonical(Tournament.cyclic3()):
            parts.append("C3")
        if c.n == 4 and c == cyclic4():
            parts.append("C4")
        h = self.name_of(c)
        if h:
            parts.append(h)
        return "/".join(parts)


def h9() -> Tournament:
    """``u1`` sink; ``u2``'s only out-neighbour is ``u1``; ``u3 u4 u5`` cyclic."""
    arcs = [(2, 1), (3, 1), (4, 1), (5, 1), (3, 2), (4, 2), (5, 2), (3, 4), (4, 5), (5, 3)]
    return canonical(Tournament.from_arcs(5, arcs, one_based=True))


def _fixed() -> dict:
    single = enumerate_tournaments(1)[0]
    fixed = {
        "H0": single,
        "H1": Tournament.transitive(2),
        "H2": Tournament.transitive(3),
        "H3": Tournament.cyclic3(),
        "H4": Tournament.transitive(4),
        "H5": c3_plus_sink(),
        "H6": cyclic4(),
        "H7": c3_plus_source(),
        "H8": Tournament.transitive(5),
        "H9": h9(),
    }
    fixed["H16"] = reverse(fixed["H9"])
    regular = [t for t in enumerate_tournaments(5) if is_regular(t)]
    if len(regular) != 1:
        raise CatalogError("NO_ASSIGNMENT", f"expected one regular 5-vertex class, found {len(regular)}")
    fixed["H19"] = regular[0]
    return {k: canonical(v) for k, v in fixed.items()}


@lru_cache(maxsize=None)
def resolve_catalog() -> Catalog:
    from .flags import load_appendix

    return solve_catalog(load_appendix())


@lru_cache(maxsize=None)
def _tables() -> dict:
    from .flags import recomputed_tables

    return {c: recomputed_tables(c) for c in enumerate_tournaments(5)}


def solve_catalog(ref: dict) -> Catalog:
    """Resolve the names against reference tables ``{name: {table: matrix}}``."""
    fixed = _fixed()
    if len(set(fixed.values())) != len(fixed):
        raise CatalogError("NO_ASSIGNMENT", "structural names collide")

    classes5 = enumerate_tournaments(5)
    tables = _tables()

    def fits(name, cls):
        return name not in ref or tables[cls] == ref[name]

    for name, cls in fixed.items():
        if name in ref and not fits(name, cls):
            raise CatalogError("NO_ASSIGNMENT", f"{name} is pinned by structure but its tables differ")

    free_names = [n for n in NAMES if n not in fixed]
    free_classes = [c for c in classes5 if c not in set(fixed.values())]
    if len(free_names) != len(free_classes):
        raise CatalogError("NO_ASSIGNMENT", "name and class counts differ")

    solutions = []
    ok = {(n, c): fits(n, c) for n in free_names for c in free_classes}
    for perm in permutations(free_classes):
        cand = dict(zip(free_names, perm))
        if not all(ok[n, c] for n, c in cand.items()):
            continue
        if canonical(reverse(cand["H10"])) != cand["H15"]:
            continue
        solutions.append(cand)
    if not solutions:
        raise CatalogError("NO_ASSIGNMENT", "no assignment matches the reference tables")
    if len(solutions) > 1:
        raise CatalogError("AMBIGUOUS", f"{len(solutions)} assignments match the reference tables")

    assignment = {**fixed, **solutions[0]}
    assignment = {n: assignment[n] for n in NAMES}
    return Catalog(assignment, True, {t: n for n, t in assignment.items()})
