"""Enumeration budgets.

Exhaustive sweeps refuse loudly instead of silently approximating: any
operation whose search space exceeds its budget raises BudgetExceeded.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class BudgetExceeded(Exception):
    """An exhaustive search was refused because it exceeds the budget."""


@dataclass(frozen=True)
class Budget:
    # max number of (a, b, c) triples in ideal predicate sweeps
    triples: int = 2**24
    # max module dimension for submodule lattice enumeration, per prime
    submodule_dim: dict = field(default_factory=lambda: {2: 8, 3: 5})
    # hard cap on the number of submodules the lattice walk may collect
    max_submodules: int = 50_000
    # max elements enumerated when sweeping an endomorphism algebra
    end_elements: int = 2**16
    # max F_p-combinations tried when searching hom spaces for isomorphisms
    iso_combinations: int = 2**16

    def with_submodule_dim(self, p: int, dim: int) -> "Budget":
        d = dict(self.submodule_dim)
        d[p] = dim
        return Budget(
            triples=self.triples,
            submodule_dim=d,
            max_submodules=self.max_submodules,
            end_elements=self.end_elements,
            iso_combinations=self.iso_combinations,
        )

    def check_submodule_dim(self, p: int, dim: int) -> None:
        limit = self.submodule_dim.get(p, 0)
        if dim > limit:
            raise BudgetExceeded(
                f"submodule enumeration refused: dim {dim} over F_{p} "
                f"exceeds budget dim {limit}"
            )


DEFAULT_BUDGET = Budget()
