"""Exact supported file sizes M_k, their complements N_k, and Pareto points.

M_k is the smallest number of distinct points covered by any k blocks
(a min-k-union problem).  The exact search is a depth-first branch and
bound over k-subsets of block bitmasks; it never falls back to an
approximation and instead raises :class:`BudgetExceeded` when the number of
visited partial subsets passes the work budget.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .incidence import IncidenceStructure, dual

DEFAULT_BUDGET = 10**8
DEFAULT_ENUMERATION_CAP = 10**7


class BudgetExceeded(RuntimeError):
    """The exact search visited more partial subsets than allowed."""


def default_budget() -> int:
    env = os.environ.get("FRCODE_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _check_k(s: IncidenceStructure, k: int, lo: int = 1) -> None:
    if not lo <= k <= s.num_blocks:
        raise ValueError(f"k = {k} outside [{lo}, {s.num_blocks}]")


def _search_order(masks) -> list[int]:
    return sorted(range(len(masks)), key=lambda i: (masks[i].bit_count(), i))


def _greedy(masks: list[int], k: int) -> int:
    # Cheap achievable value to seed the bound: repeatedly add the block that
    # grows the union least (first such block on ties).
    used = [False] * len(masks)
    union = 0
    for _ in range(k):
        best_i, best_c = -1, None
        for i, m in enumerate(masks):
            if used[i]:
                continue
            c = (union | m).bit_count()
            if best_c is None or c < best_c:
                best_i, best_c = i, c
        used[best_i] = True
        union |= masks[best_i]
    return union.bit_count()


def _branch(masks: list[int], k: int, start: int, depth: int, union: int,
            best: int, budget: int) -> tuple[int, int]:
    """Minimum union size over completions of a partial subset.

    ``masks`` must already be in search order.  Returns (best, visits); a
    completion is only recorded if it is strictly below the incoming best,
    which must itself be an achievable value.
    """
    n = len(masks)
    visits = 0
    stack = [(start, depth, union)]
    while stack:
        start, depth, union = stack.pop()
        last = n - (k - depth)
        for i in range(start, last + 1):
            nu = union | masks[i]
            visits += 1
            if visits > budget:
                raise BudgetExceeded(f"exceeded work budget of {budget} partial subsets")
            c = nu.bit_count()
            if c >= best:
                continue
            if depth + 1 == k:
                best = c
            else:
                stack.append((i + 1, depth + 1, nu))
    return best, visits


def _branch_from(args) -> tuple[int, int]:
    masks, k, first, best, budget = args
    return _branch(masks, k, first + 1, 1, masks[first], best, budget)


def min_k_union(masks, k: int, budget: int | None = None,
                workers: int = 1) -> tuple[int, int]:
    """Exact min over k-subsets of the union popcount; returns (value, visits).

    With ``workers > 1`` the search is split by the first block of the
    subset and the partitions run in separate processes.  The value is the
    same for any worker count.
    """
    budget = default_budget() if budget is None else budget
    ordered = [masks[i] for i in _search_order(masks)]
    n = len(ordered)
    if not 1 <= k <= n:
        raise ValueError(f"k = {k} outside [1, {n}]")
    seed = _greedy(ordered, k)
    if k == 1:
        if n > budget:
            raise BudgetExceeded(f"exceeded work budget of {budget} partial subsets")
        return ordered[0].bit_count(), n
    if workers <= 1:
        best, visits = _branch(ordered, k, 0, 0, 0, seed, budget)
        return best, visits
    jobs = [(ordered, k, first, seed, budget) for first in range(n - k + 1)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_branch_from, jobs))
    visits = len(jobs) + sum(r[1] for r in results)
    if visits > budget:
        raise BudgetExceeded(f"exceeded work budget of {budget} partial subsets")
    return min(r[0] for r in results), visits


def supported_file_size(s: IncidenceStructure, k: int, budget: int | None = None,
                        workers: int = 1) -> int:
    """Smallest number of distinct points covered by any k blocks."""
    _check_k(s, k)
    return min_k_union(s.masks, k, budget, workers)[0]


def supported_file_size_bruteforce(s: IncidenceStructure, k: int,
                                   cap: int = DEFAULT_ENUMERATION_CAP) -> int:
    """Plain enumeration of every k-subset; the cross-check oracle for the search."""
    _check_k(s, k)
    count = math.comb(s.num_blocks, k)
    if count > cap:
        raise BudgetExceeded(f"C({s.num_blocks}, {k}) = {count} exceeds enumeration cap {cap}")
    best = s.num_points
    for combo in itertools.combinations(s.masks, k):
        u = 0
        for m in combo:
            u |= m
        best = min(best, u.bit_count())
    return best


def min_union_witness(s: IncidenceStructure, k: int, target: int | None = None,
                      budget: int | None = None) -> tuple[int, ...]:
    """Lexicographically smallest k-subset of block indices whose union has size M_k."""
    _check_k(s, k)
    budget = default_budget() if budget is None else budget
    if target is None:
        target = supported_file_size(s, k, budget)
    masks = s.masks
    n = len(masks)
    visits = 0

    def walk(start: int, chosen: list[int], union: int) -> tuple[int, ...] | None:
        nonlocal visits
        for i in range(start, n - (k - len(chosen)) + 1):
            nu = union | masks[i]
            visits += 1
            if visits > budget:
                raise BudgetExceeded(f"exceeded work budget of {budget} partial subsets")
            if nu.bit_count() > target:
                continue
            chosen.append(i)
            if len(chosen) == k:
                return tuple(chosen)
            found = walk(i + 1, chosen, nu)
            if found:
                return found
            chosen.pop()
        return None

    found = walk(0, [], 0)
    if found is None:
        raise ValueError(f"no {k}-subset covers only {target} points")
    return found


@dataclass(frozen=True)
class FileSizeHierarchy:
    """m[k] = M_k for k = 0..n with m[0] = 0."""

    num_points: int
    m: tuple[int, ...]

    @property
    def num_blocks(self) -> int:
        return len(self.m) - 1

    @property
    def n_vals(self) -> tuple[int, ...]:
        return tuple(self.num_points - x for x in self.m)

    def __getitem__(self, k: int) -> int:
        return self.m[k]

    def to_table(self) -> str:
        lines = ["k M_k N_k"]
        for k in range(1, len(self.m)):
            lines.append(f"{k} {self.m[k]} {self.num_points - self.m[k]}")
        return "\n".join(lines) + "\n"


def full_hierarchy(s: IncidenceStructure, budget: int | None = None,
                   workers: int = 1) -> FileSizeHierarchy:
    budget = default_budget() if budget is None else budget
    m = [0]
    spent = 0
    for k in range(1, s.num_blocks + 1):
        try:
            value, visits = min_k_union(s.masks, k, budget - spent, workers)
        except BudgetExceeded:
            raise BudgetExceeded(
                f"exceeded work budget of {budget} partial subsets at k = {k}") from None
        spent += visits
        m.append(value)
    return FileSizeHierarchy(s.num_points, tuple(m))


def n_value(s: IncidenceStructure, k: int, budget: int | None = None) -> int:
    """Widest all-zero submatrix with k rows, i.e. v - M_k (and v for k = 0)."""
    _check_k(s, k, lo=0)
    if k == 0:
        return s.num_points
    return s.num_points - supported_file_size(s, k, budget)


def hierarchy_via_dual(s: IncidenceStructure, budget: int | None = None) -> FileSizeHierarchy:
    """Recover M_k(s) from the N values of the transpose alone.

    M_k counts the indices i in 1..v with N_i(transpose) < k.
    """
    t = dual(s)
    dual_h = full_hierarchy(t, budget)
    n_dual = dual_h.n_vals[1:]
    m = [0] + [sum(1 for x in n_dual if k > x) for k in range(1, s.num_blocks + 1)]
    return FileSizeHierarchy(s.num_points, tuple(m))


@dataclass(frozen=True)
class ParetoPoint:
    k0: int
    l0: int
    # on an axis of the staircase plot (k0 = 0 or l0 = 0)
    boundary: bool = field(default=False, compare=False)


@dataclass(frozen=True)
class Staircase:
    """N sequences of a structure and its transpose, with the vertices where they meet."""

    n_primal: tuple[int, ...]  # N_k(C), k = 0..n
    n_dual: tuple[int, ...]  # N_l(C^t), l = 0..v
    points: tuple[ParetoPoint, ...]
    # vertices meeting both equalities but failing a strictness condition
    touching: tuple[tuple[int, int], ...]


def staircase_from(n_primal, n_dual) -> Staircase:
    n, v = len(n_primal) - 1, len(n_dual) - 1
    points, touching = [], []
    for k0 in range(n + 1):
        l0 = n_primal[k0]
        if n_dual[l0] != k0:
            continue
        strict_primal = all(n_primal[k] < n_primal[k0] for k in range(k0 + 1, n + 1))
        strict_dual = all(n_dual[l] < n_dual[l0] for l in range(l0 + 1, v + 1))
        if strict_primal and strict_dual:
            points.append(ParetoPoint(k0, l0, boundary=(k0 == 0 or l0 == 0)))
        else:
            touching.append((k0, l0))
    return Staircase(tuple(n_primal), tuple(n_dual), tuple(points), tuple(touching))


def staircase(s: IncidenceStructure, budget: int | None = None) -> Staircase:
    primal = full_hierarchy(s, budget).n_vals
    dual_vals = full_hierarchy(dual(s), budget).n_vals
    return staircase_from(primal, dual_vals)


def pareto_points(s: IncidenceStructure, budget: int | None = None) -> list[ParetoPoint]:
    """Vertices (k0, l0) with l0 = N_k0(C), k0 = N_l0(C^t), both strictly dominant."""
    return list(staircase(s, budget).points)
