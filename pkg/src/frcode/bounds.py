"""Upper bounds on M_k and the lower bound on the reconstruction degree.

Everything here is exact integer / rational arithmetic.  Binomials come
from :func:`math.comb`, which already returns 0 when the lower index
exceeds the upper one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .hierarchy import FileSizeHierarchy, full_hierarchy, min_union_witness, supported_file_size
from .incidence import FrCode, IncidenceStructure, as_fr_code


class FrParams(NamedTuple):
    n: int
    alpha: int
    v: int
    rho: int

    @classmethod
    def parse(cls, text: str) -> FrParams:
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected n,alpha,v,rho, got {text!r}")
        return cls(*(int(p) for p in parts)).checked()

    def checked(self) -> FrParams:
        n, alpha, v, rho = self
        if min(self) < 1:
            raise ValueError(f"parameters must be positive: {tuple(self)}")
        if alpha > v or rho > n:
            raise ValueError(f"need alpha <= v and rho <= n: {tuple(self)}")
        if n * alpha != v * rho:
            raise ValueError(f"n*alpha = {n * alpha} != v*rho = {v * rho}")
        return self

    def dual(self) -> FrParams:
        return FrParams(self.v, self.rho, self.n, self.alpha)


def _params(p) -> FrParams:
    if isinstance(p, FrCode):
        return FrParams(*p.params)
    return FrParams(*p).checked()


def ceil_div(a: int, b: int) -> int:
    """Mathematical ceiling of a/b for b > 0, also for negative a."""
    return -((-a) // b)


def _check_k(p: FrParams, k: int) -> None:
    if not 1 <= k <= p.n:
        raise ValueError(f"k = {k} outside [1, {p.n}]")


def binomial_bound(params, k: int) -> int:
    """floor(v * (1 - C(n-rho, k) / C(n, k))), floored once at the end."""
    n, _, v, rho = p = _params(params)
    _check_k(p, k)
    total = math.comb(n, k)
    return v * (total - math.comb(n - rho, k)) // total


def recursive_g(params) -> list[int]:
    """[g(1), ..., g(n)] with g(1) = alpha and
    g(k+1) = g(k) + alpha - ceil((rho g(k) - k alpha) / (n - k))."""
    n, alpha, _, rho = _params(params)
    g = [alpha]
    for k in range(1, n):
        g.append(g[-1] + alpha - ceil_div(rho * g[-1] - k * alpha, n - k))
    return g


def g_prime(params) -> list[int]:
    """[g'(1), ..., g'(v)]: the recursion of :func:`recursive_g` with roles swapped."""
    _, alpha, v, rho = _params(params)
    out = [rho]
    for l in range(1, v):
        prev = out[-1]
        out.append(prev + rho - ceil_div(alpha * prev - l * rho, v - l))
    return out


def dual_bound(params, k: int, gp: Sequence[int] | None = None) -> int:
    """Number of i in 1..v with k > n - g'(i)."""
    p = _params(params)
    _check_k(p, k)
    if gp is None:
        gp = g_prime(p)
    return sum(1 for x in gp if k > p.n - x)


def silberstein_min_k(params, M: int) -> int:
    """Smallest reconstruction degree allowed for file size M: ceil(n C(M-1, alpha) / C(v, alpha)) + 1."""
    n, alpha, v, _ = _params(params)
    if not 1 <= M <= v:
        raise ValueError(f"M = {M} outside [1, {v}]")
    return ceil_div(n * math.comb(M - 1, alpha), math.comb(v, alpha)) + 1


def binomial_bound_real(params, k: int) -> Fraction:
    """Unfloored value of the binomial bound, as an exact rational."""
    n, _, v, rho = p = _params(params)
    _check_k(p, k)
    return v * (1 - Fraction(math.comb(n - rho, k), math.comb(n, k)))


@dataclass(frozen=True)
class BoundRow:
    k: int
    eq9: int
    g: int
    dual: int
    exact: int | None = None
    g_raw: int | None = None  # before clamping to [0, v]

    @property
    def tightest(self) -> int:
        return min(self.eq9, self.g, self.dual)


@dataclass(frozen=True)
class BoundReport:
    params: FrParams
    rows: tuple[BoundRow, ...]
    g_prime: tuple[int, ...]
    g: tuple[int, ...]

    def row(self, k: int) -> BoundRow:
        for r in self.rows:
            if r.k == k:
                return r
        raise KeyError(k)

    @property
    def has_exact(self) -> bool:
        return any(r.exact is not None for r in self.rows)

    def violations(self) -> list[str]:
        """Bound values that fall below the exact M_k (should always be empty)."""
        bad = []
        for r in self.rows:
            if r.exact is None:
                continue
            for name in ("eq9", "g", "dual"):
                if getattr(r, name) < r.exact:
                    bad.append(f"k={r.k}: {name}={getattr(r, name)} < exact {r.exact}")
        return bad

    def to_table(self) -> str:
        cols = ["k", "eq9", "g(k)", "dual"]
        if self.has_exact:
            cols.append("exact")
        lines = ["  ".join(cols)]
        for r in self.rows:
            vals = [r.k, r.eq9, r.g, r.dual]
            if self.has_exact:
                vals.append("-" if r.exact is None else r.exact)
            lines.append("  ".join(str(x) for x in vals))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "params": dict(self.params._asdict()),
            "g": list(self.g),
            "g_prime": list(self.g_prime),
            "rows": [
                {
                    "k": r.k,
                    "eq9": r.eq9,
                    "g": r.g,
                    "g_unclamped": r.g_raw,
                    "dual": r.dual,
                    "exact": r.exact,
                    "tightest": r.tightest,
                }
                for r in self.rows
            ],
        }


def bound_report(params, ks: Sequence[int] | None = None,
                 exact: FileSizeHierarchy | Sequence[int] | None = None) -> BoundReport:
    p = _params(params)
    ks = range(1, p.n + 1) if ks is None else ks
    g = recursive_g(p)
    gp = g_prime(p)
    rows = []
    for k in ks:
        raw = g[k - 1]
        rows.append(BoundRow(
            k=k,
            eq9=binomial_bound(p, k),
            g=min(max(raw, 0), p.v),
            dual=dual_bound(p, k, gp),
            exact=None if exact is None else exact[k],
            g_raw=raw,
        ))
    return BoundReport(p, tuple(rows), tuple(gp), tuple(g))


def report_for_code(code: FrCode | IncidenceStructure, ks: Sequence[int] | None = None,
                    with_exact: bool = True, budget: int | None = None) -> BoundReport:
    code = as_fr_code(code)
    exact = full_hierarchy(code.structure, budget) if with_exact else None
    return bound_report(code, ks, exact)


def g_is_monotone(params) -> bool:
    g = recursive_g(params)
    return all(a <= b for a, b in zip(g, g[1:]))


@dataclass(frozen=True)
class Certificate:
    """Outcome of comparing exact M_k with the dual bound.

    ``witness`` is set only when the bound is met with equality.
    """

    k: int
    exact: int
    bound: int
    witness: tuple[int, ...] | None

    @property
    def certified(self) -> bool:
        return self.witness is not None

    @property
    def gap(self) -> int:
        return self.bound - self.exact


def optimality_certificate(s: FrCode | IncidenceStructure, k: int,
                           budget: int | None = None) -> Certificate:
    code = as_fr_code(s)
    _check_k(FrParams(*code.params), k)
    exact = supported_file_size(code.structure, k, budget)
    bound = dual_bound(code, k)
    witness = None
    if exact == bound:
        witness = min_union_witness(code.structure, k, exact, budget)
    return Certificate(k, exact, bound, witness)
