"""Specht modules over F_p and their irreducible heads.

A tabloid of shape mu is an ordered set partition of {0..n-1} with row
sizes mu_1 >= mu_2 >= ...; the permutation module M^mu has one
coordinate per tabloid, listed in lexicographic order of the
concatenated sorted rows.  S^mu is spanned by the polytabloids of the
standard tableaux, encoded as the rows of an integer matrix P.  The
head D^mu = S^mu / rad is coordinatized by the pivot columns of the
Gram matrix G = P P^T: the map s -> s @ P[piv]^T has kernel exactly
rad, and the lift L = G[piv,piv]^{-1} P[piv] sections it, so the matrix
of any permutation g on D^mu is L Pi_g P[piv]^T with Pi_g the tabloid
coordinate permutation.

Budgets guard both the tabloid count (default 10^5) and the P-matrix
size; exceeding either raises BudgetExceededError rather than
degrading.

The fully deleted permutation module is built separately from the
explicit basis f_i = e_i - e_{i+1} of the sum-zero hyperplane (p | n:
its quotient by the all-ones line), with expand/compress maps kept on
the module so orbit-level callers can reason about actual value
tuples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import gfplin, permsym, repkit
from .gfplin import BudgetExceededError
from .permsym import Permutation
from .repkit import Representation

TABLOID_BUDGET = 100_000
ENTRY_BUDGET = 50_000_000


# ------------------------------------------------------------- partitions


def is_partition(mu) -> bool:
    mu = tuple(mu)
    return (len(mu) > 0 and all(isinstance(x, int) or int(x) == x for x in mu)
            and all(x >= 1 for x in mu)
            and all(mu[i] >= mu[i + 1] for i in range(len(mu) - 1)))


def check_partition(mu, n: int | None = None) -> tuple[int, ...]:
    mu = tuple(int(x) for x in mu)
    if not is_partition(mu):
        raise ValueError(f"not a partition: {mu}")
    if n is not None and sum(mu) != n:
        raise ValueError(f"partition {mu} does not sum to {n}")
    return mu


def partitions(n: int):
    """All partitions of n, descending parts, reverse-lex order."""
    if n == 0:
        yield ()
        return

    def rec(rest: int, cap: int):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    yield from rec(n, n)


def p_regular(mu, p: int) -> bool:
    """No part repeated p or more times."""
    mu = tuple(mu)
    return all(mu.count(v) < p for v in set(mu))


def p_regular_partitions(n: int, p: int):
    return (mu for mu in partitions(n) if p_regular(mu, p))


def conjugate_partition(mu) -> tuple[int, ...]:
    mu = check_partition(mu)
    return tuple(sum(1 for part in mu if part > j) for j in range(mu[0]))


def tabloid_count(mu) -> int:
    mu = check_partition(mu)
    n = sum(mu)
    count = math.factorial(n)
    for part in mu:
        count //= math.factorial(part)
    return count


def syt_count(mu) -> int:
    """Number of standard tableaux by the hook length formula."""
    mu = check_partition(mu)
    n = sum(mu)
    conj = conjugate_partition(mu)
    num = math.factorial(n)
    for i, part in enumerate(mu):
        for j in range(part):
            hook = (part - j) + (conj[j] - i) - 1
            num, rem = divmod(num, hook)
            if rem:
                raise AssertionError("hook product does not divide n!")
    return num


def standard_tableaux(mu) -> list[tuple[tuple[int, ...], ...]]:
    """All standard tableaux (rows strictly increasing right and down),
    entries 0..n-1, cross-checked against the hook length formula."""
    mu = check_partition(mu)
    n = sum(mu)
    k = len(mu)
    rows = [[] for _ in range(k)]
    filled = [0] * k
    out: list[tuple[tuple[int, ...], ...]] = []

    def place(v: int):
        if v == n:
            out.append(tuple(tuple(r) for r in rows))
            return
        for r in range(k):
            if filled[r] < mu[r] and (r == 0 or filled[r - 1] > filled[r]):
                rows[r].append(v)
                filled[r] += 1
                place(v + 1)
                filled[r] -= 1
                rows[r].pop()

    place(0)
    if len(out) != syt_count(mu):
        raise AssertionError("standard tableau enumeration disagrees with hook formula")
    return out


# ---------------------------------------------------------------- tabloids


class TabloidSpace:
    """Tabloids of shape mu in lex order, with vectorized permutation
    action on coordinate indices."""

    def __init__(self, mu, budget: int = TABLOID_BUDGET):
        self.mu = check_partition(mu)
        self.n = sum(self.mu)
        self.count = tabloid_count(self.mu)
        if self.count > budget:
            raise BudgetExceededError(
                f"{self.count} tabloids of shape {self.mu} exceed budget {budget}")
        k = len(self.mu)
        rows_of = np.empty((self.count, self.n), dtype=np.int64)
        idx = 0
        points = tuple(range(self.n))

        def rec(remaining: tuple[int, ...], row: int, acc: np.ndarray):
            nonlocal idx
            if row == k:
                rows_of[idx] = acc
                idx += 1
                return
            for chosen in itertools.combinations(remaining, self.mu[row]):
                acc2 = acc.copy()
                acc2[list(chosen)] = row
                rest = tuple(x for x in remaining if x not in chosen)
                rec(rest, row + 1, acc2)

        rec(points, 0, np.zeros(self.n, dtype=np.int64))
        assert idx == self.count
        self.rows_of = rows_of
        self._powers = (k if k > 1 else 2) ** np.arange(self.n, dtype=np.int64)
        keys = rows_of @ self._powers
        self._order = np.argsort(keys, kind="stable").astype(np.int64)
        self._sorted_keys = keys[self._order]

    def index_of_rows_of(self, rows_of: np.ndarray) -> np.ndarray:
        rows_of = np.atleast_2d(rows_of)
        keys = rows_of @ self._powers
        pos = np.searchsorted(self._sorted_keys, keys)
        if np.any(pos >= self.count) or np.any(self._sorted_keys[np.minimum(pos, self.count - 1)] != keys):
            raise ValueError("row assignment is not a tabloid of this shape")
        return self._order[pos]

    def perm_index(self, g: Permutation) -> np.ndarray:
        """tp with tp[t] = index of the tabloid t.g, where
        (t.g) assigns row(t, i) to the point g(i)."""
        if g.n != self.n:
            raise ValueError("degree mismatch")
        inv = g.inverse().images
        moved = self.rows_of[:, inv]
        return self.index_of_rows_of(moved)

    def second_row_pairs(self) -> np.ndarray:
        """For shape (n-2, 2): the unordered pair on row 1 per tabloid."""
        if self.mu != (self.n - 2, 2):
            raise ValueError("only defined for shape (n-2, 2)")
        out = np.array([np.flatnonzero(r == 1) for r in self.rows_of])
        return out

    def ordered_pairs(self) -> np.ndarray:
        """For shape (n-2, 1, 1): the ordered pair (row 1 point, row 2
        point) per tabloid."""
        if self.mu != (self.n - 2, 1, 1):
            raise ValueError("only defined for shape (n-2, 1, 1)")
        first = np.argmax(self.rows_of == 1, axis=1)
        second = np.argmax(self.rows_of == 2, axis=1)
        return np.stack([first, second], axis=1)


# ------------------------------------------------------------ polytabloids


def _column_options(col: tuple[int, ...]):
    """(assignment, sign) for every permutation of one column; the
    assignment sends each listed point to its new row index."""
    base = {x: i for i, x in enumerate(col)}
    options = []
    for q in itertools.permutations(col):
        perm_idx = tuple(base[x] for x in q)
        sign = 1
        for a in range(len(q)):
            for b in range(a + 1, len(q)):
                if perm_idx[a] > perm_idx[b]:
                    sign = -sign
        options.append((q, sign))
    return options


def polytabloid_matrix(mu, p: int, space: TabloidSpace | None = None,
                       budget: int = TABLOID_BUDGET) -> tuple[np.ndarray, TabloidSpace]:
    """Rows = polytabloids of the standard tableaux, mod p.  The row
    rank must equal the number of standard tableaux (hard check)."""
    mu = check_partition(mu)
    p = gfplin.check_prime(p)
    if space is None:
        space = TabloidSpace(mu, budget=budget)
    tableaux = standard_tableaux(mu)
    nst = len(tableaux)
    if nst * space.count > ENTRY_BUDGET:
        raise BudgetExceededError(
            f"polytabloid matrix {nst} x {space.count} exceeds entry budget")
    n, k = space.n, len(mu)
    conj = conjugate_partition(mu)
    stab_order = 1
    for c in conj:
        stab_order *= math.factorial(c)
    if nst * stab_order > ENTRY_BUDGET:
        raise BudgetExceededError("column stabilizer enumeration exceeds budget")
    P = np.zeros((nst, space.count), dtype=np.int64)
    for si, t in enumerate(tableaux):
        cols = [tuple(t[i][j] for i in range(k) if mu[i] > j) for j in range(mu[0])]
        per_col = [_column_options(c) for c in cols]
        rows_buf = np.empty(n, dtype=np.int64)
        for combo in itertools.product(*per_col):
            sign = 1
            for (q, s) in combo:
                sign *= s
                for i, x in enumerate(q):
                    rows_buf[x] = i
            ti = int(space.index_of_rows_of(rows_buf)[0])
            P[si, ti] = (P[si, ti] + sign) % p
    if gfplin.rank(P, p) != nst:
        raise AssertionError("polytabloid rows are dependent mod p")
    return P, space


# ------------------------------------------------------------------ modules


@dataclass
class SpechtData:
    """Everything needed to act on S^mu and its head D^mu."""

    mu: tuple[int, ...]
    n: int
    p: int
    space: TabloidSpace
    P: np.ndarray            # polytabloid rows, (k x T)
    gram: np.ndarray         # P P^T mod p
    pivots: tuple[int, ...]  # pivot columns of rref(gram)
    dim: int                 # dim D^mu = rank of gram
    P_piv: np.ndarray        # P[pivots, :]
    lift: np.ndarray         # G[piv,piv]^{-1} P[piv,:], rows lie in S^mu

    def coords(self, vectors: np.ndarray) -> np.ndarray:
        """D^mu coordinates of vectors given in tabloid coordinates."""
        return gfplin.matmul(np.atleast_2d(vectors), self.P_piv.T, self.p)

    def dmu_matrix(self, g: Permutation) -> np.ndarray:
        tp = self.space.perm_index(g)
        itp = np.empty_like(tp)
        itp[tp] = np.arange(tp.size)
        moved = self.lift[:, itp]
        return gfplin.matmul(moved, self.P_piv.T, self.p)

    def specht_matrix(self, g: Permutation) -> np.ndarray:
        """Action on the polytabloid basis of S^mu itself."""
        tp = self.space.perm_index(g)
        itp = np.empty_like(tp)
        itp[tp] = np.arange(tp.size)
        moved = self.P[:, itp]
        sol = gfplin.solve_matrix_in_span(self.P, moved, self.p)
        if sol is None:
            raise AssertionError("S^mu is not invariant: convention broken")
        return sol


@lru_cache(maxsize=12)
def specht_data(n: int, p: int, mu: tuple[int, ...],
                budget: int = TABLOID_BUDGET) -> SpechtData:
    mu = check_partition(mu, n)
    p = gfplin.check_prime(p)
    P, space = polytabloid_matrix(mu, p, budget=budget)
    gram = gfplin.matmul(P, P.T, p)
    _, pivots = gfplin.rref(gram, p)
    dim = len(pivots)
    piv = np.array(pivots, dtype=np.int64)
    P_piv = P[piv] if dim else np.zeros((0, space.count), dtype=np.int64)
    if dim:
        block = gram[np.ix_(piv, piv)]
        lift = gfplin.matmul(gfplin.invert(block, p), P_piv, p)
    else:
        lift = P_piv
    return SpechtData(mu=mu, n=n, p=p, space=space, P=P, gram=gram,
                      pivots=pivots, dim=dim, P_piv=P_piv, lift=lift)


def dmu_dim(n: int, p: int, mu, budget: int = TABLOID_BUDGET) -> int:
    return specht_data(n, p, check_partition(mu, n), budget).dim


def build_dmu(n: int, p: int, mu, budget: int = TABLOID_BUDGET) -> Representation:
    """The irreducible head D^mu as a Representation of S_n (Coxeter
    generator matrices plus an evaluator for arbitrary permutations)."""
    mu = check_partition(mu, n)
    if not p_regular(mu, p):
        raise ValueError(f"{mu} is not {p}-regular: the head vanishes")
    data = specht_data(n, p, mu, budget)
    if data.dim == 0:
        raise AssertionError("p-regular partition produced a zero head")
    gens = [data.dmu_matrix(g) for g in permsym.coxeter_generators(n)]
    return Representation(
        p=p,
        dim=data.dim,
        generators=gens,
        group=repkit.sn_descriptor(n),
        label=f"D{mu}@{p}",
        act_perm=data.dmu_matrix,
        gen_parities=tuple(1 for _ in gens),
    )


# ----------------------------------------------- fully deleted permutation


@dataclass
class FdpmLift:
    """Coordinates <-> value-tuple maps for the fully deleted
    permutation module.

    Coordinates are over the basis f_i = e_i - e_{i+1} of the sum-zero
    hyperplane; when p | n the module is the further quotient by the
    all-ones line and coordinates are the first n-2 entries of the
    representative normalized to have last f-coordinate 0.
    """

    n: int
    p: int
    quotient: bool

    @property
    def dim(self) -> int:
        return self.n - 1 - (1 if self.quotient else 0)

    def _u_y(self) -> np.ndarray:
        return np.arange(1, self.n, dtype=np.int64) % self.p

    def expand(self, coords: np.ndarray) -> np.ndarray:
        """Value tuples (length n, summing to 0 mod p) of coordinate rows."""
        coords = np.atleast_2d(np.asarray(coords, dtype=np.int64)) % self.p
        m = coords.shape[0]
        y = np.zeros((m, self.n - 1), dtype=np.int64)
        y[:, : coords.shape[1]] = coords
        v = np.zeros((m, self.n), dtype=np.int64)
        v[:, 0] = y[:, 0]
        v[:, 1 : self.n - 1] = (y[:, 1:] - y[:, :-1]) % self.p
        v[:, self.n - 1] = (-y[:, self.n - 2]) % self.p
        return v

    def compress(self, values: np.ndarray) -> np.ndarray:
        """Coordinates of value tuples; requires each row to sum to 0."""
        values = np.atleast_2d(np.asarray(values, dtype=np.int64)) % self.p
        if values.shape[1] != self.n:
            raise ValueError("value tuples must have length n")
        if np.any(values.sum(axis=1) % self.p):
            raise ValueError("value tuple does not sum to 0 mod p")
        y = np.cumsum(values, axis=1)[:, : self.n - 1] % self.p
        if not self.quotient:
            return y
        t = y[:, self.n - 2 : self.n - 1]
        y = (y + t * self._u_y()) % self.p
        assert not np.any(y[:, self.n - 2])
        return y[:, : self.n - 2]


def build_fdpm(n: int, p: int) -> Representation:
    """Fully deleted permutation module of S_n, built directly from the
    natural permutation action (independent of the tabloid machinery)."""
    p = gfplin.check_prime(p)
    if n < 3:
        raise ValueError("need n >= 3")
    lift = FdpmLift(n=n, p=p, quotient=(n % p == 0))
    d = lift.dim
    F = np.zeros((n - 1, n), dtype=np.int64)
    for i in range(n - 1):
        F[i, i] = 1
        F[i, i + 1] = (p - 1) % p

    def act(g: Permutation) -> np.ndarray:
        if g.n != n:
            raise ValueError("degree mismatch")
        inv = g.inverse().images
        moved = F[:, inv]
        y = np.cumsum(moved, axis=1)[:, : n - 1] % p
        if lift.quotient:
            t = y[:, n - 2 : n - 1]
            y = (y + t * lift._u_y()) % p
            return y[:d, :d]
        return y

    gens = [act(g) for g in permsym.coxeter_generators(n)]
    return Representation(
        p=p,
        dim=d,
        generators=gens,
        group=repkit.sn_descriptor(n),
        label=f"fdpm({n})@{p}",
        act_perm=act,
        gen_parities=tuple(1 for _ in gens),
        fdpm_lift=lift,
    )


# ------------------------------------------------------------- associates


def _pprime_class_reps(n: int, p: int) -> list[Permutation]:
    """Representatives of all S_n classes of p'-order (no part divisible
    by p), identity excluded."""
    reps = []
    for mu in partitions(n):
        if mu == tuple([1] * n):
            continue
        if any(part % p == 0 for part in mu):
            continue
        reps.append(permsym.canonical_rep(n, mu))
    return reps


def associate_partition(n: int, p: int, mu, budget: int = TABLOID_BUDGET) -> tuple[int, ...]:
    """The p-regular partition m(mu) with D^{m(mu)} = D^mu tensor sign.

    For p = 2 the twist is trivial and m(mu) = mu.  Otherwise the
    associate is identified by matching Brauer traces against the
    sign-twisted traces of D^mu, first on prime-order classes and, if
    several candidates survive, on all p'-classes.
    """
    mu = check_partition(mu, n)
    if not p_regular(mu, p):
        raise ValueError("mu must be p-regular")
    if p == 2:
        return mu
    data = specht_data(n, p, mu, budget)
    prime_reps = [c.rep for c in permsym.prime_order_class_reps(n, "Sn")]

    def traces(d: SpechtData, reps: list[Permutation]) -> list[int]:
        return [int(np.trace(d.dmu_matrix(g)) % p) for g in reps]

    base = traces(data, prime_reps)
    signs = [(-1) ** g.parity() for g in prime_reps]
    target = [(s * t) % p for s, t in zip(signs, base)]
    candidates = []
    for lam in p_regular_partitions(n, p):
        try:
            cand = specht_data(n, p, lam, budget)
        except BudgetExceededError:
            continue
        if cand.dim != data.dim:
            continue
        if traces(cand, prime_reps) == target:
            candidates.append(lam)
    if len(candidates) > 1:
        reps_all = _pprime_class_reps(n, p)
        base_all = traces(data, reps_all)
        target_all = [((-1) ** g.parity() * t) % p for g, t in zip(reps_all, base_all)]
        candidates = [lam for lam in candidates
                      if traces(specht_data(n, p, lam, budget), reps_all) == target_all]
    if len(candidates) != 1:
        raise RuntimeError(
            f"associate of {mu} mod {p}: {len(candidates)} candidates survive trace matching")
    return candidates[0]


def rn_class(n: int, p: int, mu, budget: int = TABLOID_BUDGET) -> int:
    """n minus the larger first part of mu and its associate."""
    mu = check_partition(mu, n)
    assoc = associate_partition(n, p, mu, budget)
    return n - max(mu[0], assoc[0])
