"""Module/representation toolkit.

A Representation bundles generator matrices over F_p with group
metadata.  Vectors are rows acting on the right (v -> v @ g), matching
the rest of the package.  Representations built from symmetric-group
data carry an ``act_perm`` evaluator so arbitrary permutations (class
representatives, conjugators) can be turned into matrices on demand.

The irreducibility test is a MeatAxe with Norton's criterion: a random
algebra element theta, an irreducible factor f of its minimal
polynomial with dim ker f(theta) == deg f, and spin-up of one kernel
vector on each side.  Budget exhaustion raises; it never reports a
guess.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Callable

import numpy as np

from . import gfplin, permsym
from .gfplin import BudgetExceededError
from .permsym import Permutation


class ParseError(ValueError):
    """Malformed representation file or config."""


# ------------------------------------------------------------------ metadata


@dataclass(frozen=True)
class GroupDescriptor:
    kind: str  # "Sn" | "An" | "External"
    name: str
    order: int
    center_order: int = 1
    n: int | None = None
    center_words: tuple[tuple[int, ...], ...] = ()
    scalar_subgroup_order: int = 1
    scalar_overlap_order: int = 1

    def full_order(self) -> int:
        return permsym.group_order(self)


def sn_descriptor(n: int) -> GroupDescriptor:
    return GroupDescriptor(kind="Sn", name=f"S{n}", order=math.factorial(n), n=n)


def an_descriptor(n: int) -> GroupDescriptor:
    return GroupDescriptor(kind="An", name=f"A{n}", order=math.factorial(n) // 2, n=n)


@dataclass
class Representation:
    p: int
    dim: int
    generators: list[np.ndarray]
    group: GroupDescriptor
    label: str
    act_perm: Callable[[Permutation], np.ndarray] | None = None
    gen_parities: tuple[int, ...] | None = None
    sign_twisted: bool = False
    fdpm_lift: object | None = None
    scalar_value: int | None = None

    def __post_init__(self):
        gfplin.check_prime(self.p)
        for g in self.generators:
            if g.shape != (self.dim, self.dim):
                raise ValueError("generator shape mismatch")

    def matrix(self, g: Permutation) -> np.ndarray:
        """Matrix of a group element given as a permutation, including
        the sign twist if this module carries one."""
        if self.act_perm is None:
            raise ValueError(f"{self.label}: no permutation evaluator (external module)")
        m = self.act_perm(g)
        if self.sign_twisted and g.parity() == 1:
            m = (-m) % self.p
        return m

    def space_size(self) -> int:
        return self.p**self.dim


# ------------------------------------------------------------- constructions


def tensor_sign(rep: Representation) -> Representation:
    """Twist by the sign character (negate images of odd generators)."""
    if rep.group.kind not in ("Sn",) and rep.gen_parities is None:
        raise ValueError("sign twist needs an S_n module or declared generator parities")
    parities = rep.gen_parities
    if parities is None:
        parities = tuple(1 if rep.scalar_value is None or i < len(rep.generators) - 1 else 0
                         for i in range(len(rep.generators)))
    gens = [(-g) % rep.p if par == 1 else g.copy() for g, par in zip(rep.generators, parities)]
    return replace(
        rep,
        generators=gens,
        label=rep.label + "*sgn",
        sign_twisted=not rep.sign_twisted,
        gen_parities=parities,
    )


def restrict_to_an(rep: Representation) -> Representation:
    """Restriction along A_n < S_n, generated by the products s_i s_{i+1}."""
    if rep.group.kind != "Sn":
        raise ValueError("restriction is defined for S_n modules")
    if rep.scalar_value is not None:
        raise ValueError("restrict before adjoining scalars")
    n = rep.group.n
    gens = [gfplin.matmul(rep.generators[i], rep.generators[i + 1], rep.p) for i in range(n - 2)]
    act = rep.act_perm

    def act_even(g: Permutation) -> np.ndarray:
        if g.parity() != 0:
            raise ValueError("A_n module evaluated at an odd permutation")
        return act(g)

    return Representation(
        p=rep.p,
        dim=rep.dim,
        generators=gens,
        group=an_descriptor(n),
        label=rep.label + "|A",
        act_perm=act_even if act is not None else None,
        gen_parities=tuple(0 for _ in gens),
        fdpm_lift=rep.fdpm_lift,
    )


def subrepresentation(rep: Representation, basis: np.ndarray, label_suffix: str) -> Representation:
    """Module on an invariant row-space, with the induced evaluator."""
    basis = gfplin.as_fp(basis, rep.p)
    k = basis.shape[0]
    cols = gfplin.rref(basis, rep.p)[1]
    sub = basis[:, cols]
    subinv = gfplin.invert(sub, rep.p)

    def induce(m: np.ndarray) -> np.ndarray:
        image = gfplin.matmul(basis, m, rep.p)
        return gfplin.matmul(image[:, cols], subinv, rep.p)

    gens = [induce(g) for g in rep.generators]
    for g, m in zip(rep.generators, gens):
        if not np.array_equal(gfplin.matmul(m, basis, rep.p), gfplin.matmul(basis, g, rep.p)):
            raise ValueError("basis is not invariant under the generators")
    parent_act = rep.act_perm
    parent_sign = rep.sign_twisted

    def act(g: Permutation) -> np.ndarray:
        m = parent_act(g)
        if parent_sign and g.parity() == 1:
            m = (-m) % rep.p
        return induce(m)

    return Representation(
        p=rep.p,
        dim=k,
        generators=gens,
        group=rep.group,
        label=rep.label + label_suffix,
        act_perm=act if parent_act is not None else None,
        gen_parities=rep.gen_parities[: len(gens)] if rep.gen_parities else None,
    )


def scalar_extension(rep: Representation, lam: int) -> Representation:
    """Extend to <G, lam*Id>; order metadata via the overlap rule
    |<G, lam>| = |G| * |<lam>| / |rho(Z(G)) cap <lam>|."""
    p = rep.p
    lam %= p
    if lam == 0:
        raise ValueError("scalar must be a unit")
    if rep.scalar_value is not None:
        raise ValueError("module already carries a scalar extension")
    a = _mult_order(lam, p)
    z = _scalar_center_order(rep)
    overlap = math.gcd(a, z)
    desc = replace(rep.group, scalar_subgroup_order=a, scalar_overlap_order=overlap)
    gens = [g.copy() for g in rep.generators] + [(lam * gfplin.identity(rep.dim)) % p]
    parities = rep.gen_parities
    if parities is not None:
        parities = parities + (0,)
    return replace(
        rep,
        generators=gens,
        group=desc,
        label=rep.label + f"*C{a}",
        gen_parities=parities,
        scalar_value=lam,
    )


def _mult_order(lam: int, p: int) -> int:
    order, acc = 1, lam % p
    while acc != 1:
        acc = acc * lam % p
        order += 1
    return order


def _scalar_center_order(rep: Representation) -> int:
    """Order of the scalar subgroup rho(Z(H)) <= F_p^*."""
    orders = [1]
    for word in rep.group.center_words:
        m = evaluate_word(rep, word)
        lam = int(m[0, 0])
        if not np.array_equal(m, (lam * gfplin.identity(rep.dim)) % rep.p):
            raise ValueError("center word does not map to a scalar matrix")
        if lam == 0:
            raise ValueError("center word maps to a singular matrix")
        orders.append(_mult_order(lam, rep.p))
    return math.lcm(*orders)


def evaluate_word(rep: Representation, word) -> np.ndarray:
    """Product of generators by 1-based indices."""
    m = gfplin.identity(rep.dim)
    for idx in word:
        if not 1 <= idx <= len(rep.generators):
            raise ValueError(f"word index {idx} out of range")
        m = gfplin.matmul(m, rep.generators[idx - 1], rep.p)
    return m


# -------------------------------------------------------- polynomial helpers
# Dense F_p[x] arithmetic on ascending int64 coefficient arrays.


def _ptrim(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if nz.size else a[:1] * 0


def _pmul(a, b, p):
    return _ptrim(np.convolve(a, b) % p)


def _pmonic(a, p):
    return a * gfplin.inv_mod(int(a[-1]), p) % p


def _pdivmod(a, b, p):
    a = a.copy() % p
    b = _ptrim(b % p)
    db, da = len(b) - 1, len(a) - 1
    if db < 0 or not b.any():
        raise ZeroDivisionError
    inv = gfplin.inv_mod(int(b[-1]), p)
    q = np.zeros(max(da - db + 1, 1), dtype=np.int64)
    while da >= db and a.any():
        c = a[da] * inv % p
        if c:
            q[da - db] = c
            a[da - db : da + 1] = (a[da - db : da + 1] - c * b) % p
        da -= 1
    return _ptrim(q), _ptrim(a)


def _pgcd(a, b, p):
    a, b = _ptrim(a % p), _ptrim(b % p)
    while b.any():
        a, b = b, _pdivmod(a, b, p)[1]
    return _pmonic(a, p) if a.any() else a


def _ppowmod(a, e, mod, p):
    result = np.array([1], dtype=np.int64)
    base = _pdivmod(a, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _pderiv(a, p):
    if len(a) <= 1:
        return np.zeros(1, dtype=np.int64)
    return _ptrim(a[1:] * np.arange(1, len(a), dtype=np.int64) % p)


def _squarefree_parts(f, p):
    """Irreducible-support list: monic squarefree polynomials whose
    product has the same irreducible factors as f."""
    f = _pmonic(_ptrim(f), p)
    if len(f) == 1:
        return []
    d = _pderiv(f, p)
    if not d.any():
        # f == g(x^p) == (frobenius-twist g)(x)^p over F_p
        g = _ptrim(f[::p])
        return _squarefree_parts(g, p)
    g = _pgcd(f, d, p)
    sf = _pdivmod(f, g, p)[0]
    parts = [sf]
    if len(g) > 1:
        parts.extend(_squarefree_parts(g, p))
    return parts


def _distinct_degree(f, p):
    """(degree, product-of-that-degree) pairs for squarefree monic f."""
    out = []
    x = np.array([0, 1], dtype=np.int64)
    h = x.copy()
    rest = f.copy()
    d = 0
    while len(rest) - 1 >= 2 * (d + 1):
        d += 1
        h = _ppowmod(h, p, rest, p)
        diff = h.copy()
        # h - x mod rest
        sub = np.zeros(max(len(diff), 2), dtype=np.int64)
        sub[: len(diff)] = diff
        sub[1] = (sub[1] - 1) % p
        g = _pgcd(sub, rest, p)
        if len(g) > 1:
            out.append((d, g))
            rest = _pdivmod(rest, g, p)[0]
            h = _pdivmod(h, rest, p)[1]
    if len(rest) > 1:
        out.append((len(rest) - 1, rest))
    return out


def _equal_degree_split(f, d, p, rng):
    """Cantor-Zassenhaus split of a product of degree-d irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = rng.integers(0, p, size=n, dtype=np.int64)
        a[-1] = max(int(a[-1]), 1)
        a = _ptrim(a)
        if len(a) <= 1:
            continue
        if p == 2:
            # trace map sum_{i<d} a^(2^i)
            t = np.zeros(1, dtype=np.int64)
            acc = _pdivmod(a, f, p)[1]
            for _ in range(d):
                t = _ptrim((np.pad(t, (0, max(0, len(acc) - len(t)))) +
                            np.pad(acc, (0, max(0, len(t) - len(acc))))) % p)
                acc = _pdivmod(_pmul(acc, acc, p), f, p)[1]
            g = _pgcd(t, f, p)
        else:
            e = (p**d - 1) // 2
            b = _ppowmod(a, e, f, p)
            b = b.copy()
            b[0] = (b[0] - 1) % p
            g = _pgcd(_ptrim(b), f, p)
        if 0 < len(g) - 1 < n:
            left = _equal_degree_split(g, d, p, rng)
            right = _equal_degree_split(_pdivmod(f, g, p)[0], d, p, rng)
            return left + right


def factor_squarefree_support(f, p, rng) -> list[np.ndarray]:
    """Distinct monic irreducible factors of f (multiplicities dropped)."""
    seen: dict[bytes, np.ndarray] = {}
    for part in _squarefree_parts(f, p):
        for d, block in _distinct_degree(part, p):
            for irr in _equal_degree_split(block, d, p, rng):
                irr = _pmonic(irr, p)
                seen[irr.tobytes()] = irr
    return sorted(seen.values(), key=lambda a: (len(a), a.tolist()))


def _poly_at_matrix(coeffs, m, p) -> np.ndarray:
    d = m.shape[0]
    acc = np.zeros((d, d), dtype=np.int64)
    for c in coeffs[::-1]:
        acc = gfplin.matmul(acc, m, p)
        if c:
            acc = (acc + c * gfplin.identity(d)) % p
    return acc


def minimal_polynomial(m: np.ndarray, p: int) -> np.ndarray:
    """Exact minimal polynomial: lcm of the local relations of the
    standard basis vectors (ascending coefficients, monic)."""
    d = m.shape[0]
    mp = np.array([1], dtype=np.int64)
    for i in range(d):
        if len(mp) - 1 == d:
            break
        v = np.zeros(d, dtype=np.int64)
        v[i] = 1
        rows = [v]
        while True:
            nxt = gfplin.matmul(rows[-1], m, p)
            coeffs = gfplin.solve_in_span(np.array(rows), nxt, p)
            if coeffs is not None:
                local = np.zeros(len(rows) + 1, dtype=np.int64)
                local[: len(rows)] = (-coeffs) % p
                local[-1] = 1
                break
            rows.append(nxt)
        gcd = _pgcd(mp, local, p)
        mp = _pdivmod(_pmul(mp, local, p), gcd, p)[0]
    return _pmonic(mp, p)


# ------------------------------------------------------------------- meataxe


@dataclass
class SplitResult:
    kind: str  # "irreducible" | "splits"
    invariant_basis: np.ndarray | None
    tries: int
    certificate: dict = field(default_factory=dict)


def spin(seed_rows: np.ndarray, gens: list[np.ndarray], p: int) -> np.ndarray:
    """Smallest invariant row space containing the seed rows (RREF basis)."""
    basis, _ = gfplin.rref(np.atleast_2d(seed_rows), p)
    basis = basis[: gfplin.rank(basis, p)]
    frontier = basis
    d = seed_rows.shape[-1]
    while frontier.shape[0] and basis.shape[0] < d:
        images = np.concatenate([gfplin.matmul(frontier, g, p) for g in gens], axis=0)
        stacked = np.concatenate([basis, images], axis=0)
        new_basis, _ = gfplin.rref(stacked, p)
        new_rank = int((new_basis.any(axis=1)).sum())
        new_basis = new_basis[:new_rank]
        if new_rank == basis.shape[0]:
            break
        frontier = _rows_outside(new_basis, basis, p)
        basis = new_basis
    return basis


def _rows_outside(new_basis: np.ndarray, old_basis: np.ndarray, p: int) -> np.ndarray:
    keep = []
    for row in new_basis:
        if old_basis.shape[0] == 0 or gfplin.solve_in_span(old_basis, row, p) is None:
            keep.append(row)
    return np.array(keep, dtype=np.int64) if keep else np.zeros((0, new_basis.shape[1]), dtype=np.int64)


def _random_algebra_element(gens, p, rng) -> np.ndarray:
    d = gens[0].shape[0]
    theta = np.zeros((d, d), dtype=np.int64)
    for g in gens:
        theta = (theta + int(rng.integers(0, p)) * g) % p
    for _ in range(2):
        i, j = rng.integers(0, len(gens), size=2)
        theta = (theta + int(rng.integers(0, p)) * gfplin.matmul(gens[i], gens[j], p)) % p
    return theta


def split_or_irreducible(rep: Representation, seed: int = gfplin.DEFAULT_SEED,
                         max_tries: int = 40) -> SplitResult:
    """MeatAxe decision with Norton's criterion.

    Returns Splits with an invariant-subspace basis, or Irreducible with
    the certifying data; raises BudgetExceededError when max_tries
    random algebra elements produce no multiplicity-one factor.
    """
    p, d, gens = rep.p, rep.dim, rep.generators
    if d == 0:
        raise ValueError("zero module")
    if not gens:
        raise ValueError("no generators")
    rng = np.random.default_rng(seed)
    gens_t = [np.ascontiguousarray(g.T) for g in gens]
    for trial in range(1, max_tries + 1):
        theta = _random_algebra_element(gens, p, rng)
        mp = minimal_polynomial(theta, p)
        for irr in factor_squarefree_support(mp, p, rng):
            ft = _poly_at_matrix(irr, theta, p)
            nullity = d - gfplin.rank(ft, p)
            if nullity != len(irr) - 1:
                continue
            w = gfplin.kernel(ft, p)[0]
            sub = spin(w, gens, p)
            if sub.shape[0] < d:
                _assert_invariant(sub, gens, p)
                return SplitResult("splits", sub, trial)
            wt = gfplin.kernel(ft.T, p)[0]
            sub_t = spin(wt, gens_t, p)
            if sub_t.shape[0] < d:
                perp = gfplin.kernel(sub_t.T, p)
                _assert_invariant(perp, gens, p)
                return SplitResult("splits", perp, trial)
            cert = {"theta_trial": trial, "factor_degree": len(irr) - 1, "seed": seed}
            return SplitResult("irreducible", None, trial, cert)
    raise BudgetExceededError(
        f"{rep.label}: undecided within budget ({max_tries} algebra elements)")


def _assert_invariant(basis: np.ndarray, gens, p) -> None:
    for g in gens:
        image = gfplin.matmul(basis, g, p)
        if gfplin.solve_matrix_in_span(basis, image, p) is None:
            raise AssertionError("meataxe produced a non-invariant subspace")


def an_pieces(rep_sn: Representation, seed: int = gfplin.DEFAULT_SEED) -> tuple[Representation, ...]:
    """Restrict an S_n module to A_n and split it if it splits.

    Returns a 1-tuple (irreducible restriction) or the two conjugate
    halves W and W*s_0 as separate modules.
    """
    restr = restrict_to_an(rep_sn)
    result = split_or_irreducible(restr, seed=seed)
    if result.kind == "irreducible":
        return (restr,)
    w = result.invariant_basis
    odd = rep_sn.generators[0]  # s_0 is odd
    wg = gfplin.matmul(w, odd, rep_sn.p)
    both = np.concatenate([w, wg], axis=0)
    if gfplin.rank(both, rep_sn.p) != rep_sn.dim or 2 * w.shape[0] != rep_sn.dim:
        raise AssertionError("restriction did not split into two conjugate halves")
    piece0 = subrepresentation(restr, w, ".w0")
    piece1 = subrepresentation(restr, wg, ".w1")
    return (piece0, piece1)


# ------------------------------------------------------------ endomorphisms


def endo_field_degree(rep: Representation, max_cyclic_tries: int = 8) -> int:
    """F_p-dimension of the commuting algebra.

    For an irreducible module this is the degree of its endomorphism
    field over F_p; reducible split modules report >= 2.  Computed from
    a cyclic vector when one exists, else by the full commutant solve.
    """
    p, d, gens = rep.p, rep.dim, rep.generators
    for i in range(min(d, max_cyclic_tries)):
        v = np.zeros(d, dtype=np.int64)
        v[i] = 1
        basis_rows = [v]
        words = [gfplin.identity(d)]
        frontier = [0]
        while frontier and len(basis_rows) < d:
            new_frontier = []
            for bi in frontier:
                for g in gens:
                    cand = gfplin.matmul(basis_rows[bi], g, p)
                    if gfplin.solve_in_span(np.array(basis_rows), cand, p) is None:
                        basis_rows.append(cand)
                        words.append(gfplin.matmul(words[bi], g, p))
                        new_frontier.append(len(basis_rows) - 1)
                        if len(basis_rows) == d:
                            break
                if len(basis_rows) == d:
                    break
            frontier = new_frontier
        if len(basis_rows) < d:
            continue
        basis = np.array(basis_rows, dtype=np.int64)
        blocks = []
        for m, word in enumerate(words):
            for g in gens:
                gamma = gfplin.solve_in_span(basis, gfplin.matmul(basis[m], g, p), p)
                a = gfplin.matmul(word, g, p)
                for k, c in enumerate(gamma):
                    if c:
                        a = (a - c * words[k]) % p
                blocks.append(a)
        system = np.concatenate(blocks, axis=1)
        return gfplin.kernel(system, p).shape[0]
    # no cyclic vector found; fall back to the full commutant system
    if d > 48 and p != 2:
        raise BudgetExceededError("commutant solve too large without a cyclic vector")
    eye = np.eye(d, dtype=np.int64)
    rows = []
    for g in gens:
        op = (np.kron(g.T, eye) - np.kron(eye, g)) % p
        rows.append(op)
    system = np.concatenate(rows, axis=0)
    return d * d - gfplin.rank(system, p)


# ------------------------------------------------------- covers & relations


def validate_cover_relations(rep: Representation, variant: str) -> tuple[bool, list[str]]:
    """Check the double-cover Coxeter-style presentation on the
    generators t_1..t_{n-1} with z given by the group's center word.

    plus variant:  t_i^2 = (t_i t_{i+1})^3 = 1,  (t_i t_j)^2 = z  (|i-j| > 1)
    minus variant: t_i^2 = (t_i t_{i+1})^3 = z,  (t_i t_j)^2 = z  (|i-j| > 1)
    """
    if variant not in ("plus", "minus"):
        raise ValueError("variant must be plus or minus")
    p, d = rep.p, rep.dim
    eye = gfplin.identity(d)
    gens = rep.generators if rep.scalar_value is None else rep.generators[:-1]
    if rep.group.center_words:
        z = evaluate_word(rep, rep.group.center_words[0])
    else:
        z = eye
    target = z if variant == "minus" else eye
    bad: list[str] = []
    if not np.array_equal(gfplin.matmul(z, z, p), eye):
        bad.append("z^2 != 1")
    for i, t in enumerate(gens, start=1):
        if not np.array_equal(gfplin.matmul(z, t, p), gfplin.matmul(t, z, p)):
            bad.append(f"z t_{i} != t_{i} z")
        if not np.array_equal(gfplin.matmul(t, t, p), target):
            bad.append(f"t_{i}^2 wrong")
    for i in range(len(gens) - 1):
        prod = gfplin.matmul(gens[i], gens[i + 1], p)
        cube = gfplin.matmul(gfplin.matmul(prod, prod, p), prod, p)
        if not np.array_equal(cube, target):
            bad.append(f"(t_{i + 1} t_{i + 2})^3 wrong")
    for i in range(len(gens)):
        for j in range(i + 2, len(gens)):
            prod = gfplin.matmul(gens[i], gens[j], p)
            sq = gfplin.matmul(prod, prod, p)
            if not np.array_equal(sq, z):
                bad.append(f"(t_{i + 1} t_{j + 1})^2 != z")
    return (not bad, bad)


def faithfulness_check(rep: Representation) -> tuple[bool, str]:
    """Faithfulness of the underlying group on this module.

    S_n/A_n kinds (n >= 5): any module of dimension >= 2 is faithful
    (the only smaller quotients factor through the abelianization).
    External covers: every center word must act nontrivially; a center
    of order 2 must map to -Id exactly.
    """
    if rep.group.kind in ("Sn", "An"):
        if rep.group.n is not None and rep.group.n < 5:
            return (False, "n < 5: no simplicity argument")
        return (rep.dim >= 2, "dim >= 2" if rep.dim >= 2 else "1-dimensional quotient")
    if rep.group.center_order > 1 and not rep.group.center_words:
        return (False, "nontrivial center without center words")
    eye = gfplin.identity(rep.dim)
    for word in rep.group.center_words:
        m = evaluate_word(rep, word)
        if np.array_equal(m, eye):
            return (False, "center word acts trivially")
        if rep.group.center_order == 2:
            if not np.array_equal(m, (-eye) % rep.p):
                return (False, "central involution does not act as -Id")
    return (True, "center acts faithfully")


def bfs_closure(gens: list[np.ndarray], p: int, budget: int = 500_000) -> list[np.ndarray]:
    """All elements of the matrix group generated by gens (BFS order)."""
    d = gens[0].shape[0]
    start = gfplin.identity(d)
    seen = {start.tobytes(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                prod = gfplin.matmul(m, g, p)
                key = prod.tobytes()
                if key not in seen:
                    if len(seen) >= budget:
                        raise BudgetExceededError(f"group closure exceeds budget {budget}")
                    seen[key] = prod
                    nxt.append(prod)
        frontier = nxt
    return list(seen.values())


def matrix_order(m: np.ndarray, p: int, cap: int = 10_000) -> int:
    eye = gfplin.identity(m.shape[0])
    acc = m
    for k in range(1, cap + 1):
        if np.array_equal(acc, eye):
            return k
        acc = gfplin.matmul(acc, m, p)
    raise BudgetExceededError("element order exceeds cap")


# ------------------------------------------------------------------- file io

_HEADER = "regorb-rep 1"


def save_rep(rep: Representation, path: str) -> None:
    lines = [_HEADER]
    lines.append(f"p {rep.p} dim {rep.dim} gens {len(rep.generators)}")
    lines.append(f"group {rep.group.name} order {rep.group.order} center {rep.group.center_order}")
    for word in rep.group.center_words:
        lines.append("zword " + " ".join(str(i) for i in word))
    for i, g in enumerate(rep.generators, start=1):
        lines.append(f"gen {i}")
        for row in g:
            lines.append(" ".join(str(int(x)) for x in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_rep(path: str) -> Representation:
    with open(path) as fh:
        text = fh.read()
    return parse_rep(text, source=path)


def parse_rep(text: str, source: str = "<string>") -> Representation:
    if "\t" in text:
        raise ParseError(f"{source}: tabs are not allowed")
    lines = text.splitlines()
    if not lines or lines[0].strip() != _HEADER:
        raise ParseError(f"{source}:1: expected header '{_HEADER}'")
    m = re.fullmatch(r"p (\d+) dim (\d+) gens (\d+)", lines[1].strip()) if len(lines) > 1 else None
    if not m:
        raise ParseError(f"{source}:2: expected 'p <prime> dim <d> gens <k>'")
    p, dim, ngens = (int(x) for x in m.groups())
    if not gfplin.is_prime(p):
        raise ParseError(f"{source}:2: p must be prime, got {p}")
    m = re.fullmatch(r"group (\S+) order (\d+) center (\d+)", lines[2].strip()) if len(lines) > 2 else None
    if not m:
        raise ParseError(f"{source}:3: expected 'group <name> order <N> center <c>'")
    name, order, center = m.group(1), int(m.group(2)), int(m.group(3))
    idx = 3
    words: list[tuple[int, ...]] = []
    while idx < len(lines) and lines[idx].startswith("zword"):
        try:
            words.append(tuple(int(t) for t in lines[idx].split()[1:]))
        except ValueError as exc:
            raise ParseError(f"{source}:{idx + 1}: bad zword") from exc
        idx += 1
    gens = []
    for gi in range(1, ngens + 1):
        if idx >= len(lines) or lines[idx].strip() != f"gen {gi}":
            raise ParseError(f"{source}:{idx + 1}: expected 'gen {gi}'")
        idx += 1
        rows = []
        for _ in range(dim):
            if idx >= len(lines):
                raise ParseError(f"{source}:{idx + 1}: truncated generator {gi}")
            try:
                row = [int(t) for t in lines[idx].split()]
            except ValueError as exc:
                raise ParseError(f"{source}:{idx + 1}: non-integer entry") from exc
            if len(row) != dim:
                raise ParseError(f"{source}:{idx + 1}: expected {dim} entries")
            if any(not 0 <= x < p for x in row):
                raise ParseError(f"{source}:{idx + 1}: entries must lie in [0, {p})")
            rows.append(row)
            idx += 1
        gens.append(np.array(rows, dtype=np.int64))
    trailing = [ln for ln in lines[idx:] if ln.strip()]
    if trailing:
        raise ParseError(f"{source}:{idx + 1}: unexpected trailing content")
    kind, n = "External", None
    km = re.fullmatch(r"([SA])(\d+)", name)
    if km:
        n = int(km.group(2))
        expected = math.factorial(n) // (1 if km.group(1) == "S" else 2)
        if expected == order:
            kind = "Sn" if km.group(1) == "S" else "An"
    desc = GroupDescriptor(kind=kind, name=name, order=order, center_order=center,
                           n=n, center_words=tuple(words))
    return Representation(p=p, dim=dim, generators=gens, group=desc, label=name)


def load_builtin_cover(name: str = "sl2_5_f5") -> Representation:
    text = resources.files("regorb").joinpath(f"data/{name}.rep").read_text()
    return parse_rep(text, source=f"builtin:{name}")
