"""Symmetric and alternating group combinatorics.

Permutations are stored as 0-based image tuples and act on the right:
point i goes to g[i], and (g * h)[i] == h[g[i]].  Conjugacy-class sizes
and orders are exact Python integers throughout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        img = list(range(n))
        img[i], img[j] = j, i
        return cls(img)

    @classmethod
    def from_cycles(cls, n: int, cycles) -> "Permutation":
        img = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)((cyc[0],))):
                img[a] = b
        return cls(img)

    @property
    def n(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        cyc = self.cycles(nontrivial=True)
        if not cyc:
            return f"Permutation(id, n={self.n})"
        return "Permutation(" + "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) + ")"

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self, nontrivial: bool = False) -> list[tuple[int, ...]]:
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if len(cyc) > 1 or not nontrivial:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def parity(self) -> int:
        """0 for even, 1 for odd."""
        return sum(len(c) - 1 for c in self.cycles()) % 2

    def is_even(self) -> bool:
        return self.parity() == 0

    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)


def cycle_type_multiplicities(ctype) -> dict[int, int]:
    mult: dict[int, int] = {}
    for part in ctype:
        mult[part] = mult.get(part, 0) + 1
    return mult


def class_size_sn(n: int, ctype) -> int:
    """|g^{S_n}| for the class of cycle type ctype: n! / prod k^{m_k} m_k!."""
    if sum(ctype) != n:
        raise ValueError(f"cycle type {ctype} does not partition {n}")
    denom = 1
    for k, m in cycle_type_multiplicities(ctype).items():
        denom *= k**m * math.factorial(m)
    return math.factorial(n) // denom


def type_parity(ctype) -> int:
    return sum(k - 1 for k in ctype) % 2


def type_order(ctype) -> int:
    return reduce(math.lcm, ctype, 1)


def canonical_rep(n: int, ctype) -> Permutation:
    """Class representative with cycles filled by consecutive ascending points."""
    img = list(range(n))
    start = 0
    for k in sorted(ctype, reverse=True):
        if k > 1:
            for off in range(k):
                img[start + off] = start + (off + 1) % k
        start += k
    return Permutation(img)


@dataclass(frozen=True)
class ClassRep:
    ctype: tuple[int, ...]
    rep: Permutation
    size: int
    group: str  # "Sn" or "An"


def splits_in_an(ctype) -> bool:
    """An S_n-class of even permutations splits in A_n iff all cycle
    lengths are odd and pairwise distinct."""
    lengths = list(ctype)
    return all(k % 2 == 1 for k in lengths) and len(set(lengths)) == len(lengths)


def prime_order_class_reps(n: int, group: str = "Sn") -> list[ClassRep]:
    """Conjugacy-class representatives of the prime-order elements.

    For A_n, S_n-classes that split are returned as two halved classes,
    the second representative conjugated by the transposition (0 1).
    """
    if group not in ("Sn", "An"):
        raise ValueError(f"group must be Sn or An, got {group!r}")
    out: list[ClassRep] = []
    for r in range(2, n + 1):
        if not _is_prime(r):
            continue
        for k in range(1, n // r + 1):
            ctype = tuple([r] * k + [1] * (n - r * k))
            if group == "An" and type_parity(ctype) == 1:
                continue
            size = class_size_sn(n, ctype)
            rep = canonical_rep(n, ctype)
            if group == "Sn":
                out.append(ClassRep(ctype, rep, size, "Sn"))
            elif splits_in_an(ctype):
                t = Permutation.transposition(n, 0, 1)
                out.append(ClassRep(ctype, rep, size // 2, "An"))
                out.append(ClassRep(ctype, t * rep * t, size // 2, "An"))
            else:
                out.append(ClassRep(ctype, rep, size, "An"))
    return out


def _is_prime(r: int) -> bool:
    if r < 2:
        return False
    return all(r % d for d in range(2, int(r**0.5) + 1))


def coxeter_generators(n: int) -> list[Permutation]:
    """Adjacent transpositions s_i = (i, i+1), i = 0..n-2."""
    return [Permutation.transposition(n, i, i + 1) for i in range(n - 1)]


def an_generators(n: int) -> list[Permutation]:
    """Products s_i s_{i+1} (3-cycles), generating A_n for n >= 3."""
    gens = coxeter_generators(n)
    return [gens[i] * gens[i + 1] for i in range(n - 2)]


def sn_order(n: int) -> int:
    return math.factorial(n)


def an_order(n: int) -> int:
    return math.factorial(n) // 2


def group_order(descriptor) -> int:
    """|<H, A>| = |H| * |A| / |rho(Z(H)) cap A| from a GroupDescriptor."""
    a = descriptor.scalar_subgroup_order
    overlap = descriptor.scalar_overlap_order
    if a % overlap:
        raise ValueError("scalar overlap must divide the scalar subgroup order")
    return descriptor.order * a // overlap


def enumerate_class_elements(n: int, ctype):
    """Yield every permutation of S_n with the given cycle type, each once.

    The least unplaced point anchors the next cycle, so each element is
    produced exactly once; total count equals class_size_sn.
    """
    mult = cycle_type_multiplicities(tuple(ctype))
    if sum(ctype) != n:
        raise ValueError(f"cycle type {ctype} does not partition {n}")

    def rec(remaining: tuple[int, ...], counts: dict[int, int], acc: list[tuple[int, ...]]):
        if not remaining:
            yield Permutation.from_cycles(n, acc)
            return
        anchor = remaining[0]
        rest = remaining[1:]
        for length in sorted(counts):
            if counts[length] == 0:
                continue
            counts[length] -= 1
            if length == 1:
                yield from rec(rest, counts, acc)
            else:
                for comb in itertools.combinations(rest, length - 1):
                    leftover = tuple(x for x in rest if x not in comb)
                    for perm in itertools.permutations(comb):
                        acc.append((anchor,) + perm)
                        yield from rec(leftover, counts, acc)
                        acc.pop()
            counts[length] += 1

    yield from rec(tuple(range(n)), dict(mult), [])


def prime_order_elements(n: int, group: str = "Sn"):
    """Yield all prime-order elements of S_n or A_n."""
    seen_types = set()
    for cr in prime_order_class_reps(n, group):
        if cr.ctype in seen_types:
            continue  # split classes share one cycle type
        seen_types.add(cr.ctype)
        yield from enumerate_class_elements(n, cr.ctype)
