# springerlab/services/rootsys.py

"""
Root systems, coroots, Weyl groups as permutation groups on the roots,
reflection subgroups and the Theta~ / Theta~_r machinery used to build
the inductive character sets.

Roots are integer coordinate tuples in the simple-root basis. Positive roots
are ordered by height, then by descending coordinates; the full root list is
the positive roots followed by their negatives, so root ``i + N`` is ``-root i``.
"""

from __future__ import annotations

import itertools
import logging
import re
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from springerlab.services.errors import DomainMismatchError, UnsupportedTypeError

logger = logging.getLogger(__name__)

Root = Tuple[int, ...]

SIMPLE_NAMES = {
    "G2": "ab",
    "F4": "pqrs",
}
GENERIC_NAMES = "abcdefgh"

_TYPE_TOKEN = re.compile(r"([ABCDFG])(\d+)")
_ROOT_TOKEN = re.compile(r"(\d*)([a-z])")


# ==========================================================
# Cartan data
# ==========================================================

def _gram_for(letter: str, n: int) -> np.ndarray:
    """Gram matrix of the simple roots, normalised so short roots have (a,a)=2."""
    g = np.zeros((n, n), dtype=np.int64)
    if letter == "A":
        for i in range(n):
            g[i, i] = 2
            if i + 1 < n:
                g[i, i + 1] = g[i + 1, i] = -1
    elif letter == "B":
        for i in range(n):
            g[i, i] = 4 if i < n - 1 else 2
            if i + 1 < n:
                g[i, i + 1] = g[i + 1, i] = -2
    elif letter == "C":
        for i in range(n):
            g[i, i] = 2 if i < n - 1 else 4
            if i + 1 < n:
                g[i, i + 1] = g[i + 1, i] = -2 if i + 1 == n - 1 else -1
    elif letter == "D":
        for i in range(n):
            g[i, i] = 2
        for i in range(n - 2):
            g[i, i + 1] = g[i + 1, i] = -1
        g[n - 3, n - 1] = g[n - 1, n - 3] = -1
    elif letter == "G":
        g[:] = [[2, -3], [-3, 6]]
    elif letter == "F":
        g[:] = [
            [4, -2, 0, 0],
            [-2, 4, -2, 0],
            [0, -2, 2, -1],
            [0, 0, -1, 2],
        ]
    return g


def parse_type_label(type_label: str) -> List[Tuple[str, int]]:
    """'F4' -> [('F', 4)]; 'A1xB3' or 'B3A1' -> [('B', 3), ('A', 1)] in written order."""
    cleaned = type_label.replace("~", "").replace("Ã", "A").replace("x", "").replace("×", "")
    cleaned = cleaned.replace(" ", "").upper()
    parts = _TYPE_TOKEN.findall(cleaned)
    if not parts or "".join(f"{a}{b}" for a, b in parts) != cleaned:
        raise UnsupportedTypeError(f"Unsupported Cartan type: {type_label!r}")
    out = []
    for letter, rank in parts:
        n = int(rank)
        ok = (
            (letter == "A" and 1 <= n <= 4)
            or (letter in "BC" and 2 <= n <= 4)
            or (letter == "D" and n == 4)
            or (letter == "G" and n == 2)
            or (letter == "F" and n == 4)
        )
        if not ok:
            raise UnsupportedTypeError(f"Unsupported Cartan type component {letter}{n} in {type_label!r}")
        out.append((letter, n))
    return out


# ==========================================================
# Component classification (used for subsystems built from a Gram matrix)
# ==========================================================

@dataclass(frozen=True)
class Component:
    letter: str
    rank: int
    order: Tuple[int, ...]  # simple-root indices in standard chain order
    short: bool  # every root short relative to the ambient maximum

    @property
    def label(self) -> str:
        return f"{self.letter}{self.rank}"


def _classify_components(gram: np.ndarray, ambient_max_norm: int) -> List[Component]:
    n = gram.shape[0]
    seen = set()
    comps: List[Component] = []
    for start in range(n):
        if start in seen:
            continue
        members = []
        queue = deque([start])
        seen.add(start)
        while queue:
            i = queue.popleft()
            members.append(i)
            for j in range(n):
                if j not in seen and gram[i, j] != 0:
                    seen.add(j)
                    queue.append(j)
        members.sort()
        comps.append(_classify_one(gram, members, ambient_max_norm))
    return comps


def _chain_order(gram: np.ndarray, members: List[int], first: int) -> List[int]:
    order = [first]
    prev = None
    cur = first
    while True:
        nxt = [j for j in members if j != cur and j != prev and gram[cur, j] != 0]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        order.append(cur)
    return order


def _classify_one(gram: np.ndarray, members: List[int], ambient_max_norm: int) -> Component:
    k = len(members)
    norms = {i: int(gram[i, i]) for i in members}
    hi, lo = max(norms.values()), min(norms.values())
    degree = {i: sum(1 for j in members if j != i and gram[i, j] != 0) for i in members}
    ends = [i for i in members if degree[i] <= 1]
    all_short = hi < ambient_max_norm

    if k == 1:
        return Component("A", 1, (members[0],), all_short)

    if hi == lo:
        branch = [i for i in members if degree[i] == 3]
        if branch:
            centre = branch[0]
            leaves = sorted(j for j in members if j != centre)
            return Component("D", k, (leaves[0], centre, leaves[1], leaves[2]), all_short)
        return Component("A", k, tuple(_chain_order(gram, members, min(ends))), all_short)

    if hi == 3 * lo:
        short_end = [i for i in ends if norms[i] == lo][0]
        return Component("G", 2, tuple(_chain_order(gram, members, short_end)), False)

    n_long = sum(1 for i in members if norms[i] == hi)
    n_short = k - n_long
    if k == 4 and n_long == 2 and n_short == 2:
        long_end = [i for i in ends if norms[i] == hi][0]
        return Component("F", 4, tuple(_chain_order(gram, members, long_end)), False)
    if n_short == 1 or k == 2:
        long_end = [i for i in ends if norms[i] == hi][0]
        return Component("B", k, tuple(_chain_order(gram, members, long_end)), False)
    if n_long == 1:
        short_end = [i for i in ends if norms[i] == lo][0]
        return Component("C", k, tuple(_chain_order(gram, members, short_end)), False)
    raise UnsupportedTypeError(f"Unrecognised Dynkin component with norms {norms}")


def _epsilon_simple(comp: Component) -> List[Tuple[int, ...]]:
    """Orthonormal-coordinate realisation of a component's simple roots in chain order."""
    n = comp.rank
    letter = comp.letter
    if letter == "A":
        vecs = []
        for i in range(n):
            v = [0] * (n + 1)
            v[i], v[i + 1] = 1, -1
            vecs.append(tuple(v))
        return vecs
    if letter in "BCD":
        vecs = []
        for i in range(n - 1):
            v = [0] * n
            v[i], v[i + 1] = 1, -1
            vecs.append(tuple(v))
        last = [0] * n
        if letter == "B":
            last[n - 1] = 1
        elif letter == "C":
            last[n - 1] = 2
        else:
            last[n - 2], last[n - 1] = 1, 1
        vecs.append(tuple(last))
        return vecs
    return []


# ==========================================================
# Root system
# ==========================================================

class RootSystem:
    """Finite crystallographic root system given by the Gram matrix of its simple roots."""

    def __init__(
        self,
        gram: np.ndarray,
        simple_names: Sequence[str],
        type_label: Optional[str] = None,
        ambient_max_norm: Optional[int] = None,
    ):
        self.gram = np.array(gram, dtype=np.int64)
        self.rank = self.gram.shape[0]
        self.simple_names = list(simple_names)
        max_norm = int(max(np.diag(self.gram))) if self.rank else 2
        self._ambient_max_norm = ambient_max_norm or max_norm
        self.components = _classify_components(self.gram, self._ambient_max_norm) if self.rank else []
        self.type_label = type_label or self._label(tilde=True)
        self.weyl_type = self._label(tilde=False)
        self._build_roots()

    # ---------------- construction helpers ----------------

    def _label(self, tilde: bool) -> str:
        if not self.components:
            return "T0"
        ordered = sorted(self.components, key=lambda c: (-c.rank, c.short, c.letter))
        parts = []
        for c in ordered:
            mark = "Ã" if (tilde and c.letter == "A" and c.short and c.rank >= 2) else c.letter
            parts.append(f"{mark}{c.rank}")
        return "".join(parts)

    def _build_roots(self):
        n = self.rank
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        found = set(simple)
        queue = deque(simple)
        while queue:
            v = queue.popleft()
            for i in range(n):
                w = self._reflect_vec(v, i)
                if w not in found:
                    found.add(w)
                    queue.append(w)
        positive = [v for v in found if all(c >= 0 for c in v)]
        positive.sort(key=lambda c: (sum(c), tuple(-x for x in c)))
        self.positive_roots: List[Root] = positive
        self.n_pos = len(positive)
        self.roots: List[Root] = positive + [tuple(-x for x in v) for v in positive]
        self.index: Dict[Root, int] = {v: i for i, v in enumerate(self.roots)}
        self.norms = [self.inner(v, v) for v in self.roots]
        self.coroots: List[Root] = [self._coroot_coords(v) for v in self.roots]
        self.coroot_index: Dict[Root, int] = {v: i for i, v in enumerate(self.coroots)}
        self.cartan_matrix = np.array(
            [[self.pairing_vec(self.roots[i], j) for j in range(n)] for i in range(n)],
            dtype=np.int64,
        )
        self._component_of = self._root_components()
        comp_max = {}
        for idx, c in enumerate(self.components):
            comp_max[idx] = max(int(self.gram[i, i]) for i in c.order)
        self.length_class = [
            "long" if self.norms[i] == comp_max.get(self._component_of[i], self.norms[i]) else "short"
            for i in range(len(self.roots))
        ]
        self._reflections = [self._reflection_perm(i) for i in range(len(self.roots))]

    def _root_components(self) -> List[int]:
        owner = {}
        for ci, c in enumerate(self.components):
            for i in c.order:
                owner[i] = ci
        out = []
        for v in self.roots:
            support = [i for i, x in enumerate(v) if x != 0]
            out.append(owner[support[0]] if support else -1)
        return out

    def _coroot_coords(self, v: Root) -> Root:
        nv = self.inner(v, v)
        coords = []
        for i, c in enumerate(v):
            num = c * int(self.gram[i, i])
            if num % nv:
                raise ValueError(f"non-integral coroot for {v}")
            coords.append(num // nv)
        return tuple(coords)

    def _reflect_vec(self, v: Root, i: int) -> Root:
        k = self.pairing_vec(v, i)
        return tuple(x - k * int(i == j) for j, x in enumerate(v))

    def _reflection_perm(self, j: int) -> Tuple[int, ...]:
        r = self.roots[j]
        out = []
        for v in self.roots:
            k = 2 * self.inner(v, r) // self.norms[j]
            out.append(self.index[tuple(a - k * b for a, b in zip(v, r))])
        return tuple(out)

    # ---------------- public API ----------------

    def inner(self, u: Sequence[int], v: Sequence[int]) -> int:
        return int(np.asarray(u, dtype=np.int64) @ self.gram @ np.asarray(v, dtype=np.int64))

    def pairing_vec(self, v: Sequence[int], i: int) -> int:
        """<v, alpha_i^vee> for the simple root alpha_i."""
        num = 2 * int(np.asarray(v, dtype=np.int64) @ self.gram[:, i])
        return num // int(self.gram[i, i])

    def pairing(self, b: int, a: int) -> int:
        """<root_b, root_a^vee> for root indices."""
        return 2 * self.inner(self.roots[b], self.roots[a]) // self.norms[a]

    def reflection(self, i: int) -> Tuple[int, ...]:
        return self._reflections[i]

    def negative(self, i: int) -> int:
        return i + self.n_pos if i < self.n_pos else i - self.n_pos

    def is_positive(self, i: int) -> bool:
        return i < self.n_pos

    def height(self, i: int) -> int:
        return sum(self.roots[i])

    def add(self, a: int, b: int) -> Optional[int]:
        """Index of root_a + root_b, or None if the sum is not a root."""
        return self.index.get(tuple(x + y for x, y in zip(self.roots[a], self.roots[b])))

    def root_name(self, i: int) -> str:
        v = self.roots[i]
        sign = "-" if any(x < 0 for x in v) else ""
        out = []
        for name, c in zip(self.simple_names, v):
            c = abs(c)
            if c:
                out.append(f"{c if c > 1 else ''}{name}")
        return sign + "".join(out)

    def parse_root_name(self, name: str) -> int:
        """Inverse of root_name: 'q2r2s' -> index of q+2r+2s, '-pq' -> index of -(p+q)."""
        text = name.strip()
        sign = 1
        if text.startswith("-"):
            sign, text = -1, text[1:]
        tokens = _ROOT_TOKEN.findall(text)
        if not tokens or "".join(a + b for a, b in tokens) != text:
            raise DomainMismatchError(f"Malformed root name {name!r}")
        coords = [0] * self.rank
        for count, letter in tokens:
            if letter not in self.simple_names:
                raise DomainMismatchError(f"Unknown simple root {letter!r} in {name!r}")
            coords[self.simple_names.index(letter)] += int(count) if count else 1
        key = tuple(sign * c for c in coords)
        if key not in self.index:
            raise DomainMismatchError(f"{name!r} is not a root of {self.type_label}")
        return self.index[key]

    def highest_root(self) -> int:
        return self.n_pos - 1

    def epsilon(self, i: int) -> Tuple[int, Tuple[int, ...]]:
        """(component index, orthonormal coordinates) of a root in a classical component."""
        ci = self._component_of[i]
        comp = self.components[ci]
        eps = _epsilon_simple(comp)
        width = len(eps[0])
        out = [0] * width
        for pos, simple_idx in enumerate(comp.order):
            c = self.roots[i][simple_idx]
            if c:
                out = [a + c * b for a, b in zip(out, eps[pos])]
        return ci, tuple(out)

    def component_of(self, i: int) -> int:
        return self._component_of[i]

    def simple_matrix(self, perm: Sequence[int]) -> np.ndarray:
        """Matrix of a Weyl element on V in the simple-root basis (columns are images)."""
        return np.array([self.roots[perm[i]] for i in range(self.rank)], dtype=np.int64).T

    def to_dict(self) -> dict:
        return {
            "type": self.type_label,
            "rank": self.rank,
            "simple_roots": self.simple_names,
            "cartan_matrix": self.cartan_matrix.tolist(),
            "positive_roots": [
                {
                    "name": self.root_name(i),
                    "coords": list(self.roots[i]),
                    "coroot": list(self.coroots[i]),
                    "length": self.length_class[i],
                }
                for i in range(self.n_pos)
            ],
        }


def _product_gram(parts: List[Tuple[str, int]]) -> np.ndarray:
    blocks = [_gram_for(letter, n) for letter, n in parts]
    size = sum(b.shape[0] for b in blocks)
    g = np.zeros((size, size), dtype=np.int64)
    k = 0
    for b in blocks:
        m = b.shape[0]
        g[k : k + m, k : k + m] = b
        k += m
    return g


@lru_cache(maxsize=None)
def build_root_system(type_label: str) -> RootSystem:
    parts = parse_type_label(type_label)
    gram = _product_gram(parts)
    if len(parts) == 1 and type_label in SIMPLE_NAMES:
        names = list(SIMPLE_NAMES[type_label])
    else:
        names = list(GENERIC_NAMES[: gram.shape[0]])
    R = RootSystem(gram, names, type_label=type_label)
    logger.debug("Built %s with %d positive roots", type_label, R.n_pos)
    return R


def cartan_pairing(R: RootSystem, beta: int, alpha: int, other: Optional[RootSystem] = None) -> int:
    if other is not None and other is not R:
        raise DomainMismatchError("roots belong to different root systems")
    return R.pairing(beta, alpha)


# ==========================================================
# Weyl group
# ==========================================================

@dataclass(frozen=True)
class WeylElement:
    perm: Tuple[int, ...]
    word: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.word)


class WeylGroup:
    """All elements of W(R) as permutations of the roots, generated breadth-first."""

    def __init__(self, R: RootSystem):
        self.R = R
        gens = [R.reflection(i) for i in range(R.rank)]
        identity = tuple(range(len(R.roots)))
        self.elements: List[WeylElement] = [WeylElement(identity, ())]
        self.index: Dict[Tuple[int, ...], int] = {identity: 0}
        queue = deque([0])
        while queue:
            k = queue.popleft()
            w = self.elements[k]
            for i, s in enumerate(gens):
                p = compose(w.perm, s)
                if p not in self.index:
                    self.index[p] = len(self.elements)
                    self.elements.append(WeylElement(p, w.word + (i,)))
                    queue.append(self.index[p])

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def longest(self) -> WeylElement:
        return max(self.elements, key=lambda e: e.length)

    def inverse(self, perm: Tuple[int, ...]) -> Tuple[int, ...]:
        inv = [0] * len(perm)
        for i, j in enumerate(perm):
            inv[j] = i
        return tuple(inv)


def compose(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    """(a o b)(i) = a(b(i))."""
    return tuple(a[i] for i in b)


@lru_cache(maxsize=None)
def weyl_group(R: RootSystem) -> WeylGroup:
    W = WeylGroup(R)
    logger.debug("W(%s) has %d elements", R.type_label, len(W))
    return W


def inversion_set(R: RootSystem, w: WeylElement) -> List[int]:
    return [i for i in range(R.n_pos) if not R.is_positive(w.perm[i])]


def element_from_word(R: RootSystem, word: Sequence[int]) -> WeylElement:
    perm = tuple(range(len(R.roots)))
    for i in word:
        perm = compose(perm, R.reflection(i))
    return WeylElement(perm, tuple(word))


# ==========================================================
# Reflection subgroups and Theta~
# ==========================================================

@dataclass
class RootSubsetJ:
    ambient: RootSystem
    roots: Tuple[int, ...]
    system: RootSystem
    embedding: List[Tuple[int, ...]] = field(default_factory=list)
    index: int = 0

    @property
    def type_label(self) -> str:
        return self.system.type_label

    @property
    def weyl_type(self) -> str:
        return self.system.weyl_type

    @property
    def names(self) -> List[str]:
        return [self.ambient.root_name(i) for i in self.roots]

    def to_dict(self) -> dict:
        return {
            "roots": self.names,
            "type": self.type_label,
            "weyl_type": self.weyl_type,
            "order": len(self.embedding),
            "coroot_index": self.index,
        }


def coroot_index(R: RootSystem, J: Sequence[int]) -> int:
    """Index of the span of the coroots of J in the coroot lattice (0 if infinite)."""
    if len(J) != R.rank:
        return 0
    M = Matrix([list(R.coroots[j]) for j in J])
    det = abs(int(M.det()))
    if det:
        snf = smith_normal_form(M)
        prod = 1
        for k in range(R.rank):
            prod *= abs(int(snf[k, k]))
        if prod != det:
            raise ArithmeticError(f"Smith form disagrees with determinant for {J}")
    return det


def reflection_subgroup(R: RootSystem, J: Sequence[int]) -> RootSubsetJ:
    """W_J as its own root system, embedded into W(R) element by element."""
    J = tuple(J)
    gram = np.array([[R.inner(R.roots[a], R.roots[b]) for b in J] for a in J], dtype=np.int64)
    sub = RootSystem(gram, [R.root_name(j) for j in J], ambient_max_norm=max(R.norms))
    W_sub = weyl_group(sub)
    amb_gens = [R.reflection(j) for j in J]
    identity = tuple(range(len(R.roots)))
    embedding: List[Optional[Tuple[int, ...]]] = [None] * len(W_sub)
    embedding[0] = identity
    for k, elem in enumerate(W_sub.elements):
        if k == 0:
            continue
        parent = W_sub.index[element_from_word(sub, elem.word[:-1]).perm]
        embedding[k] = compose(embedding[parent], amb_gens[elem.word[-1]])
    return RootSubsetJ(R, J, sub, embedding, coroot_index(R, J))


def levi_subgroup(R: RootSystem, names: Sequence[str]) -> RootSubsetJ:
    return reflection_subgroup(R, [R.parse_root_name(n) for n in names])


def theta_tilde(R: RootSystem) -> List[int]:
    """Roots beta with beta^vee - alpha^vee not a coroot for every simple alpha."""
    coroot_set = set(R.coroots)
    out = []
    for b in range(len(R.roots)):
        cb = R.coroots[b]
        ok = True
        for a in range(R.rank):
            diff = tuple(x - y for x, y in zip(cb, R.coroots[a]))
            if diff in coroot_set:
                ok = False
                break
        if ok:
            out.append(b)
    return out


def _is_prime_power(n: int, r: int) -> bool:
    if n <= 1:
        return False
    while n % r == 0:
        n //= r
    return n == 1


def theta_tilde_r(R: RootSystem, r: int) -> List[RootSubsetJ]:
    theta = theta_tilde(R)
    out = []
    for J in itertools.combinations(theta, R.rank):
        idx = coroot_index(R, J)
        if idx and _is_prime_power(idx, r):
            out.append(reflection_subgroup(R, J))
    logger.info("Theta~_%d(%s): %s", r, R.type_label, [j.type_label for j in out])
    return out
