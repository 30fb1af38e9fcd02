# springerlab/services/weylchar.py

"""
Character tables of Weyl groups and their reflection subgroups.

Tables are computed with Dixon's method over F_p (p = 10007) and lifted to
integers; Weyl group characters are rational, so no cyclotomic arithmetic is
needed. Characters are then named: partitions for type A, bipartitions
[lambda:mu] for types B/C (D4 by restriction from B4), and chi_{i,j} for G2/F4
through a fingerprint fixture.
"""

from __future__ import annotations

import itertools
import logging
import re
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix

from springerlab.services import fixtures
from springerlab.services.errors import AmbiguityError, DomainMismatchError, FixtureError, UnsupportedTypeError
from springerlab.services.finite_field import nullspace_mod_p, row_reduce_mod_p
from springerlab.services.rootsys import (
    RootSubsetJ,
    RootSystem,
    build_root_system,
    compose,
    levi_subgroup,
    weyl_group,
)

logger = logging.getLogger(__name__)

DIXON_PRIME = 10007

Partition = Tuple[int, ...]


# ==========================================================
# Partitions and their labels
# ==========================================================

@lru_cache(maxsize=None)
def partitions(n: int, largest: Optional[int] = None) -> Tuple[Partition, ...]:
    """Partitions of n in reverse lexicographic order."""
    if n == 0:
        return ((),)
    largest = n if largest is None else largest
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def bipartitions(n: int) -> List[Tuple[Partition, Partition]]:
    out = []
    for k in range(n, -1, -1):
        for lam in partitions(k):
            for mu in partitions(n - k):
                out.append((lam, mu))
    return out


def format_partition(lam: Partition) -> str:
    if len(lam) >= 2 and all(x == 1 for x in lam):
        return f"(1^{len(lam)})"
    return "(" + ",".join(str(x) for x in lam) + ")"


def _format_part(lam: Partition) -> str:
    if not lam:
        return "-"
    if len(lam) >= 2 and all(x == 1 for x in lam):
        return f"1^{len(lam)}"
    return "".join(str(x) for x in lam)


def format_bipartition(lam: Partition, mu: Partition) -> str:
    return f"[{_format_part(lam)}:{_format_part(mu)}]"


_POWER = re.compile(r"(\d)\^(\d)")


def _parse_part(text: str) -> Partition:
    text = text.strip()
    if text in ("-", "", "0"):
        return ()
    parts: List[int] = []
    for token in re.findall(r"\d\^\d|\d", text):
        m = _POWER.fullmatch(token)
        if m:
            parts.extend([int(m.group(1))] * int(m.group(2)))
        else:
            parts.append(int(token))
    return tuple(sorted(parts, reverse=True))


def normalize_label(label: str) -> str:
    """Canonical spelling of a character label ('(2^2)' -> '(2,2)', '[1:11]' -> '[1:1^2]')."""
    label = label.strip().replace(" ", "")
    if label.startswith("[") and ";" in label:
        label = label.replace(";", ":")
    if "x" in label and not label.startswith("chi"):
        return "x".join(normalize_label(part) for part in label.split("x"))
    if label.startswith("(") and label.endswith(")"):
        inner = label[1:-1]
        parts: List[int] = []
        for token in inner.split(","):
            m = _POWER.fullmatch(token)
            if m:
                parts.extend([int(m.group(1))] * int(m.group(2)))
            elif token:
                parts.append(int(token))
        return format_partition(tuple(sorted(parts, reverse=True)))
    if label.startswith("[") and label.endswith("]") and ":" in label:
        lam, mu = label[1:-1].split(":", 1)
        suffix = ""
        if mu.endswith(("+", "-")) and len(mu) > 1:
            mu, suffix = mu[:-1], mu[-1]
        return format_bipartition(_parse_part(lam), _parse_part(mu))[:-1] + suffix + "]"
    return label


# ==========================================================
# Murnaghan-Nakayama
# ==========================================================

def _remove_hooks(lam: Partition, r: int) -> List[Tuple[Partition, int]]:
    """All partitions obtained by removing an r-rim hook, with the sign (-1)^height."""
    L = len(lam)
    beta = [lam[i] + (L - 1 - i) for i in range(L)]
    present = set(beta)
    out = []
    for b in beta:
        if b - r >= 0 and (b - r) not in present:
            sign = (-1) ** sum(1 for c in beta if b - r < c < b)
            new = sorted([c for c in beta if c != b] + [b - r], reverse=True)
            parts = tuple(x for x in (new[i] - (L - 1 - i) for i in range(L)) if x > 0)
            out.append((parts, sign))
    return out


@lru_cache(maxsize=None)
def symmetric_value(lam: Partition, rho: Partition) -> int:
    """chi^lam of S_n on cycle type rho."""
    if not rho:
        return 1 if not lam else 0
    r, rest = rho[0], rho[1:]
    return sum(sign * symmetric_value(new, rest) for new, sign in _remove_hooks(lam, r))


@lru_cache(maxsize=None)
def hyperoctahedral_value(lam: Partition, mu: Partition, positive: Partition, negative: Partition) -> int:
    """chi^[lam:mu] of W(B_n) on the class with positive / negative cycle types."""
    if not positive and not negative:
        return 1 if not lam and not mu else 0
    if positive:
        r, positive = positive[0], positive[1:]
        twist = 1
    else:
        r, negative = negative[0], negative[1:]
        twist = -1
    total = 0
    for new, sign in _remove_hooks(lam, r):
        total += sign * hyperoctahedral_value(new, mu, positive, negative)
    for new, sign in _remove_hooks(mu, r):
        total += twist * sign * hyperoctahedral_value(lam, new, positive, negative)
    return total


# ==========================================================
# Classes
# ==========================================================

@dataclass
class ClassData:
    order: int
    reps: List[int]
    sizes: List[int]
    class_of: List[int]
    inverse_class: List[int]

    def __len__(self):
        return len(self.reps)


def _element_inverse(perm: Sequence[int]) -> Tuple[int, ...]:
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


def conjugacy_classes(R: RootSystem) -> ClassData:
    W = weyl_group(R)
    gens = [R.reflection(i) for i in range(R.rank)]
    n = len(W)
    class_of = [-1] * n
    reps: List[int] = []
    sizes: List[int] = []
    for start in range(n):
        if class_of[start] >= 0:
            continue
        cid = len(reps)
        reps.append(start)
        class_of[start] = cid
        queue = deque([start])
        size = 1
        while queue:
            x = W.elements[queue.popleft()].perm
            for s in gens:
                y = W.index[compose(s, compose(x, s))]
                if class_of[y] < 0:
                    class_of[y] = cid
                    size += 1
                    queue.append(y)
        sizes.append(size)
    inverse_class = [class_of[W.index[_element_inverse(W.elements[r].perm)]] for r in reps]
    return ClassData(n, reps, sizes, class_of, inverse_class)


def _class_coefficients(R: RootSystem, cd: ClassData) -> np.ndarray:
    """c[i, j, k] = #{x in C_i : x^-1 z_k in C_j} for a fixed z_k in C_k."""
    W = weyl_group(R)
    r = len(cd)
    inverses = [_element_inverse(e.perm) for e in W.elements]
    c = np.zeros((r, r, r), dtype=np.int64)
    for k, rep in enumerate(cd.reps):
        z = W.elements[rep].perm
        for x in range(len(W)):
            y = W.index[compose(inverses[x], z)]
            c[cd.class_of[x], cd.class_of[y], k] += 1
    return c


# ==========================================================
# Dixon's method
# ==========================================================

def _charpoly_mod_p(X: np.ndarray, p: int) -> List[int]:
    """Faddeev-LeVerrier: coefficients of det(lambda - X), leading first."""
    m = X.shape[0]
    I = np.eye(m, dtype=np.int64)
    coeffs = [1]
    Mk = np.zeros_like(X)
    prev = 1
    for k in range(1, m + 1):
        Mk = (X @ Mk + prev * I) % p
        c = (-pow(k, -1, p) * int(np.trace(X @ Mk) % p)) % p
        coeffs.append(c)
        prev = c
    return coeffs


def _eigen_split(X: np.ndarray, bound: int, p: int) -> List[Tuple[int, np.ndarray]]:
    coeffs = _charpoly_mod_p(X, p)
    lams = np.arange(-bound, bound + 1, dtype=np.int64)
    vals = np.zeros_like(lams)
    for c in coeffs:
        vals = (vals * (lams % p) + c) % p
    out = []
    m = X.shape[0]
    for lam in lams[vals == 0]:
        ker = nullspace_mod_p((X - int(lam) * np.eye(m, dtype=np.int64)) % p, p)
        if len(ker):
            out.append((int(lam), ker))
    if sum(len(k) for _, k in out) != m:
        raise ArithmeticError("class matrix is not split over the integers")
    return out


def _dixon(cd: ClassData, coeffs: np.ndarray, p: int = DIXON_PRIME) -> List[np.ndarray]:
    r = len(cd)
    spaces = [np.eye(r, dtype=np.int64)]
    for i in range(1, r):
        if all(len(V) == 1 for V in spaces):
            break
        M = coeffs[i]
        new_spaces = []
        for V in spaces:
            if len(V) == 1:
                new_spaces.append(V)
                continue
            V, pivots = row_reduce_mod_p(V, p)
            V = V[: len(pivots)]
            X = ((M @ V.T) % p)[pivots, :]
            split = _eigen_split(X, cd.sizes[i], p)
            for _, ker in split:
                new_spaces.append(row_reduce_mod_p((ker @ V) % p, p)[0][: len(ker)])
        spaces = new_spaces
    if not all(len(V) == 1 for V in spaces):
        raise ArithmeticError("class matrices failed to separate the characters")

    chars = []
    for V in spaces:
        w = V[0] % p
        w = (w * pow(int(w[0]), -1, p)) % p
        norm = sum(
            int(w[k]) * int(w[cd.inverse_class[k]]) * pow(cd.sizes[k], -1, p) for k in range(r)
        ) % p
        d2 = (cd.order * pow(norm, -1, p)) % p
        degree = next((d for d in range(1, int(cd.order**0.5) + 1) if (d * d) % p == d2), None)
        if degree is None:
            raise ArithmeticError("no integral degree for a character")
        values = []
        for k in range(r):
            v = (int(w[k]) * degree * pow(cd.sizes[k], -1, p)) % p
            values.append(v if v <= p // 2 else v - p)
        chars.append(np.array(values, dtype=np.int64))
    return chars


# ==========================================================
# Character tables
# ==========================================================

@dataclass
class CharacterTable:
    R: RootSystem
    classes: ClassData
    chars: List[np.ndarray]
    labels: List[str] = field(default_factory=list)
    b: List[int] = field(default_factory=list)

    @property
    def order(self) -> int:
        return self.classes.order

    @property
    def type_label(self) -> str:
        return self.R.type_label

    def __len__(self):
        return len(self.chars)

    def index(self, label: str) -> int:
        key = normalize_label(label)
        for i, name in enumerate(self.labels):
            if name == key:
                return i
        raise DomainMismatchError(f"{label!r} is not a character of W({self.R.weyl_type})")

    def values(self, label: str) -> np.ndarray:
        return self.chars[self.index(label)]

    def degree(self, i: int) -> int:
        return int(self.chars[i][0])

    def inner(self, f: Sequence, g: Sequence) -> Fraction:
        cd = self.classes
        total = sum(
            Fraction(cd.sizes[k]) * Fraction(f[k]) * Fraction(g[cd.inverse_class[k]]) for k in range(len(cd))
        )
        return total / cd.order

    def decompose(self, f: Sequence) -> Dict[str, int]:
        out = {}
        for i, chi in enumerate(self.chars):
            m = self.inner(f, chi)
            if m.denominator != 1:
                raise ArithmeticError(f"non-integral multiplicity {m} of {self.labels[i]}")
            if m:
                out[self.labels[i]] = int(m)
        return out

    def is_irreducible(self, f: Sequence) -> bool:
        return self.inner(f, f) == 1 and int(f[0]) > 0

    def to_dict(self) -> dict:
        W = weyl_group(self.R)
        return {
            "type": self.R.type_label,
            "order": self.order,
            "classes": [
                {"rep": list(W.elements[r].word), "size": s} for r, s in zip(self.classes.reps, self.classes.sizes)
            ],
            "characters": [
                {"label": lab, "degree": self.degree(i), "b": self.b[i], "values": [int(v) for v in self.chars[i]]}
                for i, lab in enumerate(self.labels)
            ],
        }


def orthogonality_defects(table: CharacterTable) -> int:
    """Number of failed row and column orthogonality relations."""
    cd = table.classes
    X = np.array(table.chars, dtype=np.int64)
    sizes = np.array(cd.sizes, dtype=np.int64)
    conj = X[:, cd.inverse_class]
    rows = (X * sizes) @ conj.T
    bad = int(np.count_nonzero(rows - cd.order * np.eye(len(X), dtype=np.int64)))
    cols = X.T @ conj
    expected = np.diag([cd.order // s for s in cd.sizes])
    cols_expected = np.zeros_like(cols)
    for k in range(len(cd)):
        cols_expected[k, cd.inverse_class[k]] = expected[k, k]
    bad += int(np.count_nonzero(cols - cols_expected))
    return bad


def sign_character(table: CharacterTable) -> np.ndarray:
    W = weyl_group(table.R)
    return np.array([(-1) ** W.elements[r].length for r in table.classes.reps], dtype=np.int64)


def reflection_character(table: CharacterTable) -> np.ndarray:
    W = weyl_group(table.R)
    return np.array(
        [int(np.trace(table.R.simple_matrix(W.elements[r].perm))) for r in table.classes.reps], dtype=np.int64
    )


def tensor(f: Sequence, g: Sequence) -> np.ndarray:
    return np.asarray(f, dtype=np.int64) * np.asarray(g, dtype=np.int64)


def symmetric_power_characters(R: RootSystem, cd: ClassData, top: int) -> np.ndarray:
    """S[d, k] = trace of the class rep k on S^d(V), d = 0..top, from 1/det(1 - t w)."""
    W = weyl_group(R)
    out = np.zeros((top + 1, len(cd)), dtype=object)
    for k, rep in enumerate(cd.reps):
        M = Matrix(R.simple_matrix(W.elements[rep].perm).tolist())
        c = [int(x) for x in M.charpoly().all_coeffs()]
        a = [1]
        for d in range(1, top + 1):
            a.append(-sum(c[j] * a[d - j] for j in range(1, min(d, len(c) - 1) + 1)))
        out[:, k] = a
    return out


def _b_invariants(table: CharacterTable) -> List[int]:
    top = table.R.n_pos
    S = symmetric_power_characters(table.R, table.classes, top)
    out = []
    for chi in table.chars:
        for d in range(top + 1):
            if table.inner(chi, S[d]) != 0:
                out.append(d)
                break
        else:
            raise ArithmeticError("character missing from every symmetric power up to |R+|")
    return out


def b_invariant(table: CharacterTable, label: str) -> int:
    return table.b[table.index(label)]


# ==========================================================
# Labeling
# ==========================================================

def ordered_components(R: RootSystem):
    return sorted(R.components, key=lambda c: (-c.rank, c.short, c.letter))


def _epsilon_lookup(R: RootSystem) -> Dict[int, Dict[Tuple[int, ...], int]]:
    out: Dict[int, Dict[Tuple[int, ...], int]] = {}
    for i in range(len(R.roots)):
        ci, vec = R.epsilon(i)
        out.setdefault(ci, {})[vec] = i
    return out


def _cycle_type_A(R: RootSystem, ci: int, perm, lookup) -> Partition:
    n = R.components[ci].rank + 1
    sigma = []
    for k in range(n):
        j = 0 if k else 1
        v = [0] * n
        v[k], v[j] = 1, -1
        image = R.epsilon(perm[lookup[ci][tuple(v)]])[1]
        sigma.append(image.index(1))
    return _cycles(sigma, [1] * n)[0]


def _signed_cycle_type(R: RootSystem, ci: int, perm, lookup) -> Tuple[Partition, Partition]:
    n = R.components[ci].rank
    sigma, signs = [], []
    for k in range(n):
        j = 0 if k else 1
        minus = [0] * n
        plus = [0] * n
        minus[k], minus[j] = 1, -1
        plus[k], plus[j] = 1, 1
        a = R.epsilon(perm[lookup[ci][tuple(minus)]])[1]
        b = R.epsilon(perm[lookup[ci][tuple(plus)]])[1]
        image = [(x + y) // 2 for x, y in zip(a, b)]
        pos = next(i for i, x in enumerate(image) if x)
        sigma.append(pos)
        signs.append(image[pos])
    return _cycles(sigma, signs)


def _cycles(sigma: List[int], signs: List[int]) -> Tuple[Partition, Partition]:
    seen = [False] * len(sigma)
    positive, negative = [], []
    for start in range(len(sigma)):
        if seen[start]:
            continue
        length, sign, k = 0, 1, start
        while not seen[k]:
            seen[k] = True
            sign *= signs[k]
            k = sigma[k]
            length += 1
        (positive if sign > 0 else negative).append(length)
    return tuple(sorted(positive, reverse=True)), tuple(sorted(negative, reverse=True))


def _component_labels(R: RootSystem, ci: int, lookup) -> Tuple[List[str], Callable]:
    comp = R.components[ci]
    if comp.letter == "A":
        labels = {format_partition(lam): lam for lam in partitions(comp.rank + 1)}

        def value(label, perm):
            return symmetric_value(labels[label], _cycle_type_A(R, ci, perm, lookup))

        return list(labels), value
    if comp.letter in "BC":
        labels = {format_bipartition(lam, mu): (lam, mu) for lam, mu in bipartitions(comp.rank)}

        def value(label, perm):
            pos, neg = _signed_cycle_type(R, ci, perm, lookup)
            return hyperoctahedral_value(*labels[label], pos, neg)

        return list(labels), value
    raise UnsupportedTypeError(f"no product labeling for component {comp.label}")


def _label_products(table: CharacterTable) -> List[str]:
    R = table.R
    W = weyl_group(R)
    lookup = _epsilon_lookup(R)
    comps = ordered_components(R)
    index_of = {id(c): i for i, c in enumerate(R.components)}
    per_comp = [_component_labels(R, index_of[id(c)], lookup) for c in comps]
    reps = [W.elements[r].perm for r in table.classes.reps]
    labels = [None] * len(table)
    for combo in itertools.product(*[labels_ for labels_, _ in per_comp]):
        values = np.ones(len(reps), dtype=np.int64)
        for (_, value), lab in zip(per_comp, combo):
            values *= np.array([value(lab, perm) for perm in reps], dtype=np.int64)
        matches = [i for i, chi in enumerate(table.chars) if np.array_equal(chi, values)]
        if len(matches) != 1:
            raise ArithmeticError(f"label {'x'.join(combo)} matched {len(matches)} characters")
        labels[matches[0]] = "x".join(combo)
    return labels


def _label_d4(table: CharacterTable) -> List[str]:
    R = table.R
    W = weyl_group(R)
    lookup = _epsilon_lookup(R)
    reps = [W.elements[r].perm for r in table.classes.reps]
    cycle_types = [_signed_cycle_type(R, 0, perm, lookup) for perm in reps]
    labels: List[Optional[str]] = [None] * len(table)
    for lam, mu in bipartitions(4):
        if lam < mu:
            continue
        values = np.array([hyperoctahedral_value(lam, mu, pos, neg) for pos, neg in cycle_types], dtype=np.int64)
        name = format_bipartition(lam, mu)
        matches = [i for i, chi in enumerate(table.chars) if np.array_equal(chi, values)]
        if len(matches) == 1:
            labels[matches[0]] = name
            continue
        halves = [i for i, chi in enumerate(table.chars) if table.inner(values, chi) == 1]
        if lam != mu or len(halves) != 2:
            raise ArithmeticError(f"restriction of {name} does not split as expected")
        for i, suffix in zip(sorted(halves), "+-"):
            labels[i] = name[:-1] + suffix + "]"
    return labels


def _label_exceptional(table: CharacterTable) -> List[str]:
    R = table.R
    data = fixtures.load_fingerprints()
    prints = data.get(R.type_label)
    if prints is None:
        raise FixtureError(f"no fingerprint fixture for {R.type_label}")
    W = weyl_group(R)
    long_simple = next(i for i in range(R.rank) if R.length_class[i] == "long")
    short_simple = next(i for i in range(R.rank) if R.length_class[i] == "short")
    long_class = table.classes.class_of[W.index[R.reflection(long_simple)]]
    short_class = table.classes.class_of[W.index[R.reflection(short_simple)]]
    labels: List[Optional[str]] = [None] * len(table)
    for entry in prints:
        key = (entry["degree"], entry["b"], entry["long"], entry["short"])
        matches = [
            i for i, chi in enumerate(table.chars)
            if (table.degree(i), table.b[i], int(chi[long_class]), int(chi[short_class])) == key
        ]
        if len(matches) == 1:
            labels[matches[0]] = entry["label"]
        elif len(matches) == 2:
            anchor = data.get("anchors", {}).get(entry["label"])
            if anchor is None:
                continue
            sub = levi_subgroup(R, anchor["levi"])
            emb = embed(sub, table)
            hits = [i for i in matches if emb.small.inner(restrict(emb, table.chars[i]), np.ones(len(emb.small.classes), dtype=np.int64)) != 0]
            if len(hits) != 1:
                raise FixtureError(f"anchor for {entry['label']} does not separate {len(matches)} characters")
            labels[hits[0]] = entry["label"]
            other = [i for i in matches if i != hits[0]][0]
            labels[other] = anchor["partner"]
        else:
            raise FixtureError(f"fingerprint {entry['label']} matched {len(matches)} characters")
    if any(lab is None for lab in labels) or len(set(labels)) != len(labels):
        raise FixtureError(f"fingerprint collision in {R.type_label}")
    return labels


def label_characters(table: CharacterTable) -> List[str]:
    R = table.R
    if not R.components:
        return ["1"]
    letters = {c.letter for c in R.components}
    if letters & {"G", "F"}:
        if len(R.components) != 1:
            raise UnsupportedTypeError(f"exceptional factor inside a product: {R.type_label}")
        return _label_exceptional(table)
    if "D" in letters:
        if len(R.components) != 1:
            raise UnsupportedTypeError(f"D4 factor inside a product: {R.type_label}")
        return _label_d4(table)
    return _label_products(table)


_TABLES: Dict[Tuple, CharacterTable] = {}


def character_table(R: RootSystem) -> CharacterTable:
    """Labeled character table of W(R) with b-invariants, cached per Cartan datum."""
    key = (R.gram.tobytes(), R.gram.shape, tuple(R.simple_names), R._ambient_max_norm)
    if key in _TABLES:
        cached = _TABLES[key]
        # same Cartan datum, so the Weyl element order (and the class reps) coincide
        return cached if cached.R is R else replace(cached, R=R)
    cd = conjugacy_classes(R)
    if len(cd) == 1:
        chars = [np.ones(1, dtype=np.int64)]
    else:
        chars = _dixon(cd, _class_coefficients(R, cd))
    table = CharacterTable(R, cd, chars)
    if orthogonality_defects(table):
        raise ArithmeticError(f"character table of W({R.weyl_type}) fails orthogonality")
    table.b = _b_invariants(table)
    table.labels = label_characters(table)
    order = sorted(range(len(table)), key=lambda i: (table.b[i], table.degree(i), table.labels[i]))
    table.chars = [table.chars[i] for i in order]
    table.b = [table.b[i] for i in order]
    table.labels = [table.labels[i] for i in order]
    _TABLES[key] = table
    logger.info("W(%s): %d classes, order %d", R.type_label, len(cd), cd.order)
    return table


@lru_cache(maxsize=None)
def table_for(type_label: str) -> CharacterTable:
    return character_table(build_root_system(type_label))


# ==========================================================
# Induction, restriction, truncated induction
# ==========================================================

@dataclass
class Embedding:
    sub: RootSubsetJ
    small: CharacterTable
    big: CharacterTable
    fusion: List[int]


def embed(sub: RootSubsetJ, big: Optional[CharacterTable] = None) -> Embedding:
    big = big or character_table(sub.ambient)
    if big.R is not sub.ambient:
        raise DomainMismatchError("subgroup is not inside this Weyl group")
    small = character_table(sub.system)
    W = weyl_group(sub.ambient)
    fusion = [big.classes.class_of[W.index[sub.embedding[r]]] for r in small.classes.reps]
    return Embedding(sub, small, big, fusion)


def class_fusion(sub: RootSubsetJ, big: Optional[CharacterTable] = None) -> List[int]:
    return embed(sub, big).fusion


def induce(emb: Embedding, values: Sequence) -> np.ndarray:
    big, small = emb.big, emb.small
    index = Fraction(big.order, small.order)
    acc = [Fraction(0)] * len(big.classes)
    for c, k in enumerate(emb.fusion):
        acc[k] += small.classes.sizes[c] * Fraction(values[c])
    out = []
    for k, a in enumerate(acc):
        v = index * a / big.classes.sizes[k]
        if v.denominator != 1:
            raise ArithmeticError("induced class function is not integral")
        out.append(int(v))
    return np.array(out, dtype=np.int64)


def restrict(emb: Embedding, values: Sequence) -> np.ndarray:
    return np.array([int(values[k]) for k in emb.fusion], dtype=np.int64)


def induce_label(emb: Embedding, label: str) -> Dict[str, int]:
    return emb.big.decompose(induce(emb, emb.small.values(label)))


def j_induction(emb: Embedding, label: str) -> str:
    """The unique constituent of Ind(label) whose b-invariant equals that of label."""
    target = emb.small.b[emb.small.index(label)]
    parts = induce_label(emb, label)
    hits = [name for name in parts if emb.big.b[emb.big.index(name)] == target]
    if len(hits) != 1:
        raise AmbiguityError(
            f"j-induction of {label} from {emb.sub.type_label} to {emb.big.type_label} is not defined",
            candidates=hits,
        )
    if parts[hits[0]] != 1:
        raise AmbiguityError(f"j-induction of {label} occurs with multiplicity {parts[hits[0]]}", candidates=hits)
    logger.debug("j(%s: %s) = %s", emb.sub.type_label, label, hits[0])
    return hits[0]
