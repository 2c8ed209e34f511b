"""Finite complex reflection groups from matrix generators.

Groups are enumerated by breadth-first closure with canonical-matrix
deduplication; every element keeps its discovery word in the input
generators.  The arrangement records, per reflection hyperplane, the cyclic
pointwise stabilizer, its order, the distinguished generator acting by the
primitive counter-clockwise root of unity on the normal line, and the orbit
decomposition under the group action.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cyclo import ONE, ZERO, CycMatrix, CycNumber, zeta
from .errors import CapacityError, DomainError, IntegrityError

DEFAULT_CAP = 20_000


class ReflectionGroup:
    """An enumerated finite matrix group with word and index structure."""

    def __init__(self, rank, elements, words, rmul_gen, generator_indices):
        self.rank = rank
        self.elements: list[CycMatrix] = elements
        self.words: list[tuple[int, ...]] = words
        self._rmul_gen = rmul_gen  # element index x generator slot -> element index
        self.generator_indices: list[int] = generator_indices
        self.index = {m: i for i, m in enumerate(elements)}
        self._inv: list[int | None] = [None] * len(elements)
        self._gen_inv: list[int] | None = None

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def identity_index(self) -> int:
        return 0

    def rmul_generator(self, i: int, slot: int) -> int:
        """Index of elements[i] * generator[slot]."""
        return self._rmul_gen[i][slot]

    def mul(self, i: int, j: int) -> int:
        """Index-based multiplication via the stored word of j."""
        out = i
        for slot in self.words[j]:
            out = self._rmul_gen[out][slot]
        return out

    def _generator_inverse_slots(self) -> list[int]:
        if self._gen_inv is None:
            out = []
            for slot in range(len(self.generator_indices)):
                g = self.generator_indices[slot]
                cur = g
                prev = 0
                while cur != 0:
                    prev = cur
                    cur = self.mul(cur, g)
                out.append(prev)
            self._gen_inv = out
        return self._gen_inv

    def inv(self, i: int) -> int:
        cached = self._inv[i]
        if cached is not None:
            return cached
        out = 0
        gen_inv = self._generator_inverse_slots()
        for slot in reversed(self.words[i]):
            out = self.mul(out, gen_inv[slot])
        self._inv[i] = out
        return out

    def conjugate(self, w: int, x: int) -> int:
        """w x w^{-1} as indices."""
        return self.mul(self.mul(w, x), self.inv(w))

    def element_order(self, i: int) -> int:
        n = 1
        cur = i
        while cur != 0:
            cur = self.mul(cur, i)
            n += 1
        return n

    def matrix(self, i: int) -> CycMatrix:
        return self.elements[i]

    def to_json(self, name: str = "group") -> dict:
        orders = [
            x.order
            for g in self.generator_indices
            for row in self.elements[g].entries
            for x in row
        ]
        return {
            "name": name,
            "rank": self.rank,
            "cyclotomic_order": math.lcm(*orders) if orders else 1,
            "generators": [self.elements[g].to_json() for g in self.generator_indices],
        }


def enumerate_group(generators, cap: int = DEFAULT_CAP) -> ReflectionGroup:
    """Breadth-first closure of a list of invertible square matrices."""
    if not generators:
        raise DomainError("at least one generator is required")
    rank = generators[0].rows
    for g in generators:
        if not g.is_square() or g.rows != rank:
            raise DomainError("generators must be square matrices of equal rank")
        g.inverse()  # raises DomainError if singular
    identity = CycMatrix.identity(rank)
    elements = [identity]
    index = {identity: 0}
    words: list[tuple[int, ...]] = [()]
    rmul: list[list[int]] = []
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            row = []
            for slot, g in enumerate(generators):
                prod = elements[i] * g
                j = index.get(prod)
                if j is None:
                    j = len(elements)
                    if j >= cap:
                        raise CapacityError(
                            f"group closure exceeded cap {cap} (found {j} so far)"
                        )
                    elements.append(prod)
                    index[prod] = j
                    words.append(words[i] + (slot,))
                    nxt.append(j)
                row.append(j)
            rmul.append(row)
        frontier = nxt
    gen_indices = [index[g] for g in generators]
    return ReflectionGroup(rank, elements, words, rmul, gen_indices)


# ---------------------------------------------------------------------------
# arrangement


@dataclass
class Hyperplane:
    normal: tuple[CycNumber, ...]
    stabilizer_elements: tuple[int, ...]
    order: int  # the stabilizer size
    distinguished_generator: int  # element index
    orbit_id: int


class Arrangement:
    """The reflection hyperplanes of an enumerated group."""

    def __init__(self, group: ReflectionGroup, hyperplanes: list[Hyperplane]):
        self.group = group
        self.hyperplanes = hyperplanes
        self._by_normal = {h.normal: a for a, h in enumerate(hyperplanes)}

    def __len__(self) -> int:
        return len(self.hyperplanes)

    def __getitem__(self, alpha: int) -> Hyperplane:
        return self.hyperplanes[alpha]

    def index_of_normal(self, normal) -> int:
        return self._by_normal[normal]

    def act(self, w: int, alpha: int) -> int:
        """The hyperplane index of w applied to hyperplane alpha."""
        m_inv = self.group.elements[self.group.inv(w)]
        normal = self.hyperplanes[alpha].normal
        moved = _row_times_matrix(normal, m_inv)
        return self._by_normal[_canonical_normal(moved)]

    def orbits(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for a, h in enumerate(self.hyperplanes):
            out.setdefault(h.orbit_id, []).append(a)
        return [out[k] for k in sorted(out)]

    def reflection_count(self) -> int:
        return sum(h.order - 1 for h in self.hyperplanes)

    def to_json(self) -> list:
        return [
            {
                "index": a,
                "normal": [c.to_json() for c in h.normal],
                "order": h.order,
                "distinguished_generator": h.distinguished_generator,
                "stabilizer": list(h.stabilizer_elements),
                "orbit": h.orbit_id,
            }
            for a, h in enumerate(self.hyperplanes)
        ]


def _row_times_matrix(row, m: CycMatrix):
    out = []
    for j in range(m.cols):
        acc = None
        for k, r in enumerate(row):
            if r.is_zero():
                continue
            b = m.entries[k][j]
            if b.is_zero():
                continue
            term = r * b
            acc = term if acc is None else acc + term
        out.append(ZERO if acc is None else acc)
    return tuple(out)


def _canonical_normal(row):
    """Scale so the first nonzero entry equals 1."""
    lead = next((c for c in row if not c.is_zero()), None)
    if lead is None:
        raise DomainError("zero normal vector")
    inv = lead.inverse()
    return tuple(c * inv for c in row)


def _kernel_basis(normal):
    """Basis of the hyperplane cut out by a nonzero normal covector."""
    pivot = next(i for i, c in enumerate(normal) if not c.is_zero())
    basis = []
    inv = normal[pivot].inverse()
    for i in range(len(normal)):
        if i == pivot:
            continue
        vec = [ZERO] * len(normal)
        vec[i] = ONE
        vec[pivot] = -(normal[i] * inv)
        basis.append(tuple(vec))
    return basis


def _normal_line_eigenvalue(m: CycMatrix, normal) -> CycNumber:
    """Action of m on the quotient line: n(m v) / n(v) for any v off the
    hyperplane; well defined because n vanishes on the hyperplane."""
    pivot = next(i for i, c in enumerate(normal) if not c.is_zero())
    v = tuple(ONE if i == pivot else ZERO for i in range(len(normal)))
    mv = m.apply(v)
    num = sum((a * b for a, b in zip(normal, mv)), ZERO)
    return num * normal[pivot].inverse()


def hyperplanes(group: ReflectionGroup) -> Arrangement:
    """Compute the reflection arrangement of an enumerated group."""
    normals_in_order: list[tuple] = []
    seen = set()
    for i, m in enumerate(group.elements):
        if i == 0:
            continue
        diff = m - CycMatrix.identity(group.rank)
        if diff.rank() != 1:
            continue
        row = next(r for r in diff.entries if any(not c.is_zero() for c in r))
        normal = _canonical_normal(row)
        if normal not in seen:
            seen.add(normal)
            normals_in_order.append(normal)
    hps: list[Hyperplane] = []
    for normal in normals_in_order:
        kernel = _kernel_basis(normal)
        stab = []
        for i, m in enumerate(group.elements):
            if all(m.apply(v) == v for v in kernel):
                stab.append(i)
        n_alpha = len(stab)
        eigen = {}
        for i in stab:
            lam = _normal_line_eigenvalue(group.elements[i], normal)
            if lam in eigen:
                raise IntegrityError(
                    "pointwise stabilizer is not cyclic: elements "
                    f"{eigen[lam]} and {i} share the normal-line eigenvalue {lam!r}"
                )
            eigen[lam] = i
        primitive = zeta(n_alpha)
        if primitive not in eigen:
            raise IntegrityError(
                f"no distinguished generator with eigenvalue {primitive!r} on the "
                f"normal line of {normal!r}; stabilizer is not cyclic of order {n_alpha}"
            )
        hps.append(
            Hyperplane(
                normal=normal,
                stabilizer_elements=tuple(stab),
                order=n_alpha,
                distinguished_generator=eigen[primitive],
                orbit_id=-1,
            )
        )
    # orbit decomposition under the permutation action of the generators
    by_normal = {h.normal: a for a, h in enumerate(hps)}
    gen_inverses = [group.elements[group.inv(g)] for g in group.generator_indices]
    neighbors: list[list[int]] = []
    for h in hps:
        row = []
        for m_inv in gen_inverses:
            moved = _canonical_normal(_row_times_matrix(h.normal, m_inv))
            row.append(by_normal[moved])
        neighbors.append(row)
    orbit = 0
    for a in range(len(hps)):
        if hps[a].orbit_id >= 0:
            continue
        stack = [a]
        hps[a].orbit_id = orbit
        while stack:
            b = stack.pop()
            for c in neighbors[b]:
                if hps[c].orbit_id < 0:
                    hps[c].orbit_id = orbit
                    stack.append(c)
        orbit += 1
    return Arrangement(group, hps)


# ---------------------------------------------------------------------------
# catalog of monomial groups


def catalog(m: int, p: int, r: int) -> list[CycMatrix]:
    """Generators for the standard monomial group with parameters (m, p, r):
    monomial r x r matrices with m-th root of unity entries whose entry
    product is an (m/p)-th root of unity.  Closure order is m^r * r! / p.
    """
    if m < 1 or r < 1 or p < 1:
        raise DomainError("parameters must be positive")
    if m % p:
        raise DomainError(f"p={p} must divide m={m}")
    if r == 1:
        return [CycMatrix([[zeta(m, p)]])]
    gens: list[CycMatrix] = []
    if p < m:
        diag = [
            [zeta(m, p) if i == j == 0 else (ONE if i == j else ZERO) for j in range(r)]
            for i in range(r)
        ]
        gens.append(CycMatrix(diag))
    if p > 1:
        twisted = [[ZERO] * r for _ in range(r)]
        twisted[1][0] = zeta(m)
        twisted[0][1] = zeta(m).inverse()
        for i in range(2, r):
            twisted[i][i] = ONE
        gens.append(CycMatrix(twisted))
    for i in range(r - 1):
        swap = [
            [ONE if (a == b and a not in (i, i + 1)) else ZERO for b in range(r)]
            for a in range(r)
        ]
        swap[i][i + 1] = ONE
        swap[i + 1][i] = ONE
        gens.append(CycMatrix(swap))
    return gens


def catalog_order(m: int, p: int, r: int) -> int:
    return m**r * math.factorial(r) // p


# ---------------------------------------------------------------------------
# subgroups and cosets


def conjugacy_classes(group: ReflectionGroup) -> list[tuple[int, ...]]:
    """Conjugacy classes as sorted index tuples, ordered by least member."""
    seen = [False] * len(group)
    classes = []
    for i in range(len(group)):
        if seen[i]:
            continue
        cls = sorted({group.conjugate(w, i) for w in range(len(group))})
        for x in cls:
            seen[x] = True
        classes.append(tuple(cls))
    return classes


def subgroup_generated(group: ReflectionGroup, elems) -> tuple[int, ...]:
    """Smallest index set closed under multiplication containing the given
    elements and the identity."""
    seen = {0}
    frontier = [0]
    gens = sorted(set(elems))
    for g in gens:
        if g not in seen:
            seen.add(g)
            frontier.append(g)
    while frontier:
        nxt = []
        for i in frontier:
            for g in gens:
                j = group.mul(i, g)
                if j not in seen:
                    seen.add(j)
                    nxt.append(j)
        frontier = nxt
    return tuple(sorted(seen))


@dataclass
class CosetTable:
    representatives: list[int]  # least element index per coset
    coset_of: list[int]  # element index -> coset position
    members: list[tuple[int, ...]]
    generator_action: list[list[int]]  # generator slot -> permutation of cosets


def left_cosets(group: ReflectionGroup, subgroup) -> CosetTable:
    """Left cosets wH with deterministic least-index representatives."""
    h = sorted(set(subgroup))
    hset = set(h)
    if 0 not in hset:
        raise DomainError("subgroup must contain the identity")
    for a in h:
        for b in h:
            if group.mul(a, b) not in hset:
                raise DomainError(f"subgroup is not closed: {a} * {b} escapes")
    coset_of = [-1] * len(group)
    members: list[tuple[int, ...]] = []
    reps: list[int] = []
    for i in range(len(group)):
        if coset_of[i] >= 0:
            continue
        coset = tuple(sorted(group.mul(i, b) for b in h))
        pos = len(reps)
        reps.append(coset[0])
        members.append(coset)
        for x in coset:
            coset_of[x] = pos
    action = []
    for slot in range(len(group.generator_indices)):
        g = group.generator_indices[slot]
        action.append([coset_of[group.mul(g, reps[c])] for c in range(len(reps))])
    return CosetTable(reps, coset_of, members, action)
