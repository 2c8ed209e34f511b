"""Deformed group algebras presented by monic relations on braid-type
generators, in three certified regimes.

Supported regimes: cyclic (one generator, companion matrix of its
relation), real groups with quadratic relations (basis indexed by group
elements, descent-rule multiplication against a certified simple system),
and tensor products of these.  Every build certifies its claims on the
regular representation: basis independence, closed multiplication,
generator relations, and (in the quadratic regime) the braid relations of
the chosen simple system.  Unsupported inputs fail with a regime error
naming the obstruction.
"""

from __future__ import annotations

import itertools

from .cyclo import ONE, ZERO, CycMatrix, CycPoly, minpoly_matrix
from .errors import DomainError, IntegrityError, ParameterError, RegimeError
from .reflgrp import Arrangement, ReflectionGroup, hyperplanes, subgroup_generated


class HeckeAlgebra:
    """A finite-dimensional algebra given by its regular representation."""

    def __init__(self, regime, basis_labels, generators, params):
        self.regime = regime
        self.basis_labels = list(basis_labels)
        self.dimension = len(self.basis_labels)
        self.generators: dict[str, CycMatrix] = dict(generators)
        self.params: dict[str, CycPoly] = dict(params)
        # filled by the quadratic-regime builder
        self.group: ReflectionGroup | None = None
        self.arrangement: Arrangement | None = None
        self.simple_elements: list[int] = []
        self.simple_hyperplanes: list[int] = []
        self.simple_words: list[tuple[int, ...]] = []
        self._element_matrices: dict[int, CycMatrix] = {}

    @property
    def unit_index(self) -> int:
        return 0

    def generator_inverse(self, key: str) -> CycMatrix:
        return self.generators[key].inverse()

    def t_of_element(self, w: int) -> CycMatrix:
        """Basis operator for a group element (quadratic regime only)."""
        if self.group is None:
            raise DomainError("element operators exist only over a group basis")
        cached = self._element_matrices.get(w)
        if cached is not None:
            return cached
        out = CycMatrix.identity(self.dimension)
        for slot in self.simple_words[w]:
            key = f"s{self.simple_hyperplanes[slot]}"
            out = out * self.generators[key]
        self._element_matrices[w] = out
        return out

    def to_json(self) -> dict:
        return {
            "regime": self.regime,
            "dimension": self.dimension,
            "generators": {
                key: {
                    "relation": self.params[key].to_json(),
                    "minimal_polynomial": minpoly_matrix(m).to_json(),
                }
                for key, m in sorted(self.generators.items())
            },
        }


def _check_relation(poly: CycPoly, what: str):
    if poly.degree < 1:
        raise ParameterError(f"{what}: relation must have positive degree")
    if poly.constant_term.is_zero():
        raise ParameterError(f"{what}: relation has zero constant term")


def _certify_generators(h: HeckeAlgebra):
    for key, m in h.generators.items():
        got = minpoly_matrix(m)
        if got != h.params[key]:
            raise IntegrityError(
                f"generator {key}: minimal polynomial {got!r} differs from "
                f"the declared relation {h.params[key]!r}"
            )
        m.inverse()  # invertibility; DomainError would signal a broken build


# ---------------------------------------------------------------------------
# cyclic regime


def build_cyclic(rbar: CycPoly) -> HeckeAlgebra:
    """The algebra of one invertible generator with the given relation:
    companion-matrix regular representation on the power basis."""
    _check_relation(rbar, "cyclic relation")
    d = rbar.degree
    cols = []
    for j in range(d):
        col = [ZERO] * d
        if j < d - 1:
            col[j + 1] = ONE
        else:
            col = [-c for c in rbar.coeffs[:-1]]
        cols.append(col)
    t = CycMatrix(tuple(zip(*cols)))
    h = HeckeAlgebra(
        "cyclic",
        [f"t^{k}" for k in range(d)],
        {"t": t},
        {"t": rbar},
    )
    _certify_generators(h)
    return h


# ---------------------------------------------------------------------------
# quadratic (real) regime


def _length_function(group: ReflectionGroup, simple: list[int]) -> list[int]:
    lengths = [-1] * len(group)
    lengths[0] = 0
    frontier = [0]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for w in frontier:
            for s in simple:
                u = group.mul(s, w)
                if lengths[u] < 0:
                    lengths[u] = depth
                    nxt.append(u)
        frontier = nxt
    return lengths


def _descent_matrices(group, simple, polys):
    """One operator per simple reflection, acting on the element basis by
    the length-descent rule for its quadratic relation."""
    n = len(group)
    lengths = _length_function(group, simple)
    if any(l < 0 for l in lengths):
        return None, None
    mats = []
    for s, poly in zip(simple, polys):
        c0, c1 = poly.coeffs[0], poly.coeffs[1]
        cols = []
        for w in range(n):
            sw = group.mul(s, w)
            col = [ZERO] * n
            if lengths[sw] > lengths[w]:
                col[sw] = ONE
            else:
                col[w] = -c1
                col[sw] = -c0
            cols.append(col)
        mats.append(CycMatrix(tuple(zip(*cols))))
    return mats, lengths


def _reduced_words(group, simple, lengths):
    words: list[tuple[int, ...] | None] = [None] * len(group)
    words[0] = ()
    order = sorted(range(len(group)), key=lambda w: lengths[w])
    for w in order:
        if w == 0:
            continue
        for slot, s in enumerate(simple):
            u = group.mul(s, w)
            if lengths[u] == lengths[w] - 1 and words[u] is not None:
                words[w] = (slot,) + words[u]
                break
        if words[w] is None:
            return None
    return words


def _braid_relation_holds(group, mats, simple, i, j) -> bool:
    m = group.element_order(group.mul(simple[i], simple[j]))
    lhs = CycMatrix.identity(len(group))
    rhs = CycMatrix.identity(len(group))
    for k in range(m):
        lhs = lhs * (mats[i] if k % 2 == 0 else mats[j])
        rhs = rhs * (mats[j] if k % 2 == 0 else mats[i])
    return lhs == rhs


def _element_operators(group, mats, simple, lengths, words):
    """Basis operators built one simple factor at a time along reduced
    words; each must send the unit basis vector to its own label."""
    n = len(group)
    t_of: list[CycMatrix | None] = [None] * n
    t_of[0] = CycMatrix.identity(n)
    for w in sorted(range(n), key=lengths.__getitem__):
        if w == 0:
            continue
        slot = words[w][0]
        rest = group.mul(simple[slot], w)  # strip the first letter
        t_of[w] = mats[slot] * t_of[rest]
        col = tuple(t_of[w].entries[i][0] for i in range(n))
        if col != tuple(ONE if i == w else ZERO for i in range(n)):
            return None
    return t_of


def build_coxeter(group: ReflectionGroup, params: dict[int, CycPoly]) -> HeckeAlgebra:
    """Quadratic-relation algebra over a real reflection group.

    params maps arrangement orbit ids to monic quadratic relations with
    nonzero constant term.  The simple system is found by certified
    search: the lexicographically first set of reflections that generates
    the group and passes the basis, braid, and relation certificates.
    """
    arr = hyperplanes(group)
    if len(arr) == 0:
        raise RegimeError("the trivial group has no quadratic regime; use cyclic")
    for h in arr.hyperplanes:
        if h.order != 2:
            raise RegimeError(
                f"unsupported regime 'coxeter': hyperplane with local order {h.order}"
            )
    orbits = arr.orbits()
    for orbit in orbits:
        oid = arr[orbit[0]].orbit_id
        if oid not in params:
            raise ParameterError(f"missing relation for arrangement orbit {oid}")
        poly = params[oid]
        _check_relation(poly, f"orbit {oid}")
        if poly.degree != 2:
            raise ParameterError(
                f"orbit {oid}: quadratic regime needs degree-2 relations, "
                f"got degree {poly.degree}"
            )
    reflections = sorted(
        (h.distinguished_generator, a) for a, h in enumerate(arr.hyperplanes)
    )
    candidates_tried = 0
    for size in range(1, len(reflections) + 1):
        for combo in itertools.combinations(reflections, size):
            elems = [c[0] for c in combo]
            if len(subgroup_generated(group, elems)) != len(group):
                continue
            candidates_tried += 1
            alphas = [c[1] for c in combo]
            polys = [params[arr[a].orbit_id] for a in alphas]
            mats, lengths = _descent_matrices(group, elems, polys)
            if mats is None:
                continue
            words = _reduced_words(group, elems, lengths)
            if words is None:
                continue
            if not all(
                _braid_relation_holds(group, mats, elems, i, j)
                for i in range(size)
                for j in range(i + 1, size)
            ):
                continue
            t_of = _element_operators(group, mats, elems, lengths, words)
            if t_of is None:
                continue
            if not _closure_certificate(group, mats, elems, polys, lengths, t_of):
                continue
            h = HeckeAlgebra(
                "coxeter",
                [f"T[{w}]" for w in range(len(group))],
                {f"s{a}": m for a, m in zip(alphas, mats)},
                {f"s{a}": p for a, p in zip(alphas, polys)},
            )
            h.group = group
            h.arrangement = arr
            h.simple_elements = elems
            h.simple_hyperplanes = alphas
            h.simple_words = words
            h._element_matrices = dict(enumerate(t_of))
            _certify_generators(h)
            return h
    raise RegimeError(
        "unsupported regime 'coxeter': no certified simple system found "
        f"({candidates_tried} generating candidates tried)"
    )


def _closure_certificate(group, mats, simple, polys, lengths, t_of) -> bool:
    """Generator-times-basis products equal the descent rule exactly, so the
    span of the basis operators is closed under multiplication."""
    n = len(group)
    for slot, s in enumerate(simple):
        c0, c1 = polys[slot].coeffs[0], polys[slot].coeffs[1]
        for w in range(n):
            sw = group.mul(s, w)
            prod = mats[slot] * t_of[w]
            if lengths[sw] > lengths[w]:
                expected = t_of[sw]
            else:
                expected = t_of[sw] * (-c0) + t_of[w] * (-c1)
            if prod != expected:
                return False
    return True


# ---------------------------------------------------------------------------
# products


def _kron(a: CycMatrix, b: CycMatrix) -> CycMatrix:
    rows = []
    for i in range(a.rows):
        for k in range(b.rows):
            row = []
            for j in range(a.cols):
                aij = a.entries[i][j]
                if aij.is_zero():
                    row.extend([ZERO] * b.cols)
                else:
                    row.extend(aij * b.entries[k][l] for l in range(b.cols))
            rows.append(tuple(row))
    return CycMatrix(tuple(rows))


def build_product(parts: list[HeckeAlgebra]) -> HeckeAlgebra:
    """Tensor product; generators act on their own leg."""
    if not parts:
        raise DomainError("product of no algebras")
    if len(parts) == 1:
        return parts[0]
    labels = [
        " x ".join(combo)
        for combo in itertools.product(*[p.basis_labels for p in parts])
    ]
    generators = {}
    params = {}
    for i, part in enumerate(parts):
        for key, m in part.generators.items():
            full = None
            for j, other in enumerate(parts):
                leg = m if j == i else CycMatrix.identity(other.dimension)
                full = leg if full is None else _kron(full, leg)
            generators[f"leg{i}.{key}"] = full
            params[f"leg{i}.{key}"] = part.params[key]
    h = HeckeAlgebra("product", labels, generators, params)
    _certify_generators(h)
    return h
