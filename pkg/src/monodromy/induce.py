"""The induced braid-cover module: dimension and block ledger, the inertia
action on blocks, and full matrix models in two regimes.

Regime R1 (trivial reflection subgroup): a monomial representation on coset
lifts, with scalars from the extended kernel characters.  Regime R2
(invariant character with unit jumps): the deformed group algebra carries
the whole action and kernel elements act by scalars.  Outside these
regimes only the ledger and the inertia action are produced; the general
word-level induction is deliberately not approximated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cyclo import CycMatrix, CycNumber, CycPoly, ZERO, minpoly_matrix
from .errors import DomainError, IntegrityError, RegimeError
from .extension import Character, CheckResult, ExtensionDatum, FiberElement
from .hecke import HeckeAlgebra
from .invariants import ChiInvariants
from .reflgrp import left_cosets

CONVENTIONS = ("left", "inverse")


@dataclass
class Block:
    representative: int
    elements: tuple[int, ...]
    dimension: int
    character: Character

    def to_json(self) -> dict:
        return {
            "representative": self.representative,
            "elements": list(self.elements),
            "dimension": self.dimension,
            "character": self.character.to_json(),
        }


@dataclass
class InducedLedger:
    dim_m0: int
    index: int
    dim_mchi: int
    blocks: list[Block]
    convention: str
    block_of: list[int] = field(default_factory=list)  # element -> block position

    def to_json(self) -> dict:
        return {
            "dim_m0": self.dim_m0,
            "index": self.index,
            "dim_mchi": self.dim_mchi,
            "convention": self.convention,
            "blocks": [b.to_json() for b in self.blocks],
        }


def _right_cosets(group, subgroup):
    """Right cosets Hw as (members, representative) pairs, ordered by their
    least element."""
    sub = sorted(set(subgroup))
    coset_of = [-1] * len(group)
    members = []
    for i in range(len(group)):
        if coset_of[i] >= 0:
            continue
        coset = tuple(sorted(group.mul(b, i) for b in sub))
        pos = len(members)
        members.append(coset)
        for x in coset:
            coset_of[x] = pos
    return members, coset_of


def build_ledger(
    datum: ExtensionDatum,
    chi: Character,
    inv: ChiInvariants,
    convention: str = "left",
) -> InducedLedger:
    """Exact dimension bookkeeping; every identity is verified, and failure
    is an integrity error rather than a warning."""
    if convention not in CONVENTIONS:
        raise DomainError(f"unknown convention {convention!r}")
    group = datum.group
    n = len(group)
    n_zero = len(inv.w_chi_zero)
    n_chi = len(inv.w_chi)
    if n % n_zero:
        raise IntegrityError(
            f"reflection subgroup order {n_zero} does not divide {n}"
        )
    index = n // n_zero
    if n_zero * index != n:
        raise IntegrityError("dimension factorization failed")
    if convention == "left":
        table = left_cosets(group, inv.w_chi)
        members, coset_of = table.members, table.coset_of
    else:
        members, coset_of = _right_cosets(group, inv.w_chi)
    blocks = []
    for coset in members:
        rep = coset[0]
        w_for_char = rep if convention == "left" else group.inv(rep)
        char = datum.act_on_character(w_for_char, chi)
        for member in coset:
            w_member = member if convention == "left" else group.inv(member)
            if datum.act_on_character(w_member, chi) != char:
                raise IntegrityError(
                    f"block character not constant on the coset of {rep}"
                )
        if len(coset) != n_chi:
            raise IntegrityError(
                f"block of {rep} has size {len(coset)}, expected {n_chi}"
            )
        blocks.append(Block(rep, coset, n_chi, char))
    if sum(b.dimension for b in blocks) != n:
        raise IntegrityError("block dimensions do not sum to the total")
    return InducedLedger(
        dim_m0=n_zero,
        index=index,
        dim_mchi=n,
        blocks=blocks,
        convention=convention,
        block_of=list(coset_of),
    )


@dataclass
class InertiaAction:
    ledger: InducedLedger
    scalars: dict[int, list[CycNumber]]  # kernel element -> scalar per block

    def matrix(self, x: int) -> CycMatrix:
        """Diagonal matrix on the element basis (index order)."""
        n = self.ledger.dim_mchi
        per_block = self.scalars[x]
        return CycMatrix(
            tuple(
                tuple(
                    per_block[self.ledger.block_of[i]] if i == j else ZERO
                    for j in range(n)
                )
                for i in range(n)
            )
        )

    def to_json(self) -> dict:
        return {
            str(x): [v.to_json() for v in per_block]
            for x, per_block in sorted(self.scalars.items())
        }


def build_i_action(
    datum: ExtensionDatum,
    chi: Character,
    inv: ChiInvariants,
    convention: str = "left",
) -> InertiaAction:
    """Kernel elements act block-diagonally: on each block, by the block's
    character value times the sign character."""
    ledger = build_ledger(datum, chi, inv, convention)
    scalars = {}
    for x in datum.kernel:
        tau_x = CycNumber.rational(datum.tau[x])
        scalars[x] = [b.character(x) * tau_x for b in ledger.blocks]
    return InertiaAction(ledger, scalars)


# ---------------------------------------------------------------------------
# braid-word lifts


def generator_letter_decomposition(datum: ExtensionDatum):
    """For each group generator, its expression as a power of a
    distinguished generator: a list of (hyperplane, exponent) or None."""
    group = datum.group
    arr = datum.arrangement
    out = []
    for slot in range(len(group.generator_indices)):
        g = group.generator_indices[slot]
        if g == group.identity_index:
            out.append((None, 0))
            continue
        found = None
        for alpha in range(len(arr)):
            s = arr[alpha].distinguished_generator
            power = s
            for j in range(1, arr[alpha].order):
                if power == g:
                    found = (alpha, j)
                    break
                power = group.mul(power, s)
            if found:
                break
        out.append(found)
    return out


def braid_lift(datum: ExtensionDatum, w: int, letter_table=None) -> FiberElement:
    """Lift a group element through the splitting along its stored word.

    Each word letter contributes inverse braid letters for its hyperplane
    power, so the base image of the lift is exactly the element."""
    if letter_table is None:
        letter_table = generator_letter_decomposition(datum)
    word: list[tuple[int, int]] = []
    for slot in datum.group.words[w]:
        decomp = letter_table[slot]
        if decomp is None:
            raise RegimeError(
                f"generator in slot {slot} is not a power of a distinguished "
                "generator; coset lifts are unavailable"
            )
        alpha, j = decomp
        word.extend([(alpha, -1)] * j)
    return datum.r_tilde(tuple(word))


# ---------------------------------------------------------------------------
# full modules


@dataclass
class InducedModule:
    regime: str
    ledger: InducedLedger
    i_action: InertiaAction
    gen_matrices: dict[int, CycMatrix]  # hyperplane -> action of its lift
    i_matrices: dict[int, CycMatrix]  # kernel element -> action
    checks: list[CheckResult]
    datum: ExtensionDatum
    chi: Character
    hecke: HeckeAlgebra | None = None
    coset_lifts: list[FiberElement] | None = None  # per basis label (R1)

    def represent(self, g: FiberElement) -> CycMatrix:
        """Evaluate the module action on a fiber element by splitting it
        into its kernel part and its braid word."""
        x = self.datum.inertia_part(g)
        out = self.i_matrices[x]
        for alpha, exp in g.word:
            m = self.gen_matrices[alpha]
            out = out * (m if exp > 0 else m.inverse())
        return out

    def to_json(self) -> dict:
        return {
            "regime": self.regime,
            "ledger": self.ledger.to_json(),
            "generator_matrices": {
                str(a): m.to_json() for a, m in sorted(self.gen_matrices.items())
            },
            "inertia_matrices": {
                str(x): m.to_json() for x, m in sorted(self.i_matrices.items())
            },
            "checks": [c.to_json() for c in self.checks],
        }


def _check(checks, name, ok, witness=None):
    checks.append(CheckResult(name, "pass" if ok else "fail", None if ok else witness))
    if not ok:
        raise IntegrityError(f"{name}: {witness}")


def _common_verifications(module: InducedModule):
    """Conjugation consistency, inertia-block match, and any supplied
    braid-relation word pairs; failures are integrity errors."""
    datum = module.datum
    checks = module.checks
    group = datum.group

    for x in datum.kernel:
        expected = module.i_action.matrix(x)
        _check(
            checks,
            f"inertia_restriction[x={x}]",
            module.i_matrices[x] == expected,
            "kernel action differs from the block scalars",
        )

    for alpha in sorted(module.gen_matrices):
        sigma = datum.r_tilde(((alpha, 1),))
        rep_sigma = module.gen_matrices[alpha]
        rep_sigma_inv = rep_sigma.inverse()
        for x in datum.kernel:
            conj = datum.fiber_mul(
                datum.fiber_mul(sigma, datum.embed_inertia(x)),
                datum.fiber_inv(sigma),
            )
            _check(
                checks,
                f"conjugation[alpha={alpha},x={x}]",
                rep_sigma * module.i_matrices[x] * rep_sigma_inv
                == module.represent(conj),
                "module action is not equivariant for the kernel",
            )
            _check(
                checks,
                f"kernel_product[alpha={alpha},x={x}]",
                module.represent(
                    datum.fiber_mul(datum.embed_inertia(x), sigma)
                )
                == module.i_matrices[x] * rep_sigma,
                "kernel-by-generator product mismatch",
            )

    for idx, (w1, w2) in enumerate(datum.braid_relations):
        p1, p2 = datum.p_of_word(w1), datum.p_of_word(w2)
        _check(
            checks,
            f"braid_relation_base[{idx}]",
            p1 == p2,
            f"asserted relation has distinct base images {p1} != {p2}",
        )
        _check(
            checks,
            f"braid_relation[{idx}]",
            module.represent(datum.r_tilde(w1))
            == module.represent(datum.r_tilde(w2)),
            "module action separates an asserted braid relation",
        )


def build_full_r1(
    datum: ExtensionDatum,
    chi: Character,
    inv: ChiInvariants,
    convention: str = "left",
) -> InducedModule:
    """Monomial model on coset lifts, defined when the reflection subgroup
    is trivial and the degree-one relation character is trivial."""
    group = datum.group
    if inv.w_chi_zero != (group.identity_index,):
        raise RegimeError(
            "regime R1 needs a trivial reflection subgroup, got order "
            f"{len(inv.w_chi_zero)}"
        )
    if not inv.rho_trivial:
        raise RegimeError(
            "regime R1 needs the degree-one relation character to be trivial"
        )
    i_action = build_i_action(datum, chi, inv, convention)
    ledger = i_action.ledger
    n = len(group)
    letter_table = generator_letter_decomposition(datum)
    lifts = []
    for w in range(n):
        label = w if convention == "left" else group.inv(w)
        lifts.append(braid_lift(datum, label, letter_table))
    lift_inverses = [datum.fiber_inv(g) for g in lifts]

    checks: list[CheckResult] = []
    gen_matrices = {}
    for alpha in range(len(datum.arrangement)):
        sigma = datum.r_tilde(((alpha, 1),))
        s = datum.arrangement[alpha].distinguished_generator
        cols = []
        for w in range(n):
            if convention == "left":
                target = group.mul(group.inv(s), w)
            else:
                target = group.mul(w, s)
            h = datum.fiber_mul(datum.fiber_mul(lift_inverses[target], sigma), lifts[w])
            scalar = datum.eval_chi_hat(chi, h) * CycNumber.rational(
                datum.eval_tau_hat(h)
            )
            col = [ZERO] * n
            col[target] = scalar
            cols.append(col)
        gen_matrices[alpha] = CycMatrix(tuple(zip(*cols)))

    i_matrices = {}
    for x in datum.kernel:
        entries = []
        x_fiber = datum.embed_inertia(x)
        for w in range(n):
            h = datum.fiber_mul(datum.fiber_mul(lift_inverses[w], x_fiber), lifts[w])
            entries.append(
                datum.eval_chi_hat(chi, h)
                * CycNumber.rational(datum.eval_tau_hat(h))
            )
        i_matrices[x] = CycMatrix(
            tuple(
                tuple(entries[i] if i == j else ZERO for j in range(n))
                for i in range(n)
            )
        )

    module = InducedModule(
        "R1", ledger, i_action, gen_matrices, i_matrices, checks, datum, chi,
        coset_lifts=lifts,
    )
    for alpha, m in gen_matrices.items():
        _check(
            checks,
            f"monomial[alpha={alpha}]",
            _is_monomial_of_roots(m),
            "generator matrix is not monomial with root-of-unity entries",
        )
    _common_verifications(module)
    return module


def _is_monomial_of_roots(m: CycMatrix) -> bool:
    n = m.rows
    for rows in (m.entries, tuple(zip(*m.entries))):
        for row in rows:
            nonzero = [x for x in row if not x.is_zero()]
            if len(nonzero) != 1:
                return False
            if nonzero[0].root_of_unity_order() is None:
                return False
    return True


def build_full_r2(
    datum: ExtensionDatum,
    chi: Character,
    inv: ChiInvariants,
    hecke: HeckeAlgebra,
    rbar_by_alpha: dict[int, CycPoly] | None = None,
    convention: str = "left",
) -> InducedModule:
    """Deformed-group-algebra model, defined when the character is invariant
    and every jump is one; braid generators act by the algebra generators."""
    group = datum.group
    if len(inv.w_chi) != len(group):
        raise RegimeError("regime R2 needs an invariant character")
    if any(h.jump != 1 for h in inv.per_hyperplane):
        raise RegimeError("regime R2 needs all jumps equal to one")
    if len(inv.w_chi_zero) != len(group):
        raise RegimeError(
            "regime R2 needs the reflections to generate the whole group"
        )
    if hecke.dimension != len(group):
        raise RegimeError(
            f"algebra dimension {hecke.dimension} does not match the group "
            f"order {len(group)}"
        )

    arr = datum.arrangement
    gen_matrices: dict[int, CycMatrix] = {}
    if hecke.regime == "cyclic":
        if len(arr) != 1:
            raise RegimeError(
                "cyclic algebra mapping needs a single hyperplane"
            )
        gen_matrices[0] = hecke.generators["t"]
    elif hecke.regime == "coxeter":
        if hecke.group is not group:
            raise RegimeError(
                "quadratic algebra must be built over the datum's group"
            )
        simple = dict(zip(hecke.simple_hyperplanes, hecke.simple_elements))
        for alpha in range(len(arr)):
            if alpha in simple:
                gen_matrices[alpha] = hecke.generators[f"s{alpha}"]
                continue
            conjugator = None
            for w in range(len(group)):
                for beta in hecke.simple_hyperplanes:
                    if arr.act(w, beta) == alpha:
                        conjugator = (w, beta)
                        break
                if conjugator:
                    break
            if conjugator is None:
                raise IntegrityError(
                    f"hyperplane {alpha} is not in the orbit of any simple one"
                )
            w, beta = conjugator
            u = _braid_word_image(hecke, w)
            gen_matrices[alpha] = u * hecke.generators[f"s{beta}"] * u.inverse()
    else:
        raise RegimeError(
            f"no hyperplane mapping for algebra regime {hecke.regime!r}"
        )

    i_action = build_i_action(datum, chi, inv, convention)
    ledger = i_action.ledger
    n = hecke.dimension
    i_matrices = {
        x: CycMatrix.scalar(
            n, chi(x) * CycNumber.rational(datum.tau[x])
        )
        for x in datum.kernel
    }
    checks: list[CheckResult] = []
    module = InducedModule(
        "R2", ledger, i_action, gen_matrices, i_matrices, checks, datum, chi,
        hecke=hecke,
    )
    if rbar_by_alpha:
        for alpha, rbar in sorted(rbar_by_alpha.items()):
            got = minpoly_matrix(gen_matrices[alpha])
            _check(
                checks,
                f"generator_relation[alpha={alpha}]",
                got == rbar,
                f"minimal polynomial {got!r} differs from the relation {rbar!r}",
            )
    _common_verifications(module)
    return module


def _braid_word_image(hecke: HeckeAlgebra, w: int) -> CycMatrix:
    """The algebra image of the inverse-letter braid lift of an element:
    the product of inverse generators along its reduced word."""
    out = CycMatrix.identity(hecke.dimension)
    for slot in hecke.simple_words[w]:
        key = f"s{hecke.simple_hyperplanes[slot]}"
        out = out * hecke.generators[key].inverse()
    return out
