"""Stabilizer invariants of a character: the stabilizer subgroup, the local
jump exponents per hyperplane, the induced partition of the arrangement, the
reflection subgroup generated by the local stabilizers, and the degree-one
relation character on the full-jump hyperplanes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cyclo import CycNumber, CycPoly
from .errors import IntegrityError, ParameterError
from .extension import Character, CheckResult, ExtensionDatum
from .reflgrp import subgroup_generated


@dataclass
class HyperplaneInvariant:
    stabilizer_meet: tuple[int, ...]  # W_alpha intersected with the chi-stabilizer
    jump: int  # e_alpha = |W_alpha| / |meet|
    a_class: str  # "A0" when jump < order, "A1" when jump == order


@dataclass
class ChiInvariants:
    w_chi: tuple[int, ...]
    per_hyperplane: list[HyperplaneInvariant]
    w_chi_zero: tuple[int, ...]
    chi_orbits: list[list[int]]  # orbits of hyperplanes under the stabilizer
    zero_orbits: list[list[int]]  # orbits under the reflection subgroup
    rho_values: dict[int, CycNumber]  # keyed by least hyperplane of A1 orbits
    rho_trivial: bool
    checks: list[CheckResult] = field(default_factory=list)

    def jump(self, alpha: int) -> int:
        return self.per_hyperplane[alpha].jump

    def a_zero(self) -> list[int]:
        return [a for a, h in enumerate(self.per_hyperplane) if h.a_class == "A0"]

    def a_one(self) -> list[int]:
        return [a for a, h in enumerate(self.per_hyperplane) if h.a_class == "A1"]

    def to_json(self) -> dict:
        return {
            "w_chi": list(self.w_chi),
            "w_chi_order": len(self.w_chi),
            "per_hyperplane": [
                {
                    "index": a,
                    "stabilizer_meet": list(h.stabilizer_meet),
                    "jump": h.jump,
                    "class": h.a_class,
                }
                for a, h in enumerate(self.per_hyperplane)
            ],
            "w_chi_zero": list(self.w_chi_zero),
            "w_chi_zero_order": len(self.w_chi_zero),
            "chi_orbits": self.chi_orbits,
            "rho_values": {str(a): v.to_json() for a, v in sorted(self.rho_values.items())},
            "rho_trivial": self.rho_trivial,
            "checks": [c.to_json() for c in self.checks],
        }


def _orbits_under(datum: ExtensionDatum, subgroup) -> list[list[int]]:
    arr = datum.arrangement
    seen = [False] * len(arr)
    orbits = []
    for a in range(len(arr)):
        if seen[a]:
            continue
        orbit = sorted({arr.act(w, a) for w in subgroup})
        for b in orbit:
            seen[b] = True
        orbits.append(orbit)
    return orbits


def _normalize_rbar_params(inv_or_orbits, rbar_params) -> dict[int, CycPoly]:
    """Accept per-hyperplane or per-orbit keys; return per-hyperplane."""
    out: dict[int, CycPoly] = {}
    for orbit in inv_or_orbits:
        keyed = [a for a in orbit if a in rbar_params]
        if not keyed:
            continue
        polys = {rbar_params[a] for a in keyed}
        if len(polys) > 1:
            raise ParameterError(
                f"relation polynomials differ across the stabilizer orbit {orbit}"
            )
        poly = rbar_params[keyed[0]]
        for a in orbit:
            out[a] = poly
    return out


def compute_chi_invariants(
    datum: ExtensionDatum,
    chi: Character,
    rbar_params: dict[int, CycPoly] | None = None,
) -> ChiInvariants:
    """All stabilizer invariants of a character.

    rbar_params, when given, maps hyperplane indices (any representative of
    a stabilizer orbit) to monic relation polynomials; on full-jump
    hyperplanes they must have degree one and their roots populate the
    degree-one relation character.
    """
    group = datum.group
    arr = datum.arrangement
    checks: list[CheckResult] = []

    w_chi = datum.stabilizer_of_character(chi)
    w_chi_set = set(w_chi)

    per: list[HyperplaneInvariant] = []
    local_gens: list[int] = []
    for a in range(len(arr)):
        h = arr[a]
        meet = tuple(i for i in h.stabilizer_elements if i in w_chi_set)
        jump = h.order // len(meet)
        # the meet of two subgroups of a cyclic group is the cyclic group
        # on the expected power; verified rather than assumed
        expected = subgroup_generated(group, [_power(group, h.distinguished_generator, jump)])
        if tuple(sorted(meet)) != expected:
            raise IntegrityError(
                f"local stabilizer meet at hyperplane {a} is not generated by "
                f"the {jump}-th power of the distinguished generator"
            )
        per.append(
            HyperplaneInvariant(
                stabilizer_meet=meet,
                jump=jump,
                a_class="A1" if jump == h.order else "A0",
            )
        )
        local_gens.extend(meet)

    w_chi_zero = subgroup_generated(group, local_gens)

    # containment in the stabilizer
    containment = set(w_chi_zero) <= w_chi_set
    checks.append(
        CheckResult(
            "chi.reflection_subgroup_in_stabilizer",
            "pass" if containment else "fail",
            None if containment else f"escaping elements {sorted(set(w_chi_zero) - w_chi_set)}",
        )
    )
    if not containment:
        raise IntegrityError("reflection subgroup escapes the stabilizer")

    # the reflection subgroup meets every local stabilizer exactly in the
    # stored meet; the source asserts this without proof, so verify it
    witness = None
    zero_set = set(w_chi_zero)
    for a in range(len(arr)):
        got = tuple(
            i for i in arr[a].stabilizer_elements if i in zero_set
        )
        if got != per[a].stabilizer_meet:
            witness = f"hyperplane {a}: {got} vs {per[a].stabilizer_meet}"
            break
    checks.append(
        CheckResult(
            "chi.local_meet_identity",
            "pass" if witness is None else "fail",
            witness,
        )
    )
    if witness is not None:
        raise IntegrityError(f"local meet identity failed: {witness}")

    # every generator of the reflection subgroup fixes a hyperplane
    witness = None
    for g in sorted(set(local_gens)):
        if g == group.identity_index:
            continue
        from .cyclo import CycMatrix

        diff = group.elements[g] - CycMatrix.identity(group.rank)
        if diff.rank() != 1:
            witness = f"generator {g} does not fix a hyperplane"
            break
    checks.append(
        CheckResult(
            "chi.generators_are_reflections",
            "pass" if witness is None else "fail",
            witness,
        )
    )

    # jump constancy along stabilizer orbits
    chi_orbits = _orbits_under(datum, w_chi)
    witness = None
    for orbit in chi_orbits:
        jumps = {per[a].jump for a in orbit}
        if len(jumps) > 1:
            witness = f"orbit {orbit} has jumps {sorted(jumps)}"
            break
    checks.append(
        CheckResult("chi.jump_orbit_constancy", "pass" if witness is None else "fail", witness)
    )
    if witness is not None:
        raise IntegrityError(f"jump invariance failed: {witness}")

    zero_orbits = _orbits_under(datum, w_chi_zero)

    # degree-one relation character on full-jump hyperplanes
    rho_values: dict[int, CycNumber] = {}
    one = CycNumber.rational(1)
    params = (
        _normalize_rbar_params(chi_orbits, rbar_params) if rbar_params else {}
    )
    for orbit in zero_orbits:
        rep = orbit[0]
        if per[rep].a_class != "A1":
            continue
        poly = params.get(rep)
        if poly is None:
            rho_values[rep] = one
            continue
        if poly.degree != 1:
            raise ParameterError(
                f"full-jump hyperplane {rep} requires a degree-one relation "
                f"polynomial, got degree {poly.degree}"
            )
        root = -poly.constant_term
        if root.root_of_unity_order() is None:
            raise ParameterError(
                f"relation root {root!r} at hyperplane {rep} is not a root of unity"
            )
        rho_values[rep] = root
    rho_trivial = all(v.is_one() for v in rho_values.values())

    return ChiInvariants(
        w_chi=w_chi,
        per_hyperplane=per,
        w_chi_zero=w_chi_zero,
        chi_orbits=chi_orbits,
        zero_orbits=zero_orbits,
        rho_values=rho_values,
        rho_trivial=rho_trivial,
        checks=checks,
    )


def _power(group, i: int, k: int) -> int:
    out = group.identity_index
    for _ in range(k):
        out = group.mul(out, i)
    return out


def check_generation(datum: ExtensionDatum, inv: ChiInvariants):
    """Confirm the reflection subgroup is generated by the local meets and
    that each meet is the cyclic group on the jump-th power.  Returns
    (ok, witness)."""
    group = datum.group
    arr = datum.arrangement
    gens = []
    for a in range(len(arr)):
        meet = inv.per_hyperplane[a].stabilizer_meet
        power = _power(group, arr[a].distinguished_generator, inv.per_hyperplane[a].jump)
        expected = subgroup_generated(group, [power])
        if tuple(sorted(meet)) != expected:
            return False, f"hyperplane {a}: meet is not generated by the jump power"
        gens.extend(meet)
    regenerated = subgroup_generated(group, gens)
    if regenerated != inv.w_chi_zero:
        return False, (
            f"reflection subgroup mismatch: generated {len(regenerated)} elements, "
            f"stored {len(inv.w_chi_zero)}"
        )
    return True, None
