import pytest

from monodromy.carousel import build_carousel, carousel_minpolys, twist_from_extension
from monodromy.cyclo import CycMatrix, CycNumber, CycPoly, minpoly_matrix, zeta
from monodromy.errors import RegimeError
from monodromy.extension import Character, character_from_spec
from monodromy.fixtures import (
    _s3xs3_faithful_chi_spec,
    _v4_partition_chi_spec,
    dic12_over_s2_datum,
    direct_product_datum,
    q8_over_v4_datum,
    s3_over_s2_datum,
    s3_rank2_generators,
    s3xs3_over_v4_datum,
    s4_over_s3_datum,
    z8_over_z4_datum,
)
from monodromy.hecke import build_coxeter, build_cyclic
from monodromy.induce import (
    build_full_r1,
    build_full_r2,
    build_i_action,
    build_ledger,
)
from monodromy.invariants import compute_chi_invariants


def rat(x):
    return CycNumber.rational(x)


def faithful_chi(datum):
    gen = max(datum.kernel, key=lambda x: (datum.wtilde.element_order(x), -x))
    k = datum.wtilde.element_order(gen)
    return datum.character_from_values({gen: zeta(k)})


def default_rbar(datum, chi, inv, alpha):
    """The carousel-model relation for a hyperplane."""
    n = datum.arrangement[alpha].order
    e = inv.per_hyperplane[alpha].jump
    tw = twist_from_extension(datum, alpha, chi)
    return carousel_minpolys(build_carousel(n, e, 1, tw)).rbar


# ---------------------------------------------------------------------------
# ledger


def test_ledger_trivial_character_one_block():
    d = direct_product_datum("dp", [CycMatrix([[rat(-1)]])], 1)
    chi = Character.trivial(d.kernel)
    inv = compute_chi_invariants(d, chi)
    ledger = build_ledger(d, chi, inv)
    assert (ledger.dim_m0, ledger.index, ledger.dim_mchi) == (2, 1, 2)
    assert len(ledger.blocks) == 1 and ledger.blocks[0].dimension == 2


def test_ledger_s3_faithful():
    d = s3_over_s2_datum()
    chi = faithful_chi(d)
    inv = compute_chi_invariants(d, chi)
    ledger = build_ledger(d, chi, inv)
    assert (ledger.dim_m0, ledger.index, ledger.dim_mchi) == (1, 2, 2)
    assert [b.dimension for b in ledger.blocks] == [1, 1]


def test_ledger_z8_faithful():
    d = z8_over_z4_datum()
    chi = faithful_chi(d)
    inv = compute_chi_invariants(d, chi)
    ledger = build_ledger(d, chi, inv)
    assert (ledger.dim_m0, ledger.index, ledger.dim_mchi) == (4, 1, 4)
    assert [b.dimension for b in ledger.blocks] == [4]


def test_ledger_s4_partition_blocks():
    d = s4_over_s3_datum()
    chi = character_from_spec(d, _v4_partition_chi_spec(d))
    inv = compute_chi_invariants(d, chi)
    for convention in ("left", "inverse"):
        ledger = build_ledger(d, chi, inv, convention)
        assert (ledger.dim_m0, ledger.index, ledger.dim_mchi) == (2, 3, 6)
        assert [b.dimension for b in ledger.blocks] == [2, 2, 2]


def test_ledger_identities_across_fixture_characters():
    for d in (s3_over_s2_datum(), z8_over_z4_datum(), dic12_over_s2_datum(),
              s4_over_s3_datum(), q8_over_v4_datum()):
        for chi in d.characters():
            inv = compute_chi_invariants(d, chi)
            ledger = build_ledger(d, chi, inv)
            assert ledger.dim_mchi == len(d.group)
            assert ledger.dim_m0 * ledger.index == ledger.dim_mchi
            assert sum(b.dimension for b in ledger.blocks) == ledger.dim_mchi
            assert all(b.dimension == len(inv.w_chi) for b in ledger.blocks)


# ---------------------------------------------------------------------------
# inertia action


def test_i_action_identity_element():
    d = s3_over_s2_datum()
    chi = faithful_chi(d)
    inv = compute_chi_invariants(d, chi)
    act = build_i_action(d, chi, inv)
    assert act.matrix(d.wtilde.identity) == CycMatrix.identity(2)


def test_i_action_trivial_chi_nontrivial_tau_is_scalar():
    d = direct_product_datum("dp", s3_rank2_generators(), 2, tau_exponent=1)
    chi = Character.trivial(d.kernel)
    inv = compute_chi_invariants(d, chi)
    act = build_i_action(d, chi, inv)
    x = next(i for i in d.kernel if i != d.wtilde.identity)
    assert act.matrix(x) == CycMatrix.scalar(6, rat(-1))


def test_i_action_s3_faithful_eigenvalues():
    d = s3_over_s2_datum()
    chi = faithful_chi(d)
    inv = compute_chi_invariants(d, chi)
    act = build_i_action(d, chi, inv)
    x = next(i for i in d.kernel if i != d.wtilde.identity)
    scalars = act.scalars[x]
    assert sorted((s.order, s.coeffs) for s in scalars) == sorted(
        (s.order, s.coeffs) for s in (chi(x), chi(x) * chi(x))
    )


# ---------------------------------------------------------------------------
# regime R1


def test_r1_s3_matrices_frozen():
    d = s3_over_s2_datum()
    chi = faithful_chi(d)
    inv = compute_chi_invariants(d, chi)
    module = build_full_r1(d, chi, inv)
    swap = CycMatrix([[rat(0), rat(1)], [rat(1), rat(0)]])
    assert module.gen_matrices[0] == swap
    x = next(i for i in d.kernel if chi(i) == zeta(3))
    assert module.i_matrices[x] == CycMatrix(
        [[zeta(3), rat(0)], [rat(0), zeta(3, 2)]]
    )
    assert all(c.status == "pass" for c in module.checks)


def test_r1_trivial_group_degenerate_case():
    from monodromy.fixtures import trivial_w_datum

    d = trivial_w_datum()
    chi = d.characters()[1]
    inv = compute_chi_invariants(d, chi)
    module = build_full_r1(d, chi, inv)
    assert module.ledger.dim_mchi == 1
    assert module.gen_matrices == {}
    x = next(i for i in d.kernel if i != d.wtilde.identity)
    assert module.i_matrices[x] == CycMatrix([[chi(x) * rat(d.tau[x])]])


def test_r1_s3xs3_rank_two():
    d = s3xs3_over_v4_datum()
    chi = character_from_spec(d, _s3xs3_faithful_chi_spec(d))
    inv = compute_chi_invariants(d, chi)
    module = build_full_r1(d, chi, inv)
    assert module.ledger.dim_mchi == 4
    assert len(module.gen_matrices) == 2
    assert all(c.status == "pass" for c in module.checks)
    # the two braid generators commute here, as the datum asserts
    a, b = (module.gen_matrices[k] for k in sorted(module.gen_matrices))
    assert a * b == b * a


def test_r1_dic12_order_three_character():
    d = dic12_over_s2_datum()
    gen = max(d.kernel, key=lambda x: d.wtilde.element_order(x))
    chi = d.character_from_values({gen: zeta(3)})
    inv = compute_chi_invariants(d, chi, rbar_params={0: default_rbar(d, chi, compute_chi_invariants(d, chi), 0)})
    assert inv.rho_trivial
    module = build_full_r1(d, chi, inv)
    assert module.ledger.dim_mchi == 2


def test_r1_refused_when_rho_nontrivial():
    d = dic12_over_s2_datum()
    gen = max(d.kernel, key=lambda x: d.wtilde.element_order(x))
    chi = d.character_from_values({gen: zeta(6)})
    pre = compute_chi_invariants(d, chi)
    rbar = default_rbar(d, chi, pre, 0)
    assert rbar == CycPoly([rat(1), rat(1)])  # z + 1: nontrivial relation root
    inv = compute_chi_invariants(d, chi, rbar_params={0: rbar})
    assert not inv.rho_trivial
    with pytest.raises(RegimeError):
        build_full_r1(d, chi, inv)


def test_r1_refused_outside_regime():
    d = z8_over_z4_datum()
    chi = faithful_chi(d)  # invariant character: reflection subgroup is full
    inv = compute_chi_invariants(d, chi)
    with pytest.raises(RegimeError):
        build_full_r1(d, chi, inv)


def test_r1_flip_convention_consistency():
    d = s3_over_s2_datum()
    chi = faithful_chi(d)
    inv = compute_chi_invariants(d, chi)
    module = build_full_r1(d, chi, inv, convention="inverse")
    assert all(c.status == "pass" for c in module.checks)


# ---------------------------------------------------------------------------
# regime R2


def test_r2_sign_group_algebra():
    d = direct_product_datum("dp", [CycMatrix([[rat(-1)]])], 1)
    chi = Character.trivial(d.kernel)
    inv = compute_chi_invariants(d, chi)
    rbar = CycPoly([rat(-1), rat(0), rat(1)])
    module = build_full_r2(d, chi, inv, build_cyclic(rbar), {0: rbar})
    assert module.ledger.dim_mchi == 2
    assert all(c.status == "pass" for c in module.checks)


def test_r2_z8_faithful_pipeline():
    d = z8_over_z4_datum()
    chi = faithful_chi(d)
    inv = compute_chi_invariants(d, chi)
    rbar = default_rbar(d, chi, inv, 0)
    assert rbar == CycPoly([rat(1), rat(0), rat(0), rat(0), rat(1)])  # z^4 + 1
    module = build_full_r2(d, chi, inv, build_cyclic(rbar), {0: rbar})
    assert module.ledger.dim_mchi == 4
    x = next(i for i in d.kernel if i != d.wtilde.identity)
    assert module.i_matrices[x] == CycMatrix.scalar(4, rat(-1))
    assert minpoly_matrix(module.gen_matrices[0]) == rbar


def test_r2_s3_group_algebra():
    d = direct_product_datum("s3dp", s3_rank2_generators(), 2)
    chi = Character.trivial(d.kernel)
    inv = compute_chi_invariants(d, chi)
    rbar = CycPoly([rat(-1), rat(0), rat(1)])
    params = {oid: rbar for oid in {d.arrangement[a].orbit_id for a in range(3)}}
    hecke = build_coxeter(d.group, params)
    module = build_full_r2(d, chi, inv, hecke, {a: rbar for a in range(3)})
    assert module.ledger.dim_mchi == 6
    for alpha, m in module.gen_matrices.items():
        assert minpoly_matrix(m) == rbar
    assert all(c.status == "pass" for c in module.checks)


def test_r2_q8_nontrivial_relation():
    d = q8_over_v4_datum()
    chi = next(c for c in d.characters() if not c.is_trivial())
    inv = compute_chi_invariants(d, chi)
    rbars = {a: default_rbar(d, chi, inv, a) for a in range(2)}
    z2_plus_1 = CycPoly([rat(1), rat(0), rat(1)])
    assert rbars == {0: z2_plus_1, 1: z2_plus_1}
    params = {d.arrangement[a].orbit_id: rbars[a] for a in range(2)}
    hecke = build_coxeter(d.group, params)
    module = build_full_r2(d, chi, inv, hecke, rbars)
    assert module.ledger.dim_mchi == 4
    # kernel scalar: character times sign gives plus one here
    x = next(i for i in d.kernel if i != d.wtilde.identity)
    assert module.i_matrices[x] == CycMatrix.identity(4)
    assert all(c.status == "pass" for c in module.checks)


def test_r2_b2_split():
    d = direct_product_datum("b2dp", __import__("monodromy.reflgrp", fromlist=["catalog"]).catalog(2, 1, 2), 2)
    chi = Character.trivial(d.kernel)
    inv = compute_chi_invariants(d, chi)
    rbar = CycPoly([rat(-1), rat(0), rat(1)])
    params = {d.arrangement[a].orbit_id: rbar for a in range(len(d.arrangement))}
    hecke = build_coxeter(d.group, params)
    module = build_full_r2(
        d, chi, inv, hecke, {a: rbar for a in range(len(d.arrangement))}
    )
    assert module.ledger.dim_mchi == 8
    assert all(c.status == "pass" for c in module.checks)


def test_r2_refused_outside_regime():
    d = s3_over_s2_datum()
    chi = faithful_chi(d)
    inv = compute_chi_invariants(d, chi)
    with pytest.raises(RegimeError):
        build_full_r2(d, chi, inv, build_cyclic(CycPoly([rat(-1), rat(0), rat(1)])))
