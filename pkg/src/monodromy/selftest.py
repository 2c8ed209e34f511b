"""Property suites runnable from the command line, one scope per module."""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

from .carousel import build_carousel, carousel_minpolys
from .cyclo import (
    CycMatrix,
    CycNumber,
    CycPoly,
    detect_power_factor,
    minpoly_matrix,
    theta,
    zeta,
)
from .errors import ParseError
from .extension import character_from_spec, validate
from .fixtures import corpus
from .hecke import build_coxeter, build_cyclic, build_product
from .induce import build_i_action, build_ledger
from .invariants import check_generation, compute_chi_invariants
from .reflgrp import catalog, catalog_order, enumerate_group, hyperplanes


class _Suite:
    def __init__(self):
        self.checks = 0
        self.failures: list[str] = []

    def ok(self, condition, message):
        self.checks += 1
        if not condition:
            self.failures.append(message)


def _scope_cyclo(suite: _Suite):
    rng = random.Random(20)
    roots = [zeta(n, k) for n in (1, 2, 3, 4, 6, 12) for k in range(n)]
    for _ in range(200):
        deg = rng.randint(1, 5)
        coeffs = [
            CycNumber.rational(Fraction(rng.randint(-3, 3), rng.choice([1, 2])))
            + rng.choice(roots) * rng.randint(0, 1)
            for _ in range(deg)
        ]
        if coeffs[0].is_zero():
            coeffs[0] = CycNumber.rational(1)
        p = CycPoly(coeffs + [CycNumber.rational(1)])
        q = theta(p)
        suite.ok(theta(q) == p, "involution failed")
        suite.ok(q.degree == p.degree, "involution changed the degree")
    for _ in range(100):
        a, b, c = (rng.choice(roots) + CycNumber.rational(rng.randint(-2, 2)) for _ in range(3))
        suite.ok((a + b) + c == a + (b + c), "associativity of addition")
        suite.ok(a * (b + c) == a * b + a * c, "distributivity")
        if not a.is_zero():
            suite.ok((a * a.inverse()).is_one(), "multiplicative inverse")
    mats = [
        CycMatrix([[CycNumber.rational(0), CycNumber.rational(1)], [CycNumber.rational(1), CycNumber.rational(0)]]),
        CycMatrix([[zeta(3), CycNumber.rational(0)], [CycNumber.rational(1), zeta(4)]]),
    ]
    for m in mats:
        p = minpoly_matrix(m)
        suite.ok(p.evaluate(m).is_zero(), "minimal polynomial does not annihilate")
    p = CycPoly([CycNumber.rational(-1)] + [CycNumber.rational(0)] * 3 + [CycNumber.rational(1)])
    suite.ok(detect_power_factor(p, 1) == p, "unit power factor is not the identity")


def _scope_reflgrp(suite: _Suite):
    for m in range(1, 7):
        for p in range(1, m + 1):
            if m % p:
                continue
            for r in range(1, 4):
                g = enumerate_group(catalog(m, p, r))
                suite.ok(
                    len(g) == catalog_order(m, p, r),
                    f"catalog order mismatch at ({m},{p},{r})",
                )
    for gens in (catalog(2, 1, 2), catalog(3, 3, 2), catalog(1, 1, 3), catalog(4, 4, 2)):
        g = enumerate_group(gens)
        arr = hyperplanes(g)
        reflections = sum(
            1
            for i in range(1, len(g))
            if (g.elements[i] - CycMatrix.identity(g.rank)).rank() == 1
        )
        suite.ok(
            arr.reflection_count() == reflections,
            "reflection count identity failed",
        )
        if len(g) <= 200:
            for w in range(len(g)):
                for a in range(len(arr)):
                    b = arr.act(w, a)
                    suite.ok(
                        g.conjugate(w, arr[a].distinguished_generator)
                        == arr[b].distinguished_generator,
                        f"conjugation does not permute generators at ({w},{a})",
                    )


def _scope_extdata(suite: _Suite):
    for entry in corpus():
        datum = entry["datum"]
        report = validate(datum)
        suite.ok(report.ok, f"{datum.name}: validation failed")
        chis = datum.characters() if len(datum.kernel) <= 9 else []
        for chi in chis:
            for w1 in range(len(datum.group)):
                for w2 in range(len(datum.group)):
                    lhs = datum.act_on_character(datum.group.mul(w1, w2), chi)
                    rhs = datum.act_on_character(w1, datum.act_on_character(w2, chi))
                    suite.ok(lhs == rhs, f"{datum.name}: action axiom failed")
                if len(datum.group) > 8:
                    break
        tau = datum.tau_as_character()
        for w in range(len(datum.group)):
            suite.ok(
                datum.act_on_character(w, tau) == tau,
                f"{datum.name}: sign character moved by the action",
            )


def _scope_chi(suite: _Suite):
    for entry in corpus():
        datum = entry["datum"]
        for spec in entry["chi_specs"]:
            chi = character_from_spec(datum, spec)
            inv = compute_chi_invariants(datum, chi)
            ok, witness = check_generation(datum, inv)
            suite.ok(ok, f"{datum.name}: generation failed ({witness})")
            suite.ok(
                set(inv.w_chi_zero) <= set(inv.w_chi),
                f"{datum.name}: reflection subgroup escapes the stabilizer",
            )
            suite.ok(
                len(datum.group) % len(inv.w_chi) == 0,
                f"{datum.name}: stabilizer order does not divide",
            )


def _scope_carousel(suite: _Suite, n_max=12):
    twists = [
        zeta(k, j)
        for k in range(1, 13)
        for j in range(k)
        if math.gcd(j, k) == 1 or (j == 0 and k == 1)
    ]
    for n in range(1, n_max + 1):
        divisors = [e for e in range(1, n + 1) if n % e == 0]
        for e in divisors:
            for sgn in (1, -1):
                for twist in twists:
                    model = build_carousel(n, e, sgn, twist)
                    polys = carousel_minpolys(model)
                    suite.ok(polys.r.degree == n, "degree identity failed")
                    suite.ok(
                        detect_power_factor(polys.r, e) == polys.rbar,
                        "power-support identity failed",
                    )
                    suite.ok(
                        model.mu_e == (model.lambda_inv**e) * CycNumber.rational(sgn**e),
                        "family-vs-braid comparison failed",
                    )


def _scope_hecke(suite: _Suite):
    one = CycNumber.rational(1)
    for d in range(1, 13):
        for const in (one, -one, zeta(3)):
            coeffs = [-const] + [CycNumber.rational(0)] * (d - 1) + [one]
            h = build_cyclic(CycPoly(coeffs))
            suite.ok(h.dimension == d, f"cyclic dimension at degree {d}")
    quadratics = [
        CycPoly([CycNumber.rational(-1), CycNumber.rational(0), one]),
        CycPoly([CycNumber.rational(-3), CycNumber.rational(-2), one]),
        CycPoly([zeta(4), CycNumber.rational(0), one]),
    ]
    for gens, expected in [
        (catalog(1, 1, 2), 2),
        ([g for g in catalog(1, 1, 3)], 6),
        (catalog(2, 1, 2), 8),
        (catalog(1, 1, 4), 24),
        (catalog(6, 6, 2), 12),
    ]:
        g = enumerate_group(gens)
        arr = hyperplanes(g)
        for rbar in quadratics:
            params = {arr[a].orbit_id: rbar for a in range(len(arr))}
            h = build_coxeter(g, params)
            suite.ok(h.dimension == expected == len(g), "quadratic dimension")
            for key, m in h.generators.items():
                suite.ok(
                    minpoly_matrix(m) == h.params[key],
                    "generator relation mismatch",
                )
    prod = build_product([build_cyclic(quadratics[0]), build_cyclic(quadratics[1])])
    suite.ok(prod.dimension == 4, "product dimension")


def _scope_induce(suite: _Suite):
    import json
    import tempfile

    for entry in corpus():
        datum = entry["datum"]
        for spec in entry["chi_specs"]:
            chi = character_from_spec(datum, spec)
            inv = compute_chi_invariants(datum, chi)
            ledger = build_ledger(datum, chi, inv)
            suite.ok(
                ledger.dim_mchi == len(datum.group),
                f"{datum.name}: total dimension identity",
            )
            suite.ok(
                ledger.dim_m0 == len(inv.w_chi_zero),
                f"{datum.name}: subspace dimension identity",
            )
            suite.ok(
                all(b.dimension == len(inv.w_chi) for b in ledger.blocks),
                f"{datum.name}: block dimension identity",
            )
            build_i_action(datum, chi, inv)
    # end-to-end: the full pipeline over the corpus, with every reported
    # verdict passing and the documented exit codes
    from .cli import run_analyze
    from .fixtures import write_corpus

    with tempfile.TemporaryDirectory() as tmp:
        write_corpus(tmp)
        manifest = json.load(open(f"{tmp}/manifest.json"))
        for entry in manifest:
            if entry["expected_exit"] != 0:
                continue
            for spec in entry["chi_specs"]:
                spec_str = spec if isinstance(spec, str) else json.dumps(spec)
                report, code, _ = run_analyze(f"{tmp}/{entry['file']}", spec_str)
                suite.ok(code == 0, f"{entry['file']}: exit {code}")
                fails = [
                    v["name"] for v in report["verdicts"] if v["status"] == "fail"
                ]
                suite.ok(not fails, f"{entry['file']}: failing verdicts {fails}")


_SCOPES = {
    "cyclo": _scope_cyclo,
    "reflgrp": _scope_reflgrp,
    "extdata": _scope_extdata,
    "chi": _scope_chi,
    "carousel": _scope_carousel,
    "hecke": _scope_hecke,
    "induce": _scope_induce,
}


def run_selftest(scope: str = "all") -> bool:
    if scope != "all" and scope not in _SCOPES:
        raise ParseError(
            f"unknown selftest scope {scope!r}; choose from "
            f"{', '.join(sorted(_SCOPES))} or 'all'"
        )
    names = sorted(_SCOPES) if scope == "all" else [scope]
    all_ok = True
    for name in names:
        suite = _Suite()
        start = time.time()
        _SCOPES[name](suite)
        elapsed = time.time() - start
        status = "ok" if not suite.failures else "FAIL"
        print(f"{name}: {suite.checks} checks, {len(suite.failures)} failures, "
              f"{elapsed:.1f}s [{status}]")
        for failure in suite.failures[:10]:
            print(f"  - {failure}")
        all_ok = all_ok and not suite.failures
    return all_ok
