"""Datum ingestion, pipeline orchestration, and report emission.

Exit codes: 0 on success (including unsupported-regime downgrades, which
only warn), 2 for parse and usage errors, 3 for datum validation and
parameter errors, 4 for integrity failures.  Reports are deterministic:
identical inputs produce byte-identical JSON.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import __version__
from .carousel import build_carousel, carousel_minpolys, twist_from_extension
from .cyclo import CycNumber, CycPoly, zeta
from .errors import (
    CapacityError,
    DomainError,
    IntegrityError,
    ParameterError,
    ParseError,
    RegimeError,
    ValidationError,
)
from .extension import (
    CheckResult,
    character_from_spec,
    datum_from_json,
    validate,
)
from .hecke import build_coxeter, build_cyclic
from .induce import build_full_r1, build_full_r2, build_i_action
from .invariants import compute_chi_invariants, check_generation
from .reflgrp import catalog, catalog_order, enumerate_group, hyperplanes

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_INTEGRITY = 4


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _fingerprint(obj) -> str:
    return hashlib.sha256(_canonical_json(obj).encode()).hexdigest()


def _load_json_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _parse_chi_spec(raw: str):
    if raw == "trivial":
        return "trivial"
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"character spec is not valid JSON: {exc}") from exc


def _parse_twist(raw: str) -> CycNumber:
    try:
        j, _, k = raw.partition("/")
        return zeta(int(k or "1"), int(j))
    except (ValueError, DomainError) as exc:
        raise ParseError(f"bad twist {raw!r}; expected j/k for a root of unity") from exc


# ---------------------------------------------------------------------------
# analyze pipeline


def _orbit_constant(datum, orbit, mapping, default, what):
    """The single value a per-hyperplane map takes on a stabilizer orbit."""
    values = {mapping.get(a, default) for a in orbit}
    if len(values) != 1:
        raise IntegrityError(
            f"{what} is not constant on the stabilizer orbit {orbit}"
        )
    return values.pop()


def _carousel_stage(datum, chi, inv, rbar_overrides):
    """Per stabilizer orbit: build the rank-one model from the datum's sign
    and wrap-around scalars, certify its polynomial identities, and settle
    the relation polynomial handed to the later stages."""
    sections = []
    rbar_by_alpha: dict[int, CycPoly] = {}
    for orbit in inv.chi_orbits:
        rep = orbit[0]
        n = datum.arrangement[rep].order
        for a in orbit[1:]:
            if datum.arrangement[a].order != n:
                raise IntegrityError(
                    f"hyperplane orders differ along the stabilizer orbit {orbit}"
                )
        e = inv.per_hyperplane[rep].jump
        sgn = _orbit_constant(datum, orbit, datum.sgn, 1, "sign datum")
        twists = {a: datum.twist.get(a) or twist_from_extension(datum, a, chi) for a in orbit}
        twist = _orbit_constant(datum, orbit, twists, None, "wrap-around scalar")
        model = build_carousel(n, e, sgn, twist)
        polys = carousel_minpolys(model)
        applied = polys.rbar
        if rbar_overrides and rep in rbar_overrides:
            applied = rbar_overrides[rep]
            if applied.degree != n // e:
                raise ParameterError(
                    f"override relation at orbit {orbit} has degree "
                    f"{applied.degree}, expected {n // e}"
                )
            if applied.constant_term.is_zero():
                raise ParameterError(
                    f"override relation at orbit {orbit} has zero constant term"
                )
        for a in orbit:
            rbar_by_alpha[a] = applied
        sections.append(
            {
                "orbit": orbit,
                "n": n,
                "jump": e,
                "sgn": sgn,
                "twist": twist.to_json(),
                "model": model.to_json(),
                "polynomials": polys.to_json(),
                "applied_rbar": applied.to_json(),
            }
        )
    return sections, rbar_by_alpha


def _rbar_overrides_from_file(datum, inv, path):
    obj = _load_json_file(path)
    if not isinstance(obj, dict):
        raise ParseError("relation override file must be a JSON object")
    by_alpha = {}
    try:
        for key, poly in obj.items():
            by_alpha[int(key)] = CycPoly.from_json(poly)
    except (ValueError, TypeError, DomainError) as exc:
        raise ParseError(f"bad relation override: {exc}") from exc
    # normalize to orbit representatives, enforcing orbit constancy
    out = {}
    for orbit in inv.chi_orbits:
        keyed = [a for a in orbit if a in by_alpha]
        if not keyed:
            continue
        polys = {by_alpha[a] for a in keyed}
        if len(polys) != 1:
            raise ParameterError(
                f"override relations differ across the stabilizer orbit {orbit}"
            )
        out[orbit[0]] = polys.pop()
    return out


def _hecke_stage(datum, inv, rbar_by_alpha):
    """Build the deformed algebra of the reflection subgroup when it falls
    in a supported regime; otherwise report the predicted dimension."""
    group = datum.group
    sub = inv.w_chi_zero
    if len(sub) == 1:
        algebra = build_cyclic(CycPoly([CycNumber.rational(-1), CycNumber.rational(1)]))
        return algebra, {"regime": "cyclic", "dimension": 1,
                         "generators": {}, "note": "trivial reflection subgroup"}
    # cyclic: one local meet is the whole subgroup
    cyclic_alpha = None
    for a in range(len(datum.arrangement)):
        meet = inv.per_hyperplane[a].stabilizer_meet
        if len(meet) == len(sub) and set(meet) == set(sub):
            cyclic_alpha = a
            break
    if cyclic_alpha is not None:
        algebra = build_cyclic(rbar_by_alpha[cyclic_alpha])
        return algebra, algebra.to_json()
    # quadratic: all nontrivial meets have order two; over the whole group
    # the datum's own enumeration is reused so module builders can share it
    gens = []
    for a in range(len(datum.arrangement)):
        meet = inv.per_hyperplane[a].stabilizer_meet
        if len(meet) > 2:
            return None, _unsupported_hecke(inv, f"local order {len(meet)} at hyperplane {a}")
        if len(meet) == 2:
            gens.append(next(i for i in meet if i != group.identity_index))
    if len(sub) == len(group):
        subgroup = group
        params = {
            datum.arrangement[a].orbit_id: rbar_by_alpha[a]
            for a in range(len(datum.arrangement))
        }
    else:
        subgroup = enumerate_group([group.elements[g] for g in sorted(set(gens))])
        if len(subgroup) != len(sub):
            raise IntegrityError(
                f"re-enumerated reflection subgroup has order {len(subgroup)}, "
                f"expected {len(sub)}"
            )
        sub_arr = hyperplanes(subgroup)
        params = {}
        for b in range(len(sub_arr)):
            normal = sub_arr[b].normal
            alpha = datum.arrangement.index_of_normal(normal)
            oid = sub_arr[b].orbit_id
            poly = rbar_by_alpha[alpha]
            if oid in params and params[oid] != poly:
                raise IntegrityError(
                    f"relation polynomials disagree on subgroup orbit {oid}"
                )
            params[oid] = poly
    try:
        algebra = build_coxeter(subgroup, params)
    except RegimeError as exc:
        return None, _unsupported_hecke(inv, str(exc))
    return algebra, algebra.to_json()


def _unsupported_hecke(inv, reason):
    return {
        "regime": "unsupported",
        "predicted_dimension": len(inv.w_chi_zero),
        "note": f"dimension asserted, not certified here ({reason})",
    }


def _mchi_stage(datum, chi, inv, hecke_algebra, rbar_by_alpha, convention):
    """Full module when a regime applies, ledger plus inertia action
    otherwise.  Returns (section, warnings)."""
    warnings = []
    group = datum.group
    if inv.w_chi_zero == (group.identity_index,):
        try:
            module = build_full_r1(datum, chi, inv, convention)
            return module.to_json(), warnings
        except RegimeError as exc:
            warnings.append(f"full module downgraded to ledger-only: {exc}")
    elif (
        len(inv.w_chi) == len(group)
        and len(inv.w_chi_zero) == len(group)
        and all(h.jump == 1 for h in inv.per_hyperplane)
        and hecke_algebra is not None
        and hecke_algebra.dimension == len(group)
    ):
        try:
            module = build_full_r2(
                datum, chi, inv, hecke_algebra, rbar_by_alpha, convention
            )
            return module.to_json(), warnings
        except RegimeError as exc:
            warnings.append(f"full module downgraded to ledger-only: {exc}")
    else:
        warnings.append(
            "full module unavailable: nontrivial proper reflection subgroup "
            "or unsupported algebra regime; emitting ledger and inertia action"
        )
    action = build_i_action(datum, chi, inv, convention)
    section = {
        "regime": "ledger-only",
        "ledger": action.ledger.to_json(),
        "inertia_action": action.to_json(),
    }
    return section, warnings


def run_analyze(datum_path, chi_spec, rbar_path=None, convention=None):
    """Full pipeline; returns (report, exit_code, warnings).

    The inertia convention comes from the datum unless given explicitly."""
    warnings: list[str] = []
    raw = _load_json_file(datum_path)
    datum = datum_from_json(raw)
    if convention is None:
        convention = datum.convention
    chi_obj = _parse_chi_spec(chi_spec) if isinstance(chi_spec, str) else chi_spec

    report = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "monodromy", "version": __version__},
        "fingerprint": _fingerprint(raw),
        "chi_spec": chi_obj,
        "convention": convention,
        "group": {
            "name": datum.name,
            "order": len(datum.group),
            "rank": datum.group.rank,
            "hyperplanes": len(datum.arrangement),
            "orbits": datum.arrangement.orbits(),
        },
        "arrangement": datum.arrangement.to_json(),
    }
    verdicts: list[CheckResult] = []

    def finish(code):
        report["verdicts"] = [c.to_json() for c in verdicts]
        return report, code, warnings

    validation = validate(datum)
    report["validation"] = validation.to_json()
    verdicts.extend(validation.checks)
    if not validation.ok:
        return finish(EXIT_VALIDATION)

    try:
        chi = character_from_spec(datum, chi_obj)
    except (ValidationError, DomainError) as exc:
        report["error"] = f"character spec rejected: {exc}"
        return finish(EXIT_VALIDATION)

    try:
        inv = compute_chi_invariants(datum, chi)
        overrides = (
            _rbar_overrides_from_file(datum, inv, rbar_path) if rbar_path else None
        )
        carousel_sections, rbar_by_alpha = _carousel_stage(datum, chi, inv, overrides)
        rbar_params = {orbit[0]: rbar_by_alpha[orbit[0]] for orbit in inv.chi_orbits}
        inv = compute_chi_invariants(datum, chi, rbar_params=rbar_params)
        verdicts.extend(inv.checks)
        gen_ok, gen_witness = check_generation(datum, inv)
        verdicts.append(
            CheckResult(
                "chi.local_generation",
                "pass" if gen_ok else "fail",
                gen_witness,
            )
        )
        if not gen_ok:
            raise IntegrityError(f"generation check failed: {gen_witness}")
        report["chi_invariants"] = inv.to_json()
        report["carousel"] = carousel_sections

        hecke_algebra, hecke_section = _hecke_stage(datum, inv, rbar_by_alpha)
        report["hecke"] = hecke_section
        if hecke_algebra is not None:
            verdicts.append(
                CheckResult(
                    "hecke.dimension",
                    "pass" if hecke_algebra.dimension == len(inv.w_chi_zero) else "fail",
                    f"dimension {hecke_algebra.dimension} vs subgroup order "
                    f"{len(inv.w_chi_zero)}",
                )
            )
            if hecke_algebra.dimension != len(inv.w_chi_zero):
                raise IntegrityError("algebra dimension mismatch")
        else:
            warnings.append("deformed algebra regime unsupported; dimension asserted only")

        mchi_section, mchi_warnings = _mchi_stage(
            datum, chi, inv, hecke_algebra, rbar_by_alpha, convention
        )
        warnings.extend(mchi_warnings)
        report["m_chi"] = mchi_section
        for check in mchi_section.get("checks", []):
            verdicts.append(CheckResult(check["name"], check["status"], check["witness"]))
        ledger = mchi_section["ledger"]
        verdicts.append(
            CheckResult(
                "m_chi.dimension_identities",
                "pass"
                if ledger["dim_mchi"] == len(datum.group)
                and ledger["dim_m0"] * ledger["index"] == ledger["dim_mchi"]
                else "fail",
                None,
            )
        )
    except ParameterError as exc:
        report["error"] = f"parameter error: {exc}"
        return finish(EXIT_VALIDATION)
    except IntegrityError as exc:
        report["error"] = f"integrity error: {exc}"
        return finish(EXIT_INTEGRITY)

    report["warnings"] = warnings
    if any(c.status == "fail" for c in verdicts):
        return finish(EXIT_INTEGRITY)
    return finish(EXIT_OK)


def render_report(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# other subcommands


def run_catalog(family, m, p, r):
    if family != "g":
        raise ParseError(f"unknown catalog family {family!r}")
    gens = catalog(m, p, r)
    group = enumerate_group(gens)
    expected = catalog_order(m, p, r)
    if len(group) != expected:
        raise IntegrityError(
            f"closure order {len(group)} differs from the formula {expected}"
        )
    obj = group.to_json(f"g({m},{p},{r})")
    obj["order"] = len(group)
    obj["schema_version"] = SCHEMA_VERSION
    return obj


def run_carousel(n, e, sgn, twist):
    model = build_carousel(n, e, sgn, twist)
    polys = carousel_minpolys(model)
    return {
        "schema_version": SCHEMA_VERSION,
        "model": model.to_json(),
        "polynomials": polys.to_json(),
    }


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="monodromy",
        description="exact invariants of reflection-group extension data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="run the full pipeline on a datum")
    p_analyze.add_argument("datum", help="datum JSON file")
    p_analyze.add_argument("--chi", required=True, help="'trivial' or a JSON character spec")
    p_analyze.add_argument("--rbar", help="JSON file of relation overrides per hyperplane")
    p_analyze.add_argument("--out", help="write the report here instead of stdout")
    p_analyze.add_argument(
        "--convention",
        choices=["left", "flip-inertia"],
        default=None,
        help="inertia block labeling convention (default: the datum's)",
    )

    p_catalog = sub.add_parser("catalog", help="emit generators for a standard family")
    p_catalog.add_argument("family", help="family tag (only 'g' is supported)")
    p_catalog.add_argument("m", type=int)
    p_catalog.add_argument("p", type=int)
    p_catalog.add_argument("r", type=int)
    p_catalog.add_argument("--out")

    p_car = sub.add_parser("carousel", help="build one rank-one model")
    p_car.add_argument("--n", type=int, required=True)
    p_car.add_argument("--e", type=int, required=True)
    p_car.add_argument("--sgn", type=int, default=1)
    p_car.add_argument("--twist", default="0/1", help="j/k for a k-th root of unity")
    p_car.add_argument("--out")

    p_self = sub.add_parser("selftest", help="run the module property suites")
    p_self.add_argument("scope", nargs="?", default="all")

    args = parser.parse_args(argv)

    try:
        if args.command == "analyze":
            convention = None
            if args.convention is not None:
                convention = "inverse" if args.convention == "flip-inertia" else "left"
            report, code, warnings = run_analyze(
                args.datum, args.chi, args.rbar, convention
            )
            payload = render_report(report)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(payload)
            else:
                sys.stdout.write(payload)
            for w in warnings:
                print(f"warning: {w}", file=sys.stderr)
            return code
        if args.command == "catalog":
            payload = render_report(run_catalog(args.family, args.m, args.p, args.r))
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(payload)
            else:
                sys.stdout.write(payload)
            return EXIT_OK
        if args.command == "carousel":
            twist = _parse_twist(args.twist)
            payload = render_report(run_carousel(args.n, args.e, args.sgn, twist))
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(payload)
            else:
                sys.stdout.write(payload)
            return EXIT_OK
        if args.command == "selftest":
            from .selftest import run_selftest

            ok = run_selftest(args.scope)
            return EXIT_OK if ok else 1
    except (ParseError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except IntegrityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
