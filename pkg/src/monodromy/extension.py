"""Finite extensions of a reflection group with a distinguished splitting.

The covering group is given by a Cayley table, the projection by an index
map, and the splitting by one covering element per hyperplane.  Characters
of the kernel are stored by their values (roots of unity).  Elements of the
pulled-back braid cover are pairs (covering element, braid word); braid
words are sequences of (hyperplane, +-1) letters and are only ever consumed
through homomorphism evaluation, never compared for equality.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclo import CycNumber
from .errors import DomainError, IntegrityError, ParseError, ValidationError
from .reflgrp import Arrangement, ReflectionGroup

WTILDE_CAP = 2_000


class CayleyGroup:
    """A finite group presented by its multiplication table."""

    def __init__(self, table, generators=None):
        if len(table) > WTILDE_CAP:
            raise ParseError(f"covering group order {len(table)} exceeds cap {WTILDE_CAP}")
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise ParseError("multiplication table must be square and nonempty")
        for row in table:
            for x in row:
                if not isinstance(x, int) or not 0 <= x < n:
                    raise ParseError(f"table entry {x!r} out of range")
        self.table = tuple(tuple(row) for row in table)
        self.order = n
        self.generators = list(generators) if generators else list(range(n))
        self._identity = None
        self._inv: list[int | None] = [None] * n

    @property
    def identity(self) -> int:
        if self._identity is None:
            for e in range(self.order):
                if all(
                    self.table[e][x] == x and self.table[x][e] == x
                    for x in range(self.order)
                ):
                    self._identity = e
                    break
            else:
                raise ValidationError("multiplication table has no identity")
        return self._identity

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        cached = self._inv[a]
        if cached is not None:
            return cached
        e = self.identity
        for b in range(self.order):
            if self.table[a][b] == e and self.table[b][a] == e:
                self._inv[a] = b
                return b
        raise ValidationError(f"element {a} has no inverse")

    def conjugate(self, a: int, x: int) -> int:
        """a x a^{-1}."""
        return self.mul(self.mul(a, x), self.inv(a))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv(a), -k)
        out = self.identity
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def element_order(self, a: int) -> int:
        e = self.identity
        cur = a
        n = 1
        while cur != e:
            cur = self.mul(cur, a)
            n += 1
        return n

    def associativity_witness(self):
        """A failing triple for Light's associativity test, or None.

        The generating set is augmented until it spans the table, which
        keeps the test sound for arbitrary input tables.
        """
        gens = list(dict.fromkeys(self.generators))
        covered = set(gens) | {self.identity}
        frontier = list(covered)
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.table[a][g]
                    if b not in covered:
                        covered.add(b)
                        nxt.append(b)
            frontier = nxt
        for extra in range(self.order):
            if extra not in covered:
                gens.append(extra)
        for g in gens:
            for a in range(self.order):
                ag = self.table[a][g]
                row_g = self.table[g]
                row_ag = self.table[ag]
                for b in range(self.order):
                    if self.table[a][row_g[b]] != row_ag[b]:
                        return (a, g, b)
        return None


class Character:
    """A one-dimensional character of the kernel, stored by its values."""

    def __init__(self, values: dict[int, CycNumber]):
        self.values = dict(values)

    @staticmethod
    def trivial(kernel) -> "Character":
        one = CycNumber.rational(1)
        return Character({x: one for x in kernel})

    def __call__(self, x: int) -> CycNumber:
        return self.values[x]

    def __eq__(self, other):
        return isinstance(other, Character) and self.values == other.values

    def __hash__(self):
        return hash(tuple(sorted((k, v) for k, v in self.values.items())))

    def is_trivial(self) -> bool:
        return all(v.is_one() for v in self.values.values())

    def inverse(self) -> "Character":
        return Character({x: v.inverse() for x, v in self.values.items()})

    def to_json(self) -> dict:
        return {str(x): v.to_json() for x, v in sorted(self.values.items())}

    def __repr__(self):
        vals = ", ".join(f"{x}:{v!r}" for x, v in sorted(self.values.items()))
        return f"Character({vals})"


@dataclass(frozen=True)
class FiberElement:
    """An element of the pulled-back braid cover: a covering element paired
    with a braid word whose images agree in the base group."""

    wt: int
    word: tuple[tuple[int, int], ...]


def free_reduce(word) -> tuple[tuple[int, int], ...]:
    out: list[tuple[int, int]] = []
    for letter in word:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(tuple(letter))
    return tuple(out)


@dataclass
class CheckResult:
    name: str
    status: str  # "pass", "fail", or "assumed"
    witness: str | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "status": self.status, "witness": self.witness}


class ValidationReport:
    def __init__(self, checks: list[CheckResult]):
        self.checks = checks

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_json() for c in self.checks]}


class ExtensionDatum:
    """A reflection group W, a finite cover of it with kernel I, a per-
    hyperplane splitting of the cover, and the sign character of I."""

    def __init__(
        self,
        group: ReflectionGroup,
        arrangement: Arrangement,
        wtilde: CayleyGroup,
        q: list[int],
        splitting: dict[int, int],
        tau: dict[int, int] | None = None,
        wtilde_alpha: dict[int, frozenset] | None = None,
        name: str = "datum",
        sgn: dict[int, int] | None = None,
        twist: dict[int, CycNumber] | None = None,
        braid_relations: list | None = None,
        convention: str = "left",
    ):
        if len(q) != wtilde.order:
            raise ParseError("projection map must cover the whole covering group")
        if any(not 0 <= w < len(group) for w in q):
            raise ParseError("projection map image out of range")
        self.group = group
        self.arrangement = arrangement
        self.wtilde = wtilde
        self.q = tuple(q)
        self.splitting = dict(splitting)
        self.kernel = tuple(
            sorted(i for i, w in enumerate(q) if w == group.identity_index)
        )
        self.tau = dict(tau) if tau else {x: 1 for x in self.kernel}
        self.wtilde_alpha_override = dict(wtilde_alpha) if wtilde_alpha else {}
        self.name = name
        self.sgn = dict(sgn) if sgn else {}
        self.twist = dict(twist) if twist else {}
        self.braid_relations = list(braid_relations) if braid_relations else []
        if convention not in ("left", "inverse"):
            raise ParseError(f"unknown inertia convention {convention!r}")
        self.convention = convention
        self._sections: list[int | None] = [None] * len(group)
        self._kernel_set = set(self.kernel)

    # -- basic structure ---------------------------------------------------

    def section(self, w: int) -> int:
        """The least covering element over a base element."""
        cached = self._sections[w]
        if cached is not None:
            return cached
        for wt in range(self.wtilde.order):
            if self.q[wt] == w:
                self._sections[w] = wt
                return wt
        raise ValidationError(f"projection map misses base element {w}")

    def wtilde_alpha(self, alpha: int) -> frozenset:
        if alpha in self.wtilde_alpha_override:
            return self.wtilde_alpha_override[alpha]
        members = self.arrangement[alpha].stabilizer_elements
        target = set(members)
        return frozenset(wt for wt in range(self.wtilde.order) if self.q[wt] in target)

    # -- words and the fiber product ----------------------------------------

    def p_of_letter(self, letter) -> int:
        alpha, exp = letter
        s = self.arrangement[alpha].distinguished_generator
        return self.group.inv(s) if exp > 0 else s

    def p_of_word(self, word) -> int:
        out = self.group.identity_index
        for letter in word:
            out = self.group.mul(out, self.p_of_letter(letter))
        return out

    def r_of_word(self, word) -> int:
        out = self.wtilde.identity
        for alpha, exp in word:
            r = self.splitting[alpha]
            out = self.wtilde.mul(out, r if exp > 0 else self.wtilde.inv(r))
        return out

    def fiber_identity(self) -> FiberElement:
        return FiberElement(self.wtilde.identity, ())

    def r_tilde(self, word) -> FiberElement:
        """The splitting applied to a braid word."""
        word = free_reduce(word)
        return FiberElement(self.r_of_word(word), word)

    def embed_inertia(self, x: int) -> FiberElement:
        if x not in self._kernel_set:
            raise DomainError(f"{x} is not in the kernel")
        return FiberElement(x, ())

    def fiber_check(self, g: FiberElement):
        if self.q[g.wt] != self.p_of_word(g.word):
            raise IntegrityError(
                f"fiber element invariant violated: q({g.wt}) != p({g.word})"
            )

    def fiber_mul(self, a: FiberElement, b: FiberElement) -> FiberElement:
        self.fiber_check(a)
        self.fiber_check(b)
        return FiberElement(
            self.wtilde.mul(a.wt, b.wt), free_reduce(a.word + b.word)
        )

    def fiber_inv(self, a: FiberElement) -> FiberElement:
        word = tuple((alpha, -exp) for alpha, exp in reversed(a.word))
        return FiberElement(self.wtilde.inv(a.wt), word)

    def inertia_part(self, g: FiberElement) -> int:
        """The kernel element g.wt * r(g.word)^{-1}."""
        x = self.wtilde.mul(g.wt, self.wtilde.inv(self.r_of_word(g.word)))
        if x not in self._kernel_set:
            raise IntegrityError(
                f"element {g} does not decompose over the splitting"
            )
        return x

    # -- characters ----------------------------------------------------------

    def act_on_character(self, w: int, chi: Character) -> Character:
        wt = self.section(w)
        wt_inv = self.wtilde.inv(wt)
        return Character(
            {
                x: chi(self.wtilde.mul(self.wtilde.mul(wt_inv, x), wt))
                for x in self.kernel
            }
        )

    def stabilizer_of_character(self, chi: Character) -> tuple[int, ...]:
        return tuple(
            w for w in range(len(self.group)) if self.act_on_character(w, chi) == chi
        )

    def eval_chi_hat(self, chi: Character, g: FiberElement) -> CycNumber:
        """The canonical extension of the character over the stabilizer cover."""
        w = self.q[g.wt]
        if self.act_on_character(w, chi) != chi:
            raise DomainError(
                f"base image {w} does not stabilize the character; "
                "the extension is undefined here"
            )
        return chi(self.inertia_part(g))

    def eval_tau_hat(self, g: FiberElement) -> int:
        """The sign character extended to the whole braid cover."""
        return self.tau[self.inertia_part(g)]

    def tau_as_character(self) -> Character:
        return Character(
            {x: CycNumber.rational(self.tau[x]) for x in self.kernel}
        )

    def character_from_values(self, values: dict[int, CycNumber]) -> Character:
        """Extend values on kernel elements multiplicatively to a character."""
        e = self.wtilde.identity
        known = {e: CycNumber.rational(1)}
        for x, v in values.items():
            if x not in self._kernel_set:
                raise DomainError(f"{x} is not in the kernel")
            if x in known and known[x] != v:
                raise ValidationError(f"inconsistent value at {x}")
            known[x] = v
        changed = True
        while changed:
            changed = False
            for a, va in list(known.items()):
                for b, vb in list(known.items()):
                    c = self.wtilde.mul(a, b)
                    vc = va * vb
                    if c not in known:
                        known[c] = vc
                        changed = True
                    elif known[c] != vc:
                        raise ValidationError(
                            f"values do not extend to a character: conflict at {c}"
                        )
        if set(known) != self._kernel_set:
            missing = sorted(self._kernel_set - set(known))
            raise ValidationError(
                f"values do not determine the character on elements {missing}"
            )
        chi = Character(known)
        check_character(self, chi)
        return chi

    def characters(self) -> list[Character]:
        """All characters of an abelian kernel, in a deterministic order.

        Built by extending characters one cyclic step at a time: if x has
        least power k landing in the subgroup built so far, each character
        extends in exactly k ways, by the k-th roots of its value there.
        """
        from .cyclo import zeta

        wt = self.wtilde
        e = wt.identity
        for a in self.kernel:
            for b in self.kernel:
                if wt.mul(a, b) != wt.mul(b, a):
                    raise DomainError("kernel is not abelian")
        chars: list[dict[int, CycNumber]] = [{e: CycNumber.rational(1)}]
        while len(chars[0]) < len(self.kernel):
            x = next(y for y in self.kernel if y not in chars[0])
            k = 1
            power = x
            while power not in chars[0]:
                power = wt.mul(power, x)
                k += 1
            extended = []
            for psi in chars:
                t = psi[power]  # value at x^k; a root of unity
                m = t.root_of_unity_order()
                a = next(j for j in range(m) if zeta(m, j) == t)
                base_root = zeta(k * m, a)
                for j in range(k):
                    v = base_root * zeta(k, j)
                    new = dict(psi)
                    cur, val = e, CycNumber.rational(1)
                    for _ in range(1, k):
                        cur = wt.mul(cur, x)
                        val = val * v
                        for h in psi:
                            new[wt.mul(h, cur)] = psi[h] * val
                    extended.append(new)
            chars = extended
        out = [Character(c) for c in chars]
        out.sort(
            key=lambda c: tuple(
                (c.values[x].order, c.values[x].coeffs) for x in self.kernel
            )
        )
        return out


def check_character(e: ExtensionDatum, chi: Character):
    """Multiplicativity and root-of-unity values over the kernel."""
    if set(chi.values) != set(e.kernel):
        raise ValidationError("character is not defined on exactly the kernel")
    for x in e.kernel:
        if chi(x).root_of_unity_order() is None:
            raise ValidationError(f"character value at {x} is not a root of unity")
    for a in e.kernel:
        for b in e.kernel:
            if chi(e.wtilde.mul(a, b)) != chi(a) * chi(b):
                raise ValidationError(f"character is not multiplicative at ({a},{b})")


def validate(e: ExtensionDatum) -> ValidationReport:
    """Run every datum invariant; failures carry witnesses."""
    checks: list[CheckResult] = []

    def record(name, ok, witness=None):
        checks.append(
            CheckResult(name, "pass" if ok else "fail", None if ok else witness)
        )

    wt = e.wtilde
    try:
        wt.identity
        identity_ok = True
        identity_witness = None
    except ValidationError as exc:
        identity_ok, identity_witness = False, str(exc)
    record("wtilde.identity", identity_ok, identity_witness)
    if not identity_ok:
        return ValidationReport(checks)

    bad = wt.associativity_witness()
    record("wtilde.associative", bad is None, f"triple {bad}" if bad else None)

    inverse_witness = None
    for a in range(wt.order):
        try:
            wt.inv(a)
        except ValidationError:
            inverse_witness = f"element {a}"
            break
    record("wtilde.inverses", inverse_witness is None, inverse_witness)
    if not checks[-1].status == "pass" or bad is not None:
        return ValidationReport(checks)

    hom_witness = None
    for a in range(wt.order):
        qa = e.q[a]
        for b in range(wt.order):
            if e.q[wt.mul(a, b)] != e.group.mul(qa, e.q[b]):
                hom_witness = f"pair ({a},{b})"
                break
        if hom_witness:
            break
    record("q.homomorphism", hom_witness is None, hom_witness)

    image = set(e.q)
    record(
        "q.surjective",
        len(image) == len(e.group),
        f"missing base elements {sorted(set(range(len(e.group))) - image)}",
    )

    missing = [a for a in range(len(e.arrangement)) if a not in e.splitting]
    extra = [a for a in e.splitting if not 0 <= a < len(e.arrangement)]
    record(
        "splitting.covers_hyperplanes",
        not missing and not extra,
        f"missing {missing}, extraneous {extra}",
    )
    if missing or extra:
        return ValidationReport(checks)

    witness = None
    for a in range(len(e.arrangement)):
        s = e.arrangement[a].distinguished_generator
        if e.q[e.splitting[a]] != e.group.inv(s):
            witness = f"hyperplane {a}"
            break
    record("splitting.maps_to_inverse_generator", witness is None, witness)

    witness = None
    for a in range(len(e.arrangement)):
        if e.splitting[a] not in e.wtilde_alpha(a):
            witness = f"hyperplane {a}"
            break
    record("splitting.in_local_subgroup", witness is None, witness)

    witness = None
    for a in range(len(e.arrangement)):
        sub = e.wtilde_alpha(a)
        if wt.identity not in sub:
            witness = f"hyperplane {a}: missing identity"
            break
    for a in range(len(e.arrangement)):
        sub = e.wtilde_alpha(a)
        if any(wt.mul(x, y) not in sub for x in sub for y in sub):
            witness = f"hyperplane {a}: not closed"
            break
        stab = set(e.arrangement[a].stabilizer_elements)
        if {e.q[x] for x in sub} != stab:
            witness = f"hyperplane {a}: base image is not the local stabilizer"
            break
    record("local_subgroups.subgroup", witness is None, witness)

    witness = None
    for a in range(len(e.arrangement)):
        sub = e.wtilde_alpha(a)
        for x in e.kernel:
            if frozenset(wt.conjugate(x, y) for y in sub) != sub:
                witness = f"hyperplane {a}, kernel element {x}"
                break
        if witness:
            break
    record("local_subgroups.inertia_invariant", witness is None, witness)

    record(
        "tau.keys",
        set(e.tau) == set(e.kernel),
        f"keys {sorted(e.tau)} vs kernel {list(e.kernel)}",
    )
    record(
        "tau.signs",
        all(v in (1, -1) for v in e.tau.values()),
        f"values {sorted(set(e.tau.values()) - {1, -1})}",
    )
    if checks[-1].status == "pass" and checks[-2].status == "pass":
        witness = None
        for a in e.kernel:
            for b in e.kernel:
                if e.tau[wt.mul(a, b)] != e.tau[a] * e.tau[b]:
                    witness = f"pair ({a},{b})"
                    break
            if witness:
                break
        record("tau.multiplicative", witness is None, witness)

        witness = None
        for g in range(wt.order):
            for x in e.kernel:
                if e.tau[wt.conjugate(g, x)] != e.tau[x]:
                    witness = f"conjugation of {x} by {g}"
                    break
            if witness:
                break
        record("tau.conjugation_invariant", witness is None, witness)

    checks.append(
        CheckResult(
            "splitting.extends_over_braid_relations",
            "assumed",
            "splitting values are evaluated letter-wise; coherence over braid "
            "relations is assumed, not certified",
        )
    )
    defaulted = [
        a for a in range(len(e.arrangement)) if a not in e.wtilde_alpha_override
    ]
    if defaulted:
        checks.append(
            CheckResult(
                "local_subgroups.default_preimage",
                "assumed",
                f"hyperplanes {defaulted} use the full projection preimage "
                "as their local subgroup",
            )
        )
    return ValidationReport(checks)


# ---------------------------------------------------------------------------
# serialization


def datum_to_json(e: ExtensionDatum) -> dict:
    out = {
        "name": e.name,
        "group": e.group.to_json(e.name + ".group"),
        "wtilde": {
            "order": e.wtilde.order,
            "table": [list(row) for row in e.wtilde.table],
            "generators": list(e.wtilde.generators),
        },
        "q": list(e.q),
        "splitting": {str(a): r for a, r in sorted(e.splitting.items())},
        "tau": {str(x): v for x, v in sorted(e.tau.items())},
    }
    if e.wtilde_alpha_override:
        out["wtilde_alpha"] = {
            str(a): sorted(s) for a, s in sorted(e.wtilde_alpha_override.items())
        }
    if e.sgn:
        out["sgn"] = {str(a): v for a, v in sorted(e.sgn.items())}
    if e.twist:
        out["twist"] = {str(a): v.to_json() for a, v in sorted(e.twist.items())}
    if e.braid_relations:
        out["braid_relations"] = [
            [[list(l) for l in w1], [list(l) for l in w2]]
            for w1, w2 in e.braid_relations
        ]
    if e.convention != "left":
        out["convention"] = e.convention
    return out


def datum_from_json(obj, group: ReflectionGroup | None = None) -> ExtensionDatum:
    from .cyclo import CycMatrix
    from .reflgrp import enumerate_group, hyperplanes

    try:
        if group is None:
            gspec = obj["group"]
            gens = [CycMatrix.from_json(g) for g in gspec["generators"]]
            group = enumerate_group(gens)
        arrangement = hyperplanes(group)
        wspec = obj["wtilde"]
        wtilde = CayleyGroup(wspec["table"], wspec.get("generators"))
        if wspec.get("order") is not None and wspec["order"] != wtilde.order:
            raise ParseError("declared covering group order disagrees with table")
        splitting = {int(a): int(r) for a, r in obj["splitting"].items()}
        tau = (
            {int(x): int(v) for x, v in obj["tau"].items()}
            if obj.get("tau")
            else None
        )
        wtilde_alpha = (
            {int(a): frozenset(v) for a, v in obj["wtilde_alpha"].items()}
            if obj.get("wtilde_alpha")
            else None
        )
        sgn = {int(a): int(v) for a, v in obj.get("sgn", {}).items()} or None
        twist = {
            int(a): CycNumber.from_json(v) for a, v in obj.get("twist", {}).items()
        } or None
        relations = [
            (
                tuple((int(a), int(x)) for a, x in w1),
                tuple((int(a), int(x)) for a, x in w2),
            )
            for w1, w2 in obj.get("braid_relations", [])
        ] or None
        convention = obj.get("convention", "left")
        if convention == "flip-inertia":
            convention = "inverse"
        return ExtensionDatum(
            group,
            arrangement,
            wtilde,
            [int(w) for w in obj["q"]],
            splitting,
            tau=tau,
            wtilde_alpha=wtilde_alpha,
            name=obj.get("name", "datum"),
            sgn=sgn,
            twist=twist,
            braid_relations=relations,
            convention=convention,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed extension datum: {exc}") from exc


def character_from_spec(e: ExtensionDatum, spec) -> Character:
    """Parse a character specification: "trivial", or a JSON object giving
    a modulus and exponents on kernel generators, either flat
    ({"<element>": exponent, "modulus": k}) or nested under "values"."""
    from .cyclo import zeta

    if spec == "trivial":
        return Character.trivial(e.kernel)
    if not isinstance(spec, dict):
        raise ParseError(f"bad character spec {spec!r}")
    try:
        modulus = int(spec["modulus"])
        raw = spec.get("values")
        if raw is None:
            raw = {k: v for k, v in spec.items() if k != "modulus"}
        values = {int(x): zeta(modulus, int(exp)) for x, exp in raw.items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad character spec: {exc}") from exc
    if not values:
        raise ParseError("character spec names no kernel elements")
    return e.character_from_values(values)
