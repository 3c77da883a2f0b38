"""Candidate relative models over a fiber: admissible terms, search, families."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    Generator,
    Poly,
    RelativeModel,
    SullivanModel,
    UsageError,
    differential_of_monomial,
    validate_model,
)
from .cohomology import CsCertificate, c_symplectic_certify, formal_dimension
from .lattice import (
    ConstraintLattice,
    extract_constraint_lattice,
    hermite_normal_form,
    in_lattice,
)


# --------------------------------------------------------------------------
# fibers


def sphere_product(degrees) -> SullivanModel:
    """Model of a product of spheres.

    An odd sphere S^k contributes one generator of degree k.  An even sphere
    S^k contributes x (degree k) and y (degree 2k - 1) with dy = x^2.
    """
    degrees = list(degrees)
    if not degrees:
        raise UsageError("at least one sphere degree is needed")
    gens, diff = [], {}
    for pos, k in enumerate(degrees, 1):
        if k < 2:
            raise UsageError(f"sphere degree {k} < 2")
        if k % 2:
            gens.append(Generator(f"v{pos}", k))
        else:
            gens.append(Generator(f"x{pos}", k))
            gens.append(Generator(f"y{pos}", 2 * k - 1))
            diff[f"y{pos}"] = f"x{pos}^2"
    return SullivanModel(gens, diff)


def fiber_from_degrees(degrees) -> SullivanModel:
    """Sphere product from a list of generator degrees.

    Odd entries are odd spheres.  An even entry d must be followed by 2d - 1:
    the pair is the model of S^d.
    """
    degrees = list(degrees)
    spheres = []
    k = 0
    while k < len(degrees):
        d = degrees[k]
        if d % 2 == 0:
            if k + 1 >= len(degrees) or degrees[k + 1] != 2 * d - 1:
                raise UsageError(f"even degree {d} must be followed by {2 * d - 1} (the sphere S^{d})")
            k += 1
        spheres.append(d)
        k += 1
    return sphere_product(spheres)


def cp_fiber(n: int) -> SullivanModel:
    """CP^n x S^{2n+3}: x (2), y (2n+1), z (2n+3), dy = x^{n+1}."""
    if n < 1:
        raise UsageError("CP^n needs n >= 1")
    return SullivanModel(
        [Generator("x", 2), Generator("y", 2 * n + 1), Generator("z", 2 * n + 3)],
        {"y": f"x^{n + 1}"},
    )


def sp_fiber(n: int) -> SullivanModel:
    """Sp(n): odd generators of degrees 4i - 1, zero differential."""
    if n < 1:
        raise UsageError("Sp(n) needs n >= 1")
    return sphere_product([4 * i - 1 for i in range(1, n + 1)])


# --------------------------------------------------------------------------
# catalogs


@dataclass
class CatalogEntry:
    model: RelativeModel
    certificate: CsCertificate
    lattice: ConstraintLattice
    label: str = ""


@dataclass
class ModelCatalog:
    fiber: SullivanModel
    entries: list = field(default_factory=list)
    provenance: str = "enumerated"
    incomplete: bool = False
    reported_dims: tuple | None = None  # dimensions quoted alongside a fixture

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def labels(self):
        return [e.label for e in self.entries]

    def entry(self, label) -> CatalogEntry:
        for e in self.entries:
            if e.label == label:
                return e
        raise KeyError(label)


def make_entry(rm: RelativeModel, label: str = "", full: bool = True) -> CatalogEntry:
    report = validate_model(rm)
    if not report.ok:
        raise UsageError(f"model {label or rm!r} is invalid: {'; '.join(report.violations)}")
    cert = c_symplectic_certify(rm, full=full)
    if not cert.certified:
        raise UsageError(f"model {label or rm!r} is not c-symplectic: {cert.reason}")
    return CatalogEntry(rm, cert, extract_constraint_lattice(rm), label)


def catalog_from_differentials(
    fiber: SullivanModel, rows, provenance: str, reported_dims=None
) -> ModelCatalog:
    """rows: iterable of (label, {generator: differential text})."""
    entries = []
    for label, diff in rows:
        merged = {name: str(fiber.d(name)) for name in fiber.differential}
        merged.update({k: v for k, v in diff.items() if v not in ("", "0")})
        entries.append(make_entry(_relative(fiber, merged), label))
    return ModelCatalog(fiber, entries, provenance, False, reported_dims)


def _relative(fiber, diff) -> RelativeModel:
    return RelativeModel(fiber, diff)


# --------------------------------------------------------------------------
# admissible terms


@dataclass(frozen=True)
class AdmissibleTerm:
    target: int  # fiber generator index
    monomial: tuple  # exponents over the fiber generators
    t_exponent: int

    @property
    def support(self) -> tuple:
        return tuple(i for i, e in enumerate(self.monomial) if e)

    @property
    def relative_monomial(self) -> tuple:
        return (self.t_exponent,) + tuple(self.monomial)

    def format(self, fiber: SullivanModel) -> str:
        parts = []
        for g, e in zip(fiber.generators, self.monomial):
            if e:
                parts.append(g.name if e == 1 else f"{g.name}^{e}")
        if self.t_exponent:
            parts.append("t" if self.t_exponent == 1 else f"t^{self.t_exponent}")
        return "".join(parts) or "1"


def _monomials_below(gens, i, degree):
    """Exponent vectors over generators 0..i-1 of the given total degree."""
    out = []

    def rec(j, remaining, acc):
        if j == i:
            if remaining == 0:
                out.append(tuple(acc) + (0,) * (len(gens) - i))
            return
        g = gens[j]
        top = 1 if g.odd else remaining // g.degree
        for e in range(min(top, remaining // g.degree), -1, -1):
            acc.append(e)
            rec(j + 1, remaining - e * g.degree, acc)
            acc.pop()

    rec(0, degree, [])
    return out


def admissible_terms(fiber: SullivanModel, i: int) -> list:
    """All degree-balanced terms t^e * m (e >= 1) for D of generator i.

    m ranges over monomials in generators strictly before i, so the result
    is finite and deterministic.  Terms without t would change D mod t, which
    must equal the fiber differential, so e = 0 is excluded.
    """
    gens = fiber.generators
    if not 0 <= i < len(gens):
        raise UsageError(f"generator index {i} out of range")
    target = gens[i].degree + 1
    out = []
    for e in range(1, target // 2 + 1):
        rest = target - 2 * e
        for m in _monomials_below(gens, i, rest):
            out.append(AdmissibleTerm(i, m, e))
    # pure t-powers last; otherwise longer supports first, then lexicographic
    out.sort(key=lambda a: (not any(a.monomial), -sum(a.monomial), tuple(-x for x in a.monomial)))
    return out


# --------------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class Caps:
    max_terms: int = 8
    max_assignments: int = 10**7


def pre_c_symplectic(degrees) -> bool:
    """Criterion for a product of odd spheres to admit a c-symplectic total space."""
    degrees = list(degrees)
    if any(d % 2 == 0 for d in degrees):
        raise UsageError("pre_c_symplectic takes odd degrees only")
    if any(d < 3 for d in degrees):
        raise UsageError("sphere degrees must be at least 3")
    degrees.sort()
    n = len(degrees)
    if n % 2 == 0:
        return False
    return all(degrees[i] + degrees[n - 2 - i] < degrees[-1] for i in range(n // 2))


def _sign_closure(values):
    out = set()
    for s in values:
        s = Fraction(s)
        if s == 0:
            raise UsageError("coefficients must be nonzero")
        out |= {s, -s, 1 / s, -1 / s}
    return sorted(out, key=lambda q: (abs(q) != 1, q < 0, abs(q), q))


class _Scratch:
    """Minimal model stand-in for D^2 checks during the search."""

    def __init__(self, gens):
        self.generators = gens
        self.differential = {}


def _d_squared_vanishes(scratch, name, terms) -> bool:
    gens = scratch.generators
    acc = {}
    for m, c in terms.items():
        for m2, c2 in differential_of_monomial(scratch, m).terms.items():
            v = acc.get(m2, 0) + c * c2
            if v:
                acc[m2] = v
            else:
                acc.pop(m2)
    return not acc


def _character(term: AdmissibleTerm, n):
    v = list(term.monomial)
    v[term.target] -= 1
    return tuple(v)


def _independent(rows, v, n):
    """Whether v is outside the rational span of rows."""
    return _rank(list(rows) + [v], n) > _rank(rows, n)


def _rank(rows, n):
    return len(hermite_normal_form(rows, n)) if rows else 0


def enumerate_models(
    fiber: SullivanModel,
    coefficient_set=(1, -1, 2),
    caps: Caps = Caps(),
    first_only: bool = False,
    use_criterion: bool = True,
) -> ModelCatalog:
    """Search degree-balanced differentials for certified total spaces.

    One model is kept per constraint lattice (the finest invariant; a field
    closure can only merge further).  For fibers of odd spheres with zero
    differential only the top generator carries a pure t-power, and it must:
    a lower pure power would make a D-closed prefix elliptic of smaller formal
    dimension and kill [t]^{(N-1)/2}, and without any pure power the
    cohomology is infinite.

    Coefficients: terms whose torus characters are independent of those
    already fixed are set to 1 (a diagonal rescaling over an algebraically
    closed field does this without changing ranks); the remaining terms take
    values in {+-s, +-1/s : s in coefficient_set}.
    """
    catalog = ModelCatalog(fiber, [], "enumerated")
    try:
        N = formal_dimension(fiber)
    except UsageError:
        raise UsageError("enumeration needs a fiber with computable formal dimension")
    if N % 2 == 0:
        return catalog
    gens = fiber.generators
    n = len(gens)
    odd_sphere_fiber = fiber.is_zero_differential() and all(g.odd for g in gens)
    if use_criterion and odd_sphere_fiber and not pre_c_symplectic(fiber.degrees):
        return catalog
    values = _sign_closure(coefficient_set)

    rel_gens = (Generator("t", 2),) + gens
    fiber_part = {}
    for name, dg in fiber.differential.items():
        fiber_part[fiber.index(name)] = {(0,) + m: c for m, c in dg.terms.items()}

    options = []
    for i in range(n):
        terms = admissible_terms(fiber, i)
        if odd_sphere_fiber:
            pure = [a for a in terms if not any(a.monomial)]
            mixed = [a for a in terms if any(a.monomial)]
            if i < n - 1:
                pure = []
            elif not pure:
                return catalog
        else:
            pure = []
            mixed = terms
        subsets = []
        for r in range(0, min(len(mixed), caps.max_terms) + 1):
            for combo in itertools.combinations(mixed, r):
                subsets.append(combo)
        if odd_sphere_fiber and i == n - 1:
            subsets = [c + tuple(pure) for c in subsets if len(c) < caps.max_terms]
        options.append(subsets)

    ambient = []
    for name, dg in fiber.differential.items():
        target = fiber.index(name)
        for m in dg.terms:
            v = list(m)
            v[target] -= 1
            ambient.append(tuple(v))

    realized = set()
    counter = [0]
    state = {"incomplete": False}

    def search_coefficients(pattern):
        """pattern: list of term tuples per generator."""
        scratch = _Scratch(rel_gens)
        fixed = list(ambient)
        slots = []
        for i, combo in enumerate(pattern):
            for a in combo:
                ch = _character(a, n)
                if _independent(fixed, ch, n):
                    fixed.append(ch)
                    slots.append((i, a, None))
                else:
                    slots.append((i, a, values))

        per_gen = [[s for s in slots if s[0] == i] for i in range(n)]

        def rec(i):
            if i == n:
                counter[0] += 1
                if counter[0] > caps.max_assignments:
                    state["incomplete"] = True
                    return None
                diff = {}
                for j, g in enumerate(gens):
                    poly_terms = scratch.differential.get(g.name)
                    if poly_terms is not None:
                        diff[g.name] = poly_terms
                rm = RelativeModel(fiber, diff)
                cert = c_symplectic_certify(rm, N, full=False)
                if not cert.certified:
                    return None
                return rm
            own = per_gen[i]
            choices = [[Fraction(1)] if s[2] is None else s[2] for s in own]
            for coeffs in itertools.product(*choices):
                terms = dict(fiber_part.get(i, {}))
                for (j, a, _), c in zip(own, coeffs):
                    terms[a.relative_monomial] = terms.get(a.relative_monomial, 0) + c
                terms = {m: c for m, c in terms.items() if c}
                if terms:
                    if not _d_squared_vanishes(scratch, gens[i].name, terms):
                        continue
                    p = Poly(rel_gens, terms)
                    scratch.differential[gens[i].name] = p
                else:
                    scratch.differential.pop(gens[i].name, None)
                found = rec(i + 1)
                scratch.differential.pop(gens[i].name, None)
                if found is not None or state["incomplete"]:
                    return found
            return None

        return rec(0)

    for pattern in itertools.product(*options):
        extra = [_character(a, n) for combo in pattern for a in combo]
        key = hermite_normal_form(ambient + extra, n)
        if key in realized:
            continue
        rm = search_coefficients(pattern)
        if state["incomplete"]:
            catalog.incomplete = True
            break
        if rm is None:
            continue
        realized.add(key)
        catalog.entries.append(make_entry(rm, f"m{len(catalog.entries) + 1}"))
        if first_only:
            break
    return catalog


# --------------------------------------------------------------------------
# closed-form families


def _proper_divisors(q):
    return [d for d in range(1, q) if q % d == 0]


def cp_family(n: int, indices=None) -> ModelCatalog:
    """Total spaces over CP^n x S^{2n+3} with Dz = x t^{n+1}.

    Dy = x^{n+1} + x^i t^{n+1-i} + t^{n+1} for i a proper divisor of n+1,
    and Dy = x^{n+1} + t^{n+1} (labelled i = 0).
    """
    if n < 2 or n % 2:
        raise UsageError("cp_family needs an even n >= 2")
    fiber = cp_fiber(n)
    q = n + 1
    choices = [0] + _proper_divisors(q)
    if indices is not None:
        bad = set(indices) - set(choices)
        if bad:
            raise UsageError(f"indices {sorted(bad)} are neither 0 nor proper divisors of {q}")
        choices = [i for i in choices if i in set(indices)]
    rows = []
    for i in choices:
        if i == 0:
            dy = f"x^{q}+t^{q}"
        else:
            xi = "x" if i == 1 else f"x^{i}"
            dy = f"x^{q}+{xi}t^{q - i}+t^{q}"
        rows.append((f"i={i}", {"y": dy, "z": f"xt^{q}"}))
    return catalog_from_differentials(fiber, rows, f"family(cp, n={n})")


def _sp_top(n):
    h = (n - 1) // 2
    parts = [f"v{l}v{n - l}t" for l in range(1, h + 1)]
    parts.append(f"t^{2 * n}")
    return "+".join(parts)


# explicit chains (generator -> differential), added one step at a time
SP_TABLES = {
    5: [("v3", "v1v2t"), ("v4", "v1v3t")],
    7: [("v4", "v3v1t"), ("v5", "v2v3t"), ("v6", "v1v2t^7")],
    9: [("v5", "v4v1t"), ("v6", "v3v1t^5"), ("v7", "v2v4t^3"), ("v8", "v1v2t^11")],
    11: [
        ("v6", "v5v1t"),
        ("v7", "v4v1t^5"),
        ("v8", "v3v2t^7"),
        ("v9", "v2v4t^7"),
        ("v10", "v1v3t^13"),
    ],
}


def _sp_greedy_steps(n):
    """Chain steps D v_{n-j} = v_j v_k t^{2(n-2j-k)+1}, each cutting the torus."""
    h = (n - 1) // 2
    fiber = sp_fiber(n)
    rows = [tuple(r) for r in extract_constraint_lattice(
        RelativeModel(fiber, {f"v{n}": _sp_top(n)})
    ).rows]
    steps = []
    diff = {f"v{n}": _sp_top(n)}
    for j in range(h, 0, -1):
        i = n - j
        for k in range(1, n - 2 * j + 1):
            if k == j:
                continue
            e = 2 * (n - 2 * j - k) + 1
            text = f"v{j}v{k}t" if e == 1 else f"v{j}v{k}t^{e}"
            rel = [0] * n
            rel[j - 1] += 1
            rel[k - 1] += 1
            rel[i - 1] -= 1
            if in_lattice(hermite_normal_form(rows, n), rel):
                continue
            trial = dict(diff)
            trial[f"v{i}"] = text
            if not validate_model(RelativeModel(fiber, trial)).ok:
                continue
            diff = trial
            rows.append(tuple(rel))
            steps.append((f"v{i}", text))
            break
    return steps


def sp_chain(n: int) -> ModelCatalog:
    """Nested chain of total spaces over Sp(n), largest torus part first."""
    if n < 1 or n % 2 == 0:
        raise UsageError("sp_chain needs an odd n >= 1")
    fiber = sp_fiber(n)
    steps = SP_TABLES.get(n)
    if steps is None:
        steps = _sp_greedy_steps(n)
    diff = {f"v{n}": _sp_top(n)}
    rows = [("mu1", dict(diff))]
    for s, (name, text) in enumerate(steps, 2):
        diff[name] = text
        rows.append((f"mu{s}", dict(diff)))
    return catalog_from_differentials(fiber, rows, f"family(sp, n={n})")
