"""Free graded-commutative algebras with differential and (relative) Sullivan models.

A monomial is a tuple of exponents indexed by generator position; odd
generators carry exponent 0 or 1.  Odd factors are always read in increasing
generator order, so a monomial has one canonical sign and polynomials can be
compared as plain dicts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping


class UsageError(ValueError):
    """Raised for malformed requests (bad degrees, mismatched universes...)."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


Monomial = tuple  # tuple[int, ...]


def monomial_degree(gens, m) -> int:
    return sum(g.degree * e for g, e in zip(gens, m))


def monomial_length(m) -> int:
    """Word length: an even generator of exponent e counts e times."""
    return sum(m)


def _odd_positions(gens, m):
    return [i for i, (g, e) in enumerate(zip(gens, m)) if e and g.odd]


def multiply_monomials(gens, a, b):
    """Return (sign, product) with sign 0 when an odd generator repeats."""
    sign = 1
    odd_b = _odd_positions(gens, b)
    for i, (g, ea) in enumerate(zip(gens, a)):
        if not ea or not g.odd:
            continue
        if b[i]:
            return 0, None
        # a's odd factor at i must pass every odd factor of b below i
        for j in odd_b:
            if j < i:
                sign = -sign
    return sign, tuple(x + y for x, y in zip(a, b))


class Poly:
    """Exact rational linear combination of canonical monomials."""

    __slots__ = ("gens", "terms")

    def __init__(self, gens, terms: Mapping | None = None):
        self.gens = tuple(gens)
        self.terms = {}
        if terms:
            n = len(self.gens)
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != n:
                    raise UsageError(f"monomial {m} does not fit {n} generators")
                for g, e in zip(self.gens, m):
                    if e < 0 or (g.odd and e > 1):
                        raise UsageError(f"invalid exponent in {m}")
                c = Fraction(c)
                if c:
                    self.terms[m] = self.terms.get(m, 0) + c
                    if not self.terms[m]:
                        del self.terms[m]

    @classmethod
    def zero(cls, gens):
        return cls(gens)

    @classmethod
    def one(cls, gens):
        return cls(gens, {(0,) * len(gens): 1})

    @classmethod
    def generator(cls, gens, index, coeff=1):
        m = [0] * len(gens)
        m[index] = 1
        return cls(gens, {tuple(m): coeff})

    def _check(self, other):
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.gens != self.gens:
            raise UsageError("polynomials live over different generator lists")

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {monomial_degree(self.gens, m) for m in self.terms}

    def degree(self) -> int | None:
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise UsageError(f"inhomogeneous polynomial: degrees {sorted(ds)}")
        return ds.pop()

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        p = Poly(self.gens)
        p.terms = out
        return p

    def __neg__(self):
        p = Poly(self.gens)
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        p = Poly(self.gens)
        if c:
            p.terms = {m: c * v for m, v in self.terms.items()}
        return p

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        return multiply(self, other)

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, Poly) and self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms.items())))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _monomial_key(kv[0]))

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def _monomial_key(m):
    return tuple(-e for e in m)


def multiply(a: Poly, b: Poly) -> Poly:
    """Graded-commutative product with Koszul signs."""
    a._check(b)
    out: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            s, m = multiply_monomials(a.gens, ma, mb)
            if s:
                v = out.get(m, 0) + s * ca * cb
                if v:
                    out[m] = v
                else:
                    del out[m]
    p = Poly(a.gens)
    p.terms = out
    return p


def canonicalize(p: Poly) -> Poly:
    # Poly is canonical by construction; this re-runs the constructor checks.
    return Poly(p.gens, p.terms)


def format_monomial(gens, m) -> str:
    parts = []
    for g, e in zip(gens, m):
        if e == 1:
            parts.append(g.name)
        elif e > 1:
            parts.append(f"{g.name}^{e}")
    return "".join(parts) if parts else "1"


def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    out = []
    for m, c in p.sorted_terms():
        mono = format_monomial(p.gens, m)
        if c == 1:
            s = mono
        elif c == -1:
            s = "-" + mono
        elif mono == "1":
            s = str(c)
        else:
            s = f"{c}{mono}" if c.denominator == 1 else f"({c}){mono}"
        out.append(s)
    text = " + ".join(out)
    return text.replace("+ -", "- ")


# --------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


class SullivanModel:
    """Free graded-commutative algebra with a differential on generators.

    ``differential`` maps generator names to ``Poly`` values (or strings in
    the model text syntax); generators without an entry have d = 0.
    """

    def __init__(self, generators: Iterable, differential: Mapping | None = None):
        gens = []
        for g in generators:
            if not isinstance(g, Generator):
                g = Generator(*g)
            gens.append(g)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate generator names in {names}")
        for g in gens:
            if g.degree < 2:
                raise UsageError(f"generator {g.name} has degree {g.degree} < 2")
            if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", g.name):
                raise UsageError(f"bad generator name {g.name!r}")
        # stable sort: by degree, then declaration order
        order = sorted(range(len(gens)), key=lambda i: (gens[i].degree, i))
        self.generators = tuple(gens[i] for i in order)
        self._index = {g.name: i for i, g in enumerate(self.generators)}
        self.differential = {}
        for name, value in (differential or {}).items():
            if name not in self._index:
                raise UsageError(f"differential given for unknown generator {name!r}")
            if isinstance(value, str):
                value = parse_poly(value, self.generators)
            elif isinstance(value, Poly):
                if value.gens != self.generators:
                    value = _reindex(value, self.generators)
            else:
                raise TypeError(f"differential of {name} must be Poly or str")
            if not value.is_zero():
                self.differential[name] = value

    @property
    def names(self):
        return tuple(g.name for g in self.generators)

    @property
    def degrees(self):
        return tuple(g.degree for g in self.generators)

    def index(self, name) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UsageError(f"unknown generator {name!r}") from None

    def d(self, name) -> Poly:
        return self.differential.get(name, Poly.zero(self.generators))

    def gen(self, name, coeff=1) -> Poly:
        return Poly.generator(self.generators, self.index(name), coeff)

    def poly(self, text) -> Poly:
        return parse_poly(text, self.generators)

    def is_zero_differential(self) -> bool:
        return not self.differential

    def key(self):
        """Hashable canonical description (generators and differential)."""
        diff = tuple(
            (name, tuple((m, str(c)) for m, c in self.differential[name].sorted_terms()))
            for name in self.names
            if name in self.differential
        )
        return (tuple((g.name, g.degree) for g in self.generators), diff)

    def __eq__(self, other):
        return type(other) is type(self) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_text(self) -> str:
        lines = [f"{g.name} {g.degree}" for g in self.generators]
        for name in self.names:
            if name in self.differential:
                lines.append(f"d {name} = {format_poly(self.differential[name])}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"{type(self).__name__}({self.to_text().strip()!r})"


class RelativeModel(SullivanModel):
    """K[t] (x) (Lambda V, D) over a fiber model, with |t| = 2 and D t = 0."""

    def __init__(self, fiber: SullivanModel, differential: Mapping, base: str = "t"):
        if base in fiber.names:
            raise UsageError(f"base generator name {base!r} clashes with the fiber")
        self.fiber = fiber
        self.base = base
        super().__init__([Generator(base, 2), *fiber.generators], differential)
        if self.generators[0].name != base:
            raise UsageError("the base generator must come first in the generator order")
        if base in self.differential:
            raise UsageError("D t must be 0")

    def key(self):
        return ("relative", self.base, self.fiber.key(), super().key())

    def fiber_index(self, name) -> int:
        return self.fiber.index(name)

    def restrict_to_fiber(self, p: Poly) -> Poly:
        """Image of p under t -> 0."""
        out = {}
        for m, c in p.terms.items():
            if m[0] == 0:
                out[m[1:]] = c
        return Poly(self.fiber.generators, out)


def _reindex(p: Poly, gens) -> Poly:
    """Move a polynomial to a generator list containing its generators."""
    pos = {g.name: i for i, g in enumerate(gens)}
    out = Poly(gens)
    for m, c in p.terms.items():
        term = Poly.one(gens).scale(c)
        for g, e in zip(p.gens, m):
            if g.name not in pos:
                raise UsageError(f"generator {g.name} missing from target universe")
            for _ in range(e):
                term = multiply(term, Poly.generator(gens, pos[g.name]))
        out = out + term
    return out


def apply_differential(model: SullivanModel, p: Poly) -> Poly:
    """Leibniz extension of the generator differentials."""
    gens = model.generators
    if p.gens != gens:
        raise UsageError("polynomial does not live over this model's generators")
    out = Poly.zero(gens)
    for m, c in p.terms.items():
        out = out + differential_of_monomial(model, m).scale(c)
    return out


def differential_of_monomial(model: SullivanModel, m) -> Poly:
    gens = model.generators
    n = len(gens)
    out: dict = {}
    passed = 0  # degree parity of the factors already passed
    for i in range(n):
        e = m[i]
        if not e:
            continue
        dg = model.differential.get(gens[i].name)
        if dg is not None:
            prefix = tuple(m[:i]) + (0,) * (n - i)
            rest = list(m)
            for j in range(i):
                rest[j] = 0
            rest[i] = e - 1
            rest = tuple(rest)
            sign0 = -1 if passed % 2 else 1
            coeff0 = sign0 * (e if not gens[i].odd else 1)
            for tm, tc in dg.terms.items():
                s1, m1 = multiply_monomials(gens, prefix, tm)
                if not s1:
                    continue
                s2, m2 = multiply_monomials(gens, m1, rest)
                if not s2:
                    continue
                v = out.get(m2, 0) + coeff0 * s1 * s2 * tc
                if v:
                    out[m2] = v
                else:
                    del out[m2]
        passed += gens[i].degree * e
    p = Poly(gens)
    p.terms = out
    return p


def validate_model(model: SullivanModel) -> ValidationReport:
    """Check grading, decomposability, nilpotence and d^2 = 0."""
    gens = model.generators
    problems = []
    for i, g in enumerate(gens):
        dg = model.differential.get(g.name)
        if dg is None:
            continue
        for m, c in dg.sorted_terms():
            mono = format_monomial(gens, m)
            deg = monomial_degree(gens, m)
            if deg != g.degree + 1:
                problems.append(
                    f"grading: term {mono} of d{g.name} has degree {deg}, expected {g.degree + 1}"
                )
            if monomial_length(m) < 2:
                problems.append(f"decomposability: term {mono} of d{g.name} is not decomposable")
            late = [gens[j].name for j, e in enumerate(m) if e and j >= i]
            if late:
                problems.append(
                    f"nilpotence: term {mono} of d{g.name} involves {','.join(late)}"
                )
    if isinstance(model, RelativeModel):
        fiber = model.fiber
        for g in fiber.generators:
            reduced = model.restrict_to_fiber(model.d(g.name))
            if reduced != fiber.d(g.name):
                problems.append(
                    f"fiber: D{g.name} mod t is {format_poly(reduced)}, fiber has "
                    f"{format_poly(fiber.d(g.name))}"
                )
    for g in gens:
        dg = model.differential.get(g.name)
        if dg is None:
            continue
        dd = apply_differential(model, dg)
        if not dd.is_zero():
            problems.append(f"d^2: d(d{g.name}) = {format_poly(dd)}")
    return ValidationReport(tuple(problems))


# --------------------------------------------------------------------------
# model-description text format

def _split_terms(text):
    text = text.strip()
    if not text:
        raise UsageError("empty polynomial")
    terms = []
    buf = ""
    sign = "+"
    for ch in text:
        if ch in "+-" and buf.strip():
            terms.append((sign, buf.strip()))
            buf = ""
            sign = ch
        elif ch in "+-":
            sign = "-" if (sign == "-") != (ch == "-") else "+"
        else:
            buf += ch
    if not buf.strip():
        raise UsageError(f"dangling sign in {text!r}")
    terms.append((sign, buf.strip()))
    return terms


def parse_poly(text: str, gens) -> Poly:
    """Parse e.g. ``v1v4t^8 + 2 v2 v3 t^10 - t^17`` over ``gens``."""
    gens = tuple(gens)
    names = sorted((g.name for g in gens), key=len, reverse=True)
    pos = {g.name: i for i, g in enumerate(gens)}
    text = text.strip()
    if text == "0":
        return Poly.zero(gens)
    total = Poly.zero(gens)
    for sign, body in _split_terms(text):
        body = body.replace("*", " ").replace("·", " ")
        coeff = Fraction(1)
        m = re.match(r"\s*\(?\s*(\d+(?:/\d+)?)\s*\)?", body)
        rest = body
        if m and m.group(1):
            coeff = Fraction(m.group(1))
            rest = body[m.end():]
        rest = rest.replace(" ", "")
        term = Poly.one(gens).scale(coeff if sign == "+" else -coeff)
        i = 0
        while i < len(rest):
            for nm in names:
                if rest.startswith(nm, i):
                    i += len(nm)
                    break
            else:
                raise UsageError(f"cannot parse {rest[i:]!r} in term {body!r}")
            exp = 1
            em = re.match(r"\^\{?(\d+)\}?", rest[i:])
            if em:
                exp = int(em.group(1))
                i += em.end()
            for _ in range(exp):
                term = multiply(term, Poly.generator(gens, pos[nm]))
        total = total + term
    return total


def parse_model(text: str) -> SullivanModel:
    """Parse the line format: ``name degree`` lines, then ``d name = poly`` lines.

    A line ``base t`` (optional) marks ``t`` as the base generator of a
    relative model; the remaining generators form the fiber, whose
    differential is D mod t.
    """
    gens = []
    diffs = {}
    base = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("d ") or line.startswith("d\t"):
            lhs, _, rhs = line[1:].partition("=")
            if not _:
                raise UsageError(f"missing '=' in {raw!r}")
            diffs[lhs.strip()] = rhs.strip()
            continue
        parts = line.split()
        if parts[0] == "base" and len(parts) == 2:
            base = parts[1]
            continue
        if len(parts) != 2:
            raise UsageError(f"cannot parse line {raw!r}")
        try:
            deg = int(parts[1])
        except ValueError:
            raise UsageError(f"bad degree in {raw!r}") from None
        gens.append(Generator(parts[0], deg))
    if base is None:
        return SullivanModel(gens, diffs)
    fiber_gens = [g for g in gens if g.name != base]
    provisional = RelativeModel(SullivanModel(fiber_gens), diffs, base=base)
    fiber = SullivanModel(
        fiber_gens,
        {g.name: provisional.restrict_to_fiber(provisional.d(g.name)) for g in fiber_gens},
    )
    return RelativeModel(fiber, provisional.differential, base=base)

