"""Degreewise exact cohomology of Sullivan models and the c-symplectic certificate.

Ranks are computed by fraction-free sparse elimination over the integers.
The complex is first split into weight blocks: every term of D v has the
same torus weight as v modulo the relation lattice, so D never mixes
monomials whose weights differ modulo that lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd

from .algebra import (
    RelativeModel,
    SullivanModel,
    UsageError,
    differential_of_monomial,
    monomial_length,
)
from .lattice import hermite_normal_form, reduce_modulo, weight_relations


@dataclass(frozen=True)
class BettiTable:
    by_degree: dict
    computed_up_to: int

    def __getitem__(self, k):
        if k > self.computed_up_to or k < 0:
            raise KeyError(k)
        return self.by_degree.get(k, 0)

    @property
    def total(self) -> int:
        return sum(self.by_degree.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in self.by_degree.items())


@dataclass(frozen=True)
class CsCertificate:
    verdict: str  # "certified" or "rejected"
    reason: str = ""
    fiber_dimension: int | None = None
    formal_dimension_Y: int | None = None
    top_power: int | None = None
    total_dim: int | None = None
    betti: BettiTable | None = field(default=None, compare=False)

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def __bool__(self):
        return self.certified


class _Echelon:
    """Incremental row echelon form of sparse integer vectors."""

    __slots__ = ("rows",)

    def __init__(self):
        self.rows = {}

    def reduce(self, vec: dict) -> dict:
        rows = self.rows
        while vec:
            c = min(vec)
            row = rows.get(c)
            if row is None:
                return vec
            a = vec[c]
            b = row[c]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            new = {k: v * fa for k, v in vec.items()}
            for k, v in row.items():
                x = new.get(k, 0) - fb * v
                if x:
                    new[k] = x
                else:
                    new.pop(k, None)
            if new:
                g = 0
                for v in new.values():
                    g = gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    new = {k: v // g for k, v in new.items()}
            vec = new
        return vec

    def add(self, vec: dict) -> bool:
        r = self.reduce(vec)
        if r:
            self.rows[min(r)] = r
            return True
        return False

    @property
    def rank(self) -> int:
        return len(self.rows)


def _integer_vector(terms: dict, index: dict) -> dict:
    den = 1
    for c in terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    return {index[m]: int(c * den) for m, c in terms.items()}


class CochainComplex:
    """Degreewise bases and boundary ranks of a model, cached per degree."""

    def __init__(self, model: SullivanModel, blocks: bool = True):
        self.model = model
        gens = model.generators
        self.gens = gens
        self.n = len(gens)
        self.odd = [i for i, g in enumerate(gens) if g.odd]
        self.even = [i for i, g in enumerate(gens) if not g.odd]
        subsets = []
        for r in range(len(self.odd) + 1):
            for combo in combinations(self.odd, r):
                subsets.append((sum(gens[i].degree for i in combo), combo))
        self._subsets = subsets
        self._basis = {}
        self._index = {}
        self._dcache = {}
        self._rank = {}
        self._echelons = {}
        self._blocks = blocks
        self._weight_cache = {}
        self._relative = isinstance(model, RelativeModel)
        if blocks:
            ambient, extra = weight_relations(model)
            rows = hermite_normal_form(ambient + extra, self._fiber_rank())
            positions = self._fiber_positions()
            self._weight_rows = rows
            self._weight_pos = positions

    def _fiber_rank(self):
        if isinstance(self.model, RelativeModel):
            return len(self.model.fiber.generators)
        return self.n

    def _fiber_positions(self):
        if isinstance(self.model, RelativeModel):
            return [None] + list(range(self.n - 1))
        return list(range(self.n))

    def weight(self, m):
        if not self._blocks:
            return ()
        key = m[1:] if self._weight_pos[0] is None else m
        w = self._weight_cache.get(key)
        if w is None:
            w = self._weight_cache[key] = self._compute_weight(m)
        return w

    def _compute_weight(self, m):
        v = [0] * self._fiber_rank()
        for pos, e in zip(self._weight_pos, m):
            if pos is not None and e:
                v[pos] += e
        return reduce_modulo(self._weight_rows, v)

    def basis(self, k: int) -> list:
        """Canonical monomials of degree k, highest even exponents first."""
        if k in self._basis:
            return self._basis[k]
        out = []
        if k >= 0:
            even_degs = [self.gens[i].degree for i in self.even]
            for s, combo in self._subsets:
                r = k - s
                if r < 0:
                    continue
                for exps in _even_solutions(tuple(even_degs), r):
                    m = [0] * self.n
                    for i in combo:
                        m[i] = 1
                    for i, e in zip(self.even, exps):
                        m[i] = e
                    out.append(tuple(m))
        out.sort(key=lambda m: tuple(-e for e in m))
        self._basis[k] = out
        self._index[k] = {m: j for j, m in enumerate(out)}
        return out

    def index(self, k):
        self.basis(k)
        return self._index[k]

    def _prepare_fast_d(self):
        gens = self.gens
        self._odd_flag = [g.odd for g in gens]
        self._below = [(1 << i) - 1 for i in range(self.n)]
        self._dterms = []
        for g in gens:
            dg = self.model.differential.get(g.name)
            terms = []
            if dg is not None:
                for tm, c in dg.terms.items():
                    c = int(c) if c.denominator == 1 else c
                    mask = sum(1 << j for j, e in enumerate(tm) if e and gens[j].odd)
                    parity = sum(gens[j].degree * e for j, e in enumerate(tm)) % 2
                    terms.append((tm, c, mask, parity))
            self._dterms.append(terms)

    def _odd_mask(self, m):
        mask = 0
        for j, e in enumerate(m):
            if e and self._odd_flag[j]:
                mask |= 1 << j
        return mask

    def _merge_sign(self, a, b):
        """Sign that sorts the odd factors of a followed by those of b."""
        count = 0
        below = self._below
        while a:
            low = a & -a
            i = low.bit_length() - 1
            count += (b & below[i]).bit_count()
            a ^= low
        return -1 if count & 1 else 1

    def d(self, m) -> dict:
        """Differential of a canonical monomial, as {monomial: coefficient}."""
        out = self._dcache.get(m)
        if out is not None:
            return out
        if self._relative and m[0]:
            # D t = 0 and t is central of even degree: D(t^k u) = t^k D(u)
            k = m[0]
            inner = self.d((0,) + m[1:])
            return {(tm[0] + k,) + tm[1:]: c for tm, c in inner.items()}
        if not hasattr(self, "_dterms"):
            self._prepare_fast_d()
        out = {}
        gens = self.gens
        prefix_parity = 0
        for i, e in enumerate(m):
            if not e:
                continue
            terms = self._dterms[i]
            if terms:
                base = list(m)
                base[i] -= 1
                base_mask = self._odd_mask(base)
                coeff0 = -1 if prefix_parity else 1
                if not self._odd_flag[i]:
                    coeff0 *= e
                for tm, c, tmask, tpar in terms:
                    if tmask & base_mask:
                        continue
                    sign = self._merge_sign(tmask, base_mask)
                    if tpar and prefix_parity:
                        sign = -sign
                    prod = tuple(x + y for x, y in zip(base, tm))
                    v = out.get(prod, 0) + coeff0 * sign * c
                    if v:
                        out[prod] = v
                    else:
                        del out[prod]
            prefix_parity ^= (gens[i].degree * e) & 1
        self._dcache[m] = out
        return out

    def _echelon(self, k):
        """Per-weight echelon forms of D(degree k) inside degree k+1."""
        if k in self._echelons:
            return self._echelons[k]
        src = self.basis(k)
        self.basis(k + 1)
        tgt = self._index[k + 1]
        blocks = {}
        rank = 0
        for m in src:
            img = self.d(m)
            if not img:
                continue
            w = self.weight(m)
            ech = blocks.get(w)
            if ech is None:
                ech = blocks[w] = _Echelon()
            if ech.add(_integer_vector(img, tgt)):
                rank += 1
        self._echelons[k] = blocks
        self._rank[k] = rank
        return blocks

    def rank(self, k: int) -> int:
        """Rank of D from degree k to degree k+1."""
        if k < 0:
            return 0
        if k not in self._rank:
            self._echelon(k)
        return self._rank[k]

    def release(self, k):
        self._echelons.pop(k, None)

    def betti(self, k: int) -> int:
        return len(self.basis(k)) - self.rank(k) - self.rank(k - 1)

    def in_image(self, k: int, terms: dict) -> bool:
        """Whether a degree-(k+1) cochain (Fraction coefficients) is D of something."""
        if not terms:
            return True
        tgt = self.index(k + 1)
        blocks = self._echelon(k)
        by_weight = {}
        for m, c in terms.items():
            by_weight.setdefault(self.weight(m), {})[m] = c
        for w, part in by_weight.items():
            ech = blocks.get(w)
            vec = _integer_vector(part, tgt)
            if ech is None or ech.reduce(vec):
                return False
        return True


@lru_cache(maxsize=None)
def _even_solutions(degs: tuple, r: int) -> tuple:
    if not degs:
        return ((),) if r == 0 else ()
    d0, rest = degs[0], degs[1:]
    out = []
    for e in range(r // d0, -1, -1):
        for tail in _even_solutions(rest, r - e * d0):
            out.append((e,) + tail)
    return tuple(out)


# --------------------------------------------------------------------------


def basis_in_degree(m: SullivanModel, k: int) -> list:
    if k < 0:
        raise UsageError("degree must be non-negative")
    return CochainComplex(m, blocks=False).basis(k)


def betti_numbers(m: SullivanModel, up_to: int, complex_: CochainComplex | None = None) -> BettiTable:
    cx = complex_ or CochainComplex(m)
    table = {}
    for k in range(up_to + 1):
        b = cx.betti(k)
        if b:
            table[k] = b
        cx.release(k - 1)
    return BettiTable(table, up_to)


def _is_pure(model: SullivanModel) -> bool:
    gens = model.generators
    odd = {i for i, g in enumerate(gens) if g.odd}
    for name, dg in model.differential.items():
        if not gens[model.index(name)].odd:
            return False
        if any(m[i] for m in dg.terms for i in odd):
            return False
    return True


def formal_dimension(model: SullivanModel, certificate: CsCertificate | None = None) -> int:
    """Top degree with nonzero cohomology, for models known to be finite.

    Supported: models on odd generators only (top degree = sum of degrees),
    pure models with finite cohomology (checked degreewise), and relative
    models together with a c-symplectic certificate.
    """
    if isinstance(model, RelativeModel):
        if certificate is None:
            certificate = c_symplectic_certify(model, full=False)
        if not certificate.certified:
            raise UsageError(
                f"total space not certified finite: {certificate.reason or certificate.verdict}"
            )
        return certificate.formal_dimension_Y
    gens = model.generators
    if all(g.odd for g in gens):
        return sum(g.degree for g in gens)
    if not _is_pure(model):
        raise UsageError("formal dimension needs an odd-generator or pure model")
    odd_sum = sum(g.degree for g in gens if g.odd)
    even_excess = sum(g.degree - 1 for g in gens if not g.odd)
    fd = odd_sum - even_excess
    # cohomology of a pure model vanishes above fd iff it is finite; check a
    # window wider than every generator degree
    cx = CochainComplex(model)
    top = max(g.degree for g in gens)
    if fd < 0 or cx.betti(fd) != 1 or any(cx.betti(k) for k in range(fd + 1, fd + 2 * top + 2)):
        raise UsageError("pure model does not have finite cohomology")
    return fd


def c_symplectic_certify(
    rm: RelativeModel, fiber_dimension: int | None = None, full: bool = True
) -> CsCertificate:
    """Decide whether the total space is c-symplectic with [t] as symplectic class.

    With N the fiber's formal dimension: H^N(Y) = H^{N+1}(Y) = 0 forces
    H^k(Y) = 0 for all k >= N (multiplication by [t] is onto above N),
    after which [t^{(N-1)/2}] must span H^{N-1}(Y).
    """
    if not isinstance(rm, RelativeModel):
        raise UsageError("c_symplectic_certify needs a relative model")
    N = fiber_dimension if fiber_dimension is not None else formal_dimension(rm.fiber)
    if N % 2 == 0:
        return CsCertificate("rejected", "parity: fiber formal dimension is even", N)
    cx = CochainComplex(rm)
    b_top = cx.betti(N - 1)
    b_n, b_n1 = cx.betti(N), cx.betti(N + 1)
    if b_n or b_n1:
        return CsCertificate(
            "rejected", f"cohomology survives above the fiber dimension: b_{N}={b_n}, b_{N + 1}={b_n1}", N
        )
    if b_top != 1:
        return CsCertificate("rejected", f"b_{N - 1} = {b_top}, expected 1", N)
    m = (N - 1) // 2
    t_power = [0] * len(rm.generators)
    t_power[0] = m
    if cx.in_image(N - 2, {tuple(t_power): Fraction(1)}):
        return CsCertificate("rejected", f"[t^{m}] = 0 in H^{N - 1}", N)
    table = None
    total = None
    if full:
        table = betti_numbers(rm, N + 1, cx)
        total = table.total
    return CsCertificate("certified", "", N, N - 1, m, total, table)


def unipotent_parameter_count(fiber: SullivanModel, g: str) -> int:
    """Decomposable cocycles of degree |g| modulo coboundaries."""
    k = fiber.generators[fiber.index(g)].degree
    cx = CochainComplex(fiber, blocks=False)
    dec = [m for m in cx.basis(k) if monomial_length(m) >= 2]
    tgt = cx.index(k + 1)
    ech = _Echelon()
    for m in dec:
        img = cx.d(m)
        if img:
            ech.add(_integer_vector(img, tgt))
    cocycles = len(dec) - ech.rank
    return cocycles - cx.rank(k - 1)
