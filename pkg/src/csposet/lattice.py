"""Diagonal (torus) subgroups as integer relation lattices.

A lattice L in Z^n stands for the subgroup {c in (K*)^n : c^m = 1 for m in L}
of the diagonal torus acting on the fiber generators.  A coefficient field
enters only through how many d-th roots of unity it contains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .algebra import RelativeModel, SullivanModel, UsageError


class UnsupportedConfiguration(UsageError):
    """The diagonal description of the automorphism group does not apply."""


# --------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class FieldSpec:
    kind: str  # "Q", "cyc" or "qbar"
    m: int = 0

    def __post_init__(self):
        if self.kind not in ("Q", "cyc", "qbar"):
            raise UsageError(f"unknown field kind {self.kind!r}")
        if self.kind == "cyc" and self.m < 3:
            raise UsageError("cyclotomic field needs m >= 3")

    @classmethod
    def rationals(cls):
        return cls("Q")

    @classmethod
    def cyclotomic(cls, m):
        return cls("cyc", int(m))

    @classmethod
    def algebraic_closure(cls):
        return cls("qbar")

    @classmethod
    def parse(cls, token: str) -> "FieldSpec":
        token = token.strip().lower()
        if token == "q":
            return cls.rationals()
        if token == "qbar":
            return cls.algebraic_closure()
        if token.startswith("cyc:"):
            try:
                return cls.cyclotomic(int(token[4:]))
            except ValueError:
                pass
        raise UsageError(f"bad field {token!r}; expected q, cyc:<m> or qbar")

    @property
    def unit_order(self) -> int | None:
        """Order of the group of roots of unity in K (None when infinite)."""
        if self.kind == "Q":
            return 2
        if self.kind == "cyc":
            return self.m if self.m % 2 == 0 else 2 * self.m
        return None

    def root_count(self, d: int) -> int:
        """Number of d-th roots of unity in K."""
        if d < 1:
            raise UsageError("root_count needs d >= 1")
        M = self.unit_order
        return d if M is None else gcd(d, M)

    @property
    def token(self) -> str:
        return {"Q": "q", "qbar": "qbar"}.get(self.kind) or f"cyc:{self.m}"

    def __str__(self):
        return {"Q": "Q", "qbar": "Qbar"}.get(self.kind) or f"Q(zeta_{self.m})"


RATIONALS = FieldSpec.rationals()
ALGEBRAIC_CLOSURE = FieldSpec.algebraic_closure()


# --------------------------------------------------------------------------
# integer normal forms


def hermite_normal_form(rows, n: int | None = None) -> tuple:
    """Row-style HNF of the row lattice: positive pivots, reduced above."""
    A = [list(r) for r in rows if any(r)]
    if n is None:
        n = len(A[0]) if A else 0
    r = 0
    for col in range(n):
        found = False
        while True:
            nz = [i for i in range(r, len(A)) if A[i][col]]
            if not nz:
                break
            found = True
            piv = min(nz, key=lambda i: abs(A[i][col]))
            A[r], A[piv] = A[piv], A[r]
            clean = True
            pr = A[r]
            for i in range(r + 1, len(A)):
                if A[i][col]:
                    q = A[i][col] // pr[col]
                    if q:
                        A[i] = [a - q * b for a, b in zip(A[i], pr)]
                    if A[i][col]:
                        clean = False
            if clean:
                break
        if not found:
            continue
        if A[r][col] < 0:
            A[r] = [-a for a in A[r]]
        pr = A[r]
        for i in range(r):
            q = A[i][col] // pr[col]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], pr)]
        r += 1
        if r == len(A):
            break
    return tuple(tuple(row) for row in A[:r])


def reduce_modulo(hnf_rows, v) -> tuple:
    """Canonical representative of v + L, given L in Hermite normal form."""
    v = list(v)
    for row in hnf_rows:
        p = next(j for j, a in enumerate(row) if a)
        q = v[p] // row[p]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


def in_lattice(hnf_rows, v) -> bool:
    return not any(reduce_modulo(hnf_rows, v))


def _identity(k):
    return [[int(i == j) for j in range(k)] for i in range(k)]


def smith_normal_form(M):
    """Return (U, S, V) with U*M*V = S, U and V unimodular, S diagonal, s_i | s_{i+1}.

    ``M`` is a list of integer rows; all three results are lists of rows.
    """
    U, S, V, _ = _snf_with_inverse(M)
    return U, S, V


def _snf_with_inverse(M):
    A = [list(r) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m)
    V = _identity(n)
    Vinv = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        # V -> V E with E = I + q e_src e_dst^T, so Vinv -> E^-1 Vinv
        Vinv[src] = [a - q * b for a, b in zip(Vinv[src], Vinv[dst])]

    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return U, A, V, Vinv


def invariant_factors(M) -> tuple:
    _, S, _ = smith_normal_form(M)
    return tuple(S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i])


# --------------------------------------------------------------------------
# constraint lattices


@dataclass(frozen=True)
class ConstraintLattice:
    """Relations among diagonal scalars, one integer exponent vector each.

    ``ambient`` holds the relations cutting out the diagonal part of the
    fiber's own automorphism group; ``relations`` the extra ones imposed by
    the total differential.  Equality is row-lattice equality.
    """

    ambient_rank: int
    relations: tuple = ()
    ambient: tuple = ()
    names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        for row in self.relations + self.ambient:
            if len(row) != self.ambient_rank:
                raise UsageError(f"relation {row} does not have length {self.ambient_rank}")

    @property
    def rows(self) -> tuple:
        return hermite_normal_form(self.ambient + self.relations, self.ambient_rank)

    def key(self):
        return (self.ambient_rank, self.rows)

    def __eq__(self, other):
        return isinstance(other, ConstraintLattice) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def contains(self, v) -> bool:
        return in_lattice(self.rows, v)

    def contains_lattice(self, other: "ConstraintLattice") -> bool:
        _check_ambient(self, other)
        rows = self.rows
        return all(in_lattice(rows, r) for r in other.rows)

    def with_rows(self, rows) -> "ConstraintLattice":
        return ConstraintLattice(self.ambient_rank, tuple(tuple(r) for r in rows), (), self.names)

    def describe(self) -> list:
        """Human-readable relations like ``v1v4 = v5`` read as scalar identities."""
        names = self.names or tuple(f"c{i + 1}" for i in range(self.ambient_rank))
        out = []
        for row in self.rows:
            lhs = "".join(_power(names[j], a) for j, a in enumerate(row) if a > 0) or "1"
            rhs = "".join(_power(names[j], -a) for j, a in enumerate(row) if a < 0) or "1"
            out.append(f"{lhs} = {rhs}")
        return out


def _power(name, e):
    return name if e == 1 else f"{name}^{e}"


def _check_ambient(a, b):
    if a.ambient_rank != b.ambient_rank:
        raise UsageError(
            f"lattices live in different ambient tori ({a.ambient_rank} vs {b.ambient_rank})"
        )


def _term_vector(fiber_positions, m, target, n):
    v = [0] * n
    for pos, e in zip(fiber_positions, m):
        if pos is not None and e:
            v[pos] += e
    v[target] -= 1
    return tuple(v)


def weight_relations(model: SullivanModel):
    """(ambient, relations) exponent vectors read off the differential.

    Works for fibers and relative models; for a relative model the base
    generator carries weight 0 and terms with a positive base exponent are
    the extra relations.
    """
    if isinstance(model, RelativeModel):
        gens = model.generators
        fiber = model.fiber
        positions = [None] + list(range(len(fiber.generators)))
    else:
        gens = model.generators
        fiber = model
        positions = list(range(len(gens)))
    n = len(fiber.generators)
    ambient, extra = [], []
    for name, dg in model.differential.items():
        target = fiber.index(name)
        for m in dg.terms:
            v = _term_vector(positions, m, target, n)
            if positions[0] is None and m[0] > 0:
                extra.append(v)
            else:
                ambient.append(v)
    return ambient, extra


def _check_diagonalizable(fiber: SullivanModel):
    even = [g.degree for g in fiber.generators if not g.odd]
    if len(even) != len(set(even)):
        raise UnsupportedConfiguration(
            "repeated even generator degrees: the automorphism group is not diagonal"
        )


def ambient_lattice(fiber: SullivanModel) -> ConstraintLattice:
    """Relations defining the torus part of the fiber's automorphism group."""
    _check_diagonalizable(fiber)
    ambient, _ = weight_relations(fiber)
    return ConstraintLattice(
        len(fiber.generators), (), _dedup(ambient), fiber.names
    )


def extract_constraint_lattice(rm: RelativeModel) -> ConstraintLattice:
    """One relation per term of each D v: prod(support scalars) / c_v = 1."""
    if not isinstance(rm, RelativeModel):
        raise UsageError("extract_constraint_lattice needs a relative model")
    _check_diagonalizable(rm.fiber)
    ambient, extra = weight_relations(rm)
    return ConstraintLattice(
        len(rm.fiber.generators), _dedup(extra), _dedup(ambient), rm.fiber.names
    )


def _dedup(rows):
    seen = []
    for r in rows:
        if r not in seen:
            seen.append(r)
    return tuple(sorted(seen))


# --------------------------------------------------------------------------
# point groups


@dataclass(frozen=True)
class AbelianStructure:
    free_rank: int
    torsion: tuple  # invariant factors >= 2 of Z^n / L
    over_field: FieldSpec
    realized_orders: tuple  # cyclic factor orders actually realized in K

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.realized_orders:
            out *= d
        return out

    def structure_string(self) -> str:
        parts = []
        if self.free_rank:
            parts.append(f"(K*)^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.realized_orders if d > 1]
        return " x ".join(parts) if parts else "{0}"

    def __str__(self):
        return self.structure_string()


def _snf_data(L: ConstraintLattice):
    rows = [list(r) for r in L.rows]
    n = L.ambient_rank
    if not rows:
        return [], _identity(n)
    _, S, _, Vinv = _snf_with_inverse(rows)
    diag = [S[i][i] for i in range(min(len(S), n)) if S[i][i]]
    return diag, Vinv


def points_structure(L: ConstraintLattice, K: FieldSpec) -> AbelianStructure:
    diag, _ = _snf_data(L)
    torsion = tuple(d for d in diag if d > 1)
    realized = tuple(K.root_count(d) for d in torsion)
    return AbelianStructure(
        free_rank=L.ambient_rank - len(diag),
        torsion=torsion,
        over_field=K,
        realized_orders=tuple(r for r in realized if r > 1),
    )


def field_closure(L: ConstraintLattice, K: FieldSpec) -> ConstraintLattice:
    """Largest lattice with the same K-points as L."""
    diag, Vinv = _snf_data(L)
    rows = []
    for i, d in enumerate(diag):
        g = K.root_count(d)
        rows.append([g * a for a in Vinv[i]])
    return L.with_rows(hermite_normal_form(rows, L.ambient_rank))


def subgroup_includes(L1: ConstraintLattice, L2: ConstraintLattice, K: FieldSpec) -> bool:
    """Whether points(L1, K) is contained in points(L2, K)."""
    _check_ambient(L1, L2)
    return field_closure(L1, K).contains_lattice(L2)


def subgroup_equals(L1: ConstraintLattice, L2: ConstraintLattice, K: FieldSpec) -> bool:
    _check_ambient(L1, L2)
    return field_closure(L1, K) == field_closure(L2, K)
