"""Posets of torus subgroups: classes, order, Hasse diagram, depth."""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import UsageError
from .cohomology import unipotent_parameter_count
from .enumeration import ModelCatalog
from .lattice import (
    AbelianStructure,
    ConstraintLattice,
    FieldSpec,
    field_closure,
    points_structure,
)


@dataclass
class PosetClass:
    id: int
    members: tuple  # catalog labels
    lattice: ConstraintLattice  # field-closed
    structure: AbelianStructure
    dims: tuple  # total dimension of H*(Y) per member
    unipotent: int

    @property
    def dim(self) -> int | None:
        known = [d for d in self.dims if d is not None]
        return min(known) if known else None

    def name(self) -> str:
        return "=".join(self.members)


@dataclass
class CsPoset:
    field: FieldSpec
    elements: list
    order: list  # order[i][j]: element i contains element j (i >= j)
    hasse: list  # (larger id, smaller id)
    warnings: list = field(default_factory=list)

    def __len__(self):
        return len(self.elements)

    def element(self, class_id: int) -> PosetClass:
        if not 1 <= class_id <= len(self.elements):
            raise UsageError(f"unknown class id {class_id}")
        return self.elements[class_id - 1]

    def class_of(self, label: str) -> int:
        for c in self.elements:
            if label in c.members:
                return c.id
        raise KeyError(label)

    def leq(self, a: int, b: int) -> bool:
        """Whether class a is contained in class b."""
        return self.order[b - 1][a - 1]

    def labelled_hasse(self) -> set:
        """Hasse edges with classes named by their member labels."""
        return {(self.element(a).name(), self.element(b).name()) for a, b in self.hasse}


@dataclass(frozen=True)
class DepthReport:
    depth: int
    witness_chain: tuple  # class ids, largest first
    height: int


def _fiber_unipotent_count(fiber) -> int:
    return sum(unipotent_parameter_count(fiber, name) for name in fiber.names)


def build_poset(catalog: ModelCatalog, K: FieldSpec) -> CsPoset:
    fiber = catalog.fiber
    for e in catalog.entries:
        if e.model.fiber != fiber:
            raise UsageError(f"entry {e.label} has a different fiber")
    closed = {}
    for e in catalog.entries:
        key = field_closure(e.lattice, K)
        closed.setdefault(key, []).append(e)
    unipotent = _fiber_unipotent_count(fiber) if catalog.entries else 0
    keys = sorted(closed, key=lambda L: L.key())
    elements = []
    for cid, L in enumerate(keys, 1):
        members = closed[L]
        elements.append(
            PosetClass(
                cid,
                tuple(m.label for m in members),
                L,
                points_structure(L, K),
                tuple(m.certificate.total_dim for m in members),
                unipotent,
            )
        )
    n = len(elements)
    # points(j) within points(i)  <=>  cl(L_i) inside cl(L_j)
    order = [[elements[j].lattice.contains_lattice(elements[i].lattice) for j in range(n)] for i in range(n)]
    warnings = []
    for i in range(n):
        for j in range(n):
            if i < j and (order[i][j] or order[j][i]) and elements[i].unipotent != elements[j].unipotent:
                warnings.append(
                    f"classes {i + 1} and {j + 1} differ in unipotent parameters; "
                    "their comparison uses the torus part only"
                )
    p = CsPoset(K, elements, order, [], warnings)
    p.hasse = hasse_edges(p)
    return p


def hasse_edges(p: CsPoset) -> list:
    """Covering relations, larger subgroup first."""
    n = len(p.elements)
    strict = [[p.order[i][j] and i != j for j in range(n)] for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            if not strict[i][j]:
                continue
            if any(strict[i][k] and strict[k][j] for k in range(n)):
                continue
            edges.append((i + 1, j + 1))
    return edges


def _coheights(p: CsPoset):
    """Longest chain ending at each class, with the smallest-id predecessor on it."""
    n = len(p.elements)
    above = [[j for j in range(n) if j != i and p.order[j][i]] for i in range(n)]
    # a class has fewer strict upper bounds than anything below it
    order = sorted(range(n), key=lambda i: (len(above[i]), i))
    co = [1] * n
    parent = [None] * n
    for i in order:
        for j in above[i]:
            if co[j] + 1 > co[i]:
                co[i] = co[j] + 1
                parent[i] = j
    return co, parent


def element_coheight(p: CsPoset, class_id: int) -> int:
    """Length of the longest chain ending at the class (a maximal class has 1)."""
    p.element(class_id)
    co, _ = _coheights(p)
    return co[class_id - 1]


def depth(p: CsPoset) -> DepthReport:
    if not p.elements:
        return DepthReport(0, (), 0)
    co, parent = _coheights(p)
    best = max(co)
    end = min(i for i in range(len(co)) if co[i] == best)
    chain = [end]
    while parent[chain[-1]] is not None:
        chain.append(parent[chain[-1]])
    chain.reverse()
    return DepthReport(best, tuple(i + 1 for i in chain), best - 1)


def c_value(q: int) -> int:
    """One plus the number of prime factors of q counted with multiplicity."""
    if q < 2:
        raise UsageError("c_value needs q >= 2")
    count = 0
    f = 2
    while f * f <= q:
        while q % f == 0:
            q //= f
            count += 1
        f += 1
    if q > 1:
        count += 1
    return count + 1


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(p: CsPoset, title: str = "P") -> str:
    """DOT digraph, one rank per co-height, edges from larger to smaller subgroups."""
    lines = [f"digraph {_dot_quote(title)} {{", "  rankdir=TB;", "  node [shape=box];"]
    if p.elements:
        co, _ = _coheights(p)
        for level in sorted(set(co)):
            ids = " ".join(_dot_quote(str(i + 1)) for i in range(len(co)) if co[i] == level)
            lines.append(f"  {{ rank=same; {ids}; }}")
        for c in p.elements:
            dim = "?" if c.dim is None else str(c.dim)
            label = f"{c.id} / {c.structure.structure_string()} / {dim}"
            lines.append(
                f"  {_dot_quote(str(c.id))} [label={_dot_quote(label)}, tooltip={_dot_quote(c.name())}];"
            )
        for a, b in p.hasse:
            lines.append(f"  {_dot_quote(str(a))} -> {_dot_quote(str(b))};")
    lines.append("}")
    return "\n".join(lines) + "\n"
