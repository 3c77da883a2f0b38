"""Versioned JSON catalogs: models, certificates, classes, order and depth."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Generator, Poly, RelativeModel, SullivanModel, UsageError, validate_model
from .cohomology import BettiTable, CsCertificate
from .enumeration import CatalogEntry, ModelCatalog
from .lattice import ConstraintLattice, FieldSpec, extract_constraint_lattice, points_structure
from .poset import CsPoset, DepthReport, PosetClass

FORMAT_VERSION = 1


class SchemaError(ValueError):
    """A catalog file does not match the expected layout."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class CatalogFile:
    catalog: ModelCatalog
    poset: CsPoset | None = None
    depth: DepthReport | None = None

    def to_dict(self) -> dict:
        return catalog_to_dict(self)

    def __eq__(self, other):
        return isinstance(other, CatalogFile) and self.to_dict() == other.to_dict()


# --------------------------------------------------------------------------
# writing


def _fraction_text(c) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def _poly_terms(p: Poly) -> list:
    out = []
    for m, c in p.sorted_terms():
        mono = {g.name: e for g, e in zip(p.gens, m) if e}
        out.append({"monomial": mono, "coefficient": _fraction_text(c)})
    return out


def _model_differential(model: SullivanModel) -> dict:
    return {name: _poly_terms(model.differential[name]) for name in model.names if name in model.differential}


def _certificate_dict(cert: CsCertificate) -> dict:
    return {
        "verdict": cert.verdict,
        "reason": cert.reason,
        "fiber_dimension": cert.fiber_dimension,
        "formal_dimension_Y": cert.formal_dimension_Y,
        "top_power": cert.top_power,
        "total_dim": cert.total_dim,
        "betti": None
        if cert.betti is None
        else {
            "by_degree": {str(k): v for k, v in sorted(cert.betti.by_degree.items())},
            "computed_up_to": cert.betti.computed_up_to,
        },
    }


def _lattice_dict(L: ConstraintLattice) -> dict:
    return {
        "ambient_rank": L.ambient_rank,
        "relations": [list(r) for r in L.relations],
        "ambient": [list(r) for r in L.ambient],
        "rows": [list(r) for r in L.rows],
    }


def catalog_to_dict(cf: CatalogFile) -> dict:
    cat = cf.catalog
    fiber = cat.fiber
    out = {
        "format_version": FORMAT_VERSION,
        "fiber": {
            "generators": [[g.name, g.degree] for g in fiber.generators],
            "differential": _model_differential(fiber),
        },
        "provenance": cat.provenance,
        "incomplete": cat.incomplete,
        "reported_dims": None if cat.reported_dims is None else list(cat.reported_dims),
        "models": [
            {
                "label": e.label,
                "base": e.model.base,
                "differential": _model_differential(e.model),
                "certificate": _certificate_dict(e.certificate),
                "lattice": _lattice_dict(e.lattice),
            }
            for e in cat.entries
        ],
    }
    if cf.poset is not None:
        p = cf.poset
        out["poset"] = {
            "field": p.field.token,
            "classes": [
                {
                    "id": c.id,
                    "members": list(c.members),
                    "lattice": _lattice_dict(c.lattice),
                    "structure": c.structure.structure_string(),
                    "free_rank": c.structure.free_rank,
                    "torsion": list(c.structure.torsion),
                    "realized_orders": list(c.structure.realized_orders),
                    "dims": list(c.dims),
                    "unipotent": c.unipotent,
                }
                for c in p.elements
            ],
            "order": [[int(x) for x in row] for row in p.order],
            "hasse": [list(e) for e in p.hasse],
            "warnings": list(p.warnings),
        }
    if cf.depth is not None:
        out["depth"] = {
            "depth": cf.depth.depth,
            "witness_chain": list(cf.depth.witness_chain),
            "height": cf.depth.height,
        }
    return out


def dumps(cf: CatalogFile) -> str:
    return json.dumps(catalog_to_dict(cf), indent=2, sort_keys=True) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_catalog(cf: CatalogFile, path: str) -> None:
    write_atomic(path, dumps(cf))


# --------------------------------------------------------------------------
# reading


def _get(obj, key, kind, path):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing field")
    value = obj[key]
    if kind is not None and not isinstance(value, kind) or isinstance(value, bool) and kind is int:
        raise SchemaError(f"{path}.{key}", f"expected {getattr(kind, '__name__', kind)}")
    return value


def _int_rows(value, path):
    if not isinstance(value, list) or not all(
        isinstance(r, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in r) for r in value
    ):
        raise SchemaError(path, "expected a list of integer rows")
    return [tuple(r) for r in value]


def _parse_fraction(text, path):
    if not isinstance(text, str):
        raise SchemaError(path, "coefficients are 'p/q' strings")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(path, f"bad coefficient {text!r}") from None


def _read_poly(items, gens, owner, path) -> Poly:
    if not isinstance(items, list):
        raise SchemaError(path, "expected a list of terms")
    index = {g.name: i for i, g in enumerate(gens)}
    target = gens[index[owner]].degree + 1
    terms = {}
    for k, item in enumerate(items):
        tpath = f"{path}[{k}]"
        mono = _get(item, "monomial", dict, tpath)
        coeff = _parse_fraction(_get(item, "coefficient", str, tpath), f"{tpath}.coefficient")
        exps = [0] * len(gens)
        for name, e in mono.items():
            if name not in index:
                raise SchemaError(f"{tpath}.monomial", f"unknown generator {name!r}")
            if not isinstance(e, int) or isinstance(e, bool) or e < 1:
                raise SchemaError(f"{tpath}.monomial.{name}", "exponents are positive integers")
            if gens[index[name]].odd and e > 1:
                raise SchemaError(f"{tpath}.monomial.{name}", "odd generators square to zero")
            exps[index[name]] = e
        deg = sum(g.degree * e for g, e in zip(gens, exps))
        if deg != target:
            text = "".join(n if e == 1 else f"{n}^{e}" for n, e in mono.items()) or "1"
            raise UsageError(
                f"unbalanced term {text} in D {owner}: degree {deg}, expected {target}"
            )
        exps = tuple(exps)
        terms[exps] = terms.get(exps, 0) + coeff
    return Poly(gens, {m: c for m, c in terms.items() if c})


def _read_differential(obj, gens, path) -> dict:
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    names = {g.name for g in gens}
    out = {}
    for name, items in obj.items():
        if name not in names:
            raise SchemaError(f"{path}.{name}", "unknown generator")
        out[name] = _read_poly(items, gens, name, f"{path}.{name}")
    return out


def _read_certificate(obj, path) -> CsCertificate:
    betti = obj.get("betti") if isinstance(obj, dict) else None
    table = None
    if betti is not None:
        by_degree = _get(betti, "by_degree", dict, f"{path}.betti")
        table = BettiTable(
            {int(k): v for k, v in by_degree.items()},
            _get(betti, "computed_up_to", int, f"{path}.betti"),
        )
    return CsCertificate(
        _get(obj, "verdict", str, path),
        _get(obj, "reason", str, path),
        obj.get("fiber_dimension"),
        obj.get("formal_dimension_Y"),
        obj.get("top_power"),
        obj.get("total_dim"),
        table,
    )


def _read_lattice(obj, names, path) -> ConstraintLattice:
    return ConstraintLattice(
        _get(obj, "ambient_rank", int, path),
        tuple(_int_rows(_get(obj, "relations", list, path), f"{path}.relations")),
        tuple(_int_rows(_get(obj, "ambient", list, path), f"{path}.ambient")),
        names,
    )


def catalog_from_dict(data) -> CatalogFile:
    path = "$"
    version = _get(data, "format_version", int, path)
    if version != FORMAT_VERSION:
        raise SchemaError(f"{path}.format_version", f"unsupported version {version}")
    fobj = _get(data, "fiber", dict, path)
    gen_list = _get(fobj, "generators", list, f"{path}.fiber")
    gens = []
    for k, g in enumerate(gen_list):
        if (
            not isinstance(g, list)
            or len(g) != 2
            or not isinstance(g[0], str)
            or not isinstance(g[1], int)
            or isinstance(g[1], bool)
        ):
            raise SchemaError(f"{path}.fiber.generators[{k}]", "expected [name, degree]")
        gens.append(Generator(g[0], g[1]))
    fiber = SullivanModel(gens)
    fiber = SullivanModel(
        fiber.generators,
        _read_differential(_get(fobj, "differential", dict, f"{path}.fiber"), fiber.generators, f"{path}.fiber.differential"),
    )
    catalog = ModelCatalog(
        fiber,
        [],
        _get(data, "provenance", str, path),
        _get(data, "incomplete", bool, path),
        None if data.get("reported_dims") is None else tuple(data["reported_dims"]),
    )
    rel_names = fiber.names
    for k, mobj in enumerate(_get(data, "models", list, path)):
        mpath = f"{path}.models[{k}]"
        base = _get(mobj, "base", str, mpath)
        rel_gens = (Generator(base, 2),) + fiber.generators
        diff = _read_differential(_get(mobj, "differential", dict, mpath), rel_gens, f"{mpath}.differential")
        rm = RelativeModel(fiber, diff, base)
        report = validate_model(rm)
        if not report.ok:
            raise UsageError(f"model {k} is invalid: {'; '.join(report.violations)}")
        cert = _read_certificate(_get(mobj, "certificate", dict, mpath), f"{mpath}.certificate")
        stored = _read_lattice(_get(mobj, "lattice", dict, mpath), rel_names, f"{mpath}.lattice")
        lattice = extract_constraint_lattice(rm)
        if stored != lattice:
            raise SchemaError(f"{mpath}.lattice", "does not match the differential")
        catalog.entries.append(CatalogEntry(rm, cert, lattice, _get(mobj, "label", str, mpath)))

    poset = None
    if data.get("poset") is not None:
        ppath = f"{path}.poset"
        pobj = data["poset"]
        try:
            K = FieldSpec.parse(_get(pobj, "field", str, ppath))
        except UsageError as exc:
            raise SchemaError(f"{ppath}.field", str(exc)) from None
        elements = []
        for k, cobj in enumerate(_get(pobj, "classes", list, ppath)):
            cpath = f"{ppath}.classes[{k}]"
            L = _read_lattice(_get(cobj, "lattice", dict, cpath), rel_names, f"{cpath}.lattice")
            structure = points_structure(L, K)
            if structure.structure_string() != _get(cobj, "structure", str, cpath):
                raise SchemaError(f"{cpath}.structure", "does not match the lattice")
            elements.append(
                PosetClass(
                    _get(cobj, "id", int, cpath),
                    tuple(_get(cobj, "members", list, cpath)),
                    L,
                    structure,
                    tuple(_get(cobj, "dims", list, cpath)),
                    _get(cobj, "unipotent", int, cpath),
                )
            )
        order = [[bool(x) for x in row] for row in _int_rows(_get(pobj, "order", list, ppath), f"{ppath}.order")]
        hasse = [tuple(e) for e in _int_rows(_get(pobj, "hasse", list, ppath), f"{ppath}.hasse")]
        poset = CsPoset(K, elements, order, hasse, list(pobj.get("warnings", [])))
    depth = None
    if data.get("depth") is not None:
        dobj = data["depth"]
        depth = DepthReport(
            _get(dobj, "depth", int, "$.depth"),
            tuple(_get(dobj, "witness_chain", list, "$.depth")),
            _get(dobj, "height", int, "$.depth"),
        )
    return CatalogFile(catalog, poset, depth)


def load_catalog(path: str) -> CatalogFile:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"not valid JSON ({exc.msg})") from None
    return catalog_from_dict(data)
