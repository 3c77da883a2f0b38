"""Built-in catalogs of hand-listed total spaces.

Each fixture lists its fiber and the differentials of every model, written
in the model text syntax.  Generators with no entry have D = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import UsageError
from .enumeration import (
    ModelCatalog,
    catalog_from_differentials,
    cp_family,
    sp_chain,
    sphere_product,
)


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    degrees: tuple
    rows: tuple  # (label, {generator: differential})
    reported_dims: tuple | None = None
    notes: tuple = field(default=())

    def catalog(self) -> ModelCatalog:
        return catalog_from_differentials(
            sphere_product(self.degrees),
            [(label, dict(diff)) for label, diff in self.rows],
            f"fixture({self.name})",
            self.reported_dims,
        )


def _rows(*specs):
    return tuple((label, dict(diff)) for label, diff in specs)


_A = "v1v4t^8+v2v3t^10+t^17"
_B = "v1v2t^13+v3v4t^5+t^17"
_C = "v1v3t^11+v2v4t^7+t^17"
_E = "v1v2v3v4t+t^17"

_TWENTY = _rows(
    ("1", {"v5": _A}),
    ("2", {"v4": "v1v2t^4", "v5": _A}),
    ("3", {"v4": "v1v3t^2", "v5": _A}),
    ("4", {"v3": "v1v2t", "v5": _A}),
    ("5", {"v3": "v1v2t", "v4": "v1v3t^2", "v5": _A}),
    ("6", {"v5": _B}),
    ("7", {"v4": "v1v3t^2", "v5": _B}),
    ("8", {"v4": "v2v3t", "v5": _B}),
    ("9", {"v5": _C}),
    ("10", {"v4": "v1v2t^4", "v5": _C}),
    ("11", {"v4": "v2v3t", "v5": _C}),
    ("12", {"v3": "v1v2t", "v5": _C}),
    ("13", {"v3": "v1v2t", "v4": "v2v3t", "v5": _C}),
    ("14", {"v5": _E}),
    ("15", {"v4": "v1v2t^4", "v5": _E}),
    ("16", {"v4": "v1v3t^2", "v5": _E}),
    ("17", {"v4": "v2v3t", "v5": _E}),
    ("18", {"v3": "v1v2t", "v5": _E}),
    ("19", {"v3": "v1v2t", "v4": "v1v3t^2", "v5": _E}),
    ("20", {"v3": "v1v2t", "v4": "v2v3t", "v5": _E}),
)

_E7_TOP = "v1v6t^3+v2v5t+v3v4t+t^18"


def _e7(label, d3="0", d4="0", d5="0", d6="0"):
    diff = {"v7": _E7_TOP}
    for name, value in (("v3", d3), ("v4", d4), ("v5", d5), ("v6", d6)):
        if value != "0":
            diff[name] = value
    return (label, diff)


_E7_ROWS = _rows(
    _e7("1"),
    _e7("2", d4="v1v3t"),
    _e7("3", d5="v1v2t^5"),
    _e7("4", d6="v1v2t^7"),
    _e7("5", d6="v1v3t^5"),
    _e7("6", d6="v1v4t^3"),
    _e7("7", d6="v1v5t"),
    _e7("8", d4="v1v3t", d5="v1v2t^5"),
    _e7("9", d4="v1v3t", d6="v1v2t^7"),
    _e7("10", d4="v1v3t", d6="v1v4t^3"),
    _e7("11", d4="v1v3t", d6="v1v5t"),
    _e7("12", d5="v1v2t^5", d6="v1v3t^5"),
    _e7("13", d5="v1v2t^5", d6="v1v4t^3"),
    _e7("14", d5="v1v2t^5", d6="v1v5t"),
    _e7("15", d4="v1v3t", d5="v1v2t^5", d6="v1v4t^3"),
    _e7("16", d4="v1v3t", d5="v1v2t^5", d6="v1v5t"),
    _e7("17", d5="v1v3t^3", d6="v2v3t"),
    _e7("18", d4="v1v2t^3", d5="v1v3t^3"),
    _e7("(18)", d4="-v1v2t^3", d6="v2v3t"),
    _e7("19", d4="v1v2t^3", d5="2v1v3t^3", d6="v2v3t"),
    _e7("(19)", d3="v1v2t", d5="-v1v4t"),
    _e7("20", d3="v1v2t", d4="-v1v2t^3", d5="-v1v4t", d6="v2v3t"),
)

_X15_A = "v1v4t^2+v2v3t^2+t^8"
_X15_B = "v1v3t^3+v2v4t+t^8"
_X17_A = "v1v4t^3+v2v3t^3+t^9"
_X17_B = "v1v3t^4+v2v4t^2+t^9"
_TOP_1A = "v1v4t+v2v3t^2+t^9"
_TOP_2A = "v1v4t+v2v3t^2+t^8"

FIXTURES = {
    f.name: f
    for f in [
        Fixture("ex5.1a", "S3 x S3 x S7, one class", (3, 3, 7), _rows(("1", {"v3": "v1v2t+t^4"}))),
        Fixture(
            "ex5.1b",
            "S7 x S9 x S11 x S13 x S23, two incomparable classes",
            (7, 9, 11, 13, 23),
            _rows(
                ("1", {"v5": "v1v4t^2+v2v3t^2+t^12"}),
                ("2", {"v5": "v1v3t^3+v2v4t+t^12"}),
            ),
        ),
        Fixture(
            "ex5.1c",
            "S9 x S9 x S11 x S13 x S15 x S17 x S29, three incomparable classes",
            (9, 9, 11, 13, 15, 17, 29),
            _rows(
                ("1", {"v7": "v1v6t^2+v2v5t^3+v3v4t^3+t^15"}),
                ("2", {"v7": "v1v6t^2+v2v4t^4+v3v5t^2+t^15"}),
                ("3", {"v7": "v1v6t^2+v2v3t^5+v4v5t+t^15"}),
            ),
            notes=("the pairings are chosen representatives; no differentials were listed",),
        ),
        Fixture(
            "ex5.1d",
            "S9 x S11 x S13 x S15 x S17 x S19 x S31, four incomparable classes",
            (9, 11, 13, 15, 17, 19, 31),
            _rows(
                ("1", {"v7": "v1v6t^2+v2v5t^2+v3v4t^2+t^16"}),
                ("2", {"v7": "v1v6t^2+v2v4t^3+v3v5t+t^16"}),
                ("3", {"v7": "v1v5t^3+v2v6t+v3v4t^2+t^16"}),
                ("4", {"v7": "v1v4t^4+v2v6t+v3v5t+t^16"}),
            ),
        ),
        Fixture(
            "ex5.2a",
            "S3 x S5 x S7 x S9 x S13, a 2-chain",
            (3, 5, 7, 9, 13),
            _rows(
                ("1", {"v5": "v1v4t+v2v3t+t^7"}),
                ("2", {"v4": "v1v2t", "v5": "v1v4t+v2v3t+t^7"}),
            ),
        ),
        Fixture(
            "ex5.2b",
            "S3 x S5 x S7 x S9 x S15, two 2-chains",
            (3, 5, 7, 9, 15),
            _rows(
                ("1", {"v5": _X15_A}),
                ("2", {"v4": "v1v2t", "v5": _X15_A}),
                ("3", {"v5": _X15_B}),
                ("4", {"v4": "v1v2t", "v5": _X15_B}),
            ),
        ),
        Fixture(
            "ex5.2c",
            "S3 x S5 x S7 x S9 x S17, two 2-chains and a point",
            (3, 5, 7, 9, 17),
            _rows(
                ("1", {"v5": _X17_A}),
                ("2", {"v4": "v1v2t", "v5": _X17_A}),
                ("3", {"v5": _X17_B}),
                ("4", {"v4": "v1v2t", "v5": _X17_B}),
                ("5", {"v5": "v1v2t^5+v3v4t+t^9"}),
            ),
        ),
        Fixture(
            "ex5.2-2a",
            "S3 x S5 x S7 x S11 x S15, one class over two",
            (3, 5, 7, 11, 15),
            _rows(
                ("1", {"v5": _TOP_2A}),
                ("2", {"v4": "v1v2t^2", "v5": _TOP_2A}),
                ("3", {"v4": "v1v3t", "v5": _TOP_2A}),
            ),
        ),
        Fixture(
            "ex5.2-2b",
            "S7 x S9 x S11 x S13 x S41, one class over three",
            (7, 9, 11, 13, 41),
            _rows(
                ("1", {"v5": "v1v2v3v4t+t^21"}),
                ("2", {"v5": "v1v2t^13+v3v4t^9+t^21"}),
                ("3", {"v5": "v1v3t^12+v2v4t^10+t^21"}),
                ("4", {"v5": "v1v4t^11+v2v3t^11+t^21"}),
            ),
        ),
        Fixture(
            "ex5.3-1a",
            "S3 x S5 x S9 x S13 x S17, three levels",
            (3, 5, 9, 13, 17),
            _rows(
                ("1", {"v5": _TOP_1A}),
                ("2", {"v3": "v1v2t", "v5": _TOP_1A}),
                ("3", {"v4": "v1v3t", "v5": _TOP_1A}),
                ("4", {"v4": "v1v2t^3", "v5": _TOP_1A}),
                ("5", {"v3": "v1v2t", "v4": "v1v3t", "v5": _TOP_1A}),
            ),
        ),
        Fixture(
            "ex5.3-1b",
            "S7 x S9 x S11 x S17 x S45, seven classes",
            (7, 9, 11, 17, 45),
            _rows(
                ("1", {"v5": "v1v2v3v4t+t^23"}),
                ("2", {"v5": "v1v2t^15+v3v4t^9+t^23"}),
                ("3", {"v5": "v1v3t^14+v2v4t^10+t^23"}),
                ("4", {"v5": "v1v4t^11+v2v3t^13+t^23"}),
                ("5", {"v4": "v1v2t", "v5": "v1v2v3v4t+t^23"}),
                ("6", {"v4": "v1v2t", "v5": "v1v3t^14+v2v4t^10+t^23"}),
                ("7", {"v4": "v1v2t", "v5": "v1v4t^11+v2v3t^13+t^23"}),
            ),
        ),
        Fixture(
            "ex5.4",
            "S3 x S5 x S9 x S15 x S33, twenty models",
            (3, 5, 9, 15, 33),
            _TWENTY,
            reported_dims=(
                272, 220, 212, 209, 149, 272, 212, 204, 272, 220,
                204, 209, 144, 272, 220, 212, 204, 209, 149, 144,
            ),
        ),
        Fixture(
            "e7",
            "E7 = S3 x S11 x S15 x S19 x S23 x S27 x S35, twenty types",
            (3, 11, 15, 19, 23, 27, 35),
            _E7_ROWS,
            notes=("rows (18) and (19) repeat types 18 and 19 with other differentials",),
        ),
    ]
}

CP_FIXTURES = {"ex5.3-2": 14, "ex5.3-3": 8, "cp-example": 14}
SP_FIXTURES = {f"sp{n}": n for n in (1, 3, 5, 7, 9, 11)}


def fixture_names() -> list:
    return sorted(FIXTURES) + sorted(CP_FIXTURES) + sorted(SP_FIXTURES, key=lambda s: int(s[2:]))


def load_fixture(name: str) -> ModelCatalog:
    if name in FIXTURES:
        return FIXTURES[name].catalog()
    if name in CP_FIXTURES:
        cat = cp_family(CP_FIXTURES[name])
        cat.provenance = f"fixture({name})"
        return cat
    if name in SP_FIXTURES:
        cat = sp_chain(SP_FIXTURES[name])
        cat.provenance = f"fixture({name})"
        return cat
    raise UsageError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")


def fixture_degrees(name: str):
    """Sphere degrees of a fixture's fiber, or None for non-sphere fibers."""
    if name in FIXTURES:
        return FIXTURES[name].degrees
    if name in SP_FIXTURES:
        return tuple(4 * i - 1 for i in range(1, SP_FIXTURES[name] + 1))
    if name in CP_FIXTURES:
        return None
    raise UsageError(f"unknown fixture {name!r}")

