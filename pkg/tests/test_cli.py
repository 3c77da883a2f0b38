import io
import json

import pytest

from csposet.catalog_io import CatalogFile, SchemaError, dumps, load_catalog, save_catalog
from csposet.cli import main
from csposet.enumeration import ModelCatalog, sphere_product
from csposet.fixtures import load_fixture
from csposet.lattice import FieldSpec
from csposet.poset import build_poset, depth


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_fixture_summary():
    code, text = run("analyze", "--degrees", "3,5,9,15,33", "--field", "cyc:5", "--fixture", "ex5.4", "--quiet")
    assert code == 0
    assert text == "classes: 20, depth: 4\n"


def test_cp_summary():
    code, text = run("analyze", "--cp", "14", "--field", "qbar", "--quiet")
    assert code == 0
    assert text.splitlines() == ["classes: 4, depth: 3", "depth: 3 = c(15)"]


def test_even_fiber_summary():
    code, text = run("analyze", "--degrees", "4,7", "--quiet")
    assert code == 0
    assert text == "fiber formal dimension even; depth 0\n"


def test_enumerated_summary():
    code, text = run("analyze", "--degrees", "3,3,7", "--coeffs", "1")
    assert code == 0
    assert text.endswith("classes: 1, depth: 1\n")


def test_verbose_listing():
    code, text = run("analyze", "--fixture", "ex5.2a", "--field", "q")
    assert code == 0
    assert "  2 > 1\n" in text or "  1 > 2\n" in text
    assert "field: Q\n" in text


@pytest.mark.parametrize("argv", [
    ("analyze",),
    ("analyze", "--cp", "14", "--sp", "5"),
    ("analyze", "--degrees", "3,x"),
    ("analyze", "--degrees", "4"),
    ("analyze", "--fixture", "ex5.4", "--field", "cyc:2"),
    ("analyze", "--fixture", "ex5.4", "--degrees", "3,5"),
    ("analyze", "--fixture", "nope"),
    ("analyze", "--cp", "3"),
    ("analyze", "--degrees", "3,3,7", "--coeffs", "0"),
    ("frobnicate",),
])
def test_usage_errors(argv, capsys):
    code, _ = run(*argv)
    assert code == 2
    assert capsys.readouterr().err.startswith("error: ")


def test_cap_hit_writes_partial_output(tmp_path):
    path = tmp_path / "partial.json"
    code, text = run("analyze", "--degrees", "3,5,9,15,33", "--max-assignments", "3", "--json", str(path))
    assert code == 3
    assert "cap reached" in text
    assert json.loads(path.read_text())["incomplete"] is True


def test_unwritable_output(tmp_path):
    code, _ = run("analyze", "--fixture", "ex5.1b", "--quiet", "--dot", str(tmp_path / "missing" / "x.dot"))
    assert code == 4
    assert list(tmp_path.iterdir()) == []


def test_outputs_are_byte_stable(tmp_path):
    for k in (1, 2):
        code, _ = run("analyze", "--fixture", "ex5.4", "--field", "cyc:5", "--quiet",
                      "--dot", str(tmp_path / f"{k}.dot"), "--json", str(tmp_path / f"{k}.json"))
        assert code == 0
    assert (tmp_path / "1.dot").read_bytes() == (tmp_path / "2.dot").read_bytes()
    assert (tmp_path / "1.json").read_bytes() == (tmp_path / "2.json").read_bytes()


def test_round_trip(tmp_path):
    cat = load_fixture("ex5.4")
    p = build_poset(cat, FieldSpec.cyclotomic(5))
    cf = CatalogFile(cat, p, depth(p))
    path = tmp_path / "cat.json"
    save_catalog(cf, str(path))
    again = load_catalog(str(path))
    assert again == cf
    assert dumps(again) == path.read_text()
    assert [e.model for e in again.catalog.entries] == [e.model for e in cat.entries]


def test_load_then_analyze(tmp_path):
    path = tmp_path / "cat.json"
    run("analyze", "--fixture", "ex5.4", "--field", "cyc:5", "--quiet", "--json", str(path))
    code, text = run("analyze", "--load", str(path), "--field", "q", "--quiet")
    assert code == 0 and text == "classes: 19, depth: 4\n"


def test_load_empty_catalog(tmp_path):
    path = tmp_path / "empty.json"
    save_catalog(CatalogFile(ModelCatalog(sphere_product((3, 5)), [], "enumerated")), str(path))
    code, text = run("analyze", "--load", str(path), "--quiet")
    assert code == 0 and text == "classes: 0, depth: 0\n"


def _corrupt(tmp_path, edit):
    path = tmp_path / "cat.json"
    run("analyze", "--fixture", "ex5.1a", "--quiet", "--json", str(path))
    data = json.loads(path.read_text())
    edit(data)
    path.write_text(json.dumps(data))
    return path


def test_unbalanced_term_named(tmp_path, capsys):
    def edit(data):
        data["models"][0]["differential"]["v3"][0]["monomial"]["t"] = 7

    code, _ = run("analyze", "--load", str(_corrupt(tmp_path, edit)))
    assert code == 2
    err = capsys.readouterr().err
    assert "unbalanced term" in err and "D v3" in err


def test_schema_error_names_field(tmp_path, capsys):
    def edit(data):
        del data["models"][0]["certificate"]

    code, _ = run("analyze", "--load", str(_corrupt(tmp_path, edit)))
    assert code == 5
    assert "$.models[0].certificate" in capsys.readouterr().err


def test_wrong_version_rejected(tmp_path):
    def edit(data):
        data["format_version"] = 99

    with pytest.raises(SchemaError) as info:
        load_catalog(str(_corrupt(tmp_path, edit)))
    assert info.value.path == "$.format_version"


def test_missing_file_is_io_error(tmp_path):
    code, _ = run("analyze", "--load", str(tmp_path / "none.json"))
    assert code == 4


def test_fixture_listing():
    code, text = run("fixtures")
    names = text.split()
    assert code == 0 and "ex5.4" in names and "e7" in names and "sp11" in names and "cp-example" in names
