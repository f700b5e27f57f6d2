import json

import pytest

from stripconf.cli import main, parse_permutation


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------------------
# permutation parsing


def test_parse_permutation():
    assert parse_permutation("(1 3)(2 4)") == {1: 3, 3: 1, 2: 4, 4: 2}
    assert parse_permutation("(1 2 3)") == {1: 2, 2: 3, 3: 1}
    assert parse_permutation("(1, 2, 3)") == {1: 2, 2: 3, 3: 1}
    assert parse_permutation("") == {}
    assert parse_permutation("(7)") == {}


def test_parse_permutation_errors():
    with pytest.raises(ValueError):
        parse_permutation("1 2")
    with pytest.raises(ValueError):
        parse_permutation("(1 2)(2 3)")
    with pytest.raises(ValueError):
        parse_permutation("(1 1)")


# ---------------------------------------------------------------------------
# betti


def test_betti_json(capsys):
    code, out, _ = run(capsys, "betti", "--n", "3", "--w", "2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["betti"] == [1, 7]
    assert payload["cells"] == [6, 12]
    assert payload["width"] == 2


def test_betti_table_single_degree(capsys):
    code, out, _ = run(capsys, "betti", "--labels", "1 2:2", "--w", "2",
                       "--degree", "0")
    assert code == 0
    assert "b0 = 2" in out


def test_betti_permutohedron(capsys):
    code, out, _ = run(capsys, "betti", "--kind", "perm", "--n", "3", "--w", "2",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["betti"] == [1, 1]


def test_betti_needs_a_label_set(capsys):
    code, _, err = run(capsys, "betti", "--w", "2")
    assert code == 2
    assert "error:" in err


def test_betti_resource_refusal(capsys):
    code, _, err = run(capsys, "betti", "--n", "6", "--w", "3",
                       "--max-cells", "10")
    assert code == 3
    assert "refused:" in err


def test_missing_required_width_exits_via_argparse():
    with pytest.raises(SystemExit):
        main(["betti", "--n", "3"])


# ---------------------------------------------------------------------------
# verify


def test_verify_boundary(capsys):
    code, out, _ = run(capsys, "verify", "--scope", "boundary", "--n", "3",
                       "--w", "2")
    assert code == 0
    assert "all checks passed" in out


def test_verify_relations(capsys):
    code, out, _ = run(capsys, "verify", "--scope", "relations", "--w", "2")
    assert code == 0
    assert "FAIL" not in out


def test_verify_basis_one_degree(capsys):
    code, out, _ = run(capsys, "verify", "--scope", "basis", "--n", "3",
                       "--w", "2", "--degree", "1", "--style", "am",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert "7 words, betti 7" in payload["checks"][0]["name"]


def test_verify_decomposition(capsys):
    code, out, _ = run(capsys, "verify", "--scope", "decomposition", "--n", "3",
                       "--w", "2")
    assert code == 0
    assert "6 sectors" in out


def test_verify_generation(capsys):
    code, out, _ = run(capsys, "verify", "--scope", "generation", "--k", "1",
                       "--w", "2")
    assert code == 0


def test_verify_generation_needs_k(capsys):
    code, _, err = run(capsys, "verify", "--scope", "generation", "--w", "2")
    assert code == 2
    assert "error:" in err


# ---------------------------------------------------------------------------
# reduce


def test_reduce_swap(capsys):
    code, out, _ = run(capsys, "reduce", "--word", "W(3)|W(2,1)", "--w", "3")
    assert code == 0
    assert "W(2,1)|W(3)" in out


def test_reduce_json(capsys):
    code, out, _ = run(capsys, "reduce", "--word", "W(3)|W(2,1)", "--w", "3",
                       "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["terms"] == [{"coefficient": "1", "word": "W(2,1)|W(3)"}]


def test_reduce_trivial_filter_prints_zero(capsys):
    code, out, _ = run(capsys, "reduce", "--word", "AF(W(1),W(2),W(3))",
                       "--w", "3")
    assert code == 0
    assert out.strip() == "0"


def test_reduce_with_act(capsys):
    code, out, _ = run(capsys, "reduce", "--word", "W(2,1)", "--w", "2",
                       "--act", "(1 2)", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["terms"] == [{"coefficient": "1", "word": "W(2,1)"}]
    assert payload["act"] == "(1 2)"


def test_reduce_with_quotient(capsys):
    code, out, _ = run(capsys, "reduce", "--word", "W(3)|W(2,1)", "--w", "3",
                       "--quotient", "1")
    assert code == 0
    assert out.strip() == "0"


def test_reduce_rejects_improper_wheel(capsys):
    code, _, err = run(capsys, "reduce", "--word", "W(1,2)", "--w", "2")
    assert code == 2
    assert "improper" in err


def test_reduce_rejects_syntax_errors(capsys):
    code, _, err = run(capsys, "reduce", "--word", "garbage", "--w", "2")
    assert code == 2
    assert "error:" in err


# ---------------------------------------------------------------------------
# stability


def test_stability_first_order(capsys):
    code, out, _ = run(capsys, "stability", "--k", "5", "--w", "4")
    assert code == 0
    assert "b=1, FI-width 2, generation degree 10" in out


def test_stability_higher_order(capsys):
    code, out, _ = run(capsys, "stability", "--k", "3", "--w", "4",
                       "--order", "2")
    assert code == 0
    assert "b=3, FIW(2)-width 4, generation degree 11" in out


def test_stability_with_check(capsys):
    code, out, _ = run(capsys, "stability", "--k", "1", "--w", "2", "--check")
    assert code == 0
    assert "ok" in out


def test_stability_rejects_narrow_strip(capsys):
    code, _, err = run(capsys, "stability", "--k", "1", "--w", "1")
    assert code == 2
    assert "error:" in err
