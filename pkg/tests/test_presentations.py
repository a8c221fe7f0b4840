from fractions import Fraction

import pytest

from qext.errors import AdmissibilityError, NonFiniteDimensional, ParseError
from qext.linalg import PrimeField
from qext.presentations import (Path, build_algebra, compose_paths,
                                dual_extension, format_presentation, opposite,
                                parse_presentation)

from conftest import family_pres, linear_quiver


def test_parse_minimal_quiver():
    pres = parse_presentation("algebra X\nvertices 2\narrow a: 1 -> 2\n")
    assert pres.quiver.n == 2
    assert list(pres.quiver.arrows) == ["a"]
    assert not pres.relations


def test_parse_family_relation():
    pres = parse_presentation(
        "vertices 3\narrow a1: 1 -> 2\narrow a2: 2 -> 3\nrelation 1 a2*a1\n")
    rel = pres.relations[0]
    assert rel.source == 1 and rel.target == 3
    assert rel.terms[0][1].word == ("a1", "a2")  # application order


def test_parse_rejects_length_one_term():
    with pytest.raises(AdmissibilityError):
        parse_presentation("vertices 2\narrow a: 1 -> 2\nrelation 1 a\n")


def test_parse_rejects_dangling_arrow():
    with pytest.raises(ParseError):
        parse_presentation("vertices 2\narrow a: 1 -> 3\n")
    with pytest.raises(ParseError):
        parse_presentation("vertices 2\narrow a: 1 -> 2\nrelation 1 b*a\n")


def test_parse_rejects_nonparallel_relation():
    text = ("vertices 3\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 1 -> 3\n"
            "arrow d: 1 -> 2\nrelation 1 b*a + 1 d\n")
    with pytest.raises(AdmissibilityError):
        parse_presentation(text)


def test_parse_error_carries_line():
    try:
        parse_presentation("vertices 2\nfrobnicate\n")
    except ParseError as exc:
        assert exc.line == 2
    else:
        raise AssertionError("expected a parse error")


def test_format_roundtrip():
    pres = family_pres(5, 3)
    again = parse_presentation(format_presentation(pres))
    assert format_presentation(again) == format_presentation(pres)


def test_compose_paths():
    pres = linear_quiver(3)
    e1 = Path.trivial(1)
    assert compose_paths(e1, e1) == e1
    a1 = pres.path(["a1"])
    a2 = pres.path(["a2"])
    both = compose_paths(a1, a2)
    assert both.source == 1 and both.target == 3 and both.word == ("a1", "a2")
    assert compose_paths(a1, a1) is None  # vertex mismatch marks zero


def test_build_algebra_examples():
    assert build_algebra(family_pres(3, 2)).dim == 5
    assert build_algebra(linear_quiver(2)).dim == 3
    a2 = linear_quiver(2)
    lamb = build_algebra(dual_extension(a2, a2))
    assert lamb.dim == 5
    labels = {repr(p) for p in lamb.basis}
    assert labels == {"e1", "e2", "a1", "a1'", "a1'*a1"}


def test_dual_extension_presentation_shape():
    a2 = linear_quiver(2)
    pres = dual_extension(a2, a2)
    arrows = pres.quiver.arrows
    assert arrows["a1"].source == 1 and arrows["a1"].target == 2
    assert arrows["a1'"].source == 2 and arrows["a1'"].target == 1
    # the one mixed relation: a1 after a1' (the A^op arrow acts first)
    assert len(pres.relations) == 1
    assert pres.relations[0].terms[0][1].word == ("a1'", "a1")
    assert pres.mode == "borel" and pres.degree_zero == frozenset({"a1'"})


def test_dual_extension_trivial_a_is_b():
    b = family_pres(4, 3)
    trivial = parse_presentation("algebra T\nvertices 4\n")
    lamb = build_algebra(dual_extension(b, trivial))
    assert lamb.dim == build_algebra(b).dim


def test_dual_extension_dimension_count():
    """|basis(Lambda)| equals the number of composable (p, q') pairs."""
    b = family_pres(5, 3)
    lamb = build_algebra(dual_extension(b, b))
    b_alg, aop_alg = lamb.dualext_parts()
    count = 0
    for p in range(b_alg.dim):
        for q in range(aop_alg.dim):
            if aop_alg.source[q] == b_alg.target[p]:
                count += 1
    assert lamb.dim == count == 32


def test_dual_extension_vertex_mismatch():
    from qext.errors import PreconditionError
    with pytest.raises(PreconditionError):
        dual_extension(linear_quiver(2), linear_quiver(3))


def test_opposite_involution_and_dims():
    pres = family_pres(4, 3)
    opp = opposite(pres)
    assert opp.quiver.arrows["a1"].source == 2
    back = opposite(opp)
    assert format_presentation(back) == format_presentation(pres)
    assert build_algebra(opp).dim == build_algebra(pres).dim
    rel = opp.relations[0]
    assert rel.terms[0][1].word == tuple(reversed(pres.relations[0].terms[0][1].word))


def test_internal_degrees():
    a2 = linear_quiver(2)
    lamb_pres = dual_extension(a2, a2)
    lamb = build_algebra(lamb_pres)
    by_label = {repr(p): i for i, p in enumerate(lamb.basis)}
    # borel-alternate: idempotents 0, B arrows 1, A^op arrows 0
    assert lamb.degree[by_label["e1"]] == 0
    assert lamb.degree[by_label["a1"]] == 1
    assert lamb.degree[by_label["a1'"]] == 0
    assert lamb.degree[by_label["a1'*a1"]] == 1
    assert lamb.length[by_label["a1'*a1"]] == 2  # path length stays 2


def test_structure_constants_associative(alg_53, lamb_a2):
    assert alg_53.check_associativity()
    assert lamb_a2.check_associativity()
    pres = family_pres(4, 3)
    lamb = build_algebra(dual_extension(pres, pres))
    assert lamb.check_associativity()


def test_degree_additivity_when_graded(lamb_53):
    f = lamb_53.field
    assert lamb_53.graded
    for i in range(lamb_53.dim):
        for j in range(lamb_53.dim):
            for k, c in lamb_53.product(i, j).items():
                assert lamb_53.degree[k] == lamb_53.degree[i] + lamb_53.degree[j]


def test_non_finite_dimensional_detected():
    # an unbound loop never stabilizes; the enumeration cap must bite
    with pytest.raises(NonFiniteDimensional):
        build_algebra(parse_presentation("vertices 1\narrow a: 1 -> 1\n"))


def test_cycle_with_monomial_bound_is_finite():
    text = ("vertices 2\narrow a: 1 -> 2\narrow b: 2 -> 1\n"
            "relation 1 a*b*a*b\n")
    alg = build_algebra(parse_presentation(text))
    assert alg.dim == 9
    assert alg.check_associativity()


def test_prime_field_build():
    alg = build_algebra(family_pres(5, 3), PrimeField(7))
    assert alg.dim == 12
    assert alg.check_associativity()


def test_detect_dual_extension_roundtrip():
    from qext.presentations import detect_dual_extension
    pres = dual_extension(family_pres(4, 3), family_pres(4, 3))
    text = format_presentation(pres)
    rebuilt = detect_dual_extension(parse_presentation(text))
    assert rebuilt.provenance is not None
    assert rebuilt.provenance.b_arrows == pres.provenance.b_arrows
    assert rebuilt.provenance.aop_arrows == pres.provenance.aop_arrows
    lamb = build_algebra(rebuilt)
    assert lamb.dim == build_algebra(pres).dim
    # a genuinely non-dual-extension borel grading is left alone
    plain = parse_presentation(
        "vertices 2\narrow a: 1 -> 2\ngrading borel a\n")
    assert detect_dual_extension(plain).provenance is None


def test_basis_order_is_degree_length_lex(alg_53):
    keys = [(alg_53.degree[i], alg_53.length[i], alg_53.basis[i].word)
            for i in range(alg_53.dim)]
    assert keys == sorted(keys)
