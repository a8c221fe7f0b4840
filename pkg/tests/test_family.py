import pytest

from qext.an_family import (FamilyParams, OracleBasisLabel, build_family,
                            family_check, labels, oracle_ext,
                            oracle_ext_presentation, oracle_m,
                            oracle_resolution_term)
from qext.errors import PreconditionError
from qext.presentations import build_algebra


def test_params_validation():
    with pytest.raises(PreconditionError):
        FamilyParams(1, 3)
    with pytest.raises(PreconditionError):
        FamilyParams(5, 1)


def test_build_family_relation_counts():
    # A_3 has a single length-2 path, so rad^2 = 0 is one relation
    assert len(build_family(FamilyParams(3, 2)).relations) == 1
    assert len(build_family(FamilyParams(4, 2)).relations) == 2
    assert len(build_family(FamilyParams(5, 3)).relations) == 2
    assert len(build_family(FamilyParams(2, 3)).relations) == 0  # hereditary
    assert build_algebra(build_family(FamilyParams(2, 3))).dim == 3
    assert build_algebra(build_family(FamilyParams(3, 2))).dim == 5


def test_oracle_resolution_term():
    p = FamilyParams(5, 3)
    assert oracle_resolution_term(p, 1, 0) == 1
    assert oracle_resolution_term(p, 1, 2) == 4
    assert oracle_resolution_term(p, 1, 3) == 5
    assert oracle_resolution_term(p, 1, 4) is None
    assert oracle_resolution_term(p, 3, 1) == 4


def test_oracle_ext_values():
    p = FamilyParams(5, 3)
    assert oracle_ext(p, 1, 1, 0) == 1
    assert oracle_ext(p, 1, 4, 2) == 1
    assert oracle_ext(p, 1, 3, 2) == 0
    assert oracle_ext(p, 2, 5, 2) == 1
    assert oracle_ext(p, 1, 5, 3) == 1
    assert oracle_ext(p, 1, 5, 2) == 0


def test_oracle_presentation_shape():
    pres = oracle_ext_presentation(FamilyParams(5, 3))
    names = list(pres.quiver.arrows)
    assert sum(1 for nm in names if nm.startswith("e")) == 4
    assert sum(1 for nm in names if nm.startswith("d")) == 2
    assert len(pres.relations) == 3 + 1
    assert pres.arrow_degrees["e1"] == 1 and pres.arrow_degrees["d1"] == 2
    with pytest.raises(PreconditionError):
        oracle_ext_presentation(FamilyParams(5, 2))


def test_oracle_presentation_dimension_counts_words():
    """Total dimension equals the number of beta-words and alpha-beta-words."""
    p = FamilyParams(6, 3)
    alg = build_algebra(oracle_ext_presentation(p))
    expect = len(labels(p, with_identity=True))
    assert alg.dim == expect


def test_labels_and_validation():
    p = FamilyParams(5, 3)
    lbl = OracleBasisLabel(1, 1, 1)
    lbl.validate(p)
    assert lbl.degree() == 3 and lbl.target(p) == 5
    with pytest.raises(PreconditionError):
        OracleBasisLabel(2, 1, 1).validate(p)  # 2 + 3 + 1 = 6 > 5
    with pytest.raises(PreconditionError):
        OracleBasisLabel(1, 2, 0).validate(p)  # x outside {0, 1}


def test_oracle_m_values():
    p = FamilyParams(5, 3)
    a1 = OracleBasisLabel(1, 1, 0)
    a2 = OracleBasisLabel(2, 1, 0)
    a3 = OracleBasisLabel(3, 1, 0)
    out = oracle_m(p, [a1, a2, a3])
    assert out == OracleBasisLabel(1, 0, 1)        # beta_1
    b1 = OracleBasisLabel(1, 0, 1)
    a4 = OracleBasisLabel(4, 1, 0)
    assert oracle_m(p, [b1, a4]) == OracleBasisLabel(1, 1, 1)   # m2 product
    assert oracle_m(p, [a1, a2]) is None           # alpha.alpha = 0
    # mixed x-pattern at arity ell vanishes
    assert oracle_m(p, [b1, a4, OracleBasisLabel(5, 0, 0)]) is None
    # dressed variant: g' on the last slot survives
    g_dressed = OracleBasisLabel(3, 1, 0, g=1)
    out = oracle_m(p, [a1, a2, g_dressed])
    assert out == OracleBasisLabel(1, 0, 1, g=1)
    # dressing in the middle kills the product
    assert oracle_m(p, [a1, OracleBasisLabel(2, 1, 0, g=1),
                        OracleBasisLabel(4, 1, 0)]) is None


def test_oracle_m_rejects_noncomposable():
    p = FamilyParams(5, 3)
    with pytest.raises(PreconditionError):
        oracle_m(p, [OracleBasisLabel(1, 1, 0), OracleBasisLabel(3, 1, 0)])


def test_family_check_53():
    rep = family_check(FamilyParams(5, 3), cutoff=8, max_arity=5)
    assert rep["ok"], rep["failures"]
    assert rep["resolution_terms_ok"] and rep["ext_dims_ok"]
    assert rep["presentation_dims_ok"] and rep["products_ok"]


def test_family_check_63():
    rep = family_check(FamilyParams(6, 3), cutoff=8, max_arity=4)
    assert rep["ok"], rep["failures"]


def test_family_check_64():
    rep = family_check(FamilyParams(6, 4), cutoff=8, max_arity=5)
    assert rep["ok"], rep["failures"]


def test_family_check_koszul_regime():
    rep = family_check(FamilyParams(5, 2), cutoff=10, max_arity=4)
    assert rep["ok"], rep["failures"]
    assert rep["higher_vanishing_ok"]
