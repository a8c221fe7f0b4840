import pytest

from qext.an_family import FamilyParams, build_family
from qext.ext import ExtTable
from qext.merkulov import build_end_dg, make_splitting, transfer
from qext.presentations import build_algebra, dual_extension, parse_presentation


def family_pres(n, ell):
    return build_family(FamilyParams(n, ell))


def linear_quiver(n, name=None):
    lines = [f"algebra A{n}" if name is None else f"algebra {name}", f"vertices {n}"]
    for i in range(1, n):
        lines.append(f"arrow a{i}: {i} -> {i+1}")
    return parse_presentation("\n".join(lines))


@pytest.fixture(scope="session")
def alg_a2():
    return build_algebra(linear_quiver(2))


@pytest.fixture(scope="session")
def lamb_a2():
    pres = linear_quiver(2)
    return build_algebra(dual_extension(pres, pres))


@pytest.fixture(scope="session")
def alg_53():
    return build_algebra(family_pres(5, 3))


@pytest.fixture(scope="session")
def table_53(alg_53):
    return ExtTable(alg_53, "simples", 8)


@pytest.fixture(scope="session")
def ops_53(table_53):
    return transfer(make_splitting(build_end_dg(table_53)), 6)


@pytest.fixture(scope="session")
def lamb_53():
    pres = family_pres(5, 3)
    return build_algebra(dual_extension(pres, pres))


@pytest.fixture(scope="session")
def ltable_53(lamb_53):
    return ExtTable(lamb_53, "standards", 8)


@pytest.fixture(scope="session")
def lops_53(ltable_53):
    b_split = make_splitting(build_end_dg(ltable_53.b_table))
    l_split = make_splitting(build_end_dg(ltable_53), mode="compatible",
                             b_splitting=b_split)
    return transfer(l_split, 6)


@pytest.fixture(scope="session")
def bops_53(lops_53):
    return transfer(lops_53.splitting.b_splitting, 6)
