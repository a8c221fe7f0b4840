"""Regular exact Borel data from the A-infinity structure on Ext(Delta, Delta).

The quiver of B-hat has one arrow per Ext^1(Delta_i, Delta_j) basis element;
its relations are the image of the summed dualized higher multiplications
D m_n : D Ext^2 -> (+)_n (D Ext^1)^{(x)_L n}, read as linear combinations of
paths.  Tensors over the vertex semisimple are realized as composable pure
tensors, i.e. paths.  The Morita companion's projective multiplicities come
from decomposing each induced projective R (x) P-hat(i) against the
Delta-filtration multiplicities of the Lambda-projectives, a unitriangular
integer system.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import PreconditionError, WindowExceeded
from .linalg import Matrix, rref
from .presentations import AlgebraPresentation, Arrow, Path, Quiver, Relation


class BoxPresentation:
    """Quiver and relations of B-hat plus multiplicity data for R."""

    def __init__(self, pres, arrow_keys, relation_report):
        self.pres = pres
        self.arrow_keys = arrow_keys          # arrow name -> Ext^1 basis key
        self.relation_report = relation_report
        self.c_matrix = None                  # filled by decompose_all
        self.t_vector = None

    def __repr__(self):
        return f"BoxPresentation({self.pres.name}, arrows={len(self.arrow_keys)})"


def borel_quiver(table):
    """Vertices = standard indices; one arrow i -> j per Ext^1(D_i, D_j) basis element."""
    arrows = []
    arrow_keys = {}
    n = table.n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            d = table.dim(i, j, 1)
            for idx in range(d):
                nm = f"b{i}_{j}" + (f"_{idx}" if d > 1 else "")
                arrows.append(Arrow(nm, i, j))
                arrow_keys[nm] = (i, j, 1, idx)
    return Quiver(n, arrows), arrow_keys


def borel_relations(table, ops, quiver, arrow_keys, max_arity=None):
    """Relation list spanning im(sum_n D m_n), echelonized, denominators cleared."""
    f = table.field
    n = table.n
    key_of = arrow_keys
    by_source = {}
    for nm, key in key_of.items():
        by_source.setdefault(key[0], []).append(nm)

    def paths_between(i, j, arity):
        out = []

        def extend(words):
            if len(words) == arity:
                if key_of[words[-1]][1] == j:
                    out.append(tuple(words))
                return
            last_target = key_of[words[-1]][1]
            for nm in by_source.get(last_target, []):
                words.append(nm)
                extend(words)
                words.pop()

        for nm in by_source.get(i, []):
            extend([nm])
        return out

    def longest_chain(i, j):
        best = 0
        for arity in range(1, n):
            if paths_between(i, j, arity):
                best = arity
        return best

    relations = []
    report = {"cells": [], "needed_arity": 0}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            ext2 = table.dim(i, j, 2)
            if ext2 == 0:
                continue
            need = longest_chain(i, j)
            report["needed_arity"] = max(report["needed_arity"], need)
            if max_arity is not None and need > max_arity:
                raise WindowExceeded(
                    f"relations at ({i},{j}) need arity {need} > max_arity {max_arity}")
            if need > ops.max_arity:
                raise WindowExceeded(
                    f"relations at ({i},{j}) need arity {need} > transfer arity")
            all_paths = []
            for arity in range(2, need + 1):
                all_paths.extend(paths_between(i, j, arity))
            # rows indexed by D Ext^2 basis vectors, columns by paths
            rows = []
            for z in range(ext2):
                row = [f.zero] * len(all_paths)
                for c, words in enumerate(all_paths):
                    keys = tuple(key_of[nm] for nm in words)
                    out = ops.m_basis(keys)
                    if out is None:
                        raise WindowExceeded(
                            f"m_{len(keys)} unknown on {words}; enlarge the window")
                    row[c] = out.get(z, f.zero)
                rows.append(row)
            red, piv = rref(Matrix.from_rows(f, rows, len(all_paths)))
            for r in range(len(piv)):
                terms = []
                for c in range(len(all_paths)):
                    val = red.data[r][c]
                    if not f.is_zero(val):
                        words = all_paths[c]
                        src = key_of[words[0]][0]
                        tgt = key_of[words[-1]][1]
                        terms.append((val, Path(src, tgt, words)))
                terms = _clear_denominators(terms)
                relations.append(Relation(terms))
            report["cells"].append({"source": i, "target": j, "ext2_dim": ext2,
                                    "relation_count": len(piv),
                                    "paths_considered": len(all_paths)})
    return relations, report


def _clear_denominators(terms):
    dens = [Fraction(c).denominator for c, _p in terms
            if isinstance(c, (int, Fraction))]
    if not dens:
        return terms
    mult = lcm(*dens) if len(dens) > 1 else dens[0]
    return [(c * mult, p) for c, p in terms]


def compute_box(table, ops, max_arity=None, name=None):
    """B-hat presentation from the degree-1/degree-2 A-infinity data."""
    quiver, arrow_keys = borel_quiver(table)
    relations, report = borel_relations(table, ops, quiver, arrow_keys,
                                        max_arity=max_arity)
    pres = AlgebraPresentation(
        name or f"borel({table.alg.pres.name})", quiver, relations,
        mode="pathlength")
    return BoxPresentation(pres, arrow_keys, report)


def decompose_induced_projective(box, table, i, bhat_alg=None, b_alg=None):
    """Multiplicities c_{i,.} of R (x) P-hat(i) = (+)_j P_Lambda(j)^{c_ij}.

    Solves sum_j c_ij [P_Lambda(j):Delta(v)] = [P-hat(i):L(v)] where the left
    matrix is [P_B(j):L_B(v)], unitriangular for the natural order.
    """
    from .presentations import build_algebra
    if bhat_alg is None:
        bhat_alg = build_algebra(box.pres, table.field)
    if b_alg is None:
        if table.b_table is None:
            raise PreconditionError("need the dual-extension Borel subalgebra")
        b_alg = table.b_table.alg
    n = table.n
    phat = [bhat_alg.pair_dim(i, v) for v in range(1, n + 1)]
    cart = [[b_alg.pair_dim(j, v) for j in range(1, n + 1)]
            for v in range(1, n + 1)]   # cart[v-1][j-1] = [P_B(j):L(v)]
    c = [0] * n
    for v in range(1, n + 1):
        acc = phat[v - 1] - sum(c[j - 1] * cart[v - 1][j - 1] for j in range(1, v))
        diag = cart[v - 1][v - 1]
        if diag != 1:
            raise PreconditionError("Delta-multiplicity matrix is not unitriangular")
        if acc < 0:
            raise PreconditionError(
                f"negative multiplicity at ({i},{v}): upstream inconsistency")
        c[v - 1] = acc
    # consistency: the full system must be satisfied
    for v in range(1, n + 1):
        if sum(c[j - 1] * cart[v - 1][j - 1] for j in range(1, n + 1)) != phat[v - 1]:
            raise PreconditionError("inconsistent multiplicity system")
    return c


def decompose_all(box, table):
    from .presentations import build_algebra
    bhat_alg = build_algebra(box.pres, table.field)
    b_alg = table.b_table.alg if table.b_table is not None else None
    n = table.n
    c_matrix = [decompose_induced_projective(box, table, i, bhat_alg, b_alg)
                for i in range(1, n + 1)]
    box.c_matrix = c_matrix
    box.t_vector = [sum(c_matrix[i][j] for i in range(n)) for j in range(n)]
    return box.c_matrix


def morita_multiplicities(box):
    """t_j = sum_i c_ij; requires decompose_all to have run."""
    if box.t_vector is None:
        raise PreconditionError("run decompose_all first")
    return list(box.t_vector)
