"""Graded maps between projective resolutions.

A DgElement of degree d from resolution P to resolution Q is a family of
module maps f_k: P^k -> Q^{k-d}; it need not be a chain map.  The dg
differential is D(f) = d f - (-1)^{|f|} f d, so chain-map representatives of
degree-k Ext classes satisfy d f = (-1)^k f d.

Hom spaces between resolution terms carry labeled bases: the maps between
shifted projectives P(v)[s] -> P(w)[t] are right multiplications by the
normal paths w -> v, one basis map per (summand, summand, path).
"""

from __future__ import annotations

from .errors import DimensionMismatch
from .linalg import Echelonizer, Matrix
from .modules import ModuleMap


class TermHomBasis:
    """Labeled basis of Hom(source term, target term) with coordinate lookup."""

    def __init__(self, alg, src_term, tgt_term):
        self.alg = alg
        self.src = src_term
        self.tgt = tgt_term
        f = alg.field
        q = alg.pres.quiver
        maps = []
        labels = []
        for s, (v, _sh, _ls) in enumerate(src_term.summands):
            for t, (w, _sh2, _ls2) in enumerate(tgt_term.summands):
                for c in alg.basis_indices(source=w, target=v):
                    blocks = {x: Matrix.zeros(f, tgt_term.module.dims[x],
                                              src_term.module.dims[x])
                              for x in q.vertices}
                    for x in q.vertices:
                        for col, (si, b) in enumerate(src_term.coords[x]):
                            if si != s:
                                continue
                            for k, coeff in alg.product(b, c).items():
                                row = tgt_term.pos[x][(t, k)]
                                blocks[x].data[row][col] = coeff
                    maps.append(ModuleMap(src_term.module, tgt_term.module, blocks))
                    labels.append((s, t, c))
        self.maps = maps
        self.labels = labels
        self.dim = len(maps)
        if maps:
            flat = Matrix.from_rows(f, [m.flatten() for m in maps],
                                    len(maps[0].flatten()))
            self._ech = Echelonizer(flat)
        else:
            self._ech = None

    def coordinates(self, mmap):
        if self.dim == 0:
            if all(b.is_zero() for b in mmap.blocks.values()):
                return []
            raise DimensionMismatch("nonzero map in a zero hom space")
        coords = self._ech.coordinates(mmap.flatten())
        if coords is None:
            raise DimensionMismatch("map is outside the labeled hom basis span")
        return coords

    def from_coordinates(self, coords):
        f = self.alg.field
        out = None
        for c, m in zip(coords, self.maps):
            if f.is_zero(c):
                continue
            scaled = m.scale(c)
            out = scaled if out is None else out.add(scaled)
        if out is None:
            return ModuleMap.zero(self.src.module, self.tgt.module)
        return out


class DgElement:
    """Degree-d family of maps between two resolutions: comps[k]: P^k -> Q^{k-d}."""

    __slots__ = ("src", "tgt", "degree", "comps")

    def __init__(self, src_res, tgt_res, degree, comps=None):
        self.src = src_res
        self.tgt = tgt_res
        self.degree = degree
        self.comps = {}
        if comps:
            for k, m in comps.items():
                if not m.is_zero():
                    self.comps[k] = m

    def is_zero(self):
        return not self.comps

    def copy_with(self, comps):
        return DgElement(self.src, self.tgt, self.degree, comps)

    def add(self, other):
        assert other.degree == self.degree and other.src is self.src and other.tgt is self.tgt
        comps = dict(self.comps)
        for k, m in other.comps.items():
            comps[k] = comps[k].add(m) if k in comps else m
        return DgElement(self.src, self.tgt, self.degree, comps)

    def scale(self, c):
        f = self.src.module.alg.field
        if f.is_zero(c):
            return DgElement(self.src, self.tgt, self.degree, {})
        return DgElement(self.src, self.tgt, self.degree,
                         {k: m.scale(c) for k, m in self.comps.items()})

    def neg(self):
        f = self.src.module.alg.field
        return self.scale(f.neg(f.one))

    def compose(self, other):
        """self o other; other maps into the source resolution of self."""
        assert other.tgt is self.src, "composition typing mismatch"
        comps = {}
        for k, g in other.comps.items():
            fk = self.comps.get(k - other.degree)
            if fk is None:
                continue
            prod = fk.compose(g)
            if not prod.is_zero():
                comps[k] = prod
        return DgElement(other.src, self.tgt, self.degree + other.degree, comps)

    def boundary(self):
        """D(f) = d f - (-1)^{|f|} f d."""
        f = self.src.module.alg.field
        sign = f.one if self.degree % 2 == 0 else f.neg(f.one)
        comps = {}
        levels = set()
        for k in self.comps:
            levels.add(k)
            levels.add(k + 1)
        for k in sorted(levels):
            parts = []
            fk = self.comps.get(k)
            if fk is not None and k - self.degree >= 1:
                d_tgt = self.tgt.diff(k - self.degree)
                parts.append(d_tgt.compose(fk))
            fk1 = self.comps.get(k - 1)
            if fk1 is not None and k >= 1 and k <= self.src.computed:
                d_src = self.src.diff(k)
                parts.append(fk1.compose(d_src).scale(f.neg(sign)))
            if not parts:
                continue
            total = parts[0]
            for p in parts[1:]:
                total = total.add(p)
            if not total.is_zero():
                comps[k] = total
        return DgElement(self.src, self.tgt, self.degree + 1, comps)

    def is_cycle(self):
        return self.boundary().is_zero()

    def __repr__(self):
        return f"DgElement(deg={self.degree}, levels={sorted(self.comps)})"


def identity_element(res):
    comps = {k: ModuleMap.identity(res.term(k).module) for k in range(res.computed + 1)
             if not res.term(k).is_zero()}
    return DgElement(res, res, 0, comps)
