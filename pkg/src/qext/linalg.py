"""Exact dense linear algebra over the rationals or a prime field.

Scalars are raw values (fractions.Fraction for the rationals, small ints for
GF(p)); a Field object supplies the arithmetic.  Everything is deterministic:
pivoting always takes the first nonzero entry scanning rows top to bottom and
columns left to right, so repeated runs give bit-identical bases.  Basis
vectors are rows of a Matrix.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DimensionMismatch, FieldSpecError


class Rationals:
    """Exact rational field; elements are Fraction."""

    name = "rationals"

    def of(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into the rationals")

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        return a / b

    def is_zero(self, a):
        return a == 0

    def to_str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("rationals")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """Integers mod p for a prime p; elements are ints in range(p)."""

    def __init__(self, p):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise FieldSpecError(f"{p} is not prime")
        self.p = p
        self.name = f"gf({p})"

    def of(self, x):
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            return (x.numerator % self.p) * self.inv(x.denominator % self.p) % self.p
        if isinstance(x, str):
            return self.of(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into GF({self.p})")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a % self.p == 0

    def to_str(self, a):
        return str(a % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("gf", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = Rationals()


def field_from_spec(spec):
    """Resolve a field choice string: 'rationals' (default) or a prime like '7'."""
    if spec is None or spec.strip().lower() in ("", "rationals", "qq", "q"):
        return QQ
    s = spec.strip().lower()
    if s.startswith("gf(") and s.endswith(")"):
        s = s[3:-1]
    try:
        p = int(s)
    except ValueError:
        raise FieldSpecError(f"unrecognized field spec {spec!r}")
    return PrimeField(p)


class Matrix:
    """Dense matrix with exact entries; rows are lists."""

    __slots__ = ("field", "nrows", "ncols", "data")

    def __init__(self, field, data, ncols=None):
        self.field = field
        self.data = [list(row) for row in data]
        self.nrows = len(self.data)
        if self.nrows:
            self.ncols = len(self.data[0])
            if any(len(r) != self.ncols for r in self.data):
                raise DimensionMismatch("ragged rows")
        else:
            if ncols is None:
                raise DimensionMismatch("empty matrix needs an explicit column count")
            self.ncols = ncols

    @classmethod
    def zeros(cls, field, m, n):
        z = field.zero
        return cls(field, [[z] * n for _ in range(m)], ncols=n)

    @classmethod
    def identity(cls, field, n):
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @classmethod
    def from_rows(cls, field, rows, ncols):
        return cls(field, rows, ncols=ncols)

    def copy(self):
        return Matrix(self.field, self.data, ncols=self.ncols)

    def row(self, i):
        return list(self.data[i])

    def transpose(self):
        t = [[self.data[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        return Matrix(self.field, t, ncols=self.nrows)

    def mul(self, other):
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"({self.nrows}x{self.ncols}) * ({other.nrows}x{other.ncols})")
        f = self.field
        out = Matrix.zeros(f, self.nrows, other.ncols)
        for i in range(self.nrows):
            arow = self.data[i]
            orow = out.data[i]
            for k in range(self.ncols):
                a = arow[k]
                if f.is_zero(a):
                    continue
                brow = other.data[k]
                for j in range(other.ncols):
                    b = brow[j]
                    if not f.is_zero(b):
                        orow[j] = f.add(orow[j], f.mul(a, b))
        return out

    def apply(self, vec):
        if len(vec) != self.ncols:
            raise DimensionMismatch("vector length mismatch")
        f = self.field
        out = []
        for i in range(self.nrows):
            s = f.zero
            row = self.data[i]
            for j, v in enumerate(vec):
                if not f.is_zero(v):
                    s = f.add(s, f.mul(row[j], v))
            out.append(s)
        return out

    def add(self, other):
        self._same_shape(other)
        f = self.field
        return Matrix(f, [[f.add(a, b) for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.data, other.data)], ncols=self.ncols)

    def sub(self, other):
        self._same_shape(other)
        f = self.field
        return Matrix(f, [[f.sub(a, b) for a, b in zip(r1, r2)]
                          for r1, r2 in zip(self.data, other.data)], ncols=self.ncols)

    def scale(self, c):
        f = self.field
        return Matrix(f, [[f.mul(c, a) for a in row] for row in self.data], ncols=self.ncols)

    def neg(self):
        f = self.field
        return Matrix(f, [[f.neg(a) for a in row] for row in self.data], ncols=self.ncols)

    def is_zero(self):
        f = self.field
        return all(f.is_zero(a) for row in self.data for a in row)

    def _same_shape(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise DimensionMismatch("shape mismatch")

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.data == other.data)

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols})"


def vstack(field, mats, ncols):
    rows = []
    for m in mats:
        rows.extend(m.data)
    return Matrix.from_rows(field, rows, ncols)


def rref(mat):
    """Reduced row echelon form; returns (R, pivot column tuple)."""
    r, _, piv = _rref_transform(mat, want_transform=False)
    return r, piv


def rref_with_transform(mat):
    """Returns (R, T, pivots) with T * mat == R and T invertible."""
    r, t, piv = _rref_transform(mat, want_transform=True)
    return r, t, piv


def _rref_transform(mat, want_transform):
    f = mat.field
    m = [list(row) for row in mat.data]
    nrows, ncols = mat.nrows, mat.ncols
    t = [[f.one if i == j else f.zero for j in range(nrows)] for i in range(nrows)] \
        if want_transform else None
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if not f.is_zero(m[i][c]):
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            m[r], m[pr] = m[pr], m[r]
            if t is not None:
                t[r], t[pr] = t[pr], t[r]
        inv = f.inv(m[r][c])
        m[r] = [f.mul(inv, x) for x in m[r]]
        if t is not None:
            t[r] = [f.mul(inv, x) for x in t[r]]
        for i in range(nrows):
            if i == r:
                continue
            factor = m[i][c]
            if f.is_zero(factor):
                continue
            m[i] = [f.sub(a, f.mul(factor, b)) for a, b in zip(m[i], m[r])]
            if t is not None:
                t[i] = [f.sub(a, f.mul(factor, b)) for a, b in zip(t[i], t[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    R = Matrix.from_rows(f, m, ncols)
    T = Matrix.from_rows(f, t, nrows) if t is not None else None
    return R, T, tuple(pivots)


def row_space(mat):
    """Echelon basis of the row space (nonzero rows of the rref)."""
    r, piv = rref(mat)
    return Matrix.from_rows(mat.field, r.data[: len(piv)], mat.ncols)


def image(mat):
    """Echelon basis of the column space, as rows."""
    return row_space(mat.transpose())


def kernel(mat):
    """Echelon basis of the right kernel {x : mat x = 0}, as rows."""
    f = mat.field
    r, piv = rref(mat)
    pivset = set(piv)
    free = [c for c in range(mat.ncols) if c not in pivset]
    rows = []
    for fcol in free:
        v = [f.zero] * mat.ncols
        v[fcol] = f.one
        for k, pcol in enumerate(piv):
            v[pcol] = f.neg(r.data[k][fcol])
        rows.append(v)
    basis = Matrix.from_rows(f, rows, mat.ncols)
    return row_space(basis)


def solve(mat, rhs):
    """One solution x of mat x = rhs (free coordinates 0), or None."""
    f = mat.field
    aug = Matrix.from_rows(f, [row + [b] for row, b in zip(mat.data, rhs)]
                           if mat.nrows else [], mat.ncols + 1)
    if mat.nrows == 0:
        return [f.zero] * mat.ncols
    r, piv = rref(aug)
    if mat.ncols in piv:
        return None
    x = [f.zero] * mat.ncols
    for k, pcol in enumerate(piv):
        x[pcol] = r.data[k][mat.ncols]
    return x


def complement(u, v=None):
    """Direct complement of the row space of u inside v (ambient if v is None).

    Picks standard coordinates at the non-pivot positions of u's echelon
    basis; with an explicit v the same rule is applied to the coordinates of
    u relative to v's rows.
    """
    f = u.field
    if v is None:
        _, piv = rref(u)
        pivset = set(piv)
        rows = []
        for c in range(u.ncols):
            if c not in pivset:
                e = [f.zero] * u.ncols
                e[c] = f.one
                rows.append(e)
        return Matrix.from_rows(f, rows, u.ncols)
    coords = Echelonizer(v)
    urows = []
    for i in range(u.nrows):
        c = coords.coordinates(u.row(i))
        if c is None:
            raise DimensionMismatch("u is not contained in v")
        urows.append(c)
    ucoord = Matrix.from_rows(f, urows, v.nrows)
    comp_coord = complement(ucoord)
    return comp_coord.mul(v) if comp_coord.nrows else Matrix.from_rows(f, [], v.ncols)


def intersect(u, w):
    """Echelon basis of the intersection of two row spaces."""
    f = u.field
    if u.ncols != w.ncols:
        raise DimensionMismatch("ambient dimension mismatch")
    if u.nrows == 0 or w.nrows == 0:
        return Matrix.from_rows(f, [], u.ncols)
    # kernel of [u^T | -w^T]: pairs (a, b) with a*u = b*w.
    stacked = Matrix.from_rows(
        f,
        [u.transpose().data[i] + [f.neg(x) for x in w.transpose().data[i]]
         for i in range(u.ncols)],
        u.nrows + w.nrows,
    )
    ker = kernel(stacked)
    rows = []
    for i in range(ker.nrows):
        a = ker.row(i)[: u.nrows]
        vec = [f.zero] * u.ncols
        for k, coeff in enumerate(a):
            if not f.is_zero(coeff):
                urow = u.data[k]
                vec = [f.add(x, f.mul(coeff, y)) for x, y in zip(vec, urow)]
        rows.append(vec)
    return row_space(Matrix.from_rows(f, rows, u.ncols))


def subspace(mode, *args):
    """Dispatcher covering kernel | image | complement | intersect | solve."""
    ops = {"kernel": kernel, "image": image, "complement": complement,
           "intersect": intersect, "solve": solve}
    if mode not in ops:
        raise ValueError(f"unknown subspace mode {mode!r}")
    return ops[mode](*args)


class Echelonizer:
    """Cached echelon data for a fixed row family; answers membership and coordinates."""

    def __init__(self, basis_matrix):
        self.field = basis_matrix.field
        self.basis = basis_matrix
        self.rref, self.transform, self.pivots = rref_with_transform(basis_matrix)
        self.rank = len(self.pivots)

    def coordinates(self, vec):
        """Coefficients c with c * basis == vec, or None if vec is outside the span."""
        f = self.field
        v = list(vec)
        reds = [f.zero] * self.basis.nrows
        for k, p in enumerate(self.pivots):
            c = v[p]
            if f.is_zero(c):
                continue
            reds[k] = c
            row = self.rref.data[k]
            v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        if any(not f.is_zero(a) for a in v):
            return None
        # reds expresses vec over the rref rows; pull back through the transform.
        out = [f.zero] * self.basis.nrows
        for k, c in enumerate(reds):
            if f.is_zero(c):
                continue
            trow = self.transform.data[k]
            out = [f.add(a, f.mul(c, b)) for a, b in zip(out, trow)]
        return out

    def contains(self, vec):
        return self.coordinates(vec) is not None

    def reduce(self, vec):
        """Residue of vec after eliminating all pivot coordinates."""
        f = self.field
        v = list(vec)
        for k, p in enumerate(self.pivots):
            c = v[p]
            if not f.is_zero(c):
                row = self.rref.data[k]
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return v
