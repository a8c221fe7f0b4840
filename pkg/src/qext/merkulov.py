"""A-infinity structure by homotopy transfer on the End complex of resolutions.

The dg algebra D has blocks D^d(i,j) = (+)_k Hom(P_i^k, P_j^{k-d}) with
differential D(f) = d f - (-1)^{|f|} f d.  A splitting per block reads
D = H (+) im D (+) L with H spanned by the cached chain-map lifts of the Ext
basis, im D spanned by the boundaries of the L-rows one degree down (which
makes the homotopy h a table lookup), and L an echelon complement of the
cycles.  The transferred products are

    h lam_1 := -id,   lam_2 := composition,
    lam_n := sum_{r+s=n} (-1)^{s+1} lam_2(h lam_r (x) h lam_s),
    m_n := p lam_n i^{(x)n}.

Sign conventions, validated by the Stasheff suite together with the
closed-form products of the truncated-A_n family (see TENSOR_SIGN_MODE
below for the documented alternatives):
  * the recursion is evaluated literally, with no extra Koszul factor in
    lam_2(h lam_r (x) h lam_s);
  * odd-degree classes embed with a minus sign (Splitting._h_scale), the
    A-infinity isomorphism m_n -> (-1)^n m_n;
  * the Stasheff identity is sum (-1)^{r+st} m_{r+1+t}(1^r (x) m_s (x) 1^t)
    = 0 with Koszul evaluation (1^r (x) m_s (x) 1^t)(a_1...a_n) =
    (-1)^{s(|a_1|+...+|a_r|)} (a_1, ..., m_s(...), ..., a_n).
Argument tuples are stored in acting order (index 0 acts first); the
paper's written order m_n(a_n, ..., a_1) is the reverse.
"""

from __future__ import annotations

from .chains import DgElement
from .errors import PreconditionError, WindowExceeded
from .ext import ExtClassVec
from .linalg import Matrix, kernel, row_space, complement
from .modules import induce_map


class EndDg:
    """Block data of End(P^*) for the family of resolutions behind an ExtTable."""

    def __init__(self, table, window=None):
        self.table = table
        self.field = table.field
        self.n = table.n
        self.window = window
        self.all_complete = all(table.resolutions[i].complete
                                for i in range(1, self.n + 1))
        if not self.all_complete:
            if window is None:
                raise PreconditionError(
                    "truncated resolutions need an explicit window")
            short = [i for i in range(1, self.n + 1)
                     if table.resolutions[i].cutoff < window + 2]
            if short:
                raise PreconditionError(
                    f"cutoff must be >= window + 2; too short for {short}")
        self._levels = {}
        self._boundaries = {}

    def in_window(self, d):
        # one degree of slack: the splitting at degree d needs the boundary
        # matrix into d + 1, so the trustworthy band is |d| <= window
        return self.all_complete or abs(d) <= self.window + 1

    def block_levels(self, i, j, d):
        """[(level k, TermHomBasis, offset)] and the total block dimension."""
        key = (i, j, d)
        if key in self._levels:
            return self._levels[key]
        if not self.in_window(d):
            raise WindowExceeded(f"degree {d} outside the materialized window")
        res_i = self.table.resolutions[i]
        res_j = self.table.resolutions[j]
        levels = []
        offset = 0
        for k in range(max(0, d), min(res_i.computed, res_j.computed + d) + 1):
            hb = self.table.hom_basis(i, k, j, k - d)
            if hb.dim:
                levels.append((k, hb, offset))
                offset += hb.dim
        out = (levels, offset)
        self._levels[key] = out
        return out

    def to_vector(self, el, i, j, d):
        f = self.field
        levels, total = self.block_levels(i, j, d)
        vec = [f.zero] * total
        seen = set()
        for k, hb, off in levels:
            seen.add(k)
            comp = el.comps.get(k)
            if comp is None:
                continue
            coords = hb.coordinates(comp)
            vec[off:off + hb.dim] = coords
        for k in el.comps:
            if k not in seen:
                raise AssertionError(f"component at level {k} outside the block")
        return vec

    def from_vector(self, i, j, d, vec):
        f = self.field
        levels, _total = self.block_levels(i, j, d)
        comps = {}
        for k, hb, off in levels:
            coords = vec[off:off + hb.dim]
            if any(not f.is_zero(c) for c in coords):
                comps[k] = hb.from_coordinates(coords)
        return DgElement(self.table.resolutions[i], self.table.resolutions[j], d, comps)

    def boundary_matrix(self, i, j, d):
        """Matrix of D: block (i,j,d) -> block (i,j,d+1), columns = basis images."""
        key = (i, j, d)
        if key in self._boundaries:
            return self._boundaries[key]
        f = self.field
        levels, total = self.block_levels(i, j, d)
        _levels2, total2 = self.block_levels(i, j, d + 1)
        mat = Matrix.zeros(f, total2, total)
        col = 0
        for k, hb, _off in levels:
            for m in hb.maps:
                el = DgElement(self.table.resolutions[i], self.table.resolutions[j],
                               d, {k: m})
                img = self.to_vector(el.boundary(), i, j, d + 1)
                for r, val in enumerate(img):
                    mat.data[r][col] = val
                col += 1
        self._boundaries[key] = mat
        return mat


class SplitBlock:
    """One block of the splitting D = H (+) im D (+) L with homotopy data."""

    __slots__ = ("dim", "h_rows", "h_keys", "b_rows", "l_rows", "spur_rows",
                 "preimages", "ech", "counts")

    def __init__(self, dim, h_rows, h_keys, b_rows, l_rows, spur_rows, preimages, ech):
        self.dim = dim
        self.h_rows = h_rows
        self.h_keys = h_keys
        self.b_rows = b_rows
        self.l_rows = l_rows
        self.spur_rows = spur_rows
        self.preimages = preimages   # one lower L row per b_row
        self.ech = ech
        self.counts = (len(h_rows), len(spur_rows), len(b_rows), len(l_rows))


class Splitting:
    """D = H (+) im D (+) L, blockwise, with h and p.

    mode 'plain' picks L as the echelon complement of the cycles; mode
    'compatible' seeds L with the F-images of a Borel-side splitting's L and
    extends, realizing the compatible decomposition of a dual extension.
    """

    def __init__(self, endg, mode="plain", b_splitting=None, perturb_h=None):
        self.endg = endg
        self.table = endg.table
        self.field = endg.field
        self.mode = mode
        self.b_splitting = b_splitting
        self.perturb_h = perturb_h or {}
        if mode == "compatible":
            if b_splitting is None or self.table.b_table is None:
                raise PreconditionError(
                    "compatible mode needs a Borel-side splitting over a dual extension")
            if b_splitting.table is not self.table.b_table:
                raise PreconditionError(
                    "the Borel-side splitting must be over this table's B side")
        elif mode != "plain":
            raise PreconditionError(f"unknown splitting mode {mode!r}")
        self._blocks = {}

    def _h_scale(self, key):
        """Sign normalization of the embedded representatives.

        Odd-degree classes enter with a minus sign: the A-infinity
        isomorphism m_n -> (-1)^n m_n, fixed so the transferred products
        reproduce the closed-form family values on the nose.  perturb_h
        composes on top (used by tests to realize alternative splittings).
        """
        f = self.field
        scale = f.neg(f.one) if key[2] % 2 else f.one
        extra = self.perturb_h.get(key)
        if extra is not None:
            scale = f.mul(scale, f.of(extra))
        return scale

    # -- construction -------------------------------------------------------

    def block(self, i, j, d):
        key = (i, j, d)
        if key in self._blocks:
            return self._blocks[key]
        f = self.field
        endg = self.endg
        levels, total = endg.block_levels(i, j, d)
        if total == 0:
            blk = SplitBlock(0, [], [], [], [], [], [], None)
            self._blocks[key] = blk
            return blk
        dmat = endg.boundary_matrix(i, j, d)
        zmat = kernel(dmat)
        # boundaries: images of the lower block's L rows (D is injective on L)
        lower = self.block(i, j, d - 1) if self._lower_exists(i, j, d - 1) else None
        b_rows, preimages = [], []
        if lower is not None and lower.l_rows:
            lowmat = endg.boundary_matrix(i, j, d - 1)
            for lrow in lower.l_rows:
                img = lowmat.apply(lrow)
                assert any(not f.is_zero(x) for x in img), "D vanished on an L row"
                b_rows.append(img)
                preimages.append(lrow)
        # homology representatives: cached lifts of the Ext basis, normalized
        h_rows, h_keys = [], []
        for idx, lift in self._h_lifts(i, j, d):
            vec = endg.to_vector(lift, i, j, d)
            scale = self._h_scale((i, j, d, idx))
            if scale != f.one:
                vec = [f.mul(scale, x) for x in vec]
            h_rows.append(vec)
            h_keys.append((i, j, d, idx))
        # L: complement of the cycles, compatible mode seeds with F(L^B)
        seeded = self._seed_l_rows(i, j, d)
        zl = Matrix.from_rows(f, list(zmat.data) + seeded, total)
        lhat = complement(row_space(zl) if seeded else zmat)
        l_rows = seeded + [lhat.row(m) for m in range(lhat.nrows)]
        spur_rows = []
        stacked = Matrix.from_rows(f, h_rows + b_rows + l_rows, total)
        rank = row_space(stacked).nrows
        expected = len(h_rows) + len(b_rows) + len(l_rows)
        if rank != expected:
            raise PreconditionError(
                f"splitting block ({i},{j},{d}) is not a direct sum")
        if rank < total:
            if endg.all_complete:
                raise PreconditionError(
                    f"homology of End exceeds Ext at ({i},{j},{d}): "
                    "this indicates an internal inconsistency")
            spur = complement(stacked)
            spur_rows = [spur.row(m) for m in range(spur.nrows)]
        from .linalg import Echelonizer
        ech = Echelonizer(Matrix.from_rows(
            f, h_rows + spur_rows + b_rows + l_rows, total))
        blk = SplitBlock(total, h_rows, h_keys, b_rows, l_rows, spur_rows,
                         preimages, ech)
        self._blocks[key] = blk
        return blk

    def _lower_exists(self, i, j, d):
        try:
            _levels, total = self.endg.block_levels(i, j, d)
        except WindowExceeded:
            return False
        return total > 0

    def _h_lifts(self, i, j, d):
        if d < 0:
            return []
        table = self.table
        res = table.resolutions[i]
        if d > res.computed:
            return []
        out = []
        for idx in range(table.dim(i, j, d)):
            out.append((idx, table.lift_basis((i, j, d, idx))))
        return out

    def _seed_l_rows(self, i, j, d):
        if self.mode != "compatible":
            return []
        bsplit = self.b_splitting
        bendg = bsplit.endg
        try:
            _lv, btotal = bendg.block_levels(i, j, d)
        except WindowExceeded:
            return []
        if btotal == 0:
            return []
        bblk = bsplit.block(i, j, d)
        out = []
        for lrow in bblk.l_rows:
            bel = bendg.from_vector(i, j, d, lrow)
            lel = self.induce_element(bel, i, j, d)
            out.append(self.endg.to_vector(lel, i, j, d))
        return out

    def induce_element(self, bel, i, j, d):
        """F on a Borel-side End element, rebased onto the induced resolutions."""
        table = self.table
        res_i, res_j = table.resolutions[i], table.resolutions[j]
        comps = {}
        for t, comp in bel.comps.items():
            fmap = induce_map(table.alg, comp,
                              fm=res_i.fterms[t], fn=res_j.fterms[t - d])
            comps[t] = res_j.isos[t - d].compose(fmap).compose(res_i.iso_invs[t])
        return DgElement(res_i, res_j, d, comps)

    # -- operators ----------------------------------------------------------

    def decompose(self, el, i, j, d):
        blk = self.block(i, j, d)
        if blk.dim == 0:
            assert el.is_zero()
            return blk, []
        vec = self.endg.to_vector(el, i, j, d)
        coords = blk.ech.coordinates(vec)
        assert coords is not None, "element escaped its block"
        return blk, coords

    def h(self, el, i, j, d):
        """Zero on H (+) L, the L-valued inverse of D on boundaries."""
        f = self.field
        blk, coords = self.decompose(el, i, j, d)
        nh, nspur, nb, _nl = blk.counts
        out_vec = None
        for m in range(nb):
            c = coords[nh + nspur + m]
            if f.is_zero(c):
                continue
            row = blk.preimages[m]
            if out_vec is None:
                out_vec = [f.mul(c, x) for x in row]
            else:
                out_vec = [f.add(a, f.mul(c, x)) for a, x in zip(out_vec, row)]
        if out_vec is None:
            return DgElement(self.table.resolutions[i], self.table.resolutions[j],
                             d - 1, {})
        return self.endg.from_vector(i, j, d - 1, out_vec)

    def p(self, el, i, j, d):
        """Ext coefficients of the H component; spurious support is an error."""
        f = self.field
        blk, coords = self.decompose(el, i, j, d)
        nh, nspur, _nb, _nl = blk.counts
        for m in range(nh, nh + nspur):
            if not f.is_zero(coords[m]):
                raise WindowExceeded(
                    "projection hit truncation homology; result unknown")
        out = {}
        for m in range(nh):
            if not f.is_zero(coords[m]):
                out[blk.h_keys[m][3]] = coords[m]
        return ExtClassVec(i, j, d, out)

    def i_elem(self, key):
        lift = self.table.lift_basis(key)
        scale = self._h_scale(key)
        if scale == self.field.one:
            return lift
        return lift.scale(scale)


def build_end_dg(table, window=None):
    return EndDg(table, window=window)


def make_splitting(endg, mode="plain", b_splitting=None, perturb_h=None):
    return Splitting(endg, mode=mode, b_splitting=b_splitting, perturb_h=perturb_h)


class AInfOps:
    """Transferred products m_n on the Ext basis, with validity bookkeeping.

    Tuples are in acting order.  An entry whose intermediates left the
    materialized window is recorded as None (unknown), never as zero.
    """

    def __init__(self, splitting, max_arity):
        if max_arity < 2:
            raise PreconditionError("max_arity must be >= 2")
        self.splitting = splitting
        self.table = splitting.table
        self.field = splitting.field
        self.max_arity = max_arity
        self._lam = {}
        self._hlam = {}
        self._m = {}

    # -- recursion ----------------------------------------------------------

    def _composable(self, keys):
        for a, b in zip(keys, keys[1:]):
            if a[1] != b[0]:
                return False
        return True

    def _degsum(self, keys):
        return sum(k[2] for k in keys)

    def lam(self, keys):
        """lambda_n on a composable acting-order tuple of basis keys, n >= 2."""
        keys = tuple(keys)
        if keys in self._lam:
            return self._lam[keys]
        n = len(keys)
        assert n >= 2 and self._composable(keys)
        split = self.splitting
        if n == 2:
            out = split.i_elem(keys[1]).compose(split.i_elem(keys[0]))
        else:
            out = None
            for s in range(1, n):
                left = keys[s:]      # acts later: goes through h lam_r
                right = keys[:s]     # acts first: goes through h lam_s
                hl = self.hlam(left)
                if hl.is_zero():
                    continue
                hr = self.hlam(right)
                if hr.is_zero():
                    continue
                term = hl.compose(hr)
                sign = 1 if (s + 1) % 2 == 0 else -1
                if (_tensor_sign_exponent(s, self._degsum(left))) % 2 != 0:
                    sign = -sign
                if sign < 0:
                    term = term.neg()
                out = term if out is None else out.add(term)
            if out is None:
                i, j = keys[0][0], keys[-1][1]
                out = DgElement(self.table.resolutions[i],
                                self.table.resolutions[j],
                                self._degsum(keys) + 2 - n, {})
        self._lam[keys] = out
        return out

    def hlam(self, keys):
        keys = tuple(keys)
        if keys in self._hlam:
            return self._hlam[keys]
        if len(keys) == 1:
            out = self.splitting.i_elem(keys[0]).neg()
        else:
            el = self.lam(keys)
            i, j = keys[0][0], keys[-1][1]
            d = self._degsum(keys) + 2 - len(keys)
            out = self.splitting.h(el, i, j, d)
        self._hlam[keys] = out
        return out

    def m_basis(self, keys):
        """m_n on basis keys: coefficient dict over the target cell, or None."""
        keys = tuple(keys)
        if keys in self._m:
            return self._m[keys]
        n = len(keys)
        if n < 2 or n > self.max_arity:
            raise PreconditionError(f"arity {n} outside 2..{self.max_arity}")
        if not self._composable(keys):
            out = {}
        else:
            i, j = keys[0][0], keys[-1][1]
            d = self._degsum(keys) + 2 - n
            try:
                el = self.lam(keys)
                if el.is_zero():
                    out = {}
                else:
                    out = self.splitting.p(el, i, j, d).coeffs
            except WindowExceeded:
                out = None
        self._m[keys] = out
        return out

    def m_vec(self, vecs):
        """Multilinear m_n on class vectors (acting order); None when any
        contributing basis entry is unknown."""
        f = self.field
        n = len(vecs)
        i, j = vecs[0].i, vecs[-1].j
        d = sum(v.k for v in vecs) + 2 - n
        total = ExtClassVec(i, j, d, {})
        stack = [((), f.one)]
        for v in vecs:
            nxt = []
            for keys, coeff in stack:
                for idx, c in v.coeffs.items():
                    nxt.append((keys + ((v.i, v.j, v.k, idx),), f.mul(coeff, c)))
            stack = nxt
        for keys, coeff in stack:
            if f.is_zero(coeff):
                continue
            entry = self.m_basis(keys)
            if entry is None:
                return None
            part = ExtClassVec(i, j, d, entry).scale(coeff, f)
            total = total.add(part, f)
        return total

    # -- enumeration ---------------------------------------------------------

    def composable_tuples(self, arity, positive_only=False):
        keys = self.table.basis_keys()
        if positive_only:
            keys = [k for k in keys if k[2] > 0]
        by_source = {}
        for k in keys:
            by_source.setdefault(k[0], []).append(k)
        out = []

        def extend(prefix):
            if len(prefix) == arity:
                out.append(tuple(prefix))
                return
            for k in by_source.get(prefix[-1][1], []):
                prefix.append(k)
                extend(prefix)
                prefix.pop()

        for k in keys:
            extend([k])
        return out

    def entries(self, arities=None):
        """All transferred products on composable basis tuples, with validity."""
        arities = arities or range(2, self.max_arity + 1)
        for n in arities:
            for keys in self.composable_tuples(n):
                coeffs = self.m_basis(keys)
                yield {"arity": n, "inputs": list(keys), "valid": coeffs is not None,
                       "output": coeffs if coeffs is not None else {}}


def transfer(splitting, max_arity):
    return AInfOps(splitting, max_arity)


# Sign-convention toggles.  The recursion's printed form leaves the tensor
# evaluation rule open; the pair below is the one validated by the Stasheff
# suite together with the closed-form family products at both parities of
# the radical exponent.  Alternatives kept for re-derivation:
# TENSOR_SIGN_MODE in {"hlam", "lam", "none"} inserts the Koszul factor with
# the degree of h lam_s (1-s), of lam_s (2-s), or none; with "hlam" the
# family's m_l comes out as (-1)^{l+1} times the closed form, with "none"
# plus the odd-representative normalization in Splitting it is exact.
# STASHEFF_SIGN in {"r+st", "rs+t"}.
TENSOR_SIGN_MODE = "none"
STASHEFF_SIGN = "r+st"


def _tensor_sign_exponent(s, left_degree):
    if TENSOR_SIGN_MODE == "hlam":
        return (1 - s) * left_degree
    if TENSOR_SIGN_MODE == "lam":
        return (2 - s) * left_degree
    return 0


def verify_stasheff(ops, max_arity=None, tuples=None):
    """Check sum (-1)^{r+st} m_{r+1+t}(1^r (x) m_s (x) 1^t) = 0 on basis tuples.

    Identities involving out-of-window intermediates are skipped and counted.
    """
    f = ops.field
    table = ops.table
    max_arity = max_arity or ops.max_arity
    report = {"checked": 0, "skipped": 0, "violations": []}
    for n in range(2, max_arity + 1):
        pool = tuples[n] if tuples else ops.composable_tuples(n)
        for t_acting in pool:
            degsum = sum(k[2] for k in t_acting)
            i, j = t_acting[0][0], t_acting[-1][1]
            out_deg = degsum + 3 - n
            total = ExtClassVec(i, j, out_deg, {})
            skipped = False
            for s in range(2, n + 1):
                outer = n - s + 1
                if outer == 1:
                    continue  # outer m_1 vanishes on a minimal model
                for r in range(0, n - s + 1):
                    t = n - s - r
                    # inner block: written positions r+1..r+s
                    inner_act = t_acting[t: t + s]
                    inner = ops.m_basis(inner_act)
                    if inner is None:
                        skipped = True
                        break
                    if not inner:
                        continue
                    if STASHEFF_SIGN == "r+st":
                        sign = 1 if (r + s * t) % 2 == 0 else -1
                    else:
                        sign = 1 if (r * s + t) % 2 == 0 else -1
                    koszul = sum(k[2] for k in t_acting[t + s:])
                    if (s * koszul) % 2 != 0:
                        sign = -sign
                    ii, jj = inner_act[0][0], inner_act[-1][1]
                    kk = sum(k[2] for k in inner_act) + 2 - s
                    for idx, c in inner.items():
                        keys = t_acting[:t] + ((ii, jj, kk, idx),) + t_acting[t + s:]
                        part = ops.m_basis(keys)
                        if part is None:
                            skipped = True
                            break
                        coeff = f.mul(f.of(sign), c)
                        total = total.add(
                            ExtClassVec(i, j, out_deg, part).scale(coeff, f), f)
                    if skipped:
                        break
                if skipped:
                    break
            if skipped:
                report["skipped"] += 1
                continue
            report["checked"] += 1
            if not total.is_zero():
                report["violations"].append(
                    {"tuple": [list(k) for k in t_acting], "residue": str(total)})
    report["ok"] = not report["violations"]
    return report


def shortcut_standard_mn(lamb_ops, b_ops, inputs):
    """Evaluate m_n on factored standard classes f' F(eps) through the B side.

    inputs: acting-order list of (fprime, eps_key): fprime is a Hom class
    vector of the Lambda table (or None for the identity), eps_key a basis key
    of the B-side table.  Radical middle factors give zero; scalar middle
    factors are extracted; the last factor's fprime is composed at the end:

        m_n = (-1)^{n+1} f'_n F(p^B(i(eps_n) . h^B(lam^B_{n-1}(eps_{n-1},...))))

    with i and p the (sign-normalized) embedding and projection of the
    Borel-side splitting; the normalizations cancel, leaving the literal
    prefactor, and the shortcut agrees with the direct transfer on the nose.
    """
    table = lamb_ops.table
    if table.b_table is None:
        raise PreconditionError("the shortcut needs a dual-extension table")
    f = table.field
    n = len(inputs)
    if n < 2:
        raise PreconditionError("the shortcut needs arity >= 2")
    eps_keys = tuple(eps for _fp, eps in inputs)
    i = eps_keys[0][0]
    last_fp = inputs[-1][0]
    j_mid = eps_keys[-1][1]
    j = last_fp.j if last_fp is not None else j_mid
    d = sum(k[2] for k in eps_keys) + 2 - n
    zero = ExtClassVec(i, j, d, {})
    # middle dressings: radical parts kill the product, scalars come out front
    scalar = f.one
    for fprime, _eps in inputs[:-1]:
        if fprime is None:
            continue
        if fprime.k != 0:
            raise PreconditionError("factored form needs degree-0 dressings")
        if fprime.i != fprime.j:
            return zero
        id_idx = table.identity_key(fprime.i)[3]
        scalar = f.mul(scalar, fprime.coeffs.get(id_idx, f.zero))
    if f.is_zero(scalar):
        return zero
    hl = b_ops.hlam(eps_keys[:-1])
    comp = b_ops.splitting.i_elem(eps_keys[-1]).compose(hl)
    try:
        bclass = b_ops.splitting.p(comp, i, j_mid, d)
    except WindowExceeded:
        return None
    lclass = table.induced_class(bclass)
    sign = f.one if (n + 1) % 2 == 0 else f.neg(f.one)
    out = lclass.scale(f.mul(sign, scalar), f)
    if last_fp is not None:
        out = _yoneda_vec(table, last_fp, out)
    return out


def _yoneda_vec(table, a, b):
    f = table.field
    out = ExtClassVec(b.i, a.j, a.k + b.k, {})
    for aidx, ac in a.coeffs.items():
        for bidx, bc in b.coeffs.items():
            prod = table.yoneda(table.unit_class((a.i, a.j, a.k, aidx)),
                                table.unit_class((b.i, b.j, b.k, bidx)))
            out = out.add(prod.scale(f.mul(ac, bc), f), f)
    return out
