"""Exact integer linear algebra: sparse matrices, Smith normal form with
unimodular transforms, exact solving, and finite-abelian-group
presentations of subquotients.

All arithmetic is arbitrary-precision.  Matrices are stored sparsely as
dict-of-rows; the Smith reduction journals its elementary operations so
that rows of U, columns of U^-1 and columns of V can be replayed on
demand without ever materializing the full transform of a large matrix.

Conventions: U @ M @ V == D with U, V unimodular, D diagonal with
d_1 | d_2 | ... >= 0.  Row operations multiply on the left, column
operations on the right.  Tie-breaking is by lowest index everywhere so
results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAComplex, NotChainCompatible, SolveError


def xgcd(a: int, b: int):
    """(g, x, y) with g = gcd(a, b) >= 0 and g == x*a + y*b."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


# -- sparse vectors are plain dicts {index: nonzero int} ----------------


def vec_add_scaled(acc: dict, v: dict, scale: int = 1) -> None:
    """acc += scale * v in place, dropping zeros."""
    if scale == 0:
        return
    for i, x in v.items():
        s = acc.get(i, 0) + scale * x
        if s:
            acc[i] = s
        else:
            acc.pop(i, None)


def vec_dot(a: dict, b: dict) -> int:
    if len(a) > len(b):
        a, b = b, a
    return sum(x * b[i] for i, x in a.items() if i in b)


def vec_scale(v: dict, c: int) -> dict:
    if c == 0:
        return {}
    return {i: c * x for i, x in v.items()}


class IntMatrix:
    """Sparse integer matrix; immutable by convention after construction."""

    __slots__ = ("rows", "cols", "rowdata", "_coltable")

    def __init__(self, rows: int, cols: int, rowdata=None):
        self.rows = rows
        self.cols = cols
        self.rowdata = rowdata if rowdata is not None else {}
        self._coltable = None

    @classmethod
    def from_rows(cls, dense) -> "IntMatrix":
        rowdata = {}
        ncols = len(dense[0]) if dense else 0
        for i, row in enumerate(dense):
            d = {j: v for j, v in enumerate(row) if v}
            if d:
                rowdata[i] = d
        return cls(len(dense), ncols, rowdata)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int, scale: int = 1) -> "IntMatrix":
        return cls(n, n, {i: {i: scale} for i in range(n)} if scale else {})

    @classmethod
    def from_columns(cls, columns, rows: int) -> "IntMatrix":
        rowdata = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    rowdata.setdefault(i, {})[j] = v
        return cls(rows, len(columns), rowdata)

    def get(self, i: int, j: int) -> int:
        return self.rowdata.get(i, {}).get(j, 0)

    def row(self, i: int) -> dict:
        return self.rowdata.get(i, {})

    def column(self, j: int) -> dict:
        return {i: r[j] for i, r in self.rowdata.items() if j in r}

    def nnz(self) -> int:
        return sum(len(r) for r in self.rowdata.values())

    def is_zero(self) -> bool:
        return not self.rowdata

    def transpose(self) -> "IntMatrix":
        rowdata = {}
        for i, r in self.rowdata.items():
            for j, v in r.items():
                rowdata.setdefault(j, {})[i] = v
        return IntMatrix(self.cols, self.rows, rowdata)

    def add(self, other: "IntMatrix") -> "IntMatrix":
        assert (self.rows, self.cols) == (other.rows, other.cols)
        rowdata = {i: dict(r) for i, r in self.rowdata.items()}
        for i, r in other.rowdata.items():
            acc = rowdata.setdefault(i, {})
            vec_add_scaled(acc, r)
            if not acc:
                del rowdata[i]
        return IntMatrix(self.rows, self.cols, rowdata)

    def scale(self, c: int) -> "IntMatrix":
        if c == 0:
            return IntMatrix.zeros(self.rows, self.cols)
        return IntMatrix(self.rows, self.cols,
                         {i: {j: c * v for j, v in r.items()}
                          for i, r in self.rowdata.items()})

    def sub(self, other: "IntMatrix") -> "IntMatrix":
        return self.add(other.scale(-1))

    def matmul(self, other: "IntMatrix") -> "IntMatrix":
        assert self.cols == other.rows, f"{self.cols} != {other.rows}"
        rowdata = {}
        orows = other.rowdata
        for i, r in self.rowdata.items():
            acc = {}
            for k, v in r.items():
                br = orows.get(k)
                if br:
                    vec_add_scaled(acc, br, v)
            if acc:
                rowdata[i] = acc
        return IntMatrix(self.rows, other.cols, rowdata)

    __matmul__ = matmul

    def _column_table(self):
        if self._coltable is None:
            table = {}
            for i, r in self.rowdata.items():
                for j, v in r.items():
                    table.setdefault(j, []).append((i, v))
            self._coltable = table
        return self._coltable

    def mul_vec(self, v: dict) -> dict:
        """Matrix times sparse column vector."""
        table = self._column_table()
        acc = {}
        for j, x in v.items():
            if not x:
                continue
            for i, a in table.get(j, ()):
                s = acc.get(i, 0) + a * x
                if s:
                    acc[i] = s
                else:
                    acc.pop(i, None)
        return acc

    def to_dense(self):
        return [[self.get(i, j) for j in range(self.cols)]
                for i in range(self.rows)]

    def equals(self, other: "IntMatrix") -> bool:
        if (self.rows, self.cols) != (other.rows, other.cols):
            return False
        keys = set(self.rowdata) | set(other.rowdata)
        return all(self.rowdata.get(i, {}) == other.rowdata.get(i, {})
                   for i in keys)

    def to_triplets_text(self) -> str:
        """Plain-text dump: one 'row col value' line per nonzero entry."""
        lines = [f"{self.rows} {self.cols}"]
        for i in sorted(self.rowdata):
            r = self.rowdata[i]
            for j in sorted(r):
                lines.append(f"{i} {j} {r[j]}")
        return "\n".join(lines)

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"


# -- Smith normal form --------------------------------------------------


class SmithDecomposition:
    """Result of the Smith reduction: U @ M @ V == D.

    ``diag`` lists the positive invariant factors d_1 | d_2 | ...; the
    remaining diagonal of D is zero.  Transforms are stored as operation
    journals and replayed on demand.
    """

    def __init__(self, nrows, ncols, diag, row_journal, col_journal,
                 det_u, det_v):
        self.nrows = nrows
        self.ncols = ncols
        self.diag = tuple(diag)
        self.rank = len(self.diag)
        self._row_journal = row_journal
        self._col_journal = col_journal
        self.det_u = det_u
        self.det_v = det_v

    # Journal replay.  Batched: one pass over the journal updates every
    # requested vector, touching only vectors that hold an affected index.

    def u_rows(self, indices):
        """Rows of U as sparse dicts, keyed by requested index."""
        vecs = {i: {i: 1} for i in indices}
        occ = {}
        for i in indices:
            occ.setdefault(i, set()).add(i)

        def move(h, frm, to, val):
            occ[frm].discard(h)
            if val:
                occ.setdefault(to, set()).add(h)

        for op in reversed(self._row_journal):
            kind = op[0]
            if kind == "add":          # row_a += q*row_b  =>  w[b] += q*w[a]
                _, a, b, q = op
                for h in list(occ.get(a, ())):
                    w = vecs[h]
                    s = w.get(b, 0) + q * w[a]
                    had = b in w
                    if s:
                        w[b] = s
                        if not had:
                            occ.setdefault(b, set()).add(h)
                    elif had:
                        del w[b]
                        occ[b].discard(h)
            elif kind == "swap":
                _, a, b = op
                for h in list(occ.get(a, set()) | occ.get(b, set())):
                    w = vecs[h]
                    va, vb = w.pop(a, 0), w.pop(b, 0)
                    occ.get(a, set()).discard(h)
                    occ.get(b, set()).discard(h)
                    if vb:
                        w[a] = vb
                        occ.setdefault(a, set()).add(h)
                    if va:
                        w[b] = va
                        occ.setdefault(b, set()).add(h)
            elif kind == "neg":
                _, a = op
                for h in occ.get(a, ()):
                    vecs[h][a] = -vecs[h][a]
            else:                       # g2: rows (a,b) <- (x a + y b, u a + v b)
                _, a, b, x, y, u, v = op
                for h in list(occ.get(a, set()) | occ.get(b, set())):
                    w = vecs[h]
                    va, vb = w.get(a, 0), w.get(b, 0)
                    na, nb = va * x + vb * u, va * y + vb * v
                    for idx, val, had in ((a, na, va != 0), (b, nb, vb != 0)):
                        if val:
                            w[idx] = val
                            if not had:
                                occ.setdefault(idx, set()).add(h)
                        elif had:
                            del w[idx]
                            occ[idx].discard(h)
        return vecs

    def _replay_cols(self, journal, indices, inverse):
        """Columns of U^-1 (row journal, inverse=True) or of V (column
        journal, inverse=False)."""
        vecs = {j: {j: 1} for j in indices}
        occ = {}
        for j in indices:
            occ.setdefault(j, set()).add(j)
        for op in reversed(journal):
            kind = op[0]
            if kind == "add":
                _, a, b, q = op
                if inverse:   # row_a += q*row_b: w[a] -= q*w[b]
                    src, dst, s = b, a, -q
                else:         # col_a += q*col_b: w[b] += q*w[a]
                    src, dst, s = a, b, q
                for h in list(occ.get(src, ())):
                    w = vecs[h]
                    val = w.get(dst, 0) + s * w[src]
                    had = dst in w
                    if val:
                        w[dst] = val
                        if not had:
                            occ.setdefault(dst, set()).add(h)
                    elif had:
                        del w[dst]
                        occ[dst].discard(h)
            elif kind == "swap":
                _, a, b = op
                for h in list(occ.get(a, set()) | occ.get(b, set())):
                    w = vecs[h]
                    va, vb = w.pop(a, 0), w.pop(b, 0)
                    occ.get(a, set()).discard(h)
                    occ.get(b, set()).discard(h)
                    if vb:
                        w[a] = vb
                        occ.setdefault(a, set()).add(h)
                    if va:
                        w[b] = va
                        occ.setdefault(b, set()).add(h)
            elif kind == "neg":
                _, a = op
                for h in occ.get(a, ()):
                    vecs[h][a] = -vecs[h][a]
            else:
                _, a, b, x, y, u, v = op
                if inverse:   # inverse of [[x,y],[u,v]] is [[v,-y],[-u,x]]
                    ca, cb, cc, cd = v, -y, -u, x
                else:         # column version acts on column vectors directly
                    ca, cb, cc, cd = x, u, y, v
                for h in list(occ.get(a, set()) | occ.get(b, set())):
                    w = vecs[h]
                    va, vb = w.get(a, 0), w.get(b, 0)
                    na, nb = ca * va + cb * vb, cc * va + cd * vb
                    for idx, val, had in ((a, na, va != 0), (b, nb, vb != 0)):
                        if val:
                            w[idx] = val
                            if not had:
                                occ.setdefault(idx, set()).add(h)
                        elif had:
                            del w[idx]
                            occ[idx].discard(h)
        return vecs

    def uinv_cols(self, indices):
        return self._replay_cols(self._row_journal, indices, inverse=True)

    def v_cols(self, indices):
        return self._replay_cols(self._col_journal, indices, inverse=False)

    # Full materializations, for small matrices and the reconstruction tests.

    @property
    def U(self) -> IntMatrix:
        rows = self.u_rows(range(self.nrows))
        return IntMatrix(self.nrows, self.nrows,
                         {i: r for i, r in rows.items() if r})

    @property
    def Uinv(self) -> IntMatrix:
        cols = self.uinv_cols(range(self.nrows))
        return IntMatrix.from_columns([cols[j] for j in range(self.nrows)],
                                      self.nrows)

    @property
    def V(self) -> IntMatrix:
        cols = self.v_cols(range(self.ncols))
        return IntMatrix.from_columns([cols[j] for j in range(self.ncols)],
                                      self.ncols)

    @property
    def D(self) -> IntMatrix:
        return IntMatrix(self.nrows, self.ncols,
                         {i: {i: d} for i, d in enumerate(self.diag)})

    def diagonal(self):
        full = list(self.diag) + [0] * (min(self.nrows, self.ncols) - self.rank)
        return full

    def invariant_factors(self):
        """Nontrivial torsion of the cokernel Z^m / im(M)."""
        return [d for d in self.diag if d > 1]


def smith_normal_form(mat: IntMatrix) -> SmithDecomposition:
    """Smith normal form by fraction-free elimination.

    Pivots are chosen to minimize (|value|, fill estimate, row, col);
    the fill estimate is (row nnz - 1) * (col nnz - 1).  Lowest index
    wins ties, so the decomposition is deterministic.
    """
    m, n = mat.rows, mat.cols
    rows = {i: dict(r) for i, r in mat.rowdata.items()}
    colocc = {}
    for i, r in rows.items():
        for j in r:
            colocc.setdefault(j, set()).add(i)
    rj, cj = [], []
    det = [1, 1]   # det U, det V

    def set_entry(i, j, v):
        r = rows.get(i)
        if v:
            if r is None:
                rows[i] = {j: v}
            else:
                r[j] = v
            colocc.setdefault(j, set()).add(i)
        elif r is not None and j in r:
            del r[j]
            if not r:
                del rows[i]
            colocc[j].discard(i)

    def row_swap(a, b):
        if a == b:
            return
        ra, rb = rows.pop(a, {}), rows.pop(b, {})
        if rb:
            rows[a] = rb
        if ra:
            rows[b] = ra
        for j in set(ra) | set(rb):
            s = colocc[j]
            ina, inb = j in ra, j in rb
            s.discard(a)
            s.discard(b)
            if inb:
                s.add(a)
            if ina:
                s.add(b)
        rj.append(("swap", a, b))
        det[0] = -det[0]

    def row_addmul(a, b, q):
        # row_a += q * row_b
        if q == 0:
            return
        rb = rows.get(b, {})
        for j, v in list(rb.items()):
            set_entry(a, j, rows.get(a, {}).get(j, 0) + q * v)
        rj.append(("add", a, b, q))

    def row_neg(a):
        for j, v in rows.get(a, {}).items():
            rows[a][j] = -v
        rj.append(("neg", a))
        det[0] = -det[0]

    def row_gcd2(a, b, x, y, u, v):
        # rows (a, b) <- (x a + y b, u a + v b) with x v - y u == 1
        ra, rb = rows.get(a, {}), rows.get(b, {})
        for j in set(ra) | set(rb):
            va, vb = ra.get(j, 0), rb.get(j, 0)
            set_entry(a, j, x * va + y * vb)
            set_entry(b, j, u * va + v * vb)
        rj.append(("g2", a, b, x, y, u, v))

    def col_swap(a, b):
        if a == b:
            return
        for i in list(colocc.get(a, set()) | colocc.get(b, set())):
            r = rows[i]
            va, vb = r.pop(a, 0), r.pop(b, 0)
            colocc.get(a, set()).discard(i)
            colocc.get(b, set()).discard(i)
            if vb:
                r[a] = vb
                colocc.setdefault(a, set()).add(i)
            if va:
                r[b] = va
                colocc.setdefault(b, set()).add(i)
        cj.append(("swap", a, b))
        det[1] = -det[1]

    def col_addmul(a, b, q):
        # col_a += q * col_b
        if q == 0:
            return
        for i in list(colocc.get(b, set())):
            set_entry(i, a, rows[i].get(a, 0) + q * rows[i][b])
        cj.append(("add", a, b, q))

    def col_gcd2(a, b, x, y, u, v):
        # cols (a, b) <- (x a + y b, u a + v b) with x v - y u == 1
        for i in list(colocc.get(a, set()) | colocc.get(b, set())):
            r = rows[i]
            va, vb = r.get(a, 0), r.get(b, 0)
            set_entry(i, a, x * va + y * vb)
            set_entry(i, b, u * va + v * vb)
        cj.append(("g2", a, b, x, y, u, v))

    def choose_pivot(k):
        best = None
        for i, r in rows.items():
            if i < k:
                continue
            rl = len(r)
            for j, v in r.items():
                if j < k:
                    continue
                a = abs(v)
                fill = (rl - 1) * (len(colocc[j]) - 1)
                key = (a, fill, i, j)
                if best is None or key < best:
                    best = key
                    if a == 1 and fill == 0:
                        return best[2], best[3]
        return None if best is None else (best[2], best[3])

    k = 0
    limit = min(m, n)
    while k < limit:
        p = choose_pivot(k)
        if p is None:
            break
        row_swap(p[0], k)
        col_swap(p[1], k)
        # Alternate clearing the pivot column (row ops) and the pivot row
        # (column ops) until both are clear; dividing entries use a plain
        # subtraction, others a 2x2 Bezout combination that lands the gcd
        # on the pivot.
        while True:
            for r in sorted(colocc.get(k, set())):
                if r == k:
                    continue
                a = rows[k][k]
                b = rows[r].get(k, 0)
                if b == 0:
                    continue
                if b % a == 0:
                    row_addmul(r, k, -(b // a))
                else:
                    g, x, y = xgcd(a, b)
                    row_gcd2(k, r, x, y, -(b // g), a // g)
            if all(j == k for j in rows.get(k, {})):
                break
            for c in sorted(rows.get(k, {})):
                if c == k:
                    continue
                a = rows[k][k]
                b = rows[k].get(c, 0)
                if b == 0:
                    continue
                if b % a == 0:
                    col_addmul(c, k, -(b // a))
                else:
                    g, x, y = xgcd(a, b)
                    col_gcd2(k, c, x, y, -(b // g), a // g)
            if colocc.get(k, set()) == {k}:
                break
        k += 1

    rank = k
    for i in range(rank):
        if rows[i][i] < 0:
            row_neg(i)

    # Enforce the divisibility chain d_i | d_j for i < j.
    while True:
        bad = None
        for i in range(rank - 1):
            di = rows[i][i]
            for j in range(i + 1, rank):
                if rows[j][j] % di:
                    bad = (i, j)
                    break
            if bad:
                break
        if bad is None:
            break
        i, j = bad
        col_addmul(i, j, 1)               # (j, i) becomes d_j
        a, b = rows[i][i], rows[j][i]
        g, x, y = xgcd(a, b)
        row_gcd2(i, j, x, y, -(b // g), a // g)
        spill = rows[i].get(j, 0)
        if spill:
            # every entry of the 2x2 block is a multiple of the new gcd
            col_addmul(j, i, -(spill // rows[i][i]))
        if rows[i][i] < 0:
            row_neg(i)
        if rows[j][j] < 0:
            row_neg(j)

    diag = [rows[i][i] for i in range(rank)]
    return SmithDecomposition(m, n, diag, rj, cj, det[0], det[1])


# -- solving and kernels ------------------------------------------------


def solve(mat: IntMatrix, b: dict, snf: SmithDecomposition = None):
    """A particular integer solution of mat @ x == b.

    Raises SolveError when no solution exists, carrying a certificate:
    the offending row functional u of U (so u @ mat is d * e_i or zero)
    together with the incompatible value u @ b and the modulus d.
    """
    if snf is None:
        snf = smith_normal_form(mat)
    urows = snf.u_rows(range(snf.nrows))
    y = {}
    for i in range(snf.nrows):
        ci = vec_dot(urows[i], b)
        if i < snf.rank:
            d = snf.diag[i]
            if ci % d:
                err = SolveError(
                    f"no integral solution: row functional {i} gives {ci}, "
                    f"not divisible by invariant factor {d}")
                err.certificate = {"functional": urows[i], "value": ci,
                                   "modulus": d}
                raise err
            if ci:
                y[i] = ci // d
        elif ci:
            err = SolveError(
                f"no solution: row functional {i} gives {ci}, expected 0")
            err.certificate = {"functional": urows[i], "value": ci,
                               "modulus": 0}
            raise err
    x = {}
    vcols = snf.v_cols(sorted(y))
    for i, yi in y.items():
        vec_add_scaled(x, vcols[i], yi)
    return x


def kernel_basis(mat: IntMatrix, snf: SmithDecomposition = None):
    """Columns spanning ker(mat) as a saturated lattice."""
    if snf is None:
        snf = smith_normal_form(mat)
    idx = list(range(snf.rank, snf.ncols))
    cols = snf.v_cols(idx)
    return [cols[j] for j in idx]


def in_image(mat: IntMatrix, b: dict, snf: SmithDecomposition = None) -> bool:
    try:
        solve(mat, b, snf=snf)
        return True
    except SolveError:
        return False


# -- abelian group presentations ----------------------------------------


class AbelianGroupPresentation:
    """A subquotient (cycles mod boundaries) of an ambient Z^n.

    Internally: a basis of the cycle lattice, coordinate functionals for
    it, and one modulus per basis vector.  Modulus d > 1 is a torsion
    generator, d == 1 a coordinate that is pure boundary, d == 0 a free
    generator.  Lift and project are exact; project refuses non-cycles.
    """

    def __init__(self, ambient_dim, mods, coord_rows, cycle_basis):
        self.ambient_dim = ambient_dim
        self.mods = tuple(mods)
        self.coord_rows = coord_rows          # list of sparse row dicts
        self.cycle_basis = cycle_basis        # list of sparse column dicts
        self.gen_positions = tuple(i for i, d in enumerate(self.mods) if d != 1)

    @property
    def invariant_factors(self):
        return tuple(d for d in self.mods if d > 1)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.mods if d == 0)

    def order(self):
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def gen_mods(self):
        return tuple(self.mods[i] for i in self.gen_positions)

    def generators(self):
        return [self.cycle_basis[i] for i in self.gen_positions]

    def cycle_coords(self, v: dict):
        """Coordinates of v in the cycle basis, or None if v is not a cycle."""
        c = [vec_dot(row, v) for row in self.coord_rows]
        recon = {}
        for ci, basis in zip(c, self.cycle_basis):
            vec_add_scaled(recon, basis, ci)
        return c if recon == {i: x for i, x in v.items() if x} else None

    def is_cycle(self, v: dict) -> bool:
        return self.cycle_coords(v) is not None

    def project(self, v: dict):
        """Abstract coordinates of the class of a cycle v."""
        c = self.cycle_coords(v)
        if c is None:
            raise NotChainCompatible("vector is not a cycle", witness=v)
        out = []
        for i in self.gen_positions:
            d = self.mods[i]
            out.append(c[i] % d if d else c[i])
        return tuple(out)

    def lift(self, abstract) -> dict:
        assert len(abstract) == len(self.gen_positions)
        v = {}
        for x, i in zip(abstract, self.gen_positions):
            vec_add_scaled(v, self.cycle_basis[i], x)
        return v

    def is_boundary(self, v: dict) -> bool:
        c = self.cycle_coords(v)
        if c is None:
            return False
        for ci, d in zip(c, self.mods):
            if d == 0:
                if ci:
                    return False
            elif ci % d:
                return False
        return True

    def boundary_basis(self):
        out = []
        for i, d in enumerate(self.mods):
            if d >= 1:
                out.append(vec_scale(self.cycle_basis[i], d)
                           if d > 1 else dict(self.cycle_basis[i]))
        return out

    def zero_class(self):
        return tuple(0 for _ in self.gen_positions)

    def reduce_abstract(self, vec):
        out = []
        for x, i in zip(vec, self.gen_positions):
            d = self.mods[i]
            out.append(x % d if d else x)
        return tuple(out)

    def __repr__(self):
        tors = ",".join(str(d) for d in self.invariant_factors)
        return (f"AbelianGroupPresentation(Z^{self.free_rank}"
                f"{' + ' if tors and self.free_rank else ''}"
                f"{'Z/' + tors if tors else ('0' if not self.free_rank else '')})")


def presentation_from_boundaries(d_in: IntMatrix) -> AbelianGroupPresentation:
    """Presentation of saturation(im d_in) / im(d_in).

    Callers are responsible for knowing that the cycle lattice they care
    about equals the saturation of the boundary lattice (for Tate
    cohomology this is certified by the contracting-homotopy identity).
    """
    snf = smith_normal_form(d_in)
    r = snf.rank
    urows = snf.u_rows(range(r))
    ucols = snf.uinv_cols(range(r))
    return AbelianGroupPresentation(
        ambient_dim=d_in.rows,
        mods=list(snf.diag),
        coord_rows=[urows[i] for i in range(r)],
        cycle_basis=[ucols[i] for i in range(r)],
    )


def subquotient(d_out: IntMatrix, d_in: IntMatrix) -> AbelianGroupPresentation:
    """Presentation of ker(d_out) / im(d_in), checking d_out @ d_in == 0."""
    assert d_out.cols == d_in.rows, "ambient dimensions disagree"
    comp = d_out.matmul(d_in)
    if not comp.is_zero():
        j = min(j for r in comp.rowdata.values() for j in r)
        raise NotAComplex(f"d_out @ d_in != 0 at column {j}", witness=j)
    n = d_in.rows
    out_snf = smith_normal_form(d_out)
    kbasis = kernel_basis(d_out, out_snf)
    k = len(kbasis)
    kmat = IntMatrix.from_columns(kbasis, n)
    ksnf = smith_normal_form(kmat)
    assert all(d == 1 for d in ksnf.diag) and ksnf.rank == k, \
        "kernel basis should span a saturated lattice"
    # Coordinate functionals for the kernel lattice: R = V * U[:k].
    urows = ksnf.u_rows(range(k))
    umat = IntMatrix(k, n, {i: urows[i] for i in range(k) if urows[i]})
    vcols = ksnf.v_cols(range(k))
    vmat = IntMatrix.from_columns([vcols[j] for j in range(k)], k)
    rmat = vmat.matmul(umat)
    # Boundaries in kernel coordinates.
    ycols = []
    for j in range(d_in.cols):
        col = d_in.column(j)
        ycols.append(rmat.mul_vec(col))
    ymat = IntMatrix.from_columns(ycols, k)
    ysnf = smith_normal_form(ymat)
    ry = ysnf.rank
    mods = list(ysnf.diag) + [0] * (k - ry)
    yurows = ysnf.u_rows(range(k))
    coord = IntMatrix(k, k, {i: yurows[i] for i in range(k) if yurows[i]})
    coord_rows_mat = coord.matmul(rmat)
    yucols = ysnf.uinv_cols(range(k))
    basis = [kmat.mul_vec(yucols[i]) for i in range(k)]
    return AbelianGroupPresentation(
        ambient_dim=n,
        mods=mods,
        coord_rows=[coord_rows_mat.row(i) for i in range(k)],
        cycle_basis=basis,
    )


def induced_map(f: IntMatrix, src: AbelianGroupPresentation,
                dst: AbelianGroupPresentation) -> IntMatrix:
    """Matrix of the map induced by f on subquotients, in generator
    coordinates, after checking f maps cycles to cycles and boundaries
    to boundaries."""
    assert f.cols == src.ambient_dim and f.rows == dst.ambient_dim
    for b in src.cycle_basis:
        if not dst.is_cycle(f.mul_vec(b)):
            raise NotChainCompatible(
                "map sends a cycle to a non-cycle", witness=b)
    for b in src.boundary_basis():
        if not dst.is_boundary(f.mul_vec(b)):
            raise NotChainCompatible(
                "map sends a boundary to a non-boundary", witness=b)
    cols = []
    for i in src.gen_positions:
        w = f.mul_vec(src.cycle_basis[i])
        cols.append({r: x for r, x in enumerate(dst.project(w)) if x})
    return IntMatrix.from_columns(cols, len(dst.gen_positions))


# -- maps between groups in invariant coordinates -----------------------


@dataclass(frozen=True)
class FinAb:
    """A finitely generated abelian group given by per-generator moduli
    (d > 1 torsion, 0 free)."""

    mods: tuple

    @property
    def ngens(self):
        return len(self.mods)

    def order(self):
        if any(d == 0 for d in self.mods):
            return None
        out = 1
        for d in self.mods:
            out *= d
        return out

    def reduce(self, vec):
        return tuple(x % d if d else x for x, d in zip(vec, self.mods))

    def is_finite(self):
        return all(d > 0 for d in self.mods)


def fin_ab_of(pres: AbelianGroupPresentation) -> FinAb:
    return FinAb(pres.gen_mods)


def direct_sum(*groups: FinAb) -> FinAb:
    mods = []
    for g in groups:
        mods.extend(g.mods)
    return FinAb(tuple(mods))


def stack_abstract_maps(maps, targets):
    """Block-stack abstract matrices sharing a source: target is the
    direct sum of the individual targets."""
    total_rows = sum(t.ngens for t in targets)
    cols = None
    rowdata = {}
    offset = 0
    for mat, tgt in zip(maps, targets):
        if cols is None:
            cols = mat.cols
        assert mat.cols == cols
        for i, r in mat.rowdata.items():
            rowdata[offset + i] = dict(r)
        offset += tgt.ngens
    return IntMatrix(total_rows, cols if cols is not None else 0, rowdata)


def concat_abstract_maps(maps, sources):
    """Block-concatenate abstract matrices sharing a target: source is
    the direct sum of the individual sources."""
    total_cols = sum(s.ngens for s in sources)
    rows = maps[0].rows if maps else 0
    rowdata = {}
    offset = 0
    for mat, srcg in zip(maps, sources):
        assert mat.rows == rows
        for i, r in mat.rowdata.items():
            acc = rowdata.setdefault(i, {})
            for j, v in r.items():
                acc[offset + j] = v
        offset += srcg.ngens
    return IntMatrix(rows, total_cols, rowdata)


def is_surjective_map(mat: IntMatrix, target: FinAb):
    """Whether the subgroup generated by the columns of mat is all of
    the finite target.  Returns (flag, certificate diag)."""
    assert target.is_finite(), "surjectivity test needs a finite target"
    t = target.ngens
    rowdata = {i: dict(r) for i, r in mat.rowdata.items()}
    for i, d in enumerate(target.mods):
        rowdata.setdefault(i, {})[mat.cols + i] = d
    stacked = IntMatrix(t, mat.cols + t, rowdata)
    snf = smith_normal_form(stacked)
    ok = snf.rank == t and all(d == 1 for d in snf.diag)
    return ok, snf.diagonal()


def kernel_subgroup(mat: IntMatrix, source: FinAb, target: FinAb):
    """The kernel of the map source -> target given by mat, as
    (invariant factors, generator vectors in source coordinates).

    The source must be finite.  Empty invariants mean the map is
    injective.
    """
    assert source.is_finite(), "kernel computation needs a finite source"
    L, T = source.ngens, target.ngens
    # Solutions of mat @ x == 0 modulo the target relations.
    rowdata = {i: dict(r) for i, r in mat.rowdata.items()}
    extra = 0
    for i, d in enumerate(target.mods):
        if d > 0:
            rowdata.setdefault(i, {})[L + extra] = d
            extra += 1
    stacked = IntMatrix(T, L + extra, rowdata)
    sols = kernel_basis(stacked)
    lat_gens = [{i: v for i, v in s.items() if i < L} for s in sols]
    # The solution lattice always contains the source relation lattice.
    for i, d in enumerate(source.mods):
        lat_gens.append({i: d})
    gmat = IntMatrix.from_columns(lat_gens, L)
    gsnf = smith_normal_form(gmat)
    r = gsnf.rank
    assert r == L, "solution lattice should have full rank over a finite source"
    ucols = gsnf.uinv_cols(range(r))
    lat_basis = [vec_scale(ucols[i], gsnf.diag[i]) for i in range(r)]
    # Express the source relations in that basis; the quotient is the kernel.
    urows = gsnf.u_rows(range(r))
    ycols = []
    for i, d in enumerate(source.mods):
        c = {}
        for t in range(r):
            val = urows[t].get(i, 0) * d
            if val:
                assert val % gsnf.diag[t] == 0
                c[t] = val // gsnf.diag[t]
        ycols.append(c)
    ymat = IntMatrix.from_columns(ycols, r)
    ysnf = smith_normal_form(ymat)
    invs = []
    gens = []
    yucols = ysnf.uinv_cols(range(ysnf.rank))
    for t in range(ysnf.rank):
        d = ysnf.diag[t]
        if d > 1:
            invs.append(d)
            g = {}
            for pos, val in yucols[t].items():
                vec_add_scaled(g, lat_basis[pos], val)
            gens.append(source.reduce([g.get(i, 0) for i in range(L)]))
    assert ysnf.rank == r, "kernel of a finite-source map must be finite"
    return invs, gens


def is_injective_map(mat: IntMatrix, source: FinAb, target: FinAb):
    invs, _ = kernel_subgroup(mat, source, target)
    return not invs, invs
