"""Dense exact linear algebra over an arbitrary field.

Matrices are small immutable row-tuples of field scalars with an explicit
column count, so zero-dimensional spaces (which occur as functor levels) are
handled without ambiguity.  Maps act on column vectors: a map V -> W is an
(dim W) x (dim V) matrix and ``A.apply(v)`` computes A v.

Everything here is plain Gaussian elimination in exact arithmetic; there are
no tolerances and no pivoting heuristics beyond "first nonzero".
"""

from __future__ import annotations


class Mat:
    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows, ncols=None):
        rows = tuple(tuple(r) for r in rows)
        if rows:
            ncols = len(rows[0])
            for r in rows:
                if len(r) != ncols:
                    raise ValueError("ragged rows")
        elif ncols is None:
            raise ValueError("empty matrix needs an explicit column count")
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)]
                           for i in range(n)], ncols=n)

    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def from_cols(cls, field, cols, nrows):
        for c in cols:
            if len(c) != nrows:
                raise ValueError("column of wrong length")
        return cls(field, [[c[i] for c in cols] for i in range(nrows)],
                   ncols=len(cols))

    @classmethod
    def from_rows(cls, field, rows, ncols):
        return cls(field, rows, ncols=ncols)

    # -- algebra ------------------------------------------------------

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(
                f"shape mismatch: {self.nrows}x{self.ncols} @ "
                f"{other.nrows}x{other.ncols}")
        z = self.field.zero
        brows = other.rows
        nc = other.ncols
        out = []
        for r in self.rows:
            acc = [z] * nc
            for k, a in enumerate(r):
                if a == z:
                    continue
                brow = brows[k]
                for j in range(nc):
                    b = brow[j]
                    if b != z:
                        acc[j] = acc[j] + a * b
            out.append(acc)
        return Mat(self.field, out, ncols=nc)

    def __add__(self, other: "Mat") -> "Mat":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in addition")
        return Mat(self.field,
                   [[a + b for a, b in zip(r, s)]
                    for r, s in zip(self.rows, other.rows)],
                   ncols=self.ncols)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + other.scale(-self.field.one)

    def scale(self, s) -> "Mat":
        return Mat(self.field, [[s * a for a in r] for r in self.rows],
                   ncols=self.ncols)

    def apply(self, v):
        """Matrix times column vector (skips zero input coordinates)."""
        if len(v) != self.ncols:
            raise ValueError("vector of wrong length")
        z = self.field.zero
        out = [z] * self.nrows
        rows = self.rows
        for j, x in enumerate(v):
            if x == z:
                continue
            for i in range(self.nrows):
                a = rows[i][j]
                if a != z:
                    out[i] = out[i] + a * x
        return tuple(out)

    def power(self, e: int) -> "Mat":
        if self.nrows != self.ncols:
            raise ValueError("power of a non-square matrix")
        result = Mat.identity(self.field, self.nrows)
        base = self
        while e > 0:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def transpose(self) -> "Mat":
        return Mat(self.field,
                   [[self.rows[i][j] for i in range(self.nrows)]
                    for j in range(self.ncols)],
                   ncols=self.nrows)

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def cols(self):
        return [self.col(j) for j in range(self.ncols)]

    def hstack(self, other: "Mat") -> "Mat":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return Mat(self.field,
                   [ra + rb for ra, rb in zip(self.rows, other.rows)],
                   ncols=self.ncols + other.ncols)

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(a == z for r in self.rows for a in r)

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.field is other.field
                and self.ncols == other.ncols and self.rows == other.rows)

    def __hash__(self):
        return hash((id(self.field), self.ncols, self.rows))

    def __repr__(self):
        if not self.rows:
            return f"Mat(0x{self.ncols})"
        body = "; ".join(" ".join(str(a) for a in r) for r in self.rows)
        return f"Mat[{body}]"


# ---------------------------------------------------------------------------
# vectors (plain tuples)


def vec_zero(field, n):
    return (field.zero,) * n


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(s, a):
    return tuple(s * x for x in a)


def vec_is_zero(field, a):
    z = field.zero
    return all(x == z for x in a)


# ---------------------------------------------------------------------------
# elimination


def rref(mat: Mat, pivot_order: str = "first"):
    """Reduced row echelon form.

    With ``pivot_order="first"`` pivots are the leading nonzero entries
    (classical RREF).  With ``"last"`` the pivot of each row is its *trailing*
    nonzero entry, so elimination rewrites late columns in terms of early
    ones; quotient presentations use this to keep the earliest generators as
    canonical survivors.

    Returns (R, pivots) with R a Mat of the nonzero rows sorted by pivot
    column and pivots the matching tuple of column indices.
    """
    if pivot_order not in ("first", "last"):
        raise ValueError(pivot_order)
    field = mat.field
    n = mat.ncols
    if pivot_order == "last":
        flipped = Mat(field, [r[::-1] for r in mat.rows], ncols=n)
        r, piv = rref(flipped, "first")
        rows = [row[::-1] for row in r.rows]
        pivots = [n - 1 - p for p in piv]
        order = sorted(range(len(rows)), key=lambda i: pivots[i])
        return (Mat(field, [rows[i] for i in order], ncols=n),
                tuple(pivots[i] for i in order))

    z = field.zero
    rows = [list(r) for r in mat.rows]
    pivots = []
    pivot_row = 0
    for col in range(n):
        sel = None
        for i in range(pivot_row, len(rows)):
            if rows[i][col] != z:
                sel = i
                break
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        inv = field.one / rows[pivot_row][col]
        rows[pivot_row] = [inv * a for a in rows[pivot_row]]
        for i in range(len(rows)):
            if i != pivot_row and rows[i][col] != z:
                c = rows[i][col]
                rows[i] = [a - c * b for a, b in zip(rows[i], rows[pivot_row])]
        pivots.append(col)
        pivot_row += 1
    return Mat(field, rows[:pivot_row], ncols=n), tuple(pivots)


def rank(mat: Mat) -> int:
    return len(rref(mat)[1])


def row_space(mat: Mat) -> Mat:
    return rref(mat)[0]


def kernel(mat: Mat):
    """Basis of the right null space {v : A v = 0}, as a list of tuples."""
    field = mat.field
    r, pivots = rref(mat)
    z, o = field.zero, field.one
    free = [j for j in range(mat.ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [z] * mat.ncols
        v[f] = o
        for i, p in enumerate(pivots):
            v[p] = -r.rows[i][f]
        basis.append(tuple(v))
    return basis


def column_space(mat: Mat):
    """Basis of the column space, as a list of column vectors."""
    r, _ = rref(mat.transpose())
    return [row for row in r.rows]


def solve(mat: Mat, b):
    """One solution of A x = b, or None if inconsistent."""
    out = solve_matrix(mat, Mat.from_cols(mat.field, [b], mat.nrows))
    return None if out is None else out.col(0)


def solve_matrix(mat: Mat, rhs: Mat):
    """Solve A X = B via one augmented elimination; None if inconsistent."""
    field = mat.field
    n = mat.ncols
    aug = mat.hstack(rhs)
    r, pivots = rref(aug)
    z = field.zero
    # any pivot in the augmented block means some column is inconsistent
    if any(p >= n for p in pivots):
        return None
    cols = []
    for j in range(rhs.ncols):
        x = [z] * n
        for i, p in enumerate(pivots):
            x[p] = r.rows[i][n + j]
        cols.append(tuple(x))
    return Mat.from_cols(field, cols, n)


def inverse(mat: Mat):
    """Inverse of a square matrix, or None if singular."""
    if mat.nrows != mat.ncols:
        return None
    inv = solve_matrix(mat, Mat.identity(mat.field, mat.nrows))
    if inv is None:
        return None
    if not (mat @ inv == Mat.identity(mat.field, mat.nrows)):
        return None
    return inv


class Span:
    """A row space with incremental membership tests (first-pivot RREF)."""

    def __init__(self, field, ncols, rows=()):
        self.field = field
        self.ncols = ncols
        self._rows = []   # reduced rows
        self._pivots = []
        for r in rows:
            self.add(r)

    def _reduce(self, v):
        v = list(v)
        z = self.field.zero
        for row, p in zip(self._rows, self._pivots):
            if v[p] != z:
                c = v[p]
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def add(self, v) -> bool:
        """Insert v; returns True if it enlarged the span."""
        v = self._reduce(v)
        z = self.field.zero
        for j in range(self.ncols):
            if v[j] != z:
                inv = self.field.one / v[j]
                v = [inv * a for a in v]
                for i in range(len(self._rows)):
                    c = self._rows[i][j]
                    if c != z:
                        self._rows[i] = [a - c * b
                                         for a, b in zip(self._rows[i], v)]
                self._rows.append(v)
                self._pivots.append(j)
                return True
        return False

    def contains(self, v) -> bool:
        z = self.field.zero
        return all(a == z for a in self._reduce(v))

    def contains_all(self, vs) -> bool:
        return all(self.contains(v) for v in vs)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def basis(self):
        order = sorted(range(len(self._rows)), key=lambda i: self._pivots[i])
        return [tuple(self._rows[i]) for i in order]

    def __eq__(self, other):
        if not isinstance(other, Span):
            return NotImplemented
        return (self.dim == other.dim and self.contains_all(other.basis())
                and other.contains_all(self.basis()))

    __hash__ = None
