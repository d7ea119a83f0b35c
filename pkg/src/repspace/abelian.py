"""Exact integer linear algebra and finitely generated abelian groups.

Everything here is arbitrary-precision: matrices hold Python ints, so no
overflow is possible no matter how badly intermediate entries blow up
during elimination.

Two Smith-normal-form routines are provided.

``smith_normal_form(M)`` returns the full factorization U*M*V = D with
unimodular U, V and diagonal D satisfying the divisibility chain
d1 | d2 | ... .  It keeps dense working copies and is meant for small
matrices (tests, spot checks, anything a human wants to look at).

``invariant_factors(M)`` returns only the nonzero diagonal of D.  It
works on a sparse dict-of-rows layout, eliminates unit pivots by rank-one
updates, and never touches the transform matrices.  Boundary matrices of
normalized chain complexes are extremely sparse (a column of d_k has at
most k+1 entries) and almost all pivots are units, so this is the path
all homology computations take.

The group of a diagonal is packaged as :class:`AbelianGroup` in
invariant-factor normal form, and full homology tables as
:class:`GradedGroup`.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd

from .errors import CompositionNotZero

# ---------------------------------------------------------------------------
# SECTION: integer matrices


class IntMatrix:
    """An immutable rows x cols matrix of arbitrary-precision integers.

    Entries are stored sparsely as {(r, c): nonzero int}; dense row input
    is accepted by :meth:`from_rows`.  The public contract is value-level:
    two matrices are equal iff shapes and entries agree.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative matrix dimensions")
        self.rows = rows
        self.cols = cols
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) outside {rows}x{cols}")
            if v:
                clean[(r, c)] = int(v)
        self.entries = clean

    @classmethod
    def from_rows(cls, data) -> "IntMatrix":
        """Build from a list of equal-length rows.

        >>> IntMatrix.from_rows([[1, 0], [0, 2]]).entries
        {(0, 0): 1, (1, 1): 2}
        """
        data = [list(row) for row in data]
        rows = len(data)
        cols = len(data[0]) if data else 0
        if any(len(row) != cols for row in data):
            raise ValueError("ragged rows")
        entries = {
            (r, c): v for r, row in enumerate(data) for c, v in enumerate(row) if v
        }
        return cls(rows, cols, entries)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def diagonal(cls, values, rows=None, cols=None) -> "IntMatrix":
        values = list(values)
        n = len(values)
        return cls(
            rows if rows is not None else n,
            cols if cols is not None else n,
            {(i, i): v for i, v in enumerate(values) if v},
        )

    def entry(self, r: int, c: int) -> int:
        return self.entries.get((r, c), 0)

    def to_rows(self) -> list:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        """Sparse matrix product self * other."""
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} * {other.shape}")
        by_row = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                key = (i, j)
                acc[key] = acc.get(key, 0) + a * b
        return IntMatrix(self.rows, other.cols, acc)

    def is_zero(self) -> bool:
        return not self.entries

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.shape == other.shape
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self):
        if self.rows * self.cols <= 36:
            return f"IntMatrix({self.to_rows()!r})"
        return f"IntMatrix({self.rows}x{self.cols}, {len(self.entries)} entries)"


def _det_sign(rows) -> int:
    """Determinant of a small integer matrix by fraction-free elimination.

    Used only to confirm unimodularity in checks; Bareiss keeps every
    intermediate value an exact integer.
    """
    a = [row[:] for row in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * (a[-1][-1] if n else 1)


def determinant(M: IntMatrix) -> int:
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    return _det_sign(M.to_rows())


# ---------------------------------------------------------------------------
# SECTION: Smith normal form with transforms (small matrices)


def _find_pivot(A, t, rows, cols):
    """Nonzero entry of A[t:, t:] minimizing (|value|, row, column)."""
    best = None
    for r in range(t, rows):
        row = A[r]
        for c in range(t, cols):
            v = row[c]
            if v:
                key = (abs(v), r, c)
                if best is None or key < best[0]:
                    best = (key, r, c)
    return None if best is None else (best[1], best[2])


def smith_normal_form(M: IntMatrix):
    """Full Smith normal form U*M*V = D.

    U and V are unimodular; D is diagonal with nonnegative entries in a
    divisibility chain d1 | d2 | ... .  Pivots are chosen with minimal
    absolute value (ties: lowest row, then lowest column), which keeps
    entry growth moderate and the output deterministic.

    >>> U, D, V = smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))
    >>> D.to_rows()
    [[2, 0], [0, 4]]
    >>> U.mul(IntMatrix.from_rows([[2, 4], [6, 8]])).mul(V) == D
    True
    """
    rows, cols = M.rows, M.cols
    A = M.to_rows()
    U = IntMatrix.identity(rows).to_rows()
    V = IntMatrix.identity(cols).to_rows()
    t = 0
    limit = min(rows, cols)
    while t < limit:
        pos = _find_pivot(A, t, rows, cols)
        if pos is None:
            break
        r, c = pos
        if r != t:
            A[t], A[r] = A[r], A[t]
            U[t], U[r] = U[r], U[t]
        if c != t:
            for row in A:
                row[t], row[c] = row[c], row[t]
            for row in V:
                row[t], row[c] = row[c], row[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(rows):
                if i != t and A[i][t]:
                    q = A[i][t] // p
                    if q:
                        for j in range(cols):
                            A[i][j] -= q * A[t][j]
                        for j in range(rows):
                            U[i][j] -= q * U[t][j]
                    if A[i][t]:
                        dirty = True
            for j in range(cols):
                if j != t and A[t][j]:
                    q = A[t][j] // p
                    if q:
                        for i in range(rows):
                            A[i][j] -= q * A[i][t]
                        for i in range(cols):
                            V[i][j] -= q * V[i][t]
                    if A[t][j]:
                        dirty = True
            if dirty:
                # a remainder smaller than |p| appeared; re-pivot on it
                r, c = _find_pivot(A, t, rows, cols)
                if r != t:
                    A[t], A[r] = A[r], A[t]
                    U[t], U[r] = U[r], U[t]
                if c != t:
                    for row in A:
                        row[t], row[c] = row[c], row[t]
                    for row in V:
                        row[t], row[c] = row[c], row[t]
                continue
            # row and column t are clear; enforce the divisibility chain
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            for j in range(cols):
                A[t][j] += A[bad][j]
            for j in range(rows):
                U[t][j] += U[bad][j]
        if A[t][t] < 0:
            for j in range(cols):
                A[t][j] = -A[t][j]
            for j in range(rows):
                U[t][j] = -U[t][j]
        t += 1
    def pack(data, r, c):
        return IntMatrix(
            r, c, {(i, j): v for i, row in enumerate(data) for j, v in enumerate(row)}
        )

    return pack(U, rows, rows), pack(A, rows, cols), pack(V, cols, cols)


# ---------------------------------------------------------------------------
# SECTION: sparse invariant factors (no transforms)


def _divisor_chain(values) -> list:
    """Normalize a multiset of nonzero values to the invariant-factor chain.

    Replacing any non-dividing pair (a, b) by (gcd, lcm) preserves the
    group Z/a + Z/b and strictly increases divisibility, so the loop
    terminates with d1 | d2 | ... .
    """
    ds = sorted(abs(v) for v in values)
    changed = True
    while changed:
        changed = False
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                if ds[j] % ds[i]:
                    g = gcd(ds[i], ds[j])
                    ds[i], ds[j] = g, ds[i] * ds[j] // g
                    changed = True
        if changed:
            ds.sort()
    return ds


def invariant_factors(M: IntMatrix) -> list:
    """Nonzero diagonal of the Smith form of M, as a divisibility chain.

    len() of the result is rank(M); entries > 1 present the torsion of
    the cokernel.  Elimination order: always the remaining entry of
    smallest absolute value (a lazy heap tracks candidates).  A unit
    pivot eliminates its whole row and column in one rank-one update;
    non-unit pivots are shrunk by remainder reductions first, so every
    pass either isolates a pivot or strictly decreases the minimum
    absolute value in its row/column.
    """
    rows = {}
    cols = {}
    for (r, c), v in M.entries.items():
        rows.setdefault(r, {})[c] = v
        cols.setdefault(c, set()).add(r)
    heap = [(abs(v), r, c) for (r, c), v in M.entries.items()]
    heapq.heapify(heap)
    out = []

    def drop_entry(r, c):
        del rows[r][c]
        cols[c].discard(r)
        if not cols[c]:
            del cols[c]

    def set_entry(r, c, v):
        if v:
            rows[r][c] = v
            cols[c].add(r)
            heapq.heappush(heap, (abs(v), r, c))
        elif c in rows[r]:
            drop_entry(r, c)

    while heap:
        a, r, c = heapq.heappop(heap)
        if r not in rows or c not in rows[r] or abs(rows[r][c]) != a:
            continue  # stale heap entry
        v = rows[r][c]
        if a == 1:
            col_rows = [(i, rows[i][c]) for i in cols.get(c, ()) if i != r]
            row_cols = [(j, w) for j, w in rows[r].items() if j != c]
            for j, _ in row_cols:
                cols[j].discard(r)
                if not cols[j]:
                    del cols[j]
            del rows[r]
            del cols[c]
            # rank-one update A[i][j] -= A[i][c] * A[r][j] / v  (v = ±1)
            for i, av in col_rows:
                ri = rows[i]
                del ri[c]
                for j, bv in row_cols:
                    new = ri.get(j, 0) - av * bv * v
                    if new:
                        ri[j] = new
                        cols.setdefault(j, set()).add(i)
                        heapq.heappush(heap, (abs(new), i, j))
                    elif j in ri:
                        del ri[j]
                        cols[j].discard(i)
                        if not cols[j]:
                            del cols[j]
                if not ri:
                    del rows[i]
            out.append(1)
            continue
        # non-unit pivot: reduce its column by row operations
        progressed = False
        for i in list(cols.get(c, ())):
            if i == r:
                continue
            q = rows[i][c] // v
            if q:
                ri = rows[i]
                for j, w in list(rows[r].items()):
                    nv = ri.get(j, 0) - q * w
                    if nv:
                        ri[j] = nv
                        cols.setdefault(j, set()).add(i)
                        heapq.heappush(heap, (abs(nv), i, j))
                    elif j in ri:
                        del ri[j]
                        cols[j].discard(i)
                        if not cols[j]:
                            del cols[j]
                if not ri:
                    del rows[i]
            if i in rows and c in rows.get(i, {}):
                progressed = True  # a remainder < |v| sits in the heap
        if progressed:
            heapq.heappush(heap, (a, r, c))
            continue
        # column is clear; reduce the row by column operations (these touch
        # only row r, because column c now has support {r})
        for j, w in list(rows[r].items()):
            if j == c:
                continue
            rem = w - (w // v) * v
            set_entry(r, j, rem)
            if rem:
                progressed = True
        if progressed:
            heapq.heappush(heap, (a, r, c))
            continue
        out.append(abs(v))
        drop_entry(r, c)
        if not rows[r]:
            del rows[r]
    return _divisor_chain(out)


def rank(M: IntMatrix) -> int:
    """Rank over Q (= number of nonzero Smith diagonal entries)."""
    return len(invariant_factors(M))


# ---------------------------------------------------------------------------
# SECTION: abelian groups


@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group Z^free_rank + Z/d1 + ... + Z/dt.

    Invariant-factor normal form: every di >= 2 and d1 | d2 | ... | dt,
    so equality of groups is equality of fields.

    >>> str(AbelianGroup(1, (2,)))
    'Z ⊕ Z/2'
    >>> str(AbelianGroup(0, ()))
    '0'
    """

    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"broken divisor chain {self.torsion}")

    @classmethod
    def trivial(cls) -> "AbelianGroup":
        return cls(0, ())

    @classmethod
    def free(cls, r: int) -> "AbelianGroup":
        return cls(r, ())

    @classmethod
    def from_factors(cls, free_rank: int, factors) -> "AbelianGroup":
        """Normalize an arbitrary multiset of cyclic orders (>= 1)."""
        chain = [d for d in _divisor_chain(factors) if d > 1]
        return cls(free_rank, tuple(chain))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def direct_sum(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup.from_factors(
            self.free_rank + other.free_rank, self.torsion + other.torsion
        )

    def times(self, k: int) -> "AbelianGroup":
        """Direct sum of k copies."""
        if k < 0:
            raise ValueError("negative multiplicity")
        return AbelianGroup.from_factors(self.free_rank * k, self.torsion * k)

    def torsion_rank(self, p: int) -> int:
        """Number of invariant factors divisible by p (= dim of p-torsion/p)."""
        return sum(1 for d in self.torsion if d % p == 0)

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, doc) -> "AbelianGroup":
        return cls(int(doc["free_rank"]), tuple(doc["torsion"]))

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        groups = []
        for d in self.torsion:
            if groups and groups[-1][0] == d:
                groups[-1][1] += 1
            else:
                groups.append([d, 1])
        for d, m in groups:
            parts.append(f"Z/{d}" if m == 1 else f"(Z/{d})^{m}")
        return " ⊕ ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GradedGroup:
    """A finite list of AbelianGroups indexed by homological degree.

    Trailing trivial degrees are trimmed on construction, so two tables
    that agree in every degree compare equal.  Indexing past the top
    returns the trivial group.
    """

    groups: tuple = ()

    def __post_init__(self):
        gs = list(self.groups)
        while gs and gs[-1].is_trivial:
            gs.pop()
        object.__setattr__(self, "groups", tuple(gs))

    def __getitem__(self, k: int) -> AbelianGroup:
        if 0 <= k < len(self.groups):
            return self.groups[k]
        return AbelianGroup.trivial()

    def __len__(self):
        return len(self.groups)

    @property
    def top(self) -> int:
        return len(self.groups) - 1

    def direct_sum(self, other: "GradedGroup") -> "GradedGroup":
        n = max(len(self.groups), len(other.groups))
        return GradedGroup(tuple(self[k].direct_sum(other[k]) for k in range(n)))

    def times(self, m: int) -> "GradedGroup":
        return GradedGroup(tuple(g.times(m) for g in self.groups))

    def shift(self, s: int) -> "GradedGroup":
        """Shift degrees up by s (inserting trivial groups at the bottom)."""
        pad = (AbelianGroup.trivial(),) * s
        return GradedGroup(pad + self.groups)

    def betti(self) -> list:
        return [g.free_rank for g in self.groups]

    def to_json(self):
        return [g.to_json() for g in self.groups]

    @classmethod
    def from_json(cls, doc) -> "GradedGroup":
        return cls(tuple(AbelianGroup.from_json(g) for g in doc))

    @classmethod
    def of(cls, *groups) -> "GradedGroup":
        return cls(tuple(groups))

    def table(self) -> list:
        """Rows (degree, display string) for every degree up to the top."""
        return [(k, str(g)) for k, g in enumerate(self.groups)]

    def __str__(self):
        if not self.groups:
            return "(0)"
        return "(" + ", ".join(str(g) for g in self.groups) + ")"


# ---------------------------------------------------------------------------
# SECTION: cokernels and homology of a pair of boundary maps


def cokernel(M: IntMatrix) -> AbelianGroup:
    """Z^rows / column span of M, in invariant-factor form.

    >>> str(cokernel(IntMatrix.from_rows([[2]])))
    'Z/2'
    >>> str(cokernel(IntMatrix.diagonal([1, 2, 0])))
    'Z ⊕ Z/2'
    """
    factors = invariant_factors(M)
    return AbelianGroup.from_factors(M.rows - len(factors), factors)


def homology_of_pair(d_k: IntMatrix, d_k1: IntMatrix) -> AbelianGroup:
    """ker(d_k) / im(d_k1) for consecutive boundary maps.

    d_k maps degree k to k-1 and d_k1 maps degree k+1 to k, so
    d_k.cols == d_k1.rows and d_k * d_k1 must vanish (checked).

    The kernel of an integer matrix is a pure subgroup, hence a direct
    summand, so coker(d_k1) = H_k + Z^(rank d_k): the torsion of H_k is
    exactly the torsion of coker(d_k1) and its rank is
    cols(d_k) - rank(d_k) - rank(d_k1).  No kernel basis is ever needed.
    """
    if d_k.cols != d_k1.rows:
        raise ValueError(
            f"chain ranks disagree: d_k is {d_k.shape}, d_k1 is {d_k1.shape}"
        )
    if not d_k.mul(d_k1).is_zero():
        raise CompositionNotZero(
            f"d∘d ≠ 0 for shapes {d_k.shape} ∘ {d_k1.shape}"
        )
    upper = invariant_factors(d_k1)
    free = d_k.cols - len(invariant_factors(d_k)) - len(upper)
    return AbelianGroup.from_factors(free, upper)
