"""Sparse operators on tensor powers of an N-dimensional space.

An operator on V^(arity) is stored as a sparse map from (row, col) pairs of
flattened multi-indices to nonzero entries.  Multi-indices are 1-based
tuples (i_1, ..., i_n); flattening is mixed-radix with slot 1 least
significant.  Lower indices label rows (inputs), upper indices label
columns (outputs), and composition contracts the upper index of the left
factor with the lower index of the right factor, i.e. (A @ B)_i^j =
sum_k A_i^k B_k^j.

Entries are any ring elements supporting +, -, * and truth-testing
(QScalar, Fraction, ModInt, or noncommutative polynomials); the routines
that genuinely divide (invert, rank1_factor) need field entries.
Empty sums come back as the plain int 0, which every scalar kind here
accepts as an absorbing operand.
"""

from __future__ import annotations

from fractions import Fraction


class ShapeError(ValueError):
    """Operands have incompatible dim/arity."""


class NotInvertibleError(ArithmeticError):
    pass


class NotIdempotentError(ArithmeticError):
    pass


class NotRankOneError(ArithmeticError):
    pass


def encode(index, dim):
    """Flatten a 1-based multi-index tuple, slot 1 least significant."""
    flat = 0
    base = 1
    for t in index:
        assert 1 <= t <= dim, "index out of range"
        flat += (t - 1) * base
        base *= dim
    return flat


def decode(flat, dim, arity):
    out = []
    for _ in range(arity):
        out.append(flat % dim + 1)
        flat //= dim
    return tuple(out)


class TensorOperator:
    __slots__ = ("dim", "arity", "size", "entries")

    def __init__(self, dim, arity, entries=None):
        self.dim = dim
        self.arity = arity
        self.size = dim ** arity
        self.entries = {} if entries is None else entries

    # -- constructors --------------------------------------------------

    @classmethod
    def from_multi(cls, dim, arity, items):
        """Build from {(row_tuple, col_tuple): value}."""
        entries = {}
        for (r, c), v in items.items():
            if v:
                entries[(encode(r, dim), encode(c, dim))] = v
        return cls(dim, arity, entries)

    @classmethod
    def identity(cls, dim, arity, one=1):
        size = dim ** arity
        return cls(dim, arity, {(i, i): one for i in range(size)})

    @classmethod
    def zero(cls, dim, arity):
        return cls(dim, arity, {})

    # -- basics ----------------------------------------------------------

    def entry(self, row, col):
        """Entry at 1-based multi-index tuples; 0 when absent."""
        return self.entries.get((encode(row, self.dim), encode(col, self.dim)), 0)

    def is_zero(self):
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, TensorOperator):
            return NotImplemented
        return (self.dim == other.dim and self.arity == other.arity
                and self.entries == other.entries)

    __hash__ = None  # mutable container semantics

    def as_scalar(self):
        """The single entry of an arity-0 operator (a fully traced value)."""
        assert self.arity == 0
        return self.entries.get((0, 0), 0)

    def _check_same_shape(self, other):
        if self.dim != other.dim or self.arity != other.arity:
            raise ShapeError("operator shapes differ: (%d,%d) vs (%d,%d)"
                             % (self.dim, self.arity, other.dim, other.arity))

    def __add__(self, other):
        if not isinstance(other, TensorOperator):
            return NotImplemented
        self._check_same_shape(other)
        d = dict(self.entries)
        for k, v in other.entries.items():
            s = d.get(k)
            if s is None:
                d[k] = v
            else:
                s = s + v
                if s:
                    d[k] = s
                else:
                    del d[k]
        return TensorOperator(self.dim, self.arity, d)

    def __sub__(self, other):
        if not isinstance(other, TensorOperator):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return TensorOperator(self.dim, self.arity,
                              {k: -v for k, v in self.entries.items()})

    def scaled(self, c):
        if not c:
            return TensorOperator.zero(self.dim, self.arity)
        return TensorOperator(self.dim, self.arity,
                              {k: c * v for k, v in self.entries.items()})

    def __rmul__(self, c):
        if isinstance(c, TensorOperator):
            return NotImplemented
        return self.scaled(c)

    def __matmul__(self, other):
        if isinstance(other, CoTensor):
            if other.dim != self.dim or other.arity != self.arity:
                raise ShapeError("operator/vector shapes differ")
            acc = {}
            for (r, c), a in self.entries.items():
                u = other.entries.get(c)
                if u is None:
                    continue
                s = acc.get(r)
                if s is None:
                    s = a * u
                else:
                    s = s + a * u
                if s:
                    acc[r] = s
                else:
                    acc.pop(r, None)
            return CoTensor(self.dim, self.arity, acc)
        if not isinstance(other, TensorOperator):
            return NotImplemented
        self._check_same_shape(other)
        rows = {}
        for (r, c), v in other.entries.items():
            rows.setdefault(r, []).append((c, v))
        acc = {}
        for (i, k), a in self.entries.items():
            hits = rows.get(k)
            if not hits:
                continue
            for j, b in hits:
                key = (i, j)
                s = acc.get(key)
                if s is None:
                    s = a * b
                else:
                    s = s + a * b
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        return TensorOperator(self.dim, self.arity, acc)

    # -- tensor-structure operations --------------------------------------

    def embed(self, slot, total):
        """View this arity-m operator as acting on slots
        slot..slot+m-1 of V^(total), identity elsewhere."""
        m = self.arity
        assert 1 <= slot and slot + m - 1 <= total
        low_size = self.dim ** (slot - 1)
        mid = self.dim ** m
        high_size = self.dim ** (total - m - slot + 1)
        entries = {}
        shift = low_size * mid
        for (r, c), v in self.entries.items():
            rbase = r * low_size
            cbase = c * low_size
            for high in range(high_size):
                off = high * shift
                for low in range(low_size):
                    entries[(rbase + off + low, cbase + off + low)] = v
        return TensorOperator(self.dim, total, entries)

    def partial_transpose_slot1(self):
        """Swap the slot-1 row digit with the slot-1 column digit."""
        d = self.dim
        entries = {}
        for (r, c), v in self.entries.items():
            r1, rrest = r % d, r - r % d
            c1, crest = c % d, c - c % d
            entries[(rrest + c1, crest + r1)] = v
        return TensorOperator(self.dim, self.arity, entries)

    def trace_full(self):
        acc = 0
        for (r, c), v in self.entries.items():
            if r == c:
                acc = acc + v
        return acc

    def trace_slots(self, slots):
        """Ordinary partial trace over the named (1-based) slots."""
        slots = sorted(set(slots))
        assert all(1 <= s <= self.arity for s in slots)
        keep = [s for s in range(1, self.arity + 1) if s not in slots]
        d = self.dim
        acc = {}
        for (r, c), v in self.entries.items():
            rd = decode(r, d, self.arity)
            cd = decode(c, d, self.arity)
            if any(rd[s - 1] != cd[s - 1] for s in slots):
                continue
            key = (encode(tuple(rd[s - 1] for s in keep), d),
                   encode(tuple(cd[s - 1] for s in keep), d))
            s0 = acc.get(key)
            if s0 is None:
                s0 = v
            else:
                s0 = s0 + v
            if s0:
                acc[key] = s0
            else:
                acc.pop(key, None)
        return TensorOperator(d, len(keep), acc)

    # -- field-entry operations -------------------------------------------

    def to_dense(self):
        rows = [[0] * self.size for _ in range(self.size)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def invert(self, one=None):
        """Exact inverse by Gaussian elimination.

        Pivots prefer small entries (bit-size heuristic for concrete
        numbers, first nonzero for symbolic ones).
        """
        n = self.size
        a = self.to_dense()
        inv = [[0] * n for _ in range(n)]
        if one is None:
            one = _one_like(next(iter(self.entries.values()))) if self.entries else 1
        for i in range(n):
            inv[i][i] = one
        for col in range(n):
            pivot = None
            best = None
            for row in range(col, n):
                v = a[row][col]
                if v:
                    cost = _pivot_cost(v)
                    if cost == 0:
                        pivot = row
                        break
                    if best is None or cost < best:
                        best, pivot = cost, row
            if pivot is None:
                raise NotInvertibleError("matrix is singular")
            if pivot != col:
                a[col], a[pivot] = a[pivot], a[col]
                inv[col], inv[pivot] = inv[pivot], inv[col]
            pv = a[col][col]
            if pv != one:
                for j in range(n):
                    if a[col][j]:
                        a[col][j] = a[col][j] / pv
                    if inv[col][j]:
                        inv[col][j] = inv[col][j] / pv
            for row in range(n):
                if row == col:
                    continue
                f = a[row][col]
                if not f:
                    continue
                for j in range(n):
                    if a[col][j]:
                        a[row][j] = a[row][j] - f * a[col][j]
                    if inv[col][j]:
                        inv[row][j] = inv[row][j] - f * inv[col][j]
        entries = {}
        for r in range(n):
            for c in range(n):
                if inv[r][c]:
                    entries[(r, c)] = inv[r][c]
        return TensorOperator(self.dim, self.arity, entries)

    def idempotent_rank(self):
        """Trace of a checked idempotent, as a plain integer."""
        if self @ self != self:
            raise NotIdempotentError("operator is not idempotent")
        tr = self.trace_full()
        r = _as_integer(tr, self.size)
        if r is None:
            raise NotIdempotentError("idempotent trace %r is not an integer"
                                     % (tr,))
        return r

    def rank1_factor(self):
        """Split a rank-1 idempotent A into (u, v) with A = u v and v u = 1.

        Deterministic normalisation: u is the first nonzero column in
        ascending flattened order, scaled so its first nonzero entry is 1;
        v is the matching row, rescaled so the pairing is exactly 1.
        """
        if not self.entries:
            raise NotRankOneError("zero operator")
        cols = {}
        for (r, c), v in self.entries.items():
            cols.setdefault(c, {})[r] = v
        cstar = min(cols)
        column = cols[cstar]
        rstar = min(column)
        anchor = column[rstar]
        u = CoTensor(self.dim, self.arity,
                     {r: v / anchor for r, v in column.items()})
        v_entries = {c: v for (r, c), v in self.entries.items() if r == rstar}
        v = ContraTensor(self.dim, self.arity, v_entries)
        pairing = v @ u
        if not pairing:
            raise NotRankOneError("degenerate pairing")
        v = v.scaled(1 / pairing)
        if outer(u, v) != self:
            raise NotRankOneError("operator is not rank one")
        return u, v

    def map_entries(self, fn):
        d = {}
        for k, v in self.entries.items():
            w = fn(v)
            if w:
                d[k] = w
        return TensorOperator(self.dim, self.arity, d)

    def __repr__(self):
        return ("TensorOperator(dim=%d, arity=%d, nnz=%d)"
                % (self.dim, self.arity, len(self.entries)))


def _one_like(v):
    if isinstance(v, Fraction):
        return Fraction(1)
    try:
        from .qscalar import ModInt, Q_ONE, QScalar
        if isinstance(v, QScalar):
            return Q_ONE
        if isinstance(v, ModInt):
            return ModInt(1, v.prime)
    except ImportError:  # pragma: no cover
        pass
    return 1


def _pivot_cost(v):
    """Smaller is better; 0 short-circuits the pivot search."""
    if isinstance(v, Fraction):
        if v == 1:
            return 0
        return v.numerator.bit_length() + v.denominator.bit_length()
    return 0


def _as_integer(x, bound):
    """Recognise x as a small nonnegative integer, else None."""
    from .qscalar import ModInt, QScalar
    if isinstance(x, int):
        return x if 0 <= x <= bound else None
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 and 0 <= x <= bound else None
    if isinstance(x, QScalar):
        c = x.constant_value()
        if c is not None and c.denominator == 1 and 0 <= c <= bound:
            return int(c)
        return None
    if isinstance(x, ModInt):
        return x.value if x.value <= bound else None
    return None


# ---------------------------------------------------------------------------
# covariant (column) and contravariant (row) tensors
# ---------------------------------------------------------------------------

class CoTensor:
    """Column vector u with lower indices: entries {flat_index: value}."""

    __slots__ = ("dim", "arity", "entries")

    def __init__(self, dim, arity, entries=None):
        self.dim = dim
        self.arity = arity
        self.entries = {} if entries is None else entries

    @classmethod
    def from_multi(cls, dim, arity, items):
        return cls(dim, arity, {encode(t, dim): v for t, v in items.items() if v})

    def entry(self, index):
        return self.entries.get(encode(index, self.dim), 0)

    def __eq__(self, other):
        if not isinstance(other, CoTensor):
            return NotImplemented
        return (self.dim == other.dim and self.arity == other.arity
                and self.entries == other.entries)

    def is_zero(self):
        return not self.entries

    def scaled(self, c):
        if not c:
            return CoTensor(self.dim, self.arity, {})
        return CoTensor(self.dim, self.arity,
                        {k: c * v for k, v in self.entries.items()})

    __rmul__ = scaled

    def __add__(self, other):
        assert isinstance(other, CoTensor)
        d = dict(self.entries)
        for k, v in other.entries.items():
            s = d.get(k)
            s = v if s is None else s + v
            if s:
                d[k] = s
            else:
                d.pop(k, None)
        return CoTensor(self.dim, self.arity, d)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __repr__(self):
        return "CoTensor(dim=%d, arity=%d, nnz=%d)" % (
            self.dim, self.arity, len(self.entries))


class ContraTensor:
    """Row vector v with upper indices: entries {flat_index: value}."""

    __slots__ = ("dim", "arity", "entries")

    def __init__(self, dim, arity, entries=None):
        self.dim = dim
        self.arity = arity
        self.entries = {} if entries is None else entries

    @classmethod
    def from_multi(cls, dim, arity, items):
        return cls(dim, arity, {encode(t, dim): v for t, v in items.items() if v})

    def entry(self, index):
        return self.entries.get(encode(index, self.dim), 0)

    def __eq__(self, other):
        if not isinstance(other, ContraTensor):
            return NotImplemented
        return (self.dim == other.dim and self.arity == other.arity
                and self.entries == other.entries)

    def is_zero(self):
        return not self.entries

    def scaled(self, c):
        if not c:
            return ContraTensor(self.dim, self.arity, {})
        return ContraTensor(self.dim, self.arity,
                            {k: c * v for k, v in self.entries.items()})

    __rmul__ = scaled

    def __add__(self, other):
        assert isinstance(other, ContraTensor)
        d = dict(self.entries)
        for k, v in other.entries.items():
            s = d.get(k)
            s = v if s is None else s + v
            if s:
                d[k] = s
            else:
                d.pop(k, None)
        return ContraTensor(self.dim, self.arity, d)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __matmul__(self, other):
        if isinstance(other, CoTensor):
            # full pairing v . u
            if self.dim != other.dim or self.arity != other.arity:
                raise ShapeError("pairing shapes differ")
            acc = 0
            for k, a in self.entries.items():
                b = other.entries.get(k)
                if b is not None:
                    acc = acc + a * b
            return acc
        if isinstance(other, TensorOperator):
            # (v O)^j = sum_i v^i O_i^j
            if self.dim != other.dim or self.arity != other.arity:
                raise ShapeError("vector/operator shapes differ")
            acc = {}
            for (r, c), o in other.entries.items():
                a = self.entries.get(r)
                if a is None:
                    continue
                s = acc.get(c)
                s = a * o if s is None else s + a * o
                if s:
                    acc[c] = s
                else:
                    acc.pop(c, None)
            return ContraTensor(self.dim, self.arity, acc)
        return NotImplemented

    def __repr__(self):
        return "ContraTensor(dim=%d, arity=%d, nnz=%d)" % (
            self.dim, self.arity, len(self.entries))


def outer(u, v):
    """Rank-1 operator u v from a column and a row."""
    assert u.dim == v.dim and u.arity == v.arity
    entries = {}
    for r, a in u.entries.items():
        for c, b in v.entries.items():
            w = a * b
            if w:
                entries[(r, c)] = w
    return TensorOperator(u.dim, u.arity, entries)


def contract_keep_first(u, v):
    """M_a^b = sum over tails m of u_(a,m) v^(b,m); arity-1 result."""
    assert u.dim == v.dim and u.arity == v.arity
    d = u.dim
    acc = {}
    for ku, a in u.entries.items():
        ra, tail = ku % d, ku // d
        for kv, b in v.entries.items():
            cb, tail2 = kv % d, kv // d
            if tail != tail2:
                continue
            key = (ra, cb)
            s = acc.get(key)
            s = a * b if s is None else s + a * b
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
    return TensorOperator(d, 1, acc)


def contract_keep_last(u, v):
    """M_a^b = sum over heads m of u_(m,a) v^(m,b); arity-1 result."""
    assert u.dim == v.dim and u.arity == v.arity
    d = u.dim
    top = d ** (u.arity - 1)
    acc = {}
    for ku, a in u.entries.items():
        head, ra = ku % top, ku // top
        for kv, b in v.entries.items():
            head2, cb = kv % top, kv // top
            if head != head2:
                continue
            key = (ra, cb)
            s = acc.get(key)
            s = a * b if s is None else s + a * b
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
    return TensorOperator(d, 1, acc)
