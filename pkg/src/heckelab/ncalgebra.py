"""Free noncommutative polynomials in matrix generators and the graded
ideal cut out by the reflection-equation relations.

Monomials are words in the N^2 generators L[i,j], stored as flat tuples
(i1, j1, i2, j2, ...) with 1-based indices.  The monomial order used for
echelonization is degree-lexicographic on those tuples (row-major on
generator indices); any fixed order would do, this one gives
reproducible pivots.

The relations R L1 R L1 - L1 R L1 R are homogeneous quadratic, so the
two-sided ideal they generate is graded and its degree-d slice is an
ordinary finite-dimensional subspace of the degree-d monomial span.
Identities "in the quotient algebra" are decided exactly by reducing the
defect polynomial against an echelon basis of that slice.
"""

from __future__ import annotations

import threading

from .qscalar import format_scalar
from .tensor import TensorOperator

DEFAULT_COLUMN_CAP = 20000


class DegreeError(ValueError):
    pass


class ResourceError(RuntimeError):
    """Monomial space too large for the configured cap."""


def _scalar(x):
    return not isinstance(x, NCPoly)


class NCPoly:
    """Polynomial in noncommuting generators; terms maps word -> coeff.

    Coefficients are whatever scalar type the ambient field uses (exact
    rationals, rational functions of q, or residues); int constants mix in
    freely.  Zero coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {} if terms is None else terms

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def const(cls, c):
        return cls({(): c} if c else None)

    @classmethod
    def generator(cls, i, j):
        assert i >= 1 and j >= 1
        return cls({(i, j): 1})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Word length of the longest monomial; zero polynomial has -1."""
        if not self.terms:
            return -1
        return max(len(m) for m in self.terms) // 2

    def is_homogeneous(self):
        lens = {len(m) for m in self.terms}
        return len(lens) <= 1

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self.terms == other.terms
        # scalars compare against the constant term
        if not self.terms:
            return other == 0
        if set(self.terms) != {()}:
            return False
        return self.terms[()] == other

    __hash__ = None

    def __add__(self, other):
        if _scalar(other):
            other = NCPoly.const(other)
        d = dict(self.terms)
        for m, c in other.terms.items():
            s = d.get(m)
            s = c if s is None else s + c
            if s:
                d[m] = s
            else:
                d.pop(m, None)
        return NCPoly(d)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, NCPoly) else -NCPoly.const(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _scalar(other):
            if not other:
                return NCPoly()
            return NCPoly({m: c * other for m, c in self.terms.items()})
        acc = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = ma + mb
                c = ca * cb
                s = acc.get(m)
                s = c if s is None else s + c
                if s:
                    acc[m] = s
                else:
                    acc.pop(m, None)
        return NCPoly(acc)

    def __rmul__(self, other):
        # only scalars land here, and scalars are central
        if not other:
            return NCPoly()
        return NCPoly({m: other * c for m, c in self.terms.items()})

    def map_coefficients(self, fn):
        d = {}
        for m, c in self.terms.items():
            w = fn(c)
            if w:
                d[m] = w
        return NCPoly(d)

    def lead(self):
        """(monomial, coeff) at the deglex-smallest monomial."""
        m = min(self.terms, key=_mono_key)
        return m, self.terms[m]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _mono_key(t[0]))

    def evaluate(self, assign):
        """Substitute commuting values for the generators; assign maps
        (i, j) pairs to scalars.  Words multiply out left to right."""
        acc = 0
        for m, c in self.terms.items():
            v = c
            for t in range(0, len(m), 2):
                v = v * assign[(m[t], m[t + 1])]
            acc = acc + v
        return acc

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            word = "*".join("L[%d,%d]" % (m[t], m[t + 1])
                            for t in range(0, len(m), 2))
            cs = format_scalar(c)
            if not word:
                parts.append(cs)
            elif cs == "1":
                parts.append(word)
            elif cs == "-1":
                parts.append("-" + word)
            else:
                if ("+" in cs or "-" in cs[1:] or "/" in cs) and not (
                        cs.startswith("(") and cs.endswith(")")):
                    cs = "(%s)" % cs
                parts.append("%s*%s" % (cs, word))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return "NCPoly(%s)" % self


def _mono_key(m):
    return (len(m), m)


def generator_matrix(n):
    """The N x N matrix L with entry (i, j) the generator L[i,j]."""
    return TensorOperator.from_multi(
        n, 1, {((i,), (j,)): NCPoly.generator(i, j)
               for i in range(1, n + 1) for j in range(1, n + 1)})


def re_relations(h):
    """Entries of R L1 R L1 - L1 R L1 R, one homogeneous quadratic
    polynomial per nonzero entry, in row-major entry order."""
    n = h.dim
    l1 = generator_matrix(n).embed(1, 2)
    defect = h.R @ l1 @ h.R @ l1 - l1 @ h.R @ l1 @ h.R
    return [defect.entries[k] for k in sorted(defect.entries)]


class EchelonBasis:
    """Incrementally maintained reduced row-echelon span of polynomials
    of one fixed degree.

    Rows are keyed by their lead monomial, normalized to lead coefficient
    one, and kept fully back-reduced (no row contains another row's lead).
    Inserts are serialized by a lock; reads of a finished basis are safe
    concurrently.
    """

    def __init__(self):
        self.rows = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, f):
        """Fully reduce f; the result has no pivot monomials left."""
        rows = self.rows
        while True:
            hit = None
            for m in f.terms:
                if m in rows:
                    hit = m
                    break
            if hit is None:
                return f
            f = f - rows[hit] * f.terms[hit]

    def insert(self, f):
        """Add f to the span; returns True if the rank grew."""
        with self._lock:
            r = self.reduce(f)
            if not r:
                return False
            m, c = r.lead()
            r = r * c ** -1
            for lead, row in list(self.rows.items()):
                cm = row.terms.get(m)
                if cm is not None:
                    self.rows[lead] = row - r * cm
            self.rows[m] = r
            return True

    def pivots(self):
        return sorted(self.rows, key=_mono_key)


class IdealBasisAtDegree:
    """Echelonized degree-d slice of the graded two-sided ideal."""

    def __init__(self, degree, basis):
        self.degree = degree
        self.basis = basis

    @property
    def rank(self):
        return self.basis.rank

    def reduce(self, f):
        return self.basis.reduce(f)


def _max_generator_index(relations):
    n = 0
    for r in relations:
        for m in r.terms:
            if m:
                n = max(n, max(m))
    return n


def ideal_component(relations, d, column_cap=DEFAULT_COLUMN_CAP, n=None):
    """Echelon basis of the degree-d slice of the two-sided ideal
    generated by the (homogeneous quadratic) relations.

    Built iteratively: the degree-(k+1) slice is spanned by g * w and
    w * g over all generators g and all rows w of the degree-k slice,
    which equals the span of all m_L * r * m_R with matching degrees.
    """
    if d < 2:
        raise DegreeError("ideal components start at degree 2")
    if n is None:
        n = _max_generator_index(relations)
    columns = (n * n) ** d
    if columns > column_cap:
        raise ResourceError(
            "degree-%d slice spans %d monomials, over the cap of %d"
            % (d, columns, column_cap))
    gens = [NCPoly.generator(i, j)
            for i in range(1, n + 1) for j in range(1, n + 1)]
    basis = EchelonBasis()
    for r in relations:
        if r:
            basis.insert(r)
    for _ in range(d - 2):
        grown = EchelonBasis()
        for w in [basis.rows[m] for m in basis.pivots()]:
            for g in gens:
                grown.insert(g * w)
                grown.insert(w * g)
        basis = grown
    return IdealBasisAtDegree(d, basis)


def is_member(f, basis):
    """Membership of a homogeneous polynomial in the ideal slice of its
    degree; returns (flag, residual) where the residual is the fully
    reduced remainder, a certificate of non-membership when nonzero."""
    if f.is_zero():
        return True, f
    if not f.is_homogeneous() or f.degree() != basis.degree:
        raise DegreeError("degree %s polynomial against a degree-%d basis"
                          % (f.degree(), basis.degree))
    r = basis.reduce(f)
    return r.is_zero(), r
