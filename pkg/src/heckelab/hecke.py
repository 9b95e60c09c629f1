"""Hecke-type R-matrices and the calculus built from them.

Conventions (fixed here once, used everywhere):

* R is an operator on V x V written in braid form: it satisfies
  R_1 R_2 R_1 = R_2 R_1 R_2 on V^3 (R_i acting on slots i, i+1) together
  with the quadratic relation R^2 = I + lam * R, lam = q - 1/q, so its
  eigenvalues are q and -1/q.

* The built-in standard symmetry acts by R(e_i o e_i) = q e_i o e_i,
  R(e_i o e_j) = e_j o e_i + lam e_i o e_j for i < j, and
  R(e_i o e_j) = e_j o e_i for i > j.  Entrywise, with lower = row and
  upper = column: R_(ii)^(ii) = q, R_(ij)^(ji) = 1 for i != j, and
  R_(ij)^(ij) = lam for i < j.

* The closedness test composes with the flip: script-R = P @ R.  When its
  slot-1 partial transpose is invertible the two trace-weight matrices are
      C_i^j = sum_k inv_(j i)^(k k),    B_i^j = sum_k inv_(k k)^(i j),
  where inv = ((P @ R)^t1)^(-1), and the quantum trace of a matrix M is
  Tr(C M).

Everything is exact; no check here ever tolerates a nonzero residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from .qscalar import q_number
from .tensor import (
    NotInvertibleError,
    NotRankOneError,
    TensorOperator,
    contract_keep_first,
    contract_keep_last,
    decode,
)

DEFAULT_RANK_BOUND = 8


class HeckeError(ValueError):
    pass


class YBEViolationError(HeckeError):
    def __init__(self, index, residual):
        self.index = index
        self.residual = residual
        super().__init__("braid Yang-Baxter relation fails first at %s with residual %s"
                         % (index, residual))


class HeckeViolationError(HeckeError):
    def __init__(self, index, residual):
        self.index = index
        self.residual = residual
        super().__init__("Hecke condition fails first at %s with residual %s"
                         % (index, residual))


class NotClosedError(HeckeError):
    """(P @ R)^t1 is singular: no trace weights exist."""


class NotEvenError(HeckeError):
    """No vanishing antisymmetrizer within the configured bound."""


class RankImageError(HeckeError):
    """The top nonzero antisymmetrizer is not a rank-1 idempotent."""


class FieldError(ArithmeticError):
    """A required q-number vanishes in the chosen field."""


def flip_operator(dim, one):
    entries = {}
    for a in range(dim):
        for b in range(dim):
            entries[(a + dim * b, b + dim * a)] = one
    return TensorOperator(dim, 2, entries)


def _first_violation(defect, dim, arity):
    key = min(defect.entries)
    r, c = key
    return (decode(r, dim, arity), decode(c, dim, arity)), defect.entries[key]


class HeckeSymmetry:
    """A validated braid-form Hecke symmetry plus cached derived data.

    Construct through ``validate`` (or the builtins); the constructor does
    not re-check the axioms.  Cached fields are computed at most once and
    their computation is idempotent, so racing first accesses are safe.
    """

    def __init__(self, R, field):
        self.R = R
        self.field = field
        self.q = field.q
        self.lam = field.lam
        self.dim = R.dim
        self._embeds = {}
        self._rt1_inv = None
        self._antisym = None
        self._rank = None
        self._uv = None
        self._c = None
        self._b = None

    # -- plumbing -----------------------------------------------------------

    def r_slot(self, i, total):
        """R acting on slots (i, i+1) of V^total."""
        key = (i, total)
        got = self._embeds.get(key)
        if got is None:
            got = self.R.embed(i, total)
            self._embeds[key] = got
        return got

    def r_inverse(self):
        """R^-1 = R - lam I, from the quadratic relation."""
        one = self.field.one
        return self.R - TensorOperator.identity(self.dim, 2, one).scaled(self.lam)

    def q_number(self, k):
        return self.field.from_qscalar(q_number(k))

    # -- closedness and trace weights ----------------------------------------

    def check_closed(self):
        if self._rt1_inv is None:
            flip = flip_operator(self.dim, self.field.one)
            script_r = flip @ self.R
            try:
                self._rt1_inv = script_r.partial_transpose_slot1().invert()
            except NotInvertibleError:
                raise NotClosedError(
                    "slot-1 partial transpose of P @ R is singular") from None
        return self

    def rt1_inverse(self):
        self.check_closed()
        return self._rt1_inv

    def matrix_c(self):
        """Trace-weight matrix C with Tr_q M = Tr(C M)."""
        if self._c is None:
            inv = self.rt1_inverse()
            d = self.dim
            acc = {}
            for (r, c), v in inv.entries.items():
                k1, k2 = c % d, c // d
                if k1 != k2:
                    continue
                j, i = r % d, r // d
                key = (i, j)
                s = acc.get(key)
                s = v if s is None else s + v
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
            self._c = TensorOperator(d, 1, acc)
        return self._c

    def matrix_b(self):
        """Companion weight matrix B with Tr_(1)(B_1 R_12) = I."""
        if self._b is None:
            inv = self.rt1_inverse()
            d = self.dim
            acc = {}
            for (r, c), v in inv.entries.items():
                k1, k2 = r % d, r // d
                if k1 != k2:
                    continue
                i, j = c % d, c // d
                key = (i, j)
                s = acc.get(key)
                s = v if s is None else s + v
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
            self._b = TensorOperator(d, 1, acc)
        return self._b

    def quantum_trace(self, m):
        """Tr_q M = Tr(C M); M may have noncommutative entries."""
        return (self.matrix_c() @ m).trace_full()

    def quantum_trace_slots(self, a, slots):
        """Insert C on each named slot, then take the ordinary partial
        trace over those slots."""
        c = self.matrix_c()
        m = a
        for s in slots:
            m = c.embed(s, a.arity) @ m
        return m.trace_slots(slots)

    # -- antisymmetrizers ------------------------------------------------------

    def antisymmetrizer(self, k):
        """The k-th q-antisymmetrizer on V^k (iterative staircase form)."""
        assert k >= 1
        if self._antisym is None:
            one = self.field.one
            self._antisym = [TensorOperator.identity(self.dim, 1, one)]
        while len(self._antisym) < k:
            self._antisym.append(self._antisym_next(len(self._antisym) + 1))
        return self._antisym[k - 1]

    def _staircase_sum(self, k, start_fn):
        """sum_j (-1)^j q^(k-1-j) * (product of j R factors), where the
        product is built by repeatedly applying start_fn."""
        one = self.field.one
        acc = TensorOperator.identity(self.dim, k, one).scaled(self.q ** (k - 1))
        term = None
        sign = one
        for j in range(1, k):
            sign = -sign
            term = start_fn(j, term)
            acc = acc + term.scaled(sign * self.q ** (k - 1 - j))
        return acc

    def _antisym_next(self, k):
        kq = self.q_number(k)
        if not kq:
            raise FieldError("q-number %d vanishes in %s"
                             % (k, self.field.spec.describe()))
        prev = self._antisym[k - 2].embed(1, k)

        def grow(j, term):
            # R_{k-j} R_{k-j+1} ... R_{k-1}
            r = self.r_slot(k - j, k)
            return r if term is None else r @ term

        bracket = self._staircase_sum(k, grow)
        return (bracket @ prev).scaled(self.field.one / kq)

    def antisymmetrizer_variant(self, k, variant):
        """The same projector via the alternative published forms; used to
        cross-check the main construction."""
        assert k >= 2
        kq = self.q_number(k)
        if variant == "right":
            prev = self.antisymmetrizer(k - 1).embed(1, k)

            def grow(j, term):
                # R_{k-1} R_{k-2} ... R_{k-j}
                r = self.r_slot(k - j, k)
                return r if term is None else term @ r

            return (prev @ self._staircase_sum(k, grow)).scaled(self.field.one / kq)
        if variant == "slot2":
            prev = self.antisymmetrizer(k - 1).embed(2, k)

            def grow(j, term):
                # R_j R_{j-1} ... R_1
                r = self.r_slot(j, k)
                return r if term is None else r @ term

            return (self._staircase_sum(k, grow) @ prev).scaled(self.field.one / kq)
        if variant == "rec_top":
            # from P^(k-1) R_(k-1) P^(k-1) embedded at slot 1
            m = k - 1
            mq = self.q_number(m)
            kq = self.q_number(k)
            p1 = self.antisymmetrizer(m).embed(1, k)
            mid = p1 @ self.r_slot(m, k) @ p1
            return (p1.scaled(self.q ** m) - mid.scaled(mq)).scaled(self.field.one / kq)
        if variant == "rec_bottom":
            m = k - 1
            mq = self.q_number(m)
            kq = self.q_number(k)
            p2 = self.antisymmetrizer(m).embed(2, k)
            mid = p2 @ self.r_slot(1, k) @ p2
            return (p2.scaled(self.q ** m) - mid.scaled(mq)).scaled(self.field.one / kq)
        raise ValueError("unknown variant %r" % variant)

    # -- rank and the Levi-Civita pair ---------------------------------------

    def detect_rank(self, bound=DEFAULT_RANK_BOUND):
        """Smallest p with vanishing (p+1)-antisymmetrizer, checking that
        the p-antisymmetrizer is a rank-1 idempotent."""
        if self._rank is not None:
            return self._rank
        for k in range(2, bound + 1):
            pk = self.antisymmetrizer(k)
            if pk.is_zero():
                p = k - 1
                top = self.antisymmetrizer(p)
                r = top.idempotent_rank()
                if r != 1:
                    raise RankImageError(
                        "top antisymmetrizer has rank %d, expected 1" % r)
                self._rank = p
                return p
        raise NotEvenError(
            "no vanishing antisymmetrizer found for k <= %d" % bound)

    def levi_civita(self):
        """The (u, v) pair with P^p = u v, v u = 1, normalised
        deterministically; checks the eigenvalue relations on both sides."""
        if self._uv is None:
            p = self.detect_rank()
            top = self.antisymmetrizer(p)
            try:
                u, v = top.rank1_factor()
            except NotRankOneError as e:
                raise RankImageError(str(e)) from None
            scale = -(self.field.one / self.q)
            for i in range(1, p):
                ri = self.r_slot(i, p)
                if (ri @ u) != u.scaled(scale):
                    raise RankImageError("u is not a -1/q eigenvector of R_%d" % i)
                if (v @ ri) != v.scaled(scale):
                    raise RankImageError("v is not a -1/q eigenvector of R_%d" % i)
            self._uv = (u, v)
        return self._uv

    # -- symmetrized insertion -------------------------------------------------

    def symmetrize(self, x, k):
        """X_1 + R_1 X_1 R_1 + ... + R_(k-1)...R_1 X_1 R_1...R_(k-1) on V^k."""
        term = x.embed(1, k)
        acc = term
        for i in range(1, k):
            ri = self.r_slot(i, k)
            term = ri @ term @ ri
            acc = acc + term
        return acc


def validate(R, field):
    """Check the braid Yang-Baxter relation and the quadratic Hecke
    condition exactly; returns the wrapped symmetry on success."""
    if R.arity != 2:
        raise HeckeError("an R-matrix acts on two slots, got arity %d" % R.arity)
    if R.dim < 2:
        raise HeckeError("dim must be at least 2")
    r1 = R.embed(1, 3)
    r2 = R.embed(2, 3)
    defect = r1 @ r2 @ r1 - r2 @ r1 @ r2
    if not defect.is_zero():
        index, residual = _first_violation(defect, R.dim, 3)
        raise YBEViolationError(index, residual)
    one = TensorOperator.identity(R.dim, 2, field.one)
    defect = R @ R - one - R.scaled(field.lam)
    if not defect.is_zero():
        index, residual = _first_violation(defect, R.dim, 2)
        raise HeckeViolationError(index, residual)
    return HeckeSymmetry(R, field)


def builtin_standard(n, field):
    """Standard deformation symmetry on an n-dimensional space (see module
    docstring for the exact entry convention).  Classical at q = 1."""
    assert n >= 2
    q, lam, one = field.q, field.lam, field.one
    items = {}
    for i in range(1, n + 1):
        items[((i, i), (i, i))] = q
        for j in range(1, n + 1):
            if i != j:
                items[((i, j), (j, i))] = one
            if i < j:
                items[((i, j), (i, j))] = lam
    return validate(TensorOperator.from_multi(n, 2, items), field)


def builtin_permutation(n, field):
    """The flip operator; a valid involutive symmetry when lam = 0."""
    assert n >= 2
    return validate(flip_operator(n, field.one), field)


# ---------------------------------------------------------------------------
# the identity suite for a closed even symmetry
# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    ok: bool
    witness: str = None


def _eq_check(name, lhs, rhs):
    if lhs == rhs:
        return Check(name, True)
    if isinstance(lhs, TensorOperator):
        diff = lhs - rhs
        key = min(diff.entries)
        wit = "first difference at %s: %s" % (
            (decode(key[0], lhs.dim, lhs.arity), decode(key[1], lhs.dim, lhs.arity)),
            diff.entries[key])
    else:
        wit = "lhs %s != rhs %s" % (lhs, rhs)
    return Check(name, False, wit)


def random_slot_matrix(field, dim, rng):
    """Random numeric matrix on one slot; entries are small multiples of
    small powers of q so the q-structure is exercised."""
    entries = {}
    for r in range(dim):
        for c in range(dim):
            co = rng.randint(-3, 3)
            if co:
                entries[(r, c)] = field.of_int(co) * field.q ** rng.randint(-2, 2)
    return TensorOperator(dim, 1, entries)


def random_two_slot_matrix(field, dim, rng, nnz=12):
    size = dim * dim
    entries = {}
    for _ in range(nnz):
        r, c = rng.randrange(size), rng.randrange(size)
        co = rng.randint(-3, 3)
        if co:
            entries[(r, c)] = field.of_int(co) * field.q ** rng.randint(-1, 1)
    return TensorOperator(dim, 2, entries)


def antisym_checks(h, p):
    """The three antisymmetrizer facts (eigenvalue, absorption, agreement
    of the alternative constructions), checked for every order up to
    p + 1 where the tower collapses."""
    checks = []
    minus_inv_q = -(h.field.one / h.q)

    # eigenvalue property of the antisymmetrizers, both sides
    ok, wit = True, None
    for k in range(2, p + 2):
        pk = h.antisymmetrizer(k)
        want = pk.scaled(minus_inv_q)
        for i in range(1, k):
            ri = h.r_slot(i, k)
            if pk @ ri != want or ri @ pk != want:
                ok, wit = False, "k=%d i=%d" % (k, i)
    checks.append(Check("antisym_eigenvalue", ok, wit))

    # absorption of lower antisymmetrizers in any compatible slot
    ok, wit = True, None
    for k in range(2, p + 2):
        pk = h.antisymmetrizer(k)
        for i in range(2, k + 1):
            for j in range(1, k - i + 2):
                pij = h.antisymmetrizer(i).embed(j, k)
                if pk @ pij != pk or pij @ pk != pk:
                    ok, wit = False, "k=%d i=%d j=%d" % (k, i, j)
    checks.append(Check("antisym_absorption", ok, wit))

    # all alternative constructions agree
    ok, wit = True, None
    for k in range(2, p + 2):
        pk = h.antisymmetrizer(k)
        for variant in ("right", "slot2", "rec_top", "rec_bottom"):
            if h.antisymmetrizer_variant(k, variant) != pk:
                ok, wit = False, "k=%d variant=%s" % (k, variant)
    checks.append(Check("antisym_variants_agree", ok, wit))
    return checks


def identity_suite(h, seed=0, samples=10):
    """Every displayed identity of the trace calculus, checked exactly.

    Returns a list of Check records (sorted by name) covering: the
    antisymmetrizer eigenvalue/absorption properties and alternative
    constructions, the Levi-Civita eigenvalue relations, the rank-1
    factorisation of the trace weights, the trace normalisations, the
    R-C-C commutation, conjugation-invariance of the quantum trace, and
    the symmetrized-insertion projection identities.
    """
    rng = Random(seed)
    f = h.field
    checks = []
    p = h.detect_rank()
    u, v = h.levi_civita()
    c = h.matrix_c()
    b = h.matrix_b()
    one1 = TensorOperator.identity(h.dim, 1, f.one)
    minus_inv_q = -(f.one / h.q)

    checks.extend(antisym_checks(h, p))

    # Levi-Civita eigenvalue relations
    ok, wit = True, None
    for i in range(1, p):
        ri = h.r_slot(i, p)
        if ri @ u != u.scaled(minus_inv_q) or v @ ri != v.scaled(minus_inv_q):
            ok, wit = False, "i=%d" % i
    checks.append(Check("levi_civita_eigenvalue", ok, wit))
    checks.append(_eq_check("levi_civita_pairing", v @ u, f.one))

    # trace weights from the Levi-Civita pair
    w = f.from_qscalar(q_number(p)) / h.q ** p
    checks.append(_eq_check("weights_from_levi_civita_c",
                            c, contract_keep_first(u, v).scaled(w)))
    checks.append(_eq_check("weights_from_levi_civita_b",
                            b, contract_keep_last(u, v).scaled(w)))

    # trace normalisations
    checks.append(_eq_check("trace_weight_total_c", c.trace_full(), w))
    checks.append(_eq_check("trace_weight_total_b", b.trace_full(), w))
    checks.append(_eq_check("partial_trace_r_slot2",
                            h.quantum_trace_slots(h.R, [2]), one1))
    checks.append(_eq_check("partial_trace_r_slot1_b",
                            (b.embed(1, 2) @ h.R).trace_slots([1]), one1))

    # R commutes with C o C
    cc = c.embed(1, 2) @ c.embed(2, 2)
    checks.append(_eq_check("weights_commute_with_r", h.R @ cc, cc @ h.R))

    # conjugation invariance, single slot
    rinv = h.r_inverse()
    ok, wit = True, None
    for t in range(samples):
        x = random_slot_matrix(f, h.dim, rng)
        tr = h.quantum_trace(x)
        want = one1.scaled(tr)
        got1 = h.quantum_trace_slots(h.R @ x.embed(1, 2) @ rinv, [2])
        got2 = h.quantum_trace_slots(rinv @ x.embed(1, 2) @ h.R, [2])
        if got1 != want or got2 != want:
            ok, wit = False, "sample %d" % t
            break
    checks.append(Check("conjugation_scalar_one_slot", ok, wit))

    # conjugation invariance, both slots
    ok, wit = True, None
    for t in range(samples):
        x = random_two_slot_matrix(f, h.dim, rng)
        lhs = h.quantum_trace_slots(h.R @ x @ rinv, [1, 2]).as_scalar()
        rhs = h.quantum_trace_slots(x, [1, 2]).as_scalar()
        if lhs != rhs:
            ok, wit = False, "sample %d" % t
            break
    checks.append(Check("conjugation_scalar_two_slot", ok, wit))

    # symmetrized insertion against the Levi-Civita pair
    ok, wit = True, None
    for t in range(samples):
        x = random_slot_matrix(f, h.dim, rng)
        s = h.symmetrize(x, p)
        lam_tr = h.q * h.quantum_trace(x)
        if (v @ s) != v.scaled(lam_tr) or (s @ u) != u.scaled(lam_tr):
            ok, wit = False, "sample %d" % t
            break
    checks.append(Check("symmetrized_insertion_projects", ok, wit))

    # the symmetrized map commutes with the braid generators below the top
    ok, wit = True, None
    x = random_slot_matrix(f, h.dim, rng)
    for k in range(2, p + 2):
        s = h.symmetrize(x, k)
        for i in range(1, k):
            ri = h.r_slot(i, k)
            if s @ ri != ri @ s:
                ok, wit = False, "k=%d i=%d" % (k, i)
    checks.append(Check("symmetrized_insertion_commutes", ok, wit))

    checks.sort(key=lambda ch: ch.name)
    return checks
