"""Exact arithmetic in finite field towers F_p[t]/(g).

A single ambient field F_{p^{s*N}} hosts every subfield needed by a
computation; membership in a subfield is decided by Frobenius fixedness,
so no embedding tables are ever required.  The modulus is always the
lexicographically smallest monic irreducible of the right degree, which
makes every field object reproducible without seeds.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (coefficient lists, constant term first)
# ---------------------------------------------------------------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_divmod(a, b, p):
    a = list(a)
    db, da = len(b) - 1, len(a) - 1
    if db < 0:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(da - db + 1, 0)
    while len(a) - 1 >= db and any(a):
        _trim(a)
        if len(a) - 1 < db:
            break
        shift = len(a) - 1 - db
        c = (a[-1] * inv_lead) % p
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
    return _trim(q), _trim(a)


def _poly_mod(a, b, p):
    return _poly_divmod(a, b, p)[1]


def _poly_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _poly_powmod(base, e, modulus, p):
    result = [1]
    base = _poly_mod(list(base), modulus, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), modulus, p)
        base = _poly_mod(_poly_mul(base, base, p), modulus, p)
        e >>= 1
    return result


def is_irreducible(coeffs, p: int) -> bool:
    """Monic polynomial irreducibility over F_p.

    A monic f of degree m >= 2 is irreducible iff it has no irreducible
    factor of degree <= m/2; gcd(x^(p^j) - x, f) collects exactly the
    factors of degree dividing j, so scanning j = 1..m/2 decides it and
    rejects composites as soon as a small factor shows up.
    """
    f = _trim(list(coeffs))
    m = len(f) - 1
    if m < 1 or f[-1] != 1:
        return False
    if m == 1:
        return True
    if f[0] == 0:  # divisible by t
        return False
    h = [0, 1]  # x
    for _j in range(1, m // 2 + 1):
        h = _poly_powmod(h, p, f, p)
        g = list(h)
        while len(g) < 2:
            g.append(0)
        g[1] = (g[1] - 1) % p
        g = _trim(g)
        if not g:
            # x^(p^j) = x mod f: every factor has degree dividing j < m
            return False
        if len(_poly_gcd(g, f, p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, m: int):
    """Lex-smallest monic irreducible of degree m over F_p.

    Candidates are ordered by their coefficient sequence compared from the
    constant term up, so (0,...,0) i.e. t^m comes first.
    """
    for c0 in range(p):
        if c0 == 0:
            # zero constant term means divisible by t; only t itself qualifies
            if m == 1:
                return (0, 1)
            continue
        for tail in product(range(p), repeat=m - 1):
            cand = (c0,) + tail + (1,)
            if is_irreducible(cand, p):
                return cand
    raise FieldError(f"no irreducible of degree {m} over F_{p}")  # unreachable


# ---------------------------------------------------------------------------
# field and element objects
# ---------------------------------------------------------------------------

class FieldElement:
    """An element of a Field, as coordinates in the power basis of t."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def __add__(self, other):
        return FieldElement(self.field, self.field.add_t(self.coeffs, other.coeffs))

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub_t(self.coeffs, other.coeffs))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg_t(self.coeffs))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul_t(self.coeffs, other.coeffs))

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow_t(self.coeffs, e))

    def __truediv__(self, other):
        return self * other.inverse()

    def inverse(self):
        return FieldElement(self.field, self.field.inv_t(self.coeffs))

    def is_zero(self):
        return not any(self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, FieldElement)
                and self.coeffs == other.coeffs
                and self.field.p == other.field.p
                and self.field.modulus == other.field.modulus)

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"FieldElement({list(self.coeffs)})"


class Field:
    """F_{q^N} with q = p^s, realized as F_p[t]/(g), g the canonical modulus."""

    def __init__(self, p: int, s: int, N: int):
        if not is_prime(p):
            raise FieldError(f"p = {p} is not prime")
        if s < 1 or N < 1:
            raise FieldError("s and N must be positive")
        self.p = p
        self.s = s
        self.N = N
        self.m = s * N  # degree over F_p
        self.q = p ** s
        self.modulus = smallest_irreducible(p, self.m)
        self._zero = (0,) * self.m
        one = [0] * self.m
        one[0] = 1
        self._one = tuple(one)
        # t^(m+j) mod g for reducing products
        self._red = []
        if self.m > 1:
            cur = [(-c) % p for c in self.modulus[:-1]]  # t^m mod g
            self._red.append(tuple(cur))
            for _ in range(self.m - 2):
                nxt = [0] + cur[:-1]
                lead = cur[-1]
                if lead:
                    for i in range(self.m):
                        nxt[i] = (nxt[i] - lead * self.modulus[i]) % p
                cur = nxt
                self._red.append(tuple(cur))
        self._subfield_cache = {}
        self._embed_cache = {}

    # -- tuple-level arithmetic -------------------------------------------

    def add_t(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub_t(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg_t(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul_t(self, a, b):
        p, m = self.p, self.m
        if m == 1:
            return ((a[0] * b[0]) % p,)
        conv = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        res = [c % p for c in conv[:m]]
        for j in range(m - 1):
            c = conv[m + j] % p
            if c:
                row = self._red[j]
                for i in range(m):
                    res[i] = (res[i] + c * row[i]) % p
        return tuple(res)

    def pow_t(self, a, e):
        if e < 0:
            return self.pow_t(self.inv_t(a), -e)
        result = self._one
        base = a
        while e:
            if e & 1:
                result = self.mul_t(result, base)
            base = self.mul_t(base, base)
            e >>= 1
        return result

    def inv_t(self, a):
        if not any(a):
            raise ZeroDivisionError("inversion of zero field element")
        p = self.p

        def poly_sub(x, y):
            n = max(len(x), len(y))
            x = x + [0] * (n - len(x))
            y = y + [0] * (n - len(y))
            return _trim([(u - v) % p for u, v in zip(x, y)])

        r0, r1 = list(self.modulus), _trim(list(a))
        s0, s1 = [], [1]
        while r1:
            q, r = _poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, poly_sub(s0, _poly_mul(q, s1, p))
        # r0 is the gcd, a nonzero constant since the modulus is irreducible
        inv_c = pow(r0[0], p - 2, p)
        res = [(c * inv_c) % p for c in s0]
        res += [0] * (self.m - len(res))
        return tuple(res[:self.m])

    # -- element constructors ---------------------------------------------

    def zero(self):
        return FieldElement(self, self._zero)

    def one(self):
        return FieldElement(self, self._one)

    def from_int(self, c: int):
        v = [0] * self.m
        v[0] = c % self.p
        return FieldElement(self, tuple(v))

    def element(self, coeffs):
        coeffs = tuple(c % self.p for c in coeffs)
        if len(coeffs) != self.m:
            raise FieldError(f"expected {self.m} coordinates, got {len(coeffs)}")
        return FieldElement(self, coeffs)

    def gen(self):
        """The class of t."""
        if self.m == 1:
            # t reduces to a constant mod the linear modulus
            return FieldElement(self, ((-self.modulus[0]) % self.p,))
        v = [0] * self.m
        v[1] = 1
        return FieldElement(self, tuple(v))

    def elements(self):
        """All p^m elements in lex order on coefficient tuples."""
        for digits in product(range(self.p), repeat=self.m):
            yield FieldElement(self, digits)

    def size(self) -> int:
        return self.p ** self.m

    # -- Frobenius and subfields ------------------------------------------

    def frobenius(self, x: FieldElement, e: int) -> FieldElement:
        """x^(q^e) by repeated q-th powering."""
        if e < 0:
            raise FieldError("Frobenius exponent must be nonnegative")
        t = x.coeffs
        for _ in range(e):
            t = self.pow_t(t, self.q)
        return FieldElement(self, t)

    def frobenius_p(self, x: FieldElement, j: int) -> FieldElement:
        """x^(p^j), the absolute Frobenius power."""
        t = x.coeffs
        for _ in range(j):
            t = self.pow_t(t, self.p)
        return FieldElement(self, t)

    def in_subfield(self, x: FieldElement, e: int) -> bool:
        if self.N % e != 0:
            raise FieldError(f"F_q^{e} is not a subfield of F_q^{self.N}")
        return self.frobenius(x, e).coeffs == x.coeffs

    def subfield(self, e: int, method: str = "filter"):
        """All q^e elements of F_{q^e} inside this field, lex-sorted.

        ``filter`` scans the whole ambient field; ``span`` solves for the
        fixed space of Frobenius^e by linear algebra over F_p.  Both agree
        as sets; span is the fast path used by the counting engines.
        """
        if self.N % e != 0:
            raise FieldError(f"e = {e} does not divide N = {self.N}")
        key = (e, method)
        if key in self._subfield_cache:
            return self._subfield_cache[key]
        if method == "filter":
            out = [x for x in self.elements() if self.in_subfield(x, e)]
        elif method == "span":
            out = self._subfield_span(e)
        else:
            raise FieldError(f"unknown subfield method {method!r}")
        if len(out) != self.q ** e:
            raise FieldError("subfield enumeration produced the wrong cardinality")
        self._subfield_cache[key] = out
        return out

    def _subfield_span(self, e: int):
        p, m = self.p, self.m
        # columns: Frobenius^e of the power basis
        cols = []
        for i in range(m):
            basis = [0] * m
            basis[i] = 1
            img = self.pow_t(tuple(basis), self.q ** e)
            cols.append(list(img))
        # kernel of (M - I) over F_p
        rows = [[(cols[j][i] - (1 if i == j else 0)) % p for j in range(m)]
                for i in range(m)]
        pivots = []
        r = 0
        for c in range(m):
            pivot = next((i for i in range(r, m) if rows[i][c]), None)
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            inv = pow(rows[r][c], p - 2, p)
            rows[r] = [(v * inv) % p for v in rows[r]]
            for i in range(m):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
        free = [c for c in range(m) if c not in pivots]
        basis_vecs = []
        for fc in free:
            v = [0] * m
            v[fc] = 1
            for ri, pc in enumerate(pivots):
                v[pc] = (-rows[ri][fc]) % p
            basis_vecs.append(tuple(v))
        out = set()
        for combo in product(range(p), repeat=len(basis_vecs)):
            acc = [0] * m
            for c, vec in zip(combo, basis_vecs):
                if c:
                    for i in range(m):
                        acc[i] = (acc[i] + c * vec[i]) % p
            out.add(tuple(acc))
        return [FieldElement(self, t) for t in sorted(out)]

    # -- canonical embedding of the base field F_q -------------------------

    def embed_base(self, base: "Field"):
        """Map coefficient tuples of the base field F_q into this field.

        The base generator goes to the lex-smallest root of the base modulus
        among the F_q elements of this field; any root works since the
        subfields are Frobenius-stable, so we pick deterministically.
        """
        if base.p != self.p or base.s != self.s or base.N != 1:
            raise FieldError("base field must be F_q = F_{p^s} for this tower")
        key = (base.p, base.s)
        if key in self._embed_cache:
            return self._embed_cache[key]
        if base.m == 1:
            table = {}

            def emb(coeffs, _table=table):
                v = _table.get(coeffs)
                if v is None:
                    v = self.from_int(coeffs[0])
                    _table[coeffs] = v
                return v
        else:
            root = None
            for cand in self.subfield(1, method="span"):
                val = self.zero()
                xp = self.one()
                for c in base.modulus:
                    if c:
                        val = val + self.from_int(c) * xp
                    xp = xp * cand
                if val.is_zero():
                    root = cand
                    break
            if root is None:
                raise FieldError("no root of base modulus found in ambient field")
            powers = [self.one()]
            for _ in range(base.m - 1):
                powers.append(powers[-1] * root)
            table = {}

            def emb(coeffs, _powers=powers, _table=table):
                v = _table.get(coeffs)
                if v is None:
                    v = self.zero()
                    for c, pw in zip(coeffs, _powers):
                        if c:
                            v = v + self.from_int(c) * pw
                    _table[coeffs] = v
                return v
        self._embed_cache[key] = emb
        return emb

    def __repr__(self):
        return f"Field(p={self.p}, s={self.s}, N={self.N})"

    def __eq__(self, other):
        return (isinstance(other, Field) and self.p == other.p
                and self.s == other.s and self.N == other.N)

    def __hash__(self):
        return hash((self.p, self.s, self.N))


@lru_cache(maxsize=None)
def field(p: int, s: int, N: int) -> Field:
    """Shared, cached field objects; repeated calls are identical."""
    return Field(p, s, N)


def build_field(p: int, s: int, N: int) -> Field:
    return field(p, s, N)
