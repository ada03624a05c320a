"""Finite fields F_{p^m} with a deterministic canonical modulus.

The modulus for F_{p^m} is the lexicographically least monic irreducible
of degree m over F_p, where candidates x^m + c_{m-1} x^{m-1} + ... + c_0
are ordered by the integer c_0 + c_1 p + ... + c_{m-1} p^{m-1}.  This
makes residue fingerprints and sibling orderings reproducible across
runs and serializable.

Elements are coefficient tuples over F_p (constant first).  Polynomial
factorization over F_q is deterministic: distinct-degree splitting plus
equal-degree splitting driven by an enumerated (not random) sequence of
trial polynomials.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from treeval.polys import Poly


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def primes_up_to(bound: int) -> list[int]:
    return [n for n in range(2, bound + 1) if is_prime(n)]


class FFElem:
    """Element of F_{p^m}: tuple of ints in [0, p), constant first."""

    __slots__ = ("field", "vec")

    def __init__(self, field, vec):
        self.field = field
        self.vec = tuple(vec)

    def __eq__(self, other):
        if isinstance(other, int):
            return self == self.field.coerce(other)
        return (
            isinstance(other, FFElem)
            and self.field == other.field
            and self.vec == other.vec
        )

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.vec))

    def __repr__(self):
        return f"FF({self.field.p}^{self.field.m}:{','.join(map(str, self.vec))})"

    def is_zero(self):
        return all(c == 0 for c in self.vec)

    def __add__(self, other):
        other = self.field.coerce(other)
        p = self.field.p
        return FFElem(self.field, [(a + b) % p for a, b in zip(self.vec, other.vec)])

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FFElem(self.field, [(-a) % p for a in self.vec])

    def __sub__(self, other):
        return self + (-self.field.coerce(other))

    def __rsub__(self, other):
        return self.field.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.field.coerce(other)
        if not isinstance(other, FFElem):
            return NotImplemented
        return self.field._mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        f = self.field
        if n < 0:
            return f.inv(self) ** (-n)
        result = f.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def key(self):
        """Canonical sort key."""
        return self.vec


class FF:
    """The finite field F_{p^m} on the canonical modulus."""

    def __init__(self, p: int, m: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.m = m
        self.char = p
        self.size = p**m
        self.modulus = _canonical_modulus(p, m)
        self.zero = FFElem(self, [0] * m)
        self.one = FFElem(self, [1 % p] + [0] * (m - 1))
        self.gen = FFElem(self, [0, 1] + [0] * (m - 2)) if m >= 2 else self.one

    def __repr__(self):
        return f"GF({self.p}^{self.m})"

    def __eq__(self, other):
        return isinstance(other, FF) and self.p == other.p and self.m == other.m

    def __hash__(self):
        return hash(("FF", self.p, self.m))

    def coerce(self, x) -> FFElem:
        if isinstance(x, FFElem):
            if x.field is self or x.field == self:
                return FFElem(self, x.vec)
            raise TypeError(f"element of {x.field} in {self}")
        if isinstance(x, int):
            return FFElem(self, [x % self.p] + [0] * (self.m - 1))
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def elem(self, vec) -> FFElem:
        vec = list(vec)
        if len(vec) > self.m:
            raise ValueError(f"vector of length {len(vec)} in {self!r}")
        vec = vec + [0] * (self.m - len(vec))
        return FFElem(self, [c % self.p for c in vec])

    def _mul(self, a: FFElem, b: FFElem) -> FFElem:
        p, m = self.p, self.m
        if m == 1:
            return FFElem(self, [(a.vec[0] * b.vec[0]) % p])
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a.vec):
            if x == 0:
                continue
            for j, y in enumerate(b.vec):
                prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for i in range(len(prod) - 1, m - 1, -1):
            c = prod[i]
            if c == 0:
                continue
            prod[i] = 0
            for j in range(m):
                prod[i - m + j] = (prod[i - m + j] - c * mod[j]) % p
        return FFElem(self, prod[:m])

    def inv(self, a: FFElem) -> FFElem:
        if a.is_zero():
            raise ZeroDivisionError("inverse of zero in finite field")
        return a ** (self.size - 2)

    def elements(self):
        """All elements in canonical (tuple-lexicographic) order."""
        for vec in itertools.product(range(self.p), repeat=self.m):
            yield FFElem(self, vec)

    def frobenius(self, a: FFElem) -> FFElem:
        return a**self.p


@lru_cache(maxsize=None)
def GF(p: int, m: int = 1) -> FF:
    return FF(p, m)


def _poly_is_irreducible_fp(p: int, coeffs: tuple[int, ...]) -> bool:
    """Rabin test for a monic polynomial over F_p given as an int tuple."""
    field = GF(p, 1)
    f = Poly(field, [field.coerce(c) for c in coeffs])
    return poly_is_irreducible(f)


@lru_cache(maxsize=None)
def _canonical_modulus(p: int, m: int) -> tuple[int, ...]:
    """Non-leading coefficients of the canonical modulus of F_{p^m}."""
    if m == 1:
        return (0,)
    for n in range(p**m):
        digits = []
        k = n
        for _ in range(m):
            digits.append(k % p)
            k //= p
        if _poly_is_irreducible_fp(p, tuple(digits) + (1,)):
            return tuple(digits)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


# -- polynomial algorithms over F_q -------------------------------------------


def poly_powmod(base: Poly, n: int, mod: Poly) -> Poly:
    result = Poly.one(base.field)
    base = base % mod
    while n:
        if n & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        n >>= 1
    return result


def poly_is_irreducible(f: Poly) -> bool:
    """Rabin irreducibility test over F_q."""
    field = f.field
    n = f.degree
    if n <= 0:
        return False
    if n == 1:
        return True
    q = field.size
    x = Poly.x(field)
    # x^(q^n) == x mod f
    xq = x
    for _ in range(n):
        xq = poly_powmod(xq, q, f)
    if xq != x % f:
        return False
    # for each prime divisor d of n: gcd(x^(q^(n/d)) - x, f) == 1
    for d in _prime_divisors(n):
        e = n // d
        xe = x
        for _ in range(e):
            xe = poly_powmod(xe, q, f)
        if f.gcd(xe - x).degree != 0:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def poly_squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Squarefree decomposition over F_q: [(g, m)] with prod g^m = monic(f).

    Standard characteristic-p algorithm; parts that are p-th powers are
    handled through coefficient-wise p-th roots.
    """
    p = f.field.char
    out: dict[int, Poly] = {}

    def merge(g: Poly, mult: int):
        if g.degree > 0:
            out[mult] = out[mult] * g if mult in out else g

    def sff(f: Poly, outer: int):
        df = f.derivative()
        if df.is_zero():
            sff(_pth_root_poly(f), outer * p)
            return
        c = f.gcd(df)
        w = f // c
        i = 1
        while w.degree > 0:
            y = w.gcd(c)
            merge(w // y, outer * i)
            i += 1
            w = y
            c = c // y
        if c.degree > 0:
            sff(_pth_root_poly(c), outer * p)

    sff(f.monic(), 1)
    return [(g, m) for m, g in sorted(out.items())]


def _pth_root_poly(f: Poly) -> Poly:
    """For f = g(x^p) over F_{p^m}, return g (taking p-th roots of coefficients)."""
    field = f.field
    p = field.char
    root_pow = field.size // p  # a^(q/p) is the p-th root in F_q
    out = []
    for i in range(0, f.degree + 1, p):
        out.append(f[i] ** root_pow)
    return Poly(field, out)


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    """Split a monic squarefree f into products of irreducibles of equal degree."""
    field = f.field
    q = field.size
    out = []
    x = Poly.x(field)
    h = x
    rest = f
    d = 0
    while rest.degree > 0:
        d += 1
        if 2 * d > rest.degree:
            out.append((rest, rest.degree))
            break
        h = poly_powmod(h, q, rest)
        g = rest.gcd(h - x)
        if g.degree > 0:
            out.append((g, d))
            rest = rest // g
            h = h % rest
    return out


def _equal_degree_split(f: Poly, d: int) -> list[Poly]:
    """Factor monic squarefree f whose irreducible factors all have degree d."""
    field = f.field
    n = f.degree
    if n == d:
        return [f]
    q = field.size
    p = field.char
    work = [f]
    done: list[Poly] = []
    trial = 0
    while work:
        g = work.pop()
        if g.degree == d:
            done.append(g)
            continue
        split = None
        while split is None:
            if trial > 100000:
                raise RuntimeError("equal-degree splitting did not converge")
            a = _trial_poly(field, trial, g.degree)
            trial += 1
            if a.degree <= 0:
                continue
            if p == 2:
                # trace map T(a) = a + a^2 + a^4 + ... over F_{2^k}, kd terms
                t = a % g
                acc = t
                steps = field.m * d
                for _ in range(steps - 1):
                    t = (t * t) % g
                    acc = acc + t
                cand = g.gcd(acc)
            else:
                e = (q**d - 1) // 2
                b = poly_powmod(a, e, g)
                cand = g.gcd(b - Poly.one(field))
            if 0 < cand.degree < g.degree:
                split = cand
        work.append(split)
        work.append(g // split)
    return done


def _elem_from_index(field: FF, r: int) -> FFElem:
    vec = []
    for _ in range(field.m):
        vec.append(r % field.p)
        r //= field.p
    return FFElem(field, vec)


def _trial_poly(field, index: int, degmax: int) -> Poly:
    """Deterministic enumeration of trial polynomials of degree < max(2, degmax)."""
    deg_bound = max(2, degmax)
    q = field.size
    coeffs = []
    k = index + q  # skip the constant-only block
    while k:
        k, r = divmod(k, q)
        coeffs.append(_elem_from_index(field, r))
        if len(coeffs) >= deg_bound:
            break
    return Poly(field, coeffs)


def poly_factor(f: Poly) -> list[tuple[Poly, int]]:
    """Full factorization over F_q: list of (monic irreducible, multiplicity).

    Deterministic: factors are sorted by (degree, coefficient key).
    """
    field = f.field
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    result: list[tuple[Poly, int]] = []
    f = f.monic()
    if f.degree == 0:
        return []
    for g, mult in poly_squarefree_decomposition(f):
        for part, d in _distinct_degree(g):
            for irr in _equal_degree_split(part, d):
                result.append((irr.monic(), mult))
    result.sort(key=lambda fm: (fm[0].degree, [c.key() for c in fm[0].coeffs]))
    return result


def poly_roots(f: Poly) -> list[FFElem]:
    """Roots in F_q in canonical order, without multiplicity."""
    roots = []
    for g, _ in poly_factor(f):
        if g.degree == 1:
            roots.append(-g.coeffs[0])
    roots.sort(key=lambda e: e.key())
    return roots


# -- embeddings and relative minimal polynomials -------------------------------


@lru_cache(maxsize=None)
def embedding_generator_image(p: int, a: int, b: int) -> FFElem:
    """Canonical image of the generator of F_{p^a} under F_{p^a} -> F_{p^b}.

    The image is the least root (canonical element order) of the modulus
    of F_{p^a} inside F_{p^b}.  Requires a | b.
    """
    if b % a != 0:
        raise ValueError(f"no embedding F_{p}^{a} -> F_{p}^{b}")
    small, big = GF(p, a), GF(p, b)
    if a == 1:
        return big.one
    if a == b:
        return big.gen
    mod_small = Poly(
        big, [big.coerce(c) for c in small.modulus] + [big.one]
    )
    roots = poly_roots(mod_small)
    if not roots:
        raise RuntimeError("modulus has no root in extension field")
    return roots[0]


def embed(elem: FFElem, big: FF) -> FFElem:
    """Map an element along the canonical embedding into a bigger field."""
    small = elem.field
    if small.p != big.p or big.m % small.m != 0:
        raise ValueError("no embedding between these fields")
    if small.m == big.m:
        return big.coerce(elem)
    img = embedding_generator_image(small.p, small.m, big.m)
    acc = big.zero
    for c in reversed(elem.vec):
        acc = acc * img + big.coerce(c)
    return acc


def map_poly_along(f: Poly, gen_image: FFElem, big: FF) -> Poly:
    """Map a polynomial over F_{p^a} into F_{p^b}[x], sending the
    generator of the coefficient field to ``gen_image``."""
    out = []
    for c in f.coeffs:
        acc = big.zero
        for digit in reversed(c.vec):
            acc = acc * gen_image + big.coerce(digit)
        out.append(acc)
    return Poly(big, out)


def relative_minpoly(a: FFElem, sub_m: int) -> Poly:
    """Minimal polynomial of a over the canonical subfield F_{p^sub_m}.

    Returned over GF(p, sub_m); computed from the Frobenius orbit of a
    under x -> x^(p^sub_m).
    """
    field = a.field
    p = field.p
    if field.m % sub_m != 0:
        raise ValueError("not a subfield")
    sub = GF(p, sub_m)
    q = p**sub_m
    # orbit of a under Frobenius^sub_m
    orbit = [a]
    cur = a**q
    while cur != a:
        orbit.append(cur)
        cur = cur**q
    # product of (x - b) over the orbit, coefficients lie in the subfield
    prod = Poly.one(field)
    for b in orbit:
        prod = prod * Poly(field, [-b, field.one])
    # rewrite coefficients as subfield elements
    img = embedding_generator_image(p, sub_m, field.m) if sub_m > 1 else field.one
    out = []
    for c in prod.coeffs:
        out.append(_express_over_subfield(c, sub, img))
    return Poly(sub, out)


def relative_minpoly_with_embedding(a: FFElem, sub: FF, sub_gen_image: FFElem) -> Poly:
    """Minimal polynomial of a over the subfield spanned by sub_gen_image.

    Unlike :func:`relative_minpoly`, the subfield embedding is the
    explicitly given one (e.g. induced by a valuation), not the
    canonical one.
    """
    field = a.field
    sub_basis = []
    acc = field.one
    for _ in range(sub.m):
        sub_basis.append(acc)
        acc = acc * sub_gen_image
    powers = [field.one]
    for k in range(1, field.m + 1):
        powers.append(powers[-1] * a)
        vecs = [(powers[j] * b).vec for j in range(k) for b in sub_basis]
        sol = _solve_fp(field.p, vecs, powers[k].vec)
        if sol is not None:
            coeffs = [
                -sub.elem(sol[j * sub.m : (j + 1) * sub.m]) for j in range(k)
            ]
            return Poly(sub, coeffs + [sub.one])
    raise ValueError("no relative minimal polynomial found")


def _express_over_subfield(c: FFElem, sub: FF, gen_image: FFElem) -> FFElem:
    """Write c in F_{p^b} as an element of the subfield F_{p^a} (must lie there)."""
    field = c.field
    if sub.m == 1:
        if any(x != 0 for x in c.vec[1:]):
            raise ValueError("element not in prime subfield")
        return sub.coerce(c.vec[0])
    # solve sum_i y_i * gen_image^i = c with y_i in F_p, i < sub.m
    basis = []
    acc = field.one
    for _ in range(sub.m):
        basis.append(acc.vec)
        acc = acc * gen_image
    sol = _solve_fp(field.p, basis, c.vec)
    if sol is None:
        raise ValueError("element not in subfield")
    return sub.elem(sol)


def _solve_fp(p, basis_rows, target):
    """Solve sum x_i * basis_rows[i] = target over F_p; rows are int tuples."""
    ncols = len(target)
    nrows = len(basis_rows)
    # build augmented matrix of the transposed system
    mat = [[basis_rows[r][c] % p for r in range(nrows)] + [target[c] % p]
           for c in range(ncols)]
    rank_cols = []
    row = 0
    for col in range(nrows):
        piv = None
        for r in range(row, ncols):
            if mat[r][col] % p != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        inv = pow(mat[row][col], -1, p)
        mat[row] = [(v * inv) % p for v in mat[row]]
        for r in range(ncols):
            if r != row and mat[r][col] % p != 0:
                f = mat[r][col]
                mat[r] = [(a - f * b) % p for a, b in zip(mat[r], mat[row])]
        rank_cols.append(col)
        row += 1
    # check consistency
    for r in range(row, ncols):
        if mat[r][-1] % p != 0:
            return None
    sol = [0] * nrows
    for r, col in enumerate(rank_cols):
        sol[col] = mat[r][-1] % p
    return sol
