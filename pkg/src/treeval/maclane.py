"""Exact p-adic factor data via inductive (MacLane) valuations on QQ[x].

An extension of the p-adic valuation to QQ[x]/(G) is represented by a
chain of augmented valuations ``[(phi_1, lam_1), ..., (phi_k, lam_k)]``,
each key polynomial ``phi_i`` approximating the corresponding
irreducible factor of G over Q_p more closely than the last.  The chain
certifies the ramification index and residue degree exactly, computes
element valuations exactly (augmenting itself on demand until the value
stabilizes), and computes residues in the canonical finite field
``GF(p, f)``.

This realizes Newton-polygon-plus-refinement factorization without any
floating precision: every certified quantity is a theorem about the
chain, not a stability heuristic.  The classical reference is MacLane's
pair of 1936 papers on valuations of polynomial rings.
"""

from __future__ import annotations

from fractions import Fraction

from treeval.errors import InvariantViolation
from treeval.gf import GF, FFElem, Poly, embedding_generator_image, map_poly_along, poly_factor, poly_is_irreducible, _solve_fp
from treeval.polys import INF, QQ, vp_fraction

_MAX_AUGMENT = 400


def _red_unit_mod_p(c: Fraction, p: int) -> int:
    """Image in F_p of a rational with nonnegative p-adic valuation."""
    num, den = c.numerator, c.denominator
    if den % p == 0:
        raise ValueError("not p-integral")
    return (num * pow(den, -1, p)) % p


def lower_hull_faces(points: list[tuple[int, Fraction]]) -> list[tuple[Fraction, int]]:
    """Faces of the lower convex hull of integer-abscissa points.

    Returns [(slope, horizontal_length)] with slopes strictly increasing.
    """
    pts = sorted(points)
    hull: list[tuple[int, Fraction]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            if (x1 - x0) * (pt[1] - y0) - (y1 - y0) * (pt[0] - x0) <= 0:
                hull.pop()
            else:
                break
        hull.append(pt)
    faces = []
    for (x0, y0), (x1, y1) in zip(hull, hull[1:]):
        faces.append((Fraction(y1 - y0, x1 - x0), x1 - x0))
    return faces


class Stage:
    """One level of an inductive valuation chain on QQ[x] over v_p."""

    __slots__ = (
        "prev", "p", "phi", "lam", "D", "reld", "reln", "bez_a", "bez_b",
        "kf", "relf", "z", "prev_gen_img", "psi", "_basis", "_valcache",
    )

    def __init__(self, prev, p: int, phi, lam):
        self.prev = prev
        self.p = p
        self.phi = phi
        self.lam = lam
        self._valcache: dict = {}
        prev_D = prev.D if prev is not None else 1
        if lam is INF:
            self.reld = 1
            self.reln = None
            self.D = prev_D
            self.bez_a = self.bez_b = None
        else:
            scaled = lam * prev_D
            self.reld = scaled.denominator
            self.D = prev_D * self.reld
            self.reln = int(lam * self.D)
            # bezout: a*reln + b*reld == 1 with 0 <= a < reld
            if self.reld == 1:
                self.bez_a, self.bez_b = 0, 1
            else:
                a = pow(self.reln, -1, self.reld)
                self.bez_a = a
                self.bez_b = (1 - a * self.reln) // self.reld
        if prev is None:
            if phi.degree != 1 or not phi.is_monic():
                raise ValueError("stage-zero key must be monic linear")
            self.kf = GF(p, 1)
            self.relf = 1
            self.z = None
            self.prev_gen_img = None
            self.psi = None
            self._basis = None
        else:
            if prev.lam is INF:
                raise InvariantViolation("cannot augment past an exact factor")
            psi = prev.graded_reduce(phi)[0].monic()
            if psi.degree < 1:
                raise InvariantViolation("key polynomial has constant residual")
            self.psi = psi
            self.relf = psi.degree
            m_new = prev.kf.m * self.relf
            self.kf = GF(p, m_new)
            if prev.kf.m == 1:
                self.prev_gen_img = self.kf.one
            elif prev.kf.m == m_new:
                self.prev_gen_img = self.kf.gen
            else:
                self.prev_gen_img = embedding_generator_image(p, prev.kf.m, m_new)
            if self.relf == 1:
                self.z = self._embed_prev(psi.coeffs[0]) * (-1)
            else:
                img = map_poly_along(psi, self.prev_gen_img, self.kf)
                roots = [
                    -g.coeffs[0]
                    for g, _ in poly_factor(img)
                    if g.degree == 1
                ]
                roots.sort(key=lambda e: e.key())
                if not roots:
                    raise InvariantViolation("residual minimal polynomial has no root")
                self.z = roots[0]
            # F_p basis of kf in terms of prev-generator powers times z powers
            basis = []
            gp = self.prev_gen_img
            acc_z = self.kf.one
            for _ in range(self.relf):
                acc_g = self.kf.one
                for _ in range(prev.kf.m):
                    basis.append((acc_g * acc_z).vec)
                    acc_g = acc_g * gp
                acc_z = acc_z * self.z
            self._basis = basis

    # -- chain structure --------------------------------------------------------

    def is_stage_zero(self) -> bool:
        return self.prev is None

    def stages(self):
        out = []
        s = self
        while s is not None:
            out.append(s)
            s = s.prev
        return list(reversed(out))

    def ramification_index(self) -> int:
        return self.D

    def residue_degree(self) -> int:
        return self.kf.m

    def chain_signature(self):
        return tuple((s.phi.coeffs, s.lam) for s in self.stages())

    def __repr__(self):
        parts = ", ".join(f"({s.phi!r},{s.lam})" for s in self.stages())
        return f"Stage<p={self.p}: {parts}>"

    def _embed_prev(self, c: FFElem) -> FFElem:
        """Map a prev-stage residue constant into this stage's field."""
        acc = self.kf.zero
        for digit in reversed(c.vec):
            acc = acc * self.prev_gen_img + self.kf.coerce(digit)
        return acc

    # -- expansion and valuation ------------------------------------------------

    def expand(self, f) -> dict[int, "Poly"]:
        """phi-adic digits of f: f = sum c_i phi^i with deg c_i < deg phi."""
        digits = {}
        i = 0
        while not f.is_zero():
            f, r = f.divmod(self.phi)
            if not r.is_zero():
                digits[i] = r
            i += 1
        return digits

    def value(self, f):
        """The valuation of a polynomial under this inductive valuation."""
        if f.is_zero():
            return INF
        key = f.coeffs
        hit = self._valcache.get(key)
        if hit is not None:
            return hit
        if self.lam is INF:
            r = f % self.phi
            if self.is_stage_zero():
                v = vp_fraction(r.coeffs[0], self.p) if not r.is_zero() else INF
            else:
                v = self.prev.value(r)
        else:
            v = INF
            for i, c in self.expand(f).items():
                base = (
                    vp_fraction(c.coeffs[0], self.p)
                    if self.is_stage_zero()
                    else self.prev.value(c)
                )
                term = base + i * self.lam if base is not INF else INF
                if term is not INF and (v is INF or term < v):
                    v = term
        self._valcache[key] = v
        return v

    # -- graded reduction ---------------------------------------------------------

    def graded_map(self, rpoly, i1: int, j1: int):
        """Map a homogeneous element of the previous graded ring into this one.

        Input: s0^i1 t0^j1 rpoly(Y0) in the previous stage's graded ring.
        Output: (c, m) with c in self.kf and m the exponent of this stage's t.
        """
        prev = self.prev
        n0, d0 = prev.reln, prev.reld
        a0, b0 = prev.bez_a, prev.bez_b
        m = i1 * n0 + j1 * d0
        acc = self.kf.zero
        for coef in reversed(rpoly.coeffs):
            acc = acc * self.z + self._embed_prev(coef)
        c = acc * self.z ** (i1 * b0 - j1 * a0)
        return c, m

    def graded_map_inv(self, c: FFElem, m: int):
        """Inverse of graded_map: express c*t^m over the previous stage."""
        prev = self.prev
        n0, d0 = prev.reln, prev.reld
        a0, b0 = prev.bez_a, prev.bez_b
        i = a0 * m
        if 0 <= i < d0:
            j = b0 * m
            cc = c
        else:
            v, i = divmod(i, d0)
            j = n0 * v + b0 * m
            cc = c * self.z ** v
        sol = _solve_fp(self.kf.p, self._basis, cc.vec)
        if sol is None:
            raise InvariantViolation("graded element outside residue basis")
        mprev = prev.kf.m
        coeffs = [
            prev.kf.elem(sol[k * mprev : (k + 1) * mprev])
            for k in range(self.relf)
        ]
        return Poly(prev.kf, coeffs), i, j

    def graded_reduce(self, f):
        """Return (rpoly, i0, j0, v): the residual image of f and its value.

        ``rpoly`` is over ``self.kf``; the class of f in the graded ring is
        s^i0 t^j0 rpoly(s^reld / t^reln), homogeneous of grade ``v``.
        """
        if f.is_zero():
            raise ValueError("zero polynomial has no graded reduction")
        p = self.p

        if self.lam is INF:
            c = f % self.phi
            if c.is_zero():
                raise ValueError("element of infinite value has no residual image")
            if self.is_stage_zero():
                v = vp_fraction(c.coeffs[0], p)
                cbar = _red_unit_mod_p(c.coeffs[0] / Fraction(p) ** v, p)
                return Poly.const(self.kf, self.kf.coerce(cbar)), 0, v, Fraction(v)
            r1, i1, j1, v = self.prev.graded_reduce(c)
            cbar, m = self.graded_map(r1, i1, j1)
            return Poly.const(self.kf, cbar), 0, m, v

        reld, reln, D = self.reld, self.reln, self.D
        if self.is_stage_zero():
            terms = {}
            for i, c in self.expand(f).items():
                vc = vp_fraction(c.coeffs[0], p)
                terms[i] = (int(vc), i * reln + int(vc) * reld, c.coeffs[0])
            vnum = min(t[1] for t in terms.values())
            if reln == 0:
                i0 = 0
            else:
                i0 = (pow(reln, -1, reld) * vnum) % reld if reld > 1 else 0
            j0 = (vnum - i0 * reln) // reld
            coeffs: dict[int, FFElem] = {}
            for i, (vc, grade, c) in terms.items():
                if grade != vnum:
                    continue
                m = (i - i0) // reld
                cbar = _red_unit_mod_p(c / Fraction(p) ** vc, p)
                coeffs[m] = self.kf.coerce(cbar)
            deg = max(coeffs)
            rpoly = Poly(self.kf, [coeffs.get(k, self.kf.zero) for k in range(deg + 1)])
            return rpoly, i0, j0, Fraction(vnum, D)

        terms2 = {}
        for i, c in self.expand(f).items():
            r1, i1, j1, vc = self.prev.graded_reduce(c)
            scaled = vc * D
            if scaled.denominator != 1:
                raise InvariantViolation("value outside the stage value group")
            terms2[i] = (scaled.numerator + i * reln, r1, i1, j1)
        vnum = min(t[0] for t in terms2.values())
        i0 = (pow(reln, -1, reld) * vnum) % reld if reld > 1 else 0
        j0 = (vnum - i0 * reln) // reld
        coeffs = {}
        for i, (vt, r1, i1, j1) in terms2.items():
            if vt != vnum:
                continue
            m = (i - i0) // reld
            cbar, mt = self.graded_map(r1, i1, j1)
            if mt != j0 - m * reln:
                raise InvariantViolation("graded bookkeeping mismatch")
            coeffs[m] = cbar
        deg = max(coeffs)
        rpoly = Poly(self.kf, [coeffs.get(k, self.kf.zero) for k in range(deg + 1)])
        return rpoly, i0, j0, Fraction(vnum, D)

    def graded_lift(self, rpoly, i: int | None = None, j: int | None = None):
        """Lift a residual polynomial back to QQ[x].

        Defaults produce the monic-in-phi lift used for key polynomials.
        """
        if self.lam is INF:
            c = rpoly.coeffs[0] if not rpoly.is_zero() else self.kf.zero
            if self.is_stage_zero():
                return Poly.const(QQ, Fraction(c.vec[0]))
            r0, i0, j0 = self.graded_map_inv(c, 0)
            return self.prev.graded_lift(r0, i0, j0)
        if i is None:
            i = 0
        if j is None:
            j = self.reln * rpoly.degree
        out = Poly.zero(QQ)
        for k, c in enumerate(rpoly.coeffs):
            if c.is_zero():
                continue
            ii = i + k * self.reld
            jj = j - k * self.reln
            if self.is_stage_zero():
                C = Poly.const(QQ, Fraction(c.vec[0]) * Fraction(self.p) ** jj)
            else:
                r0, i0, j0 = self.graded_map_inv(c, jj)
                C = self.prev.graded_lift(r0, i0, j0)
            out = out + C * self.phi**ii
        return out

    # -- MacLane steps -------------------------------------------------------------

    def is_key(self, f) -> bool:
        """Whether f is a key polynomial over this stage."""
        digits = self.expand(f)
        n = max(digits)
        if n == 0:
            return False
        lead = digits[n]
        if lead.degree != 0 or lead.coeffs[0] != 1:
            return False
        vf = self.value(f)
        if vf != n * self.lam:
            return False
        c0 = digits.get(0)
        v0 = self.value(c0) if c0 is not None else INF
        if v0 > vf:
            return n == 1
        rpoly = self.graded_reduce(f)[0]
        return poly_is_irreducible(rpoly)

    def new_keys(self, G) -> list:
        if self.value(G) is INF:
            return []
        h = self.graded_reduce(G)[0]
        if h.degree == 0:
            return []
        hfac = poly_factor(h)
        if len(hfac) == 1 and hfac[0][1] == 1:
            G0 = G.monic()
            if self.is_key(G0):
                return [G0]
        y = Poly.x(self.kf)
        keys = [self.graded_lift(u) for u, _ in hfac if u != y]
        keys.sort(key=lambda k: (k.degree, k.coeffs))
        return keys

    def new_values(self, G, P) -> list:
        """Candidate augmentation values for key P: principal Newton slopes."""
        if G == P:
            return [INF]
        digits = {}
        q = G
        i = 0
        while not q.is_zero():
            q, r = q.divmod(P)
            if not r.is_zero():
                digits[i] = r
            i += 1
        vP = self.value(P)
        points = [(i, self.value(c)) for i, c in digits.items()]
        points = [(i, v) for i, v in points if v is not INF]
        out = []
        if 0 not in digits:
            out.append(INF)
        for slope, _ in lower_hull_faces(points):
            mu = -slope
            if mu > vP:
                out.append(mu)
        return sorted([v for v in out if v is not INF]) + (
            [INF] if INF in out else []
        )

    def augment(self, keypol, keyval) -> "Stage":
        """MacLane augmentation, collapsing same-degree key replacements."""
        if keypol.degree == self.phi.degree:
            if self.is_stage_zero():
                return Stage(None, self.p, keypol, keyval)
            return Stage(self.prev, self.p, keypol, keyval)
        return Stage(self, self.p, keypol, keyval)

    def augmentations(self, G) -> list:
        out = []
        for k in self.new_keys(G):
            for v in self.new_values(G, k):
                out.append(self.augment(k, v))
        return out

    def projection(self, G) -> int:
        """Horizontal length of the principal face for G; 1 means terminal."""
        v = self.value(G)
        if v is INF:
            return 1
        digits = self.expand(G)
        idxs = [
            i
            for i, c in digits.items()
            if (self.prev.value(c) if not self.is_stage_zero() else vp_fraction(c.coeffs[0], self.p))
            + i * self.lam
            == v
        ]
        return max(idxs) - min(idxs)


def decompose(G, p: int) -> list["LocalFactor"]:
    """All extensions of v_p to QQ[x]/(G) for monic squarefree G over QQ.

    Deterministic order: by (residue degree, ramification index, chain
    signature).
    """
    if not G.is_monic():
        raise ValueError("G must be monic")
    x = Poly.x(QQ)
    if G.degree == 1:
        stage = Stage(None, p, G, INF)
        return [LocalFactor(p, G, stage)]
    points = [
        (i, vp_fraction(c, p)) for i, c in enumerate(G.coeffs) if c != 0
    ]
    seeds = []
    if G.coeffs[0] == 0:
        seeds.append(Stage(None, p, x, INF))
    for slope, _ in lower_hull_faces([pt for pt in points if pt[1] is not INF]):
        seeds.append(Stage(None, p, x, -slope))
    terminals = []
    for seed in seeds:
        if seed.lam is INF:
            terminals.append(seed)
            continue
        work = [seed]
        guard = 0
        while work:
            guard += 1
            if guard > _MAX_AUGMENT:
                raise InvariantViolation("factor search did not terminate")
            v = work.pop()
            for a in v.augmentations(G):
                if a.projection(G) == 1:
                    terminals.append(a)
                else:
                    work.append(a)
    factors = [LocalFactor(p, G, t) for t in terminals]
    if sum(f.e * f.f for f in factors) != G.degree:
        raise InvariantViolation("local degrees do not sum to the global degree")
    factors.sort(key=lambda w: (w.f, w.e, w._terminal.chain_signature()))
    return factors


class LocalFactor:
    """One irreducible factor of G over Q_p, as a self-improving approximant.

    Provides exact element valuations (normalized so v(p) = 1, values in
    (1/e)Z), exact residues in GF(p, f), residue lifts, and a monic key
    polynomial approximating the true factor to any requested quality.
    """

    def __init__(self, p: int, G, terminal: Stage):
        self.p = p
        self.G = G
        self._terminal = terminal
        self.exact = terminal.lam is INF
        self.e = terminal.ramification_index()
        self.f = terminal.residue_degree()
        self.kf = terminal.kf
        self.degree = terminal.phi.degree
        if self.e * self.f != self.degree:
            raise InvariantViolation("e*f != local degree at terminal stage")
        if self.exact:
            self._pair = None
        else:
            self._pair = (terminal, self._augment_stage(terminal))

    def _augment_stage(self, stage: Stage) -> Stage:
        auglist = stage.augmentations(self.G)
        if len(auglist) != 1:
            raise InvariantViolation("terminal branch split under augmentation")
        nxt = auglist[0]
        if nxt.ramification_index() != self.e or nxt.residue_degree() != self.f:
            raise InvariantViolation("invariants not stable past terminal stage")
        return nxt

    def _step(self):
        old, new = self._pair
        self._pair = (new, self._augment_stage(new))

    def current_key(self):
        """The newest key polynomial (monic, degree e*f)."""
        if self.exact:
            return self._terminal.phi
        return self._pair[1].phi

    def current_key_value(self):
        if self.exact:
            return INF
        return self._pair[1].lam

    def value_of_poly(self, fpoly):
        """Exact valuation of f(alpha) for the root alpha of this factor."""
        if fpoly.is_zero():
            return INF
        if self.exact:
            return self._terminal.value(fpoly)
        W, V = self._pair
        q, r = fpoly.divmod(V.phi)
        Wf = W.value(fpoly)
        Wr = W.value(r)
        guard = 0
        while Wr != Wf:
            guard += 1
            if guard > _MAX_AUGMENT:
                raise InvariantViolation("element valuation did not stabilize")
            vq = V.value(q)
            Vf = min(Wr, V.lam + vq) if vq is not INF else Wr
            self._step()
            W, V = self._pair
            q, r = fpoly.divmod(V.phi)
            Wf = Vf
            Wr = W.value(r)
        return Wf

    def reduce_poly(self, fpoly) -> FFElem:
        """Residue in GF(p, f) of f(alpha); requires value >= 0."""
        v = self.value_of_poly(fpoly)
        if v is not INF and v < 0:
            raise ValueError("negative valuation, no residue")
        if v is INF or v > 0:
            return self.kf.zero
        if self.exact:
            rpoly, _, _, v0 = self._terminal.graded_reduce(fpoly)
            if v0 != 0 or rpoly.degree != 0:
                raise InvariantViolation("exact-stage residue not constant")
            return rpoly.coeffs[0]
        guard = 0
        while True:
            guard += 1
            if guard > _MAX_AUGMENT:
                raise InvariantViolation("residue computation did not stabilize")
            W = self._pair[1]
            rpoly, _, _, v0 = W.graded_reduce(fpoly)
            if v0 == 0 and rpoly.degree == 0:
                return rpoly.coeffs[0]
            self._step()

    def lift_residue(self, c: FFElem):
        """A polynomial with residue c and value 0 (c != 0)."""
        if c.is_zero():
            return Poly.zero(QQ)
        stage = self._terminal if self.exact else self._pair[1]
        return stage.graded_lift(Poly.const(stage.kf, c), 0, 0)

    def improve_to(self, target):
        """Augment until the key value is at least ``target``."""
        if self.exact:
            return
        guard = 0
        while self._pair[1].lam < target:
            guard += 1
            if guard > _MAX_AUGMENT:
                raise InvariantViolation("approximation did not improve")
            self._step()

    def __repr__(self):
        return f"LocalFactor(p={self.p}, e={self.e}, f={self.f}, deg={self.degree})"


def separate(factors: list[LocalFactor]) -> None:
    """Augment each factor until its key separates it from all siblings.

    Afterwards ``w.value_of_poly(w.current_key())`` strictly exceeds
    ``u.value_of_poly(w.current_key())`` for every sibling u != w, which
    makes key evaluation a certificate of identity.
    """
    if len(factors) <= 1:
        return
    for w in factors:
        if w.exact:
            continue
        guard = 0
        while True:
            guard += 1
            if guard > _MAX_AUGMENT:
                raise InvariantViolation("separation did not converge")
            key = w.current_key()
            own = w.current_key_value()
            others = [
                u.value_of_poly(key) for u in factors if u is not w
            ]
            if all(o is not INF and own > o for o in others):
                break
            w._step()
