"""Sparse multivariate polynomials with Gaussian-rational coefficients.

Terms live in a dict mapping exponent tuples to nonzero
:class:`GaussRational` coefficients.  Instances are treated as immutable:
no method mutates ``self.terms`` after construction.

Monomials are compared in graded lexicographic order (total degree first,
ties broken by plain tuple comparison, so ``x0`` beats ``x1``).
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .gauss import ONE, ZERO, GaussRational, gq

Exponent = tuple[int, ...]


def gradlex_key(e: Exponent) -> tuple:
    return (sum(e), e)


class MultiPoly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        self.nvars = nvars
        clean: dict[Exponent, GaussRational] = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
                if any(k < 0 for k in e):
                    raise ValueError(f"negative exponent in {e}")
                c = gq(c)
                if c:
                    clean[e] = clean[e] + c if e in clean else c
                    if not clean[e]:
                        del clean[e]
        self.terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, nvars: int, terms: dict) -> "MultiPoly":
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._from_clean(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        c = gq(c)
        return cls._from_clean(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def one(cls, nvars: int) -> "MultiPoly":
        return cls.constant(nvars, ONE)

    @classmethod
    def var(cls, nvars: int, i: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._from_clean(nvars, {tuple(e): ONE})

    @classmethod
    def monomial(cls, e: Sequence[int], c=ONE) -> "MultiPoly":
        return cls(len(e), {tuple(e): c})

    @classmethod
    def gens(cls, nvars: int) -> list["MultiPoly"]:
        return [cls.var(nvars, i) for i in range(nvars)]

    # -- inspection ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> GaussRational:
        return self.terms.get((0,) * self.nvars, ZERO)

    def coeff(self, e: Sequence[int]) -> GaussRational:
        return self.terms.get(tuple(e), ZERO)

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        self._check_var(i)
        return max((e[i] for e in self.terms), default=-1)

    def variables(self) -> set[int]:
        used = set()
        for e in self.terms:
            used.update(i for i, k in enumerate(e) if k)
        return used

    def sorted_terms(self, descending: bool = True) -> list[tuple[Exponent, GaussRational]]:
        return sorted(self.terms.items(), key=lambda t: gradlex_key(t[0]), reverse=descending)

    def leading_term(self) -> tuple[Exponent, GaussRational]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=gradlex_key)
        return e, self.terms[e]

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def _check_var(self, i: int) -> None:
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")

    def _check_compat(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check_compat(other)
            return other
        return MultiPoly.constant(self.nvars, other)

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiPoly._from_clean(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._from_clean(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                c = gq(other)
            except TypeError:
                return NotImplemented
            return self.scale(c)
        self._check_compat(other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.nvars)
        out: dict[Exponent, GaussRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple([a + b for a, b in zip(e1, e2)])
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly._from_clean(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> "MultiPoly":
        c = gq(c)
        if not c:
            return MultiPoly.zero(self.nvars)
        if c == ONE:
            return self
        return MultiPoly._from_clean(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result = MultiPoly.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def diff(self, i: int) -> "MultiPoly":
        """Partial derivative with respect to variable ``i``."""
        self._check_var(i)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                out[e2] = c * k
        return MultiPoly._from_clean(self.nvars, out)

    # -- coefficientwise maps -------------------------------------------
    def real_part(self) -> "MultiPoly":
        """Real part, valid when every variable is real."""
        return MultiPoly(self.nvars, {e: GaussRational(c.re) for e, c in self.terms.items()})

    def imag_part(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: GaussRational(c.im) for e, c in self.terms.items()})

    def conj_coeffs(self) -> "MultiPoly":
        return MultiPoly._from_clean(self.nvars, {e: c.conjugate() for e, c in self.terms.items()})

    def homogeneous_parts(self) -> dict[int, "MultiPoly"]:
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: MultiPoly._from_clean(self.nvars, t) for d, t in sorted(parts.items())}

    # -- evaluation and substitution ------------------------------------
    def __call__(self, point: Sequence) -> GaussRational:
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> GaussRational:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, expected {self.nvars}")
        pt = [gq(x) for x in point]
        powers: list[dict[int, GaussRational]] = [{0: ONE} for _ in pt]
        total = ZERO
        for e, c in self.terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    p = powers[i].get(k)
                    if p is None:
                        p = pt[i] ** k
                        powers[i][k] = p
                    t = t * p
            total = total + t
        return total

    def substitute(self, images: Sequence["MultiPoly"], cache: dict | None = None) -> "MultiPoly":
        """Compose: replace variable ``i`` by ``images[i]`` (all in a common ring)."""
        if len(images) != self.nvars:
            raise ValueError(f"need {self.nvars} images, got {len(images)}")
        if not images:
            return self
        target = images[0].nvars
        powers: list[dict[int, MultiPoly]] = [{} for _ in images]
        if cache is None:
            cache = {}
        total = MultiPoly.zero(target)
        for e, c in self.terms.items():
            m = cache.get(e)
            if m is None:
                m = MultiPoly.one(target)
                for i, k in enumerate(e):
                    if k:
                        p = powers[i].get(k)
                        if p is None:
                            p = images[i] ** k
                            powers[i][k] = p
                        m = m * p
                cache[e] = m
            total = total + m.scale(c)
        return total

    def embed(self, nvars: int, positions: Sequence[int]) -> "MultiPoly":
        """Re-index into a ring with ``nvars`` variables; variable ``i`` goes to ``positions[i]``."""
        if len(positions) != self.nvars:
            raise ValueError("positions must list a slot for every variable")
        out = {}
        for e, c in self.terms.items():
            new = [0] * nvars
            for i, k in enumerate(e):
                new[positions[i]] += k
            out[tuple(new)] = c
        return MultiPoly(nvars, out)

    # -- division --------------------------------------------------------
    def divide_exact(self, divisor: "MultiPoly") -> "MultiPoly | None":
        """Quotient if ``divisor`` divides ``self`` exactly, else ``None``."""
        self._check_compat(divisor)
        if not divisor.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return self
        le, lc = divisor.leading_term()
        rem = dict(self.terms)
        quot: dict[Exponent, GaussRational] = {}
        dterms = list(divisor.terms.items())
        while rem:
            e = max(rem, key=gradlex_key)
            diff = tuple([a - b for a, b in zip(e, le)])
            if any(k < 0 for k in diff):
                return None
            c = rem[e] / lc
            quot[diff] = c
            for de, dc in dterms:
                te = tuple([a + b for a, b in zip(de, diff)])
                v = rem.get(te, ZERO) - c * dc
                if v:
                    rem[te] = v
                else:
                    rem.pop(te, None)
        return MultiPoly._from_clean(self.nvars, quot)

    def monic(self) -> "MultiPoly":
        """Scale so the gradlex leading coefficient is 1."""
        if not self.terms:
            return self
        return self.scale(ONE / self.leading_term()[1])

    # -- comparison / hashing -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            other = gq(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({(0,) * self.nvars: other} if other else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- display ---------------------------------------------------------
    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"x{i}" for i in range(self.nvars)]
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                pieces.append(f"({c})" if c.re and c.im else str(c))
            elif c == ONE:
                pieces.append(mono)
            elif c == -ONE:
                pieces.append(f"-{mono}")
            elif c.re and c.im:
                pieces.append(f"({c})*{mono}")
            else:
                pieces.append(f"{c}*{mono}")
        s = " + ".join(pieces)
        return s.replace("+ -", "- ")

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self.to_str()!r})"


def polys_gens(nvars: int) -> list[MultiPoly]:
    return MultiPoly.gens(nvars)


def monomials_up_to(nvars: int, degree: int) -> list[Exponent]:
    """All exponent vectors of total degree ``<= degree`` in ascending gradlex order."""
    out: list[Exponent] = []

    def rec(prefix: list[int], left: int, remaining_vars: int):
        if remaining_vars == 0:
            out.append(tuple(prefix))
            return
        for k in range(left + 1):
            rec(prefix + [k], left - k, remaining_vars - 1)

    rec([], degree, nvars)
    return sorted(out, key=gradlex_key)


def reduce_mod(p: MultiPoly, rho: MultiPoly, var: int) -> MultiPoly:
    """Remainder of ``p`` modulo ``rho`` by eliminating ``var**2``.

    ``rho`` must have the shape ``c*var**2 + A*var + B`` with a nonzero
    constant ``c`` and ``A``, ``B`` free of ``var``.  Every occurrence of
    ``var**2`` is replaced by ``-(A*var + B)/c`` until the degree in
    ``var`` drops below 2.
    """
    p._check_compat(rho)
    rho._check_var(var)
    if rho.degree_in(var) != 2:
        raise ValueError(f"rho must have degree 2 in variable {var}")
    lead = {}
    rest = {}
    for e, c in rho.terms.items():
        if e[var] == 2:
            lead[e[:var] + (0,) + e[var + 1:]] = c
        else:
            rest[e] = c
    if len(lead) != 1 or any(next(iter(lead))):
        raise ValueError(f"rho is not monic-reducible in variable {var}")
    c = next(iter(lead.values()))
    # var**2 == replacement  (mod rho)
    replacement = MultiPoly(rho.nvars, rest).scale(-ONE / c)
    result = MultiPoly.zero(p.nvars)
    pending = p
    rep_powers: dict[int, MultiPoly] = {0: MultiPoly.one(p.nvars)}
    while pending.terms:
        nxt = MultiPoly.zero(p.nvars)
        done = {}
        for e, coef in pending.terms.items():
            k = e[var]
            if k < 2:
                done[e] = coef
                continue
            half, odd = divmod(k, 2)
            base = e[:var] + (odd,) + e[var + 1:]
            rp = rep_powers.get(half)
            if rp is None:
                rp = replacement ** half
                rep_powers[half] = rp
            nxt = nxt + MultiPoly._from_clean(p.nvars, {base: coef}) * rp
        result = result + MultiPoly(p.nvars, done)
        pending = nxt
    return result


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic greatest common divisor over Q(i) (recursive primitive PRS)."""
    a._check_compat(b)
    if not a.terms:
        return b.monic()
    if not b.terms:
        return a.monic()
    used = sorted(a.variables() | b.variables())
    return _gcd_rec(a, b, used).monic()


def _gcd_rec(a: MultiPoly, b: MultiPoly, used: list[int]) -> MultiPoly:
    n = a.nvars
    if not a.terms:
        return b
    if not b.terms:
        return a
    if a.is_constant() or b.is_constant():
        return MultiPoly.one(n)
    if not used:
        return MultiPoly.one(n)
    v = used[-1]
    rest = used[:-1]
    if a.degree_in(v) <= 0 and b.degree_in(v) <= 0:
        return _gcd_rec(a, b, rest)
    ca, pa = _content_primitive(a, v, rest)
    cb, pb = _content_primitive(b, v, rest)
    cont = _gcd_rec(ca, cb, rest)
    if pa.degree_in(v) < pb.degree_in(v):
        pa, pb = pb, pa
    while pb.terms and pb.degree_in(v) > 0:
        r = _prem(pa, pb, v)
        pa = pb
        if not r.terms:
            pb = r
            break
        _, pb = _content_primitive(r, v, rest)
    if pb.terms:
        # remainder of degree 0 in v: primitive parts are coprime
        g = MultiPoly.one(n)
    else:
        g = pa
    return cont * g


def _coeffs_in(p: MultiPoly, v: int) -> dict[int, MultiPoly]:
    parts: dict[int, dict] = {}
    for e, c in p.terms.items():
        parts.setdefault(e[v], {})[e[:v] + (0,) + e[v + 1:]] = c
    return {k: MultiPoly._from_clean(p.nvars, t) for k, t in parts.items()}


def _content_primitive(p: MultiPoly, v: int, rest: list[int]) -> tuple[MultiPoly, MultiPoly]:
    coeffs = list(_coeffs_in(p, v).values())
    cont = coeffs[0]
    for c in coeffs[1:]:
        if cont.is_constant():
            break
        cont = _gcd_rec(cont, c, rest)
    if cont.is_constant():
        cont = MultiPoly.one(p.nvars)
        return cont, p.monic()
    cont = cont.monic()
    prim = p.divide_exact(cont)
    assert prim is not None
    return cont, prim.monic()


def _prem(a: MultiPoly, b: MultiPoly, v: int) -> MultiPoly:
    db = b.degree_in(v)
    cb = _coeffs_in(b, v)
    lcb = cb[db]
    unit = [0] * a.nvars
    r = a
    while r.terms and r.degree_in(v) >= db:
        dr = r.degree_in(v)
        lcr = _coeffs_in(r, v)[dr]
        unit[v] = dr - db
        shift = MultiPoly.monomial(tuple(unit))
        r = r * lcb - lcr * shift * b
    return r


def poly_lcm(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    if not a.terms or not b.terms:
        return MultiPoly.zero(a.nvars)
    g = poly_gcd(a, b)
    q = (a * b).divide_exact(g)
    assert q is not None
    return q.monic()


def poly_sum(polys: Iterable[MultiPoly], nvars: int) -> MultiPoly:
    total = MultiPoly.zero(nvars)
    for p in polys:
        total = total + p
    return total
