"""Bigraded elements of the mod-p dual Steenrod algebras.

A monomial is a triple

    coefficient part | xi part | tau part

where the coefficient part is a monomial in the base scheme's generators
(theta, eps, rho, tau), the xi part is a finitely supported exponent vector on
the even Milnor generators xi_1, xi_2, ..., and the tau part is a finite set
of indices of the odd generators tau_j.  Two ambient algebras share this
shape:

  * the full dual Steenrod algebra ("a"): tau indices >= 0, coefficient
    symbols carry the right unit and have zero Bockstein;
  * the integral-target form ("mz"): tau indices >= 1, coefficient symbols
    carry the left unit and the scheme's coefficient Bockstein.

Normalization applies, at p = 2,

    tau_j^2 -> xi_{j+1} tau [+ xi_{j+1} tau_0 rho] + tau_{j+1} rho

(the tau_0 term only in the "a" form, rho given by the scheme, possibly 0)
and tau_j^2 -> 0 at odd primes, then the scheme's coefficient relations, then
collects like terms mod p.  The rewrite terminates: the bidegree is fixed and
every replacement tau index is strictly larger.

Koszul signs use the topological degree only, so all tau_j are odd, all xi_j
are even, and rho, eps are odd coefficient symbols.  Within a monomial the
canonical factor order is coefficient | xi | tau with tau indices ascending.
"""

from __future__ import annotations

from typing import NamedTuple

from .grading import Bidegree, xi_degree, tau_degree
from .schemes import COEFF_ORDER, SchemeError, SchemePresentation, make_scheme


class CoeffMonomial(NamedTuple):
    theta: int = 0
    eps: int = 0
    rho: int = 0
    tau: int = 0

    def is_one(self):
        return not any(self)

    def exp(self, name):
        return getattr(self, name)

    def bump(self, name, by=1):
        return self._replace(**{name: getattr(self, name) + by})


COEFF_ONE = CoeffMonomial()


class SteenrodMonomial(NamedTuple):
    xi: tuple          # sorted ((j, exponent), ...), exponents > 0
    taus: tuple        # sorted tau indices, no repeats

    def is_one(self):
        return not self.xi and not self.taus


STEENROD_ONE = SteenrodMonomial((), ())


class Term(NamedTuple):
    scalar: int
    coeff: CoeffMonomial
    mono: SteenrodMonomial


class AlgebraHandle(NamedTuple):
    """One of the two ambient algebras over a fixed scheme presentation."""

    scheme: SchemePresentation
    ambient: str  # "a" | "mz"

    @property
    def p(self):
        return self.scheme.p

    @property
    def min_tau(self):
        return 0 if self.ambient == "a" else 1

    def coeff_bockstein(self):
        # right-unit coefficients in the full algebra have trivial Bockstein
        return self.scheme.coeff_bockstein if self.ambient == "mz" else {}


def algebra(scheme_id, p, q=None, ambient="mz"):
    if ambient not in ("a", "mz"):
        raise ValueError(f"ambient must be 'a' or 'mz', got {ambient!r}")
    return AlgebraHandle(make_scheme(scheme_id, p, q), ambient)


class AmbientMismatch(ValueError):
    """Raised when elements from different algebras are combined."""


def coeff_degree(c, scheme):
    bd = Bidegree(0, 0)
    for name in COEFF_ORDER:
        e = c.exp(name)
        if e:
            bd = bd + scheme.degree(name).scaled(e)
    return bd


def mono_degree(m, p):
    bd = Bidegree(0, 0)
    for j, e in m.xi:
        bd = bd + xi_degree(p, j).scaled(e)
    for j in m.taus:
        bd = bd + tau_degree(p, j)
    return bd


def bidegree_of(item, scheme):
    """Bidegree of a normalized monomial, Term, or pair (coeff, mono)."""
    if isinstance(item, SteenrodMonomial):
        return mono_degree(item, scheme.p)
    if isinstance(item, CoeffMonomial):
        return coeff_degree(item, scheme)
    if isinstance(item, Term):
        c, m = item.coeff, item.mono
    else:
        c, m = item
    return coeff_degree(c, scheme) + mono_degree(m, scheme.p)


def _parity(c, m, scheme):
    d = coeff_degree(c, scheme).d + mono_degree(m, scheme.p).d
    return d & 1


# ---------------------------------------------------------------------------
# Element container


class Element:
    """A finite F_p-linear combination of normalized monomials."""

    __slots__ = ("p", "terms")

    def __init__(self, p, terms):
        self.p = p
        self.terms = dict(terms)  # (CoeffMonomial, SteenrodMonomial) -> scalar

    @classmethod
    def zero(cls, p):
        return cls(p, {})

    @classmethod
    def one(cls, p):
        return cls(p, {(COEFF_ONE, STEENROD_ONE): 1})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, Element)
            and self.p == other.p
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __add__(self, other):
        if self.p != other.p:
            raise AmbientMismatch("cannot add elements over different primes")
        out = dict(self.terms)
        for key, s in other.terms.items():
            v = (out.get(key, 0) + s) % self.p
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return Element(self.p, out)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def scaled(self, n):
        n %= self.p
        if n == 0:
            return Element.zero(self.p)
        return Element(self.p, {k: (n * s) % self.p for k, s in self.terms.items()})

    def sorted_terms(self):
        return [Term(self.terms[k], *k) for k in sorted(self.terms, key=monomial_key)]

    def homogeneous_bidegree(self, scheme):
        """The common bidegree of all terms; raises on mixed degrees."""
        if not self.terms:
            return None
        degs = {bidegree_of(k, scheme) for k in self.terms}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element: degrees {sorted(degs)}")
        return degs.pop()

    def __repr__(self):
        return f"<Element mod {self.p}: {element_text(self)}>"


def term_element(p, scalar, coeff=COEFF_ONE, mono=STEENROD_ONE):
    scalar %= p
    if not scalar:
        return Element.zero(p)
    return Element(p, {(coeff, mono): scalar})


def monomial_key(key):
    """Deterministic total order on monomials (graded-lex within each part)."""
    c, m = key
    return (tuple(c), m.xi, m.taus)


# ---------------------------------------------------------------------------
# Normalization


def _coeff_zero(c, scheme):
    """Apply the scheme's multiplicative coefficient relations; True if zero."""
    for name, cap in scheme.caps.items():
        if c.exp(name) > cap:
            return True
    for pair in scheme.zero_pairs:
        if all(c.exp(name) >= 1 for name in pair):
            return True
    return False


def _check_gens(c, scheme):
    for name in COEFF_ORDER:
        if c.exp(name) and name not in scheme.gens:
            raise SchemeError(
                f"coefficient generator {name!r} not present for scheme {scheme.id}"
            )


def normalize(raw_terms, h):
    """Reduce a list of raw terms to a normalized Element.

    Raw terms are (scalar, CoeffMonomial, xi_map, tau_counts) with arbitrary
    tau multiplicities, or plain Terms.  Splicing the p=2 expansion of
    tau_j^2 into a monomial costs no Koszul sign (the expansion terms all
    have even topological degree, and p = 2 anyway); at odd primes squares
    of tau generators vanish.
    """
    p = h.p
    scheme = h.scheme
    out = {}
    work = []
    for t in raw_terms:
        if isinstance(t, Term):
            work.append((t.scalar, t.coeff, dict(t.mono.xi), {j: 1 for j in t.mono.taus}))
        else:
            s, c, xi, taus = t
            work.append((s, c, dict(xi), dict(taus)))

    while work:
        s, c, xi, taus = work.pop()
        s %= p
        if not s:
            continue
        _check_gens(c, scheme)
        if _coeff_zero(c, scheme):
            continue
        bad = [j for j, e in taus.items() if j < h.min_tau and e]
        if bad:
            raise ValueError(
                f"tau index {min(bad)} below the minimum {h.min_tau} for this form"
            )

        sq = sorted(j for j, e in taus.items() if e >= 2)
        if sq:
            j = sq[0]
            rest = dict(taus)
            rest[j] -= 2
            if rest[j] == 0:
                del rest[j]
            if p != 2 or scheme.id == "bare":
                continue  # tau_j^2 = 0
            # tau_j^2 -> xi_{j+1} tau [+ xi_{j+1} tau_0 rho] + tau_{j+1} rho
            xi_up = dict(xi)
            xi_up[j + 1] = xi_up.get(j + 1, 0) + 1
            work.append((s, c.bump("tau"), xi_up, dict(rest)))
            rho = scheme.rho_element
            if rho is not None:
                if h.ambient == "a":
                    t0 = dict(rest)
                    t0[0] = t0.get(0, 0) + 1
                    work.append((s, c.bump(rho), dict(xi_up), t0))
                t_up = dict(rest)
                t_up[j + 1] = t_up.get(j + 1, 0) + 1
                work.append((s, c.bump(rho), dict(xi), t_up))
            continue

        mono = SteenrodMonomial(
            tuple(sorted((j, e) for j, e in xi.items() if e)),
            tuple(sorted(j for j, e in taus.items() if e)),
        )
        key = (c, mono)
        v = (out.get(key, 0) + s) % p
        if v:
            out[key] = v
        else:
            out.pop(key, None)

    return Element(p, out)


# ---------------------------------------------------------------------------
# Multiplication


def _odd_ranks(c, m, scheme):
    """Ranks of odd-degree factors of a monomial, in canonical order."""
    ranks = []
    for pos, name in enumerate(COEFF_ORDER):
        e = c.exp(name)
        if e and (scheme.degree(name).d & 1):
            ranks.extend([(0, pos)] * e)
    # xi factors are even at every prime; tau_j has odd degree 2p^j - 1
    ranks.extend((1, j) for j in m.taus)
    return ranks


def koszul_sign(c1, m1, c2, m2, scheme):
    """Sign of merging x*y into canonical factor order (stable, x first)."""
    if scheme.p == 2:
        return 1
    left = _odd_ranks(c1, m1, scheme)
    right = _odd_ranks(c2, m2, scheme)
    inv = 0
    for r2 in right:
        inv += sum(1 for r1 in left if r1 > r2)
    return -1 if inv & 1 else 1


def mul(x, y, h):
    """Graded-commutative product of normalized elements."""
    if x.p != y.p or x.p != h.p:
        raise AmbientMismatch("elements belong to different algebras")
    raw = []
    scheme = h.scheme
    for (c1, m1), s1 in x.terms.items():
        for (c2, m2), s2 in y.terms.items():
            sign = koszul_sign(c1, m1, c2, m2, scheme)
            c = CoeffMonomial(*(a + b for a, b in zip(c1, c2)))
            xi = dict(m1.xi)
            for j, e in m2.xi:
                xi[j] = xi.get(j, 0) + e
            taus = {j: 1 for j in m1.taus}
            for j in m2.taus:
                taus[j] = taus.get(j, 0) + 1
            raw.append((s1 * s2 * sign, c, xi, taus))
    return normalize(raw, h)


def power(x, n, h):
    out = Element.one(h.p)
    for _ in range(n):
        out = mul(out, x, h)
    return out


def coeff_scale(c, x, h):
    """Fast left multiplication by a single coefficient monomial.

    No tau squares or xi merges can arise, so this skips the rewrite
    worklist: merge exponents, apply the coefficient relations, keep the
    Koszul sign of moving c past each term's own coefficient factors.
    """
    scheme = h.scheme
    _check_gens(c, scheme)
    out = {}
    for (c2, m), s in x.terms.items():
        sign = koszul_sign(c, STEENROD_ONE, c2, STEENROD_ONE, scheme)
        merged = CoeffMonomial(*(a + b for a, b in zip(c, c2)))
        if _coeff_zero(merged, scheme):
            continue
        key = (merged, m)
        v = (out.get(key, 0) + sign * s) % h.p
        if v:
            out[key] = v
        else:
            out.pop(key, None)
    return Element(h.p, out)


# ---------------------------------------------------------------------------
# Canonical text form
#
#   element := "0" | term (" + " term)*
#   term    := [scalar "*"] coeff " | " xis " | " taus
#   coeff   := "1" | gen "^" exp ("*" gen "^" exp)*      gens in order
#              theta, eps, rho, tau
#   xis     := "1" | "xi" j "^" e (" " "xi" j "^" e)*    j ascending
#   taus    := "tau{" j ("," j)* "}" | "tau{}"           j ascending


def term_text(t):
    c, m = t.coeff, t.mono
    cs = "*".join(f"{g}^{c.exp(g)}" for g in COEFF_ORDER if c.exp(g)) or "1"
    xs = " ".join(f"xi{j}^{e}" for j, e in m.xi) or "1"
    ts = "tau{" + ",".join(str(j) for j in m.taus) + "}"
    body = f"{cs} | {xs} | {ts}"
    return body if t.scalar == 1 else f"{t.scalar}*{body}"


def element_text(x):
    if x.is_zero():
        return "0"
    return " + ".join(term_text(t) for t in x.sorted_terms())


def parse_term(s):
    s = s.strip()
    scalar = 1
    head, sep, rest = s.partition("|")
    cpart = head.strip()
    if "*" in cpart and cpart.split("*", 1)[0].strip().isdigit():
        num, cpart = cpart.split("*", 1)
        scalar = int(num)
        cpart = cpart.strip()
    if not sep:
        raise ValueError(f"malformed term {s!r}")
    xpart, sep, tpart = rest.partition("|")
    if not sep:
        raise ValueError(f"malformed term {s!r}")
    coeff = COEFF_ONE
    if cpart != "1":
        for piece in cpart.split("*"):
            g, _, e = piece.strip().partition("^")
            if g not in COEFF_ORDER:
                raise ValueError(f"unknown coefficient generator {g!r}")
            coeff = coeff.bump(g, int(e or 1))
    xi = {}
    xpart = xpart.strip()
    if xpart != "1":
        for piece in xpart.split():
            if not piece.startswith("xi"):
                raise ValueError(f"malformed xi factor {piece!r}")
            j, _, e = piece[2:].partition("^")
            xi[int(j)] = xi.get(int(j), 0) + int(e or 1)
    tpart = tpart.strip()
    if not (tpart.startswith("tau{") and tpart.endswith("}")):
        raise ValueError(f"malformed tau part {tpart!r}")
    inner = tpart[4:-1]
    taus = tuple(sorted(int(j) for j in inner.split(","))) if inner else ()
    if len(set(taus)) != len(taus):
        raise ValueError(f"repeated tau index in {tpart!r}")
    mono = SteenrodMonomial(tuple(sorted(xi.items())), taus)
    return Term(scalar, coeff, mono)


def parse_element(s, p):
    s = s.strip()
    if s == "0":
        return Element.zero(p)
    out = Element.zero(p)
    for chunk in s.split(" + "):
        t = parse_term(chunk)
        out = out + term_element(p, t.scalar, t.coeff, t.mono)
    return out
