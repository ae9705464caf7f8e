"""Monomial bases and the conjugation of the dual Steenrod algebra.

The integral-target form is a free module over the coefficient ring on the
monomials

    eta[a, U] = prod_j xi_j^{a_j} * prod_{j in U} tau_j

indexed by a finitely supported exponent vector a on positive integers and a
finite set U of tau indices (positive in the "mz" form, >= 0 in the full
algebra).  basis_mz enumerates the coefficient-twisted monomial basis of one
bidegree exhaustively; the search is bounded because every coefficient
generator has nonpositive degree and weight while d - w is strictly positive
on every xi/tau generator.

The conjugation chi of the full algebra is computed from the generator
recursions (with xi_0 = chi(xi_0) = 1)

    chi(tau_0) = -tau_0,     chi(tau) = tau + rho tau_0,
    0 = tau_r + sum_{i=0..r} xi_i^(p^(r-i)) chi(tau_{r-i}),
    0 =         sum_{i=0..r} xi_i^(p^(r-i)) chi(xi_{r-i}),

memoized per (p, r), and extended multiplicatively.  All coefficient symbols
other than tau are fixed by chi.
"""

from __future__ import annotations

from typing import NamedTuple

from .grading import Bidegree, xi_degree, tau_degree
from .elements import (
    COEFF_ONE,
    CoeffMonomial,
    Element,
    SteenrodMonomial,
    _coeff_zero,
    coeff_scale,
    monomial_key,
    mul,
    power,
    term_element,
)


class BasisIndex(NamedTuple):
    """Index (a, U) of a monomial eta[a, U]."""

    a: tuple   # sorted ((j, exponent), ...), j >= 1, exponents > 0
    U: tuple   # sorted tau indices


ETA_ONE = BasisIndex((), ())


def basis_index(a=None, U=()):
    amap = dict(a or {})
    return BasisIndex(
        tuple(sorted((j, e) for j, e in amap.items() if e)),
        tuple(sorted(U)),
    )


def eta(idx, h):
    """The normalized monomial eta[a, U] as an Element."""
    for j, e in idx.a:
        if j < 1:
            raise ValueError(f"xi index {j} must be positive")
    if len(set(idx.U)) != len(idx.U):
        raise ValueError(f"repeated tau index in {idx.U}")
    for j in idx.U:
        if j < h.min_tau:
            raise ValueError(f"tau index {j} below minimum {h.min_tau} for this form")
    mono = SteenrodMonomial(tuple(sorted(idx.a)), tuple(sorted(idx.U)))
    return term_element(h.p, 1, COEFF_ONE, mono)


def eta_degree(idx, p):
    bd = Bidegree(0, 0)
    for j, e in idx.a:
        bd = bd + xi_degree(p, j).scaled(e)
    for j in idx.U:
        bd = bd + tau_degree(p, j)
    return bd


def index_of(mono):
    return BasisIndex(mono.xi, mono.taus)


# ---------------------------------------------------------------------------
# Bidegree basis enumeration

_mono_cache = {}
_basis_cache = {}


def steenrod_monomials(p, budget, min_tau):
    """All (xi, taus) monomials with d - w <= budget, in a fixed order.

    xi_j costs p^j - 1 per exponent and tau_j costs p^j, so the enumeration
    is finite for every budget.
    """
    key = (p, budget, min_tau)
    if key in _mono_cache:
        return _mono_cache[key]
    gens = []
    j = 1
    while p**j - 1 <= budget:
        gens.append(("xi", j, p**j - 1))
        j += 1
    j = min_tau
    while p**j <= budget:
        gens.append(("tau", j, p**j))
        j += 1

    out = []

    def rec(i, left, xi, taus):
        if i == len(gens):
            out.append(SteenrodMonomial(tuple(xi), tuple(taus)))
            return
        kind, j, cost = gens[i]
        if kind == "xi":
            e = 0
            while e * cost <= left:
                rec(i + 1, left - e * cost, xi + [(j, e)] if e else xi, taus)
                e += 1
        else:
            rec(i + 1, left, xi, taus)
            if cost <= left:
                rec(i + 1, left - cost, xi, taus + [j])

    rec(0, budget, [], [])
    out.sort(key=lambda m: (m.xi, m.taus))
    _mono_cache[key] = out
    return out


def steenrod_monomials_by_degree(p, dmax, min_tau):
    """All (xi, taus) monomials with topological degree <= dmax."""
    key = ("bydeg", p, dmax, min_tau)
    if key in _mono_cache:
        return _mono_cache[key]
    gens = []
    j = 1
    while 2 * (p**j - 1) <= dmax:
        gens.append(("xi", j, 2 * (p**j - 1)))
        j += 1
    j = min_tau
    while 2 * p**j - 1 <= dmax:
        gens.append(("tau", j, 2 * p**j - 1))
        j += 1

    out = []

    def rec(i, left, xi, taus):
        if i == len(gens):
            out.append(SteenrodMonomial(tuple(xi), tuple(taus)))
            return
        kind, j, cost = gens[i]
        if kind == "xi":
            e = 0
            while e * cost <= left:
                rec(i + 1, left - e * cost, xi + [(j, e)] if e else xi, taus)
                e += 1
        else:
            rec(i + 1, left, xi, taus)
            if cost <= left:
                rec(i + 1, left - cost, xi, taus + [j])

    rec(0, dmax, [], [])
    out.sort(key=lambda m: (m.xi, m.taus))
    _mono_cache[key] = out
    return out


def coeff_monomials(bd, scheme):
    """All coefficient monomials of exactly the given bidegree."""
    d, w = bd
    if d > 0 or w > d:
        return []
    neg = -d  # rho_exp + eps_exp
    out = []
    eps_max = neg if "eps" in scheme.gens else 0
    eps_cap = scheme.caps.get("eps")
    if eps_cap is not None:
        eps_max = min(eps_max, eps_cap)
    for e in range(eps_max + 1):
        r = neg - e
        if r and "rho" not in scheme.gens:
            continue
        rest = -w - r - e  # tau_exp + 2 theta_exp
        if rest < 0:
            continue
        t_candidates = range(rest // 2 + 1) if "theta" in scheme.gens else (0,)
        for t in t_candidates:
            x = rest - 2 * t
            if x and "tau" not in scheme.gens:
                continue
            c = CoeffMonomial(theta=t, eps=e, rho=r, tau=x)
            if not _coeff_zero(c, scheme):
                out.append(c)
    out.sort(key=tuple)
    return out


def bidegree_basis(bd, h):
    """Coefficient-twisted monomial basis of one bidegree, sorted canonically.

    Returns [(CoeffMonomial, SteenrodMonomial)].  Exhaustive: the xi/tau part
    must satisfy d >= bd.d, w >= bd.w, d - w <= bd.d - bd.w, and the
    coefficient part is solved exactly for the remainder.
    """
    key = (h.scheme.id, h.p, h.scheme.q, h.ambient, bd)
    if key in _basis_cache:
        return _basis_cache[key]
    d, w = bd
    out = []
    if d - w >= 0:
        for mono in steenrod_monomials(h.p, d - w, h.min_tau):
            md = Bidegree(0, 0)
            for j, e in mono.xi:
                md = md + xi_degree(h.p, j).scaled(e)
            for j in mono.taus:
                md = md + tau_degree(h.p, j)
            if md.d < d or md.w < w:
                continue
            rem = Bidegree(d - md.d, w - md.w)
            for c in coeff_monomials(rem, h.scheme):
                out.append((c, mono))
    out.sort(key=monomial_key)
    _basis_cache[key] = out
    return out


def basis_mz(bd, h):
    """The (coefficient monomial, eta index) basis of one bidegree, mz form."""
    if h.ambient != "mz":
        raise ValueError("basis_mz expects the mz form")
    return [(c, index_of(m)) for c, m in bidegree_basis(bd, h)]


def coeff_degree_populated(bd, scheme):
    """Whether any coefficient monomial of the scheme has this bidegree."""
    d, w = bd
    if d > 0 or w > d:
        return False
    m = -d  # rho + eps exponents
    if m:
        if "rho" in scheme.gens:
            pass
        elif "eps" in scheme.gens:
            if m > scheme.caps.get("eps", 1):
                return False
        else:
            return False
    k = d - w  # tau + 2 theta exponents
    if k:
        if "tau" in scheme.gens:
            pass
        elif "theta" in scheme.gens:
            if k % 2:
                return False
        else:
            return False
    return True


_pop_cache = {}


def populated_bidegrees(h, dmax, wmax):
    """All bidegrees with |d| <= dmax, |w| <= wmax carrying a basis monomial.

    The xi/tau part of any monomial in the window has d - w <= dmax + wmax
    (coefficient parts never decrease d - w), which makes the scan finite.
    """
    key = (h.scheme.id, h.p, h.scheme.q, h.ambient, dmax, wmax)
    if key in _pop_cache:
        return _pop_cache[key]
    eta_degs = set()
    for mono in steenrod_monomials(h.p, dmax + wmax, h.min_tau):
        bd = Bidegree(0, 0)
        for j, e in mono.xi:
            bd = bd + xi_degree(h.p, j).scaled(e)
        for j in mono.taus:
            bd = bd + tau_degree(h.p, j)
        eta_degs.add(bd)
    out = []
    for d in range(-dmax, dmax + 1):
        for w in range(-wmax, wmax + 1):
            bd = Bidegree(d, w)
            if any(
                coeff_degree_populated(bd - e, h.scheme) for e in eta_degs
            ):
                out.append(bd)
    _pop_cache[key] = out
    return out


# ---------------------------------------------------------------------------
# Conjugation

_chi_gen_cache = {}


def _xi_element(p, j, e=1):
    if e == 0:
        return Element.one(p)
    return term_element(p, 1, COEFF_ONE, SteenrodMonomial(((j, e),), ()))


def _tau_element(p, j):
    return term_element(p, 1, COEFF_ONE, SteenrodMonomial((), (j,)))


def chi_generator(kind, r, h):
    """chi(xi_r) or chi(tau_r) in the full algebra, memoized per (p, r)."""
    p = h.p
    key = (kind, p, r)
    if key in _chi_gen_cache:
        return _chi_gen_cache[key]
    if kind == "xi" and r == 0:
        return Element.one(p)
    base = _xi_element(p, r) if kind == "xi" else _tau_element(p, r)
    acc = base
    # the odd recursion ends in xi_r chi(tau_0); the even one stops at i = r-1
    top = r if kind == "tau" else r - 1
    for i in range(1, top + 1):
        lower = chi_generator(kind, r - i, h)
        if lower.is_zero():
            continue
        acc = acc + mul(_xi_element(p, i, p ** (r - i)), lower, h)
    result = acc.scaled(-1)
    _chi_gen_cache[key] = result
    return result


def _chi_coeff(c, h):
    """chi on a coefficient monomial: fixes everything but tau."""
    p = h.p
    out = term_element(p, 1, CoeffMonomial(theta=c.theta, eps=c.eps, rho=c.rho))
    if c.tau:
        chi_tau = term_element(p, 1, CoeffMonomial(tau=1))
        rho = h.scheme.rho_element
        if rho is not None:
            chi_tau = chi_tau + term_element(
                p, 1, CoeffMonomial().bump(rho), SteenrodMonomial((), (0,))
            )
        out = mul(out, power(chi_tau, c.tau, h), h)
    return out


_chi_mono_cache = {}


def conjugate(x, h):
    """The conjugation, applied multiplicatively term by term.

    Only defined on the full algebra; the mz form carries the other module
    structure and is rejected.  Per-monomial values are memoized.
    """
    if h.ambient != "a":
        raise ValueError("conjugation is defined on the full algebra only")
    if x.p != h.p:
        raise ValueError("element prime does not match the handle")
    out = Element.zero(h.p)
    for (c, m), s in x.terms.items():
        key = (h.scheme.id, h.p, h.scheme.q, c, m)
        acc = _chi_mono_cache.get(key)
        if acc is None:
            acc = _chi_coeff(c, h)
            for j, e in m.xi:
                acc = mul(acc, power(chi_generator("xi", j, h), e, h), h)
            for j in m.taus:
                acc = mul(acc, chi_generator("tau", j, h), h)
            _chi_mono_cache[key] = acc
        out = out + acc.scaled(s)
    return out


def mz_generators_in_a(h, bound):
    """[(chi tau_i, chi xi_i) for i = 1..bound] for cross-checks in the full algebra."""
    if h.ambient != "a":
        raise ValueError("expected the full algebra")
    return [
        (chi_generator("tau", i, h), chi_generator("xi", i, h))
        for i in range(1, bound + 1)
    ]


_mz_image_cache = {}


def mz_image_in_a(c, idx, h_a):
    """Image of a coefficient-twisted eta[a, U] under the right-subalgebra map.

    Generators map to their conjugates, coefficient symbols act through the
    right unit (stay put); this is the embedding whose image is generated by
    the chi'd generators.
    """
    key = (h_a.scheme.id, h_a.p, h_a.scheme.q, idx)
    out = _mz_image_cache.get(key)
    if out is None:
        out = Element.one(h_a.p)
        for j, e in idx.a:
            out = mul(out, power(chi_generator("xi", j, h_a), e, h_a), h_a)
        for j in idx.U:
            out = mul(out, chi_generator("tau", j, h_a), h_a)
        _mz_image_cache[key] = out
    return coeff_scale(c, out, h_a)
