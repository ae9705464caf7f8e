"""Verification of the multiplicative and linear relations among Bockstein classes.

The product of two Bockstein classes y[a,U] y[b,T] is linear in further y
classes.  Two delta-index conventions are in circulation for the closed
formula: exponent vectors indexed by the generator subscript itself
("subscript": the Bockstein against tau_k bumps a_k, and tau_j^2 bumps
a_{j+1}), or offset by one ("printed": delta_{k-1} and delta_j).
verify_product_relation evaluates the formula under both conventions and
compares each against the multiplication oracle beta(eta[a,U]) *
beta(eta[b,T]); the report says which convention reproduces the oracle.

The linear relations among the y with |U| = j are generated by expanding
beta(beta(eta)) = 0: for every V inside supp(a) with |V| = j + 1,

    sum over k in V of sign(k, V) * y[a - delta_(V-k), V - k] = 0,

with sign(k, V) the Koszul sign (-1)^(number of elements of V below k).
The all-subsets sum with unit coefficients is its V = supp(a) instance and
vanishes only there; verify_linear_relation checks the signed family
exactly and reports whether the literal unsigned sum happens to vanish.

algclosed_reduce rewrites formal polynomials in the y symbols over the
p-adic coefficient ring of an algebraically closed base to the canonical
free basis {y[a,U] : max supp a <= max U}, using the product formula, the
p-torsion of the y's, and the linear relations; a round-trip through the
pullback model certifies each rewrite.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .elements import (
    CoeffMonomial,
    Element,
    algebra,
    element_text,
    mul,
    term_element,
)
from .bockstein import beta, y
from .steenrod import BasisIndex, basis_index, eta_degree
from .integral import (
    PullbackElement,
    int_ring,
    lift_generator,
    pb_mul,
    q_map,
)


def shuffle_sign(A, B):
    """Sign of merging two disjoint ascending tuples into ascending order."""
    inv = sum(1 for a in A for b in B if a > b)
    return -1 if inv & 1 else 1


def position_sign(k, V):
    """Koszul sign of extracting k from the ascending tuple V."""
    below = sum(1 for v in V if v < k)
    return -1 if below & 1 else 1


def _bump(a_map, j, by=1):
    out = dict(a_map)
    out[j] = out.get(j, 0) + by
    if out[j] == 0:
        del out[j]
    return out


def _amap(idx):
    return dict(idx.a)


# ---------------------------------------------------------------------------
# The product formula


class ConventionError(ValueError):
    """The printed convention walked off the exponent lattice (slot 0)."""


def product_formula_terms(aU, bT, p, convention):
    """Formal terms [(tau_power, scalar, BasisIndex)] of the closed formula.

    convention "subscript": k-bump at delta_k, intersection bumps at j+1;
    convention "printed": k-bump at delta_(k-1), intersection bumps at j.
    Raises ConventionError when a bump lands on the nonexistent slot 0.
    """
    shift = 0 if convention == "subscript" else -1
    a, U = _amap(aU), aU.U
    b, T = _amap(bT), bT.U
    ab = dict(a)
    for j, e in b.items():
        ab[j] = ab.get(j, 0) + e
    out = []

    def bump_checked(m, j):
        if j + shift < 1:
            raise ConventionError(f"delta index {j + shift} touches slot 0")
        return _bump(m, j + shift)

    if p == 2:
        for k in U:
            rest = tuple(u for u in U if u != k)
            inter = tuple(sorted(set(rest) & set(T)))
            sym = tuple(sorted(set(rest) ^ set(T)))
            idx = bump_checked(ab, k)
            for j in inter:
                # tau_j^2 = tau * xi_(j+1): the exponent bump sits one above j
                if j + 1 + shift < 1:
                    raise ConventionError(f"delta index {j + 1 + shift} touches slot 0")
                idx = _bump(idx, j + 1 + shift)
            out.append((len(inter), 1, basis_index(idx, sym)))
        return out

    inter = tuple(sorted(set(U) & set(T)))
    if len(inter) > 1:
        return []
    if not inter:
        for k in T:
            rest = tuple(t for t in T if t != k)
            sign = shuffle_sign(tuple(sorted(set(U) | {k})), rest)
            idx = bump_checked(ab, k)
            out.append((0, sign, basis_index(idx, tuple(sorted(set(U) | set(rest))))))
        return out
    k = inter[0]
    sign = shuffle_sign(
        tuple(u for u in U if u != k), tuple(t for t in T if t != k)
    )
    idx = bump_checked(ab, k)
    out.append((0, sign, basis_index(idx, tuple(sorted(set(U) | set(T) - {k})))))
    return out


def formula_element(terms, h):
    """Expand formal formula terms into an Element of the mz form."""
    out = Element.zero(h.p)
    for tau_pow, scalar, idx in terms:
        coeff = term_element(h.p, scalar, CoeffMonomial(tau=tau_pow))
        out = out + mul(coeff, y(idx, h), h)
    return out


@dataclass
class ProductCase:
    aU: BasisIndex
    bT: BasisIndex
    oracle: Element
    matches: dict      # convention -> bool
    failures: dict     # convention -> reason for a non-match


def verify_product_relation(aU, bT, p, scheme_id="algclosed", q=None):
    """Compare the multiplication oracle with the closed formula.

    The closed formula presumes the distinguished rho class vanishes; the
    algebraically closed base (or any rho-free scheme) is the intended
    setting.  Returns a ProductCase with the per-convention outcomes.
    """
    h = algebra(scheme_id, p, q)
    if h.scheme.rho_element is not None:
        raise ValueError("the product formula requires a base with rho = 0")
    aU = basis_index(dict(aU.a), aU.U)
    bT = basis_index(dict(bT.a), bT.U)
    oracle = mul(y(aU, h), y(bT, h), h)
    matches, failures = {}, {}
    for convention in ("subscript", "printed"):
        try:
            el = formula_element(product_formula_terms(aU, bT, p, convention), h)
        except ConventionError as e:
            matches[convention] = False
            failures[convention] = str(e)
            continue
        ok = el == oracle
        matches[convention] = ok
        if not ok:
            failures[convention] = (
                f"formula gives {element_text(el)}, oracle {element_text(oracle)}"
            )
    return ProductCase(aU, bT, oracle, matches, failures)


def product_relation_sweep(p, max_index=3, max_exp=2, scheme_id="algclosed", q=None):
    """Exhaustive convention comparison over a finite index range.

    Returns (report dict, cases with no matching convention).
    """
    supports = []
    idxs = list(range(1, max_index + 1))
    exps = range(max_exp + 1)
    for combo in _exponent_vectors(idxs, max_exp):
        supports.append(combo)
    subsets = []
    for r in range(len(idxs) + 1):
        subsets.extend(combinations(idxs, r))
    per_convention = {"subscript": 0, "printed": 0}
    hard_failures = []
    total = 0
    examples = {}
    for a in supports:
        for b in supports:
            for U in subsets:
                for T in subsets:
                    total += 1
                    case = verify_product_relation(
                        basis_index(a, U), basis_index(b, T), p, scheme_id, q
                    )
                    for conv, ok in case.matches.items():
                        per_convention[conv] += ok
                    if not any(case.matches.values()):
                        hard_failures.append(case)
                    for conv, why in case.failures.items():
                        examples.setdefault(conv, why)
    report = {
        "p": p,
        "cases": total,
        "matches": per_convention,
        "uniform_convention": next(
            (c for c, n in per_convention.items() if n == total), None
        ),
        "failure_examples": examples,
        "hard_failures": len(hard_failures),
    }
    return report, hard_failures


def _exponent_vectors(idxs, max_exp):
    if not idxs:
        return [{}]
    rest = _exponent_vectors(idxs[1:], max_exp)
    out = []
    for e in range(max_exp + 1):
        for r in rest:
            m = dict(r)
            if e:
                m[idxs[0]] = e
            out.append(m)
    return out


# ---------------------------------------------------------------------------
# Linear relations


@dataclass
class LinearRelationReport:
    a: tuple
    j: int
    p: int
    beta_closed: bool          # beta(y) = 0 for every y with |U| = j
    signed_cases: list         # (V, signs, vanished) for each |V| = j+1
    literal_sum_zero: bool | None  # the unsigned all-subsets sum; None if empty

    @property
    def ok(self):
        return self.beta_closed and all(v for _, _, v in self.signed_cases)


def verify_linear_relation(a, j, p):
    """Check the degree-j linear relations among the y over one exponent vector.

    Exact verification in the coefficient-free model: each y with index
    (a - delta_U, U), |U| = j, is killed by the Bockstein, and each signed
    (j+1)-subset sum vanishes identically.  The unsigned sum is reported as
    well; it vanishes only at V = supp(a).
    """
    if j < 1:
        raise ValueError("j must be at least 1")
    h = algebra("bare", p)
    amap = {k: v for k, v in dict(a).items() if v}
    supp = tuple(sorted(amap))
    beta_closed = True
    literal = Element.zero(p)
    any_term = False
    for U in combinations(supp, j):
        idx = basis_index({k: amap[k] - (1 if k in U else 0) for k in amap}, U)
        y_el = y(idx, h)
        any_term = True
        literal = literal + y_el
        if not beta(y_el, h).is_zero():
            beta_closed = False
    signed_cases = []
    for V in combinations(supp, j + 1):
        total = Element.zero(p)
        signs = []
        for k in V:
            U = tuple(v for v in V if v != k)
            s = position_sign(k, V)
            signs.append((k, s))
            idx = basis_index(
                {t: amap[t] - (1 if t in U else 0) for t in amap}, U
            )
            total = total + y(idx, h).scaled(s)
        signed_cases.append((V, signs, total.is_zero()))
    return LinearRelationReport(
        tuple(sorted(amap.items())), j, p,
        beta_closed, signed_cases,
        literal.is_zero() if any_term else None,
    )


# ---------------------------------------------------------------------------
# The presented algebra over an algebraically closed base


class FormalPoly:
    """Polynomial in the y symbols over the p-adic coefficients Z_p[tau].

    Monomial keys are (tau exponent, tuple of BasisIndex).  Coefficients of
    monomials containing a y symbol live mod p; the coefficient-only part
    lives mod p^precision.
    """

    __slots__ = ("p", "precision", "terms")

    def __init__(self, p, terms, precision):
        self.p = p
        self.precision = precision
        self.terms = {}
        for key, c in terms.items():
            mod = p if key[1] else p**precision
            c %= mod
            if c:
                self.terms[key] = (self.terms.get(key, 0) + c) % mod

    @classmethod
    def zero(cls, p, precision):
        return cls(p, {}, precision)

    @classmethod
    def symbol(cls, p, idx, tau_pow=0, coeff=1, precision=None):
        precision = precision or 16
        return cls(p, {(tau_pow, (idx,)): coeff}, precision)

    @classmethod
    def coefficient(cls, p, tau_pow=0, coeff=1, precision=None):
        precision = precision or 16
        return cls(p, {(tau_pow, ()): coeff}, precision)

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return FormalPoly(self.p, out, self.precision)

    def scaled(self, n):
        return FormalPoly(
            self.p, {k: n * c for k, c in self.terms.items()}, self.precision
        )

    def __eq__(self, other):
        return (
            isinstance(other, FormalPoly)
            and self.p == other.p
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "<FormalPoly 0>"
        bits = []
        for (m, ys), c in sorted(self.terms.items()):
            ystr = "".join(f"*y{list(dict(i.a).items())}{list(i.U)}" for i in ys)
            bits.append(f"{c}*tau^{m}{ystr}")
        return "<FormalPoly " + " + ".join(bits) + ">"


def _y_parity(idx, p):
    return (eta_degree(idx, p).d - 1) & 1


def formal_mul(x, z):
    """Product of formal polynomials with Koszul reordering of the y symbols."""
    p = x.p
    out = {}
    for (m1, ys1), c1 in x.terms.items():
        for (m2, ys2), c2 in z.terms.items():
            sign = 1
            merged = list(ys1)
            for s2 in ys2:
                pos = len(merged)
                while pos > 0 and merged[pos - 1] > s2:
                    if _y_parity(merged[pos - 1], p) and _y_parity(s2, p):
                        sign = -sign
                    pos -= 1
                merged.insert(pos, s2)
            key = (m1 + m2, tuple(merged))
            out[key] = out.get(key, 0) + sign * c1 * c2
    return FormalPoly(p, out, x.precision)


def _reduce_index(idx, p):
    """Rewrite one y symbol into the U-maximal basis: [(scalar, index)]."""
    if not idx.U:
        return []  # y[a, {}] = beta of a xi monomial = 0
    max_a = max((j for j, e in idx.a), default=0)
    if max_a <= max(idx.U):
        return [(1, idx)]
    amap = _amap(idx)
    k_max = max_a
    V = tuple(sorted(set(idx.U) | {k_max}))
    s_max = position_sign(k_max, V)
    out = []
    for k in idx.U:
        U2 = tuple(sorted(set(V) - {k}))
        a2 = _bump(_bump(amap, k_max, -1), k)
        out.append((-s_max * position_sign(k, V), basis_index(a2, U2)))
    return out


def algclosed_reduce(poly, h=None, ring=None, check=True):
    """Normal form of a formal y polynomial over an algebraically closed base.

    Products of y symbols are rewritten through the closed product formula
    (subscript convention), coefficients of y terms are reduced mod p, and
    single y symbols are rewritten into the U-maximal free basis.  With
    check=True the normal form is certified by comparing images in the
    pullback model.
    """
    p = poly.p
    h = h or algebra("algclosed", p)
    ring = ring or int_ring(h.scheme, poly.precision)
    out = {}
    work = list((key, c) for key, c in poly.terms.items())
    while work:
        (m, ys), c = work.pop()
        if not ys:
            key = (m, ())
            out[key] = out.get(key, 0) + c
            continue
        if len(ys) == 1:
            hits = _reduce_index(ys[0], p)
            if len(hits) == 1 and hits[0][1] == ys[0]:
                key = (m, ys)
                out[key] = out.get(key, 0) + c
            else:
                for s, idx in hits:
                    work.append(((m, (idx,)), c * s))
            continue
        y1, y2, rest = ys[0], ys[1], ys[2:]
        for tau_pow, s, idx in product_formula_terms(y1, y2, p, "subscript"):
            work.append(((m + tau_pow, (idx,) + rest), c * s))
    result = FormalPoly(p, out, poly.precision)
    if check:
        lhs = embed_formal(poly, h, ring)
        rhs = embed_formal(result, h, ring)
        if not (lhs.z == rhs.z and lhs.k == rhs.k):
            raise AssertionError("normal form changed the pullback image")
    return result


def embed_formal(poly, h, ring):
    """Image of a formal y polynomial in the pullback model."""
    p = poly.p
    z_total = ring.zero()
    k_total = Element.zero(p)
    for (m, ys), c in poly.terms.items():
        if not ys:
            z_total = z_total + ring.element(c, ("tau", m) if m else ring.unit())
            k_total = k_total + term_element(p, c, CoeffMonomial(tau=m))
            continue
        acc = term_element(p, c, CoeffMonomial(tau=m))
        for idx in ys:
            acc = mul(acc, y(idx, h), h)
        k_total = k_total + acc
    return PullbackElement(z_total, k_total, h)


def formal_augmentation(poly):
    """Kill the y symbols; the coefficient-only part survives."""
    return FormalPoly(
        poly.p,
        {key: c for key, c in poly.terms.items() if not key[1]},
        poly.precision,
    )


# ---------------------------------------------------------------------------
# The Z[1/2] relation table


def z12_relation_check(imax=3, jmax=2, kmax=2, precision=16, w_table=None):
    """Verify the displayed relation table of the Z[1/2] fiber product.

    Every relation is checked by normalizing in the integral coefficient
    ring and comparing reductions/projections of both sides; the eps-times-
    tau-coordinate relation is checked under both the printed index (j-1+k)
    and the index forced by the projections (i-1+k).  Returns a list of
    (name, status, detail) with status PASS/WARN/FAIL.
    """
    h = algebra("z-half", 2)
    ring = int_ring(h.scheme, precision, w_table)
    results = []

    def check(name, ok, detail=""):
        results.append((name, "PASS" if ok else "FAIL", detail))

    for i in range(0, imax):
        r = ring.element(1, ("rho", 0, 2 * i + 1))
        check(f"2*rho_{2*i+1} = 0", r.scaled(2).is_zero())
    for i in range(1, imax):
        e = ring.element(1, ("eps", 2 * i))
        check(f"w_{2*i}*eps_{2*i} = 0", e.scaled(ring.w(2 * i)).is_zero())
        check(
            f"w_{2*i} is a power of two",
            ring.w(2 * i) > 0 and (ring.w(2 * i) & (ring.w(2 * i) - 1)) == 0,
        )
    for i in range(1, imax + 1):
        for j in range(1, imax + 1):
            ei = ring.element(1, ("eps", i))
            ej = ring.element(1, ("eps", j))
            check(f"eps_{i}*eps_{j} = 0", (ei * ej).is_zero())
            if i % 2 == 1:
                r = ring.element(1, ("rho", 0, i))
                check(f"rho_{i}*eps_{j} = 0", (r * ej).is_zero())
    for i in range(0, imax):
        for j in range(0, imax):
            a = ring.element(1, ("rho", 0, 2 * i + 1))
            b = ring.element(1, ("rho", 0, 2 * j + 1))
            c = ring.element(1, ("rho", 0, 1)) * ring.element(
                1, ("rho", 0, 2 * (i + j) + 1)
            )
            lhs = a * b
            check(
                f"rho_{2*i+1}*rho_{2*j+1} = rho_1*rho_{2*(i+j)+1}",
                lhs == c and q_map(lhs, h) == q_map(c, h),
            )
    # fiber coordinates
    for j in range(1, jmax + 1):
        for k in range(0, kmax + 1):
            for kind in ("tau_ji", "xi_ji"):
                t = lift_generator((kind, j, k), h, ring)
                check(f"2*{kind}({j},{k}) = 0", t.scaled(2).is_zero())
    rho1_z = ring.element(1, ("rho", 0, 1))
    rho1 = PullbackElement(rho1_z, q_map(rho1_z, h), h)
    for i in range(0, imax):
        for j in range(1, jmax + 1):
            for k in range(0, kmax + 1):
                for kind in ("tau_ji", "xi_ji"):
                    z = ring.element(1, ("rho", 0, 2 * i + 1))
                    rho_l = PullbackElement(z, q_map(z, h), h)
                    lhs = pb_mul(rho_l, lift_generator((kind, j, k), h, ring))
                    rhs = pb_mul(
                        rho1, lift_generator((kind, j, 2 * i + k), h, ring),
                    )
                    check(
                        f"rho_{2*i+1}*{kind}({j},{k}) = rho_1*{kind}({j},{2*i+k})",
                        lhs.z == rhs.z and lhs.k == rhs.k,
                    )
    # the eps relation: printed index (j-1+k) vs projection-forced (i-1+k)
    printed_ok = True
    corrected_ok = True
    first_anomaly = None
    for i in range(1, imax + 1):
        ze = ring.element(1, ("eps", i))
        eps_l = PullbackElement(ze, q_map(ze, h), h)
        z1 = ring.element(1, ("eps", 1))
        eps1 = PullbackElement(z1, q_map(z1, h), h)
        for j in range(1, jmax + 1):
            for k in range(0, kmax + 1):
                for kind in ("tau_ji", "xi_ji"):
                    lhs = pb_mul(eps_l, lift_generator((kind, j, k), h, ring))
                    rhs_corr = pb_mul(
                        eps1, lift_generator((kind, j, i - 1 + k), h, ring)
                    )
                    rhs_printed = pb_mul(
                        eps1, lift_generator((kind, j, j - 1 + k), h, ring)
                    )
                    if not (lhs.z == rhs_corr.z and lhs.k == rhs_corr.k):
                        corrected_ok = False
                    if not (lhs.z == rhs_printed.z and lhs.k == rhs_printed.k):
                        printed_ok = False
                        if first_anomaly is None:
                            first_anomaly = f"eps_{i}*{kind}({j},{k})"
    if corrected_ok and not printed_ok:
        results.append(
            (
                "eps_i*coordinate index",
                "WARN",
                f"printed index j-1+k fails (first at {first_anomaly}); "
                "projection-forced index i-1+k validates",
            )
        )
    elif corrected_ok and printed_ok:
        results.append(("eps_i*coordinate index", "PASS", "both indexings agree"))
    else:
        results.append(
            ("eps_i*coordinate index", "FAIL", "projection-forced index fails")
        )
    return results
