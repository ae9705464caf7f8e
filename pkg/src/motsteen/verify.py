"""Named verification suites driven by the command line front end.

Each suite runs a family of exact checks within the configured degree bounds
and returns (name, status, detail) triples with status PASS, WARN, or FAIL.
WARN is reserved for the documented index discrepancies of the closed
formulas (the delta shift in the product relation, the unsigned linear sum,
the eps coordinate index over Z[1/2]); everything else must hold exactly.
"""

from __future__ import annotations

import itertools
import random

from .grading import Bidegree
from .elements import (
    CoeffMonomial,
    SteenrodMonomial,
    algebra,
    element_text,
    mul,
    term_element,
)
from .steenrod import (
    bidegree_basis,
    chi_generator,
    conjugate,
    index_of,
    mz_image_in_a,
    populated_bidegrees,
    steenrod_monomials_by_degree,
)
from .bockstein import (
    beta,
    free_bbeta_generators,
    ker_beta_basis,
    block,
    block_homology,
    y,
)
from .linalg import FpMatrix, rank
from .integral import PullbackElement, int_ring, pb_mul, pb_torsion
from .relations import (
    _exponent_vectors,
    product_relation_sweep,
    verify_linear_relation,
    z12_relation_check,
)

SUITES = ("beta2", "chi", "products", "linear", "blocks", "kerbasis", "z12", "all")


def _coeff_sweep(scheme, cap=None):
    """Coefficient monomials with small per-generator exponents.

    Exponents up to max(p, 2) exhaust every residue class mod p of the
    derivation coefficients and both Koszul parities, so the sweep exercises
    every sign path of the coefficient Bockstein.
    """
    from .elements import _coeff_zero

    cap = cap or max(scheme.p, 2)
    ranges = []
    for name in ("theta", "eps", "rho", "tau"):
        if name in scheme.gens:
            top = min(cap, scheme.caps.get(name, cap))
            ranges.append(range(top + 1))
        else:
            ranges.append(range(1))
    out = []
    for t, e, r, x in itertools.product(*ranges):
        c = CoeffMonomial(theta=t, eps=e, rho=r, tau=x)
        if not _coeff_zero(c, scheme):
            out.append(c)
    return out


def _status(ok):
    return "PASS" if ok else "FAIL"


def _mono_topdeg(m, p):
    d = 0
    for j, e in m.xi:
        d += 2 * (p**j - 1) * e
    for j in m.taus:
        d += 2 * p**j - 1
    return d


# ---------------------------------------------------------------------------


def suite_beta2(config):
    """beta o beta = 0 on every swept basis monomial of the mz form."""
    h = config.handle()
    dmax = config.dmax
    coeffs = _coeff_sweep(h.scheme)
    monos = steenrod_monomials_by_degree(h.p, dmax, 1)
    checked = 0
    for mono in monos:
        for c in coeffs:
            x = term_element(h.p, 1, c, mono)
            bb = beta(beta(x, h), h)
            if not bb.is_zero():
                return [(
                    "beta^2 = 0",
                    "FAIL",
                    f"beta^2({element_text(x)}) = {element_text(bb)}",
                )]
            checked += 1
    return [(
        "beta^2 = 0",
        "PASS",
        f"{checked} monomials, degree <= {dmax}, scheme {h.scheme.id}, p = {h.p}",
    )]


def suite_chi(config):
    """Conjugation: involution, multiplicativity, fixed generators, embedding."""
    h = algebra(config.scheme, config.p, config.q, ambient="a")
    hmz = config.handle()
    p = h.p
    results = []
    dmax = min(config.dmax, 20)

    # verbatim generator values
    tau_c = term_element(p, 1, CoeffMonomial(tau=1))
    expect = tau_c
    rho = h.scheme.rho_element
    if rho is not None:
        expect = expect + term_element(
            p, 1, CoeffMonomial().bump(rho), SteenrodMonomial((), (0,))
        )
    results.append(
        ("chi(tau) = tau + rho tau_0", _status(conjugate(tau_c, h) == expect), "")
    )
    if "rho" in h.scheme.gens:
        rho_c = term_element(p, 1, CoeffMonomial(rho=1))
        results.append(("chi(rho) = rho", _status(conjugate(rho_c, h) == rho_c), ""))
    t0 = term_element(p, 1, CoeffMonomial(), SteenrodMonomial((), (0,)))
    results.append(
        ("chi(tau_0) = -tau_0", _status(conjugate(t0, h) == t0.scaled(-1)), "")
    )

    monos = steenrod_monomials_by_degree(p, dmax, 0)
    coeffs = _coeff_sweep(h.scheme, cap=2)

    # involution on coefficient-twisted monomials
    failure = None
    n_inv = 0
    for mono in monos:
        for c in coeffs:
            x = term_element(p, 1, c, mono)
            if conjugate(conjugate(x, h), h) != x:
                failure = element_text(x)
                break
            n_inv += 1
        if failure:
            break
    results.append(
        ("chi is an involution", _status(failure is None),
         f"{n_inv} monomials, degree <= {dmax}" if failure is None
         else f"fails at {failure}")
    )

    # multiplicativity: exhaustive on coefficient-free pairs with total degree
    # <= dmax, plus 200 seeded random coefficient-twisted pairs
    failure = None
    n_mult = 0
    for m1 in monos:
        if failure:
            break
        d1 = _mono_topdeg(m1, p)
        for m2 in monos:
            if d1 + _mono_topdeg(m2, p) > dmax:
                continue
            x = term_element(p, 1, CoeffMonomial(), m1)
            z = term_element(p, 1, CoeffMonomial(), m2)
            if conjugate(mul(x, z, h), h) != mul(conjugate(x, h), conjugate(z, h), h):
                failure = f"{element_text(x)} * {element_text(z)}"
                break
            n_mult += 1
    rng = random.Random(20260811)
    for _ in range(200):
        if failure:
            break
        x = term_element(p, 1, rng.choice(coeffs), rng.choice(monos))
        z = term_element(p, 1, rng.choice(coeffs), rng.choice(monos))
        if conjugate(mul(x, z, h), h) != mul(conjugate(x, h), conjugate(z, h), h):
            failure = f"{element_text(x)} * {element_text(z)}"
        n_mult += 1
    results.append(
        ("chi is multiplicative", _status(failure is None),
         f"{n_mult} pairs" if failure is None else f"fails at {failure}")
    )

    # p = 2: the conjugated quadratic relation
    if p == 2:
        ok = True
        for i in range(0, 5):
            lhs = mul(chi_generator("tau", i, h), chi_generator("tau", i, h), h)
            rhs = mul(chi_generator("xi", i + 1, h), tau_c, h)
            if rho is not None:
                rhs = rhs + mul(
                    chi_generator("tau", i + 1, h),
                    term_element(p, 1, CoeffMonomial().bump(rho)),
                    h,
                )
            if lhs != rhs:
                ok = False
                break
        results.append(("conjugated quadratic relation", _status(ok), "i <= 4"))

    # the integral-form embedding is injective per bidegree (rank test);
    # rows cover the monomials that actually appear in the images
    inj_ok = True
    n_bd = 0
    detail = ""
    for bd in populated_bidegrees(hmz, dmax, config.wmax):
        src = bidegree_basis(bd, hmz)
        if not src:
            continue
        rows = {}
        entries = {}
        for col, (c, mono) in enumerate(src):
            img = mz_image_in_a(c, index_of(mono), h)
            for key, s in img.terms.items():
                entries[(rows.setdefault(key, len(rows)), col)] = s
        M = FpMatrix(p, len(rows), len(src), entries)
        if rank(M) != len(src):
            inj_ok = False
            detail = f"rank drop at {bd}"
            break
        n_bd += 1
    results.append(
        ("integral-form embedding injective", _status(inj_ok),
         detail or f"{n_bd} bidegrees, degree <= {dmax}")
    )
    return results


def suite_products(config):
    """Closed product formula vs the multiplication oracle, plus the pullback."""
    p = config.p
    results = []
    report, hard = product_relation_sweep(p, max_index=3, max_exp=2)
    if hard:
        c = hard[0]
        results.append(
            ("product relation", "FAIL",
             f"no convention matches y{c.aU} * y{c.bT}: {c.failures}")
        )
        return results
    uniform = report["uniform_convention"]
    results.append(
        ("product relation", _status(uniform == "subscript"),
         f"{report['cases']} cases, oracle matches the {uniform} convention")
    )
    printed = report["matches"]["printed"]
    if printed < report["cases"]:
        results.append(
            ("product relation delta convention", "WARN",
             f"subscript-indexed deltas verified on all {report['cases']} cases; "
             f"the off-by-one variant fails {report['cases'] - printed} of them")
        )

    # pullback model on an algebraically closed base: torsion, associativity,
    # graded commutativity
    h = algebra("algclosed", p)
    ring = int_ring(h.scheme)
    gens = []
    for mono in steenrod_monomials_by_degree(p, 12, 1):
        if not mono.taus:
            continue
        idx = index_of(mono)
        if max((j for j, e in idx.a), default=0) <= max(idx.U):
            gens.append(pb_torsion(y(idx, h), h, ring))
    gens = gens[:8]
    tau_pb = PullbackElement(
        ring.element(1, ("tau", 1)), term_element(p, 1, CoeffMonomial(tau=1)), h
    )
    torsion_ok = all(g.scaled(p).is_zero() for g in gens)
    results.append(
        ("pullback augmentation ideal is p-torsion", _status(torsion_ok),
         f"{len(gens)} generators")
    )
    probe = gens + [tau_pb]
    assoc_ok = True
    comm_ok = True
    for a in probe:
        for b in probe:
            ab = pb_mul(a, b)
            sign = -1 if (a.bidegree().d & 1) and (b.bidegree().d & 1) else 1
            ba = pb_mul(b, a).scaled(sign)
            if ba.k != ab.k or ba.z != ab.z:
                comm_ok = False
            for c in probe[:4]:
                if pb_mul(ab, c).k != pb_mul(a, pb_mul(b, c)).k:
                    assoc_ok = False
    results.append(("pullback product associative", _status(assoc_ok), ""))
    results.append(("pullback product graded-commutative", _status(comm_ok), ""))
    return results


def suite_linear(config):
    """The linear relation family among the Bockstein classes."""
    p = config.p
    ok = True
    literal_misses = 0
    cases = 0
    detail = ""
    for a in _exponent_vectors([1, 2, 3], 2):
        supp = sorted(a)
        for j in range(1, len(supp) + 2):
            rep = verify_linear_relation(a, j, p)
            cases += 1
            if not rep.ok:
                ok = False
                detail = f"a = {a}, j = {j}"
                break
            if rep.literal_sum_zero is False:
                literal_misses += 1
        if not ok:
            break
    results = [(
        "linear relations (signed family)", _status(ok),
        detail or f"{cases} (a, j) cases, exponents <= 2, support in {{1,2,3}}",
    )]
    if ok and literal_misses:
        results.append(
            ("linear relation unsigned sum", "WARN",
             f"the Koszul-signed family is exact; the unsigned all-subsets sum "
             f"vanishes only at its top-support instance ({literal_misses} "
             f"cases require the signed form)")
        )
    return results


def suite_blocks(config):
    """Acyclicity of every nontrivial block complex in the swept range."""
    p = config.p
    bad = None
    n = 0
    for masses in itertools.product(range(4), repeat=5):
        b = block({i: m for i, m in enumerate(masses)})
        hom = block_homology(b, p)
        ok = hom == [1] if not b.m else all(v == 0 for v in hom)
        n += 1
        if not ok:
            bad = (b, hom)
            break
    return [(
        "block acyclicity", _status(bad is None),
        f"{n} blocks, support in {{0..4}}, masses <= 3" if bad is None
        else f"block {bad[0].m} has homology {bad[1]}",
    )]


def suite_kerbasis(config):
    """Generic vs constructive kernel bases, and freeness of the boundaries."""
    h = config.handle()
    results = []
    dmax = min(config.dmax, 25)
    n = 0
    detail = ""
    ok = True
    for bd in populated_bidegrees(h, dmax, config.wmax):
        try:
            ker_beta_basis(bd, h)
        except AssertionError as e:
            ok = False
            detail = str(e)
            break
        n += 1
    results.append(
        ("kernel basis: constructive = generic", _status(ok),
         detail or f"{n} bidegrees, degree <= {dmax}, scheme {h.scheme.id}")
    )
    fb = min(config.dmax, 30)
    try:
        gens = free_bbeta_generators(Bidegree(fb, config.wmax), config.p, check=True)
        results.append(
            ("boundary classes free on U-maximal set", "PASS",
             f"{len(gens)} generators within ({fb}, {config.wmax})")
        )
    except AssertionError as e:
        results.append(("boundary classes free on U-maximal set", "FAIL", str(e)))
    if h.scheme.coeff_bockstein.get("tau") == "eps":
        tau_c = term_element(h.p, 1, CoeffMonomial(tau=1))
        eps_c = term_element(h.p, 1, CoeffMonomial(eps=1))
        ok1 = beta(tau_c, h) == eps_c
        ok2 = beta(term_element(h.p, 1, CoeffMonomial(tau=h.p)), h).is_zero()
        results.append(
            ("finite field Bockstein: beta(tau) = eps, beta(tau^p) = 0",
             _status(ok1 and ok2), "")
        )
    return results


def suite_z12(config):
    if config.scheme != "z-half":
        return [("z12 relation table", "FAIL", "requires --scheme zhalf")]
    return z12_relation_check(w_table=config.w_fn)


def run_suite(suite, config):
    runners = {
        "beta2": suite_beta2,
        "chi": suite_chi,
        "products": suite_products,
        "linear": suite_linear,
        "blocks": suite_blocks,
        "kerbasis": suite_kerbasis,
        "z12": suite_z12,
    }
    if suite == "all":
        out = []
        for name in ("beta2", "chi", "products", "linear", "blocks", "kerbasis"):
            out.extend(runners[name](config))
        if config.scheme == "z-half":
            out.extend(suite_z12(config))
        return out
    if suite not in runners:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    return runners[suite](config)
