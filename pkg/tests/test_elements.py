"""Core arithmetic: normalization, products, gradings, text form."""

import random

import pytest

from motsteen import (
    algebra,
    bidegree_of,
    element_text,
    mul,
    normalize,
    parse_element,
    parse_term,
    term_element,
    term_text,
    xi_degree,
    tau_degree,
)
from motsteen.elements import (
    COEFF_ONE,
    CoeffMonomial,
    SteenrodMonomial,
    coeff_scale,
    power,
)
from motsteen.schemes import SchemeError, make_scheme
from motsteen.steenrod import basis_index, eta, steenrod_monomials_by_degree

H2 = algebra("algclosed", 2)
H3 = algebra("algclosed", 3)
HR = algebra("real-p2", 2)
HZ = algebra("z-half", 2)


def raw(scalar, coeff=COEFF_ONE, xi=(), taus=()):
    return (scalar, coeff, dict(xi), dict(taus))


def test_generator_bidegrees():
    assert xi_degree(2, 1) == (2, 1)
    assert tau_degree(3, 1) == (5, 2)
    assert tau_degree(2, 0) == (1, 0)
    assert xi_degree(3, 2) == (16, 8)


def test_bidegree_of_examples():
    assert bidegree_of((COEFF_ONE, SteenrodMonomial(((1, 1),), ())), H2.scheme) == (2, 1)
    assert bidegree_of((COEFF_ONE, SteenrodMonomial((), (1,))), H3.scheme) == (5, 2)
    rt = CoeffMonomial(rho=1, tau=1)
    assert bidegree_of((rt, SteenrodMonomial((), ())), HR.scheme) == (-1, -2)


def test_bidegree_additive_on_monomial_products():
    monos = steenrod_monomials_by_degree(2, 10, 1)
    for m1 in monos[:20]:
        for m2 in monos[:20]:
            x = term_element(2, 1, COEFF_ONE, m1)
            z = term_element(2, 1, COEFF_ONE, m2)
            prod = mul(x, z, H2)
            if len(prod.terms) == 1:
                got = prod.homogeneous_bidegree(H2.scheme)
                want = bidegree_of((COEFF_ONE, m1), H2.scheme) + bidegree_of(
                    (COEFF_ONE, m2), H2.scheme
                )
                assert got == want


def test_normalize_tau_square_p2():
    out = normalize([raw(1, taus={1: 2})], H2)
    assert element_text(out) == "tau^1 | xi2^1 | tau{}"


def test_normalize_tau_square_real_has_rho_term():
    out = normalize([raw(1, taus={1: 2})], HR)
    assert element_text(out) == "tau^1 | xi2^1 | tau{} + rho^1 | 1 | tau{2}"


def test_normalize_tau_square_odd_p_is_zero():
    assert normalize([raw(1, taus={1: 2})], H3).is_zero()


def test_normalize_full_algebra_tau0_term():
    ha = algebra("real-p2", 2, ambient="a")
    out = normalize([raw(1, taus={0: 2})], ha)
    # tau_0^2 = xi_1 tau + xi_1 tau_0 rho + tau_1 rho
    assert element_text(out) == (
        "tau^1 | xi1^1 | tau{} + rho^1 | 1 | tau{1} + rho^1 | xi1^1 | tau{0}"
    )


def test_normalize_coefficient_relations():
    assert normalize([raw(1, CoeffMonomial(eps=1, rho=1))], HZ).is_zero()
    assert normalize([raw(1, CoeffMonomial(eps=2))], HZ).is_zero()


def test_normalize_idempotent():
    rng = random.Random(7)
    monos = steenrod_monomials_by_degree(2, 14, 1)
    for _ in range(40):
        terms = [
            raw(
                rng.randrange(1, 2),
                CoeffMonomial(rho=rng.randrange(2), tau=rng.randrange(3)),
                dict(rng.choice(monos).xi),
                {j: 1 for j in rng.choice(monos).taus},
            )
            for _ in range(3)
        ]
        once = normalize(terms, HR)
        again = normalize(once.sorted_terms(), HR)
        assert once == again


def test_normalize_rejects_foreign_generator():
    with pytest.raises(SchemeError):
        normalize([raw(1, CoeffMonomial(theta=1))], H2)


def test_normalize_rejects_low_tau_index():
    with pytest.raises(ValueError):
        normalize([raw(1, taus={0: 1})], H2)  # mz form has no tau_0


def test_mul_disjoint_taus():
    t1 = eta(basis_index({}, [1]), H2)
    t2 = eta(basis_index({}, [2]), H2)
    assert element_text(mul(t1, t2, H2)) == "1 | 1 | tau{1,2}"


def test_mul_koszul_sign_odd_p():
    t1 = eta(basis_index({}, [1]), H3)
    t2 = eta(basis_index({}, [2]), H3)
    assert mul(t2, t1, H3) == mul(t1, t2, H3).scaled(-1)


def test_mul_square_with_cross_terms():
    x = eta(basis_index({1: 1}, []), H2) + eta(basis_index({}, [1]), H2)
    assert element_text(mul(x, x, H2)) == "1 | xi1^2 | tau{} + tau^1 | xi2^1 | tau{}"


def test_mul_rejects_mixed_primes():
    with pytest.raises(ValueError):
        mul(eta(basis_index({}, [1]), H2), eta(basis_index({}, [1]), H3), H2)


def test_graded_commutativity_exhaustive():
    for h in (H3, algebra("finite-field", 3, q=7)):
        monos = steenrod_monomials_by_degree(3, 20, 1)
        coeffs = [COEFF_ONE, CoeffMonomial(tau=1)]
        if "eps" in h.scheme.gens:
            coeffs.append(CoeffMonomial(eps=1))
        elems = [term_element(3, 1, c, m) for m in monos for c in coeffs]
        for x in elems:
            dx = x.homogeneous_bidegree(h.scheme).d
            for z in elems:
                dz = z.homogeneous_bidegree(h.scheme).d
                sign = -1 if (dx & 1) and (dz & 1) else 1
                assert mul(x, z, h) == mul(z, x, h).scaled(sign)


def test_associativity_sampled():
    rng = random.Random(11)
    monos = steenrod_monomials_by_degree(3, 18, 1)
    elems = [term_element(3, 1, COEFF_ONE, m) for m in monos]
    for _ in range(150):
        x, z, w = (rng.choice(elems) for _ in range(3))
        assert mul(mul(x, z, H3), w, H3) == mul(x, mul(z, w, H3), H3)


def test_unital():
    one = term_element(2, 1)
    x = eta(basis_index({1: 2}, [1, 3]), H2)
    assert mul(one, x, H2) == x
    assert mul(x, one, H2) == x


def test_coeff_scale_matches_mul():
    hf = algebra("finite-field", 3, q=7)
    monos = steenrod_monomials_by_degree(3, 15, 1)
    for m in monos[:25]:
        x = term_element(3, 1, CoeffMonomial(eps=1), m)
        c = CoeffMonomial(eps=1, tau=2)
        assert coeff_scale(c, x, hf) == mul(term_element(3, 1, c), x, hf)


def test_power():
    x = eta(basis_index({1: 1}, []), H2)
    assert element_text(power(x, 3, H2)) == "1 | xi1^3 | tau{}"


def test_text_round_trip():
    cases = [
        "rho^1*tau^2 | xi1^3 xi3^1 | tau{2,4}",
        "1 | 1 | tau{}",
        "2*tau^1 | xi2^1 | tau{1}",
    ]
    for s in cases:
        t = parse_term(s)
        assert term_text(t) == s
    el = eta(basis_index({1: 3, 3: 1}, [2, 4]), HR)
    el = coeff_scale(CoeffMonomial(rho=1, tau=2), el, HR)
    assert parse_element(element_text(el), 2) == el
    assert parse_element("0", 5).is_zero()


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_term("xi1^2")  # missing separators
    with pytest.raises(ValueError):
        parse_term("1 | 1 | tau{1,1}")  # repeated index


def test_homogeneous_bidegree_rejects_mixed():
    x = eta(basis_index({1: 1}, []), H2) + term_element(2, 1)
    with pytest.raises(ValueError):
        x.homogeneous_bidegree(H2.scheme)


def test_scheme_validation():
    with pytest.raises(SchemeError):
        make_scheme("z-half", 3)
    with pytest.raises(SchemeError):
        make_scheme("finite-field", 3, q=9)  # p divides q
    with pytest.raises(SchemeError):
        make_scheme("algclosed", 4)
    with pytest.raises(SchemeError):
        make_scheme("real-odd", 2)
    assert make_scheme("finite-field", 2, q=7).rho_element == "eps"  # 7 = 3 mod 4
    assert make_scheme("finite-field", 2, q=5).rho_element is None
    assert make_scheme("finite-field", 3, q=7).coeff_bockstein == {"tau": "eps"}
    assert make_scheme("finite-field", 3, q=19).coeff_bockstein == {}  # 9 | 18
    assert make_scheme("finite-field", 3, q=5).gens == ("tau",)  # 3 does not divide 4
