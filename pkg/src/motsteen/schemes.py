"""Base scheme presentations: the mod-p coefficient ring of each supported base.

A scheme presentation records, for one base and one prime, the coefficient
generators with their bidegrees, the multiplicative relations among them
(nilpotence caps and annihilating pairs), the distinguished class playing the
role of rho in the p=2 Milnor relation, and the coefficient Bockstein.

Supported bases:

  algclosed    F_p[tau]                        (algebraically closed field)
  real-p2      F_2[rho, tau], beta tau = rho   (the real numbers, p = 2)
  real-odd     F_p[theta]                      (the real numbers, p odd)
  finite-field F_p[tau, eps]/eps^2 or F_p[tau] (F_q, p not dividing q)
  z-half       F_2[tau, rho, eps]/(eps rho, eps^2), beta tau = rho  (Z[1/2])

plus an internal coefficient-free presentation ("bare") used for the
tensor-factor model of the dual Steenrod algebra, where the odd generators
square to zero at every prime.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .grading import Bidegree

# canonical order of coefficient generator symbols (also the print order)
COEFF_ORDER = ("theta", "eps", "rho", "tau")

_DEGREES = {
    "tau": Bidegree(0, -1),
    "rho": Bidegree(-1, -1),
    "eps": Bidegree(-1, -1),
    "theta": Bidegree(0, -2),
}


class SchemeError(ValueError):
    """Invalid scheme/prime/q combination or foreign generator."""


def _is_prime(n):
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _is_prime_power(n):
    if n < 2:
        return False
    for k in range(2, n.bit_length() + 1):
        r = round(n ** (1.0 / k))
        for c in (r - 1, r, r + 1):
            if c >= 2 and c**k == n and _is_prime(c):
                return True
    return _is_prime(n)


@dataclass(frozen=True)
class SchemePresentation:
    id: str
    p: int
    q: int | None = None
    gens: tuple[str, ...] = ()
    caps: dict = field(default_factory=dict)        # name -> max exponent
    zero_pairs: frozenset = frozenset()             # {frozenset({g1,g2})}: g1*g2 = 0
    rho_element: str | None = None                  # None means rho = 0
    coeff_bockstein: dict = field(default_factory=dict)  # name -> name, beta(g) = target

    def degree(self, name):
        if name not in self.gens:
            raise SchemeError(f"generator {name!r} not present for scheme {self.id}")
        return _DEGREES[name]

    def describe(self):
        rel = []
        for g, cap in sorted(self.caps.items()):
            rel.append(f"{g}^{cap + 1}")
        for pair in sorted(tuple(sorted(s)) for s in self.zero_pairs):
            rel.append("*".join(pair))
        return {
            "scheme": self.id,
            "p": self.p,
            **({"q": self.q} if self.q is not None else {}),
            "generators": [
                {"name": g, "bidegree": list(_DEGREES[g])} for g in self.gens
            ],
            "relations": rel,
            "rho": self.rho_element or "0",
            "bockstein": {g: t for g, t in sorted(self.coeff_bockstein.items())},
        }


def make_scheme(scheme_id, p, q=None):
    """Build the presentation for one base scheme at the prime p."""
    if not _is_prime(p):
        raise SchemeError(f"p = {p} is not prime")

    if scheme_id == "algclosed":
        return SchemePresentation("algclosed", p, gens=("tau",))

    if scheme_id in ("real", "real-p2", "real-odd"):
        if scheme_id == "real":
            scheme_id = "real-p2" if p == 2 else "real-odd"
        if scheme_id == "real-p2":
            if p != 2:
                raise SchemeError("real-p2 requires p = 2")
            return SchemePresentation(
                "real-p2", 2, gens=("rho", "tau"),
                rho_element="rho", coeff_bockstein={"tau": "rho"},
            )
        if p == 2:
            raise SchemeError("real-odd requires an odd prime")
        return SchemePresentation("real-odd", p, gens=("theta",))

    if scheme_id == "finite-field":
        if q is None:
            raise SchemeError("finite-field requires q")
        if not _is_prime_power(q):
            raise SchemeError(f"q = {q} is not a prime power")
        if q % p == 0:
            raise SchemeError("finite-field requires p not dividing q")
        if (q - 1) % p != 0:
            # eps dies mod p: plain polynomial coefficients, no Bockstein
            return SchemePresentation("finite-field", p, q=q, gens=("tau",))
        exceptional = (q - 1) % (p * p) != 0  # p divides q-1 exactly once
        rho = None
        if p == 2:
            # -1 is a square in F_q iff q = 1 mod 4
            rho = "eps" if q % 4 == 3 else None
        return SchemePresentation(
            "finite-field", p, q=q,
            gens=("eps", "tau"), caps={"eps": 1},
            rho_element=rho,
            coeff_bockstein={"tau": "eps"} if exceptional else {},
        )

    if scheme_id == "z-half":
        if p != 2:
            raise SchemeError("z-half requires p = 2")
        return SchemePresentation(
            "z-half", 2, gens=("eps", "rho", "tau"), caps={"eps": 1},
            zero_pairs=frozenset({frozenset({"eps", "rho"})}),
            rho_element="rho", coeff_bockstein={"tau": "rho"},
        )

    if scheme_id == "bare":
        return SchemePresentation("bare", p)

    raise SchemeError(f"unknown scheme {scheme_id!r}")


SCHEME_IDS = ("algclosed", "real-p2", "real-odd", "finite-field", "z-half")
