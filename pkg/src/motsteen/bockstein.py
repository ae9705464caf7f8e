"""The Bockstein differential, its block decomposition, and kernel bases.

beta is the degree (-1, 0) derivation with beta(tau_j) = xi_j (xi_0 = 1 in
the full algebra), beta(xi_j) = 0, extended by the Leibniz rule with Koszul
sign (-1)^d on passing a factor of topological degree d.  In the mz form the
coefficient symbols additionally carry the scheme's coefficient Bockstein
(e.g. beta(tau) = rho over the reals at p = 2); in the full algebra the
coefficient symbols are Bockstein-free.

The coefficient-free model splits as a tensor product of two-term acyclic
complexes: block slot i >= 0 holds xi_{i+1}-exponent-plus-tau_{i+1} mass m_i,
and the block complex on a block vector m has basis all eta[m - chi_U, U]
with U inside the support, graded by tau count.  Its homology vanishes unless
m = 0, which beta_report and the kernel-basis machinery exploit.
"""

from __future__ import annotations

from typing import NamedTuple

from .grading import BETA_SHIFT, Bidegree
from .elements import (
    SteenrodMonomial,
    Term,
    _coeff_zero,
    coeff_degree,
    coeff_scale,
    mul,
    normalize,
    term_element,
)
from .linalg import FpBasis, FpMatrix, kernel_basis, rank, rank_of_columns
from .schemes import COEFF_ORDER
from .steenrod import basis_index, bidegree_basis, eta, eta_degree, index_of


def _beta_coeff_monomial(c, h):
    """Coefficient Bockstein on one coefficient monomial, as [(scalar, CoeffMonomial)].

    Derivation over the coefficient generators in canonical order; the sign
    on passing earlier odd generators is (-1) per odd factor passed.
    """
    table = h.coeff_bockstein()
    if not table:
        return []
    p = h.p
    scheme = h.scheme
    out = []
    passed_odd = 0
    for name in COEFF_ORDER:
        e = c.exp(name)
        if not e:
            continue
        target = table.get(name)
        if target is not None:
            # e * g^(e-1) * beta(g) * rest, beta(g) = target
            s = (e % p) * (-1 if passed_odd & 1 else 1)
            if s % p:
                nc = c.bump(name, -1).bump(target)
                if not _coeff_zero(nc, scheme):
                    out.append((s % p, nc))
        if scheme.degree(name).d & 1:
            passed_odd += e
    return out


def beta(x, h):
    """The Bockstein of a normalized homogeneous element."""
    if x.p != h.p:
        raise ValueError("element prime does not match the handle")
    x.homogeneous_bidegree(h.scheme)  # rejects mixed degrees
    p = h.p
    raw = []
    for (c, m), s in x.terms.items():
        # coefficient part
        for cs, nc in _beta_coeff_monomial(c, h):
            raw.append(Term((s * cs) % p, nc, m))
        # xi/tau part: pass the whole coefficient, then earlier tau factors
        sign_c = -1 if coeff_degree(c, h.scheme).d & 1 else 1
        for t, j in enumerate(m.taus):
            sign = sign_c * (-1 if t & 1 else 1)
            taus = m.taus[:t] + m.taus[t + 1 :]
            xi = dict(m.xi)
            if j > 0:
                xi[j] = xi.get(j, 0) + 1
            # beta(tau_0) = 1 in the full algebra
            mono = SteenrodMonomial(tuple(sorted(xi.items())), taus)
            raw.append(Term((s * sign) % p, c, mono))
    return normalize(raw, h)


_y_cache = {}


def y(idx, h):
    """The Bockstein class beta(eta[a, U]), computed by the derivation."""
    if h.ambient != "mz":
        raise ValueError("y classes live in the mz form")
    key = (h.scheme.id, h.p, h.scheme.q, idx)
    hit = _y_cache.get(key)
    if hit is None:
        hit = _y_cache[key] = beta(eta(idx, h), h)
    return hit


# ---------------------------------------------------------------------------
# Blocks


class Block(NamedTuple):
    m: tuple  # sorted ((slot i >= 0, mass), ...), masses > 0


def block(masses):
    return Block(tuple(sorted((i, v) for i, v in dict(masses).items() if v)))


def block_of(mono):
    """Block of a coefficient-free monomial: slot i mass = a_{i+1} + [i+1 in U]."""
    m = {}
    for j, e in mono.xi:
        m[j - 1] = m.get(j - 1, 0) + e
    for j in mono.taus:
        m[j - 1] = m.get(j - 1, 0) + 1
    return block(m)


class BlockComplex(NamedTuple):
    blk: Block
    p: int
    bases: tuple       # bases[t] = tuple of BasisIndex with tau count t
    differentials: tuple  # differentials[t]: FpMatrix mapping C_t -> C_{t-1}


def block_complex(blk, p):
    """The finite subcomplex of the coefficient-free model spanned by one block."""
    from .elements import algebra

    h = algebra("bare", p)
    slots = [i for i, v in blk.m]
    n = len(slots)
    bases = [[] for _ in range(n + 1)]
    for bits in range(1 << n):
        U = tuple(slots[k] + 1 for k in range(n) if bits >> k & 1)
        a = {}
        for i, v in blk.m:
            e = v - (1 if i + 1 in U else 0)
            if e:
                a[i + 1] = e
        bases[len(U)].append(basis_index(a, U))
    for t in range(n + 1):
        bases[t].sort()
    diffs = [None]
    for t in range(1, n + 1):
        rows = {idx: i for i, idx in enumerate(bases[t - 1])}
        entries = {}
        for col, idx in enumerate(bases[t]):
            img = beta(eta(idx, h), h)
            for (c, mono), s in img.terms.items():
                entries[(rows[index_of(mono)], col)] = s
        diffs.append(FpMatrix(p, len(bases[t - 1]), len(bases[t]), entries))
    return BlockComplex(blk, p, tuple(tuple(b) for b in bases), tuple(diffs))


def block_homology(blk, p):
    """Exact homology dimensions of the block complex, by tau count."""
    cx = block_complex(blk, p)
    n = len(cx.bases) - 1
    ranks = [0] * (n + 2)
    for t in range(1, n + 1):
        ranks[t] = rank(cx.differentials[t])
    out = []
    for t in range(n + 1):
        dim = len(cx.bases[t])
        out.append(dim - ranks[t] - ranks[t + 1])
    return out


# ---------------------------------------------------------------------------
# Per-bidegree matrices and kernel bases


def beta_matrix(bd, h):
    """Matrix of beta from the bd basis to the (bd - (1,0)) basis."""
    src = bidegree_basis(bd, h)
    dst = bidegree_basis(bd + BETA_SHIFT, h)
    rows = {key: i for i, key in enumerate(dst)}
    entries = {}
    for col, (c, mono) in enumerate(src):
        img = beta(term_element(h.p, 1, c, mono), h)
        for key, s in img.terms.items():
            entries[(rows[key], col)] = s
    return FpMatrix(h.p, len(dst), len(src), entries)


def element_vector(x, basis_list, rows=None):
    if rows is None:
        rows = {key: i for i, key in enumerate(basis_list)}
    v = [0] * len(basis_list)
    for key, s in x.terms.items():
        if key not in rows:
            raise ValueError("element does not lie in the given bidegree basis")
        v[rows[key]] = s
    return tuple(v)


# --- constructive kernel data per scheme ---------------------------------


def scheme_kernel_data(scheme):
    """(Z_H, R_H) generators of the coefficient ring, as predicate enumerators.

    Z_H spans ker(beta) on the coefficient ring; R_H is mapped bijectively
    onto a basis of the image.  Both are returned as functions of a bidegree
    which list the coefficient monomials of that degree.
    """
    from .steenrod import coeff_monomials

    beta_table = scheme.coeff_bockstein
    if not beta_table:
        return (lambda bd: coeff_monomials(bd, scheme)), (lambda bd: [])

    if scheme.id in ("real-p2", "z-half"):
        def z_h(bd):
            keep = []
            for c in coeff_monomials(bd, scheme):
                if c.eps or c.tau % 2 == 0:
                    keep.append(c)  # eps tau^k, or rho^i tau^even
            return keep

        def r_h(bd):
            return [
                c for c in coeff_monomials(bd, scheme)
                if not c.eps and c.tau % 2 == 1
            ]

        return z_h, r_h

    if scheme.id == "finite-field":
        p = scheme.p

        def z_h(bd):
            return [
                c for c in coeff_monomials(bd, scheme)
                if c.eps or c.tau % p == 0
            ]

        def r_h(bd):
            return [
                c for c in coeff_monomials(bd, scheme)
                if not c.eps and c.tau % p != 0
            ]

        return z_h, r_h

    raise ValueError(f"no kernel data for scheme {scheme.id}")


_umax_cache = {}


def u_maximal_by_degree(p, budget):
    """Map eta-bidegree -> U-maximal indices, over all eta with d - w <= budget."""
    from .steenrod import steenrod_monomials

    key = (p, budget)
    if key in _umax_cache:
        return _umax_cache[key]
    out = {}
    for mono in steenrod_monomials(p, budget, 1):
        if not mono.taus:
            continue
        idx = index_of(mono)
        max_a = max((j for j, e in idx.a), default=0)
        if max_a <= max(idx.U):
            out.setdefault(eta_degree(idx, p), []).append(idx)
    _umax_cache[key] = out
    return out


def u_maximal_indices(bd_eta, p):
    """Basis indices (a, U) with |eta| = bd_eta, U nonempty, max supp a <= max U."""
    d, w = bd_eta
    if d - w < 0:
        return []
    return list(u_maximal_by_degree(p, d - w).get(bd_eta, []))


def free_bbeta_generators(bound, p, check=True):
    """All U-maximal indices with |y| within the componentwise bound.

    With check=True, asserts per bidegree that the corresponding y vectors
    are independent and span the image of the differential there (in the
    coefficient-free model).
    """
    from .elements import algebra
    from .steenrod import steenrod_monomials

    h = algebra("bare", p)
    dmax, wmax = bound
    found = {}
    for mono in steenrod_monomials(p, dmax + 1, 1):
        if not mono.taus:
            continue
        idx = index_of(mono)
        max_a = max((j for j, e in idx.a), default=0)
        if max_a > max(idx.U):
            continue
        yb = eta_degree(idx, p) + BETA_SHIFT
        if yb.d <= dmax and yb.w <= wmax:
            found.setdefault(yb, []).append(idx)
    if check:
        for yb, idxs in sorted(found.items()):
            basis_list = bidegree_basis(yb, h)
            rows_map = {key: i for i, key in enumerate(basis_list)}
            vecs = [element_vector(y(i, h), basis_list, rows_map) for i in idxs]
            if rank_of_columns(p, vecs) != len(vecs):
                raise AssertionError(f"U-maximal y classes dependent at {yb}")
            if rank(beta_matrix(yb - BETA_SHIFT, h)) != len(vecs):
                raise AssertionError(f"U-maximal y classes do not span im beta at {yb}")
    out = [i for _, idxs in sorted(found.items()) for i in idxs]
    return out


class KernelBases(NamedTuple):
    bidegree: Bidegree
    labels: list          # the ambient monomial basis of the bidegree
    generic: FpBasis      # kernel of the beta matrix
    constructive: list    # Elements of the Z u U construction
    agrees: bool


def constructive_kernel(bd, h):
    """The Z u U kernel basis of one bidegree.

    Z: coefficient cycles times (1 or a U-maximal y class).
    U: beta(r) eta[a,U] + (-1)^{deg r} r y[a,U] for coefficient preimages r
    and U-maximal eta; the sign is the one forced by the Leibniz rule (it
    agrees with the stated one at p = 2).  Every element is verified to be
    a beta cycle on construction.
    """
    from .steenrod import coeff_degree_populated

    z_h, r_h = scheme_kernel_data(h.scheme)
    p = h.p
    out = []
    d, w = bd
    for c in z_h(bd):
        out.append(term_element(p, 1, c))
    # every xi/tau generator costs at least 1 in d - w, and the coefficient
    # remainders below cost at least -1, so budget d - w + 1 is exhaustive
    if d - w + 1 >= 0:
        for eb, idxs in u_maximal_by_degree(p, d - w + 1).items():
            rem_z = Bidegree(d - eb.d + 1, w - eb.w)
            rem_r = rem_z  # |beta r| + |eta| = bd forces the same remainder
            if not coeff_degree_populated(rem_z, h.scheme):
                continue
            zs = z_h(rem_z)
            rs = r_h(rem_r)
            if not zs and not rs:
                continue
            for idx in idxs:
                for c in zs:
                    out.append(coeff_scale(c, y(idx, h), h))
                for r in rs:
                    r_el = term_element(p, 1, r)
                    sign = -1 if coeff_degree(r, h.scheme).d & 1 else 1
                    el = mul(beta(r_el, h), eta(idx, h), h) + coeff_scale(
                        r, y(idx, h), h
                    ).scaled(sign)
                    out.append(el)
    for el in out:
        if not beta(el, h).is_zero():
            raise AssertionError("constructive kernel element is not a beta cycle")
    return out


def ker_beta_basis(bd, h):
    """Generic and constructive kernel bases of one bidegree; asserts agreement.

    Agreement means: same count, the constructive vectors are independent,
    and stacking them onto the generic kernel does not grow the rank.
    """
    basis_list = bidegree_basis(bd, h)
    M = beta_matrix(bd, h)
    generic = kernel_basis(M)
    generic.labels = basis_list
    construct = constructive_kernel(bd, h)
    rows_map = {key: i for i, key in enumerate(basis_list)}
    vecs = [element_vector(el, basis_list, rows_map) for el in construct]
    agrees = len(vecs) == len(generic.vectors)
    if agrees and vecs:
        agrees = rank_of_columns(h.p, vecs) == len(vecs)
        if agrees:
            stacked = rank_of_columns(h.p, list(generic.vectors) + vecs)
            agrees = stacked == len(generic.vectors)
    if not agrees:
        raise AssertionError(
            f"constructive kernel disagrees with the generic kernel at {bd}: "
            f"{len(vecs)} constructive vs {len(generic.vectors)} generic"
        )
    return KernelBases(bd, basis_list, generic, construct, agrees)


# ---------------------------------------------------------------------------
# Reports


def homology_dims(bd, h):
    """(dim, rank, ker, im, homology) of the Bockstein at one bidegree."""
    M = beta_matrix(bd, h)
    r = rank(M)
    dim = M.ncols
    im_rank = rank(beta_matrix(bd - BETA_SHIFT, h))
    return dim, r, dim - r, im_rank, dim - r - im_rank


def _ideal_basis(bd, h):
    return [(c, m) for (c, m) in bidegree_basis(bd, h) if not m.is_one()]


def _ideal_rank(bd, h):
    src = _ideal_basis(bd, h)
    dst = _ideal_basis(bd + BETA_SHIFT, h)
    rows = {key: i for i, key in enumerate(dst)}
    entries = {}
    for col, (c, mono) in enumerate(src):
        img = beta(term_element(h.p, 1, c, mono), h)
        for key, s in img.terms.items():
            entries[(rows[key], col)] = s
    return len(src), rank(FpMatrix(h.p, len(dst), len(src), entries))


def coeff_homology_dim(bd, h):
    """Bockstein homology of the coefficient ring alone at one bidegree."""
    from .steenrod import coeff_monomials

    scheme = h.scheme
    src = coeff_monomials(bd, scheme)
    dst = coeff_monomials(bd + BETA_SHIFT, scheme)
    pre = coeff_monomials(bd - BETA_SHIFT, scheme)

    def mat(cols, rows_list):
        rows = {c: i for i, c in enumerate(rows_list)}
        entries = {}
        for col, c in enumerate(cols):
            for s, nc in _beta_coeff_monomial(c, h):
                entries[(rows[nc], col)] = s
        return FpMatrix(h.p, len(rows_list), len(cols), entries)

    r1 = rank(mat(src, dst))
    r2 = rank(mat(pre, src))
    return len(src) - r1 - r2


def beta_report(bidegrees, h):
    """Per-bidegree dimension report with acyclicity and splitting checks.

    Each row records (dim, rank, ker, im, homology); a note flags any
    bidegree where the homology does not match the coefficient-ring
    homology (the tensor splitting) or where the augmentation-ideal part
    fails im = ker.
    """
    report = []
    for bd in bidegrees:
        dim, r, ker, im, hom = homology_dims(bd, h)
        notes = []
        if hom != coeff_homology_dim(bd, h):
            notes.append("homology does not match the coefficient tensor factor")
        ideal_dim, ideal_rank = _ideal_rank(bd, h)
        ideal_im = _ideal_rank(bd - BETA_SHIFT, h)[1]
        if ideal_dim - ideal_rank != ideal_im:
            notes.append("augmentation ideal has im != ker here")
        report.append(
            {
                "bidegree": [bd.d, bd.w],
                "dim": dim,
                "rank": r,
                "ker": ker,
                "im": im,
                "homology": hom,
                "notes": notes,
            }
        )
    return report
