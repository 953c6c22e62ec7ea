"""Top-level identity verifier.

Builds the degree-(8m+4) and degree-8m characteristic q-series two ways
(K-theory tensor assembly vs calibrated theta-quotient products), runs the
modular-basis decomposition, measures the normalization scalar of the main
cancellation identity against the expected integer constant, checks the
three classical gravitational cancellation combinations, and extracts the
integer corollary vectors.  Everything here is exact rational arithmetic; a
report either has an empty residual list or names the offending monomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .chroot import (
    GradedClass,
    GradedRing,
    RootProfile,
    product_over_root_pairs,
    xseries_inverse,
    xseries_mul,
)
from .genera import (
    L_FULL,
    a_hat,
    ahat_root_series,
    l_class,
    l_root_series,
    normalize_l_variant,
)
from .modforms import SpanError, basis_decompose, decompose_theta2
from .qseries import QQ, HalfQSeries
from .witten import (
    THETA1,
    THETA2,
    CharacterElement,
    build_theta_bundle,
    chern_character,
    default_theta_order2,
)

ROUTE_KTHEORY = "ktheory"
ROUTE_THETA = "theta_product"

P1, P2, Q1, Q2 = "P1", "P2", "Q1", "Q2"

CASE_CONSTANTS = {"b": 8, "z": 1}  # overall factor in front of sum 2^(6m-6r)


def identity_parameters(fiber_dim: int):
    """(case, m, identity degree) for a fiber dimension; 'b' carries 8m+4."""
    r = fiber_dim % 8
    if r in (1, 2, 3):
        m = fiber_dim // 8
        return "b", m, 8 * m + 4
    if r in (5, 6, 7):
        m = fiber_dim // 8 + 1
        return "z", m, 8 * m
    raise ValueError(
        f"fiber dimension {fiber_dim} (0 or 4 mod 8) has no identity class here"
    )


def identity_profile(fiber_dim: int, max_form_degree: int | None = None) -> RootProfile:
    """Root profile truncated at the fiber's identity degree by default."""
    if max_form_degree is None:
        _, _, max_form_degree = identity_parameters(fiber_dim)
    return RootProfile(fiber_dim, max_form_degree)


@dataclass
class IdentityReport:
    """Outcome of one verification: measured scalar, residuals, status."""

    identity: str
    fiber_dim: int
    m: int
    l_variant: str | None
    route: str | None
    lambda_measured: Fraction | None
    paper_ratio: Fraction | None
    residuals: list
    status: str
    lhs: list = field(default_factory=list)
    rhs: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_obj(self) -> dict:
        return {
            "identity": self.identity,
            "fiber_dim": self.fiber_dim,
            "m": self.m,
            "l_variant": self.l_variant,
            "route": self.route,
            "lambda": None if self.lambda_measured is None else str(self.lambda_measured),
            "paper_ratio": None if self.paper_ratio is None else str(self.paper_ratio),
            "residuals": self.residuals,
            "status": self.status,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


@dataclass(frozen=True)
class CorollaryVector:
    """Integer combination over {signature twist, T_C Z twist, trivial twist}."""

    fiber_dim: int
    coefficients: tuple

    basis = ("signature-twist", "TCZ-twist", "trivial-twist")

    def to_obj(self) -> dict:
        return {
            "fiber_dim": self.fiber_dim,
            "basis": list(self.basis),
            "coefficients": [str(c) for c in self.coefficients],
        }


def _kind_parameters(kind: str, profile: RootProfile):
    case, m, degree = identity_parameters(profile.fiber_dim)
    if kind in (P1, P2) and case != "b":
        raise ValueError(f"{kind} requires fiber dimension 8m+1..8m+3, got {profile.fiber_dim}")
    if kind in (Q1, Q2) and case != "z":
        raise ValueError(f"{kind} requires fiber dimension 8m-3..8m-1, got {profile.fiber_dim}")
    if profile.max_form_degree < degree:
        raise ValueError(
            f"profile truncation {profile.max_form_degree} below identity degree {degree}"
        )
    return case, m, degree


# -- exact theta-quotient route ---------------------------------------------


def _exp_xseries(c: int, order2: int, n_x: int) -> list:
    """e^(c x) as an x-series with constant q-series coefficients."""
    return [
        HalfQSeries.from_terms(QQ, [(0, Fraction(c) ** i / factorial(i))], order2)
        for i in range(n_x)
    ]


def _one_plus_exp_q(c: int, sign: int, exp2: int, order2: int, n_x: int) -> list:
    """1 + sign * e^(c x) * q^(exp2/2) as an x-series over q-series."""
    out = []
    for i, coeff in enumerate(_exp_xseries(c, order2, n_x)):
        base = [(exp2, sign * coeff.coefficient(0))]
        if i == 0:
            base.append((0, 1))
        out.append(HalfQSeries.from_terms(QQ, base, order2))
    return out


def theta_quotient_pair_series(
    kind: str, l_variant: str, order2: int, max_weight: int
) -> list:
    """Even u-coefficients (u = x^2) of one root pair's theta-quotient factor.

    The q^0 term is calibrated to the matching K-theory prefactor (A-roof
    for the Theta_2 side, the requested L-variant for the Theta_1 side).
    The full-angle Theta_1 calibration doubles the root exponentials: that
    is the determinant normalization under which the S-transformation
    carries the clean 2^(4m+2) factor.
    """
    n_x = 2 * max_weight + 1
    one = HalfQSeries.one(QQ, order2)
    if kind in (P2, Q2):
        prefactor, c = ahat_root_series(n_x), 1
    else:
        l_variant = normalize_l_variant(l_variant)
        prefactor = l_root_series(n_x, l_variant)
        c = 1 if l_variant != L_FULL else 2
    series = [one * coeff for coeff in prefactor]
    if kind in (P2, Q2):
        lambda_factors = [(2 * n - 1, -1) for n in range(1, order2 // 2 + 1)]
    else:
        lambda_factors = [(2 * n, 1) for n in range(1, (order2 - 1) // 2 + 1)]
    # symmetric-power factors: (1-q^n)^2 / ((1 - e^(cx) q^n)(1 - e^(-cx) q^n))
    for n in range(1, (order2 - 1) // 2 + 1):
        exp2 = 2 * n
        denom = xseries_mul(
            _one_plus_exp_q(c, -1, exp2, order2, n_x),
            _one_plus_exp_q(-c, -1, exp2, order2, n_x),
            n_x,
        )
        scalar = HalfQSeries.from_terms(QQ, [(0, 1), (exp2, -1)], order2) ** 2
        factor = [entry * scalar for entry in xseries_inverse(denom, n_x)]
        series = xseries_mul(series, factor, n_x)
    # exterior-power factors at +-q^(h/2)
    for exp2, sign in lambda_factors:
        if exp2 >= order2:
            continue
        numer = xseries_mul(
            _one_plus_exp_q(c, sign, exp2, order2, n_x),
            _one_plus_exp_q(-c, sign, exp2, order2, n_x),
            n_x,
        )
        scalar_inv = (
            HalfQSeries.from_terms(QQ, [(0, 1), (exp2, sign)], order2) ** 2
        ).inverse()
        series = xseries_mul(series, [entry * scalar_inv for entry in numer], n_x)
    for i in range(1, n_x, 2):
        assert not series[i], "theta-quotient pair factor must be even in x"
    return series[0::2][: max_weight + 1]


def p_form(
    kind: str,
    profile: RootProfile,
    route: str = ROUTE_KTHEORY,
    l_variant: str = L_FULL,
    order2: int | None = None,
) -> HalfQSeries:
    """The degree-extracted characteristic q-series P_1/P_2/Q_1/Q_2.

    ktheory route: Hirzebruch prefactor times the Witten bundle character,
    degree component per q-coefficient.  theta_product route: per-root-pair
    theta-quotient products pushed through the power-sum pipeline.
    """
    case, m, degree = _kind_parameters(kind, profile)
    if order2 is None:
        order2 = default_theta_order2(m)
    ring = GradedRing(profile)
    if route == ROUTE_KTHEORY:
        if kind in (P2, Q2):
            prefactor = a_hat(profile)
            theta = build_theta_bundle(THETA2, profile, order2)
        else:
            prefactor = l_class(profile, normalize_l_variant(l_variant))
            theta = build_theta_bundle(THETA1, profile, order2)
        return theta.form_series().map_coefficients(
            lambda ch: (prefactor * ch).degree_component(degree), ring
        )
    if route != ROUTE_THETA:
        raise ValueError(f"unknown route {route!r}")
    u_coeffs = theta_quotient_pair_series(kind, l_variant, order2, profile.max_weight)
    comp = product_over_root_pairs(u_coeffs, profile, HalfQSeries.one(QQ, order2))
    out_order2 = min([order2] + [c.order2 for c in comp.values()])
    coeffs = {}
    for exp2 in range(out_order2):
        cls = GradedClass(
            profile, {mon: qc.coefficient(exp2) for mon, qc in comp.items()}
        )
        coeffs[exp2] = cls.degree_component(degree)
    return HalfQSeries(ring, coeffs, out_order2)


# -- symbolic verifications --------------------------------------------------


def verify_decomposition_identity(
    fiber_dim: int, order2: int | None = None, l_variant: str = L_FULL
) -> IdentityReport:
    """Check P_2 (or Q_2) = sum_r {A-roof ch(b_r or z_r)} basis_r in full.

    The coefficients come from the matched-window solve; agreement must then
    extend through the whole computed truncation (series-level modularity),
    and the solved coefficients must equal the A-roof images of the bundle
    decomposition.
    """
    case, m, degree = identity_parameters(fiber_dim)
    profile = identity_profile(fiber_dim)
    if order2 is None:
        order2 = default_theta_order2(m)
    kind = P2 if case == "b" else Q2
    identity = "eq3.12" if case == "b" else "eq3.33"
    weight = 4 * m + 2 if case == "b" else 4 * m
    series = p_form(kind, profile, ROUTE_KTHEORY, order2=order2)
    residuals = []
    status = "pass"
    hs = []
    try:
        hs = basis_decompose(series, weight)
    except SpanError as err:
        status = "fail"
        residuals.append({"exp2": err.exp2, "error": str(err)})
    if status == "pass":
        # cross-check h_r against the bundle-level decomposition
        ahat = a_hat(profile)
        brs = decompose_theta2(m, profile, order2)
        for r, (h, br) in enumerate(zip(hs, brs)):
            expected = (ahat * br.to_graded()).degree_component(degree)
            if h != expected:
                status = "fail"
                residuals.append(
                    {
                        "r": r,
                        "error": "basis coefficient differs from A-roof ch(b_r)",
                        "basis": h.to_obj(),
                        "bundle": expected.to_obj(),
                    }
                )
    degenerate = status == "pass" and all(not h for h in hs)
    return IdentityReport(
        identity=identity,
        fiber_dim=fiber_dim,
        m=m,
        l_variant=None,
        route=ROUTE_KTHEORY,
        lambda_measured=Fraction(1) if status == "pass" and not degenerate else None,
        paper_ratio=Fraction(1) if status == "pass" and not degenerate else None,
        residuals=residuals,
        status="degenerate-zero" if degenerate else status,
        lhs=[h.to_obj() for h in hs] if hs else [],
        rhs=[],
    )


def main_identity_sides(fiber_dim: int, l_variant: str = L_FULL):
    """(lhs, rhs) of the top-degree identity before scalar normalization.

    lhs = {L}^(deg), rhs = sum_r 2^(-6r) {A-roof ch(b_r or z_r)}^(deg); the
    identity claims lhs = lambda * rhs with lambda = 8*2^(6m) or 2^(6m).
    """
    case, m, degree = identity_parameters(fiber_dim)
    profile = identity_profile(fiber_dim)
    brs = decompose_theta2(m, profile)
    ahat = a_hat(profile)
    lhs = l_class(profile, normalize_l_variant(l_variant)).degree_component(degree)
    rhs = GradedClass.zero(profile)
    for r, br in enumerate(brs):
        h = (ahat * br.to_graded()).degree_component(degree)
        rhs = rhs + h * Fraction(1, 64**r)
    return lhs, rhs


def verify_main_identity(fiber_dim: int, l_variant: str = L_FULL) -> IdentityReport:
    """Measure the unique scalar with {L}^(deg) = lambda sum_r 2^(-6r) h_r.

    All p-monomials must give one and the same scalar; the report carries
    lambda and its ratio to the expected constant (8*2^(6m) or 2^(6m)).
    """
    case, m, degree = identity_parameters(fiber_dim)
    l_variant = normalize_l_variant(l_variant)
    identity = "eq3.14" if case == "b" else "eq3.35"
    lhs, rhs = main_identity_sides(fiber_dim, l_variant)
    expected_constant = Fraction(CASE_CONSTANTS[case] * 2 ** (6 * m))
    monomials = sorted(
        {mon for mon, _ in lhs.items()} | {mon for mon, _ in rhs.items()}
    )
    residuals = []
    lam = None
    if not monomials:
        return IdentityReport(
            identity, fiber_dim, m, l_variant, ROUTE_KTHEORY, None, None, [],
            "degenerate-zero", lhs.to_obj(), rhs.to_obj(),
        )
    for mon in monomials:
        lc, rc = lhs.coefficient(mon), rhs.coefficient(mon)
        if not rc:
            residuals.append({"monomial": list(mon), "lhs": str(lc), "rhs": str(rc)})
            continue
        ratio = lc / rc
        if lam is None:
            lam = ratio
        elif ratio != lam:
            residuals.append(
                {"monomial": list(mon), "lhs": str(lc), "rhs": str(rc), "ratio": str(ratio)}
            )
    status = "pass" if lam is not None and not residuals else "fail"
    return IdentityReport(
        identity=identity,
        fiber_dim=fiber_dim,
        m=m,
        l_variant=l_variant,
        route=ROUTE_KTHEORY,
        lambda_measured=lam,
        paper_ratio=None if lam is None else lam / expected_constant,
        residuals=residuals,
        status=status,
        lhs=lhs.to_obj(),
        rhs=rhs.to_obj(),
    )


_AGW_COMBINATIONS = {
    2: ("eq1.1", (Fraction(-1), Fraction(0), Fraction(1))),
    6: ("eq1.2", (Fraction(21), Fraction(-1), Fraction(8))),
    10: ("eq1.3", (Fraction(-1), Fraction(1), Fraction(1))),
}


def agw_densities(dim: int, l_variant: str = L_FULL):
    """(I_1/2, I_3/2, I_A) integrand densities in degree dim + 2.

    I_1/2 = {A-roof}, I_3/2 = {A-roof (ch T_C Z - 1)}, I_A = -(1/8){L}.
    """
    degree = dim + 2
    profile = RootProfile(dim, degree)
    ahat = a_hat(profile)
    i_half = ahat.degree_component(degree)
    i_three_half = (ahat * (chern_character(profile) - 1)).degree_component(degree)
    i_a = l_class(profile, normalize_l_variant(l_variant)).degree_component(degree) * Fraction(-1, 8)
    return i_half, i_three_half, i_a


def verify_agw(dim: int, l_variant: str = L_FULL) -> IdentityReport:
    """Check the dimension-2/6/10 gravitational cancellation combinations.

    Every monomial of the stated linear combination of the three densities
    must vanish identically.
    """
    if dim not in _AGW_COMBINATIONS:
        raise ValueError(f"dimension {dim} has no classical cancellation formula")
    identity, (c_half, c_three, c_a) = _AGW_COMBINATIONS[dim]
    i_half, i_three_half, i_a = agw_densities(dim, l_variant)
    combo = i_half * c_half + i_three_half * c_three + i_a * c_a
    residuals = [
        {"monomial": list(mon), "value": str(c)} for mon, c in combo.items()
    ]
    case, m, _ = identity_parameters(dim)
    return IdentityReport(
        identity=identity,
        fiber_dim=dim,
        m=m,
        l_variant=normalize_l_variant(l_variant),
        route=ROUTE_KTHEORY,
        lambda_measured=Fraction(1) if not residuals else None,
        paper_ratio=Fraction(1) if not residuals else None,
        residuals=residuals,
        status="pass" if not residuals else "fail",
        lhs=combo.to_obj(),
        rhs=[],
    )


COROLLARY_DIMENSIONS = (1, 2, 3, 5, 6, 7, 9, 10, 11)


def corollary_coefficients(fiber_dim: int) -> CorollaryVector:
    """Integer vector of the corollary combination for the listed dimensions.

    Writes (8 or 1) sum_r 2^(6m-6r) ch(b_r or z_r) as alpha ch(T_C Z) + beta
    and returns (1, -alpha, -beta): the vanishing combination of the twisted
    operator densities, signature twist normalized to +1.
    """
    if fiber_dim not in COROLLARY_DIMENSIONS:
        raise ValueError(f"no corollary is stated for fiber dimension {fiber_dim}")
    case, m, _ = identity_parameters(fiber_dim)
    profile = identity_profile(fiber_dim)
    brs = decompose_theta2(m, profile)
    overall = CASE_CONSTANTS[case]
    combo = CharacterElement.zero(profile)
    for r, br in enumerate(brs):
        combo = combo + br * (overall * 2 ** (6 * m - 6 * r))
    tc_form = chern_character(profile).positive_part()
    alpha = Fraction(0)
    if tc_form:
        ratios = set()
        for mon, c in tc_form.items():
            ratios.add(combo.form.coefficient(mon) / c)
        assert len(ratios) == 1, "combination is not a multiple of ch(T_C Z) plus constants"
        alpha = ratios.pop()
        assert combo.form == tc_form * alpha, "combination has extra form content"
    else:
        assert not combo.form, "combination has form content on a formless fiber"
    beta = Fraction(combo.rank) - alpha * profile.fiber_dim
    return CorollaryVector(fiber_dim, (Fraction(1), -alpha, -beta))


def verify_route_equivalence(
    fiber_dim: int,
    kind: str | None = None,
    order2: int | None = None,
    l_variant: str = L_FULL,
) -> IdentityReport:
    """Compare the K-theory and theta-quotient routes coefficient by coefficient."""
    case, m, _ = identity_parameters(fiber_dim)
    if kind is None:
        kind = P2 if case == "b" else Q2
    profile = identity_profile(fiber_dim)
    if order2 is None:
        order2 = default_theta_order2(m)
    via_k = p_form(kind, profile, ROUTE_KTHEORY, l_variant, order2)
    via_theta = p_form(kind, profile, ROUTE_THETA, l_variant, order2)
    bound = min(via_k.order2, via_theta.order2)
    residuals = []
    for exp2 in range(bound):
        a, b = via_k.coefficient(exp2), via_theta.coefficient(exp2)
        if a != b:
            residuals.append(
                {
                    "kind": kind,
                    "exp2": exp2,
                    "ktheory": a.to_obj(),
                    "theta_product": b.to_obj(),
                }
            )
            break  # report the first differing coefficient
    nonzero = any(bool(via_k.coefficient(e)) for e in range(bound))
    status = "pass" if not residuals else "fail"
    if status == "pass" and not nonzero:
        status = "degenerate-zero"
    return IdentityReport(
        identity=f"routes-{kind}",
        fiber_dim=fiber_dim,
        m=m,
        l_variant=normalize_l_variant(l_variant) if kind in (P1, Q1) else None,
        route=f"{ROUTE_KTHEORY}|{ROUTE_THETA}",
        lambda_measured=Fraction(1) if status == "pass" else None,
        paper_ratio=Fraction(1) if status == "pass" else None,
        residuals=residuals,
        status=status,
        lhs=[],
        rhs=[],
    )
