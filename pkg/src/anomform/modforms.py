"""Level-2 modular form expansions and the triangular bundle decompositions.

The nullwerte are expanded exactly from their infinite products; the bare
first theta series carries a q^(1/8) prefactor and is therefore only exposed
through its 4th power, which lives on integral q^(1/2) powers.  The four
weight-2/weight-4 forms delta/epsilon are assembled from 4th powers of
nullwerte and tagged with their weight and congruence subgroup.

The decomposition machinery matches q^(r/2)-coefficients of a series against
the monomial basis (8 delta_2)^(e-2r) epsilon_2^r; the system is triangular
with unit diagonal because epsilon_2 = q^(1/2)(1 + ...).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chroot import RootProfile
from .qseries import QQ, HalfQSeries, TruncationError
from .witten import (
    THETA2,
    CharacterElement,
    ThetaBundleSeries,
    build_theta_bundle,
)

GAMMA0_LOWER = "Gamma_0(2)"
GAMMA0_UPPER = "Gamma^0(2)"


class SpanError(ValueError):
    """A series is not in the span of the modular monomial basis."""

    def __init__(self, message: str, exp2: int):
        super().__init__(message)
        self.exp2 = exp2


@dataclass(frozen=True)
class ModularFormSeries:
    """A q^(1/2)-expansion tagged with modular weight and subgroup."""

    series: HalfQSeries
    weight: int
    group: str

    def to_obj(self) -> dict:
        return {
            "weight": self.weight,
            "group": self.group,
            "series": self.series.to_obj(),
        }


def _one_minus(exp2: int, sign: int, order2: int) -> HalfQSeries:
    return HalfQSeries.from_terms(QQ, [(0, 1), (exp2, sign)], order2)


def theta2_nullwert(order2: int) -> HalfQSeries:
    """theta_2(0, tau) = prod (1 - q^j)(1 - q^(j-1/2))^2."""
    out = HalfQSeries.one(QQ, order2)
    for j in range(1, order2 // 2 + 2):
        if 2 * j < order2:
            out = out * _one_minus(2 * j, -1, order2)
        if 2 * j - 1 < order2:
            out = out * _one_minus(2 * j - 1, -1, order2) ** 2
    return out


def theta3_nullwert(order2: int) -> HalfQSeries:
    """theta_3(0, tau) = prod (1 - q^j)(1 + q^(j-1/2))^2."""
    out = HalfQSeries.one(QQ, order2)
    for j in range(1, order2 // 2 + 2):
        if 2 * j < order2:
            out = out * _one_minus(2 * j, -1, order2)
        if 2 * j - 1 < order2:
            out = out * _one_minus(2 * j - 1, 1, order2) ** 2
    return out


def theta1_nullwert_fourth(order2: int) -> HalfQSeries:
    """theta_1(0, tau)^4 = 16 q^(1/2) prod (1 - q^j)^4 (1 + q^j)^8."""
    if order2 < 2:
        return HalfQSeries.zero(QQ, order2)
    body = HalfQSeries.one(QQ, order2 - 1) * 16
    for j in range(1, (order2 - 1) // 2 + 2):
        if 2 * j < order2 - 1:
            body = body * _one_minus(2 * j, -1, order2 - 1) ** 4
            body = body * _one_minus(2 * j, 1, order2 - 1) ** 8
    return body.shifted(1)


def theta_nullwert(i: int, order2: int) -> HalfQSeries:
    """Exact nullwert expansion for theta (i=0), theta_2, theta_3.

    theta_1(0, tau) alone is not an exact q^(1/2)-series (prefactor
    q^(1/8)); request theta1_nullwert_fourth or evaluate numerically.
    """
    if i == 0:
        return HalfQSeries.zero(QQ, order2)  # sin(0) kills the whole product
    if i == 1:
        raise ValueError(
            "theta_1(0,tau) carries q^(1/8); only its 4th power is an exact "
            "q^(1/2)-series (theta1_nullwert_fourth)"
        )
    if i == 2:
        return theta2_nullwert(order2)
    if i == 3:
        return theta3_nullwert(order2)
    raise ValueError(f"unknown theta index {i}")


_DELTA_EPS_SPECS = {
    "delta1": (2, GAMMA0_LOWER),
    "eps1": (4, GAMMA0_LOWER),
    "delta2": (2, GAMMA0_UPPER),
    "eps2": (4, GAMMA0_UPPER),
}

_DELTA_EPS_ALIASES = {
    "epsilon1": "eps1",
    "epsilon2": "eps2",
}


def delta_epsilon(which: str, order2: int) -> ModularFormSeries:
    """delta_1, epsilon_1, delta_2 or epsilon_2 from nullwert 4th powers."""
    which = _DELTA_EPS_ALIASES.get(which, which)
    if which not in _DELTA_EPS_SPECS:
        raise ValueError(f"unknown form {which!r}")
    weight, group = _DELTA_EPS_SPECS[which]
    if which in ("delta1", "eps1"):
        t2 = theta2_nullwert(order2) ** 4
        t3 = theta3_nullwert(order2) ** 4
        series = (t2 + t3) / 8 if which == "delta1" else (t2 * t3) / 16
    else:
        t1 = theta1_nullwert_fourth(order2)
        t3 = theta3_nullwert(order2) ** 4
        series = -(t1 + t3) / 8 if which == "delta2" else (t1 * t3) / 16
    return ModularFormSeries(series.truncate(order2), weight, group)


def modular_basis(weight: int, order2: int) -> list:
    """The monomials (8 delta_2)^(e-2r) epsilon_2^r, r = 0..weight//4.

    e = weight//2; these span the weight-`weight` forms over the upper
    level-2 subgroup with the constant-term normalization used throughout.
    """
    if weight % 2 or weight < 2:
        raise ValueError("weight must be a positive even integer")
    e = weight // 2
    d8 = delta_epsilon("delta2", order2).series * 8
    eps = delta_epsilon("eps2", order2).series
    out = []
    for r in range(weight // 4 + 1):
        out.append(d8 ** (e - 2 * r) * (eps**r))
    return out


def _triangular_solve(f: HalfQSeries, weight: int):
    """Coefficients x_r with sum x_r basis_r matching f at q^(r/2), r <= m.

    Returns (xs, basis, matrix M) with M[s][r] the rational q^(s/2)
    coefficient of basis_r; M is lower triangular with +-1 diagonal.
    """
    m = weight // 4
    if f.order2 < m + 1:
        raise TruncationError(
            f"need at least {m + 1} matched coefficients, have order2={f.order2}"
        )
    basis = modular_basis(weight, max(f.order2, m + 1))
    matrix = [[basis[r].coefficient(s) for r in range(m + 1)] for s in range(m + 1)]
    for r in range(m + 1):
        assert abs(matrix[r][r]) == 1, "triangular diagonal must be a unit"
        for s in range(r):
            assert matrix[s][r] == 0, "basis matrix must be lower triangular"
    xs = []
    for s in range(m + 1):
        acc = f.coefficient(s)
        for r in range(s):
            coeff = matrix[s][r]
            if coeff:
                acc = acc - xs[r] * coeff
        xs.append(acc * (Fraction(1) / matrix[s][s]))
    return xs, basis, matrix


def combination_matrix(weight: int) -> list:
    """Inverse of the matched-window basis matrix; integral with +-1 diagonal.

    Row s expresses the s-th solved coefficient as an integer combination of
    the input's q^(0/2)..q^(s/2) coefficients.
    """
    m = weight // 4
    basis = modular_basis(weight, m + 1)
    matrix = [[basis[r].coefficient(s) for r in range(m + 1)] for s in range(m + 1)]
    inv = [[Fraction(0)] * (m + 1) for _ in range(m + 1)]
    for s in range(m + 1):
        inv[s][s] = Fraction(1) / matrix[s][s]
        for j in range(s):
            acc = Fraction(0)
            for r in range(j, s):
                acc += matrix[s][r] * inv[r][j]
            inv[s][j] = -acc / matrix[s][s]
    for row in inv:
        for entry in row:
            assert entry.denominator == 1, "combination matrix must be integral"
    return [[int(entry) for entry in row] for row in inv]


def basis_decompose(f, weight: int | None = None) -> list:
    """Coefficients of f in the modular monomial basis, verified in full.

    Accepts a raw series plus weight, or a tagged ModularFormSeries over
    the upper level-2 subgroup.  The matched window determines the
    coefficients; the reconstruction must then agree with f through f's
    entire truncation (the series-level modularity statement).  Raises
    SpanError at the first failing exponent.
    """
    if isinstance(f, ModularFormSeries):
        if f.group != GAMMA0_UPPER:
            raise ValueError(f"basis decomposition needs a {GAMMA0_UPPER} form")
        if weight is None:
            weight = f.weight
        elif weight != f.weight:
            raise ValueError(f"weight {weight} contradicts the form's tag {f.weight}")
        f = f.series
    if weight is None:
        raise ValueError("weight is required for untagged series")
    xs, basis, _ = _triangular_solve(f, weight)
    recon = HalfQSeries.zero(f.ring, f.order2)
    for x, b in zip(xs, basis):
        recon = recon + b.lift_to(f.ring) * x
    bound = min(f.order2, recon.order2)
    for exp2 in range(bound):
        if f.coefficient(exp2) != recon.coefficient(exp2):
            raise SpanError(
                f"input is not in the modular span: first mismatch at exp2={exp2}",
                exp2,
            )
    return xs


def decomposition_case(m: int, fiber_dim: int) -> str:
    """'b' for fiber dimensions 8m+1..8m+3, 'z' for 8m-3..8m-1 (m >= 1)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if fiber_dim in (8 * m + 1, 8 * m + 2, 8 * m + 3):
        return "b"
    if m >= 1 and fiber_dim in (8 * m - 3, 8 * m - 2, 8 * m - 1):
        return "z"
    raise ValueError(f"fiber dimension {fiber_dim} is not in a class handled at m={m}")


def decompose_theta2(
    m: int,
    profile: RootProfile,
    order2: int | None = None,
    theta: ThetaBundleSeries | None = None,
) -> list:
    """Solve Theta_2 = sum_r x_r (8 delta_2)^(e-2r) eps_2^r mod q^((m+1)/2).

    Returns the virtual characters labeled b_0..b_m (e = 2m+1) or z_0..z_m
    (e = 2m) depending on the fiber-dimension class.  The matched-window
    residual is asserted to vanish identically and the solve's combination
    matrix is asserted integral.
    """
    case = decomposition_case(m, profile.fiber_dim)
    weight = 4 * m + 2 if case == "b" else 4 * m
    if order2 is None:
        order2 = m + 3
    if theta is None:
        theta = build_theta_bundle(THETA2, profile, order2)
    f = theta.form_series().truncate(order2)
    xs, basis, _ = _triangular_solve(f, weight)
    combination_matrix(weight)  # asserts integrality of the solve
    # matched-window residual must vanish exactly
    recon = HalfQSeries.zero(f.ring, f.order2)
    for x, b in zip(xs, basis):
        recon = recon + b.lift_to(f.ring) * x
    for s in range(m + 1):
        assert f.coefficient(s) == recon.coefficient(s), "matched window residual"
    prefix = case
    return [
        CharacterElement.from_graded(x, f"{prefix}_{r}") for r, x in enumerate(xs)
    ]
