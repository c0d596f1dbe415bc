"""Radial/polar weight systems, solved and checked in exact rational arithmetic.

For a mixed monomial z^nu zbar^mu the normalized weights Q' = Q/d and
P' = P/q must satisfy

    sum_i Q'_i (nu_i + mu_i) = 1,      sum_i P'_i (nu_i - mu_i) = 1.

``infer_weights`` solves both systems (one row per monomial) with fraction
Gaussian elimination; no floating point is involved anywhere in this module.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Sequence

from .mixed import MixedPolynomial, restrict


class WeightError(ValueError):
    pass


class UnderdeterminedWeights(WeightError):
    def __init__(self, nullity: int, system: str = "radial"):
        self.nullity = nullity
        self.system = system
        super().__init__(f"{system} weight system has a {nullity}-dimensional solution space")


class NonPositiveRadialWeight(WeightError):
    pass


class PreconditionViolated(WeightError):
    pass


def solve_rational(rows: Sequence[Sequence], rhs: Sequence) -> tuple[list[Fraction] | None, int]:
    """Solve ``rows @ x = rhs`` exactly.

    Returns ``(x, nullity)``. ``x`` is ``None`` when the system is
    inconsistent; otherwise it is the particular solution with free
    variables set to zero (unique iff ``nullity == 0``).
    """
    m = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    n_cols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [v / p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    if any(row[-1] != 0 for row in m[r:]):
        return None, n_cols - len(pivots)
    x = [Fraction(0)] * n_cols
    for i, c in enumerate(pivots):
        x[c] = m[i][-1]
    return x, n_cols - len(pivots)


def _denominator_lcm(xs: Sequence[Fraction]) -> int:
    return lcm(*(x.denominator for x in xs)) if xs else 1


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)


@dataclass(frozen=True)
class WeightSystem:
    Q: tuple[int, ...]
    d: int
    P: tuple[int, ...]
    q_pol: int

    def __post_init__(self):
        object.__setattr__(self, "Q", tuple(int(v) for v in self.Q))
        object.__setattr__(self, "P", tuple(int(v) for v in self.P))
        if len(self.Q) != len(self.P):
            raise WeightError("Q and P must have the same length")
        if any(v < 1 for v in self.Q) or self.d < 1 or self.q_pol < 1:
            raise WeightError("radial weights and both degrees must be positive")

    @classmethod
    def uniform(cls, n: int, d: int, q_pol: int) -> "WeightSystem":
        return cls((1,) * n, d, (1,) * n, q_pol)

    @classmethod
    def from_normalized(cls, Qn: Sequence[Fraction], Pn: Sequence[Fraction]) -> "WeightSystem":
        d = _denominator_lcm(Qn)
        q = _denominator_lcm(Pn)
        return cls(tuple(int(x * d) for x in Qn), d, tuple(int(x * q) for x in Pn), q)

    @property
    def n(self) -> int:
        return len(self.Q)

    @property
    def Qn(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self.d) for v in self.Q)

    @property
    def Pn(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self.q_pol) for v in self.P)

    def to_dict(self) -> dict:
        return {
            "Q": list(self.Q),
            "d": self.d,
            "P": list(self.P),
            "q": self.q_pol,
            "Qn": [fraction_str(x) for x in self.Qn],
            "Pn": [fraction_str(x) for x in self.Pn],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "WeightSystem":
        ws = cls(tuple(data["Q"]), int(data["d"]), tuple(data["P"]), int(data["q"]))
        for key in ("Qn", "Pn"):
            if key in data and tuple(parse_fraction(s) for s in data[key]) != getattr(ws, key):
                raise WeightError(f"{key} inconsistent with integer weights")
        return ws


class Homogeneity(str, Enum):
    NOT_WEIGHTED = "NotWeightedHomogeneous"
    RADIAL_ONLY = "RadialOnly"
    POLAR_WEIGHTED = "PolarWeighted"
    STRONGLY_POLAR = "StronglyPolar"


@dataclass(frozen=True)
class HomogeneityClass:
    tag: Homogeneity
    ws: WeightSystem | None = None

    def __post_init__(self):
        has_ws = self.tag in (Homogeneity.POLAR_WEIGHTED, Homogeneity.STRONGLY_POLAR)
        if has_ws != (self.ws is not None):
            raise ValueError(f"weight system presence inconsistent with {self.tag.value}")


def infer_weights(f: MixedPolynomial) -> HomogeneityClass:
    if not f.terms:
        raise WeightError("cannot infer weights of the zero polynomial")
    rad_rows = [[a + b for a, b in zip(t.nu, t.mu)] for t in f.terms]
    pol_rows = [[a - b for a, b in zip(t.nu, t.mu)] for t in f.terms]
    ones = [1] * len(f.terms)

    Qn, rad_null = solve_rational(rad_rows, ones)
    if Qn is None:
        return HomogeneityClass(Homogeneity.NOT_WEIGHTED)
    if not rad_null and any(x <= 0 for x in Qn):
        raise NonPositiveRadialWeight(f"radial solution {[fraction_str(x) for x in Qn]} is not positive")

    # an inconsistent polar system settles the class even if Q' is not unique
    Pn, pol_null = solve_rational(pol_rows, ones)
    if Pn is None:
        return HomogeneityClass(Homogeneity.RADIAL_ONLY)
    if rad_null:
        raise UnderdeterminedWeights(rad_null, "radial")
    if pol_null:
        raise UnderdeterminedWeights(pol_null, "polar")

    ws = WeightSystem.from_normalized(Qn, Pn)
    strong = all(v == 1 for v in ws.Q) and all(v == 1 for v in ws.P)
    return HomogeneityClass(Homogeneity.STRONGLY_POLAR if strong else Homogeneity.POLAR_WEIGHTED, ws)


def check_weights(f: MixedPolynomial, ws: WeightSystem) -> bool:
    """Exact per-monomial test of the radial and polar degree conditions."""
    if ws.n != f.n_vars:
        raise ValueError(f"weight system for {ws.n} variables, polynomial has {f.n_vars}")
    for t in f.terms:
        if sum(q * (a + b) for q, a, b in zip(ws.Q, t.nu, t.mu)) != ws.d:
            return False
        if sum(p * (a - b) for p, a, b in zip(ws.P, t.nu, t.mu)) != ws.q_pol:
            return False
    return True


@dataclass(frozen=True)
class TwistedWeights:
    Qn: tuple[Fraction, ...]
    Pn: tuple[Fraction, ...]
    d: int
    q_pol: int

    @property
    def q_new(self) -> Fraction:
        return self.Qn[-1]

    @property
    def p_new(self) -> Fraction:
        return self.Pn[-1]

    def weight_system(self) -> WeightSystem:
        return WeightSystem(
            tuple(int(x * self.d) for x in self.Qn), self.d,
            tuple(int(x * self.q_pol) for x in self.Pn), self.q_pol,
        )


def twisted_join_weights(ws: WeightSystem, a: int, b: int) -> TwistedWeights:
    """Weights of f + conj(z_n) w^a conj(w)^b from those of f.

    The new variable gets normalized weights solving
    q_n/d + (a+b) q' = 1 and -p_n/q + (a-b) p' = 1; the degrees of the joined
    polynomial are lcm(d, denom q') and lcm(q, denom p').
    """
    if not a > b >= 0:
        raise PreconditionViolated(f"twisted join needs a > b >= 0, got a={a}, b={b}")
    qn, pn = ws.Qn[-1], ws.Pn[-1]
    if not qn < 1:
        raise PreconditionViolated(f"last radial weight {ws.Q[-1]} is not below the degree {ws.d}")
    q_new = (1 - qn) / (a + b)
    p_new = (1 + pn) / (a - b)
    if p_new <= 0:
        raise PreconditionViolated(f"polar weight of the new variable is {fraction_str(p_new)}")
    d = lcm(ws.d, q_new.denominator)
    q = lcm(ws.q_pol, p_new.denominator)
    return TwistedWeights(ws.Qn + (q_new,), ws.Pn + (p_new,), d, q)


def is_1_convenient(f: MixedPolynomial) -> bool:
    return all(restrict(f, i).terms for i in range(1, f.n_vars + 1))
