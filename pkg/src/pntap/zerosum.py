"""Certified estimators for sums over non-trivial zeros.

Three tools, each returning a value together with an error budget that the
verification suites check against exact sums from zero tables:

* ``bpt_sum``: the second-order partial-summation estimate for weighted
  sums over zeta ordinates, with constants A0 = 2.067, A1 = 0.059,
  A2 = 1/150 and the counting remainder ``count_remainder_R``.
* ``dirichlet_count_bound``: the N(T, chi) counting estimate for a
  character of conductor q.
* ``lehman_sum_upper``: the first-order upper bound for weighted sums
  over Dirichlet zero ordinates (both signs), valid for non-increasing
  weights.

Weights are passed as WeightSpec records carrying analytic derivatives;
the error terms consume |phi'(U)| directly, so no numerical
differentiation is ever involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, ValidationError
from .quadrature import integrate

A0 = 2.067
A1 = 0.059
A2 = 1.0 / 150.0
TWO_PI = 2.0 * math.pi
GAMMA_1 = 14.13472  # height of the first zeta zero (lower bound)


@dataclass(frozen=True)
class WeightSpec:
    """A weight function with its analytic derivative and shape flags.

    domain_start is the left end of the interval on which the flags are
    promised.  convex additionally asserts a continuous, nonnegative
    second derivative there.
    """

    value: Callable[[float], float]
    derivative: Callable[[float], float]
    domain_start: float = 5.0 / 7.0
    non_increasing: bool = True
    nonneg: bool = True
    convex: bool = False
    name: str = ""

    def __call__(self, t: float) -> float:
        return self.value(t)


def weight_inverse() -> WeightSpec:
    """phi(t) = 1/t."""
    return WeightSpec(lambda t: 1.0 / t, lambda t: -1.0 / (t * t),
                      non_increasing=True, nonneg=True, convex=True, name="1/t")


def weight_inverse_square() -> WeightSpec:
    """phi(t) = 1/t^2."""
    return WeightSpec(lambda t: 1.0 / (t * t), lambda t: -2.0 / (t ** 3),
                      non_increasing=True, nonneg=True, convex=True, name="1/t^2")


def weight_quarter_sqrt() -> WeightSpec:
    """phi(t) = (1/4 + t^2)^(-1/2)."""
    return WeightSpec(
        lambda t: 1.0 / math.sqrt(0.25 + t * t),
        lambda t: -t * (0.25 + t * t) ** -1.5,
        non_increasing=True, nonneg=True, convex=True, name="(1/4+t^2)^(-1/2)",
    )


def weight_constant(c: float) -> WeightSpec:
    """phi(t) = c >= 0."""
    if c < 0:
        raise ValidationError("constant weight must be nonnegative")
    return WeightSpec(lambda t: c, lambda t: 0.0,
                      non_increasing=True, nonneg=True, convex=True, name=f"const {c}")


@dataclass(frozen=True)
class SumEstimate:
    """Decomposed estimate: main term, boundary budget, and total error bound.

    boundary_terms bounds |phi(V)Q(V) - phi(U)Q(U)| through the counting
    remainder; error_bound additionally includes the second-order term, so
    the certified statement is |exact - main_term| <= error_bound.
    """

    main_term: float
    boundary_terms: float
    error_bound: float

    def __post_init__(self):
        if self.error_bound < 0 or self.boundary_terms < 0:
            raise ValidationError("error budgets must be nonnegative")

    @property
    def estimate(self) -> float:
        return self.main_term + self.boundary_terms


def count_remainder_R(T: float) -> float:
    """Remainder bound for the zeta zero-counting formula, T >= 2*pi.

    min{0.28 log T, 0.1038 log T + 0.2573 log log T + 9.3675} bounds
    |N(T) - (T/2pi) log(T/2pi e) - 7/8|.
    """
    if T < TWO_PI:
        raise DomainError(f"count_remainder_R requires T >= 2*pi, got {T}")
    lt = math.log(T)
    return min(0.28 * lt, 0.1038 * lt + 0.2573 * math.log(lt) + 9.3675)


def zeta_count_main(T: float) -> float:
    """Smooth term (T/2pi) log(T/2pi e) of the zeta counting formula."""
    return T / TWO_PI * math.log(T / (TWO_PI * math.e))


def bpt_sum(phi: WeightSpec, U: float, V: float, tol: float = 1e-12) -> SumEstimate:
    """Estimate the half-weighted sum of phi over zeta ordinates in [U, V].

    main_term = (1/2pi) * integral of phi(t) log(t/2pi) over [U, V];
    the budget certifies |exact - main_term| <= error_bound.
    Requires 2*pi <= U <= V and a weight flagged non-increasing,
    nonnegative and convex on [U, infinity).
    """
    if U < TWO_PI:
        raise DomainError(f"bpt_sum requires U >= 2*pi, got U={U}")
    if U > V:
        raise DomainError(f"need U <= V, got U={U}, V={V}")
    if not (phi.non_increasing and phi.nonneg and phi.convex):
        raise ValidationError("bpt_sum needs the non_increasing, nonneg and convex flags")
    if U == V:
        main = 0.0
    else:
        main = integrate(lambda t: phi(t) * math.log(t / TWO_PI), U, V, tol=tol).value / TWO_PI
    boundary = phi(V) * count_remainder_R(V) + phi(U) * count_remainder_R(U)
    second_order = 2.0 * (A0 + A1 * math.log(U)) * abs(phi.derivative(U)) + (A1 + A2) * phi(U) / U
    return SumEstimate(main_term=main, boundary_terms=boundary,
                       error_bound=second_order + boundary)


def dirichlet_count_bound(q: int, T: float) -> tuple[float, float]:
    """Counting estimate for N(T, chi), conductor q >= 2 and T >= 5/7.

    Returns (main, remainder) with main = (T/pi) log(qT/2pi e) and
    remainder = 0.247 log(qT/2pi) + 6.894, so that
    |N(T, chi) - main| <= remainder for any character of conductor q.
    """
    if q < 2:
        raise DomainError(f"conductor must be >= 2, got {q}")
    if T < 5.0 / 7.0:
        raise DomainError(f"requires T >= 5/7, got {T}")
    main = T / math.pi * math.log(q * T / (TWO_PI * math.e))
    remainder = 0.247 * math.log(q * T / TWO_PI) + 6.894
    return main, remainder


def low_count_twice_bound(q: int) -> float:
    """Upper bound 0.94873 log q + 11.27041 for 2*N(5/7, chi), q >= 3."""
    if q < 3:
        raise DomainError(f"modulus must be >= 3, got {q}")
    return 0.94873 * math.log(q) + 11.27041


def lehman_sum_upper(phi: WeightSpec, U: float, V: float, q: int,
                     tol: float = 1e-12) -> float:
    """Upper bound for the sum of phi over Dirichlet ordinates |gamma| in [U, V].

    (log q/pi) int phi + (1/pi) int phi log(t/2pi)
        + 2 phi(U) (0.247 log(qU/2pi) + 6.894) + 0.247 int phi/t.

    V may be math.inf only for the canonical 1/t^2 weight, in which case
    the closed-form tail is used; every other improper sum must be split
    by the caller.
    """
    if U < 5.0 / 7.0:
        raise DomainError(f"requires U >= 5/7, got U={U}")
    if not (phi.non_increasing and phi.nonneg):
        raise ValidationError("lehman_sum_upper needs non_increasing and nonneg flags")
    if q < 2:
        raise DomainError(f"modulus must be >= 2, got {q}")
    if math.isinf(V):
        if phi.name != "1/t^2":
            raise DomainError("V=inf is supported only for the 1/t^2 weight")
        # closed-form improper integrals:
        #   int_U^inf dt/t^2 = 1/U
        #   int_U^inf log(t/2pi)/t^2 dt = (log(U/2pi) + 1)/U
        #   int_U^inf dt/t^3 = 1/(2 U^2)
        lq = math.log(q)
        return (lq / math.pi) / U \
            + (math.log(U / TWO_PI) + 1.0) / (math.pi * U) \
            + (2.0 / (U * U)) * (0.247 * math.log(q * U / TWO_PI) + 6.894) \
            + 0.247 / (2.0 * U * U)
    if U > V:
        raise DomainError(f"need U <= V, got U={U}, V={V}")
    if U == V:
        i0 = i1 = i2 = 0.0
    else:
        i0 = integrate(phi.value, U, V, tol=tol).value
        i1 = integrate(lambda t: phi(t) * math.log(t / TWO_PI), U, V, tol=tol).value
        i2 = integrate(lambda t: phi(t) / t, U, V, tol=tol).value
    return (math.log(q) / math.pi) * i0 + i1 / math.pi \
        + 2.0 * phi(U) * (0.247 * math.log(q * U / TWO_PI) + 6.894) + 0.247 * i2


def tail_inverse_square(T: float) -> float:
    """Upper bound log T/(2 pi T) for the zeta tail sum of 1/gamma^2 over gamma >= T."""
    if T < GAMMA_1:
        raise DomainError(f"requires T >= {GAMMA_1}, got {T}")
    return math.log(T) / (TWO_PI * T)
