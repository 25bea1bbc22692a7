"""The constants pipeline.

Produces every record in the chain

    zero-sum constants (k1, k2 and the small-moduli k1~, k2~)
      -> short-interval constants (k3, k4 at tuning parameters kappa)
        -> twisted Chebyshev constants (k5, k6, Omega0..Omega2)
          -> progression constants (Omega3..Omega7 and the a-vector),

together with right-hand-side evaluators for every bound the chain yields
and the cyclotomic baseline comparator.

Reference-table compatibility
-----------------------------
The definite integrals feeding the zero-sum constants are evaluated with
mpmath's default tanh-sinh quadrature pinned to 15 significant digits
(``_reference_quad``).  On the enormous ranges that arise for
log x0 >~ 90 that scheme stops converging and saturates; the bundled
reference tables were produced exactly this way, so the scheme is kept
bit-for-bit to make table reproduction mechanical.  Treat the large-x0
rows as reference values tied to this quadrature, not as independently
certified bounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import mpmath as mp
from scipy.optimize import minimize

from .errors import DomainError, ValidationError
from .quadrature import exp_integral_ei, log_integral_li
from .zerosum import count_remainder_R
from .zeros import OMEGA_DEFAULT

PI = math.pi
TWO_PI = 2.0 * math.pi
LOG2 = math.log(2.0)
GAMMA_1 = 14.13472
KAPPA2_FLOOR = 1.74663
SMALL_X0_MIN = 1.05e7
SMALL_LOG_X0_MIN = math.log(1.05e7)

# default log-x0 grid used by the table commands; the small-moduli rows
# start at the first multiple of ten above log(1.05e7)
LOG_X0_GRID = (10.0, SMALL_LOG_X0_MIN, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0,
               80.0, 90.0, 100.0, 150.0, 200.0, 250.0, 500.0)

# Reference tuning parameters (kappa0, kappa1, kappa2) per log x0.  These
# are regression anchors: evaluating the short-interval constants at a row
# must reproduce that row, and the optimizer is gated never to do worse.
REFERENCE_KAPPA = {
    10.0: (0.05989, 18.81137, 1.74663),
    20.0: (0.0457, 37.77813, 1.74663),
    30.0: (0.03579, 52.1484, 1.86645),
    40.0: (0.03167, 63.91776, 1.74663),
    50.0: (0.02886, 74.8239, 2.15968),
    60.0: (0.02683, 85.00441, 2.28091),
    70.0: (0.02519, 94.2064, 2.37349),
    80.0: (0.02405, 102.33995, 2.46139),
    90.0: (0.02297, 111.44257, 2.56007),
    100.0: (0.02212, 120.2197, 2.65929),
    150.0: (0.01895, 157.01747, 2.97554),
    200.0: (0.01717, 189.4314, 3.2531),
    250.0: (0.01566, 222.13937, 3.47886),
    500.0: (0.01254, 347.59407, 4.35967),
}

_MP_QUARTER = mp.mpf(1) / 4


def _reference_quad(kind: str, a: float, b: float) -> float:
    """Tanh-sinh quadrature at 15 digits; the table-compatibility scheme.

    kind selects one of the three integrands used by the zero-sum chain:
    "plain"  -> (1/4+t^2)^(-1/2)
    "logt"   -> log(t/2pi) (1/4+t^2)^(-1/2)
    "over_t" -> t^(-1) (1/4+t^2)^(-1/2)
    """
    if kind == "plain":
        f = lambda t: 1 / mp.sqrt(_MP_QUARTER + t * t)
    elif kind == "logt":
        f = lambda t: mp.log(t / (2 * mp.pi)) / mp.sqrt(_MP_QUARTER + t * t)
    elif kind == "over_t":
        f = lambda t: 1 / (t * mp.sqrt(_MP_QUARTER + t * t))
    else:
        raise ValueError(f"unknown integrand kind {kind!r}")
    with mp.workdps(15):
        return float(mp.quad(f, [a, b]))


def splitting_height(log_x0: float) -> float:
    """The low/high splitting height sqrt(x0)/log(x0) used by every zero sum."""
    return math.exp(0.5 * log_x0) / log_x0


# ---------------------------------------------------------------------------
# zero-sum constants (k1, k2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SozConstants:
    """Constants bounding the smoothed sum over Dirichlet L zeros.

    The bound has shape (log x/8pi + log q/2pi + k1) sqrt(x) log x
    + k2 sqrt(x) log q for x >= x0.  Small-moduli refinements (moduli up
    to 10^4, x0 >= 1.05e7) carry a tilde suffix and rest on the exactly
    computed low-zero sum omega.
    """

    log_x0: float
    nu1: float
    nu2: float
    nu3: float
    nu4: float
    f1: float
    f2: float
    f3: float
    f4: float
    f5: float
    k1: float
    k2: float
    small_moduli: bool = False
    nu1_t: Optional[float] = None
    nu2_t: Optional[float] = None
    k1_t: Optional[float] = None
    k2_t: Optional[float] = None
    omega: float = OMEGA_DEFAULT

    def __post_init__(self):
        if self.nu1 <= 0:
            raise ValidationError("nu1 must be positive")
        if self.log_x0 >= 10.0:
            if self.f1 > 1.0 / (8 * PI) + 1e-15:
                raise ValidationError("f1 exceeds its 1/(8 pi) cap")
            if self.f2 > 1.0 / (2 * PI) + 1e-15:
                raise ValidationError("f2 exceeds its 1/(2 pi) cap")


def _soz_pieces(log_x0: float):
    eta = splitting_height(log_x0)
    sx = math.exp(0.5 * log_x0)
    nu3 = 0.494 / eta - math.log(eta) / PI
    nu4 = (math.log(TWO_PI)) ** 2 / TWO_PI - (math.log(eta / TWO_PI)) ** 2 / TWO_PI \
        + 2.0 * (6.894 - 0.247 * math.log(TWO_PI * eta)) / eta + 0.247 / eta
    e = log_x0 / sx
    fac12 = math.sqrt(1.0 + e)
    fac32 = (1.0 + e) ** 1.5 + 1.0
    llx = math.log(log_x0)
    f1 = fac12 * (1.0 / (8 * PI) - llx / (TWO_PI * log_x0) + (llx / log_x0) ** 2 / TWO_PI)
    f2 = fac12 * (1.0 / TWO_PI - llx / (PI * log_x0))
    f3 = fac12 * (0.5850 * llx / log_x0 - 0.2925) \
        + fac32 * (1.0 / TWO_PI + (0.247 * log_x0 + 13.0034) / sx)
    return eta, sx, nu3, nu4, fac12, fac32, f1, f2, f3


def soz_constants(log_x0: float) -> SozConstants:
    """Zero-sum constants k1(x0), k2(x0) for general moduli, log x0 >= 10."""
    if log_x0 < 10.0:
        raise DomainError(f"requires log x0 >= 10, got {log_x0}")
    eta, sx, nu3, nu4, fac12, fac32, f1, f2, f3 = _soz_pieces(log_x0)
    lower = 5.0 / 7.0
    w0 = 1.0 / math.sqrt(0.25 + lower * lower)
    nu1 = 0.494 * w0 + _reference_quad("plain", lower, eta) / PI
    nu2 = _reference_quad("logt", lower, eta) / PI \
        + 2.0 * (0.247 * math.log(lower / TWO_PI) + 6.894) * w0 \
        + 0.247 * _reference_quad("over_t", lower, eta)
    f4 = fac32 * (1.0 / PI + 0.494 * log_x0 / sx) + nu1 + nu3 + 0.94873
    f5 = (nu2 + nu4 + 11.27041) * fac12 - 0.5334
    return SozConstants(
        log_x0=log_x0, nu1=nu1, nu2=nu2, nu3=nu3, nu4=nu4,
        f1=f1, f2=f2, f3=f3, f4=f4, f5=f5,
        k1=f3 + f5 / log_x0, k2=f4,
    )


def soz_constants_small(log_x0: float, omega: float = OMEGA_DEFAULT) -> SozConstants:
    """Zero-sum constants including the small-moduli refinement.

    Requires log x0 >= log(1.05e7) so the splitting height clears the
    exactly-summed region below 200; omega is the maximal low-zero sum
    (recompute via zeros.omega_low_sum when zero data is available).
    """
    if log_x0 < SMALL_LOG_X0_MIN:
        raise DomainError(
            f"requires log x0 >= log(1.05e7) = {SMALL_LOG_X0_MIN:.6f}, got {log_x0}"
        )
    if omega <= 0:
        raise DomainError("omega must be positive")
    base = soz_constants(log_x0)
    eta = splitting_height(log_x0)
    sx = math.exp(0.5 * log_x0)
    lower = 200.0
    w0 = 1.0 / math.sqrt(0.25 + lower * lower)
    nu1_t = 0.494 * w0 + _reference_quad("plain", lower, eta) / PI
    nu2_t = _reference_quad("logt", lower, eta) / PI \
        + 2.0 * (0.247 * math.log(1.0 / (400.0 * PI)) + 6.894) * w0 \
        + 0.247 * _reference_quad("over_t", lower, eta)
    e = log_x0 / sx
    fac12 = math.sqrt(1.0 + e)
    fac32 = (1.0 + e) ** 1.5 + 1.0
    f4_t = fac32 * (1.0 / PI + 0.494 * log_x0 / sx) + nu1_t + base.nu3
    f5_t = (omega + nu2_t + base.nu4) * fac12 - 0.5334
    return replace(
        base,
        small_moduli=True,
        nu1_t=nu1_t, nu2_t=nu2_t,
        k1_t=base.f3 + f5_t / log_x0, k2_t=f4_t,
        omega=omega,
    )


# ---------------------------------------------------------------------------
# short-interval constants (k3, k4)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KappaParams:
    """Tuning parameters of the short-interval zero-sum split.

    The canonical reduction sets kappa2 = max(1.74663, kappa0*kappa1); use
    ``KappaParams.reduced``.  Direct construction accepts any kappa2 at or
    above the floor so the reference tuning rows (one of which dips below
    kappa0*kappa1) can be evaluated verbatim.
    """

    kappa0: float
    kappa1: float
    kappa2: float

    def __post_init__(self):
        if not (0.0 < self.kappa0 < 1.0):
            raise ValidationError(f"need 0 < kappa0 < 1, got {self.kappa0}")
        if self.kappa1 <= 0.0:
            raise ValidationError(f"need kappa1 > 0, got {self.kappa1}")
        if self.kappa2 < KAPPA2_FLOOR - 1e-9:
            raise ValidationError(f"need kappa2 >= {KAPPA2_FLOOR}, got {self.kappa2}")

    @classmethod
    def reduced(cls, kappa0: float, kappa1: float) -> "KappaParams":
        return cls(kappa0, kappa1, max(KAPPA2_FLOOR, kappa0 * kappa1))


@dataclass(frozen=True)
class ShortIntervalConstants:
    """Constants in |psi(x + sqrt(x) log x) - psi(x) - sqrt(x) log x|
    < k3 sqrt(x) log x - k4 for x >= x0."""

    log_x0: float
    kappa: KappaParams
    ell0: float
    ell1: float
    ell2: float
    ell3: float
    ell4: float
    ell5: float
    ell6: float
    ell7: float
    k3: float
    k4: float

    def __post_init__(self):
        if abs(self.k3 - (self.ell5 + self.ell7)) > 1e-12 * max(1.0, abs(self.k3)):
            raise ValidationError("k3 must equal ell5 + ell7")
        if abs(self.k4 + self.ell6) > 1e-12 * max(1.0, abs(self.k4)):
            raise ValidationError("k4 must equal -ell6")
        if self.k3 <= 0:
            raise ValidationError("k3 must be positive")


ALPHA_1 = 1.0 + 1.93378e-8
ALPHA_2 = 2.69
BETA_1 = math.sqrt(3.0) * ALPHA_1 - 0.999
BETA_2 = 3.0 ** (1.0 / 3.0) * ALPHA_2 - 2.0 / 3.0


def _k3_terms(log_x0: float, kappa0: float, kappa1: float, kappa2: float):
    """Closed-form pieces of k3; returns (ell0, ell2, ell3, sigma2_coef, ell7).

    Every x-dependent factor is taken at its worst case x = x0 (each ratio
    against sqrt(x) log x decreases in x on the admissible range).
    """
    sx = math.exp(0.5 * log_x0)
    eta = sx / log_x0
    k1e = kappa1 * eta
    ell2 = 1.0 + math.sqrt(1.0 + (1.0 + kappa0) / eta)
    tail_factor = (1.0 + (1.0 + kappa0) / eta) ** 1.5 + 2.0
    ell0 = tail_factor / (kappa2 * PI) * (0.5 + math.log(kappa2 / kappa0) / log_x0)
    bracket = ((log_x0 + max(0.0, math.log(kappa1 * kappa2 / (4.0 * PI * PI * kappa0)))) / (4.0 * PI)) \
        * math.log(kappa2 / (kappa0 * kappa1)) \
        + kappa0 * count_remainder_R(kappa2 * eta / kappa0) / (kappa2 * eta) \
        + count_remainder_R(k1e) / k1e \
        + (4.200 + 4.134 * math.log(k1e)) / (k1e * k1e)
    ell3 = 2.0 * ell2 * bracket / log_x0
    sigma2_coef = k1e * math.log(k1e) / (PI * sx * log_x0)
    x0 = math.exp(log_x0)
    tau = kappa0 * sx * log_x0
    ell7 = kappa0 + 21.0 / (20.0 * kappa0 * x0 * log_x0 * log_x0) \
        + max(8.0 * kappa0,
              4.0 * kappa0 * math.log(x0 + (1.0 + kappa0) * sx * log_x0) / math.log(tau)) \
        + 2.0 * BETA_1 / log_x0 + 2.0 * BETA_2 * x0 ** (-1.0 / 6.0) / log_x0
    return ell0, ell2, ell3, sigma2_coef, ell7


def k3_value(log_x0: float, kappa0: float, kappa1: float, kappa2: float) -> float:
    """k3 alone (no quadrature needed); inf when parameters are inadmissible."""
    if not (0.0 < kappa0 < 1.0 and kappa1 > 0.0 and kappa2 > 0.0):
        return math.inf
    sx = math.exp(0.5 * log_x0)
    eta = sx / log_x0
    if kappa1 * eta <= TWO_PI or kappa2 * eta / kappa0 <= TWO_PI:
        return math.inf
    if kappa0 * sx * log_x0 <= 2.0:
        return math.inf
    ell0, _, ell3, sigma2_coef, ell7 = _k3_terms(log_x0, kappa0, kappa1, kappa2)
    return ell0 + ell3 + sigma2_coef + ell7


def short_interval_constants(log_x0: float, kappa: KappaParams) -> ShortIntervalConstants:
    """Assemble k3(x0), k4(x0) at the given tuning parameters, log x0 >= 10."""
    if log_x0 < 10.0:
        raise DomainError(f"requires log x0 >= 10, got {log_x0}")
    kappa0, kappa1, kappa2 = kappa.kappa0, kappa.kappa1, kappa.kappa2
    sx = math.exp(0.5 * log_x0)
    eta = sx / log_x0
    k1e = kappa1 * eta
    if k1e <= TWO_PI:
        raise DomainError("kappa1 * splitting height must exceed 2 pi")
    ell0, ell2, ell3, sigma2_coef, ell7 = _k3_terms(log_x0, kappa0, kappa1, kappa2)
    ell1 = (k1e / (kappa0 * PI)) * math.log(k1e / (TWO_PI * math.e * kappa0)) \
        - 7.0 / 4.0 - 2.0 * count_remainder_R(k1e)
    low_zero_integral = _reference_quad("logt", GAMMA_1, k1e)
    ell4 = ell2 * (low_zero_integral / PI
                   + 2.0 * count_remainder_R(k1e) / math.sqrt(0.25 + k1e * k1e)
                   + 2.0 * count_remainder_R(GAMMA_1) / math.sqrt(0.25 + GAMMA_1 ** 2)
                   + 0.04509)
    ell5 = ell0 + ell3 + sigma2_coef
    ell6 = -ell1 + ell4
    return ShortIntervalConstants(
        log_x0=log_x0, kappa=kappa,
        ell0=ell0, ell1=ell1, ell2=ell2, ell3=ell3, ell4=ell4,
        ell5=ell5, ell6=ell6, ell7=ell7,
        k3=ell5 + ell7, k4=-ell6,
    )


@dataclass(frozen=True)
class KappaSearch:
    """Result of optimize_kappa: chosen parameters, achieved k3, budget flag."""

    kappa: KappaParams
    k3: float
    converged: bool


def optimize_kappa(log_x0: float, include_anchors: bool = True) -> KappaSearch:
    """Minimize k3 over the tuning parameters, deterministically.

    Coarse log-grid over (kappa0, kappa1) with the canonical kappa2
    reduction, Nelder-Mead refinement from the grid optimum, plus the
    reference tuning rows as candidate points (so the search never
    returns a k3 worse than a regression anchor).
    """
    if log_x0 < 10.0:
        raise DomainError(f"requires log x0 >= 10, got {log_x0}")

    def objective(z):
        kap0, kap1 = math.exp(z[0]), math.exp(z[1])
        if not (0.0 < kap0 < 1.0 and 1.0 < kap1 < 1e4):
            return math.inf
        return k3_value(log_x0, kap0, kap1, max(KAPPA2_FLOOR, kap0 * kap1))

    best_val, best_z = math.inf, None
    for i in range(13):
        l0 = -4.6 + i * (2.6 / 12.0)
        for j in range(21):
            l1 = 1.5 + j * (5.0 / 20.0)
            v = objective((l0, l1))
            if v < best_val:
                best_val, best_z = v, (l0, l1)
    res = minimize(objective, best_z, method="Nelder-Mead",
                   options=dict(xatol=1e-10, fatol=1e-13, maxiter=4000, maxfev=4000))
    converged = bool(res.success)
    kap0, kap1 = math.exp(res.x[0]), math.exp(res.x[1])
    best = KappaSearch(KappaParams.reduced(kap0, kap1),
                       k3_value(log_x0, kap0, kap1, max(KAPPA2_FLOOR, kap0 * kap1)),
                       converged)
    if include_anchors:
        for row in REFERENCE_KAPPA.values():
            v = k3_value(log_x0, *row)
            if v < best.k3:
                best = KappaSearch(KappaParams(*row), v, converged)
    return best


def kappa_for(log_x0: float) -> KappaParams:
    """Reference tuning parameters when tabulated, otherwise an optimized set."""
    row = REFERENCE_KAPPA.get(log_x0)
    if row is not None:
        return KappaParams(*row)
    return optimize_kappa(log_x0).kappa


# ---------------------------------------------------------------------------
# twisted Chebyshev constants (k5, k6, Omega0..Omega2)
# ---------------------------------------------------------------------------

def g2(q: int) -> float:
    """Modulus-dependent constant term of the smoothed twisted-sum bound."""
    if q < 3:
        raise DomainError(f"requires q >= 3, got {q}")
    lq = math.log(q)
    llq = math.log(lq)
    if q < 1e30:
        return 317.501 + 0.593 * llq * lq * lq + 0.0758 * math.sqrt(q) * lq + 2.751 * lq
    return 1.777 + 0.593 * llq * lq * lq + 0.000278 * math.sqrt(q) * lq + lq


def c_diff_bound(x: float, a_chi: int) -> float:
    """Bound for the differenced trivial-zero remainder at parity a_chi."""
    if math.log(x) < 10.0 - 1e-12:
        raise DomainError("requires log x >= 10")
    if a_chi not in (0, 1):
        raise DomainError("a_chi must be 0 or 1")
    lx = math.log(x)
    sx = math.sqrt(x)
    return a_chi / x + (1 - a_chi) * (lx + 1.0 + lx / sx) + 7e-5 / (sx * lx)


def trivial_zero_series(x: float, a_chi: int) -> float:
    """sum_{m>=1} x^(1-2m-a)/((2m+a)(2m-1+a)) for x >= 2.

    Closed form through atanh for modest x; the direct series for large x,
    where the closed form cancels catastrophically.
    """
    if x < 2.0:
        raise DomainError("requires x >= 2")
    if a_chi not in (0, 1):
        raise DomainError("a_chi must be 0 or 1")
    if x > 30.0:
        total, m = 0.0, 0
        while True:
            m += 1
            term = x ** (1 - 2 * m - a_chi) / ((2 * m + a_chi) * (2 * m - 1 + a_chi))
            total += term
            if term <= 1e-20 * total or m > 60:
                return total
    log_sqrt = 0.5 * math.log1p(-1.0 / (x * x))
    if a_chi == 1:
        return 1.0 - x * math.atanh(1.0 / x) - log_sqrt
    return math.atanh(1.0 / x) + x * log_sqrt


@dataclass(frozen=True)
class TwistedPsiConstants:
    """Constants in the twisted-psi bound
    (log x/8pi + log q/2pi + Omega0) sqrt(x) log x + Omega1 sqrt(x) + Omega2."""

    log_x0: float
    g2_below: float  # modulus constant in the q < 10^30 regime, at its cap
    g2_above: float  # modulus constant at the q = 10^30 boundary
    sigma1: float
    sigma2: float
    sigma3: float
    sigma4: float
    sigma5: float
    k5: float
    k6: float
    Omega0: float
    Omega1: float
    Omega2: float
    small_moduli: bool = False
    sigma6: Optional[float] = None
    sigma7: Optional[float] = None


def twisted_psi_constants(log_x0: float, soz: SozConstants,
                          si: ShortIntervalConstants,
                          q0: int = 3) -> TwistedPsiConstants:
    """Assemble k5, k6 and Omega0..Omega2 for the general-moduli chain.

    soz and si must be computed at the same log x0.  The k5/k6 branch keys
    on the sign of k2; ties take the nonnegative branch.
    """
    if abs(soz.log_x0 - log_x0) > 1e-12 or abs(si.log_x0 - log_x0) > 1e-12:
        raise ValidationError("soz and si records must be computed at the same log x0")
    x = math.exp(log_x0)
    sx = math.sqrt(x)
    lx = log_x0
    llx = math.log(lx)
    g2b = g2(int(1e30) - 1)
    g2a = g2(int(1e30))
    k1, k2 = soz.k1, soz.k2
    sigma1 = k1 + 1.0 / sx + 1.0 / x + g2b / (sx * lx)
    sigma2 = 30.0 * k2 * math.log(10.0) if k2 >= 0 else k2 * math.log(q0)
    sigma3 = 0.593 * llx * lx / sx + k1 + max(k2, 0.0) + 0.000278 + 2.0 / sx + 1.0 / x
    sigma4 = 0.593 * llx * lx / sx + k1 + max(k2, 0.0) + 0.0758 + 3.751 / sx + 1.0 / x \
        + 315.724 / (sx * lx)
    sigma5 = k1 + 0.000278 + 2.0 / sx + 1.0 / x + max(g2b, 0.593 * llx * lx * lx) / (sx * lx)
    if k2 >= 0:
        k5, k6 = sigma4, 0.0
    else:
        k5, k6 = sigma5, k2 * math.log(3.0)
    return TwistedPsiConstants(
        log_x0=log_x0, g2_below=g2b, g2_above=g2a,
        sigma1=sigma1, sigma2=sigma2, sigma3=sigma3, sigma4=sigma4, sigma5=sigma5,
        k5=k5, k6=k6,
        Omega0=si.k3 + k5,
        Omega1=k6 + (0.5 + 1.12 * lx) * lx / sx,
        Omega2=1.777 - si.k4,
    )


def twisted_psi_constants_small(log_x0: float, soz_small: SozConstants,
                                si: ShortIntervalConstants,
                                sigma6_soz: Optional[SozConstants] = None) -> TwistedPsiConstants:
    """Assemble the small-moduli chain (q <= 10^4, x0 >= 1.05e7).

    sigma6_soz selects the zero-sum record whose k1~ feeds sigma6.  The
    bundled reference tables were generated with that record frozen at the
    final grid row (log x0 = 500) for every line; pass the frozen record to
    reproduce them, or leave None to use soz_small itself (the
    self-consistent reading).
    """
    if log_x0 < SMALL_LOG_X0_MIN:
        raise DomainError(f"requires log x0 >= {SMALL_LOG_X0_MIN:.6f}")
    if not soz_small.small_moduli:
        raise ValidationError("need a small-moduli zero-sum record")
    if abs(soz_small.log_x0 - log_x0) > 1e-12 or abs(si.log_x0 - log_x0) > 1e-12:
        raise ValidationError("records must be computed at the same log x0")
    anchor = sigma6_soz if sigma6_soz is not None else soz_small
    if not anchor.small_moduli:
        raise ValidationError("sigma6_soz must be a small-moduli record")
    x = math.exp(log_x0)
    sx = math.sqrt(x)
    lx = log_x0
    base = twisted_psi_constants(log_x0, soz_small, si)
    sigma6 = anchor.k1_t + 1.0 / sx + 1.0 / x + g2(10 ** 4) / (sx * lx)
    k2t = soz_small.k2_t
    sigma7 = 4.0 * k2t * math.log(10.0) if k2t >= 0 else k2t * math.log(3.0)
    return replace(
        base,
        small_moduli=True,
        sigma6=sigma6, sigma7=sigma7,
        Omega0=si.k3 + sigma6,
        Omega1=sigma7 + (0.5 + 1.12 * lx) * lx / sx,
        Omega2=-si.k4,
    )


# ---------------------------------------------------------------------------
# progression constants (Omega3..Omega7 and the a-vector)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class APConstants:
    """Admissible constants of the progression bounds at one x0.

    a1..a6 = (Omega5, Omega6, Omega7, Omega4, Omega2, Omega3); the same
    record shape serves the general and the small-moduli chain (flag).
    """

    log_x0: float
    Omega2: float
    Omega3: float
    Omega4: float
    Omega5: float
    Omega6: float
    Omega7: float
    small_moduli: bool = False

    @property
    def a(self) -> tuple[float, float, float, float, float, float]:
        return (self.Omega5, self.Omega6, self.Omega7,
                self.Omega4, self.Omega2, self.Omega3)

    def __post_init__(self):
        scale = max(1.0, abs(self.Omega3))
        if abs(self.Omega4 - self.Omega3 - 1.44270) > 1e-12 * scale:
            raise ValidationError("Omega4 must equal Omega3 + 1.44270")
        if abs(self.Omega6 - (1.0 / (8 * PI) + self.Omega4 * self.Omega5)) \
                > 1e-12 * max(1.0, abs(self.Omega6)):
            raise ValidationError("Omega6 must equal 1/(8 pi) + Omega4*Omega5")
        if abs(self.Omega7 - (1.0 + self.Omega2) / LOG2) > 1e-12 * max(1.0, abs(self.Omega7)):
            raise ValidationError("Omega7 must equal (1 + Omega2)/log 2")


def ap_constants(log_x0: float, tp: TwistedPsiConstants,
                 clamp_omega1: bool = False) -> APConstants:
    """Fold the twisted-psi constants into the progression constants.

    clamp_omega1=True replaces Omega1 by max(Omega1, 0) before folding it
    into Omega3, which keeps the constant admissible uniformly in x; the
    bundled reference tables for the general chain fold the signed Omega1,
    so that is the default.
    """
    if log_x0 < 10.0:
        raise DomainError(f"requires log x0 >= 10, got {log_x0}")
    if abs(tp.log_x0 - log_x0) > 1e-12:
        raise ValidationError("tp must be computed at the same log x0")
    sx = math.exp(0.5 * log_x0)
    o1 = max(tp.Omega1, 0.0) if clamp_omega1 else tp.Omega1
    Omega3 = tp.Omega0 + o1 / log_x0 + 0.56 * log_x0 / sx
    Omega4 = Omega3 + 1.44270
    Omega5 = 1.0 + (exp_integral_ei(log_x0 / 2.0) - exp_integral_ei(LOG2 / 2.0)) / sx
    Omega6 = 1.0 / (8 * PI) + Omega4 * Omega5
    Omega7 = (1.0 + tp.Omega2) / LOG2
    return APConstants(
        log_x0=log_x0,
        Omega2=tp.Omega2, Omega3=Omega3, Omega4=Omega4,
        Omega5=Omega5, Omega6=Omega6, Omega7=Omega7,
        small_moduli=tp.small_moduli,
    )


def ap_constants_small(log_x0: float, tp_small: TwistedPsiConstants) -> APConstants:
    """Small-moduli progression constants; the signed Omega1 fold is clamped
    at zero here, matching how the small-moduli reference rows were built."""
    if not tp_small.small_moduli:
        raise ValidationError("need a small-moduli twisted-psi record")
    return ap_constants(log_x0, tp_small, clamp_omega1=True)


# ---------------------------------------------------------------------------
# bound evaluators
# ---------------------------------------------------------------------------

BOUND_KINDS = ("psi_chi", "theta_chi", "psi_ap", "theta_ap", "pi_ap", "principal")


def evaluate_bounds(kind: str, x: float, q: int, consts=None) -> float:
    """Right-hand side of the selected inequality at (x, q).

    psi_chi/theta_chi take TwistedPsiConstants, psi_ap/theta_ap/pi_ap take
    APConstants, principal needs no constants (valid for x >= 73.2).
    The general chain additionally requires x0 >= q; the small-moduli
    chain requires q <= 10^4.
    """
    if kind == "principal":
        if x < 73.2:
            raise DomainError("principal-character bound requires x >= 73.2")
        if q < 3:
            raise DomainError("requires q >= 3")
        lx = math.log(x)
        return math.sqrt(x) * lx * lx / (8 * PI) + 1.12 * math.log(q) * lx
    if consts is None:
        raise DomainError(f"kind {kind!r} needs a constants record")
    if q < 3:
        raise DomainError("requires q >= 3")
    x0 = math.exp(consts.log_x0)
    if x < x0 * (1.0 - 1e-12):
        raise DomainError(f"x={x} is below the record's x0=exp({consts.log_x0})")
    if consts.small_moduli:
        if q > 10 ** 4:
            raise DomainError("small-moduli chain requires q <= 10^4")
    else:
        if x0 < q * (1.0 - 1e-12):
            raise DomainError("general chain requires x0 >= q")
    lx = math.log(x)
    lq = math.log(q)
    sx = math.sqrt(x)
    if kind in ("psi_chi", "theta_chi"):
        if not isinstance(consts, TwistedPsiConstants):
            raise DomainError(f"kind {kind!r} needs TwistedPsiConstants")
        lead = lx / (8 * PI) + lq / TWO_PI + consts.Omega0
        if kind == "theta_chi":
            lead += 1.44270
        return lead * sx * lx + consts.Omega1 * sx + consts.Omega2
    if not isinstance(consts, APConstants):
        raise DomainError(f"kind {kind!r} needs APConstants")
    a1, a2, a3, a4, a5, a6 = consts.a
    if kind == "pi_ap":
        return (lx / (8 * PI) + a1 * lq / TWO_PI + a2) * sx + a3
    if kind == "psi_ap":
        return (lx / (8 * PI) + lq / TWO_PI + a6) * sx * lx + a5
    if kind == "theta_ap":
        return (lx / (8 * PI) + lq / TWO_PI + a4) * sx * lx + a5
    raise DomainError(f"unknown bound kind {kind!r}")


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def gm_baseline_pi_bound(x: float, q: int) -> float:
    """Baseline progression bound from the cyclotomic specialization of the
    conditional density theorem, valid for x >= 2."""
    if x < 2.0:
        raise DomainError("requires x >= 2")
    if q < 3:
        raise DomainError("requires q >= 3")
    lx = math.log(x)
    lq = math.log(q)
    sx = math.sqrt(x)
    divisor_sum = math.fsum(math.log(p) / (p - 1) for p in _prime_divisors(q))
    return (lx / (8 * PI) + (1.0 + 3.0 / lx) * lq / TWO_PI + 1.0 / (4 * PI) + 6.0 / lx) * sx \
        - sx * (1.0 / TWO_PI + 3.0 / lx) * divisor_sum


def li_over_phi(x: float, q: int) -> float:
    """Li(x)/phi(q), the main term of the progression prime count."""
    from .arith import euler_phi
    return log_integral_li(x) / euler_phi(q)
