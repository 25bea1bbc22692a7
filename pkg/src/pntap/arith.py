"""Exact arithmetic ground truth.

Segmented prime/von-Mangoldt sieving (numpy), prime-counting and Chebyshev
functions restricted to residue classes, Dirichlet character tables built
by CRT over prime-power components, and exact twisted sums.  Everything
here is the oracle side: no estimates, only counts.

Character values are carried as exact roots of unity (an exponent modulo
the group exponent); complex numbers only appear when a sum is finally
evaluated, so long twisted sums do not accumulate phase drift.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import DomainError, ValidationError

DEFAULT_SEGMENT = 1 << 22
TWO_PI_ = 2.0 * math.pi


# ---------------------------------------------------------------------------
# sieving primitives
# ---------------------------------------------------------------------------

def base_primes(limit: int) -> np.ndarray:
    """All primes <= limit via a plain sieve (int64 array)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p:: p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def prime_factors(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, as (prime, exponent) pairs."""
    if n < 1:
        raise DomainError("factorization needs n >= 1")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(q: int) -> int:
    phi = 1
    for p, e in prime_factors(q):
        phi *= (p - 1) * p ** (e - 1)
    return phi


def prime_segments(lo: int, hi: int, bp: np.ndarray | None = None,
                   segment: int = DEFAULT_SEGMENT) -> Iterator[np.ndarray]:
    """Yield int64 arrays of the primes in [lo, hi], segment by segment."""
    if hi < lo or hi < 2:
        return
    lo = max(lo, 2)
    if bp is None:
        bp = base_primes(math.isqrt(hi))
    bp_list = bp.tolist()
    start = lo
    while start <= hi:
        stop = min(start + segment, hi + 1)
        mask = np.ones(stop - start, dtype=bool)
        if start <= 1:
            mask[: min(2 - start, stop - start)] = False
        for p in bp_list:
            if p * p >= stop:
                break
            first = max(p * p, ((start + p - 1) // p) * p)
            if first < stop:
                mask[first - start:: p] = False
        yield np.flatnonzero(mask) + start
        start = stop


def higher_prime_powers(n: int) -> Iterator[tuple[int, int, float]]:
    """All (p, p^k, log p) with k >= 2 and p^k <= n."""
    for p in base_primes(math.isqrt(n)).tolist():
        pk = p * p
        lp = math.log(p)
        while pk <= n:
            yield p, pk, lp
            pk *= p


# ---------------------------------------------------------------------------
# residue-class counts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class APCounts:
    """Exact (pi, theta, psi) at x restricted to the class a mod q."""

    x: float
    q: int
    a: int
    pi: int
    theta: float
    psi: float

    def __post_init__(self):
        if self.q >= 1 and math.gcd(self.a, self.q) != 1:
            raise ValidationError(f"gcd({self.a}, {self.q}) > 1")
        if not (0.0 <= self.theta <= self.psi + 1e-9):
            raise ValidationError("need 0 <= theta <= psi")
        if self.x >= 2 and self.pi > self.psi / math.log(2.0) + 1e-9:
            raise ValidationError("pi exceeds psi/log 2")


class ResidueCounter:
    """Accumulates pi/theta/psi per residue class, one sieve pass total.

    Serves one modulus or several at once (the prime enumeration dominates,
    so sharing it across moduli is nearly free).  theta and psi are
    compensated across segments with math.fsum.
    """

    def __init__(self, q: int | Sequence[int], segment: int = DEFAULT_SEGMENT):
        qs = [q] if isinstance(q, int) else list(q)
        if not qs or any(m < 1 for m in qs):
            raise DomainError("moduli must be >= 1")
        if len(set(qs)) != len(qs):
            raise DomainError("duplicate moduli")
        self.qs = qs
        self.q = qs[0]
        self.segment = segment

    def counts_at_multi(self, xs: Sequence[float]) -> dict[int, list[tuple[np.ndarray, np.ndarray, np.ndarray]]]:
        xs = list(xs)
        if any(x < 2 for x in xs):
            raise DomainError("counting functions need x >= 2")
        if sorted(xs) != xs:
            raise DomainError("evaluation points must be ascending")
        limits = [int(math.floor(x)) for x in xs]
        n_max = limits[-1]
        bp = base_primes(math.isqrt(n_max))
        pi_q = {q: np.zeros(q, dtype=np.int64) for q in self.qs}
        th_parts = {q: [[] for _ in range(q)] for q in self.qs}
        results: dict[int, list] = {q: [] for q in self.qs}
        out_idx = 0
        # prime powers p^k (k >= 2) are few; added per snapshot
        powers = sorted((pk, lp) for _, pk, lp in higher_prime_powers(n_max))

        def snapshot(limit):
            for q in self.qs:
                theta = np.array([math.fsum(parts) for parts in th_parts[q]])
                psi = theta.copy()
                for pk, lp in powers:
                    if pk > limit:
                        break
                    psi[pk % q] += lp
                results[q].append((pi_q[q].copy(), theta, psi))

        start = 2
        while start <= n_max:
            stop = min(start + self.segment, n_max + 1)
            # checkpoints strictly inside this segment force sub-slices
            cuts = [limits[i] for i in range(out_idx, len(limits)) if start <= limits[i] < stop - 1]
            bounds = sorted(set(cuts + [stop - 1]))
            seg_lo = start
            for b in bounds:
                for pr in prime_segments(seg_lo, b, bp=bp, segment=self.segment):
                    if pr.size:
                        logs = np.log(pr.astype(np.float64))
                        for q in self.qs:
                            res = pr % q
                            pi_q[q] += np.bincount(res, minlength=q)
                            th_seg = np.bincount(res, weights=logs, minlength=q)
                            for r in np.nonzero(th_seg)[0]:
                                th_parts[q][r].append(th_seg[r])
                while out_idx < len(limits) and limits[out_idx] == b:
                    snapshot(limits[out_idx])
                    out_idx += 1
                seg_lo = b + 1
            start = stop
        while out_idx < len(limits):  # duplicates of the final limit
            snapshot(limits[out_idx])
            out_idx += 1
        return results

    def counts_at(self, xs: Sequence[float]) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
        return self.counts_at_multi(xs)[self.q]


def residue_counts(x: float, q: int, segment: int = DEFAULT_SEGMENT):
    """Per-residue (pi, theta, psi) arrays up to x."""
    return ResidueCounter(q, segment=segment).counts_at([x])[0]


def ap_counts(x: float, q: int, a: int, segment: int = DEFAULT_SEGMENT) -> APCounts:
    """Exact pi/theta/psi at x in the class a mod q (q = 1: unrestricted)."""
    if x < 2:
        raise DomainError("requires x >= 2")
    if q < 1:
        raise DomainError("q must be >= 1")
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) > 1: the class holds at most one prime power")
    pi_q, th_q, ps_q = residue_counts(x, q, segment=segment)
    r = a % q
    return APCounts(x=x, q=q, a=a, pi=int(pi_q[r]), theta=float(th_q[r]), psi=float(ps_q[r]))


def psi_plain(x: float, segment: int = DEFAULT_SEGMENT) -> float:
    """Chebyshev psi(x) = sum of Lambda(n) for n <= x."""
    if x < 2:
        return 0.0
    pi_q, th_q, ps_q = residue_counts(x, 1, segment=segment)
    return float(ps_q[0])


def theta_plain(x: float, segment: int = DEFAULT_SEGMENT) -> float:
    if x < 2:
        return 0.0
    pi_q, th_q, ps_q = residue_counts(x, 1, segment=segment)
    return float(th_q[0])


def lambda_sum_interval(a: float, b: float, segment: int = DEFAULT_SEGMENT) -> float:
    """Sum of Lambda(n) over a < n <= b, by sieving just the window."""
    lo = int(math.floor(a)) + 1
    hi = int(math.floor(b))
    if hi < lo or hi < 2:
        return 0.0
    lo = max(lo, 2)
    parts = []
    bp = base_primes(math.isqrt(hi))
    for pr in prime_segments(lo, hi, bp=bp, segment=segment):
        if pr.size:
            parts.append(float(np.log(pr.astype(np.float64)).sum()))
    for p in bp.tolist():
        pk = p * p
        lp = math.log(p)
        while pk <= hi:
            if pk >= lo:
                parts.append(lp)
            pk *= p
    return math.fsum(parts)


def short_interval_psi_delta(x: float, segment: int = DEFAULT_SEGMENT) -> float:
    """psi(x + sqrt(x) log x) - psi(x) - sqrt(x) log x, sieved exactly."""
    if x < 2:
        raise DomainError("requires x >= 2")
    h = math.sqrt(x) * math.log(x)
    return lambda_sum_interval(x, x + h, segment=segment) - h


def psi1_plain(x: float, segment: int = DEFAULT_SEGMENT) -> float:
    """Linearly weighted Chebyshev function: sum of Lambda(n)(x - n), n <= x."""
    if x < 2:
        raise DomainError("requires x >= 2")
    n_max = int(math.floor(x))
    parts = []
    for pr in prime_segments(2, n_max, segment=segment):
        if pr.size:
            w = np.log(pr.astype(np.float64))
            parts.append(float((w * (x - pr)).sum()))
    for _, pk, lp in higher_prime_powers(n_max):
        parts.append(lp * (x - pk))
    return math.fsum(parts)


# ---------------------------------------------------------------------------
# Dirichlet characters
# ---------------------------------------------------------------------------

def _order(a: int, m: int, group_order: int) -> int:
    o = group_order
    for p, _ in prime_factors(group_order):
        while o % p == 0 and pow(a, o // p, m) == 1:
            o //= p
    return o


def _primitive_root(pk: int, p: int) -> int:
    """Least primitive root mod p that stays primitive mod p^2 (hence p^k)."""
    phi_p = p - 1
    fac = [f for f, _ in prime_factors(phi_p)]
    g = 2
    while True:
        if all(pow(g, phi_p // f, p) != 1 for f in fac):
            if pk == p or pow(g, phi_p, p * p) != 1:
                return g
            # rare: g primitive mod p but not mod p^2; g+p always works then
            return g + p
        g += 1


@dataclass(frozen=True, eq=False)
class _Component:
    """One prime-power block of (Z/q)*: its modulus and generator logs."""

    modulus: int
    gens: tuple[int, ...]
    orders: tuple[int, ...]
    log_table: np.ndarray  # shape (modulus, len(gens)); -1 rows for non-units


def _build_component(p: int, e: int) -> list[_Component]:
    pk = p ** e
    if p == 2:
        if e == 1:
            return []
        if e == 2:
            table = -np.ones((4, 1), dtype=np.int64)
            table[1, 0] = 0
            table[3, 0] = 1
            return [_Component(4, (3,), (2,), table)]
        half = 1 << (e - 2)
        table = -np.ones((pk, 2), dtype=np.int64)
        v = 1
        for d in range(half):
            table[v] = (0, d)
            table[pk - v] = (1, d)
            v = (v * 5) % pk
        return [_Component(pk, (pk - 1, 5), (2, half), table)]
    g = _primitive_root(pk, p)
    s = (p - 1) * p ** (e - 1)
    table = -np.ones((pk, 1), dtype=np.int64)
    v = 1
    for d in range(s):
        table[v, 0] = d
        v = (v * g) % pk
    return [_Component(pk, (g,), (s,), table)]


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    """A Dirichlet character mod q, stored as generator exponents.

    value(n) is an exact root of unity exp(2 pi i j/e) with j =
    exponent_of(n); parity is (1 - chi(-1))/2.
    """

    q: int
    index: int
    exponents: tuple[int, ...]
    group_exponent: int
    parity: int
    is_principal: bool
    is_primitive: bool
    conductor: int
    _components: tuple[_Component, ...]
    _orders: tuple[int, ...]

    def exponent_of(self, n: int) -> int | None:
        """Exponent j with chi(n) = exp(2 pi i j / group_exponent), or None."""
        if math.gcd(n, self.q) != 1:
            return None
        e = self.group_exponent
        j = 0
        pos = 0
        for comp in self._components:
            logs = comp.log_table[n % comp.modulus]
            for t, s in zip(logs, comp.orders):
                j += int(t) * self.exponents[pos] * (e // s)
                pos += 1
        return j % e

    def value(self, n: int) -> complex:
        j = self.exponent_of(n)
        if j is None:
            return 0j
        return complex(math.cos(TWO_PI_ * j / self.group_exponent),
                       math.sin(TWO_PI_ * j / self.group_exponent))

    def __call__(self, n: int) -> complex:
        return self.value(n)

    def exponent_table(self) -> np.ndarray:
        """exponent_of for all residues; group_exponent marks non-units."""
        e = self.group_exponent
        out = np.full(self.q, e, dtype=np.int64)
        for n in range(self.q):
            j = self.exponent_of(n)
            if j is not None:
                out[n] = j
        return out

    def value_table(self) -> np.ndarray:
        """chi(n) for n = 0..q-1 as complex128 (0 on non-units)."""
        e = self.group_exponent
        roots = np.exp(2j * np.pi * np.arange(e + 1) / e)
        roots[e] = 0.0
        return roots[self.exponent_table()]



def _conductor(components, orders_flat, exponents) -> int:
    cond = 1
    pos = 0
    for comp in components:
        m = comp.modulus
        p = prime_factors(m)[0][0]
        if p == 2 and len(comp.orders) == 2:
            c_sign, c_five = exponents[pos], exponents[pos + 1]
            d5 = comp.orders[1] // math.gcd(comp.orders[1], c_five)
            if d5 > 1:
                cond *= 4 * d5
            elif c_sign % 2 == 1:
                cond *= 4
            pos += 2
            continue
        c = exponents[pos]
        s = comp.orders[0]
        d = s // math.gcd(s, c)
        if d > 1:
            b = 1
            while ((p - 1) * p ** (b - 1)) % d != 0:
                b += 1
            cond *= p ** b
        pos += 1
    return cond


def _conrey_index(q, components, exponents) -> int:
    if q == 1:
        return 1
    residues, moduli = [], []
    pos = 0
    for comp in components:
        m = comp.modulus
        if len(comp.gens) == 2:
            c_sign, c_five = exponents[pos], exponents[pos + 1]
            r = (pow(m - 1, c_sign, m) * pow(5, c_five, m)) % m
            pos += 2
        else:
            r = pow(comp.gens[0], exponents[pos], m)
            pos += 1
        residues.append(r)
        moduli.append(m)
    # q may carry a bare factor 2 with trivial unit group
    rem = q
    for m in moduli:
        rem //= m
    if rem > 1:
        residues.append(1)
        moduli.append(rem)
    x, mod = 0, 1
    for r, m in zip(residues, moduli):
        g, inv = m, pow(mod, -1, m)
        x = x + mod * ((r - x) * inv % m)
        mod *= m
    return x % q


@lru_cache(maxsize=64)
def character_table(q: int) -> tuple[DirichletCharacter, ...]:
    """All phi(q) Dirichlet characters mod q, principal first.

    Built by CRT over prime-power components: odd blocks use a fixed
    primitive root, the 2-power block uses the {-1, 5} generator pair.
    """
    if q < 3:
        raise DomainError("character tables need q >= 3")
    if q > 10 ** 9:
        raise DomainError("modulus too large for the trial-division factorizer")
    components: list[_Component] = []
    for p, e in sorted(prime_factors(q)):
        components.extend(_build_component(p, e))
    orders_flat = tuple(s for comp in components for s in comp.orders)
    group_exp = 1
    for s in orders_flat:
        group_exp = group_exp * s // math.gcd(group_exp, s)
    comps = tuple(components)

    def all_tuples(pos=0):
        if pos == len(orders_flat):
            yield ()
            return
        for rest in all_tuples(pos + 1):
            for c in range(orders_flat[pos]):
                yield (c,) + rest

    chars = []
    for exps in sorted(all_tuples()):
        cond = _conductor(comps, orders_flat, exps)
        # parity from chi(-1)
        parity_exp = 0
        pos = 0
        for comp in comps:
            logs = comp.log_table[(q - 1) % comp.modulus]
            for t, s in zip(logs, comp.orders):
                parity_exp += int(t) * exps[pos] * (group_exp // s)
                pos += 1
        parity = 0 if parity_exp % group_exp == 0 else 1
        chars.append(DirichletCharacter(
            q=q,
            index=_conrey_index(q, comps, exps),
            exponents=exps,
            group_exponent=group_exp,
            parity=parity,
            is_principal=all(c == 0 for c in exps),
            is_primitive=(cond == q),
            conductor=cond,
            _components=comps,
            _orders=orders_flat,
        ))
    chars.sort(key=lambda ch: (not ch.is_principal, ch.index))
    if len(chars) != euler_phi(q):
        raise ValidationError("character construction lost characters")
    return tuple(chars)


def residue_masses(x: float, q: int, kind: str, segment: int = DEFAULT_SEGMENT) -> np.ndarray:
    """Per-residue mass vector: Lambda(n) (psi), log p on primes (theta),
    or Lambda(n)(x - n) (psi1), summed over n <= x in each class mod q."""
    if kind not in ("psi", "theta", "psi1"):
        raise DomainError(f"unknown kind {kind!r}")
    masses = [[] for _ in range(q)]
    n_max = int(math.floor(x))
    if n_max >= 2:
        for pr in prime_segments(2, n_max, segment=segment):
            if not pr.size:
                continue
            w = np.log(pr.astype(np.float64))
            if kind == "psi1":
                w = w * (x - pr)
            seg = np.bincount(pr % q, weights=w, minlength=q)
            for r in np.nonzero(seg)[0]:
                masses[r].append(seg[r])
        if kind in ("psi", "psi1"):
            for _, pk, lp in higher_prime_powers(n_max):
                masses[pk % q].append(lp * (x - pk) if kind == "psi1" else lp)
    return np.array([math.fsum(m) for m in masses])


def twisted_sum(x: float, chi: DirichletCharacter, kind: str = "psi",
                segment: int = DEFAULT_SEGMENT) -> complex:
    """Exact twisted sum: sum of chi(n) Lambda(n) (optionally theta- or
    psi1-weighted) over n <= x.  Empty for x < 2."""
    if x < 2:
        return 0j
    mass = residue_masses(x, chi.q, kind, segment=segment)
    values = chi.value_table()
    re = math.fsum((values.real * mass).tolist())
    im = math.fsum((values.imag * mass).tolist())
    return complex(re, im)


def psi_from_characters(x: float, q: int, a: int, segment: int = DEFAULT_SEGMENT) -> float:
    """Reconstruct psi(x; q, a) from twisted sums by orthogonality."""
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) > 1")
    mass = residue_masses(x, q, "psi", segment=segment)
    chars = character_table(q)
    parts = []
    for chi in chars:
        values = chi.value_table()
        s = complex(math.fsum((values.real * mass).tolist()),
                    math.fsum((values.imag * mass).tolist()))
        parts.append(s * chi.value(a).conjugate())
    total = math.fsum(p.real for p in parts) / len(chars)
    return total
