"""Weierstrass models over Q: invariants, twists, and Frobenius trace computation."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import kronecker, primes_up_to, valuation


class SingularModel(Exception):
    pass


class BadReduction(Exception):
    pass


# naive char-sum counting below this, baby-step/giant-step above
NAIVE_CROSSOVER = 1 << 16


def worker_count() -> int:
    env = os.environ.get("SERRE_LAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class WeierstrassModel:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        if self.discriminant() == 0:
            raise SingularModel(f"discriminant vanishes for {self.ainvs()}")

    def ainvs(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.ainvs()
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def c_invariants(self):
        b2, b4, b6, _ = self.b_invariants()
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
        return c4, c6

    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def j_invariant(self) -> Fraction:
        c4, _ = self.c_invariants()
        return Fraction(c4**3, self.discriminant())

    def transform(self, u=1, r=0, s=0, t=0) -> "WeierstrassModel":
        """Change of variables (x, y) -> (u^2 x + r, u^3 y + u^2 s x + t)."""
        a1, a2, a3, a4, a6 = self.ainvs()
        A1 = a1 + 2 * s
        A2 = a2 - s * a1 + 3 * r - s * s
        A3 = a3 + r * a1 + 2 * t
        A4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
        A6 = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
        for k, A in ((1, A1), (2, A2), (3, A3), (4, A4), (6, A6)):
            q, rem = divmod(A, u**k)
            if rem:
                raise ValueError(f"non-integral transform: a{k}")
        return WeierstrassModel(
            A1 // u, A2 // u**2, A3 // u**3, A4 // u**4, A6 // u**6
        )


def invariants(model: WeierstrassModel):
    """(b2, b4, b6, b8, c4, c6, Delta, j) with the standard relations asserted."""
    b2, b4, b6, b8 = model.b_invariants()
    c4, c6 = model.c_invariants()
    disc = model.discriminant()
    assert 4 * b8 == b2 * b6 - b4 * b4
    assert c4**3 - c6 * c6 == 1728 * disc
    return b2, b4, b6, b8, c4, c6, disc, Fraction(c4**3, disc)


def _laska_exponent(vc4, vc6, vdelta):
    # vc4/vc6 may be None when the invariant is 0
    cands = [vdelta // 12]
    if vc4 is not None:
        cands.append(vc4 // 4)
    if vc6 is not None:
        cands.append(vc6 // 6)
    return min(cands)


def _local_short_model(model, p):
    """For p >= 5: (A, B, v_p(Delta_min)) with E locally minimal as y^2 = x^3+Ax+B mod p."""
    c4, c6 = model.c_invariants()
    disc = model.discriminant()
    vd = valuation(disc, p)
    d = _laska_exponent(
        valuation(c4, p) if c4 else None,
        valuation(c6, p) if c6 else None,
        vd,
    )
    c4m = c4 // p ** (4 * d)
    c6m = c6 // p ** (6 * d)
    return -27 * c4m, -54 * c6m, vd - 12 * d


def _sqrt_mod(a, p):
    """Square root of a mod p (p odd prime, a a QR); Tonelli-Shanks."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # find a non-residue
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _count_naive_23(model, p):
    n = 1
    a1, a2, a3, a4, a6 = [a % p for a in model.ainvs()]
    for x in range(p):
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % p == 0:
                n += 1
    return n


def _count_naive_short(A, B, p):
    """#E(F_p) for y^2 = x^3 + Ax + B, p >= 5, via quadratic-character sums."""
    A %= p
    B %= p
    if p < 600:
        s = 0
        for x in range(p):
            s += kronecker((x * x % p * x + A * x + B) % p, p)
        return p + 1 + s
    x = np.arange(p, dtype=np.int64)
    fx = ((x * x % p) * x + A * x + B) % p
    counts = np.bincount((x * x) % p, minlength=p)  # counts[z] = #{y in F_p : y^2 = z}
    return int(counts[fx].sum()) + 1


# ---------------------------------------------------------------------------
# baby-step/giant-step order finding


def _ec_add(P, Q, A, p):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + A) * pow(2 * y1, p - 2, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, p - 2, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return x3, (lam * (x1 - x3) - y1) % p


def _ec_mul(n, P, A, p):
    if n < 0:
        n = -n
        P = None if P is None else (P[0], (-P[1]) % p)
    R = None
    while n:
        if n & 1:
            R = _ec_add(R, P, A, p)
        P = _ec_add(P, P, A, p)
        n >>= 1
    return R


def _random_point(A, B, p, state):
    while True:
        state = (state * 1103515245 + 12345) % (1 << 31)
        x = state % p
        rhs = (x * x % p * x + A * x + B) % p
        k = kronecker(rhs, p)
        if k == -1:
            continue
        if k == 0:
            return (x, 0), state
        return (x, _sqrt_mod(rhs, p)), state


def _point_order(P, A, p, lo, hi):
    """Exact order of P given that it divides some n in [lo, hi]."""
    # BSGS for an annihilator n in [lo, hi]
    width = hi - lo + 1
    m = math.isqrt(width) + 1
    baby = {}
    Q = None
    for i in range(m):
        if Q is not None:
            baby.setdefault(Q[0], []).append((i, Q[1]))
        else:
            baby.setdefault(None, []).append((i, None))
        Q = _ec_add(Q, P, A, p)
    mP = _ec_mul(m, P, A, p)
    R = _ec_mul(lo, P, A, p)
    n = None
    for j in range(m + 1):
        # lo + j*m + i annihilates P iff (lo + jm)P = -(iP)
        key = None if R is None else R[0]
        for i, yi in baby.get(key, ()):
            if R is None:
                hit = yi is None
            else:
                hit = yi is not None and (R[1] + yi) % p == 0
            if hit and lo <= lo + j * m + i <= hi:
                n = lo + j * m + i
                break
        if n is not None:
            break
        R = _ec_add(R, mP, A, p)
    if n is None:
        raise RuntimeError("no annihilator found in Hasse interval")
    # reduce n to the exact order
    from .arith import factorize

    for q, e in factorize(n).factors:
        for _ in range(e):
            if _ec_mul(n // q, P, A, p) is None:
                n //= q
            else:
                break
    return n


def _cartier_manin(A, B, p):
    """a_p mod p as the x^(p-1) coefficient of (x^3+Ax+B)^((p-1)/2)."""
    # polynomial power mod p, tracked as coefficient dict (degrees up to 3(p-1)/2)
    half = (p - 1) // 2
    base = {0: B % p, 1: A % p, 3: 1}
    result = {0: 1}

    def polmul(f, g):
        h = {}
        for d1, c1 in f.items():
            if not c1:
                continue
            for d2, c2 in g.items():
                d = d1 + d2
                h[d] = (h.get(d, 0) + c1 * c2) % p
        return h

    e = half
    while e:
        if e & 1:
            result = polmul(result, base)
        e >>= 1
        if e:
            base = polmul(base, base)
    return result.get(p - 1, 0) % p


def _count_bsgs(A, B, p):
    """Group order via random point orders on the curve and its twist (Mestre),
    with a Cartier-Manin congruence to settle small-p ambiguity."""
    s = math.isqrt(4 * p) + 1
    lo, hi = p + 1 - s, p + 1 + s
    # nonresidue for the quadratic twist y^2 = x^3 + A g^2 x + B g^3
    g = 2
    while kronecker(g, p) != -1:
        g += 1
    At, Bt = A * g * g % p, B * g**3 % p
    l_curve, l_twist = 1, 1
    state = (A * 2654435761 + B * 40503 + p) % (1 << 31) or 1
    for rounds in range(40):
        cands = [n for n in range(lo, hi + 1) if n % l_curve == 0 and (2 * p + 2 - n) % l_twist == 0]
        if len(cands) == 1:
            return cands[0]
        if len(cands) == 0:
            raise RuntimeError("order constraints inconsistent")
        if rounds >= 4 and p < 700:
            # below ~457 the exponent of curve+twist need not pin the order;
            # the Cartier-Manin congruence a_p mod p settles it (cheap for tiny p)
            apm = _cartier_manin(A, B, p)
            cands = [n for n in cands if (p + 1 - n) % p == apm]
            if len(cands) == 1:
                return cands[0]
        if rounds % 2 == 0:
            P, state = _random_point(A, B, p, state)
            o = _point_order(P, A, p, lo, hi)
            l_curve = l_curve * o // math.gcd(l_curve, o)
        else:
            P, state = _random_point(At, Bt, p, state)
            o = _point_order(P, At, p, lo, hi)
            l_twist = l_twist * o // math.gcd(l_twist, o)
    raise RuntimeError(f"group order not pinned down at p={p}")


def count_points(model: WeierstrassModel, p: int, strategy: str = "auto") -> int:
    """Frobenius trace a_p = p + 1 - #E(F_p) at a prime of good reduction."""
    if p in (2, 3):
        disc = model.discriminant()
        if disc % p != 0:
            return p + 1 - _count_naive_23(model, p)
        from . import localdata

        loc = localdata.tate(model, p)
        if loc.f != 0:
            raise BadReduction(f"p={p} divides the minimal discriminant")
        return p + 1 - _count_naive_23(loc.minimal_model, p)
    A, B, vdmin = _local_short_model(model, p)
    if vdmin != 0:
        raise BadReduction(f"p={p} divides the minimal discriminant")
    if strategy == "naive" or (strategy == "auto" and p < NAIVE_CROSSOVER):
        n = _count_naive_short(A, B, p)
    else:
        n = _count_bsgs(A % p, B % p, p)
    ap = p + 1 - n
    assert ap * ap <= 4 * p, f"Hasse-Weil violated at p={p}"
    return ap


@dataclass(frozen=True)
class TraceTable:
    model: WeierstrassModel
    bound: int
    good: dict  # p -> a_p
    ramified: dict  # p -> local a_p in {-1, 0, 1}

    def trace(self, p):
        if p in self.good:
            return self.good[p]
        if p in self.ramified:
            return self.ramified[p]
        raise KeyError(p)

    def good_primes(self):
        return sorted(self.good)


def trace_table(model: WeierstrassModel, X: int, threads: int | None = None) -> TraceTable:
    """a_p for all primes p <= X; ramified primes carry the local coefficient."""
    from . import localdata

    red = localdata.global_reduce(model)
    mmodel = red.minimal_model
    ram = {}
    for p, loc in red.locals.items():
        if p <= X:
            ram[p] = {"multSplit": 1, "multNonsplit": -1, "additive": 0}[loc.red_type]
    plist = [p for p in primes_up_to(X) if p not in ram]
    nthreads = threads if threads is not None else worker_count()
    if nthreads > 1 and len(plist) > 64:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            traces = list(pool.map(lambda p: count_points(mmodel, p), plist))
    else:
        traces = [count_points(mmodel, p) for p in plist]
    return TraceTable(model, X, dict(zip(plist, traces)), ram)


def quadratic_twist(model: WeierstrassModel, d: int) -> WeierstrassModel:
    """Model of the quadratic twist by squarefree d: same j, a_p scaled by (d|p)."""
    from .arith import is_squarefree

    if d == 0 or not is_squarefree(d):
        raise ValueError(f"twisting discriminant {d} is not squarefree")
    c4, c6 = model.c_invariants()
    return WeierstrassModel(0, 0, 0, -27 * c4 * d * d, -54 * c6 * d**3)


def quartic_twist_model(d: int) -> WeierstrassModel:
    """y^2 = x^3 + d x (j = 1728 family); d must be fourth-power-free."""
    from .arith import factorize

    if d == 0 or any(e >= 4 for _, e in factorize(d).factors):
        raise ValueError(f"{d} is not fourth-power-free")
    return WeierstrassModel(0, 0, 0, d, 0)


def sextic_twist_model(d: int) -> WeierstrassModel:
    """y^2 = x^3 + d (j = 0 family); d must be sixth-power-free."""
    from .arith import factorize

    if d == 0 or any(e >= 6 for _, e in factorize(d).factors):
        raise ValueError(f"{d} is not sixth-power-free")
    return WeierstrassModel(0, 0, 0, 0, d)
