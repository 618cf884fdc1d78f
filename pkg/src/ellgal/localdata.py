"""Tate's algorithm: minimal models, Kodaira symbols, conductor exponents, Phi_p."""

from __future__ import annotations

from dataclasses import dataclass

from .arith import factorize, kronecker, valuation
from .curve import WeierstrassModel


class NotAdditivePotGood(Exception):
    pass


class PreconditionFailed(Exception):
    pass


class InvariantViolation(Exception):
    """A conductor-exponent bound failed; the CLI maps this to exit code 2."""


_BIG = 10**9


def _vv(n, p):
    return _BIG if n == 0 else valuation(n, p)


def _exact_div(n, d):
    q, r = divmod(n, d)
    if r:
        raise RuntimeError(f"expected {d} | {n} in Tate step")
    return q


@dataclass(frozen=True)
class LocalReduction:
    p: int
    kodaira: str
    f: int
    v_delta_min: int
    red_type: str  # good | multSplit | multNonsplit | additive
    pot_good: bool
    minimal_model: WeierstrassModel


@dataclass(frozen=True)
class GlobalReduction:
    minimal_model: WeierstrassModel
    conductor: int
    locals: dict  # p -> LocalReduction, bad primes only
    semistable: bool
    satisfies_cond12: bool
    n_add: int  # product of the additive bad primes (radical)
    n_mult: int  # product of p^f over multiplicative primes


# |Phi_p| from v_p(Delta_min) for p >= 5, additive potentially good
_PHI_TABLE = {2: 6, 3: 4, 4: 3, 6: 2, 8: 3, 9: 4, 10: 6}


def _check_f_bound(p, f):
    limit = 8 if p == 2 else 5 if p == 3 else 2
    if f > limit:
        raise InvariantViolation(f"conductor exponent {f} at p={p} exceeds {limit}")


def _tate_table(model, p):
    """Reduction data at p >= 5 from the (v(c4), v(Delta)) valuation table."""
    c4, c6 = model.c_invariants()
    disc = model.discriminant()
    vd = _vv(disc, p)
    vc4 = _vv(c4, p)
    vc6 = _vv(c6, p)
    d = min(vc4 // 4, vc6 // 6, vd // 12)
    c4m = c4 // p ** (4 * d)
    c6m = c6 // p ** (6 * d)
    vd -= 12 * d
    vc4 = _vv(c4m, p)
    mmodel = WeierstrassModel(0, 0, 0, -27 * c4m, -54 * c6m)
    if vd == 0:
        return LocalReduction(p, "I0", 0, 0, "good", True, mmodel)
    if vc4 == 0:
        split = kronecker(-c6m, p) == 1
        red = "multSplit" if split else "multNonsplit"
        return LocalReduction(p, f"I{vd}", 1, vd, red, False, mmodel)
    pot_good = 3 * vc4 >= vd
    if vd == 2:
        kod = "II"
    elif vd == 3:
        kod = "III"
    elif vd == 4:
        kod = "IV"
    elif vd == 6:
        kod = "I0*"
    elif vc4 == 2 and vd >= 7:
        kod = f"I{vd - 6}*"
    elif vd == 8:
        kod = "IV*"
    elif vd == 9:
        kod = "III*"
    elif vd == 10:
        kod = "II*"
    else:
        raise InvariantViolation(f"impossible valuation pair v(c4)={vc4}, v(D)={vd} at p={p}")
    return LocalReduction(p, kod, 2, vd, "additive", pot_good, mmodel)


def _cubic_root_mults(coeffs, p):
    """Multiplicity of each root in F_p of a monic cubic, given [1, c2, c1, c0]."""
    mults = {}
    for t in range(p):
        c = [x % p for x in coeffs]
        k = 0
        while len(c) > 1:
            # synthetic division by (T - t)
            q = []
            acc = 0
            for coef in c:
                acc = (acc * t + coef) % p
                q.append(acc)
            if q[-1] != 0:
                break
            c = q[:-1]
            k += 1
        if k:
            mults[t] = k
    return mults


def _quad_has_root(b, c, p):
    """Whether T^2 + bT + c has a root in F_p (brute force, p tiny)."""
    return any((t * t + b * t + c) % p == 0 for t in range(p))


def _move_singular_point(E, p):
    for r in range(p):
        for t in range(p):
            F = E.transform(r=r, t=t)
            if F.a3 % p == 0 and F.a4 % p == 0 and F.a6 % p == 0:
                return F
    raise RuntimeError(f"no rational singular point found mod {p}")


def _step6_normalize(E, p):
    for s in range(p):
        for rk in range(p):
            for t in range(p * p):
                F = E.transform(r=rk * p, s=s, t=t)
                if (
                    F.a1 % p == 0
                    and F.a2 % p == 0
                    and F.a3 % (p * p) == 0
                    and F.a4 % (p * p) == 0
                    and F.a6 % (p**3) == 0
                ):
                    return F
    raise RuntimeError(f"Tate step-6 normalization failed at p={p}")


def _tate_steps(model, p):
    """Full step-by-step Tate algorithm; valid at any p, used in production for p = 2, 3."""
    base = model
    for _ in range(40):
        disc = base.discriminant()
        if disc % p != 0:
            return LocalReduction(p, "I0", 0, 0, "good", True, base)
        vd = valuation(disc, p)
        c4, _ = base.c_invariants()
        pot_good = 3 * _vv(c4, p) >= vd

        E = _move_singular_point(base, p)
        b2, b4, b6, b8 = E.b_invariants()
        if b2 % p != 0:
            # multiplicative: node with tangent directions T^2 + a1 T - a2
            split = _quad_has_root(E.a1 % p, (-E.a2) % p, p)
            red = "multSplit" if split else "multNonsplit"
            return LocalReduction(p, f"I{vd}", 1, vd, red, False, base)
        if _vv(E.a6, p) < 2:
            return LocalReduction(p, "II", vd, vd, "additive", pot_good, base)
        if _vv(b8, p) < 3:
            return LocalReduction(p, "III", vd - 1, vd, "additive", pot_good, base)
        if _vv(b6, p) < 3:
            return LocalReduction(p, "IV", vd - 2, vd, "additive", pot_good, base)
        E = _step6_normalize(E, p)
        # cubic P(T) = T^3 + (a2/p) T^2 + (a4/p^2) T + a6/p^3 over F_p
        c2 = _exact_div(E.a2, p)
        c1 = _exact_div(E.a4, p * p)
        c0 = _exact_div(E.a6, p**3)
        mults = _cubic_root_mults([1, c2, c1, c0], p)
        mmax = max(mults.values(), default=1)
        if mmax == 1:
            return LocalReduction(p, "I0*", vd - 4, vd, "additive", pot_good, base)
        root = max(t for t, k in mults.items() if k == mmax)
        if mmax == 2:
            # type I_n* sub-procedure: shift the double root to T = 0
            E = E.transform(r=p * root)
            n = 1
            mx = my = p * p
            while True:
                a3t = _exact_div(E.a3, my)
                a6t = _exact_div(E.a6, mx * my)
                if (a3t * a3t + 4 * a6t) % p != 0:
                    break
                if p == 2:
                    y0 = a6t % 2
                else:
                    y0 = (-a3t * pow(2, -1, p)) % p
                E = E.transform(t=my * y0)
                my *= p
                n += 1
                a2t = _exact_div(E.a2, p)
                a4t = _exact_div(E.a4, p * mx)
                a6t = _exact_div(E.a6, mx * my)
                if (a4t * a4t - 4 * a2t * a6t) % p != 0:
                    break
                if p == 2:
                    x0 = (a6t * pow(a2t, -1, 2)) % 2
                else:
                    x0 = (-a4t * pow(2 * a2t, -1, p)) % p
                E = E.transform(r=mx * x0)
                mx *= p
                n += 1
            return LocalReduction(p, f"I{n}*", vd - 4 - n, vd, "additive", pot_good, base)
        # triple root: shift to T = 0, then steps 8-10
        E = E.transform(r=p * root)
        a3t = _exact_div(E.a3, p * p)
        a6t = _exact_div(E.a6, p**4)
        if (a3t * a3t + 4 * a6t) % p != 0:
            return LocalReduction(p, "IV*", vd - 6, vd, "additive", pot_good, base)
        if p == 2:
            y0 = a6t % 2
        else:
            y0 = (-a3t * pow(2, -1, p)) % p
        E = E.transform(t=p * p * y0)
        if _vv(E.a4, p) < 4:
            return LocalReduction(p, "III*", vd - 7, vd, "additive", pot_good, base)
        if _vv(E.a6, p) < 6:
            return LocalReduction(p, "II*", vd - 8, vd, "additive", pot_good, base)
        # non-minimal: rescale by u = p and start over
        base = E.transform(u=p)
    raise RuntimeError(f"Tate algorithm did not terminate at p={p}")


def tate(model: WeierstrassModel, p: int) -> LocalReduction:
    """Local reduction data at p, with a p-minimal model attached."""
    loc = _tate_table(model, p) if p >= 5 else _tate_steps(model, p)
    _check_f_bound(p, loc.f)
    return loc


def phi_order(local: LocalReduction):
    """|Phi_p| for p >= 5 (read off v_p(Delta_min)); opaque tag at p = 2, 3.

    At 2 and 3 several group shapes occur and the valuation data does not
    single one out, so no guess is made.
    """
    if local.red_type != "additive" or not local.pot_good:
        raise NotAdditivePotGood(f"p={local.p} is not additive potentially good")
    if local.p >= 5:
        return _PHI_TABLE[local.v_delta_min]
    return "undetermined23"


def inertial_type(local: LocalReduction) -> str:
    """Inertial Weil-Deligne class at an additive potentially good p >= 5 with |Phi_p| = 4."""
    if local.p < 5:
        raise PreconditionFailed("defined only for p >= 5")
    order = phi_order(local)  # raises NotAdditivePotGood when inapplicable
    if order != 4:
        raise PreconditionFailed(f"|Phi_p| = {order}, need 4")
    if local.p % 4 == 1:
        return "principalSeries_tps114"
    return "supercuspidal_tsc_u24"


def potential_goodness(local: LocalReduction) -> bool:
    return local.pot_good


def _reduce_model(E: WeierstrassModel) -> WeierstrassModel:
    """Canonical form: a1, a3 in {0, 1} and a2 in {-1, 0, 1}."""
    E = E.transform(s=-(E.a1 // 2))
    E = E.transform(r=-((E.a2 + 1) // 3))
    return E.transform(t=-(E.a3 // 2))


def global_reduce(model: WeierstrassModel) -> GlobalReduction:
    """Globally minimal model, conductor, and the per-prime reduction map."""
    c4, c6 = model.c_invariants()
    disc = model.discriminant()
    u = 1
    for p, _ in factorize(abs(disc)).factors:
        if p < 5:
            continue
        d = min(_vv(c4, p) // 4, _vv(c6, p) // 6, valuation(disc, p) // 12)
        u *= p**d
    E = WeierstrassModel(0, 0, 0, -27 * (c4 // u**4), -54 * (c6 // u**6))
    E = _tate_steps(E, 2).minimal_model
    E = _tate_steps(E, 3).minimal_model
    E = _reduce_model(E)

    locs = {}
    dmin = abs(E.discriminant())
    for p, _ in factorize(dmin).factors:
        loc = tate(E, p)
        if loc.f > 0:
            locs[p] = loc
    conductor = 1
    n_add, n_mult = 1, 1
    cond12 = True
    for p, loc in sorted(locs.items()):
        conductor *= p**loc.f
        if loc.red_type == "additive":
            n_add *= p
            if p >= 5 and loc.pot_good and phi_order(loc) == 4:
                cond12 = False
        else:
            n_mult *= p**loc.f
    if n_add * n_add > conductor:
        raise InvariantViolation("additive radical exceeds sqrt of conductor")
    semistable = all(loc.f <= 1 for loc in locs.values())
    return GlobalReduction(E, conductor, locs, semistable, cond12, n_add, n_mult)
