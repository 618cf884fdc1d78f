"""Mod-ell image diagnostics, joint surjectivity, and quadratic character candidates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arith import factorize, is_prime, kronecker, primes_up_to
from .curve import TraceTable
from .localdata import GlobalReduction, phi_order


class InsufficientSamples(Exception):
    pass


class NoCommonWitness(Exception):
    pass


class NoWitnessBelow(Exception):
    def __init__(self, X):
        super().__init__(f"no trace-distinguishing prime below {X}")
        self.X = X


@dataclass(frozen=True)
class ImageReport:
    ell: int
    verdict: str  # surjective | nonsurjectiveWitnessed | undetermined
    bound: int
    certificates: dict  # name -> witness prime (or bool for det)
    obstruction: str | None
    samples: int


@dataclass(frozen=True)
class PairWitness:
    p: int
    a1: int
    a2: int


@dataclass(frozen=True)
class EpsilonCandidateSet:
    ell: int
    support: int  # the product D over additive potentially good primes with |Phi_p| = 4
    candidates: tuple  # signed moduli 2^v2 * 3^v3 * ell^vl * D
    tested: dict = field(default_factory=dict)  # modulus -> count of chi = -1 primes checked


@dataclass(frozen=True)
class JointResult:
    status: str  # jointlySurjective | failed | undetermined
    reason: str | None
    witness: int | None


@dataclass(frozen=True)
class ComparisonResult:
    bound: int
    witness: PairWitness
    spot_checks: tuple  # ((ell, status), ...) over primes in (bound, bound + 50]


@dataclass(frozen=True)
class ScriptLReport:
    ells: tuple
    witness: int | None
    trace: int | None
    product: int
    consistent: bool


def _is_square(n):
    return n >= 0 and math.isqrt(n) ** 2 == n


def _integer_roots_monic_cubic(c2, c1, c0):
    if c0 == 0:
        return True
    divs = [1]
    for q, e in factorize(abs(c0)).factors:
        divs = [d * q**k for d in divs for k in range(e + 1)]
    for d in divs:
        for r in (d, -d):
            if r**3 + c2 * r * r + c1 * r + c0 == 0:
                return True
    return False


def _image_test_mod2(red: GlobalReduction, X: int) -> ImageReport:
    """Exact verdict at ell = 2 from the 2-division cubic and the discriminant."""
    b2, b4, b6, _ = red.minimal_model.b_invariants()
    # roots of 4x^3 + b2 x^2 + 2 b4 x + b6; X = 4x gives a monic integer cubic
    reducible = _integer_roots_monic_cubic(b2, 8 * b4, 16 * b6)
    disc = red.minimal_model.discriminant()
    if reducible:
        return ImageReport(2, "nonsurjectiveWitnessed", X, {}, "reducible", 0)
    if _is_square(disc):
        return ImageReport(2, "nonsurjectiveWitnessed", X, {}, "cyclicCubic", 0)
    return ImageReport(2, "surjective", X, {"irreducibleNonsquareDisc": True}, None, 0)


def _det_surjective(residues, ell):
    seen = {1}
    frontier = set(residues)
    while frontier:
        new = set()
        for r in frontier:
            for s in list(seen):
                t = r * s % ell
                if t not in seen:
                    new.add(t)
        seen |= new
        frontier = new
    return len(seen) == ell - 1


def image_test(red: GlobalReduction, table: TraceTable, ell: int, X: int | None = None) -> ImageReport:
    """Certificate-based surjectivity scan of the mod-ell image over primes <= X.

    Supported for ell = 2 (exact, via the 2-division cubic) and ell >= 5; the
    certificate method degenerates at ell = 3.
    """
    if X is None:
        X = table.bound
    if ell == 2:
        return _image_test_mod2(red, X)
    if ell == 3 or not is_prime(ell) or ell < 2:
        raise ValueError(f"unsupported ell = {ell}")

    cert_a = cert_b = cert_c = None  # witness primes
    samples = 0
    dets = set()
    nonzero_traces = 0
    for p in table.good_primes():
        if p > X or p == ell:
            continue
        ap = table.good[p] % ell
        samples += 1
        dets.add(p % ell)
        disc = (ap * ap - 4 * p) % ell
        disc_symbol = kronecker(disc, ell)
        if ap != 0:
            nonzero_traces += 1
            if disc_symbol == -1 and cert_a is None:
                cert_a = p
            if disc_symbol == 1 and cert_b is None:
                cert_b = p
            u = ap * ap * pow(p, -1, ell) % ell
            if u not in (0, 1, 2, 4) and (u * u - 3 * u + 1) % ell != 0 and cert_c is None:
                cert_c = p
    det_ok = _det_surjective(dets, ell)
    certs = {
        "nonsquareDisc": cert_a,
        "squareDisc": cert_b,
        "exceptionalExcluded": cert_c,
        "detSurjective": det_ok,
    }
    if cert_a and cert_b and cert_c and det_ok:
        return ImageReport(ell, "surjective", X, certs, None, samples)
    if samples < 10:
        raise InsufficientSamples(f"only {samples} good primes below {X}")
    obstruction = None
    if nonzero_traces == 0:
        obstruction = "traceZero"
    elif cert_a is None:
        obstruction = "reducible"
    elif cert_b is None:
        obstruction = "nonsplitCartanNormalizer"
    elif cert_c is None:
        obstruction = "exceptional"
    if samples >= 30 and obstruction is not None:
        return ImageReport(ell, "nonsurjectiveWitnessed", X, certs, obstruction, samples)
    return ImageReport(ell, "undetermined", X, certs, obstruction, samples)


def pair_witness(t1: TraceTable, t2: TraceTable, N1: int, N2: int, X: int) -> PairWitness | None:
    """Least p <= X, p coprime to N1 N2, with |a_p(E1)| != |a_p(E2)|; None if absent."""
    for p in t1.good_primes():
        if p > X or p not in t2.good or (N1 * N2) % p == 0:
            continue
        a1, a2 = t1.good[p], t2.good[p]
        if abs(a1) != abs(a2):
            return PairWitness(p, a1, a2)
    return None


def joint_surjectivity_test(red1, t1, red2, t2, ell, X=None) -> JointResult:
    if X is None:
        X = min(t1.bound, t2.bound)
    for red, tab in ((red1, t1), (red2, t2)):
        rep = image_test(red, tab, ell, X)
        if rep.verdict != "surjective":
            return JointResult("failed", "single-curve-image", None)
    N12 = red1.conductor * red2.conductor
    same_abs = True
    for p in t1.good_primes():
        if p > X or p == ell or p not in t2.good or N12 % p == 0:
            continue
        a1, a2 = t1.good[p], t2.good[p]
        if abs(a1) != abs(a2):
            same_abs = False
        if (a1 - a2) % ell != 0 and (a1 + a2) % ell != 0:
            return JointResult("jointlySurjective", None, p)
    if same_abs:
        return JointResult("failed", "condition-iii", None)
    return JointResult("undetermined", "no witness in range", None)


def comparison_bound(red1, t1, red2, t2, cE1, cE2, X=None, window=50) -> ComparisonResult:
    """max{c(E1), c(E2), ceil(4 sqrt(p(E1,E2)))} with a joint-surjectivity spot-check."""
    if X is None:
        X = min(t1.bound, t2.bound)
    w = pair_witness(t1, t2, red1.conductor, red2.conductor, X)
    if w is None:
        raise NoWitnessBelow(X)
    root = math.isqrt(16 * w.p)
    if root * root < 16 * w.p:
        root += 1
    bound = max(cE1, cE2, root)
    checks = []
    for ell in range(bound + 1, bound + window + 1):
        if not is_prime(ell) or ell == 3:
            continue
        try:
            res = joint_surjectivity_test(red1, t1, red2, t2, ell, X)
            checks.append((ell, res.status))
        except InsufficientSamples:
            checks.append((ell, "insufficientSamples"))
    return ComparisonResult(bound, w, tuple(checks))


def epsilon_candidates(red: GlobalReduction, ell: int) -> EpsilonCandidateSet:
    """All signed moduli 2^v2 3^v3 ell^vl D; pruning, not derivation, picks the character."""
    if ell <= 3:
        raise ValueError("epsilon machinery needs ell > 3")
    D = 1
    for p, loc in sorted(red.locals.items()):
        if p >= 5 and p != ell and loc.red_type == "additive" and loc.pot_good:
            if phi_order(loc) == 4:
                D *= p
    cands = []
    for sign in (1, -1):
        for v2 in range(4):
            for v3 in (0, 1):
                for vl in (0, 1):
                    m = sign * 2**v2 * 3**v3 * ell**vl * D
                    if m != 1:
                        cands.append(m)
    return EpsilonCandidateSet(ell, D, tuple(sorted(cands)))


def prune_epsilon(cands: EpsilonCandidateSet, table: TraceTable, ell: int) -> EpsilonCandidateSet:
    """Keep moduli m with: chi_m(p) = -1 implies ell | a_p, over every good p in the table."""
    survivors = []
    counts = {}
    for m in cands.candidates:
        if m > 0 and math.isqrt(m) ** 2 == m:
            continue  # square modulus: trivial character, can never be epsilon
        tested = 0
        alive = True
        for p in table.good_primes():
            if p == ell:
                continue
            if kronecker(m, p) == -1:
                if table.good[p] % ell != 0:
                    alive = False
                    break
                tested += 1
        if alive:
            survivors.append(m)
            counts[m] = tested
    return EpsilonCandidateSet(cands.ell, cands.support, tuple(survivors), counts)


def script_l_scan(red: GlobalReduction, table: TraceTable, window, X=None) -> ScriptLReport:
    """Non-surjective ell = 1 (mod 4) in the window, with a joint divisibility witness."""
    if X is None:
        X = table.bound
    if isinstance(window, int):
        window = primes_up_to(window)
    window = sorted(set(window))
    apg = {p for p, loc in red.locals.items() if loc.red_type == "additive" and loc.pot_good}
    ells = []
    survivors = {}
    for ell in window:
        if ell % 4 != 1 or ell < 5 or ell in apg:
            continue
        try:
            rep = image_test(red, table, ell, X)
        except InsufficientSamples:
            continue
        if rep.verdict == "nonsurjectiveWitnessed" and rep.obstruction in (
            "nonsplitCartanNormalizer",
            "traceZero",
        ):
            surv = prune_epsilon(epsilon_candidates(red, ell), table, ell)
            if surv.candidates:
                ells.append(ell)
                survivors[ell] = surv.candidates
    if not ells:
        return ScriptLReport((), None, None, 1, True)
    prod = math.prod(ells)
    for p in table.good_primes():
        if p > X:
            break
        ap = table.good[p]
        if ap == 0 or p in window:
            continue
        if all(any(kronecker(m, p) == -1 for m in survivors[l]) for l in ells):
            consistent = ap % prod == 0 and prod * prod <= 4 * p
            return ScriptLReport(tuple(ells), p, ap, prod, consistent)
    raise NoCommonWitness(f"no common chi = -1 prime with a_p != 0 below {X}")
