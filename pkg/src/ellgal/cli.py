"""Command-line surface: reduction data, traces, image scans, family statistics."""

from __future__ import annotations

import sys
from fractions import Fraction

import click

from . import family as familymod
from . import galois, symprime
from .curve import SingularModel, WeierstrassModel, trace_table
from .localdata import InvariantViolation, global_reduce, phi_order, tate
from .localdata import NotAdditivePotGood


class ParseReject(Exception):
    pass


def _parse_curve(text):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 5:
        raise ParseReject(f"expected a1,a2,a3,a4,a6 but got {text!r}")
    try:
        coeffs = [int(p) for p in parts]
    except ValueError:
        raise ParseReject(f"non-integer coefficient in {text!r}")
    try:
        return WeierstrassModel(*coeffs)
    except SingularModel:
        raise ParseReject(f"singular model {text!r}")


def _emit(data, fmt):
    sys.stdout.buffer.write(familymod.report_emit(data, fmt))


def _guarded(fn):
    """Shared exit-code policy: 1 for parse rejects, 2 for invariant violations."""

    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ParseReject as exc:
            click.echo(f"parse error: {exc}", err=True)
            sys.exit(1)
        except InvariantViolation as exc:
            click.echo(f"invariant violation: {exc}", err=True)
            sys.exit(2)

    wrapper.__name__ = fn.__name__
    return wrapper


fmt_option = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")


@click.group()
def main():
    """Arithmetic of elliptic curves over Q: reduction, traces, mod-ell images."""


@main.command("tate")
@click.argument("curve")
@click.option("-p", "prime", type=int, required=True)
@fmt_option
@_guarded
def tate_cmd(curve, prime, fmt):
    """Local reduction data at a prime."""
    model = _parse_curve(curve)
    loc = tate(model, prime)
    data = {
        "p": loc.p,
        "kodaira": loc.kodaira,
        "conductorExponent": loc.f,
        "vDeltaMin": loc.v_delta_min,
        "reductionType": loc.red_type,
        "potentiallyGood": loc.pot_good,
    }
    if loc.red_type == "additive" and loc.pot_good:
        data["phiOrder"] = phi_order(loc)
    _emit(data, fmt)


@main.command()
@click.argument("curve")
@click.option("-X", "bound", type=int, required=True)
@fmt_option
@_guarded
def ap(curve, bound, fmt):
    """Frobenius traces a_p for p <= X."""
    model = _parse_curve(curve)
    table = trace_table(model, bound)
    red = global_reduce(model)
    _emit(
        {
            "conductor": red.conductor,
            "bound": bound,
            "good": {str(p): table.good[p] for p in table.good_primes()},
            "ramified": {str(p): table.ramified[p] for p in sorted(table.ramified)},
        },
        fmt,
    )


@main.command()
@click.argument("curve")
@click.option("-l", "ell", type=int, required=True)
@click.option("-X", "bound", type=int, required=True)
@fmt_option
@_guarded
def image(curve, ell, bound, fmt):
    """Mod-ell image certificate scan."""
    model = _parse_curve(curve)
    red = global_reduce(model)
    table = trace_table(model, bound)
    try:
        rep = galois.image_test(red, table, ell, bound)
    except galois.InsufficientSamples as exc:
        _emit({"ell": ell, "verdict": "insufficientSamples", "detail": str(exc)}, fmt)
        return
    certs = {
        k: (v if isinstance(v, bool) else v) for k, v in sorted(rep.certificates.items())
    }
    _emit(
        {
            "ell": rep.ell,
            "verdict": rep.verdict,
            "bound": rep.bound,
            "certificates": certs,
            "obstruction": rep.obstruction,
            "samples": rep.samples,
        },
        fmt,
    )


@main.command()
@click.argument("curve1")
@click.argument("curve2")
@click.option("-X", "bound", type=int, required=True)
@fmt_option
@_guarded
def pair(curve1, curve2, bound, fmt):
    """Least trace-distinguishing prime and the comparison bound for a pair."""
    m1, m2 = _parse_curve(curve1), _parse_curve(curve2)
    r1, r2 = global_reduce(m1), global_reduce(m2)
    t1, t2 = trace_table(m1, bound), trace_table(m2, bound)
    c1 = 7 if r1.semistable else 37
    c2 = 7 if r2.semistable else 37
    try:
        res = galois.comparison_bound(r1, t1, r2, t2, c1, c2, bound)
        _emit(
            {
                "witness": {"p": res.witness.p, "a1": res.witness.a1, "a2": res.witness.a2},
                "comparisonBound": res.bound,
                "spotChecks": [[ell, status] for ell, status in res.spot_checks],
            },
            fmt,
        )
    except galois.NoWitnessBelow:
        _emit({"witness": None, "noWitnessBelow": bound}, fmt)


@main.command()
@click.argument("curve")
@click.option("-l", "ell", type=int, required=True)
@click.option("-X", "bound", type=int, required=True)
@fmt_option
@_guarded
def epsilon(curve, ell, bound, fmt):
    """Quadratic character candidates for a non-surjective ell, after pruning."""
    model = _parse_curve(curve)
    red = global_reduce(model)
    table = trace_table(model, bound)
    cands = galois.epsilon_candidates(red, ell)
    pruned = galois.prune_epsilon(cands, table, ell)
    _emit(
        {
            "ell": ell,
            "support": cands.support,
            "candidates": list(cands.candidates),
            "survivors": list(pruned.candidates),
            "testedCounts": {str(m): c for m, c in sorted(pruned.tested.items())},
        },
        fmt,
    )


def _ingest_checked(path, input_format):
    if input_format is None:
        input_format = "jsonLines" if str(path).endswith((".jsonl", ".json")) else "csvAinvariants"
    return familymod.ingest(path, input_format)


@main.command("family")
@click.argument("file", type=click.Path(exists=True))
@click.option("--filter", "tag", type=click.Choice(["all", "ss", "add12", "cm"]), default="all")
@click.option("-N", "ceiling", type=int, required=True)
@click.option("--input-format", type=click.Choice(["csvAinvariants", "jsonLines"]), default=None)
@fmt_option
@_guarded
def family_cmd(file, tag, ceiling, input_format, fmt):
    """Conductor-ordered family built from a curve corpus file."""
    corpus = _ingest_checked(file, input_format)
    tagmap = {"all": "all", "ss": "semistable", "add12": "additiveCond12", "cm": "cmOnly"}
    fam = familymod.build_family(corpus, tagmap[tag], ceiling)
    _emit(
        {
            "filter": fam.filter_tag,
            "ceiling": fam.ceiling,
            "records": [
                {"label": r.label, "conductor": r.reduction.conductor} for r in fam.records
            ],
            "fingerprintCollisions": [list(g) for g in fam.collisions],
            "rejects": [[row, msg] for row, msg in corpus.rejects],
        },
        fmt,
    )
    if corpus.rejects:
        sys.exit(1)


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("-X", "bound", type=int, required=True)
@click.option("--sample", "cap", type=int, default=1000)
@click.option("--seed", type=int, default=0)
@click.option("--input-format", type=click.Choice(["csvAinvariants", "jsonLines"]), default=None)
@fmt_option
@_guarded
def pairs(file, bound, cap, seed, input_format, fmt):
    """Pair witness statistics over a corpus."""
    corpus = _ingest_checked(file, input_format)
    fam = familymod.build_family(corpus, "all", 10**18)
    _emit(familymod.pair_statistics(fam, bound, cap, seed), fmt)
    if corpus.rejects:
        sys.exit(1)


@main.command("cm-census")
@click.option("-N", "ceiling", type=int, required=True)
@fmt_option
@_guarded
def cm_census_cmd(ceiling, fmt):
    """Census of CM curves by conductor ceiling."""
    _emit(familymod.cm_census(ceiling), fmt)


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--pair", "labels", required=True, help="two corpus labels, comma separated")
@click.option("-X", "scale", type=float, required=True)
@click.option("--input-format", type=click.Choice(["csvAinvariants", "jsonLines"]), default=None)
@fmt_option
@_guarded
def symsum(file, labels, scale, input_format, fmt):
    """Smooth diagonal and cross sums of symmetric-square coefficients."""
    corpus = _ingest_checked(file, input_format)
    want = [s.strip() for s in labels.split(",")]
    if len(want) != 2:
        raise ParseReject("--pair needs exactly two labels")
    by_label = {r.label: r for r in corpus.records}
    missing = [w for w in want if w not in by_label]
    if missing:
        raise ParseReject(f"labels not in corpus: {missing}")
    r1, r2 = by_label[want[0]], by_label[want[1]]
    bound = int(2 * scale) + 1
    t1 = trace_table(r1.reduction.minimal_model, bound)
    t2 = trace_table(r2.reduction.minimal_model, bound)
    psi = symprime.bump_psi()
    coprime_to = r1.reduction.conductor * r2.reduction.conductor
    s_val = symprime.smooth_sum_S(t1, scale, psi, coprime_to)
    h_val = symprime.smooth_sum_H(t1, t2, scale, psi, coprime_to)
    _emit(
        {"labels": want, "X": scale, "S": s_val, "H": h_val, "coprimeTo": coprime_to},
        fmt,
    )
    if corpus.rejects:
        sys.exit(1)


@main.command()
@click.argument("delta")
@fmt_option
@_guarded
def cdelta(delta, fmt):
    """The exponent constant c(delta), exactly."""
    try:
        value = Fraction(delta)
    except (ValueError, ZeroDivisionError):
        raise ParseReject(f"not a rational number: {delta!r}")
    try:
        result = symprime.c_delta(value)
    except ValueError as exc:
        raise ParseReject(str(exc))
    _emit({"delta": str(value), "value": str(result)}, fmt)


if __name__ == "__main__":
    main()
