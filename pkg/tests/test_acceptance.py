"""The eight primary acceptance criteria, one test each.

Every criterion is a function returning ``(ok, detail)`` so the module can
also be run directly (``python3 tests/test_acceptance.py``) and print one
PASS/FAIL line per criterion without pytest.
"""

import hashlib
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from renormhopf import algebra
from renormhopf.diffeo import (FormalDiffeo, birkhoff_diffeo, birkhoff_diffeo_hopf, compose,
                               invert_diffeo, random_loop, random_rational_diffeo)
from renormhopf.graphs import GraphInstance
from renormhopf.hopf import (BPHZ, birkhoff, convolve, inverse_character, perturbed_character,
                             toy_character, toy_graph_character)
from renormhopf.laurent import LaurentSeries, ParamPoly
from renormhopf.lie import grading_Y, theta
from renormhopf.resolvents import (DegenerateConfiguration, DepressedCubic, DepressedQuartic,
                                   circumcircle_meet, covariant_resolvent, cubic_residual,
                                   pair_sums, perturbed_pentagon, quartic_residual,
                                   regular_pentagon, resolvent_cubic, solve_cubic, solve_quartic,
                                   star_check)
from renormhopf.rg import (LocalityError, beta_function, check_mu_independence, ft_limit,
                           gamma_minus_from_beta, residue)
from renormhopf.trees import LEAF, TREES

TREE_DEGREE = 6
GRAPH_LOOPS = 3
RG_DEGREE = 5
DIFFEO_ORDER = 4  # g + ... + a_4 g^9

from conftest import ACCEPTANCE_LINES, SESSION_START

_CACHE: dict = {}


def _tree_pair():
    if "tree" not in _CACHE:
        _CACHE["tree"] = birkhoff(toy_character())
    return _CACHE["tree"]


def _graphs():
    if "graphs" not in _CACHE:
        inst = GraphInstance()
        _CACHE["graphs"] = (inst, toy_graph_character(inst))
    return _CACHE["graphs"]


def _hopf_axioms(inst, monomials):
    bad = []
    for m in monomials:
        if algebra.coassociativity_defect(inst, m):
            bad.append(("coassociativity", m))
        if algebra.counit_defect(inst, m):
            bad.append(("counit", m))
        if algebra.antipode_defect(inst, m) != ({}, {}):
            bad.append(("antipode", m))
    return bad


# -- criteria ---------------------------------------------------------------------

def criterion_1():
    """Hopf axioms on forests of degree <= 6 and on the graph closure (<= 3 loops)."""
    forests = TREES.monomials_upto(TREE_DEGREE)
    inst, _ = _graphs()
    graph_monos = inst.monomials_upto(GRAPH_LOOPS)
    bad = _hopf_axioms(TREES, forests) + _hopf_axioms(inst, graph_monos)
    detail = f"{len(forests)} forests, {len(graph_monos)} graph monomials, {len(bad)} defects"
    return not bad, detail


def criterion_2():
    """BPHZ counterterms and renormalised values equal the Birkhoff parts exactly."""
    checked, bad = 0, []
    cases = [(toy_character(), TREES.generators_upto(TREE_DEGREE))]
    inst, graph_toy = _graphs()
    cases.append((graph_toy, inst.generators_upto(GRAPH_LOOPS)))
    for f, gens in cases:
        pair, scheme = birkhoff(f), BPHZ(f)
        for g in gens:
            checked += 1
            if scheme.counterterm(g) != pair.negative.gen(g) or scheme.renormalized(g) != pair.positive.gen(g):
                bad.append(f.instance.render(g))
    return not bad, f"{checked} generators, mismatches: {bad or 'none'}"


def criterion_3():
    """Reconstruction of phi from its parts and multiplicativity of both parts."""
    pair = _tree_pair()
    recon = convolve(inverse_character(pair.negative), pair.positive)
    bad = [m for m in TREES.monomials_upto(TREE_DEGREE)
           if not recon(m).agrees_with(pair.original(m))]
    gens = TREES.generators_upto(TREE_DEGREE)
    products = [p for p in algebra.all_products(gens, 3)
                if len(p) >= 2 and TREES.mono_degree(p) <= TREE_DEGREE]
    for m in products:
        neg_prod = LaurentSeries.one()
        pos_prod = LaurentSeries.one()
        for g in m:
            neg_prod = neg_prod * pair.negative.gen(g)
            pos_prod = pos_prod * pair.positive.gen(g)
        # the negative parts are exact; positive parts carry a truncation, so
        # equality is coefficientwise on the common known range
        if pair.negative_on(m) != neg_prod or not pair.positive_on(m).agrees_with(pos_prod):
            bad.append(m)
    return not bad, f"reconstruction on {len(TREES.monomials_upto(TREE_DEGREE))} monomials, " \
                    f"multiplicativity on {len(products)} products, {len(bad)} defects"


def criterion_4():
    """Every negative-part coefficient is free of L; a perturbed character is not."""
    pair = _tree_pair()
    witness = check_mu_independence(pair, TREES.generators_upto(TREE_DEGREE))
    perturbed = perturbed_character(toy_character(), LEAF, LaurentSeries({-1: ParamPoly.var("L")}, None))
    control = check_mu_independence(birkhoff(perturbed), TREES.generators_upto(3))
    ok = witness == 0 and control >= 1
    return ok, f"max L-degree {witness} (want 0), perturbed control {control} (want >= 1)"


def criterion_5():
    """Scaling covariance, pole cancellation, group law, beta = Y Res, beta reconstruction."""
    pair = _tree_pair()
    gens = TREES.generators_upto(RG_DEGREE)
    L, T, S = (ParamPoly.var(x) for x in "Lts")
    toy = pair.original
    shifted = theta("t", toy)
    failures = []
    if any(not shifted.gen(g).agrees_with(toy.gen(g).substitute("L", L + T)) for g in gens):
        failures.append("covariance")
    try:
        ft, fs, fts = ft_limit(pair, "t"), ft_limit(pair, "s"), ft_limit(pair, T + S)
        law = convolve(ft, fs)
        if any(law((g,)) != fts.gen(g) for g in gens):
            failures.append("group law")
    except LocalityError as exc:
        failures.append(f"pole survives: {exc}")
    beta, res = beta_function(pair), residue(pair)
    y_res = grading_Y(res)
    if any(beta.gen(g) != y_res.gen(g) for g in gens):
        failures.append("beta = Y Res")
    rebuilt = gamma_minus_from_beta(beta)
    if any(rebuilt.gen(g) != pair.negative.gen(g) for g in gens):
        failures.append("negative part from beta")
    return not failures, f"{len(gens)} generators, failures: {failures or 'none'}"


def criterion_6():
    """Group axioms and opposed Birkhoff decomposition of diffeomorphisms through g^9."""
    rng = random.Random(20240601)
    e = FormalDiffeo.identity(DIFFEO_ORDER)
    failures = []
    for _ in range(20):
        f, h, k = (random_rational_diffeo(rng, DIFFEO_ORDER) for _ in range(3))
        if compose(compose(f, h), k).coeffs != compose(f, compose(h, k)).coeffs:
            failures.append("associativity")
        if not (compose(f, e).coeffs == compose(e, f).coeffs == f.coeffs):
            failures.append("identity")
        inv = invert_diffeo(f)
        if not (compose(f, inv).coeffs == compose(inv, f).coeffs == e.coeffs):
            failures.append("inverse")
    for _ in range(5):
        loop = random_loop(rng, DIFFEO_ORDER)
        split = birkhoff_diffeo(loop)
        if not split.reconstruct().equals(loop):
            failures.append("reconstruction")
        if not all(c.is_zero() or c.is_pure_pole() for c in split.negative.coeffs):
            failures.append("negative part not pure pole")
        if not all(c.is_pole_free() for c in split.positive.coeffs):
            failures.append("positive part has a pole")
        if not all(isinstance(c, Fraction) for c in split.renormalized_coupling().coeffs):
            failures.append("renormalised coupling not a rational constant")
        other = birkhoff_diffeo_hopf(loop)
        if not (other.negative.equals(split.negative) and other.positive.equals(split.positive)):
            failures.append("Hopf-algebra route disagrees")
    return not failures, f"20 group triples, 5 random loops, failures: {sorted(set(failures)) or 'none'}"


def _frac(rng):
    return Fraction(rng.randint(-20, 20), rng.randint(1, 9))


def criterion_7():
    """Resolvent identities, root recovery, covariance, circle meets and the star."""
    rng = random.Random(7)
    failures = []
    worst_residual = 0.0
    for _ in range(100):
        a, b, c = _frac(rng), _frac(rng), _frac(rng)
        roots = [a, b, c, -a - b - c]
        qt = DepressedQuartic.from_roots(roots)
        al, be, ga = pair_sums(roots)
        if resolvent_cubic(qt) != (1, -(al + be + ga), al * be + al * ga + be * ga, -al * be * ga):
            failures.append("resolvent identity")
        worst_residual = max(worst_residual, *(quartic_residual(qt, x) for x in solve_quartic(qt)))
        cu = DepressedCubic.from_roots([a, b, -a - b])
        worst_residual = max(worst_residual, *(cubic_residual(cu, x) for x in solve_cubic(cu).roots))
    if worst_residual >= 1e-9:
        failures.append(f"root residual {worst_residual:.2e}")
    covariance_cases = 0
    while covariance_cases < 100:
        lam, z = _frac(rng), _frac(rng)
        pts = [_frac(rng) for _ in range(4)]
        if lam == 0 or pts[0] + pts[3] == pts[1] + pts[2]:
            continue
        if covariant_resolvent(*(lam * p + z for p in pts)) != lam * covariant_resolvent(*pts) + z:
            failures.append("affine covariance")
        covariance_cases += 1
    meets, worst_meet = 0, 0.0
    while meets < 100:
        pts = [complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(4)]
        try:
            diff = abs(circumcircle_meet(*pts) - covariant_resolvent(*pts, tol=1e-6))
        except DegenerateConfiguration:
            continue
        worst_meet = max(worst_meet, diff)
        meets += 1
    if worst_meet >= 1e-9:
        failures.append(f"circle meet {worst_meet:.2e}")
    worst_star = max(star_check(*perturbed_pentagon(rng)).max_deviation for _ in range(100))
    regular = star_check(*regular_pentagon()).max_deviation
    if worst_star >= 1e-9 or regular >= 1e-12:
        failures.append("star concyclicity")
    return not failures, (f"residual {worst_residual:.1e}, meet {worst_meet:.1e}, "
                          f"star {worst_star:.1e} (regular {regular:.1e}), failures: {failures or 'none'}")


DIGEST_SCRIPT = r"""
import hashlib, io, contextlib
from renormhopf.cli import main
buf = io.StringIO()
with contextlib.redirect_stdout(buf):
    for argv in (["rg-report", "--degree", "4", "--format", "json"],
                 ["birkhoff", "--degree", "4", "--format", "json"],
                 ["coproduct", "nested2"],
                 ["bracket", "triangle", "bubble", "--instance", "graphs"],
                 ["diffeo-birkhoff", "--degree", "3", "--format", "json"],
                 ["star-check", "--random", "10", "--seed", "3"]):
        main(argv)
print(hashlib.sha256(buf.getvalue().encode()).hexdigest())
"""


def _digest(hash_seed: str) -> str:
    env = dict(os.environ, PYTHONHASHSEED=hash_seed)
    out = subprocess.run([sys.executable, "-c", DIGEST_SCRIPT], env=env, check=True,
                         capture_output=True, text=True)
    return out.stdout.strip()


def criterion_8(started: float):
    """Identical output across interpreter runs with different hash seeds; suite under 60 s."""
    digests = {_digest(seed) for seed in ("0", "12345")}
    elapsed = time.perf_counter() - started
    ok = len(digests) == 1 and elapsed < 60
    return ok, f"{len(digests)} distinct output digest(s) over 2 runs, elapsed {elapsed:.1f} s (limit 60 s)"


# -- pytest wiring -------------------------------------------------------------------

def _record(k, ok, detail, seconds, limit=None):
    timing = f"{seconds:.1f} s" + (f" (limit {limit} s)" if limit else "")
    ACCEPTANCE_LINES.append(f"CRITERION {k}: {'PASS' if ok else 'FAIL'} [{timing}] {detail}")


def _run(k, fn, limit=None):
    start = time.perf_counter()
    ok, detail = fn()
    seconds = time.perf_counter() - start
    within = limit is None or seconds < limit
    if not within:
        detail += f"; took {seconds:.1f} s"
    _record(k, ok and within, detail, seconds, limit)
    return ok and within, detail


def test_criterion_1_hopf_axioms():
    ok, detail = _run(1, criterion_1, limit=10)
    assert ok, detail


def test_criterion_2_bphz_equals_birkhoff():
    ok, detail = _run(2, criterion_2)
    assert ok, detail


def test_criterion_3_reconstruction_and_multiplicativity():
    ok, detail = _run(3, criterion_3)
    assert ok, detail


def test_criterion_4_scale_independence():
    ok, detail = _run(4, criterion_4)
    assert ok, detail


def test_criterion_5_rg_suite():
    ok, detail = _run(5, criterion_5, limit=30)
    assert ok, detail


def test_criterion_6_diffeomorphisms():
    ok, detail = _run(6, criterion_6)
    assert ok, detail


def test_criterion_7_resolvents():
    ok, detail = _run(7, criterion_7, limit=5)
    assert ok, detail


@pytest.mark.suite_budget
def test_criterion_8_determinism_and_budget(pytestconfig):
    started = pytestconfig.stash[SESSION_START]
    ok, detail = _run(8, lambda: criterion_8(started))
    assert ok, detail


if __name__ == "__main__":
    start = time.perf_counter()
    results = [
        _run(1, criterion_1, 10), _run(2, criterion_2), _run(3, criterion_3), _run(4, criterion_4),
        _run(5, criterion_5, 30), _run(6, criterion_6), _run(7, criterion_7, 5),
        _run(8, lambda: criterion_8(start)),
    ]
    for line in ACCEPTANCE_LINES:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
