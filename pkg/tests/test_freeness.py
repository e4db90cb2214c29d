import math
from fractions import Fraction

import pytest

from ordlat import presets
from ordlat.element import Domain
from ordlat.freeness import (
    ChainError,
    CompositionError,
    build_chain_limit,
    build_chain_successor,
    chain_torsion_bound,
    construct_staircase,
    free_from_bounded_torsion,
    multi_prime_compose,
    restrict_element,
    smooth_chain_check,
    verify_staircase,
)
from ordlat.group import Presentation, member_decompose
from ordlat.ordinal import from_int
from ordlat.space import ClopenBlock, ScatteredSpace

AXIOMS = ("positive", "ascending", "commensurable", "low-difference", "factorial-bound")


def failing_axioms(report):
    return {a.name for a in report.axioms if not a.ok}


# --- staircase axioms -----------------------------------------------------------


def test_staircase_on_generators(limitq):
    rep = verify_staircase(limitq)
    assert rep.ok
    assert tuple(a.name for a in rep.axioms) == AXIOMS
    assert rep.d == (1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880)


def test_staircase_positive_failure(limitq):
    fam = [("b_0", limitq.generator("a_0")), ("b_1", -limitq.generator("a_1"))]
    rep = verify_staircase(limitq, "q", family=fam)
    assert not rep.ok
    assert "positive" in failing_axioms(rep)


def test_staircase_ascending_failure(limitq):
    d = limitq.domain
    a1 = limitq.generator("a_1")
    fam = [("b_0", a1), ("b_1", 2 * a1)]
    rep = verify_staircase(limitq, "q", family=fam)
    assert not rep.ok
    assert "ascending" in failing_axioms(rep)


def test_staircase_commensurable_failure(limitq):
    d = limitq.domain
    # residues 1 and 1/2 + 1/6: ratio 3/2 is not an integer
    odd = d.tail("q", Fraction(1, 2), 2) + d.tail("q", Fraction(1, 6), 3)
    fam = [("b_0", limitq.generator("a_0")), ("b_1", odd)]
    rep = verify_staircase(limitq, "q", family=fam)
    assert not rep.ok
    assert "commensurable" in failing_axioms(rep)
    assert rep.d[1] is None


def test_staircase_low_difference_failure(limitq):
    d = limitq.domain
    noisy = limitq.generator("a_1") + 2 * d.e(from_int(3))
    fam = [("b_0", limitq.generator("a_0")), ("b_1", noisy)]
    rep = verify_staircase(limitq, "q", family=fam)
    assert not rep.ok
    assert failing_axioms(rep) == {"low-difference"}


def test_staircase_factorial_bound_failure(limitq):
    d = limitq.domain
    # ratio to the base is 7, which does not divide 1!
    fam = [("b_0", limitq.generator("a_0")), ("b_1", d.tail("q", Fraction(1, 7), 7))]
    rep = verify_staircase(limitq, "q", family=fam)
    assert not rep.ok
    assert failing_axioms(rep) == {"factorial-bound"}


def test_construct_staircase_shaves_noise(limitq):
    d = limitq.domain
    gens = []
    for name, g in limitq.generators[:5]:
        noise = 2 * d.e(from_int(3)) if name == "a_1" else d.zero()
        gens.append((name, g + noise))
    noisy = Presentation(name="noisy", domain=d, generators=tuple(gens))
    assert not verify_staircase(noisy).ok
    base = construct_staircase(noisy)
    rep = verify_staircase(noisy, "q", family=base.elements)
    assert rep.ok
    assert all(n.endswith("~") for n, _ in base.elements)


# --- bounded-torsion extraction ----------------------------------------------------


def test_free_from_bounded_torsion_frozen():
    d = Domain(ScatteredSpace(from_int(5)), ())
    ex, ey = d.e(from_int(1)), d.e(from_int(2))
    res = free_from_bounded_torsion([2 * ex, ey], [ex], 2)
    assert [el for el, _ in res] == [ex, ey]
    for el, combo in res:
        # combos are over [a_basis..., b_gens...]
        parts = [2 * ex, ey, ex]
        total = d.zero()
        for c, p in zip(combo, parts):
            total = total + c * p
        assert total == el


def test_free_from_bounded_torsion_modulo():
    d = Domain(ScatteredSpace(from_int(5)), ())
    ex, ez = d.e(from_int(1)), d.e(from_int(3))
    # 3*(ex + ez) = 3*ex + (3*ez): torsion modulo the subgroup, so the
    # quotient contributes nothing beyond the existing basis
    res = free_from_bounded_torsion([ex], [ex + ez], 3, modulo=(3 * ez,))
    assert [(el, combo) for el, combo in res] == [(ex, (1, 0))]


def test_free_from_bounded_torsion_unreduced_extra_rejected():
    d = Domain(ScatteredSpace(from_int(5)), ())
    ex, ey, ez = d.e(from_int(1)), d.e(from_int(2)), d.e(from_int(3))
    with pytest.raises(ValueError):
        free_from_bounded_torsion([ey], [ex + ez], 3, modulo=(ez,))


def test_chain_torsion_bound():
    assert chain_torsion_bound([0, 1, 2, 3], 2) == 2
    assert chain_torsion_bound([0, 2, 4], 3) == 2


# --- successor chains ---------------------------------------------------------------


@pytest.fixture(scope="module")
def limitq_chain(limitq):
    return build_chain_successor(limitq, 6)


def test_successor_chain_shape(limitq, limitq_chain):
    cert = limitq_chain
    assert cert.kind == "successor"
    assert cert.rank == 8
    assert len(cert.pool) == 14
    assert [p.name for p in cert.pool][:6] == ["e_0", "a_0", "e_1", "a_1", "e_2", "a_2"]
    assert len(cert.steps) == 7
    # certified targets: the spikes up to the depth, then the generators
    # whose first support index fits inside it
    want = [f"e_{r}" for r in range(7)] + [f"a_{n}" for n in range(7)]
    assert [t.name for t in cert.targets] == want


def test_successor_chain_verifies(limitq, limitq_chain):
    report = smooth_chain_check(limitq, limitq_chain)
    assert report.ok, report.explain()


def test_successor_chain_witness_bounds(limitq_chain):
    for r, step in enumerate(limitq_chain.steps):
        for w in step.torsion_witnesses:
            assert w.bound == math.factorial(r)


def test_generators_over_reference_basis(limitq):
    """a_n writes over the spikes e_0..e_6 and the deepest generator."""
    d = limitq.domain
    L = d.ladder("q")
    refs = [d.e(L.point(k)) for k in range(7)] + [limitq.generator("a_6")]
    for n in range(7):
        dec = member_decompose(refs, limitq.generator(f"a_{n}"))
        assert dec is not None
        want = tuple(
            (math.factorial(k) // math.factorial(n)) if n <= k < 6 else 0
            for k in range(7)
        ) + (math.factorial(6) // math.factorial(n),)
        assert dec.coeffs == want


def test_pool_rows_solve_over_final_basis(limitq, limitq_chain):
    basis = limitq_chain.basis_elements()
    for entry in limitq_chain.pool:
        assert member_decompose(basis, entry.element) is not None


# --- limit chains ----------------------------------------------------------------


@pytest.mark.parametrize(
    "maker, levels, rank",
    [
        (presets.limit_power, 5, 7),
        (presets.limit_power_two_weights, 4, 7),
        (presets.limit_power_integer, 4, 6),
        (presets.limit_power_jump, 3, 5),
    ],
)
def test_limit_chains_verify(maker, levels, rank):
    pres = maker()
    cert = build_chain_limit(pres, levels)
    assert cert.kind == "limit"
    assert cert.rank == rank
    report = smooth_chain_check(pres, cert)
    assert report.ok, report.explain()


def test_jump_preset_extends_by_cancellation():
    pres = presets.limit_power_jump()
    cert = build_chain_limit(pres, 3)
    assert any(n.startswith("g_") for s in cert.steps for n in s.a_extension)


def test_limit_chain_needs_power_ladder(limitq):
    with pytest.raises(ChainError):
        build_chain_limit(limitq, 3)


# --- restriction -------------------------------------------------------------------


def test_restriction_identities(two_prime):
    b1, b2 = presets.two_prime_blocks()
    u2 = two_prime.generator("u_2")
    v1 = two_prime.generator("v_1")
    e0 = two_prime.generator("e_0")
    assert restrict_element(u2, b1) == u2
    assert restrict_element(u2, b2).is_zero
    assert restrict_element(e0, b1).is_zero
    assert restrict_element(e0, b2).is_zero
    mixed = u2 + 3 * v1 + 2 * e0
    r1, r2 = restrict_element(mixed, b1), restrict_element(mixed, b2)
    assert r1 == u2
    assert r2 == 3 * v1
    assert mixed - r1 - r2 == 2 * e0


# --- composition ---------------------------------------------------------------------


def test_compose_two_prime(two_prime):
    cert = multi_prime_compose(two_prime, list(presets.two_prime_blocks()))
    assert cert.kind == "composite"
    assert cert.rank == 15
    report = smooth_chain_check(two_prime, cert)
    assert report.ok, report.explain()
    assert cert.steps[0].label == "residual"
    assert cert.pool[0].element == two_prime.generator("e_0")
    assert [t.name for t in cert.targets] == list(two_prime.names)


def test_compose_rejects_overlapping_blocks(two_prime):
    b1, b2 = presets.two_prime_blocks()
    wide = ClopenBlock(low=None, high=b2.high)
    with pytest.raises(CompositionError):
        multi_prime_compose(two_prime, [b1, wide])


def test_compose_requires_full_cover(two_prime):
    b1, _ = presets.two_prime_blocks()
    with pytest.raises(CompositionError):
        multi_prime_compose(two_prime, [b1])


def test_compose_detects_restriction_leaving_span(two_prime):
    d = two_prime.domain
    s = two_prime.generator("u_0") + two_prime.generator("v_0")
    knotted = Presentation(name="knotted", domain=d, generators=(("s", s),))
    with pytest.raises(CompositionError):
        multi_prime_compose(knotted, list(presets.two_prime_blocks()))


def test_composition_error_is_chain_error():
    assert issubclass(CompositionError, ChainError)
