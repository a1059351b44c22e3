"""Satisfiability, validity, and model checking over the point semantics."""

import itertools
import random

from hypothesis import given
from hypothesis import strategies as st

from substal.frames import point_frame
from substal.logic import (FALSE, TRUE, Model, equation_valid, model_check,
                           prop_atoms, prop_sat, satisfiable, unfold, valid)
from substal.monoid import apply_point, generators
from substal.setalg import point_index, small_algebra
from substal.terms import (Compl, Diag, Join, Meet, One, Sub, Var, Zero,
                           equation_holds_exhaustive, modality_count, parse,
                           parse_equation, sigma_axioms, variables)


# ---------------------------------------------------------------- unfolding

def test_unfold_follows_the_point_action():
    t = parse("p0 & s[0|1] ~p0", 2)
    assert unfold(t, (0, 1), 2) == (
        "and",
        ("atom", (0, (0, 1))),
        ("not", ("atom", (0, (1, 1)))),
    )
    # on the diagonal the replacement is invisible, so both conjuncts
    # land on the same atom and contradict each other
    assert unfold(t, (0, 0), 2) == (
        "and",
        ("atom", (0, (0, 0))),
        ("not", ("atom", (0, (0, 0)))),
    )


def test_unfold_constants_and_diagonals():
    assert unfold(One(), (0, 1), 2) == TRUE
    assert unfold(Zero(), (0, 1), 2) == FALSE
    assert unfold(Diag(0, 1), (0, 1), 2, "full_diagonal") == FALSE
    assert unfold(Diag(0, 1), (0, 0), 2, "full_diagonal") == TRUE
    assert unfold(Diag(1, 1), (0, 1), 2, "full_diagonal") == TRUE


@given(
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
    st.sampled_from(generators(3, "full")),
    st.sampled_from(generators(3, "full")),
)
def test_unfold_words_move_the_point_left_to_right(q, g1, g2):
    t = Sub(g1, Sub(g2, Var(0)))
    moved = apply_point(apply_point(q, g1.tr(3)), g2.tr(3))
    assert unfold(t, q, 3) == ("atom", (0, moved))


# ------------------------------------------------------- propositional core

def test_prop_sat_examples():
    a = ("atom", (0, (0, 0)))
    b = ("atom", (1, (0, 0)))
    assert prop_sat(("and", a, ("not", a))) is None
    asg = prop_sat(("and", a, ("not", b)))
    assert asg[(0, (0, 0))] is True
    assert asg[(1, (0, 0))] is False
    assert prop_sat(FALSE) is None
    assert prop_sat(TRUE) == {}


def _eval_prop(f, asg):
    kind = f[0]
    if kind == "true":
        return True
    if kind == "false":
        return False
    if kind == "atom":
        return asg[f[1]]
    if kind == "not":
        return not _eval_prop(f[1], asg)
    if kind == "and":
        return _eval_prop(f[1], asg) and _eval_prop(f[2], asg)
    return _eval_prop(f[1], asg) or _eval_prop(f[2], asg)


def _random_prop(rng, budget):
    if budget <= 1 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.8:
            return ("atom", rng.randrange(4))
        return TRUE if roll < 0.9 else FALSE
    if rng.random() < 0.3:
        return ("not", _random_prop(rng, budget - 1))
    cut = rng.randint(1, budget - 1)
    op = "and" if rng.random() < 0.5 else "or"
    return (op, _random_prop(rng, cut), _random_prop(rng, budget - cut))


def test_prop_sat_matches_truth_tables():
    rng = random.Random(2718)
    for _ in range(300):
        f = _random_prop(rng, 6)
        atoms = sorted(prop_atoms(f))
        brute = any(
            _eval_prop(f, dict(zip(atoms, bits)))
            for bits in itertools.product((False, True), repeat=len(atoms))
        )
        asg = prop_sat(f)
        assert (asg is not None) == brute
        if asg is not None:
            # the partial assignment must satisfy f however it is extended
            for fill in (False, True):
                total = {a: fill for a in atoms}
                total.update(asg)
                assert _eval_prop(f, total)


# ------------------------------------------------------------ model checking

def test_model_check_examples():
    frame = point_frame(2, 2, "full")
    w = point_index((0, 1), 2)
    model = Model(frame, {0: 1 << w})
    assert model_check(model, parse("p0", 2), w)
    # the replacement moves (0, 1) to (1, 1), which is outside V(p0)
    assert not model_check(model, parse("s[0|1] p0", 2), w)
    assert model_check(model, One(), 0)
    assert model_check(model, One(), 3)


def test_model_check_unknown_variable_is_empty():
    frame = point_frame(2, 2, "full")
    model = Model(frame, {})
    assert not model_check(model, parse("p7", 2), 0)
    assert model_check(model, parse("~p7", 2), 0)


# ---------------------------------------------------------------- truth lemma

def _random_term(rng, n, mode, budget, gens):
    if budget <= 1 or rng.random() < 0.25:
        roll = rng.random()
        if mode == "full_diagonal" and n >= 2 and roll < 0.15:
            return Diag(rng.randrange(n), rng.randrange(n))
        if roll < 0.8:
            return Var(rng.randrange(3))
        return One() if roll < 0.9 else Zero()
    roll = rng.random()
    if budget == 2 or roll < 0.55:
        if roll < 0.38 and gens:
            return Sub(rng.choice(gens), _random_term(rng, n, mode, budget - 1, gens))
        return Compl(_random_term(rng, n, mode, budget - 1, gens))
    cut = rng.randint(1, budget - 2)
    op = Meet if roll < 0.8 else Join
    return op(
        _random_term(rng, n, mode, cut, gens),
        _random_term(rng, n, mode, budget - 1 - cut, gens),
    )


def test_truth_lemma_on_point_frames():
    """model_check agrees with the propositional truth of the unfolding.

    The atom (v, p) of the unfolded formula is read as "p lies in V(v)".
    """
    rng = random.Random(31337)
    frames = {}
    gens = {}
    for _ in range(10_000):
        n = rng.randint(1, 3)
        k = rng.randint(1, 3)
        mode = rng.choice(("full", "full_diagonal"))
        key = (n, k, mode)
        if key not in frames:
            frames[key] = point_frame(n, k, mode)
            gens[key] = generators(n, mode)
        term = _random_term(rng, n, mode, rng.randint(1, 8), gens[key])
        worlds = k ** n
        valuation = {v: rng.randrange(1 << worlds) for v in variables(term)}
        member = {
            v: {p for p in range(worlds) if mask >> p & 1}
            for v, mask in valuation.items()
        }
        q = tuple(rng.randrange(k) for _ in range(n))
        asg = {
            atom: point_index(atom[1], k) in member.get(atom[0], set())
            for atom in prop_atoms(unfold(term, q, n, mode))
        }
        expected = _eval_prop_total(unfold(term, q, n, mode), asg)
        got = model_check(Model(frames[key], valuation), term, point_index(q, k))
        assert got == expected


def _eval_prop_total(f, asg):
    kind = f[0]
    if kind == "true":
        return True
    if kind == "false":
        return False
    if kind == "atom":
        return asg[f[1]]
    if kind == "not":
        return not _eval_prop_total(f[1], asg)
    if kind == "and":
        return _eval_prop_total(f[1], asg) and _eval_prop_total(f[2], asg)
    return _eval_prop_total(f[1], asg) or _eval_prop_total(f[2], asg)


# -------------------------------------------------------------- satisfiable

def test_satisfiable_needs_a_split_point():
    ok, wit = satisfiable(parse("p0 & s[0|1] ~p0", 2), 2)
    assert ok
    assert wit["partition"] == [0, 1]
    assert wit["k"] == 2
    assert wit["point"] == [0, 1]
    assert wit["world"] == point_index((0, 1), 2)
    assert wit["valuation"] == {"p0": [point_index((0, 1), 2)]}
    assert len(wit["touched"]) == 2
    # over a collapsed point the same formula is contradictory
    assert prop_sat(unfold(parse("p0 & s[0|1] ~p0", 2), (0, 0), 2)) is None


def test_satisfiable_examples():
    ok, wit = satisfiable(parse("p0 & ~(s[0,1] s[0,1] p0)", 2), 2)
    assert not ok and wit is None

    ok, wit = satisfiable(parse("~d(0,1)", 2, "full_diagonal"), 2,
                          "full_diagonal")
    assert ok
    assert wit["partition"] == [0, 1]

    ok, wit = satisfiable(Zero(), 3)
    assert not ok and wit is None


def test_satisfiable_witnesses_check_out():
    rng = random.Random(777)
    seen_sat = 0
    for _ in range(200):
        n = rng.randint(1, 3)
        mode = rng.choice(("full", "full_diagonal"))
        gens = generators(n, mode)
        term = _random_term(rng, n, mode, rng.randint(1, 9), gens)
        ok, wit = satisfiable(term, n, mode)
        if not ok:
            assert wit is None
            continue
        seen_sat += 1
        assert len(wit["touched"]) <= modality_count(term) + 1
        valuation = {
            int(name[1:]): sum(1 << p for p in points)
            for name, points in wit["valuation"].items()
        }
        model = Model(point_frame(n, wit["k"], mode), valuation)
        assert model_check(model, term, wit["world"])
    assert seen_sat > 100


# ------------------------------------------------------------------ validity

def test_valid_examples():
    ok, wit = valid(parse("p0 | ~p0", 2), 2)
    assert ok and wit is None

    ok, wit = valid(parse("s[0,1] s[0,1] p0 -> p0", 2), 2)
    assert ok and wit is None

    ok, wit = valid(parse("p0", 2), 2)
    assert not ok and wit is not None


def test_equation_valid_examples():
    ok, wit = equation_valid(parse_equation("1 = 1", 2), 2)
    assert ok and wit is None

    ok, wit = equation_valid(parse_equation("p0 = s[0,1] p0", 2), 2)
    assert not ok
    assert wit["partition"] == [0, 1]

    ok, wit = equation_valid(
        parse_equation("s[0|1] p0 = s[0|1] s[0|1] p0", 2), 2)
    assert ok and wit is None


def test_equation_validity_agrees_with_exhaustive_checks():
    """Validity matches brute-force evaluation over the square algebras."""
    corpus = list(sigma_axioms(2, "full"))
    corpus.extend([
        parse_equation("p0 = s[0,1] p0", 2),
        parse_equation("p0 & p1 = p1 & p0", 2),
        parse_equation("p0 = ~p0", 2),
        parse_equation("s[1|0] p0 = s[0,1] s[0|1] s[0,1] p0", 2),
    ])
    algebras = [small_algebra(2, 1), small_algebra(2, 2)]
    for eq in corpus:
        ok, _ = equation_valid(eq, 2)
        brute = all(equation_holds_exhaustive(alg, eq) for alg in algebras)
        assert ok == brute
