"""Action frames, complex algebras, duality, and amalgamation."""

import itertools
import random

import pytest

from substal.frames import (
    ComplexAlgebra,
    Equivariant,
    Frame,
    atom_frame,
    check_equivariant,
    complex_algebra,
    disjoint_union,
    frame_check,
    frame_from_json,
    frame_to_json,
    insep_zigzag,
    point_frame,
    random_coherent_frame,
    superamalgam,
)
from substal.setalg import Subalgebra, generate_subalgebra, small_algebra
from substal.monoid import generators, repl, swap
from substal.terms import equation_holds_exhaustive, sigma_axioms, word_pair


def test_point_frames_pass_frame_check():
    for n, k, mode in [(2, 2, "full"), (2, 3, "full"), (3, 2, "full"),
                       (2, 2, "transpositions"), (2, 2, "replacements"),
                       (2, 2, "full_diagonal"), (3, 2, "full_diagonal")]:
        report = frame_check(point_frame(n, k, mode))
        assert report.ok, (n, k, mode, report.failures)
        assert report.pairs_checked > 0


def test_trivial_one_world_frame_passes():
    syms = generators(2, "full")
    frame = Frame(2, "full", 1, {g: (0,) for g in syms})
    assert frame_check(frame).ok


def test_two_world_constant_replacements_frame_fails():
    # swap exchanges the worlds, each replacement is constant; composing a
    # replacement with the swap then disagrees with the collapsed composite
    action = {swap(0, 1): (1, 0), repl(0, 1): (0, 0), repl(1, 0): (1, 1)}
    report = frame_check(Frame(2, "full", 2, action))
    assert not report.ok
    assert any(kind == "coherence" for kind, *_ in report.failures)


def test_frame_constructor_validation():
    syms = generators(2, "full")
    with pytest.raises(ValueError):
        Frame(2, "full", 2, {syms[0]: (1, 0)})  # missing generators
    with pytest.raises(ValueError):
        Frame(2, "full", 2, {g: (0, 5) for g in syms})  # world out of range
    with pytest.raises(ValueError):
        # full_diagonal frames must mark every diagonal
        Frame(2, "full_diagonal", 1, {g: (0,) for g in syms})


def _act_of_word(frame, word):
    tab = tuple(range(frame.num_worlds))
    for g in word:
        gt = frame.act(g)
        tab = tuple(gt[w] for w in tab)
    return tab


def _word_equations():
    out = []
    for eq in sigma_axioms(2, "full"):
        if eq.tag.startswith(("subst:", "perm:")):
            out.append(word_pair(eq))
    assert all(wp is not None for wp in out)
    return out


def test_frame_check_matches_axiom_satisfaction_exhaustively():
    """Cross-validation on every frame with at most 3 worlds (n = 2): the
    coherence verdict coincides with all substitution axioms holding in
    the complex algebra (the Boolean and endomorphism groups hold in any
    preimage algebra, so the word-pair groups decide the rest)."""
    syms = generators(2, "full")
    word_eqs = _word_equations()
    accepted = rejected = 0
    for m in (1, 2, 3):
        tables = list(itertools.product(range(m), repeat=m))
        for combo in itertools.product(tables, repeat=len(syms)):
            frame = Frame(2, "full", m, dict(zip(syms, combo)))
            ok = frame_check(frame).ok
            axioms_ok = all(
                _act_of_word(frame, w1) == _act_of_word(frame, w2)
                for w1, w2 in word_eqs
            )
            assert ok == axioms_ok, (m, combo)
            accepted += ok
            rejected += not ok
    assert accepted and rejected  # both verdicts actually occur


def test_word_pair_criterion_grounded_in_equation_checking():
    """On every 2-world frame, equality of the word-pair action tables is
    the same thing as the axioms holding element-by-element in Cm."""
    syms = generators(2, "full")
    word_eqs = _word_equations()
    axioms = sigma_axioms(2, "full")
    for combo in itertools.product([(0, 0), (0, 1), (1, 0), (1, 1)],
                                   repeat=len(syms)):
        frame = Frame(2, "full", 2, dict(zip(syms, combo)))
        alg = ComplexAlgebra(frame)
        by_tables = all(
            _act_of_word(frame, w1) == _act_of_word(frame, w2)
            for w1, w2 in word_eqs
        )
        by_elements = all(equation_holds_exhaustive(alg, eq) for eq in axioms)
        assert by_tables == by_elements, combo


def test_complex_algebra_matches_small_algebra():
    frame = point_frame(2, 2, "full")
    cm = ComplexAlgebra(frame)
    direct = small_algebra(2, 2, "full")
    assert cm.one == direct.one
    rng = random.Random(4)
    for _ in range(50):
        x, y = rng.getrandbits(4), rng.getrandbits(4)
        assert cm.meet(x, y) == direct.meet(x, y)
        assert cm.compl(x) == direct.compl(x)
        for g in generators(2, "full"):
            assert cm.subst(g, x) == direct.subst(g, x)


def test_complex_algebra_preimage_laws():
    cm = ComplexAlgebra(point_frame(2, 2, "full"))
    for g in generators(2, "full"):
        assert cm.subst(g, cm.zero) == cm.zero
        assert cm.subst(g, cm.one) == cm.one
    singleton = complex_algebra(
        Frame(2, "full", 1, {g: (0,) for g in generators(2, "full")}))
    assert singleton.size() == 2
    for g in generators(2, "full"):
        for x in (0, 1):
            assert singleton.subst(g, x) == x

    dm = ComplexAlgebra(point_frame(2, 2, "full_diagonal"))
    assert dm.diag(0, 0) == dm.one
    assert dm.diag(0, 1) == small_algebra(2, 2, "full_diagonal").diag(0, 1)


def test_atom_frame_recovers_point_frame():
    frame = point_frame(2, 2, "full")
    dual, atoms = atom_frame(ComplexAlgebra(frame))
    assert atoms == [1 << w for w in range(4)]
    for g in generators(2, "full"):
        assert dual.act(g) == frame.act(g)

    dframe = point_frame(2, 2, "full_diagonal")
    ddual, _ = atom_frame(ComplexAlgebra(dframe))
    assert ddual.diag_mask(0, 1) == dframe.diag_mask(0, 1)


def test_atom_frame_of_two_element_algebra():
    full = ComplexAlgebra(point_frame(2, 2, "full"))
    two = Subalgebra(full, generate_subalgebra(full, []))
    dual, atoms = atom_frame(two)
    assert dual.num_worlds == 1
    assert atoms == [two.one]
    assert ComplexAlgebra(dual).size() == 2


def test_equivariant_maps():
    frame = point_frame(2, 2, "full")
    ident = Equivariant(frame, frame, tuple(range(4)))
    assert check_equivariant(ident) == []
    collapse = Equivariant(frame, point_frame(2, 1, "full"), (0, 0, 0, 0))
    assert check_equivariant(collapse) == []
    bad = Equivariant(frame, frame, (1, 0, 2, 3))
    assert check_equivariant(bad) != []


def test_equivariant_preimage_commutes_with_subst():
    base = point_frame(2, 2, "full")
    union, offsets = disjoint_union([base, base])
    label = tuple(w % base.num_worlds for w in range(union.num_worlds))
    assert check_equivariant(Equivariant(union, base, label)) == []

    big, small = ComplexAlgebra(union), ComplexAlgebra(base)

    def pre(x):
        out = 0
        for w, lw in enumerate(label):
            if x >> lw & 1:
                out |= 1 << w
        return out

    rng = random.Random(12)
    for _ in range(40):
        x = rng.getrandbits(4)
        for g in generators(2, "full"):
            assert pre(small.subst(g, x)) == big.subst(g, pre(x))


def test_disjoint_union():
    one = point_frame(2, 1, "full")
    four = point_frame(2, 2, "full")
    union, offsets = disjoint_union([one, four])
    assert union.num_worlds == 5
    assert offsets == [0, 1]
    assert frame_check(union).ok
    assert len(ComplexAlgebra(union).atoms()) == 5

    alone, offs = disjoint_union([four])
    assert alone.num_worlds == 4 and offs == [0]
    assert alone.action == four.action
    with pytest.raises(ValueError):
        disjoint_union([])
    with pytest.raises(ValueError):
        disjoint_union([one, point_frame(3, 1, "full")])


def test_insep_zigzag_identity_labels():
    frame = point_frame(2, 2, "full")
    labels = list(range(4))
    prod, worlds = insep_zigzag(frame, frame, labels, labels)
    assert worlds == [(w, w) for w in range(4)]
    assert frame_check(prod).ok
    for g in generators(2, "full"):
        # the diagonal copies the base action
        assert prod.act(g) == frame.act(g)


def test_insep_zigzag_constant_labels_give_full_product():
    frame = point_frame(2, 2, "full")
    labels = [0, 0, 0, 0]
    prod, worlds = insep_zigzag(frame, frame, labels, labels)
    assert len(worlds) == 16
    assert frame_check(prod).ok


def test_insep_zigzag_rejects_non_dual_labels():
    frame = point_frame(2, 2, "full")
    # label worlds inconsistently with the action: (0,0) and (1,1) share a
    # label but their swap images do not pair up with anything
    with pytest.raises(ValueError):
        insep_zigzag(frame, frame, [0, 1, 2, 0], [0, 1, 1, 2])


def test_superamalgam_identity_degenerates_to_base():
    alg = ComplexAlgebra(point_frame(2, 2, "full"))
    ident = lambda a: a
    D, m, k, report = superamalgam(alg, alg, alg, ident, ident)
    assert report["pass"], report
    assert report["worlds"] == 4
    for b in alg.elements():
        assert m(b) == k(b)


def test_superamalgam_over_proper_subalgebra():
    full = ComplexAlgebra(point_frame(2, 2, "full"))
    two = Subalgebra(full, generate_subalgebra(full, []))
    ident = lambda a: a
    D, m, k, report = superamalgam(two, full, full, ident, ident)
    assert report["pass"], report
    assert report["square_commutes"]


def test_superamalgam_rejects_non_embeddings():
    alg = ComplexAlgebra(point_frame(2, 2, "full"))
    squash = lambda a: alg.zero
    with pytest.raises(ValueError):
        superamalgam(alg, alg, alg, squash, lambda a: a)


def test_random_coherent_frames():
    rng = random.Random(31)
    for mode in ("full", "transpositions", "replacements"):
        for _ in range(8):
            frame = random_coherent_frame(rng.choice([2, 3]), mode,
                                          max_worlds=8, rng=rng)
            assert frame.num_worlds <= 8
            assert frame.mode == mode
            assert frame_check(frame).ok
    with pytest.raises(ValueError):
        random_coherent_frame(2, "full_diagonal", rng=rng)


def test_frame_json_round_trip():
    for frame in (point_frame(2, 2, "full"),
                  point_frame(2, 2, "full_diagonal"),
                  random_coherent_frame(2, "full", rng=random.Random(8))):
        data = frame_to_json(frame)
        assert set(data) >= {"n", "mode", "worlds", "action"}
        back = frame_from_json(data)
        assert back.action == frame.action
        assert back.num_worlds == frame.num_worlds
        assert back.diag == frame.diag
