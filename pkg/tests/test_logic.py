import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from ctxlogic.errors import InvalidInput
from ctxlogic.geometry import Ray, projector_from_ray
from ctxlogic.lattice import Context, Downset, all_downsets, build_poset, context_from_decomposition, is_downset
from ctxlogic.logic import (
    And,
    Atom,
    FormulaSyntaxError,
    Implies,
    KripkeModel,
    Not,
    Or,
    border,
    check_heyting_homomorphism,
    eval_formula,
    excluded_middle_witness,
    forces,
    heyting_and,
    heyting_implies,
    heyting_not,
    heyting_or,
    interior,
    parse_formula,
    random_formula,
)
from ctxlogic.sheaf import LocalSection, extended_valuation, find_global_section, principal_section

A, B, C = Atom("A"), Atom("B"), Atom("C")


def rp(*entries):
    return projector_from_ray(Ray(entries))


def chain():
    """The 2-chain: bottom "W#0" below the 2-atom context "T"."""
    return build_poset([context_from_decomposition([rp(1, 0), rp(0, 1)], "T")])


class TestParser:
    @pytest.mark.parametrize(
        "text, expected",
        [
            ("A", A),
            ("~A & B -> C", Implies(And(Not(A), B), C)),
            ("A -> B -> C", Implies(A, Implies(B, C))),
            ("A | B & C", Or(A, And(B, C))),
            ("A & B & C", And(And(A, B), C)),
            ("~~A", Not(Not(A))),
            ("(A -> B) -> C", Implies(Implies(A, B), C)),
            ("¬A ∧ B → C ∨ A", Implies(And(Not(A), B), Or(C, A))),
            ("  A_1  ", Atom("A_1")),
        ],
    )
    def test_parses(self, text, expected):
        assert parse_formula(text) == expected

    @pytest.mark.parametrize(
        "text, offset",
        [("A &", 3), ("A B", 2), ("(A", 2), ("A # B", 2), ("", 0), ("->A", 0), ("A)", 1)],
    )
    def test_errors_carry_offset(self, text, offset):
        with pytest.raises(FormulaSyntaxError) as info:
            parse_formula(text)
        assert info.value.position == offset

    @settings(max_examples=200, deadline=None)
    @given(st.randoms(use_true_random=False), st.integers(0, 6))
    def test_print_parse_round_trip(self, rnd, depth):
        phi = random_formula(rnd, ["A", "B", "C"], depth)
        assert parse_formula(str(phi)) == phi


class TestForcing:
    def test_atom_at_its_context(self):
        p = chain()
        m = KripkeModel(p, principal_section(p, "T", 0), {"A": "T"})
        assert forces(m, "T", A)

    def test_trivial_forces_everything_bound(self, model_dim3):
        _, p, m = model_dim3
        for name in m.bindings:
            assert forces(m, p.bottom_id, Atom(name))

    def test_negation_with_empty_section(self, three_bases):
        _, p = three_bases
        m = KripkeModel(p, LocalSection.empty(p), {"A": "B2"})
        for w in p.ids:
            # clause 5 by enumeration over (w]
            expected = all(b not in extended_valuation(m.section, "B2") for b in p.below(w))
            assert forces(m, w, Not(A)) == expected == True

    def test_unknown_atom(self, model_dim3):
        _, p, m = model_dim3
        with pytest.raises(InvalidInput):
            forces(m, "B1", Atom("Q"))
        with pytest.raises(InvalidInput):
            eval_formula(m, Atom("Q"))

    def test_unknown_context(self, model_dim3):
        _, _, m = model_dim3
        with pytest.raises(InvalidInput):
            forces(m, "nowhere", A)

    def test_binding_outside_poset_rejected(self, three_bases):
        _, p = three_bases
        outsider = context_from_decomposition([rp(1, 1, 1), rp(1, -1, 0), rp(1, 1, -2)])
        with pytest.raises(InvalidInput):
            KripkeModel(p, principal_section(p, "B1", 0), {"A": outsider})


class TestEval:
    def test_atom_is_extended_valuation(self, model_dim3):
        _, p, m = model_dim3
        for name, cid in m.bindings.items():
            assert eval_formula(m, Atom(name)) == extended_valuation(m.section, cid)

    def test_contradiction_empty(self, model_dim3):
        _, _, m = model_dim3
        for name in m.bindings:
            assert len(eval_formula(m, And(Atom(name), Not(Atom(name))))) == 0

    def test_excluded_middle_can_fail(self, model_dim3):
        _, p, m = model_dim3
        value = eval_formula(m, Or(C, Not(C)))
        # exhaustive forcing over all contexts
        expected = {w for w in p.ids if forces(m, w, C) or all(not forces(m, b, C) for b in p.below(w))}
        assert value.members == expected
        assert border(eval_formula(m, C)) and len(value) < len(p)


class TestHeytingOps:
    def test_and_or_units(self, three_bases):
        _, p = three_bases
        s = p.down_closure(["B1"])
        assert heyting_and(s, p.full()) == s
        assert heyting_or(s, p.empty()) == s

    def test_union_of_principals(self):
        z = context_from_decomposition([rp(1, 0), rp(0, 1)], "Z")
        x = context_from_decomposition([rp(1, 1), rp(1, -1)], "X")
        p = build_poset([z, x])
        assert len(p) == 3
        u = heyting_or(p.down_closure(["Z"]), p.down_closure(["X"]))
        assert u.members == {p.bottom_id, "Z", "X"}

    def test_implication_examples(self):
        p = chain()
        bot = p.bottom_id
        full, lo = p.full(), p.downset({bot})
        assert heyting_implies(lo, lo) == full
        assert heyting_implies(p.empty(), lo) == full
        assert heyting_implies(full, lo).members == {bot}

    def test_negation_examples(self):
        p = chain()
        assert heyting_not(p.empty()) == p.full()
        assert heyting_not(p.full()) == p.empty()
        assert heyting_not(p.downset({p.bottom_id})) == p.empty()

    def test_border_examples(self):
        p = chain()
        assert border(p.empty()) == frozenset()
        assert border(p.full()) == frozenset()
        assert border(p.downset({p.bottom_id})) == {"T"}

    def test_mismatched_posets(self):
        with pytest.raises(InvalidInput):
            heyting_and(chain().full(), chain().full())


def _random_downset(p, rng):
    picks = [cid for cid in p.ids if rng.random() < 0.3]
    return p.down_closure(picks)


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_heyting_properties(three_bases, rnd):
    _, p = three_bases
    a, b, c = (_random_downset(p, rnd) for _ in range(3))
    assert (heyting_and(a, b) <= c) == (a <= heyting_implies(b, c))
    neg = heyting_not(a)
    assert neg == heyting_implies(a, p.empty())
    assert neg == interior(p, set(p.ids) - a.members)
    assert a <= heyting_not(neg)
    d = border(a)
    assert not (a.members & neg.members) and not (a.members & d) and not (neg.members & d)
    assert a.members | neg.members | d == set(p.ids)
    for s in (heyting_and(a, b), heyting_or(a, b), heyting_implies(a, b), neg):
        assert is_downset(p, s.members)


def test_all_downsets_residuation_exhaustive():
    p = chain()
    downs = list(all_downsets(p))
    assert len(downs) == 3
    for a, b, c in product(downs, repeat=3):
        assert (heyting_and(a, b) <= c) == (a <= heyting_implies(b, c))


class TestHomomorphismCheck:
    def test_singleton(self, model_dim3):
        _, _, m = model_dim3
        rep = check_heyting_homomorphism(m, [A])
        assert rep.ok and rep.checked == 4

    def test_random_sample(self, model_dim3):
        _, _, m = model_dim3
        rng = random.Random(3)
        phis = [random_formula(rng, ["A", "B", "C"], 4) for _ in range(50)]
        assert check_heyting_homomorphism(m, phis).violations == []

    def test_corrupted_evaluator_caught(self, model_dim3):
        _, p, m = model_dim3

        def broken(model, phi):
            value = eval_formula(model, phi)
            if isinstance(phi, Not):
                return Downset(p, value.members | {p.bottom_id}, check=False)
            return value

        rep = check_heyting_homomorphism(m, [A, C], evaluator=broken)
        assert not rep.ok and {v[0] for v in rep.violations} == {"not"}


class TestExcludedMiddle:
    def test_witness_for_unreached_atom(self, three_bases):
        _, p = three_bases
        m = KripkeModel(p, principal_section(p, "B1", 0), {"A": "B1", "C": "B3"})
        name, cid = excluded_middle_witness(m)
        assert not forces(m, cid, Or(Atom(name), Not(Atom(name))))
        assert not forces(m, cid, Atom(name)) and not forces(m, cid, Not(Atom(name)))

    def test_unreached_maximal_is_witness(self):
        a = context_from_decomposition([rp(1, 0, 0), rp(0, 1, 0), rp(0, 0, 1)], "A")
        h = context_from_decomposition([rp(1, 1, 1), rp(1, -1, 0), rp(1, 1, -2)], "H")
        p = build_poset([a, h])
        m = KripkeModel(p, principal_section(p, "A", 0), {"X": "H"})
        value = eval_formula(m, Atom("X"))
        assert value.members == {p.bottom_id}
        assert "H" in border(value)
        assert excluded_middle_witness(m)[0] == "X"

    def test_absent_when_all_borders_empty(self):
        w = context_from_decomposition([rp(1, 0, 0), rp(0, 1, 0), rp(0, 0, 1)], "W")
        p = build_poset([w])
        glob = find_global_section(p).section
        m = KripkeModel(p, glob, {"A": "W"})
        assert border(eval_formula(m, A)) == frozenset()
        assert excluded_middle_witness(m) is None

    def test_absent_without_bindings(self, model_dim3):
        _, p, m = model_dim3
        assert excluded_middle_witness(KripkeModel(p, m.section, {})) is None
