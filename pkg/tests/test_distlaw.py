from fractions import Fraction as F

import pytest

from effectlayers.distlaw import (
    LawRefusedError,
    QuotientLaw,
    build_quotient_law,
    build_sigma_law,
    compose,
    extend_to_rho,
    verify_distlaw,
    verify_monad,
)
from effectlayers.monads import Bound, fin_distribution, fin_powerset
from effectlayers.normal_forms import quotient_monad
from effectlayers.preservation import check_preservation, profile_monad
from effectlayers.theories import (
    monoid_theory,
    semilattice_theory,
    two_monoids_absorption_theory,
)

GRID3 = (F(0), F(1, 2), F(1))
B = Bound(max_word_len=2, max_set_size=2, max_term_depth=2, prob_grid=GRID3)
X = ("a", "b")
FRAGS = [(X, B)]


def monoid_over(T):
    S = quotient_monad(monoid_theory())
    rho = extend_to_rho(build_sigma_law(S.theory.signature, T))
    verdicts = [
        check_preservation(T, e, profile_monad(T, X, B), FRAGS, theory=S.theory)
        for e in S.theory.equations
    ]
    return build_quotient_law(S, T, rho, FRAGS, verdicts=verdicts)


class TestLambdaValues:
    def test_word_of_sets_becomes_set_of_words(self):
        law, report = monoid_over(fin_powerset())
        assert report.ok
        sv = (frozenset({"a"}), frozenset({"b", "c"}))  # a word of T-values
        assert law.apply(sv) == frozenset({("a", "b"), ("a", "c")})

    def test_unit_word_goes_to_unit(self):
        law, _ = monoid_over(fin_powerset())
        assert law.apply(()) == fin_powerset().unit(())


class TestVerification:
    @pytest.mark.parametrize("T", [fin_powerset(), fin_distribution()], ids=lambda t: t.name)
    def test_monoid_law_satisfies_all_axioms(self, T):
        law, _ = monoid_over(T)
        reports = verify_distlaw(law, FRAGS, cap=60)
        assert {r.axiom for r in reports} == {
            "DL1",
            "DL2",
            "DL3",
            "DL4",
            "NATURALITY",
        }
        assert all(r.ok for r in reports), [r.axiom for r in reports if not r.ok]

    def test_two_monoids_law_under_distribution(self):
        T = fin_distribution()
        S = quotient_monad(two_monoids_absorption_theory())
        rho = extend_to_rho(build_sigma_law(S.theory.signature, T))
        verdicts = [
            check_preservation(T, e, profile_monad(T, X, B), FRAGS, theory=S.theory)
            for e in S.theory.equations
        ]
        law, report = build_quotient_law(S, T, rho, FRAGS, verdicts=verdicts)
        assert report.ok
        reports = verify_distlaw(law, FRAGS, cap=40)
        assert all(r.ok for r in reports), [r.axiom for r in reports if not r.ok]

    def test_corrupted_law_is_caught(self):
        law, _ = monoid_over(fin_powerset())

        class Corrupted(QuotientLaw):
            def apply(self, sv):
                out = QuotientLaw.apply(self, sv)
                # silently drop the empty word from every output set
                return frozenset(w for w in out if w != ())

        bad = Corrupted(law.inner, law.outer, law.rho)
        reports = verify_distlaw(bad, FRAGS, cap=60)
        assert any(not r.ok for r in reports)
        failed = next(r for r in reports if not r.ok)
        assert failed.counterexample is not None


class TestRefusal:
    def test_semilattice_over_powerset_is_refused(self):
        T = fin_powerset()
        S = quotient_monad(semilattice_theory())
        rho = extend_to_rho(build_sigma_law(S.theory.signature, T))
        verdicts = [
            check_preservation(T, e, profile_monad(T, X, B), FRAGS, theory=S.theory)
            for e in S.theory.equations
        ]
        with pytest.raises(LawRefusedError) as exc:
            build_quotient_law(S, T, rho, FRAGS, verdicts=verdicts)
        assert "idem(+)" in str(exc.value)
        assert exc.value.verdicts


class TestComposite:
    def test_composite_monad_laws(self):
        T = fin_powerset()
        law, _ = monoid_over(T)
        M = compose(T, law.inner, law).monad
        reports = verify_monad(M, FRAGS)
        assert all(r.ok for r in reports), [r.axiom for r in reports if not r.ok]

    def test_composite_unit(self):
        T = fin_powerset()
        law, _ = monoid_over(T)
        M = compose(T, law.inner, law).monad
        assert M.unit("a") == frozenset({("a",)})
