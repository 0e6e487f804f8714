"""Wedge-preactions, semidirect products, rigid congruences, germ quotients."""

import pytest

from sectional.actions import (
    germ_quotient,
    quotient_semigroupoid,
    semidirect_product,
    trivial_action,
    validate_preaction,
    validate_rigid_congruence,
)
from sectional.semigroupoids import are_isomorphic, direct_product, is_groupoid
from sectional.standard import (
    cyclic2,
    pair_groupoid,
    semilattice2,
    trivial_monoid,
    unit_groupoid,
)
from sectional.validation import StructureError, ValidationReport, must

from structures import semilattice_on_points_action


@pytest.fixture
def germ_example():
    actor = semilattice2()
    space = unit_groupoid(("x", "y"))
    theta = must(validate_preaction(semilattice_on_points_action(), actor, space.base))
    return actor, space, theta


class TestValidatePreaction:
    def test_running_example_classification(self, germ_example):
        _actor, _space, theta = germ_example
        assert theta.is_partial and theta.is_global and theta.is_associative

    def test_broken_inverse_bookkeeping(self):
        actor = semilattice2()
        space = unit_groupoid(("x", "y"))
        report = validate_preaction(
            {"1": {"dom": ["1x", "1y"], "img": ["1x", "1y"]},
             "e": {"dom": ["1x"], "img": ["1y"]}},
            actor, space.base,
        )
        assert isinstance(report, ValidationReport)
        assert report.has("inverse-compatibility")

    def test_trivial_action_is_global(self):
        theta = trivial_action(semilattice2(), pair_groupoid().base)
        assert theta.is_global and theta.is_partial and theta.is_associative

    def test_global_implies_partial_on_corpus(self, germ_example):
        _actor, _space, theta = germ_example
        translations = validate_preaction(
            {"u": {"dom": ["10", "11"], "img": ["10", "11"]},
             "g": {"dom": ["10", "11"], "img": ["11", "10"]}},
            cyclic2(), unit_groupoid(("0", "1")).base,
        )
        for action in (theta, translations):
            if action.is_global:
                assert action.is_partial

    def test_extension_property_enumerated(self, germ_example):
        # theta_s(theta_t(x)) = theta_st(x) whenever the left side is defined
        _actor, _space, theta = germ_example
        base = theta.actor.base
        for s, t in base.composable:
            st = base.prod[s][t]
            for x in theta.dom(t):
                tx = theta.apply(t, x)
                if tx in theta.maps[s]:
                    assert theta.apply(st, x) == theta.apply(s, tx)

    def test_ideal_property_witness(self):
        # dom(theta) misses the absorbing element of a two-element null piece
        raw = {
            "id": "N",
            "vertices": ["*"],
            "arrows": [
                {"id": "z", "src": "*", "rng": "*"},
                {"id": "n", "src": "*", "rng": "*"},
            ],
            "prod": [["z", "z", "z"], ["z", "n", "z"],
                     ["n", "z", "z"], ["n", "n", "z"]],
        }
        from sectional.semigroupoids import validate_semigroupoid
        space = must(validate_semigroupoid(raw))
        report = validate_preaction(
            {"1": {"dom": ["n"], "img": ["n"]}, "e": {"dom": [], "img": []}},
            semilattice2(), space,
        )
        assert isinstance(report, ValidationReport)
        assert report.has("ideal-property")


class TestSemidirectProduct:
    def test_running_example_table(self, germ_example):
        _actor, _space, theta = germ_example
        sp = semidirect_product(theta)
        assert sp.semigroupoid.arrow_names == ("(1,1x)", "(1,1y)", "(e,1x)")
        i_1x = sp.index[(0, 0)]
        i_ex = sp.index[(1, 0)]
        assert sp.semigroupoid.prod[i_1x][i_ex] == i_ex

    def test_translation_action_gives_action_groupoid(self):
        theta = must(validate_preaction(
            {"u": {"dom": ["10", "11"], "img": ["10", "11"]},
             "g": {"dom": ["10", "11"], "img": ["11", "10"]}},
            cyclic2(), unit_groupoid(("0", "1")).base,
        ))
        sp = semidirect_product(theta)
        sgpd = sp.semigroupoid
        assert sgpd.n_arrows == 4
        assert is_groupoid(sgpd).ok
        # oracle: evaluate the defining formula directly on all pairs
        for i, (s, a) in enumerate(sp.pairs):
            for j, (t, b) in enumerate(sp.pairs):
                tb = theta.apply(t, b)
                composable = (
                    theta.actor.base.is_composable(s, t)
                    and theta.space.src[a] == theta.space.rng[tb]
                )
                if not composable:
                    assert sgpd.prod[i][j] == -1
                    continue
                st = theta.actor.base.prod[s][t]
                value = theta.apply(
                    theta.actor.inv[t], theta.space.prod[a][tb]
                )
                assert sp.pairs[sgpd.prod[i][j]] == (st, value)

    def test_trivial_action_gives_direct_product(self):
        space = pair_groupoid().base
        theta = trivial_action(cyclic2(), space)
        sp = semidirect_product(theta)
        assert are_isomorphic(
            sp.semigroupoid, direct_product(cyclic2().base, space)
        )

    def test_src_rng_formulas(self, germ_example):
        _actor, _space, theta = germ_example
        sp = semidirect_product(theta)
        sgpd = sp.semigroupoid
        base = theta.actor.base
        space = theta.space
        for i, (s, a) in enumerate(sp.pairs):
            src_name = f"({base.vertex_names[base.src[s]]},{space.vertex_names[space.src[a]]})"
            image = theta.apply(s, a)
            rng_name = f"({base.vertex_names[base.rng[s]]},{space.vertex_names[space.rng[image]]})"
            assert sgpd.vertex_names[sgpd.src[i]] == src_name
            assert sgpd.vertex_names[sgpd.rng[i]] == rng_name


class TestRigidCongruence:
    def test_identity_partition_accepts(self, germ_example):
        _actor, _space, theta = germ_example
        sp = semidirect_product(theta)
        cong = must(validate_rigid_congruence(
            [[a] for a in sp.semigroupoid.arrow_names], sp.semigroupoid
        ))
        quotient, projection = quotient_semigroupoid(cong)
        assert are_isomorphic(quotient, sp.semigroupoid)
        assert projection.rigid

    def test_germ_partition_accepts(self, germ_example):
        _actor, _space, theta = germ_example
        sp = semidirect_product(theta)
        cong = must(validate_rigid_congruence(
            [["(1,1x)", "(e,1x)"], ["(1,1y)"]], sp.semigroupoid
        ))
        quotient, _ = quotient_semigroupoid(cong)
        assert are_isomorphic(quotient, unit_groupoid(("x", "y")).base)

    def test_source_mismatch_rejected(self, germ_example):
        _actor, _space, theta = germ_example
        sp = semidirect_product(theta)
        report = validate_rigid_congruence(
            [["(1,1x)", "(1,1y)"], ["(e,1x)"]], sp.semigroupoid
        )
        assert isinstance(report, ValidationReport)
        assert report.has("source-range-mismatch")

    def test_total_congruence_on_group(self):
        z2 = cyclic2().base
        cong = must(validate_rigid_congruence([["u", "g"]], z2))
        quotient, _ = quotient_semigroupoid(cong)
        assert are_isomorphic(quotient, trivial_monoid().base)

    def test_product_incompatibility_witness(self):
        # a three-element monoid where identifying 1 with a is not compatible
        raw = {
            "id": "M",
            "vertices": ["*"],
            "arrows": [
                {"id": "1", "src": "*", "rng": "*"},
                {"id": "a", "src": "*", "rng": "*"},
                {"id": "z", "src": "*", "rng": "*"},
            ],
            "prod": [
                ["1", "1", "1"], ["1", "a", "a"], ["1", "z", "z"],
                ["a", "1", "a"], ["a", "a", "z"], ["a", "z", "z"],
                ["z", "1", "z"], ["z", "a", "z"], ["z", "z", "z"],
            ],
        }
        from sectional.semigroupoids import validate_semigroupoid
        m = must(validate_semigroupoid(raw))
        report = validate_rigid_congruence([["1", "a"], ["z"]], m)
        assert isinstance(report, ValidationReport)
        assert report.has("product-incompatibility")

    def test_partition_must_cover(self):
        z2 = cyclic2().base
        report = validate_rigid_congruence([["u"]], z2)
        assert report.has("structural")


class TestGermQuotient:
    def test_running_example_collapses_to_two_points(self, germ_example):
        _actor, _space, theta = germ_example
        germ = germ_quotient(theta)
        assert germ.quotient.n_arrows == 2
        assert germ.groupoid_check.ok
        assert are_isomorphic(germ.quotient, unit_groupoid(("x", "y")).base)

    def test_group_action_has_trivial_germ_relation(self):
        theta = must(validate_preaction(
            {"u": {"dom": ["10", "11"], "img": ["10", "11"]},
             "g": {"dom": ["10", "11"], "img": ["11", "10"]}},
            cyclic2(), unit_groupoid(("0", "1")).base,
        ))
        germ = germ_quotient(theta)
        assert germ.quotient.n_arrows == germ.semidirect.semigroupoid.n_arrows
        assert are_isomorphic(germ.quotient, germ.semidirect.semigroupoid)

    def test_empty_domain_means_no_collapse(self):
        actor = semilattice2()
        space = unit_groupoid(("x", "y"))
        theta = must(validate_preaction(
            {"1": {"dom": ["1x", "1y"], "img": ["1x", "1y"]},
             "e": {"dom": [], "img": []}},
            actor, space.base,
        ))
        germ = germ_quotient(theta)
        assert germ.quotient.n_arrows == germ.semidirect.semigroupoid.n_arrows

    def test_non_groupoid_space_refused(self, germ_example):
        actor, _space, _theta = germ_example
        theta = trivial_action(actor, semilattice2().base)
        out = germ_quotient(theta)
        assert isinstance(out, ValidationReport)
        assert out.has("space-not-groupoid")

    def test_partial_action_on_groupoid_gives_groupoid(self, germ_example):
        _actor, _space, theta = germ_example
        assert theta.is_partial
        germ = germ_quotient(theta)
        assert germ.groupoid_check.ok


class TestSemidirectRefusal:
    def test_idempotent_acting_by_swap_breaks_extension_law(self):
        # theta_1 swapping x and y under the idempotent 1 contradicts
        # theta_11 = theta_1 theta_1
        actor = semilattice2()
        space = unit_groupoid(("x", "y")).base
        candidate = validate_preaction(
            {"1": {"dom": ["1x", "1y"], "img": ["1y", "1x"]},
             "e": {"dom": [], "img": []}},
            actor, space,
        )
        assert isinstance(candidate, ValidationReport)
        assert candidate.has("extension-law")

    def test_nonassociative_flag_refuses_with_witness(self, germ_example):
        _actor, _space, theta = germ_example
        theta.is_associative = False
        theta.associativity_witness = ("1", "1", "1", "1x", "1x", "1x")
        with pytest.raises(StructureError) as err:
            semidirect_product(theta)
        assert err.value.report.has("not-associative")
        assert err.value.report.first().witness == ("1", "1", "1", "1x", "1x", "1x")
