// Finitely supported permutations, the window dichotomy, the inductive
// witness construction against enumerated conjugators, and the prefix-fixing
// extraction. Frozen permutation values come from the deterministic class
// and window enumeration orders.

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "treesub/finitary.hpp"

namespace treesub {
namespace {

TEST(Perm, ParseComposeInvertRoundTrip) {
    FinitaryPerm p = FinitaryPerm::parse("(1 3)(2 5 4)");
    EXPECT_EQ(p.cycles_str(), "(1 3)(2 5 4)");
    EXPECT_EQ(p.apply(1), 3);
    EXPECT_EQ(p.apply(3), 1);
    EXPECT_EQ(p.apply(2), 5);
    EXPECT_EQ(p.apply(5), 4);
    EXPECT_EQ(p.apply(4), 2);
    EXPECT_EQ(p.apply(7), 7);
    EXPECT_EQ(p.s(), 5);
    EXPECT_EQ(p.min_moved(), 1);
    EXPECT_EQ(p.inverse().cycles_str(), "(1 3)(2 4 5)");
    EXPECT_TRUE((p * p.inverse()).is_identity());

    FinitaryPerm q = FinitaryPerm::parse("(1 2)");
    EXPECT_EQ((q * p).cycles_str(), "(1 3 2 5 4)");
    EXPECT_EQ((p * q).cycles_str(), "(1 5 4 2 3)");

    EXPECT_TRUE(FinitaryPerm::parse("e").is_identity());
    EXPECT_TRUE(FinitaryPerm::parse("()").is_identity());
    EXPECT_EQ(FinitaryPerm().cycles_str(), "e");
    EXPECT_EQ(FinitaryPerm().s(), 0);

    EXPECT_THROW(FinitaryPerm::parse("(1 1)"), InputError);
    EXPECT_THROW(FinitaryPerm::parse("(3)"), InputError);
    EXPECT_THROW(FinitaryPerm::parse("(0 1)"), InputError);
    EXPECT_THROW(FinitaryPerm::parse("1 2"), InputError);
    EXPECT_THROW(FinitaryPerm::from_pairs({{1, 2}}), InputError);
    EXPECT_THROW(FinitaryPerm::from_pairs({{1, 2}, {2, 3}}), InputError);
}

TEST(Perm, ParityFollowsCycleLengths) {
    EXPECT_FALSE(FinitaryPerm::parse("(1 2)").is_even());
    EXPECT_TRUE(FinitaryPerm::parse("(1 2 3)").is_even());
    EXPECT_TRUE(FinitaryPerm::parse("(1 2)(3 4)").is_even());
    EXPECT_FALSE(FinitaryPerm::parse("(1 3)(2 5 4)").is_even());
    EXPECT_TRUE(FinitaryPerm().is_even());
}

TEST(Oracles, WindowEnumerationsAgreeWithMembership) {
    SubgroupOracle a0 = oracle_alternating();
    std::vector<FinitaryPerm> a4 = a0.window_elements(4);
    EXPECT_EQ(a4.size(), 12u);
    for (const FinitaryPerm& p : a4) {
        EXPECT_TRUE(p.is_even());
        EXPECT_TRUE(a0.contains(p));
        EXPECT_TRUE(a0.contains(p.inverse()));
    }
    for (const FinitaryPerm& p : a4)
        for (const FinitaryPerm& q : a4) {
            EXPECT_TRUE(a0.contains(p * q));
        }

    SubgroupOracle s0 = oracle_symmetric();
    EXPECT_EQ(s0.window_elements(4).size(), 24u);
    EXPECT_EQ(s0.description, "S0inf");

    SubgroupOracle cyc = oracle_cyclic(FinitaryPerm::parse("(1 2)(3 4)"));
    EXPECT_EQ(cyc.window_elements(8).size(), 2u);
    EXPECT_EQ(cyc.window_elements(3).size(), 1u);
    EXPECT_TRUE(cyc.contains(FinitaryPerm::parse("(1 2)(3 4)")));
    EXPECT_FALSE(cyc.contains(FinitaryPerm::parse("(1 2)")));
    EXPECT_EQ(cyc.description, "<(1 2)(3 4)>");

    SubgroupOracle hodd = oracle_fixing_evens();
    std::vector<FinitaryPerm> h7 = hodd.window_elements(7);
    EXPECT_EQ(h7.size(), 24u); // permutations of {1, 3, 5, 7}
    for (const FinitaryPerm& p : h7) {
        EXPECT_TRUE(hodd.contains(p));
        EXPECT_EQ(p.apply(2), 2);
        EXPECT_EQ(p.apply(4), 4);
    }
    EXPECT_FALSE(hodd.contains(FinitaryPerm::parse("(1 2)")));
    EXPECT_TRUE(hodd.contains(FinitaryPerm::parse("(1 3)(5 7)")));
}

TEST(Dichotomy, BoundedSupportGivesTrivialTailPastIt) {
    SubgroupOracle cyc = oracle_cyclic(FinitaryPerm::parse("(1 2)"));
    EXPECT_EQ(dichotomy_check(cyc, 3, 8), Dichotomy::trivial_tail);
    EXPECT_EQ(dichotomy_check(cyc, 1, 8), Dichotomy::neither);
    EXPECT_EQ(to_string(Dichotomy::trivial_tail), "trivial-tail");
}

TEST(Dichotomy, AlternatingAndSymmetricContainTheirTails) {
    EXPECT_EQ(dichotomy_check(oracle_alternating(), 1, 7),
              Dichotomy::contains_alternating_tail);
    EXPECT_EQ(dichotomy_check(oracle_alternating(), 3, 7),
              Dichotomy::contains_alternating_tail);
    EXPECT_EQ(dichotomy_check(oracle_symmetric(), 1, 7),
              Dichotomy::contains_alternating_tail);
}

TEST(Dichotomy, OddSupportedSubgroupIsNeitherAtEveryCutoff) {
    SubgroupOracle hodd = oracle_fixing_evens();
    for (int l = 1; l <= 8; ++l) {
        EXPECT_EQ(dichotomy_check(hodd, l, 16), Dichotomy::neither) << "l = " << l;
    }
    // The window reasons: an odd pair above any cutoff stays inside, while
    // the generating 3-cycle on consecutive points moves an even number.
    EXPECT_TRUE(hodd.contains(FinitaryPerm::parse("(9 11)")));
    EXPECT_FALSE(hodd.contains(FinitaryPerm::parse("(8 9 10)")));
}

TEST(Dichotomy, ValidatesTheWindow) {
    SubgroupOracle cyc = oracle_cyclic(FinitaryPerm::parse("(1 2)"));
    EXPECT_THROW(dichotomy_check(cyc, 8, 8), InputError);
    EXPECT_THROW(dichotomy_check(cyc, -1, 8), InputError);
}

TEST(Enumeration, FirstElementsAreStable) {
    std::vector<FinitaryPerm> first = enumerate_finitary(6);
    ASSERT_EQ(first.size(), 6u);
    EXPECT_EQ(first[0].cycles_str(), "e");
    EXPECT_EQ(first[1].cycles_str(), "(1 2)");
    EXPECT_EQ(first[2].cycles_str(), "(2 3)");
    EXPECT_EQ(first[3].cycles_str(), "(1 2 3)");
    EXPECT_EQ(first[4].cycles_str(), "(1 3 2)");
    EXPECT_EQ(first[5].cycles_str(), "(1 3)");
}

TEST(WitnessStep, FirstStepMatchesTheSmallWindowExample) {
    WitnessStep st = witness_step(oracle_fixing_evens(), {}, FinitaryPerm(), 14);
    EXPECT_EQ(st.l, 1);
    EXPECT_EQ(st.cycle_type, (std::vector<int>{2}));
    EXPECT_EQ(st.rho.cycles_str(), "(1 3)");
    EXPECT_EQ(st.delta.cycles_str(), "(1 2)");
    EXPECT_EQ(st.delta.apply(2), 1); // moves an even point, so it left the subgroup
    EXPECT_EQ(st.gamma.cycles_str(), "(2 3)");
    EXPECT_FALSE(st.trivial_branch);
    EXPECT_TRUE(st.first_bullet);
    EXPECT_TRUE(st.second_bullet);
    EXPECT_TRUE(st.commutes_with_history);
    EXPECT_EQ((st.gamma * st.rho * st.gamma.inverse()).cycles_str(), st.delta.cycles_str());
}

TEST(WitnessStep, FiveStepsAgainstEnumeratedConjugators) {
    SubgroupOracle hodd = oracle_fixing_evens();
    std::vector<FinitaryPerm> kappas = enumerate_finitary(5);
    std::vector<WitnessStep> chain;
    std::vector<long> cutoffs;
    for (std::size_t n = 0; n < 5; ++n) {
        WitnessStep st = witness_step(hodd, chain, kappas[n], 24);
        cutoffs.push_back(st.l);
        EXPECT_FALSE(st.trivial_branch);
        EXPECT_TRUE(st.first_bullet);
        EXPECT_TRUE(st.second_bullet);
        EXPECT_TRUE(st.commutes_with_history);
        EXPECT_TRUE(hodd.contains(st.rho));
        EXPECT_FALSE(hodd.contains(st.delta));
        EXPECT_EQ(st.gamma_step * st.rho * st.gamma_step.inverse(), st.delta);
        chain.push_back(st);
    }
    EXPECT_EQ(cutoffs, (std::vector<long>{1, 4, 8, 12, 16}));
    EXPECT_EQ(chain.back().gamma.cycles_str(), "(2 3)(4 7 5)(8 11 9)(12 15 13)(16 19 17)");

    // The subgroup sequence data: every recorded delta lies in the final
    // conjugate, and each one avoids its own enumerated conjugate.
    FinitaryPerm g = chain.back().gamma;
    FinitaryPerm ginv = g.inverse();
    for (std::size_t i = 0; i < chain.size(); ++i) {
        EXPECT_TRUE(hodd.contains(ginv * chain[i].delta * g));
        EXPECT_FALSE(hodd.contains(kappas[i].inverse() * chain[i].delta * kappas[i]));
    }
}

TEST(WitnessStep, TrivialIntersectionBranchIsReported) {
    SubgroupOracle cyc = oracle_cyclic(FinitaryPerm::parse("(1 2)"));
    WitnessStep st = witness_step(cyc, {}, FinitaryPerm::parse("(1 2 3)"), 12);
    EXPECT_EQ(st.l, 4);
    EXPECT_TRUE(st.trivial_branch);
    EXPECT_EQ(st.delta.cycles_str(), "(4 5)");
    EXPECT_TRUE(st.rho.is_identity());
    EXPECT_TRUE(st.gamma_step.is_identity());
    EXPECT_TRUE(st.first_bullet);
    EXPECT_TRUE(st.second_bullet);
}

TEST(WitnessStep, ProperClassInsideTheSupportStillWorks) {
    // At cutoff 1 the transposition class meets <(1 2)> properly, so the
    // main branch applies even to this tiny group.
    SubgroupOracle cyc = oracle_cyclic(FinitaryPerm::parse("(1 2)"));
    WitnessStep st = witness_step(cyc, {}, FinitaryPerm(), 12);
    EXPECT_EQ(st.l, 1);
    EXPECT_FALSE(st.trivial_branch);
    EXPECT_EQ(st.rho.cycles_str(), "(1 2)");
    EXPECT_EQ(st.delta.cycles_str(), "(1 3)");
    EXPECT_TRUE(st.first_bullet);
    EXPECT_TRUE(st.second_bullet);
}

TEST(WitnessStep, NormalSubgroupOffersNoProperClass) {
    EXPECT_THROW(witness_step(oracle_alternating(), {}, FinitaryPerm(), 9), InputError);
}

TEST(WitnessStep, RejectsWindowsBelowTheCutoff) {
    SubgroupOracle hodd = oracle_fixing_evens();
    std::vector<WitnessStep> history;
    WitnessStep fake;
    fake.gamma = FinitaryPerm::parse("(21 23)");
    fake.delta = FinitaryPerm::parse("(1 3)");
    history.push_back(fake);
    EXPECT_THROW(witness_step(hodd, history, FinitaryPerm(), 24), InputError);
}

TEST(PrefixFixing, SymmetricWindowYieldsTheRequestedElements) {
    std::vector<FinitaryPerm> out = prefix_fixing_extract(oracle_symmetric(), 2, 5, 9);
    ASSERT_EQ(out.size(), 5u);
    std::set<std::string> seen;
    for (const FinitaryPerm& p : out) {
        EXPECT_FALSE(p.is_identity());
        EXPECT_EQ(p.apply(1), 1);
        EXPECT_EQ(p.apply(2), 2);
        EXPECT_TRUE(seen.insert(p.cycles_str()).second);
    }
    EXPECT_EQ(out[0].cycles_str(), "(7 8 9)");
    EXPECT_EQ(out[4].cycles_str(), "(6 7)(8 9)");
}

TEST(PrefixFixing, OddSubgroupStaysInsideItself) {
    SubgroupOracle hodd = oracle_fixing_evens();
    std::vector<FinitaryPerm> out = prefix_fixing_extract(hodd, 2, 4, 13);
    ASSERT_EQ(out.size(), 4u);
    for (const FinitaryPerm& p : out) {
        EXPECT_TRUE(hodd.contains(p));
        EXPECT_EQ(p.apply(1), 1);
        EXPECT_EQ(p.apply(2), 2);
    }
    EXPECT_EQ(out[0].cycles_str(), "(9 11 13)");
}

TEST(PrefixFixing, FiniteGroupsAreRefused) {
    EXPECT_THROW(prefix_fixing_extract(oracle_cyclic(FinitaryPerm::parse("(1 2)")), 1, 3, 8),
                 InputError);
    EXPECT_THROW(prefix_fixing_extract(oracle_cyclic(FinitaryPerm::parse("(1 2)(3 4)")), 1, 2, 6),
                 InputError);
    EXPECT_THROW(prefix_fixing_extract(oracle_symmetric(), -1, 3, 8), InputError);
    EXPECT_THROW(prefix_fixing_extract(oracle_symmetric(), 2, 0, 8), InputError);
    EXPECT_THROW(prefix_fixing_extract(oracle_symmetric(), 8, 3, 8), InputError);
}

} // namespace
} // namespace treesub
