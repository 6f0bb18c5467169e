#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "treesub/ball.hpp"
#include "treesub/bigint.hpp"
#include "treesub/census.hpp"
#include "treesub/sequence.hpp"
#include "treesub/tree_family.hpp"

using namespace treesub;

namespace {

ReducedWord rw3(const std::string& s) { return ReducedWord::reduce(s, 3); }

// Plain ball size by counting addresses directly.
std::uint64_t count_plain(int alphabet, int radius) {
    return enumerate_reduced(alphabet, radius).size();
}

} // namespace

TEST(BigUint, SmallArithmetic) {
    BigUint a(41);
    a.add(BigUint(1));
    EXPECT_EQ(a.to_string(), "42");
    EXPECT_EQ(a.to_u64(), 42u);
    a.sub(BigUint(40));
    EXPECT_EQ(a.to_u64(), 2u);
    a.mul_small(1000000007ull);
    EXPECT_EQ(a.to_string(), "2000000014");
    EXPECT_TRUE(BigUint(0).is_zero());
    EXPECT_FALSE(a.is_zero());
}

TEST(BigUint, PowAndDecimal) {
    EXPECT_EQ(BigUint::pow(2, 10).to_u64(), 1024u);
    EXPECT_EQ(BigUint::pow(2, 100).to_string(), "1267650600228229401496703205376");
    EXPECT_EQ(BigUint::pow(7, 0).to_u64(), 1u);
    BigUint big = BigUint::pow(10, 30);
    EXPECT_EQ(big.to_string(), "1" + std::string(30, '0'));
    EXPECT_THROW(big.to_u64(), InputError);
}

TEST(BigUint, SubUnderflowThrows) {
    BigUint a(5);
    EXPECT_THROW(a.sub(BigUint(6)), InputError);
    BigUint b = BigUint::pow(2, 64);
    BigUint c = b;
    c.sub(BigUint(1));
    EXPECT_EQ(c.to_string(), "18446744073709551615");
    EXPECT_LT(c.cmp(b), 0);
    EXPECT_TRUE(c < b);
    EXPECT_FALSE(b == c);
}

TEST(BigUint, PlainBallSizeMatchesEnumeration) {
    for (int radius = 0; radius <= 9; ++radius)
        EXPECT_EQ(plain_ball_size(3, radius).to_u64(), count_plain(3, radius)) << radius;
    for (int radius = 0; radius <= 5; ++radius)
        EXPECT_EQ(plain_ball_size(5, radius).to_u64(), count_plain(5, radius)) << radius;
    // Degree-3 closed form: 1 + 3(2^R - 1).
    EXPECT_EQ(plain_ball_size(3, 10).to_u64(), 1u + 3u * 1023u);
}

TEST(Census, PlainFamilyHasOneClass) {
    CensusResult res = census(TreeFamily::plain(3), 10, 2);
    ASSERT_EQ(res.entries.size(), 1u);
    const CensusEntry& e = res.entries[0];
    EXPECT_TRUE(e.plain_class);
    EXPECT_EQ(e.count.to_u64(), 3070u);
    EXPECT_EQ(e.witness_dist, 10);
    ASSERT_TRUE(e.witness.has_value());
    EXPECT_EQ(ball_code_at(TreeFamily::plain(3), *e.witness, 2), e.code);
}

TEST(Census, SingleDRootRadiusOne) {
    TreeFamily fam = TreeFamily::single_d(rw3(""));
    CensusResult res = census(fam, 6, 1);
    // 190 plain vertices, two shells displaced out of range, two inserted.
    EXPECT_EQ(res.total().to_u64(), 190u - 48u + 2u);
    ASSERT_EQ(res.entries.size(), 2u);
    const CensusEntry* plain = nullptr;
    const CensusEntry* pair = nullptr;
    for (const auto& e : res.entries) (e.plain_class ? plain : pair) = &e;
    ASSERT_NE(plain, nullptr);
    ASSERT_NE(pair, nullptr);
    EXPECT_EQ(pair->count.to_u64(), 2u);
    EXPECT_EQ(plain->count.to_u64(), 142u);
    EXPECT_EQ(plain->witness_dist, 6);
}

TEST(Census, SingleDRootRadiusTwo) {
    TreeFamily fam = TreeFamily::single_d(rw3(""));
    CensusResult res = census(fam, 6, 2);
    ASSERT_EQ(res.entries.size(), 3u);
    std::multiset<std::uint64_t> counts;
    for (const auto& e : res.entries) counts.insert(e.count.to_u64());
    EXPECT_EQ(counts, (std::multiset<std::uint64_t>{2, 2, 140}));
    EXPECT_EQ(res.total().to_u64(), 144u);
}

TEST(Census, MatchesBruteForceGrouping) {
    struct Config {
        TreeFamily fam;
        int R;
        int r;
    };
    std::vector<Config> configs;
    configs.push_back({TreeFamily::single_d(rw3("")), 6, 1});
    configs.push_back({TreeFamily::single_d(rw3("")), 6, 2});
    configs.push_back({TreeFamily::single_d(rw3("cb")), 7, 2});
    configs.push_back({TreeFamily::marked({rw3("b"), rw3("bcb")}, 3), 6, 2});
    configs.push_back({TreeFamily::tl(LSet::from_list({1, 2}), 256), 8, 2});
    configs.push_back(
        {TreeFamily::sl({LSet::from_list({1}), LSet::from_list({1, 2})}, {}, {0, 1}, 256), 8, 2});
    configs.push_back({TreeFamily::master_code(Code{"b", "c"}, 256), 6, 2});

    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        const Config& cfg = configs[ci];
        CensusResult res = census(cfg.fam, cfg.R, cfg.r);
        auto brute = oracle::brute_census(cfg.fam, cfg.R, cfg.r);
        ASSERT_EQ(res.entries.size(), brute.size()) << "config " << ci;

        BigUint brute_total(0);
        for (const auto& g : brute) brute_total.add(BigUint(g.count));
        EXPECT_TRUE(res.total() == brute_total) << "config " << ci;

        std::vector<bool> used(brute.size(), false);
        for (const auto& e : res.entries) {
            ASSERT_TRUE(e.witness.has_value()) << "config " << ci;
            EXPECT_EQ(ball_code_at(cfg.fam, *e.witness, cfg.r), e.code) << "config " << ci;
            RootedBall rep = extract_ball(cfg.fam, *e.witness, cfg.r);
            bool matched = false;
            for (std::size_t gi = 0; gi < brute.size(); ++gi) {
                if (used[gi] || !oracle::balls_isomorphic(rep, brute[gi].rep)) continue;
                used[gi] = true;
                matched = true;
                EXPECT_TRUE(e.count == BigUint(brute[gi].count))
                    << "config " << ci << " code " << e.code;
                EXPECT_EQ(e.witness_dist, brute[gi].max_dist)
                    << "config " << ci << " code " << e.code;
                break;
            }
            EXPECT_TRUE(matched) << "config " << ci << " code " << e.code;
        }
    }
}

TEST(Census, DeterministicAcrossRuns) {
    TreeFamily fam = TreeFamily::master_code(Code{"b", "c"}, 256);
    CensusResult a = census(fam, 7, 2);
    CensusResult b = census(fam, 7, 2);
    ASSERT_EQ(a.entries.size(), b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        EXPECT_EQ(a.entries[i].code, b.entries[i].code);
        EXPECT_EQ(a.entries[i].count.to_string(), b.entries[i].count.to_string());
        EXPECT_EQ(a.entries[i].witness->to_string(), b.entries[i].witness->to_string());
    }
}

TEST(Census, LargeWindowClosedForm) {
    // Far beyond brute-force reach; totals must still obey the closed form.
    TreeFamily fam = TreeFamily::single_d(rw3(""));
    CensusResult res = census(fam, 64, 2);
    BigUint expect = plain_ball_size(3, 64);
    expect.sub(BigUint::pow(2, 63));
    expect.sub(BigUint::pow(2, 62));
    expect.add(BigUint(2));
    EXPECT_TRUE(res.total() == expect);
    ASSERT_EQ(res.entries.size(), 3u);
    for (const auto& e : res.entries) {
        if (e.plain_class) {
            EXPECT_EQ(e.witness_dist, 64);
        }
    }
}

TEST(Census, CapacityGuard) {
    TreeFamily fam = TreeFamily::master_code(Code{"b", "c"}, 16);
    EXPECT_THROW(census(fam, 10, 3), InputError);
    EXPECT_NO_THROW(census(TreeFamily::single_d(rw3("b")), 10, 3));
}

TEST(Census, NestedScheduleRejected) {
    TreeFamily nested = TreeFamily::marked({rw3("b"), rw3("bab")}, 3);
    EXPECT_THROW(census(nested, 6, 2), InputError);
}

TEST(Census, BadParametersRejected) {
    TreeFamily fam = TreeFamily::plain(3);
    EXPECT_THROW(census(fam, -1, 2), InputError);
    EXPECT_THROW(census(fam, 5, 0), InputError);
}

TEST(Census, LineTreeCountsWindow) {
    SymbolicSequence seq = SymbolicSequence::substitution(squarefree_rules(), 'a', 'b', 100);
    TreeFamily fam = TreeFamily::line_tree(seq);
    CensusResult res = census(fam, 20, 2);
    EXPECT_EQ(res.total().to_u64(), 41u);
    EXPECT_GE(res.entries.size(), 5u);
    for (const auto& e : res.entries) {
        EXPECT_FALSE(e.plain_class);
        EXPECT_LE(e.witness_dist, 20);
        ASSERT_TRUE(e.witness.has_value());
        EXPECT_EQ(ball_code_at(fam, *e.witness, 2), e.code);
    }

    auto brute = oracle::brute_census(fam, 10, 2);
    CensusResult small = census(fam, 10, 2);
    EXPECT_EQ(small.entries.size(), brute.size());
}

TEST(DetectLimits, NeedsTwoWindows) {
    TreeFamily fam = TreeFamily::single_d(rw3(""));
    EXPECT_THROW(detect_limits(fam, 2, {8}), InputError);
}

TEST(DetectLimits, SingleDecorationLeavesOnlyPlain) {
    TreeFamily fam = TreeFamily::single_d(rw3(""));
    std::vector<std::string> rec = detect_limits(fam, 2, {8, 16});
    std::string plain_code = ball_code_at(TreeFamily::plain(3), DecoratedVertex::root(3), 2);
    ASSERT_EQ(rec.size(), 1u);
    EXPECT_EQ(rec[0], plain_code);
}

TEST(DetectLimits, ScheduleMatchesLimitStrata) {
    // Recurrent types of the scheduled family are exactly the types of its
    // limit trees: the plain tree plus each per-branch decorated ray.
    LSet n1 = LSet::from_list({1});
    LSet n2 = LSet::from_list({1, 2});
    TreeFamily fam = TreeFamily::sl({n1, n2}, {}, {0, 1}, 256);
    std::vector<std::string> rec = detect_limits(fam, 2, {16, 32});

    std::set<std::string> expected;
    for (const LSet& l : {n1, n2}) {
        long last = l.up_to(16).empty() ? 0 : (1L << l.up_to(16).back());
        CensusResult cr = census(TreeFamily::tl(l, 256), last + 2 + 4, 2);
        for (const auto& e : cr.entries) expected.insert(e.code);
    }
    EXPECT_EQ(std::set<std::string>(rec.begin(), rec.end()), expected);
}
