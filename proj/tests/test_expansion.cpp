#include "treesub/expansion.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "treesub/action.hpp"
#include "treesub/decorated.hpp"
#include "treesub/errors.hpp"
#include "treesub/gamma5.hpp"
#include "treesub/tree_family.hpp"
#include "treesub/word.hpp"

namespace treesub {
namespace {

Code make_code(const std::string& prefix, const std::string& period) {
    Code c;
    c.prefix = prefix;
    c.period = period;
    return c;
}

TEST(Rational, NormalizesAndCompares) {
    EXPECT_EQ(Rational(14, 6), Rational(7, 3));
    EXPECT_EQ(Rational(7, 3).to_string(), "7/3");
    EXPECT_EQ(Rational(3, 1).to_string(), "3");
    EXPECT_EQ(Rational(1, -2), Rational(-1, 2));
    EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
    EXPECT_EQ(Rational(7, 3) - Rational(1), Rational(4, 3));
    EXPECT_EQ(Rational(1, 2) / 4, Rational(1, 8));
    EXPECT_LT(Rational(9, 8), Rational(7, 3));
    EXPECT_GE(Rational(2), Rational(15, 8));
    EXPECT_EQ(min(Rational(1, 8), Rational(1, 4)), Rational(1, 8));
    EXPECT_THROW(Rational(1, 0), InputError);
}

TEST(Ratio, FixedRootGivesOneMovedRootGivesAtLeastTwo) {
    HGenerators h = build_h(make_code("b", "c"), make_code("c", "b"));
    TreeFamily own = TreeFamily::master_code(h.code);
    TreeFamily other = TreeFamily::master_code(h.other);
    DecoratedVertex root = DecoratedVertex::root(5);
    EXPECT_EQ(ratio(own, h.words(), {root}), Rational(1));
    Rational moved = ratio(other, h.words(), {root});
    EXPECT_GE(moved, Rational(2));
    EXPECT_EQ(moved, Rational(5));
}

TEST(Ratio, UnitBallUnderTwoLettersMatchesEnumeration) {
    TreeFamily t5 = TreeFamily::plain(5);
    std::vector<DecoratedVertex> f{DecoratedVertex::root(5)};
    for (char c : {'a', 'b', 'c', 'd', 'e'}) f.push_back(parse_vertex(t5, std::string(1, c)));
    std::vector<ReducedWord> gens{ReducedWord::reduce("b", 5), ReducedWord::reduce("c", 5)};
    // Independent enumeration over address strings.
    std::set<std::string> expect;
    for (const DecoratedVertex& v : f) {
        expect.insert(v.base.str());
        for (const ReducedWord& g : gens)
            expect.insert(ReducedWord::reduce(v.base.str() + g.str(), 5).str());
    }
    EXPECT_EQ(ratio(t5, gens, f), Rational(static_cast<long long>(expect.size()), 6));
    EXPECT_EQ(ratio(t5, gens, f), Rational(7, 3));
}

TEST(Ratio, OneExactlyOnInvariantSets) {
    TreeFamily t5 = TreeFamily::plain(5);
    ReducedWord b = ReducedWord::reduce("b", 5);
    DecoratedVertex root = DecoratedVertex::root(5);
    DecoratedVertex vb = parse_vertex(t5, "b");
    EXPECT_EQ(ratio(t5, {b}, {root, vb}), Rational(1));
    EXPECT_EQ(ratio(t5, {b}, {root}), Rational(2));
    EXPECT_THROW(ratio(t5, {b}, {}), InputError);
    EXPECT_THROW(ratio(t5, {}, {root}), InputError);
}

TEST(ConnectedSubsets, EnumeratorMatchesBitmaskOracle) {
    TreeFamily t3 = TreeFamily::plain(3);
    detail::WindowGraph g = detail::window_graph(t3, 2);
    ASSERT_EQ(g.verts.size(), 10u);
    for (long max_size : {1L, 4L, 6L}) {
        long esu = 0;
        detail::for_each_connected_subset(g, max_size,
                                          [&](const std::vector<int>&) { ++esu; });
        long oracle = 0;
        int n = static_cast<int>(g.verts.size());
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            if (__builtin_popcount(mask) > max_size) continue;
            int start = __builtin_ctz(mask);
            unsigned seen = 1u << start;
            std::vector<int> queue{start};
            for (std::size_t h = 0; h < queue.size(); ++h)
                for (int w : g.adj[static_cast<std::size_t>(queue[h])])
                    if ((mask >> w & 1u) && !(seen >> w & 1u)) {
                        seen |= 1u << w;
                        queue.push_back(w);
                    }
            if (seen == mask) ++oracle;
        }
        EXPECT_EQ(esu, oracle) << "max_size " << max_size;
    }
}

TEST(MinRatioSearch, PlainTreeStaysAboveOne) {
    TreeFamily t5 = TreeFamily::plain(5);
    std::vector<ReducedWord> gens{ReducedWord::reduce("a", 5), ReducedWord::reduce("b", 5),
                                  ReducedWord::reduce("c", 5)};
    ExpansionReport rep = min_ratio_search(t5, gens, 6, 3, SearchStrategy::exhaustive);
    EXPECT_GT(rep.min_ratio, Rational(1));
    EXPECT_EQ(rep.min_ratio, Rational(7, 3));
    EXPECT_EQ(rep.tested, 12187u);
    ASSERT_FALSE(rep.worst_set.empty());
    EXPECT_EQ(ratio(t5, gens, rep.worst_set), rep.min_ratio);
    EXPECT_EQ(rep.delta(), Rational(4, 3));
    EXPECT_EQ(rep.m(8), Rational(1, 8));
    EXPECT_EQ(rep.r_gen(), 3u);
}

TEST(MinRatioSearch, SingleVertexMinimumDetectsFixedPoints) {
    HGenerators h = build_h(make_code("b", "c"), make_code("c", "b"));
    TreeFamily own = TreeFamily::master_code(h.code);
    TreeFamily other = TreeFamily::master_code(h.other);
    ExpansionReport fixed = min_ratio_search(own, h.words(), 1, 4, SearchStrategy::exhaustive);
    EXPECT_EQ(fixed.min_ratio, Rational(1));
    EXPECT_EQ(fixed.tested, 408u);
    ASSERT_EQ(fixed.worst_set.size(), 1u);
    EXPECT_EQ(fixed.worst_set[0], DecoratedVertex::root(5));
    ExpansionReport moved = min_ratio_search(other, h.words(), 1, 4, SearchStrategy::exhaustive);
    EXPECT_GT(moved.min_ratio, Rational(1));
}

TEST(MinRatioSearch, OrbitStrategyCertifiesAFloor) {
    HGenerators h = build_h(make_code("b", "c"), make_code("c", "b"));
    TreeFamily other = TreeFamily::master_code(h.other);
    ExpansionReport rep = min_ratio_search(other, h.words(), 8, 6, SearchStrategy::orbit);
    EXPECT_EQ(rep.min_ratio, Rational(9, 8));
    EXPECT_TRUE(rep.certified_floor);
    EXPECT_EQ(rep.tested, 6395u);
    EXPECT_TRUE(rep.worst_set.empty());
    EXPECT_EQ(rep.label,
              "certified lower bound for every nonempty set of at most 8 window vertices");
    EXPECT_EQ(rep.delta(), Rational(1, 8));
    EXPECT_EQ(rep.m(8), Rational(1, 8));
    EXPECT_EQ(rep.m(16), Rational(1, 16));
}

TEST(MinRatioSearch, OrbitStrategyReportsInvariantSets) {
    HGenerators h = build_h(make_code("b", "c"), make_code("c", "b"));
    TreeFamily own = TreeFamily::master_code(h.code);
    ExpansionReport rep = min_ratio_search(own, h.words(), 8, 4, SearchStrategy::orbit);
    EXPECT_EQ(rep.min_ratio, Rational(1));
    EXPECT_TRUE(rep.certified_floor);
    ASSERT_EQ(rep.worst_set.size(), 1u);
    EXPECT_EQ(rep.worst_set[0], DecoratedVertex::root(5));
    EXPECT_EQ(ratio(own, h.words(), rep.worst_set), Rational(1));
}

TEST(MinRatioSearch, GreedyIsDeterministicAndRespectsTheFloor) {
    HGenerators h = build_h(make_code("b", "c"), make_code("c", "b"));
    TreeFamily other = TreeFamily::master_code(h.other);
    ExpansionReport a = min_ratio_search(other, h.words(), 8, 6, SearchStrategy::greedy, 7u);
    ExpansionReport b = min_ratio_search(other, h.words(), 8, 6, SearchStrategy::greedy, 7u);
    EXPECT_EQ(a.min_ratio, b.min_ratio);
    EXPECT_TRUE(std::equal(a.worst_set.begin(), a.worst_set.end(), b.worst_set.begin(),
                           b.worst_set.end()));
    EXPECT_FALSE(a.certified_floor);
    EXPECT_EQ(a.label, "upper bound on the infimum over the tested class");
    // The orbit floor bounds every greedy value from below.
    EXPECT_GE(a.min_ratio, Rational(9, 8));
    EXPECT_EQ(ratio(other, h.words(), a.worst_set), a.min_ratio);
}

TEST(MinRatioSearch, AutomaticPicksExhaustiveOnSmallWindows) {
    TreeFamily t5 = TreeFamily::plain(5);
    std::vector<ReducedWord> gens{ReducedWord::reduce("b", 5)};
    ExpansionReport rep = min_ratio_search(t5, gens, 2, 1);
    EXPECT_EQ(rep.strategy, SearchStrategy::exhaustive);
    ExpansionReport big = min_ratio_search(t5, gens, 12, 1);
    EXPECT_EQ(big.strategy, SearchStrategy::greedy);
}

TEST(MinRatioSearch, ValidatesArguments) {
    TreeFamily t5 = TreeFamily::plain(5);
    std::vector<ReducedWord> gens{ReducedWord::reduce("b", 5)};
    EXPECT_THROW(min_ratio_search(t5, gens, 0, 3), InputError);
    EXPECT_THROW(min_ratio_search(t5, gens, 201, 3), InputError);
    EXPECT_THROW(min_ratio_search(t5, gens, 3, -1), InputError);
    EXPECT_THROW(min_ratio_search(t5, gens, 3, 19), InputError);
    EXPECT_THROW(min_ratio_search(t5, {}, 3, 3), InputError);
    EXPECT_THROW(min_ratio_search(t5, gens, 11, 3, SearchStrategy::exhaustive), InputError);
    EXPECT_THROW(min_ratio_search(t5, gens, 65, 3, SearchStrategy::orbit), InputError);
    ExpansionReport rep = min_ratio_search(t5, gens, 2, 1);
    EXPECT_THROW(rep.m(0), InputError);
}

TEST(ContractDecorations, FullPathBecomesOneEdge) {
    TreeFamily fam = TreeFamily::master_code(make_code("b", "c"));
    std::vector<DecoratedVertex> g{parse_vertex(fam, "b"), parse_vertex(fam, "near@b"),
                                   parse_vertex(fam, "far@b"), parse_vertex(fam, "ba")};
    // Four vertices and three induced edges go to two nodes and one edge.
    ContractedGraph c = contract_decorations(fam, g);
    ASSERT_EQ(c.nodes.size(), 2u);
    ASSERT_EQ(c.edges.size(), 1u);
    EXPECT_EQ(c.contracted_paths, 1u);
    EXPECT_EQ(c.pruned, 0u);
    EXPECT_EQ(c.nodes[0].to_string(), "b");
    EXPECT_EQ(c.nodes[1].to_string(), "ba");
    EXPECT_TRUE(detail::contracted_connected(c));
}

TEST(ContractDecorations, PartialPathsArePruned) {
    TreeFamily fam = TreeFamily::master_code(make_code("b", "c"));
    ContractedGraph head = contract_decorations(fam, {parse_vertex(fam, "b"),
                                                      parse_vertex(fam, "near@b")});
    EXPECT_EQ(head.nodes.size(), 1u);
    EXPECT_TRUE(head.edges.empty());
    EXPECT_EQ(head.pruned, 1u);
    ContractedGraph bare = contract_decorations(fam, {parse_vertex(fam, "near@b"),
                                                      parse_vertex(fam, "far@b")});
    EXPECT_TRUE(bare.nodes.empty());
    EXPECT_TRUE(bare.edges.empty());
    EXPECT_TRUE(detail::contracted_connected(bare));
    EXPECT_THROW(contract_decorations(fam, {}), InputError);
    EXPECT_THROW(contract_decorations(fam, {DecoratedVertex::root(5),
                                            parse_vertex(fam, "ba")}),
                 InputError);
}

TEST(ContractDecorations, PlainSubgraphsPassThrough) {
    TreeFamily t5 = TreeFamily::plain(5);
    std::vector<DecoratedVertex> g{DecoratedVertex::root(5), parse_vertex(t5, "b"),
                                   parse_vertex(t5, "c"), parse_vertex(t5, "cb")};
    ContractedGraph c = contract_decorations(t5, g);
    EXPECT_EQ(c.nodes.size(), 4u);
    EXPECT_EQ(c.edges.size(), 3u);
    EXPECT_EQ(c.contracted_paths, 0u);
    EXPECT_EQ(c.pruned, 0u);
    EXPECT_TRUE(detail::contracted_connected(c));
}

TEST(ContractDecorations, NodesMatchPlainVerticesOnSamples) {
    TreeFamily fam = TreeFamily::master_code(make_code("b", "c"));
    std::mt19937 rng(90125u);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<DecoratedVertex> g{DecoratedVertex::root(5)};
        std::uniform_int_distribution<int> size_pick(2, 14);
        int want = size_pick(rng);
        while (static_cast<int>(g.size()) < want) {
            std::uniform_int_distribution<std::size_t> at(0, g.size() - 1);
            auto nbrs = neighbors(fam, g[at(rng)]);
            std::uniform_int_distribution<std::size_t> pick(0, nbrs.size() - 1);
            DecoratedVertex cand = nbrs[pick(rng)].second;
            if (deco_dist_from_root(fam, cand) > 8) continue;
            if (std::find(g.begin(), g.end(), cand) == g.end()) g.push_back(cand);
        }
        std::size_t plain_count = 0;
        for (const DecoratedVertex& v : g)
            if (v.tag == VTag::old_v) ++plain_count;
        ContractedGraph c = contract_decorations(fam, g);
        EXPECT_EQ(c.nodes.size(), plain_count) << "trial " << trial;
        EXPECT_TRUE(detail::contracted_connected(c)) << "trial " << trial;
    }
}

TEST(Expansion, DecompositionBoundOnSeparatedComponents) {
    HGenerators h = build_h(make_code("b", "c"), make_code("c", "b"));
    TreeFamily other = TreeFamily::master_code(h.other);
    std::vector<ReducedWord> words = h.words();
    long long r = static_cast<long long>(words.size());
    std::mt19937 rng(5150u);
    for (int trial = 0; trial < 20; ++trial) {
        // Components grown around anchors pairwise further apart than twice
        // the longest word, so their images cannot meet.
        std::uniform_int_distribution<int> comp_pick(2, 3);
        int comps = comp_pick(rng);
        std::vector<std::vector<DecoratedVertex>> parts;
        const char letters[4] = {'b', 'c', 'd', 'e'};
        for (int q = 0; q < comps; ++q) {
            std::string anchor;
            for (int i = 0; i < 15; ++i) {
                anchor.push_back(letters[q]);
                anchor.push_back('a');
            }
            std::vector<DecoratedVertex> part{parse_vertex(other, anchor)};
            std::uniform_int_distribution<int> size_pick(1, 4);
            int want = size_pick(rng);
            while (static_cast<int>(part.size()) < want) {
                std::uniform_int_distribution<std::size_t> at(0, part.size() - 1);
                auto nbrs = neighbors(other, part[at(rng)]);
                std::uniform_int_distribution<std::size_t> pick(0, nbrs.size() - 1);
                DecoratedVertex cand = nbrs[pick(rng)].second;
                if (std::find(part.begin(), part.end(), cand) == part.end())
                    part.push_back(cand);
            }
            parts.push_back(std::move(part));
        }
        std::vector<DecoratedVertex> all;
        Rational m(1000000);
        for (const std::vector<DecoratedVertex>& part : parts) {
            Rational d = ratio(other, words, part) - Rational(1);
            EXPECT_GT(d, Rational(0));
            m = min(m, d);
            all.insert(all.end(), part.begin(), part.end());
        }
        Rational lhs = ratio(other, words, all);
        Rational rhs = Rational(1) + m / r;
        EXPECT_GE(lhs, rhs) << "trial " << trial;
    }
}

} // namespace
} // namespace treesub
