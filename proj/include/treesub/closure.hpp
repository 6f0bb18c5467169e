#pragma once

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "treesub/errors.hpp"

namespace treesub {

// Points of the Cantor space 2^N written as eventually periodic bit strings.
// An empty period means a tail of zeros.
struct BitPoint {
    std::string prefix;
    std::string period;

    void validate() const {
        for (char c : prefix)
            if (c != '0' && c != '1') throw InputError("bit point prefix must be 0/1");
        for (char c : period)
            if (c != '0' && c != '1') throw InputError("bit point period must be 0/1");
    }

    char at(std::size_t i) const {
        if (i < prefix.size()) return prefix[i];
        if (period.empty()) return '0';
        return period[(i - prefix.size()) % period.size()];
    }

    std::string expand(std::size_t depth) const {
        std::string out;
        out.reserve(depth);
        for (std::size_t i = 0; i < depth; ++i) out.push_back(at(i));
        return out;
    }
};

// Closed subsets of 2^N built from two formers: finite sets of points, and a
// set converging to a single target point with prescribed blocks hanging off
// the target's approach path. Block k sits at the stem that follows the
// target for k steps and then flips; the first blocks take the prefix
// expressions in order, after which the period expressions repeat forever.
class CantorSetExpr {
  public:
    static CantorSetExpr finite(std::vector<BitPoint> points) {
        if (points.empty()) throw InputError("finite set expression needs at least one point");
        for (const auto& p : points) p.validate();
        auto d = std::make_shared<Data>();
        d->points = std::move(points);
        CantorSetExpr e;
        e.data_ = std::move(d);
        return e;
    }

    static CantorSetExpr converge(BitPoint target, std::vector<CantorSetExpr> prefix,
                                  std::vector<CantorSetExpr> period) {
        target.validate();
        if (period.empty()) throw InputError("converging expression needs a nonempty period");
        auto d = std::make_shared<Data>();
        d->is_converge = true;
        d->target = std::move(target);
        d->prefix = std::move(prefix);
        d->period = std::move(period);
        CantorSetExpr e;
        e.data_ = std::move(d);
        return e;
    }

    bool is_converge() const { return data_->is_converge; }
    const std::vector<BitPoint>& points() const { return data_->points; }
    const BitPoint& target() const { return data_->target; }
    const std::vector<CantorSetExpr>& prefix_blocks() const { return data_->prefix; }
    const std::vector<CantorSetExpr>& period_blocks() const { return data_->period; }

    // Cantor-Bendixson rank. A finite set has rank 1. A converging set's
    // target survives one derivative more than the blocks that repeat
    // forever; blocks used only finitely often just contribute their own rank.
    long rank() const {
        if (!data_->is_converge) return 1;
        long best = 0;
        for (const auto& e : data_->prefix) best = std::max(best, e.rank());
        long inf = 0;
        for (const auto& e : data_->period) inf = std::max(inf, e.rank());
        return std::max(best, inf + 1);
    }

    // All depth-length prefixes of members of the set.
    std::set<std::string> eval(std::size_t depth) const {
        std::set<std::string> out;
        if (!data_->is_converge) {
            for (const auto& p : data_->points) out.insert(p.expand(depth));
            return out;
        }
        out.insert(data_->target.expand(depth));
        for (std::size_t k = 1; k + 2 <= depth; ++k) {
            const CantorSetExpr& block =
                k <= data_->prefix.size()
                    ? data_->prefix[k - 1]
                    : data_->period[(k - 1 - data_->prefix.size()) % data_->period.size()];
            std::string stem = data_->target.expand(k);
            stem.push_back(data_->target.at(k) == '0' ? '1' : '0');
            for (const auto& tail : block.eval(depth - k - 1)) out.insert(stem + tail);
        }
        return out;
    }

  private:
    struct Data {
        bool is_converge = false;
        std::vector<BitPoint> points;
        BitPoint target;
        std::vector<CantorSetExpr> prefix;
        std::vector<CantorSetExpr> period;
    };

    CantorSetExpr() = default;
    std::shared_ptr<const Data> data_;
};

// Nested converging sets: rank_chain_expr(1) is a single point and
// rank_chain_expr(a) converges to the zero point with rank_chain_expr(a-1)
// repeating in every block, so its rank is exactly a.
inline CantorSetExpr rank_chain_expr(long alpha) {
    if (alpha < 1 || alpha > 24) throw InputError("rank parameter out of range");
    CantorSetExpr e = CantorSetExpr::finite({BitPoint{"1", ""}});
    for (long a = 2; a <= alpha; ++a) e = CantorSetExpr::converge(BitPoint{"", ""}, {}, {e});
    return e;
}

// Empirical rank of a finite approximation: build the collapsed binary trie
// and look for accumulation, witnessed by a descending chain of at least
// LADDER_MIN splits each shedding a subtree of the same rank. Truncation can
// only underestimate; deepen the approximation until the answer stabilizes.
inline constexpr int LADDER_MIN = 3;

namespace detail {

struct TrieNode {
    int child[2] = {-1, -1};
    bool word_end = false;
};

inline int ladder_len(const std::vector<TrieNode>& t, const std::vector<long>& rank, int n,
                      long rho);

inline long node_rank(const std::vector<TrieNode>& t, std::vector<long>& rank, int n) {
    const TrieNode& nd = t[static_cast<std::size_t>(n)];
    if (nd.child[0] < 0 && nd.child[1] < 0) return rank[static_cast<std::size_t>(n)] = 1;
    long r = 1;
    for (int b : {0, 1})
        if (nd.child[b] >= 0) r = std::max(r, node_rank(t, rank, nd.child[b]));
    for (long rho = 1; rho <= r; ++rho)
        if (ladder_len(t, rank, n, rho) >= LADDER_MIN) r = std::max(r, rho + 1);
    return rank[static_cast<std::size_t>(n)] = r;
}

inline int ladder_len(const std::vector<TrieNode>& t, const std::vector<long>& rank, int n,
                      long rho) {
    const TrieNode& nd = t[static_cast<std::size_t>(n)];
    if (nd.child[0] < 0 || nd.child[1] < 0) return 0;
    int best = 0;
    for (int b : {0, 1}) {
        int c = nd.child[b];
        int sib = nd.child[1 - b];
        if (rank[static_cast<std::size_t>(sib)] != rho) continue;
        const TrieNode& cn = t[static_cast<std::size_t>(c)];
        int len = 1;
        if (cn.child[0] >= 0 && cn.child[1] >= 0) len += ladder_len(t, rank, c, rho);
        best = std::max(best, len);
    }
    return best;
}

} // namespace detail

inline long empirical_rank(const std::set<std::string>& sample) {
    if (sample.empty()) throw InputError("empirical rank of an empty sample");
    std::size_t depth = sample.begin()->size();
    for (const auto& s : sample) {
        if (s.size() != depth) throw InputError("sample strings must share one length");
        for (char c : s)
            if (c != '0' && c != '1') throw InputError("sample strings must be 0/1");
    }

    std::vector<detail::TrieNode> trie(1);
    for (const auto& s : sample) {
        int at = 0;
        for (char c : s) {
            int b = c - '0';
            if (trie[static_cast<std::size_t>(at)].child[b] < 0) {
                trie[static_cast<std::size_t>(at)].child[b] = static_cast<int>(trie.size());
                trie.emplace_back();
            }
            at = trie[static_cast<std::size_t>(at)].child[b];
        }
        trie[static_cast<std::size_t>(at)].word_end = true;
    }

    // Collapse unary chains so ladder steps are genuine splits.
    std::vector<detail::TrieNode> packed;
    struct Item {
        int orig;
        int parent;
        int bit;
    };
    std::vector<Item> stack{{0, -1, 0}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        int at = it.orig;
        while (true) {
            const detail::TrieNode& nd = trie[static_cast<std::size_t>(at)];
            bool l = nd.child[0] >= 0, r = nd.child[1] >= 0;
            if (l && !r) at = nd.child[0];
            else if (r && !l) at = nd.child[1];
            else break;
        }
        int id = static_cast<int>(packed.size());
        packed.emplace_back();
        packed[static_cast<std::size_t>(id)].word_end = trie[static_cast<std::size_t>(at)].word_end;
        if (it.parent >= 0) packed[static_cast<std::size_t>(it.parent)].child[it.bit] = id;
        for (int b : {0, 1})
            if (trie[static_cast<std::size_t>(at)].child[b] >= 0)
                stack.push_back({trie[static_cast<std::size_t>(at)].child[b], id, b});
    }

    std::vector<long> rank(packed.size(), 0);
    return detail::node_rank(packed, rank, 0);
}

// One layer of a staged description of an orbit closure: the points of a
// stratum disappear at its death step under repeated derivatives.
struct Stratum {
    std::string label;
    long death_step = 1;
};

struct ClosurePresentation {
    long alpha = 1;
    std::vector<Stratum> strata;

    long rank() const {
        long best = 0;
        for (const auto& s : strata) best = std::max(best, s.death_step);
        return best;
    }
};

// The staged description behind the weakly comparable pair construction at
// level alpha: isolated points die first, the gamma-indexed middle families
// die at gamma+2, the distinguished family at alpha+2, and the top point at
// alpha+3.
inline ClosurePresentation weak_pair_presentation(long alpha) {
    if (alpha < 1 || alpha > 20) throw InputError("presentation level out of range");
    ClosurePresentation p;
    p.alpha = alpha;
    p.strata.push_back({"s", 1});
    for (long g = 1; g <= alpha; ++g) p.strata.push_back({"t(" + std::to_string(g) + ")", g + 2});
    p.strata.push_back({"t_hat", alpha + 2});
    p.strata.push_back({"t_top", alpha + 3});
    return p;
}

// A set expression realizing the presentation: the top point is the limit of
// copies of the deepest non-limit stratum, with the other strata hung off the
// first blocks.
inline CantorSetExpr presentation_expr(const ClosurePresentation& p) {
    std::vector<CantorSetExpr> prefix;
    std::vector<CantorSetExpr> period;
    long top = p.rank();
    if (top < 2) throw InputError("presentation with rank < 2 has no converging realization");
    for (const auto& s : p.strata)
        if (s.death_step < top) prefix.push_back(rank_chain_expr(s.death_step));
    period.push_back(rank_chain_expr(top - 1));
    return CantorSetExpr::converge(BitPoint{"", ""}, std::move(prefix), std::move(period));
}

} // namespace treesub
