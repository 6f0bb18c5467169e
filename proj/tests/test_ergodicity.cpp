// Certificate pipeline for weak incomparability of the shift actions attached
// to two distinct codes. Frozen counts come from the window sizes of the
// second tree: radius 6 holds 6508 vertices of which 3 are subdivision
// vertices, radius 4 holds 408 of which 2 are.

#include <gtest/gtest.h>

#include <set>
#include <string>

#include "treesub/ergodicity.hpp"

namespace treesub {
namespace {

Code make_code(std::string prefix, std::string period) {
    Code c;
    c.prefix = std::move(prefix);
    c.period = std::move(period);
    return c;
}

TEST(Certificate, DefaultPairSatisfiesEveryClause) {
    WeakIncomparabilityCertificate cert = certificate(make_code("", "b"), make_code("", "c"));
    EXPECT_TRUE(cert.satisfied());
    EXPECT_TRUE(cert.fixed_point_verified);
    EXPECT_TRUE(cert.separation_verified);
    EXPECT_TRUE(cert.escapes_verified);
    EXPECT_EQ(cert.escapes_tested, 20u);
    EXPECT_EQ(cert.h.alpha.str(), "baeab");
    EXPECT_EQ(cert.h.words().size(), 4u);
    EXPECT_TRUE(cert.expansion.certified_floor);
    EXPECT_EQ(cert.expansion.min_ratio, Rational(9, 8));
    EXPECT_EQ(cert.free_words_checked, 425u);
    EXPECT_EQ(cert.free_min_moved, 6505u);
    EXPECT_TRUE(cert.freeness_verified);
    EXPECT_EQ(cert.failing_item(), "");
    std::string v = cert.verdict();
    EXPECT_NE(v.find("criterion satisfied"), std::string::npos);
    EXPECT_NE(v.find("Kechris-Tsankov"), std::string::npos);
    EXPECT_NE(v.find("cited, not verified"), std::string::npos);
}

TEST(Certificate, ShortWordEnumerationIsCompleteAndReduced) {
    std::vector<ReducedWord> words = detail::short_words(4);
    ASSERT_EQ(words.size(), 425u); // 5 + 20 + 80 + 320
    std::set<std::string> seen;
    for (const ReducedWord& w : words) {
        EXPECT_TRUE(seen.insert(w.str()).second);
        EXPECT_GE(w.size(), 1u);
        EXPECT_LE(w.size(), 4u);
    }
    EXPECT_EQ(detail::short_words(1).size(), 5u);
    EXPECT_EQ(detail::short_words(2).size(), 25u);
}

TEST(Certificate, EqualCodesAreRejectedUpFront) {
    Code c = make_code("b", "cb");
    EXPECT_THROW(certificate(c, c), InputError);
    // Same sequence spelled differently is still the same code.
    EXPECT_THROW(certificate(make_code("", "b"), make_code("bb", "b")), InputError);
}

TEST(Certificate, ValidatesParameterDomains) {
    Code cb = make_code("", "b");
    Code cc = make_code("", "c");
    CertificateParams p;
    p.search_depth = 0;
    EXPECT_THROW(certificate(cb, cc, p), InputError);
    p = {};
    p.window = 19;
    EXPECT_THROW(certificate(cb, cc, p), InputError);
    p = {};
    p.max_size = 0;
    EXPECT_THROW(certificate(cb, cc, p), InputError);
    p = {};
    p.escape_samples = -1;
    EXPECT_THROW(certificate(cb, cc, p), InputError);
    p = {};
    p.free_word_len = 7;
    EXPECT_THROW(certificate(cb, cc, p), InputError);
}

TEST(Certificate, DivergenceAtIndexThreeDeepensAlpha) {
    Code own = make_code("", "b");
    Code other = make_code("bb", "c");
    WeakIncomparabilityCertificate cert = certificate(own, other);
    EXPECT_TRUE(cert.satisfied());
    EXPECT_EQ(cert.h.step, 3);
    EXPECT_EQ(cert.h.alpha.size(), 29u);
    ReducedWord key3 = TreeFamily::master_code_step(own, 3).second;
    EXPECT_EQ(cert.h.alpha.str(), bounce_word(key3, 'e').str());
    EXPECT_EQ(cert.free_min_moved, 6505u);
}

TEST(Certificate, MonotoneUnderLargerWindows) {
    Code cb = make_code("", "b");
    Code cc = make_code("", "c");
    CertificateParams small;
    small.window = 4;
    small.max_size = 4;
    WeakIncomparabilityCertificate at_small = certificate(cb, cc, small);
    EXPECT_TRUE(at_small.satisfied());
    EXPECT_EQ(at_small.expansion.min_ratio, Rational(5, 4));
    EXPECT_EQ(at_small.free_min_moved, 406u);

    CertificateParams large;
    large.window = 6;
    large.max_size = 8;
    WeakIncomparabilityCertificate at_large = certificate(cb, cc, large);
    EXPECT_TRUE(at_large.satisfied());
    EXPECT_EQ(at_large.expansion.min_ratio, Rational(9, 8));
    EXPECT_GE(at_large.escapes_tested, at_small.escapes_tested);
}

TEST(Certificate, RefusalNamesTheFirstFailingClause) {
    WeakIncomparabilityCertificate cert = certificate(make_code("", "b"), make_code("", "c"));
    ASSERT_TRUE(cert.satisfied());

    WeakIncomparabilityCertificate broken = cert;
    broken.fixed_point_verified = false;
    EXPECT_FALSE(broken.satisfied());
    EXPECT_EQ(broken.failing_item(), "fixed point at the first root");
    EXPECT_EQ(broken.verdict(), "certificate refused: fixed point at the first root");

    broken = cert;
    broken.separation_verified = false;
    EXPECT_EQ(broken.failing_item(), "separation at the second root");

    broken = cert;
    broken.escapes_verified = false;
    EXPECT_EQ(broken.failing_item(), "escape witness for a sampled set");

    broken = cert;
    broken.expansion.certified_floor = false;
    EXPECT_EQ(broken.failing_item(), "expansion floor above one");

    broken = cert;
    broken.expansion.min_ratio = Rational(1);
    EXPECT_EQ(broken.failing_item(), "expansion floor above one");

    broken = cert;
    broken.freeness_verified = false;
    EXPECT_EQ(broken.failing_item(), "essential freeness, finite form");
}

TEST(Certificate, ImpossibleFreenessDemandIsRefusedNotHidden) {
    CertificateParams p;
    p.free_moved = 100000; // more than the whole window
    WeakIncomparabilityCertificate cert =
        certificate(make_code("", "b"), make_code("", "c"), p);
    EXPECT_FALSE(cert.satisfied());
    EXPECT_FALSE(cert.freeness_verified);
    EXPECT_TRUE(cert.fixed_point_verified);
    EXPECT_TRUE(cert.separation_verified);
    EXPECT_EQ(cert.failing_item(), "essential freeness, finite form");
    EXPECT_NE(cert.verdict().find("refused"), std::string::npos);
}

TEST(Certificate, FixedDecorationsAccountForTheMovedFloor) {
    // The least-moved short words fix exactly the subdivision vertices inside
    // the window and nothing else; radius 6 holds three of them.
    Code cc = make_code("", "c");
    TreeFamily second = TreeFamily::master_code(cc);
    std::size_t total = 0;
    std::size_t fixed_by_e = 0;
    ReducedWord e = ReducedWord::reduce("e", 5);
    detail::scan_window(second, 6, [&](const DecoratedVertex& v, long) {
        ++total;
        if (apply_word(second, e, v) == v) {
            ++fixed_by_e;
            EXPECT_NE(v.tag, VTag::old_v);
        }
    });
    EXPECT_EQ(total, 6508u);
    EXPECT_EQ(fixed_by_e, 3u);
}

} // namespace
} // namespace treesub
