#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "random_patterns.hpp"
#include "stpp/catalog.hpp"
#include "stpp/pattern.hpp"

using namespace stpp;

TEST(Marks, ParseAndContain) {
    const MarkSet a = MarkSet::parse("[0,0.5]");
    EXPECT_TRUE(a.contains(0.0));
    EXPECT_TRUE(a.contains(0.5));
    const MarkSet b = MarkSet::parse("(0.5,1]");
    EXPECT_FALSE(b.contains(0.5));
    EXPECT_TRUE(b.contains(1.0));
    const MarkSet c = MarkSet::parse("{1,3}");
    EXPECT_TRUE(c.contains(3));
    EXPECT_FALSE(c.contains(2));
    EXPECT_TRUE(MarkSet::parse("all").is_all());
    EXPECT_THROW(MarkSet::parse("[1,"), InputError);
}

TEST(Marks, Measures) {
    const MarkSpace lab = MarkSpace::labels(3);
    EXPECT_DOUBLE_EQ(lab.measure(MarkSet::labels({1, 2})), 2.0);
    EXPECT_DOUBLE_EQ(lab.total_measure(), 3.0);
    const MarkSpace w = MarkSpace::labels(2, {0.25, 0.75});
    EXPECT_DOUBLE_EQ(w.measure(MarkSet::labels({2})), 0.75);
    const MarkSpace iv = MarkSpace::interval(-10, 10);
    EXPECT_DOUBLE_EQ(iv.measure(MarkSet::range(-10, 0)), 10.0);
    EXPECT_DOUBLE_EQ(iv.total_measure(), 20.0);
    const MarkSpace norm = MarkSpace::interval(-10, 10, ReferenceMeasure::NormalizedLebesgue);
    EXPECT_DOUBLE_EQ(norm.measure(MarkSet::range(-10, 0)), 0.5);
    const MarkSpace emp = MarkSpace::interval(0, 1, ReferenceMeasure::Empirical);
    const std::vector<double> obs{0.1, 0.2, 0.7, 0.9};
    EXPECT_DOUBLE_EQ(emp.measure(MarkSet::range(0, 0.5), obs), 0.5);
}

TEST(Pattern, RejectsOutsidePoints) {
    std::vector<MarkedPoint> pts{{{{0.5, 0.5}, 0.5}, 1}, {{{1.5, 0.5}, 0.5}, 1}};
    EXPECT_THROW(MarkedPattern(Window::unit(2), MarkSpace::labels(2), pts), InputError);
}

TEST(Pattern, RejectsBadMark) {
    std::vector<MarkedPoint> pts{{{{0.5, 0.5}, 0.5}, 3}};
    EXPECT_THROW(MarkedPattern(Window::unit(2), MarkSpace::labels(2), pts), InputError);
}

TEST(Pattern, CollapseDuplicates) {
    std::vector<MarkedPoint> pts{{{{0.5, 0.5}, 0.5}, 1}, {{{0.5, 0.5}, 0.5}, 1}, {{{0.5, 0.5}, 0.5}, 2}};
    EXPECT_EQ(collapse_duplicates(pts), 1u);
    EXPECT_EQ(pts.size(), 2u);
}

TEST(Pattern, RescaleScalesWindowAndPoints) {
    const MarkedPattern p = testutil::uniform_pattern(30, 2, 1);
    const MarkedPattern q = rescale(p, 2.0, 0.5);
    EXPECT_DOUBLE_EQ(q.window().spatial(1).hi, 2.0);
    EXPECT_DOUBLE_EQ(q.window().temporal().hi, 0.5);
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_DOUBLE_EQ(q.axis(0)[i], 2.0 * p.axis(0)[i]);
        EXPECT_DOUBLE_EQ(q.times()[i], 0.5 * p.times()[i]);
        EXPECT_EQ(q.marks()[i], p.marks()[i]);
    }
}

TEST(Pattern, PermuteKeepsMarkMultiset) {
    const MarkedPattern p = testutil::uniform_pattern(100, 3, 2);
    const MarkedPattern q = permute_marks(p, 9);
    std::vector<double> a(p.marks().begin(), p.marks().end()), b(q.marks().begin(), q.marks().end());
    EXPECT_NE(a, b);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p.times()[i], q.times()[i]);
}

TEST(Pattern, ThinningIsSubsetAndDeterministic) {
    const MarkedPattern p = testutil::uniform_pattern(400, 2, 4);
    const MarkedPattern a = thin(p, 0.5, 11);
    const MarkedPattern b = thin(p, 0.5, 11);
    ASSERT_EQ(a.size(), b.size());
    EXPECT_GT(a.size(), 140u);
    EXPECT_LT(a.size(), 260u);
    EXPECT_THROW(thin(p, 1.5, 1), InputError);
}

TEST(Pattern, RestrictAndCount) {
    const MarkedPattern p = testutil::uniform_pattern(200, 2, 5);
    const MarkSet c = MarkSet::labels({1});
    EXPECT_EQ(restrict_marks(p, c).size(), p.count(c));
    EXPECT_EQ(project_marks(p, c).size(), p.count(c));
    EXPECT_EQ(p.count(MarkSet::all()), p.size());
}

TEST(Catalog, RoundTrip) {
    const MarkedPattern p = testutil::uniform_pattern(50, 0, 6);
    std::stringstream s;
    write_catalog(s, p);
    const CatalogLoad back = read_catalog(s, p.window(), p.mark_space());
    ASSERT_EQ(back.pattern.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_EQ(back.pattern.axis(1)[i], p.axis(1)[i]);
        EXPECT_EQ(back.pattern.marks()[i], p.marks()[i]);
    }
}

TEST(Catalog, DropsOutsideAndDuplicates) {
    std::stringstream s("x,y,t,mark\n0.1,0.1,0.1,1\n0.1,0.1,0.1,1\n2,0.1,0.1,1\n0.3,0.2,0.4,2\n");
    const CatalogLoad c = read_catalog(s, Window::unit(2), MarkSpace::labels(2));
    EXPECT_EQ(c.rows_read, 4u);
    EXPECT_EQ(c.dropped_outside, 1u);
    EXPECT_EQ(c.duplicates, 1u);
    EXPECT_EQ(c.pattern.size(), 2u);
}

TEST(Catalog, MalformedRow) {
    std::stringstream s("x,y,t,mark\n0.1,abc,0.1,1\n");
    EXPECT_THROW(read_catalog(s, Window::unit(2), MarkSpace::labels(2)), ParseError);
}

TEST(Catalog, FormatNumberRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5}) {
        EXPECT_EQ(std::stod(format_number(v)), v);
    }
}
