#include "support.hpp"

#include <spe/dataset.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>
#include <set>

using namespace spe;

namespace {

std::string expect_data_error(std::string_view text)
{
    try {
        parse_dataset(text, "inline");
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::data);
        return e.what();
    }
    ADD_FAILURE() << "expected a data error";
    return {};
}

} // namespace

TEST(LoadDataset, ZiaFileHas21Records)
{
    const auto ds = load_dataset(test_support::zia_path());
    EXPECT_EQ(ds.size(), 21u);
    EXPECT_EQ(ds.records.front().project_id, "P1");
    EXPECT_EQ(ds.records.back().project_id, "P21");
}

TEST(LoadDataset, SingleRowParses)
{
    const auto ds = parse_dataset("project_id,story_points,velocity,actual_effort\np1,100,3,50\n", "inline");
    ASSERT_EQ(ds.size(), 1u);
    EXPECT_EQ(ds.records[0], (ProjectRecord{"p1", 100.0, 3.0, 50.0}));
}

TEST(LoadDataset, CrlfAndMissingTrailingNewline)
{
    const auto ds = parse_dataset("project_id,story_points,velocity,actual_effort\r\np1,1.5,2,3\r\np2,4,5,6", "x");
    ASSERT_EQ(ds.size(), 2u);
    EXPECT_DOUBLE_EQ(ds.records[0].story_points, 1.5);
    EXPECT_EQ(ds.records[1].project_id, "p2");
}

TEST(LoadDataset, NonPositiveValueReportsRow)
{
    const auto msg = expect_data_error("project_id,story_points,velocity,actual_effort\np1,100,3,50\np2,0,3,50\n");
    EXPECT_NE(msg.find("non-positive story_points at row 2"), std::string::npos) << msg;
}

TEST(LoadDataset, ErrorPaths)
{
    EXPECT_NE(expect_data_error("id,sp,v,e\np1,1,2,3\n").find("malformed header"), std::string::npos);
    EXPECT_NE(expect_data_error("project_id,story_points,velocity,actual_effort\np1,abc,2,3\n").find("non-numeric story_points at row 1"),
              std::string::npos);
    EXPECT_NE(expect_data_error("project_id,story_points,velocity,actual_effort\np1,1,2,3\np1,4,5,6\n").find("duplicate project_id 'p1' at row 2"),
              std::string::npos);
    EXPECT_NE(expect_data_error("project_id,story_points,velocity,actual_effort\np1,1,-2,3\n").find("non-positive velocity at row 1"),
              std::string::npos);
    EXPECT_NE(expect_data_error("project_id,story_points,velocity,actual_effort\np1,\"1,000\",2,3\n").find("row 1"),
              std::string::npos);
    EXPECT_NE(expect_data_error("project_id,story_points,velocity,actual_effort\n").find("no records"), std::string::npos);
}

TEST(LoadDataset, MissingFile)
{
    try {
        load_dataset("/nonexistent/definitely_missing.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::not_found);
        EXPECT_NE(std::string(e.what()).find("file not found"), std::string::npos);
    }
}

TEST(LoadDataset, ScanCollectsEveryBadRow)
{
    const auto scan = scan_dataset(
        "project_id,story_points,velocity,actual_effort\np1,1,2,3\np2,0,2,3\np3,1,0,3\np4,1,2,3\n", "x");
    ASSERT_EQ(scan.problems.size(), 2u);
    EXPECT_NE(scan.problems[0].find("row 2"), std::string::npos);
    EXPECT_NE(scan.problems[1].find("velocity at row 3"), std::string::npos);
    EXPECT_EQ(scan.dataset.size(), 2u);
}

TEST(LoadDataset, WriteThenLoadRoundTrips)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        auto ds = test_support::random_dataset(rng, 1 + trial % 9);
        const auto back = parse_dataset(format_dataset(ds), ds.source);
        EXPECT_EQ(back.records, ds.records);
    }
    const auto path = (std::filesystem::temp_directory_path() / "spe_roundtrip.csv").string();
    const auto zia = load_dataset(test_support::zia_path());
    write_dataset(zia, path);
    EXPECT_EQ(load_dataset(path).records, zia.records);
    std::remove(path.c_str());
}

TEST(FitNormalizer, ColumnExtrema)
{
    Dataset ds;
    ds.records = {{"a", 2, 10, 1}, {"b", 4, 30, 2}, {"c", 6, 20, 4}};
    const auto p = fit_normalizer(ds);
    EXPECT_EQ(p.story_points, (ColumnRange{2, 6}));
    EXPECT_EQ(p.velocity, (ColumnRange{10, 30}));
    EXPECT_EQ(p.actual_effort, (ColumnRange{1, 4}));
}

TEST(FitNormalizer, ConstantColumnRejected)
{
    Dataset ds;
    ds.records = {{"a", 5, 1, 1}, {"b", 5, 2, 2}, {"c", 5, 3, 3}};
    try {
        fit_normalizer(ds);
        FAIL();
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "degenerate column story_points");
    }
}

TEST(FitNormalizer, ZiaColumnsMatchBruteForceScan)
{
    const auto ds = load_dataset(test_support::zia_path());
    const auto p = fit_normalizer(ds);
    for (Column c : all_columns) {
        double lo = 1e300, hi = -1e300;
        for (const auto& r : ds.records) {
            lo = std::min(lo, column_value(r, c));
            hi = std::max(hi, column_value(r, c));
        }
        EXPECT_EQ(p.range(c).min, lo);
        EXPECT_EQ(p.range(c).max, hi);
    }
    // Frozen from the scan above.
    EXPECT_EQ(p.story_points, (ColumnRange{62, 339}));
    EXPECT_EQ(p.velocity, (ColumnRange{2.4, 4.2}));
    EXPECT_EQ(p.actual_effort, (ColumnRange{21, 112}));
}

TEST(Normalize, EndpointsAndMidpoint)
{
    Dataset ds;
    ds.records = {{"a", 2, 1, 1}, {"b", 4, 2, 2}, {"c", 6, 3, 5}};
    const auto p = fit_normalizer(ds);
    const auto n = normalize(ds, p);
    EXPECT_EQ(n.records[0].story_points, 0.0);
    EXPECT_EQ(n.records[1].story_points, 0.5);
    EXPECT_EQ(n.records[2].story_points, 1.0);
    EXPECT_EQ(n.records[0].actual_effort, 0.0);
}

TEST(Normalize, OutOfRangeNotClipped)
{
    NormalizationParams p;
    p.story_points = {2, 6};
    Dataset ds;
    ds.records = {{"a", 10, 0.5, 0.5}};
    EXPECT_DOUBLE_EQ(normalize(ds, p).records[0].story_points, 2.0);
}

TEST(Denormalize, InverseExamples)
{
    NormalizationParams p;
    p.story_points = {2, 6};
    EXPECT_EQ(denormalize({0, 0.5, 1}, Column::story_points, p), (std::vector<double>{2, 4, 6}));
    p.velocity = {-3.5, 8};
    EXPECT_EQ(denormalize({0}, Column::velocity, p), (std::vector<double>{-3.5}));
}

// Property: every fitted column lands in [0,1] with min -> 0 and max -> 1, and
// normalize followed by denormalize is the identity within 1e-12.
TEST(NormalizeProperty, RoundTripAndUnitRange)
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto ds = test_support::random_dataset(rng, 2 + trial % 30);
        const auto p = fit_normalizer(ds);
        const auto n = normalize(ds, p);
        for (Column c : all_columns) {
            std::vector<double> col;
            double lo = 2, hi = -1;
            for (const auto& r : n.records) {
                const double v = column_value(r, c);
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
                col.push_back(v);
            }
            EXPECT_EQ(lo, 0.0);
            EXPECT_EQ(hi, 1.0);
            const auto back = denormalize(col, c, p);
            for (std::size_t i = 0; i < back.size(); ++i) {
                EXPECT_NEAR(back[i], column_value(ds.records[i], c), 1e-12);
            }
        }
    }
}

TEST(Split, ZiaSizes)
{
    const auto ds = load_dataset(test_support::zia_path());
    const auto s = train_test_split(ds, 0.2, 120);
    EXPECT_EQ(s.train.size(), 16u);
    EXPECT_EQ(s.test.size(), 5u);
}

TEST(Split, TwoRecords)
{
    Dataset ds;
    ds.records = {{"a", 1, 1, 1}, {"b", 2, 2, 2}};
    const auto s = train_test_split(ds, 0.2, 3);
    EXPECT_EQ(s.train.size(), 1u);
    EXPECT_EQ(s.test.size(), 1u);
}

TEST(Split, Errors)
{
    Dataset one;
    one.records = {{"a", 1, 1, 1}};
    EXPECT_THROW(train_test_split(one, 0.2, 1), Error);
    Dataset two;
    two.records = {{"a", 1, 1, 1}, {"b", 2, 2, 2}};
    EXPECT_THROW(train_test_split(two, 0.0, 1), Error);
    EXPECT_THROW(train_test_split(two, 1.0, 1), Error);
    EXPECT_THROW(train_test_split(two, -0.5, 1), Error);
}

// numpy.random.RandomState(120).permutation(21), recorded from NumPy.
TEST(Split, PermutationMatchesLegacyNumpy)
{
    const std::vector<std::size_t> expected{2, 13, 19, 18, 17, 14, 5, 16, 6, 11, 4, 9, 8, 3, 1, 20, 12, 15, 10, 0, 7};
    EXPECT_EQ(seeded_permutation(21, 120), expected);
    EXPECT_EQ(seeded_permutation(10, 0), (std::vector<std::size_t>{2, 8, 4, 9, 1, 6, 7, 3, 0, 5}));
    EXPECT_EQ(seeded_permutation(5, 7), (std::vector<std::size_t>{0, 3, 2, 1, 4}));

    const auto ds = load_dataset(test_support::zia_path());
    const auto s = train_test_split(ds, 0.2, 120);
    EXPECT_EQ(s.test_indices, (std::vector<std::size_t>{2, 13, 19, 18, 17}));
}

TEST(SplitProperty, PartitionAndDeterminism)
{
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> size(2, 60);
    std::uniform_real_distribution<double> frac(0.01, 0.99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto ds = test_support::random_dataset(rng, size(rng));
        const double f = frac(rng);
        const std::uint64_t seed = rng();
        const auto a = train_test_split(ds, f, seed);
        const auto b = train_test_split(ds, f, seed);
        EXPECT_EQ(a.train_indices, b.train_indices);
        EXPECT_EQ(a.test_indices, b.test_indices);
        EXPECT_EQ(a.train.size() + a.test.size(), ds.size());
        EXPECT_EQ(a.test.size(), test_size_for(ds.size(), f));
        std::set<std::size_t> all(a.train_indices.begin(), a.train_indices.end());
        for (auto i : a.test_indices) EXPECT_TRUE(all.insert(i).second) << "overlap at " << i;
        EXPECT_EQ(all.size(), ds.size());
    }
}

TEST(SplitProperty, SameSeedTwiceIsIdentical)
{
    std::mt19937_64 rng(5);
    const auto ds = test_support::random_dataset(rng, 10);
    const auto a = train_test_split(ds, 0.5, 42);
    const auto b = train_test_split(ds, 0.5, 42);
    EXPECT_EQ(a.test.records, b.test.records);
    EXPECT_EQ(a.train.records, b.train.records);
    EXPECT_EQ(a.test.size(), 5u);
}
