#pragma once

#include <spe/error.hpp>
#include <spe/random.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <fmt/format.h>

namespace spe {

struct ProjectRecord
{
    std::string project_id;
    double story_points = 0.0;
    double velocity = 0.0;
    double actual_effort = 0.0;  // completion time as given by the source dataset

    bool operator==(const ProjectRecord&) const = default;
};

struct Dataset
{
    std::vector<ProjectRecord> records;
    std::string source;

    std::size_t size() const noexcept { return records.size(); }
    bool empty() const noexcept { return records.empty(); }
};

enum class Column { story_points, velocity, actual_effort };

inline constexpr std::array<Column, 3> all_columns{
    Column::story_points, Column::velocity, Column::actual_effort};

inline constexpr std::string_view column_name(Column c) noexcept
{
    switch (c) {
        case Column::story_points: return "story_points";
        case Column::velocity: return "velocity";
        case Column::actual_effort: return "actual_effort";
    }
    return "?";
}

inline double& column_value(ProjectRecord& r, Column c) noexcept
{
    switch (c) {
        case Column::story_points: return r.story_points;
        case Column::velocity: return r.velocity;
        case Column::actual_effort: break;
    }
    return r.actual_effort;
}

inline double column_value(const ProjectRecord& r, Column c) noexcept
{
    return column_value(const_cast<ProjectRecord&>(r), c);
}

struct ColumnRange
{
    double min = 0.0;
    double max = 1.0;

    bool operator==(const ColumnRange&) const = default;
};

struct NormalizationParams
{
    ColumnRange story_points;
    ColumnRange velocity;
    ColumnRange actual_effort;

    const ColumnRange& range(Column c) const noexcept
    {
        switch (c) {
            case Column::story_points: return story_points;
            case Column::velocity: return velocity;
            case Column::actual_effort: break;
        }
        return actual_effort;
    }

    ColumnRange& range(Column c) noexcept
    {
        return const_cast<ColumnRange&>(std::as_const(*this).range(c));
    }

    bool operator==(const NormalizationParams&) const = default;
};

inline constexpr std::string_view csv_header = "project_id,story_points,velocity,actual_effort";

namespace detail {

inline std::string_view trim_cr(std::string_view s) noexcept
{
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

// Strict decimal parse: the whole cell must be consumed, no thousands separators.
inline bool parse_real(std::string_view cell, double& out)
{
    if (cell.empty()) return false;
    for (char ch : cell) {
        const bool ok = (ch >= '0' && ch <= '9') || ch == '.' || ch == '-' || ch == '+' ||
                        ch == 'e' || ch == 'E';
        if (!ok) return false;
    }
    std::string buf(cell);
    char* end = nullptr;
    out = std::strtod(buf.c_str(), &end);
    return end == buf.c_str() + buf.size() && std::isfinite(out);
}

} // namespace detail

struct DatasetScan
{
    Dataset dataset;                    // rows that passed every check
    std::vector<std::string> problems;  // one message per rejected row, in file order
};

/// Check every data row of CSV text, collecting one diagnostic per bad row.
/// Row numbers count data rows from 1. A malformed header stops the scan.
inline DatasetScan scan_dataset(std::string_view text, std::string source)
{
    DatasetScan scan;
    Dataset& ds = scan.dataset;
    ds.source = std::move(source);

    std::size_t pos = 0;
    auto next_line = [&](std::string_view& line) {
        if (pos >= text.size()) return false;
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        line = detail::trim_cr(text.substr(pos, nl - pos));
        pos = nl + 1;
        return true;
    };

    std::string_view line;
    if (!next_line(line)) {
        scan.problems.emplace_back("empty file: missing header");
        return scan;
    }
    if (line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
    if (line != csv_header) {
        scan.problems.push_back(fmt::format("malformed header: expected '{}', got '{}'", csv_header, line));
        return scan;
    }

    std::unordered_set<std::string> seen;
    std::size_t row = 0;
    auto check_row = [&](std::string_view l) -> std::string {
        const auto cells = detail::split_commas(l);
        if (cells.size() != 4) return fmt::format("expected 4 cells at row {}, got {}", row, cells.size());
        ProjectRecord rec;
        rec.project_id = std::string(cells[0]);
        if (rec.project_id.empty()) return fmt::format("empty project_id at row {}", row);
        for (std::size_t c = 0; c < 3; ++c) {
            const Column col = all_columns[c];
            double v = 0.0;
            if (!detail::parse_real(cells[c + 1], v)) {
                return fmt::format("non-numeric {} at row {}: '{}'", column_name(col), row, cells[c + 1]);
            }
            if (!(v > 0.0)) return fmt::format("non-positive {} at row {}", column_name(col), row);
            column_value(rec, col) = v;
        }
        if (!seen.insert(rec.project_id).second) {
            return fmt::format("duplicate project_id '{}' at row {}", rec.project_id, row);
        }
        ds.records.push_back(std::move(rec));
        return {};
    };
    while (next_line(line)) {
        if (line.empty() && pos >= text.size()) break;  // trailing newline
        ++row;
        if (auto problem = check_row(line); !problem.empty()) scan.problems.push_back(std::move(problem));
    }
    if (row == 0) scan.problems.emplace_back("dataset has no records");
    return scan;
}

inline Dataset parse_dataset(std::string_view text, std::string source)
{
    auto scan = scan_dataset(text, std::move(source));
    if (!scan.problems.empty()) fail(ErrorKind::data, scan.problems.front());
    return std::move(scan.dataset);
}

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::not_found, fmt::format("file not found: {}", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Dataset load_dataset(const std::string& path)
{
    return parse_dataset(read_text_file(path), path);
}

/// Serialize in the ingestion format. Reals are written with round-trip precision.
inline std::string format_dataset(const Dataset& ds)
{
    std::string out(csv_header);
    out += '\n';
    for (const auto& r : ds.records) {
        if (r.project_id.find_first_of(",\r\n") != std::string::npos) {
            fail(ErrorKind::data, fmt::format("project_id '{}' cannot be written as CSV", r.project_id));
        }
        out += fmt::format("{},{},{},{}\n", r.project_id, r.story_points, r.velocity, r.actual_effort);
    }
    return out;
}

inline void write_dataset(const Dataset& ds, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::usage, fmt::format("cannot open {} for writing", path));
    out << format_dataset(ds);
}

inline NormalizationParams fit_normalizer(const Dataset& data)
{
    if (data.empty()) fail(ErrorKind::data, "cannot fit normalizer on an empty dataset");
    NormalizationParams params;
    for (Column c : all_columns) {
        auto [lo, hi] = std::minmax_element(
            data.records.begin(), data.records.end(),
            [c](const ProjectRecord& a, const ProjectRecord& b) {
                return column_value(a, c) < column_value(b, c);
            });
        ColumnRange& r = params.range(c);
        r.min = column_value(*lo, c);
        r.max = column_value(*hi, c);
        if (!(r.max > r.min)) {
            fail(ErrorKind::data, fmt::format("degenerate column {}", column_name(c)));
        }
    }
    return params;
}

inline double normalize_value(double x, const ColumnRange& r) noexcept
{
    return (x - r.min) / (r.max - r.min);
}

inline double denormalize_value(double x, const ColumnRange& r) noexcept
{
    return x * (r.max - r.min) + r.min;
}

/// Min-max scale every numeric column. Values outside the fitted range are not clipped.
inline Dataset normalize(const Dataset& data, const NormalizationParams& params)
{
    Dataset out = data;
    for (auto& rec : out.records) {
        for (Column c : all_columns) {
            double& v = column_value(rec, c);
            v = normalize_value(v, params.range(c));
        }
    }
    return out;
}

inline std::vector<double> denormalize(std::vector<double> values, Column column,
                                       const NormalizationParams& params)
{
    const ColumnRange& r = params.range(column);
    for (double& v : values) v = denormalize_value(v, r);
    return values;
}

struct Split
{
    Dataset train;
    Dataset test;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
};

/// Test size ceil(test_fraction * n), clamped so both sides keep at least one record.
inline std::size_t test_size_for(std::size_t n, double test_fraction)
{
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        fail(ErrorKind::usage, fmt::format("test_fraction must lie in (0,1), got {}", test_fraction));
    }
    auto k = static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n)));
    return std::clamp<std::size_t>(k, 1, n - 1);
}

/// Shuffle with a seeded permutation; the first `test_count` permuted rows form the test set.
inline Split train_test_split_count(const Dataset& data, std::size_t test_count, std::uint64_t seed)
{
    const std::size_t n = data.size();
    if (n < 2) fail(ErrorKind::usage, fmt::format("train/test split needs at least 2 records, got {}", n));
    if (test_count < 1 || test_count >= n) {
        fail(ErrorKind::usage, fmt::format("test size {} invalid for {} records", test_count, n));
    }
    const auto perm = seeded_permutation(n, seed);
    Split s;
    s.train.source = data.source + "#train";
    s.test.source = data.source + "#test";
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t idx = perm[i];
        if (i < test_count) {
            s.test_indices.push_back(idx);
            s.test.records.push_back(data.records[idx]);
        } else {
            s.train_indices.push_back(idx);
            s.train.records.push_back(data.records[idx]);
        }
    }
    return s;
}

inline Split train_test_split(const Dataset& data, double test_fraction, std::uint64_t seed)
{
    if (data.size() < 2) {
        fail(ErrorKind::usage, fmt::format("train/test split needs at least 2 records, got {}", data.size()));
    }
    return train_test_split_count(data, test_size_for(data.size(), test_fraction), seed);
}

} // namespace spe
