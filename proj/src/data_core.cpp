#include "hrvkit/data_core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "hrvkit/error.hpp"
#include "hrvkit/kernels.hpp"

namespace hrvkit::data {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, delimiter)) fields.push_back(trim(field));
    if (!line.empty() && line.back() == delimiter) fields.emplace_back();
    return fields;
}

double parse_number(const std::string& field, std::size_t line_no) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        fail(ErrorCode::NonNumeric,
             "line " + std::to_string(line_no) + ": '" + field + "' is not a finite number");
    }
    return value;
}

std::vector<std::string> default_names(std::size_t cols) {
    std::vector<std::string> names;
    names.reserve(cols);
    for (std::size_t j = 0; j < cols; ++j) names.push_back("c" + std::to_string(j + 1));
    return names;
}

void check_level(std::size_t level, std::size_t d) {
    if (level < 1 || level > d) {
        fail(ErrorCode::LevelOutOfRange,
             "level " + std::to_string(level) + " outside [1, " + std::to_string(d) + "]");
    }
}

} // namespace

SampleMatrix::SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                           std::vector<std::string> names)
    : rows_(rows), cols_(cols), values_(std::move(values)), names_(std::move(names)) {
    if (rows_ < 1) fail(ErrorCode::EmptySample, "sample has no rows");
    if (cols_ < 2) fail(ErrorCode::InvalidArgument, "sample needs at least 2 columns");
    if (values_.size() != rows_ * cols_) fail(ErrorCode::RaggedRows, "value count != rows * cols");
    for (double v : values_) {
        if (!std::isfinite(v)) fail(ErrorCode::NonNumeric, "sample entries must be finite");
        if (v < 0.0) fail(ErrorCode::NegativeValue, "sample entries must be non-negative");
    }
    if (names_.empty()) names_ = default_names(cols_);
    if (names_.size() != cols_) fail(ErrorCode::InvalidArgument, "names do not match columns");
}

SampleMatrix SampleMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                     std::vector<std::string> names) {
    if (rows.empty()) fail(ErrorCode::EmptySample, "sample has no rows");
    const std::size_t d = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * d);
    for (const auto& r : rows) {
        if (r.size() != d) fail(ErrorCode::RaggedRows, "rows differ in length");
        values.insert(values.end(), r.begin(), r.end());
    }
    return SampleMatrix(rows.size(), d, std::move(values), std::move(names));
}

std::vector<double> SampleMatrix::column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

SampleMatrix SampleMatrix::select_columns(std::span<const std::size_t> columns) const {
    std::vector<double> values;
    values.reserve(rows_ * columns.size());
    std::vector<std::string> names;
    for (std::size_t j : columns) {
        if (j >= cols_) fail(ErrorCode::InvalidArgument, "column index out of range");
        names.push_back(names_[j]);
    }
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j : columns) values.push_back((*this)(i, j));
    return SampleMatrix(rows_, columns.size(), std::move(values), std::move(names));
}

SampleMatrix SampleMatrix::scaled(double c) const {
    if (!(c > 0.0)) fail(ErrorCode::InvalidArgument, "scale factor must be positive");
    std::vector<double> values(values_);
    for (double& v : values) v *= c;
    return SampleMatrix(rows_, cols_, std::move(values), names_);
}

SampleMatrix load_csv(std::istream& source, const CsvConfig& config) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> names;
    std::vector<double> values;
    std::size_t cols = 0;
    std::size_t rows = 0;
    bool header_pending = config.header;

    while (std::getline(source, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
            line.erase(0, 3);
        if (trim(line).empty()) continue;
        auto fields = split(line, config.delimiter);
        if (header_pending) {
            names = std::move(fields);
            cols = names.size();
            header_pending = false;
            continue;
        }
        if (cols == 0) cols = fields.size();
        if (fields.size() != cols) {
            fail(ErrorCode::RaggedRows, "line " + std::to_string(line_no) + " has " +
                                            std::to_string(fields.size()) + " fields, expected " +
                                            std::to_string(cols));
        }
        for (const auto& f : fields) {
            const double v = parse_number(f, line_no);
            if (v < 0.0) {
                fail(ErrorCode::NegativeValue,
                     "line " + std::to_string(line_no) + ": negative value " + f);
            }
            values.push_back(v);
        }
        ++rows;
    }
    if (rows == 0) fail(ErrorCode::EmptySample, "no data rows");
    return SampleMatrix(rows, cols, std::move(values), std::move(names));
}

SampleMatrix load_csv_file(const std::string& path, const CsvConfig& config) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::InvalidArgument, "cannot open " + path);
    return load_csv(in, config);
}

void write_csv(std::ostream& out, const SampleMatrix& sample) {
    const auto& names = sample.names();
    for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < sample.rows(); ++i) {
        for (std::size_t j = 0; j < sample.cols(); ++j) {
            // shortest representation that round-trips
            const auto res = std::to_chars(buf, buf + sizeof buf, sample(i, j));
            if (j) out << ',';
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
}

std::vector<double> sort_descending(std::span<const double> values) {
    if (values.empty()) fail(ErrorCode::EmptyInput, "cannot sort an empty vector");
    std::vector<double> out(values.begin(), values.end());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

double lth_largest(std::span<const double> row, std::size_t level) {
    check_level(level, row.size());
    std::vector<double> tmp(row.begin(), row.end());
    std::nth_element(tmp.begin(), tmp.begin() + (level - 1), tmp.end(), std::greater<>());
    return tmp[level - 1];
}

std::vector<double> level_values(const SampleMatrix& sample, std::size_t level) {
    check_level(level, sample.cols());
    std::vector<double> out(sample.rows());
    std::vector<double> tmp(sample.cols());
    for (std::size_t i = 0; i < sample.rows(); ++i) {
        const auto r = sample.row(i);
        std::copy(r.begin(), r.end(), tmp.begin());
        std::nth_element(tmp.begin(), tmp.begin() + (level - 1), tmp.end(), std::greater<>());
        out[i] = tmp[level - 1];
    }
    return out;
}

std::vector<double> rank_level_values(const AntiRankMatrix& ranks, std::size_t level) {
    check_level(level, ranks.cols());
    const std::size_t d = ranks.cols();
    std::vector<double> out(ranks.rows());
    std::vector<std::size_t> tmp(d);
    for (std::size_t i = 0; i < ranks.rows(); ++i) {
        for (std::size_t j = 0; j < d; ++j) tmp[j] = ranks(i, j);
        // l-th largest of 1/r is 1 / (l-th smallest r)
        std::nth_element(tmp.begin(), tmp.begin() + (level - 1), tmp.end());
        out[i] = 1.0 / static_cast<double>(tmp[level - 1]);
    }
    return out;
}

AntiRankMatrix anti_ranks(const SampleMatrix& sample) {
    const std::size_t n = sample.rows();
    const std::size_t d = sample.cols();
    const auto by_column = kernels::omp::anti_ranks(sample.values(), n, d);
    std::vector<std::size_t> ranks(n * d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < n; ++i) ranks[i * d + j] = by_column[j * n + i];
    return AntiRankMatrix(n, d, std::move(ranks));
}

RankTransformed rank_transform(const AntiRankMatrix& ranks, std::size_t level) {
    RankTransformed out{level, rank_level_values(ranks, level), {}};
    out.sorted = out.m;
    std::sort(out.sorted.begin(), out.sorted.end(), std::greater<>());
    return out;
}

RankTransformed rank_transform(const SampleMatrix& sample, std::size_t level) {
    check_level(level, sample.cols());
    return rank_transform(anti_ranks(sample), level);
}

} // namespace hrvkit::data
