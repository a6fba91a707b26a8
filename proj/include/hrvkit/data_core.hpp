#pragma once

#include <cstddef>
#include <istream>
#include <span>
#include <string>
#include <vector>

namespace hrvkit::data {

/// n x d matrix of non-negative observations, stored row-major.
///
/// Row i is the observation Z_i, column j its j-th component. The
/// constructor enforces n >= 1, d >= 2 and finite non-negative entries, so
/// every SampleMatrix in circulation is valid.
class SampleMatrix {
public:
    SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                 std::vector<std::string> names = {});

    /// Builds from nested rows; all rows must share one length.
    static SampleMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                  std::vector<std::string> names = {});

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t i, std::size_t j) const noexcept {
        return values_[i * cols_ + j];
    }
    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * cols_, cols_};
    }
    std::vector<double> column(std::size_t j) const;
    std::span<const double> values() const noexcept { return values_; }

    /// Column names from a CSV header; synthesized as c1..cd otherwise.
    const std::vector<std::string>& names() const noexcept { return names_; }

    /// Keeps the listed columns (0-based) in the given order.
    SampleMatrix select_columns(std::span<const std::size_t> columns) const;

    /// Multiplies every entry by c > 0.
    SampleMatrix scaled(double c) const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
    std::vector<std::string> names_;
};

/// Same shape as its SampleMatrix; r(i, j) = #{p : Z_p^j >= Z_i^j}.
class AntiRankMatrix {
public:
    AntiRankMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> ranks)
        : rows_(rows), cols_(cols), ranks_(std::move(ranks)) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t operator()(std::size_t i, std::size_t j) const noexcept {
        return ranks_[i * cols_ + j];
    }
    std::span<const std::size_t> values() const noexcept { return ranks_; }

    friend bool operator==(const AntiRankMatrix&, const AntiRankMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::size_t> ranks_;
};

struct RankTransformed {
    std::size_t level;
    std::vector<double> m;       // m_i^(l), one per row
    std::vector<double> sorted;  // m_(1)^(l) >= ... >= m_(n)^(l)
};

struct CsvConfig {
    char delimiter = ',';
    bool header = true;
};

SampleMatrix load_csv(std::istream& source, const CsvConfig& config = {});
SampleMatrix load_csv_file(const std::string& path, const CsvConfig& config = {});
void write_csv(std::ostream& out, const SampleMatrix& sample);

std::vector<double> sort_descending(std::span<const double> values);

/// l-th largest entry of row (1-based l, ties counted with multiplicity).
double lth_largest(std::span<const double> row, std::size_t level);

/// Per-row l-th largest values Z_i^(l).
std::vector<double> level_values(const SampleMatrix& sample, std::size_t level);

/// Row-wise l-th largest of (1/r_i^j), i.e. m_i^(l), given precomputed ranks.
std::vector<double> rank_level_values(const AntiRankMatrix& ranks, std::size_t level);

AntiRankMatrix anti_ranks(const SampleMatrix& sample);

RankTransformed rank_transform(const SampleMatrix& sample, std::size_t level);
RankTransformed rank_transform(const AntiRankMatrix& ranks, std::size_t level);

} // namespace hrvkit::data
