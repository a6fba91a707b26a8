#include <random>
#include <sstream>

#include "../support/oracle.hpp"
#include "helpers.hpp"
#include "hrvkit/data_core.hpp"

using namespace hrvkit;
using namespace hrvkit::data;

namespace {

SampleMatrix small() { return SampleMatrix::from_rows({{5, 9}, {1, 4}, {3, 7}}); }

SampleMatrix parse(const std::string& text, CsvConfig cfg = {}) {
    std::istringstream in(text);
    return load_csv(in, cfg);
}

} // namespace

TEST_CASE("load_csv parses a headed file") {
    const auto s = parse("a,b\n5,9\n1,4\n3,7");
    REQUIRE(s.rows() == 3);
    REQUIRE(s.cols() == 2);
    CHECK(s(0, 0) == 5);
    CHECK(s(2, 1) == 7);
    CHECK(s.names() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("load_csv rejects bad input") {
    CHECK_CODE(parse("a,b\n5,-1"), ErrorCode::NegativeValue);
    CHECK_CODE(parse("a,b\n"), ErrorCode::EmptySample);
    CHECK_CODE(parse("a,b\n1,x"), ErrorCode::NonNumeric);
    CHECK_CODE(parse("a,b\n1,2\n3"), ErrorCode::RaggedRows);
    CHECK_CODE(parse("a,b\n1,inf"), ErrorCode::NonNumeric);
}

TEST_CASE("load_csv handles delimiters, missing headers, CRLF and blank lines") {
    CsvConfig cfg{';', false};
    const auto s = parse("1;2\r\n\r\n3;4\r\n", cfg);
    CHECK(s.rows() == 2);
    CHECK(s(1, 1) == 4);
    CHECK(s.names() == std::vector<std::string>{"c1", "c2"});
}

TEST_CASE("write_csv round-trips values exactly") {
    const auto s = SampleMatrix::from_rows({{0.1, 1.0 / 3.0}, {1e-300, 12345.678901234567}});
    std::ostringstream out;
    write_csv(out, s);
    const auto back = parse(out.str());
    CHECK(std::equal(s.values().begin(), s.values().end(), back.values().begin()));
}

TEST_CASE("SampleMatrix invariants") {
    CHECK_CODE(SampleMatrix(1, 1, {1.0}), ErrorCode::InvalidArgument);
    CHECK_CODE(SampleMatrix(0, 2, {}), ErrorCode::EmptySample);
    CHECK_CODE(SampleMatrix(1, 2, {1.0, -2.0}), ErrorCode::NegativeValue);
}

TEST_CASE("sort_descending") {
    CHECK(sort_descending(std::vector<double>{1, 3, 2}) == std::vector<double>{3, 2, 1});
    CHECK(sort_descending(std::vector<double>{2, 2}) == std::vector<double>{2, 2});
    CHECK_CODE(sort_descending(std::vector<double>{}), ErrorCode::EmptyInput);
}

TEST_CASE("lth_largest") {
    CHECK(lth_largest(std::vector<double>{2, 1, 0.5}, 2) == 1);
    CHECK(lth_largest(std::vector<double>{1, 1, 1}, 3) == 1);
    CHECK_CODE(lth_largest(std::vector<double>{1, 2, 3}, 4), ErrorCode::LevelOutOfRange);
}

TEST_CASE("anti_ranks by the >=-count definition") {
    const auto col = SampleMatrix::from_rows({{5, 0}, {1, 0}, {3, 0}});
    const auto r = anti_ranks(col);
    CHECK(r(0, 0) == 1);
    CHECK(r(1, 0) == 3);
    CHECK(r(2, 0) == 2);
    CHECK(r(0, 1) == 3);  // the all-tied column counts everyone

    const auto rs = anti_ranks(small());
    const std::vector<std::size_t> expect{1, 1, 3, 3, 2, 2};
    CHECK(std::vector<std::size_t>(rs.values().begin(), rs.values().end()) == expect);
}

TEST_CASE("rank_transform") {
    const auto t2 = rank_transform(small(), 2);
    CHECK(t2.m == std::vector<double>{1.0, 1.0 / 3.0, 0.5});
    CHECK(t2.sorted == std::vector<double>{1.0, 0.5, 1.0 / 3.0});
    CHECK(rank_transform(small(), 1).m == std::vector<double>{1.0, 1.0 / 3.0, 0.5});
    const auto one = SampleMatrix::from_rows({{4, 2, 9}});
    for (std::size_t l = 1; l <= 3; ++l) CHECK(rank_transform(one, l).m == std::vector<double>{1.0});
    CHECK_CODE(rank_transform(small(), 3), ErrorCode::LevelOutOfRange);
}

TEST_CASE("anti_ranks and rank_transform match the brute-force oracle") {
    std::mt19937_64 g(7);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + g() % 20, d = 2 + g() % 3;
        oracle::Matrix z(n, std::vector<double>(d));
        std::vector<double> flat;
        for (auto& row : z)
            for (auto& v : row) {
                v = static_cast<double>(g() % 7);
                flat.push_back(v);
            }
        const SampleMatrix s(n, d, flat);
        const auto r = anti_ranks(s);
        const auto ro = oracle::anti_ranks(z);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) REQUIRE(r(i, j) == ro[i][j]);
        for (std::size_t l = 1; l <= d; ++l) REQUIRE(rank_transform(s, l).m == oracle::rank_m(z, l));
    }
}

TEST_CASE("distinct columns: sorted column at r - 1 is the entry; m is non-increasing in l") {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + g() % 30, d = 2 + g() % 3;
        std::vector<double> flat(n * d);
        for (double& v : flat) v = u(g);
        const SampleMatrix s(n, d, flat);
        const auto r = anti_ranks(s);
        for (std::size_t j = 0; j < d; ++j) {
            const auto sorted = sort_descending(s.column(j));
            for (std::size_t i = 0; i < n; ++i) REQUIRE(sorted[r(i, j) - 1] == s(i, j));
        }
        for (std::size_t l = 1; l < d; ++l) {
            const auto a = rank_transform(r, l).m, b = rank_transform(r, l + 1).m;
            for (std::size_t i = 0; i < n; ++i) REQUIRE(b[i] <= a[i]);
        }
    }
}

TEST_CASE("select_columns and scaled") {
    const auto s = small();
    const std::vector<std::size_t> cols{1};
    CHECK_CODE(s.select_columns(cols), ErrorCode::InvalidArgument);
    const std::vector<std::size_t> swap{1, 0};
    CHECK(s.select_columns(swap)(0, 0) == 9);
    CHECK(s.scaled(2.0)(1, 1) == 8);
}
