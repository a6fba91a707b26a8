#include <cmath>
#include <limits>
#include <random>

#include "../support/oracle.hpp"
#include "../support/properties.hpp"
#include "helpers.hpp"
#include "hrvkit/simulate.hpp"
#include "hrvkit/spectral.hpp"

using namespace hrvkit;
using namespace hrvkit::spectral;
using doctest::Approx;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

data::SampleMatrix small() { return data::SampleMatrix::from_rows({{5, 9}, {1, 4}, {3, 7}}); }

void check_atoms(const SpectralAtoms& got, const std::vector<oracle::Atom>& want) {
    REQUIRE(got.atoms.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(got.atoms[i].weight == want[i].weight);
        CHECK(got.atoms[i].point == want[i].point);
    }
}

} // namespace

TEST_CASE("standard estimator on the hand example") {
    const auto s = data::SampleMatrix::from_rows({{4, 2}, {2, 1}, {1, 4}, {0.5, 0.2}});
    const auto a = estimate_spectral_standard(s, 2, 2);
    REQUIRE(a.atoms.size() == 3);
    CHECK(a.atoms[0].point == std::vector<double>{2, 1});
    CHECK(a.atoms[1].point == std::vector<double>{2, 1});
    CHECK(a.atoms[2].point == std::vector<double>{1, 4});
    CHECK(a.atoms[0].weight == Approx(1.0 / 3.0));

    const auto one = estimate_spectral_standard(data::SampleMatrix::from_rows({{3, 6}}), 1, 1);
    REQUIRE(one.atoms.size() == 1);
    CHECK(one.atoms[0].point == std::vector<double>{0.5, 1});
    CHECK(one.atoms[0].weight == 1);

    const auto same = estimate_spectral_standard(
        data::SampleMatrix::from_rows({{2, 3}, {2, 3}, {2, 3}}), 1, 1);
    CHECK(same.total_weight() == Approx(1.0));
    for (const auto& atom : same.atoms) CHECK(atom.point == std::vector<double>{2.0 / 3.0, 1});

    CHECK_CODE(estimate_spectral_standard(s, 2, 5), ErrorCode::KTooLarge);
    CHECK_CODE(estimate_spectral_standard(s, 3, 1), ErrorCode::LevelOutOfRange);
    CHECK_CODE(estimate_spectral_standard(data::SampleMatrix::from_rows({{1, 0}, {2, 0}}), 2, 1),
               ErrorCode::AllZeroLevel);
}

TEST_CASE("rank estimator on the hand example") {
    const auto k1 = estimate_spectral_rank(small(), 2, 1);
    REQUIRE(k1.atoms.size() == 1);
    CHECK(k1.atoms[0].point == std::vector<double>{1, 1});
    const auto k2 = estimate_spectral_rank(small(), 2, 2);
    REQUIRE(k2.atoms.size() == 2);
    CHECK(k2.atoms[1].point == std::vector<double>{1, 1});
    CHECK(k2.atoms[0].weight == 0.5);
    const auto n1 = estimate_spectral_rank(data::SampleMatrix::from_rows({{3, 1, 2}}), 2, 1);
    CHECK(n1.atoms[0].point == std::vector<double>{1, 1, 1});
}

TEST_CASE("spectral estimators match the brute-force oracle exactly") {
    std::mt19937_64 g(5);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 1 + g() % 20, d = 2 + g() % 3;
        oracle::Matrix z(n, std::vector<double>(d));
        std::vector<double> flat;
        for (auto& row : z)
            for (auto& v : row) {
                v = 1.0 + static_cast<double>(g() % 9);
                flat.push_back(v);
            }
        const data::SampleMatrix s(n, d, flat);
        const std::size_t l = 1 + g() % d, k = 1 + g() % n;
        check_atoms(estimate_spectral_standard(s, l, k), oracle::spectral_standard(z, l, k));
        check_atoms(estimate_spectral_rank(s, l, k), oracle::spectral_rank(z, l, k));
    }
}

TEST_CASE("every estimated atom has l-th largest component exactly 1") {
    const auto s = simulated(simulate::Example::Ex2_4, 2000, 9);
    for (std::size_t l = 1; l <= 3; ++l) {
        for (const auto& a : estimate_spectral_standard(s, l, 100).atoms)
            REQUIRE(data::lth_largest(a.point, l) == 1.0);
        for (const auto& a : estimate_spectral_rank(s, l, 100).atoms)
            REQUIRE(data::lth_largest(a.point, l) == 1.0);
    }
}

TEST_CASE("standard estimator is scale invariant") {
    const auto s = simulated(simulate::Example::Ex2_2, 500, 1);
    const auto a = estimate_spectral_standard(s, 1, 50);
    const auto b = estimate_spectral_standard(s.scaled(8.0), 1, 50);
    REQUIRE(a.atoms.size() == b.atoms.size());
    for (std::size_t i = 0; i < a.atoms.size(); ++i) CHECK(a.atoms[i].point == b.atoms[i].point);
}

TEST_CASE("phi") {
    CHECK(phi(std::vector<double>{0.5, 0.3}, 2) == Approx(0.3));
    CHECK(phi(std::vector<double>{0.0, 0.0}, 2) == 0);
    CHECK(phi(std::vector<double>{0.3}, 1) == Approx(0.7));
    CHECK_CODE(phi(std::vector<double>{0.8, 0.3}, 1), ErrorCode::NotInSimplex);
    CHECK_CODE(phi(std::vector<double>{-0.1, 0.3}, 1), ErrorCode::NotInSimplex);
}

TEST_CASE("T and its inverse") {
    const auto s = transform_T(std::vector<double>{2, 1, 0.5}, 2);
    CHECK(s[0] == Approx(2.0 / 7.0));
    CHECK(s[1] == Approx(1.0 / 7.0));
    CHECK(transform_T(std::vector<double>{inf, 1, 1}, 2) == std::vector<double>{0, 0});
    CHECK(transform_T(std::vector<double>{1, 1}, 2)[0] == Approx(0.5));

    const auto back = transform_T_inverse(std::vector<double>{2.0 / 7.0, 1.0 / 7.0}, 2);
    CHECK(back[0] == Approx(2.0));
    CHECK(back[1] == Approx(1.0));
    CHECK(back[2] == Approx(0.5));
    CHECK(transform_T_inverse(std::vector<double>{0, 0}, 2) == std::vector<double>{1, 1, 1});
    CHECK(transform_T_inverse(std::vector<double>{0.5}, 2) == std::vector<double>{1, 1});
    CHECK_CODE(transform_T(std::vector<double>{2, 3, 0.5}, 2), ErrorCode::InvalidArgument);
}

TEST_CASE("transform_measure keeps weights and flags sentinels") {
    SpectralAtoms a{2, 3, {{0.25, {2, 1, 0.5}}, {0.75, {inf, 1, 1}}}};
    const auto t = transform_measure(a);
    REQUIRE(t.atoms.size() == 2);
    CHECK(t.atoms[0].point[0] == Approx(2.0 / 7.0));
    CHECK_FALSE(t.atoms[0].sentinel);
    CHECK(t.atoms[1].sentinel);
    CHECK(t.sentinel_count() == 1);
    CHECK(t.sentinel_weight() == 0.75);
}

TEST_CASE("property suites (reduced size)") {
    for (const auto& r : props::all(1000, 2024)) {
        INFO(r.name << ": " << r.first_failure);
        CHECK(r.ok());
    }
}

TEST_CASE("interval density: peaked, flat, normalized") {
    DensityOptions opts;
    opts.bandwidth = 0.02;
    const std::vector<double> w{1.0}, v{0.5};
    const auto peak = density_estimate_interval(w, v, opts);
    const auto top = std::max_element(peak.values.begin(), peak.values.end()) - peak.values.begin();
    CHECK(peak.x[static_cast<std::size_t>(top)] == Approx(0.5));
    CHECK(peak.integral() == Approx(1.0).epsilon(0.02));

    std::vector<double> ww, vv;
    for (int i = 0; i <= 400; ++i) {
        ww.push_back(1.0);
        vv.push_back(i / 400.0);
    }
    const auto flat = density_estimate_interval(ww, vv, {});
    for (double y : flat.values) CHECK(y == Approx(1.0).epsilon(0.05));
    CHECK(flat.integral() == Approx(1.0).epsilon(0.02));

    opts.bandwidth = -1.0;
    CHECK_CODE(density_estimate_interval(w, v, opts), ErrorCode::BadBandwidth);
    CHECK_CODE(density_estimate_interval(w, v, {}), ErrorCode::BadBandwidth);  // zero spread
    CHECK_CODE(density_estimate_interval(std::vector<double>{}, std::vector<double>{}, {}),
               ErrorCode::NoMass);
}

TEST_CASE("simplex density integrates to one and excludes sentinels") {
    TransformedAtoms t{2, 3, {}};
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        double a = u(g), b = u(g);
        if (a + b > 1.0) {
            a = 1.0 - a;
            b = 1.0 - b;
        }
        t.atoms.push_back({1.0 / 301.0, {a, b}, false});
    }
    t.atoms.push_back({1.0 / 301.0, {0.0, 0.0}, true});
    const auto curve = density_estimate(t, {});
    CHECK(curve.dim == 3);
    CHECK(curve.integral() == Approx(1.0).epsilon(0.02));
    CHECK(curve.excluded_mass == Approx(1.0 / 301.0));

    TransformedAtoms only_sentinel{2, 3, {{1.0, {0.0, 0.0}, true}}};
    CHECK_CODE(density_estimate(only_sentinel, {}), ErrorCode::NoMass);
    TransformedAtoms d4{2, 4, {{1.0, {0.2, 0.2, 0.2}, false}}};
    CHECK_CODE(density_estimate(d4, {}), ErrorCode::InvalidArgument);
}

TEST_CASE("density on the d = 2 transformed measure integrates to one") {
    const auto s = simulated(simulate::Example::Sec7_1, 5000, 3);
    const auto curve = density_estimate(transform_measure(estimate_spectral_rank(s, 2, 1000)), {});
    CHECK(curve.integral() == Approx(1.0).epsilon(0.02));
    DensityOptions serial;
    serial.parallel = false;
    const auto again = density_estimate(transform_measure(estimate_spectral_rank(s, 2, 1000)), serial);
    CHECK(again.values == curve.values);
}
