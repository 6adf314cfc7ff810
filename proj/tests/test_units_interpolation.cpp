#include <doctest.h>

#include <cmath>
#include <vector>

#include "qdmnp/interpolation.hpp"
#include "qdmnp/units.hpp"

using namespace qdmnp;

TEST_CASE("unit conversions round-trip") {
    for (double v : {1e-6, 0.7, 3.3, 1e7}) {
        CHECK(units::dipole_from_SI(units::dipole_to_SI(v)) == doctest::Approx(v).epsilon(1e-12));
        CHECK(units::field_from_SI(units::field_to_SI(v)) == doctest::Approx(v).epsilon(1e-12));
        CHECK(units::energy_from_SI(units::energy_to_SI(v)) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("dipole of 0.7 e nm is 33.62 Debye") {
    CHECK(units::dipole_to_debye(0.7) == doctest::Approx(33.62).epsilon(1e-4));
}

TEST_CASE("one field unit is 1e6 V/m") {
    // 1 meV / (e nm) = 1e-3 V / 1e-9 m
    CHECK(units::field_to_SI(1.0) == doctest::Approx(1e-3 / 1e-9));
    CHECK(units::rate(units::hbar_meV_ps) == doctest::Approx(1.0));
}

TEST_CASE("monotone cubic reproduces nodes") {
    const std::vector<double> x{0.0, 0.5, 1.2, 2.0, 3.1, 4.0};
    const std::vector<double> y{1.0, -2.0, 0.3, 0.3, 5.0, 4.0};
    MonotoneCubic<double> f(x, y);
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(f(x[k]) == y[k]);
}

TEST_CASE("monotone cubic is exact on linear data") {
    std::vector<double> x, y;
    for (int k = 0; k < 7; ++k) {
        x.push_back(1.0 + 0.37 * k * k);
        y.push_back(x.back());
    }
    MonotoneCubic<double> f(x, y);
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        const double mid = 0.5 * (x[k] + x[k + 1]);
        CHECK(std::abs(f(mid) - mid) < 1e-12);
        CHECK(std::abs(f.derivative(mid) - 1.0) < 1e-12);
    }
}

TEST_CASE("monotone data gives a monotone interpolant") {
    const std::vector<double> x{0, 1, 2, 3, 4, 5, 6};
    const std::vector<double> y{0, 0.1, 0.2, 5.0, 5.1, 5.15, 9.0};
    MonotoneCubic<double> f(x, y);
    double prev = f(0.0);
    for (int k = 1; k <= 600; ++k) {
        const double v = f(0.01 * k);
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
}

TEST_CASE("no overshoot at a local extremum of the data") {
    const std::vector<double> x{0, 1, 2, 3, 4};
    const std::vector<double> y{0, 1, 3, 1, 0};
    MonotoneCubic<double> f(x, y);
    CHECK(f.slopes()[2] == 0.0);
    for (int k = 0; k <= 400; ++k) CHECK(f(0.01 * k) <= 3.0 + 1e-15);
}

TEST_CASE("derivative matches central differences at interior nodes of a smooth table") {
    std::vector<double> x, y;
    for (int k = 0; k < 40; ++k) {
        x.push_back(1.0 + 0.1 * k);
        y.push_back(std::log(x.back()) + 0.2 * x.back());
    }
    MonotoneCubic<double> f(x, y);
    for (std::size_t k = 1; k + 1 < x.size(); ++k) {
        const double fd = (y[k + 1] - y[k - 1]) / (x[k + 1] - x[k - 1]);
        CHECK(std::abs(f.derivative(x[k]) - fd) < 0.05 * std::abs(fd));
    }
}

TEST_CASE("derivative is continuous across nodes") {
    const std::vector<double> x{0, 0.3, 1.0, 1.6, 2.5, 3.0};
    const std::vector<double> y{0, 0.5, 0.9, 1.5, 1.6, 2.4};
    MonotoneCubic<double> f(x, y);
    for (std::size_t k = 1; k + 1 < x.size(); ++k) {
        CHECK(f.derivative(x[k] - 1e-9) == doctest::Approx(f.derivative(x[k] + 1e-9)).epsilon(1e-6));
    }
}

TEST_CASE("long double instantiation") {
    const std::vector<long double> x{0, 1, 2, 3};
    const std::vector<long double> y{0, 1, 4, 9};
    MonotoneCubic<long double> f(x, y);
    CHECK(static_cast<double>(f(2.0L)) == 4.0);
}
