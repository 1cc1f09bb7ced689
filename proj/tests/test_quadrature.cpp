#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qkg/quadrature.hpp"

using namespace qkg;
using num::integrate_adaptive;
using num::QuadratureOptions;

TEST_CASE("polynomials integrate exactly", "[quadrature]") {
    auto out = integrate_adaptive([](double x) { return 3.0 * x * x; }, 0.0, 1.0);
    CHECK(out.value == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("smooth transcendentals hit tolerance", "[quadrature]") {
    auto sine = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(sine.value == Catch::Approx(2.0).margin(1e-8));

    auto expo = integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(expo.value == Catch::Approx(std::exp(1.0) - 1.0).margin(1e-8));
}

TEST_CASE("piecewise splitting handles step integrands", "[quadrature]") {
    auto step = [](double x) { return x >= 1.0 / 3.0 ? 1.0 : 0.0; };
    double a = integrate_adaptive(step, 0.0, 1.0 / 3.0).value;
    double b = integrate_adaptive(step, 1.0 / 3.0, 1.0).value;
    CHECK(a + b == Catch::Approx(2.0 / 3.0).margin(1e-12));
}

TEST_CASE("degenerate and invalid intervals", "[quadrature]") {
    auto out = integrate_adaptive([](double x) { return x; }, 2.0, 2.0);
    CHECK(out.value == 0.0);
    CHECK_THROWS_AS(integrate_adaptive([](double x) { return x; }, 1.0, 0.0), DomainError);
}

TEST_CASE("depth exhaustion raises a numerical error", "[quadrature]") {
    QuadratureOptions opt;
    opt.abs_tol = 1e-13;
    opt.max_depth = 4;
    CHECK_THROWS_AS(
        integrate_adaptive([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, opt),
        NumericalError);
}
