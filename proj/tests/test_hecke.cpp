#include "doctest.h"

#include <cstdint>

#include "halfint/errors.hpp"
#include "halfint/hecke.hpp"
#include "halfint/qseries.hpp"
#include "halfint/shimura.hpp"
#include "halfint/spaces.hpp"

using namespace halfint;

namespace {
HalfIntegralForm desk_form(int k, std::size_t prec = 400) {
    SpaceBasis space = plus_cusp_space(k, prec);
    REQUIRE(space.dimension() == 1);
    return normalize_at_t(eigenbasis(space, {3}).front());
}
} // namespace

TEST_CASE("T_{p^2} acts by the recorded eigenvalue") {
    HalfIntegralForm f = desk_form(6);
    for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
        HalfIntegralForm img = tp2_half(f, p);
        CHECK(img.coeffs.precision() == 400 / (p * p));
        const Rational lambda = img.coeffs.coeff(1);  // a(t) = 1 at t = 1
        QSeries scaled = f.coeffs.truncated(img.coeffs.precision());
        scaled *= lambda;
        CHECK(scaled == img.coeffs);
        CHECK(img.plus_space);
        CHECK(img.cusp);
    }
    CHECK(tp2_half(f, 3).coeffs.coeff(1) == 252);
    CHECK(tp2_half(f, 5).coeffs.coeff(1) == 4830);
    HalfIntegralForm g = desk_form(8);
    CHECK(tp2_half(g, 3).coeffs.coeff(1) == -3348);
}

TEST_CASE("T_{p^2} precision contract") {
    HalfIntegralForm f = desk_form(6);
    CHECK(tp2_half(f, 3).coeffs.precision() == 44);
    CHECK(tp2_half(f, 13).coeffs.precision() == 2);
    CHECK_THROWS_AS(static_cast<void>(tp2_half(f, 19)), PrecisionError);  // 400/361 < 2
    CHECK_THROWS_AS(static_cast<void>(tp2_half(f, 2)), std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(tp2_half(f, 9)), std::invalid_argument);
}

TEST_CASE("integral T_p acts on the discriminant form by its coefficient") {
    IntegralForm d(12, delta_series(101));
    d.primitive = true;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL}) {
        IntegralForm img = tp_integral(d, p);
        const Rational lambda = d.coeffs.coeff(p);
        QSeries scaled = d.coeffs.truncated(img.coeffs.precision());
        scaled *= lambda;
        CHECK(scaled == img.coeffs);
    }
    CHECK_THROWS_AS(static_cast<void>(tp_integral(d, 4)), std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(tp_integral(d, 97)), PrecisionError);  // 101/97 < 2
}

TEST_CASE("half-integral Hecke action commutes with the lift at p = 3") {
    HalfIntegralForm f = desk_form(6);
    HalfIntegralForm deep = extend_precision(f, 1901);
    HalfIntegralForm img = tp2_half(deep, 3);  // precision 211
    // largest n for which both routes have the data
    const auto fits = [&](std::size_t n) {
        return n * n < img.coeffs.precision() && 9 * n * n < deep.coeffs.precision();
    };
    std::size_t n_out = 2;
    while (fits(n_out + 1)) ++n_out;
    CHECK(n_out == 14);
    QSeries lhs = shimura_lift_series(img.coeffs, 6, 1, n_out + 1);
    IntegralForm lifted = shimura_lift(deep, n_out * 3 + 1);
    IntegralForm rhs = tp_integral(lifted, 3);
    CHECK(QSeries::agree_on_overlap(lhs, rhs.coeffs));
}

TEST_CASE("coefficient extraction insists on integrality") {
    IntegralForm F(12, delta_series(10));
    CHECK(F.coeff_int(2) == -24);
    F.coeffs.set_coeff(3, Rational(1, 2));
    CHECK_THROWS_AS(static_cast<void>(F.coeff_int(3)), std::domain_error);
}
