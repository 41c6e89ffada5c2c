#include <cmath>
#include <complex>

#include "asepqh/qfun.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace asepqh;

TEST_CASE("qfun: finite q-Pochhammer products") {
    CHECK(qpoch(0.7, 0.5, 0) == 1.0);
    const double z = 0.3, q = 0.6;
    double direct = 1.0;
    for (int k = 0; k < 7; ++k) direct *= 1.0 - z * std::pow(q, k);
    CHECK(qpoch(z, q, 7) == doctest::Approx(direct).epsilon(1e-14));

    const std::complex<double> zc(0.4, 0.2);
    std::complex<double> cd = 1.0;
    for (int k = 0; k < 5; ++k) cd *= 1.0 - zc * std::pow(q, k);
    const std::complex<double> got = qpoch(zc, q, 5);
    CHECK(std::abs(got - cd) <= 1e-14);
}

TEST_CASE("qfun: infinite product truncation") {
    CHECK(qpoch_inf(0.3, 0.0) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(qpoch_inf(0.3, 0.5) ==
          doctest::Approx(qpoch(0.3, 0.5, 400)).epsilon(1e-15));
    for (double q : {0.1, 0.5, 0.9}) {
        const int terms = qproduct_terms(q);
        CHECK(terms >= 1);
        CHECK(std::pow(q, terms) <= 1e-16);
    }
    CHECK(qproduct_terms(0.0) >= 1);
}

TEST_CASE("qfun: conjugate pair product") {
    const double q = 0.6;
    const std::complex<double> z(0.4, 0.3);
    const int terms = qproduct_terms(q);
    const std::complex<double> pair =
        qpoch(z, q, terms) * qpoch(std::conj(z), q, terms);
    CHECK(qpoch_pair_inf(z.real(), std::norm(z), q) ==
          doctest::Approx(pair.real()).epsilon(1e-13));
    CHECK(std::fabs(pair.imag()) <= 1e-15);
}

TEST_CASE("qfun: q-numbers") {
    CHECK(qnum(0, 0.5) == 0.0);
    CHECK(qnum(1, 0.5) == 1.0);
    CHECK(qnum(3, 0.5) == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(qnum(4, 0.0) == 1.0);
    CHECK(qnum(3, 0.3) == doctest::Approx(1.0 + 0.3 + 0.09).epsilon(1e-15));
}

TEST_CASE("qfun: polynomial evaluation and derivative") {
    const std::vector<double> c = {1.0, 2.0, 3.0};
    CHECK(polyval(c, 2.0) == doctest::Approx(17.0).epsilon(1e-15));
    CHECK(polyval({}, 5.0) == 0.0);
    const std::vector<double> d = polyder(c);
    REQUIRE(d.size() == 2);
    CHECK(d[0] == 2.0);
    CHECK(d[1] == 6.0);
    CHECK(polyval(polyder({5.0}), 3.0) == 0.0);
}
