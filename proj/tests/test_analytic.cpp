#include "doctest.h"

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "qdl/integrals.hpp"
#include "qdl/weights.hpp"

using namespace qdl;

TEST_CASE("bump and its integral") {
    CHECK(w0(0) == doctest::Approx(std::exp(-1.0)));
    CHECK(w0(1) == 0);
    CHECK(w0(-1) == 0);
    CHECK(w0(1.5) == 0);
    boost::math::quadrature::tanh_sinh<double> ts;
    double c0 = ts.integrate([](double x) { return std::exp(-1 / (1 - x * x)); }, -1.0, 1.0);
    CHECK(c0_const() == doctest::Approx(c0).epsilon(1e-12));
    CHECK(c0_const() == doctest::Approx(0.443993816168).epsilon(1e-11));
    // the kernel bump has unit mass
    double m = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(omega_hb, 0.5, 1.0, 10, 1e-14);
    CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("omega_eps") {
    for (double eps : {0.1, 0.5, 1.0}) {
        double prev = -1;
        for (int i = -100; i <= 400; ++i) {
            double x = i * eps / 100;
            double v = omega_eps(eps, x);
            CHECK(v >= prev);
            CHECK(v >= 0);
            CHECK(v <= 1);
            if (x <= 0) CHECK(v == 0);
            if (x >= 2 * eps) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
            prev = v;
        }
        CHECK(omega_eps(eps, eps) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("kernel h") {
    CHECK(h_eval(2, 0.3) == 0);
    double w6 = 4 / c0_const() * std::exp(-1 / 0.64), w9 = 4 / c0_const() * w0(4 * 0.9 - 3);
    CHECK(omega_hb(0.6) == doctest::Approx(w6).epsilon(1e-13));
    CHECK(h_eval(0.6, 0) == doctest::Approx(w6 / 0.6).epsilon(1e-13));
    CHECK(h_eval(0.3, 0) == doctest::Approx(w6 / 0.6 + w9 / 0.9).epsilon(1e-13));
    CHECK_THROWS(h_eval(0, 1));
    // a direct truncation-free sum over a generous j range
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(0, 1);
    for (int i = 0; i < 300; ++i) {
        double x = 0.02 + U(rng) * 1.5, y = (U(rng) * 2 - 1) * 2;
        double s = 0;
        for (int j = 1; j <= 2000; ++j) s += (omega_hb(x * j) - omega_hb(std::fabs(y) / (x * j))) / (x * j);
        CHECK(h_eval(x, y) == doctest::Approx(s).epsilon(1e-12).scale(1e-12));
    }
    for (int i = 0; i < 20000; ++i) {
        double y = (U(rng) * 2 - 1) * 3;
        double x = std::max(1.0, 2 * std::fabs(y)) * (1 + 1e-12) + U(rng) * 3;
        CHECK(h_eval(x, y) == 0);
    }
}

TEST_CASE("weights") {
    auto w = WeightDescriptor::wdag(4);
    CHECK(weight_eval(w, {2, 0, 0, 0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(weight_eval(w, {0.9, 0, 0, 0}) == 0);
    CHECK(weight_eval(w, {2, 2.1, 0, 0}) == 0);
    CHECK(weight_eval(w, {2, 0.5, -0.5, 1}) == doctest::Approx(weight_eval(w, {2, -0.5, 0.5, -1})));
    auto Q = parse_form("4,-1,-9");
    auto wq = WeightDescriptor::wq(Q);
    CHECK(weight_eval(wq, {0.5, 0, 0}) == doctest::Approx(std::exp(-3.0)));
    CHECK_THROWS(weight_eval(w, {1, 2}));
    CHECK(parse_weight("wdag", Q).name() == "wdag");
    CHECK_THROWS(parse_weight("nope", Q));
}

TEST_CASE("sheet integrator against tensor quadrature") {
    auto Q = parse_form("1,-1,-2");
    auto w = WeightDescriptor::wdag(3);
    struct Case {
        i64 q;
        std::vector<i64> c;
    };
    for (auto& k : std::vector<Case>{{3, {0, 0, 0}}, {4, {1, 0, 0}}, {7, {-2, 1, 0}}, {9, {3, -2, 1}}, {30, {0, 1, 1}}}) {
        auto a = iq_integral(Q, 3, k.q, k.c, w);
        auto b = iq_tensor(Q, 3, k.q, k.c, w, 12, 5e7);
        double tol = 3 * (a.abs_err + b.abs_err) + 1e-9;
        CHECK(std::abs(a.value - b.value) <= tol);
    }
    auto wq = WeightDescriptor::w0_product({1.0, 0.3, 0.2}, {0.35, 0.35, 0.35});
    for (auto& k : std::vector<Case>{{6, {0, 0, 0}}, {6, {3, -2, 1}}, {6, {-1, 0, 8}}}) {
        auto a = iq_integral(Q, 6, k.q, k.c, wq);
        auto b = iq_tensor(Q, 6, k.q, k.c, wq, 12, 5e7);
        CHECK(std::abs(a.value - b.value) <= 3 * (a.abs_err + b.abs_err) + 1e-9);
    }
}

TEST_CASE("integral symmetries and support") {
    auto Q = parse_form("1,-1,-1,-1,-1");
    auto w = WeightDescriptor::wdag(5);
    auto a = iq_integral(Q, 10, 7, {2, 1, 0, -1, 1}, w);
    auto b = iq_integral(Q, 10, 7, {-2, -1, 0, 1, -1}, w);
    CHECK(std::abs(a.value - std::conj(b.value)) < 1e-9 * std::abs(a.value) + 1e-9);
    // matched r = q/X and c B/q at two scales
    auto s1 = iq_integral(Q, 10, 5, {1, 0, 0, 0, 0}, w);
    auto s2 = iq_integral(Q, 20, 10, {1, 0, 0, 0, 0}, w);
    CHECK(std::abs(s1.value / 1e5 - s2.value / 3.2e6) <= 3 * (s1.abs_err / 1e5 + s2.abs_err / 3.2e6) + 1e-9);
    double ymin, ymax;
    r_range(Q, w, ymin, ymax);
    CHECK(ymin == doctest::Approx(-27));
    CHECK(ymax == doctest::Approx(9));
    i64 qv = vanishing_threshold(Q, 10, w);
    CHECK(qv == 540);
    CHECK(iq_integral(Q, 10, qv + 1, {0, 0, 0, 0, 0}, w).value == cplx(0, 0));
    auto z = iq_integral(Q, 10, 3, {0, 0, 0, 0, 0}, w);
    CHECK(std::fabs(z.value.imag()) < 1e-9 * std::fabs(z.value.real()));
}

TEST_CASE("sigma_infinity") {
    // (1,-1,-1): on the cone x1 = rho, the sheet integral separates in polar coordinates
    boost::math::quadrature::tanh_sinh<double> ts;
    double ang = 4 * ts.integrate([](double t) { return omega_eps(0.5, 1 - std::cos(t)) * omega_eps(0.5, 1 - std::sin(t)); },
                                  0.0, M_PI / 2);
    double expect = 0.5 * c0_const() * ang;
    auto s = sigma_infinity(parse_form("1,-1,-1"), WeightDescriptor::wdag(3), 1e-9, 4);
    CHECK(s.value == doctest::Approx(expect).epsilon(1e-8));
    auto r = sigma_infinity(parse_form("1,-1,-1,-1,-1"), WeightDescriptor::wdag(5), 1e-6, 2);
    CHECK(r.value == doctest::Approx(0.53282418).epsilon(1e-7));
    // the cone misses the support
    CHECK(sigma_infinity(parse_form("4,-1,-1"), WeightDescriptor::wdag(3)).value == 0);
    // I_q(0) / B^n approaches A_1 sigma_inf once the kernel width r = q/X is tiny
    auto big = iq_integral(parse_form("1,-1,-1"), 200, 1, {0, 0, 0}, WeightDescriptor::wdag(3));
    CHECK(big.value.real() / 8e6 == doctest::Approx(expect).epsilon(0.1));
}

TEST_CASE("decay report") {
    auto Q = parse_form("1,-1,-1,-1");
    auto w = WeightDescriptor::wdag(4);
    CHECK_THROWS(decay_check(Q, 10, 5, {0, 0, 0, 0}, w));
    auto d1 = decay_check(Q, 10, 5, {4, 0, 0, 0}, w);
    auto d2 = decay_check(Q, 10, 5, {8, 0, 0, 0}, w);
    CHECK(std::isfinite(d1.ratio_n2));
    CHECK(std::isfinite(d1.ratio_small));
    CHECK(d2.abs_value * 8 <= d1.abs_value);
}
