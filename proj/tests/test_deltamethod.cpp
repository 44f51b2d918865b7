#include "doctest.h"

#include <cmath>

#include "qdl/corpus.hpp"
#include "qdl/deltamethod.hpp"
#include "qdl/expsums.hpp"
#include "qdl/report.hpp"

using namespace qdl;

TEST_CASE("envelopes") {
    double eps = 0.05;
    for (double B : {10.0, 100.0}) {
        auto e = envelope(parse_form("1,1,1,-1"), B, Theorem::Thm1, eps);
        CHECK(e.value == doctest::Approx(B * B + std::pow(B, 1.5 + eps)));
        CHECK(e.epsilon_used == eps);
        auto f = envelope(parse_form("1,1,1,1,-1"), B, Theorem::Thm2, eps);
        CHECK(f.value == doctest::Approx(std::pow(B, 1.5) + std::pow(B, 1 + eps)));
    }
    CHECK_THROWS(envelope(parse_form("1,1,1,-100"), 10, Theorem::Corollary));
    CHECK_NOTHROW(envelope(parse_form("1,2,3,-4"), 10, Theorem::Corollary));
    CHECK_THROWS(envelope(parse_form("1,1,-1,-1"), 10, Theorem::Thm1));
    CHECK_THROWS(envelope(parse_form("1,1,1,-1"), 10, Theorem::Thm2));
    CHECK(envelope(parse_form("1,1,-1"), 8, Theorem::HbN2, 0).value == doctest::Approx(8));
    CHECK(parse_theorem(theorem_name(Theorem::Corollary)) == Theorem::Corollary);
}

TEST_CASE("main term scales as B^{n-2}") {
    auto Q = parse_form("1,1,1,-1");
    double a = main_term(Q, 10), b = main_term(Q, 20);
    CHECK(a > 0);
    CHECK(b / a == doctest::Approx(4.0).epsilon(1e-14));
    CHECK_THROWS(main_term(parse_form("1,1,-1,-1"), 10));
}

TEST_CASE("reconstruction ledger") {
    auto Q = parse_form("1,1,1,-1");
    ReconstructOptions o;
    o.q_max = 12;
    o.c_max = 1;
    o.main = false;
    auto r = reconstruct(Q, 5, o);
    double s = 0;
    for (auto& e : r.ledger) s += e.contribution;
    CHECK(s == r.reconstructed);
    CHECK(r.ledger.size() == 24);
    CHECK(r.exact_weighted > 0);
    // S_2(0) = 0, so the q = 2, c = 0 block is empty
    o.c_max = 0;
    auto z = reconstruct(Q, 5, o);
    CHECK(z.ledger[1].q == 2);
    CHECK(z.ledger[1].contribution == 0);
    // equal forms up to order give identical sums
    auto P = reconstruct(parse_form("-1,1,1,1"), 5, o);
    CHECK(P.reconstructed == z.reconstructed);
    CHECK_THROWS(reconstruct(parse_form("1,1,-1,-1"), 5, o));
    CHECK_THROWS(reconstruct(parse_form("1,1,-1"), 5, o));
}

TEST_CASE("the c = 0 ledger matches the singular-series partial sum") {
    auto Q = parse_form("1,1,1,1,-1");
    ReconstructOptions o;
    o.q_max = 6;
    o.c_max = 0;
    o.main = false;
    o.exact = false;
    auto r = reconstruct(Q, 6, o);
    // contribution = q^{-n} S_q(0) I_q(0) / X^2; divide out the integral
    ExpSumEngine E(r.form);
    double sp = 0;
    for (auto& e : r.ledger) {
        auto I = iq_integral(r.form, 6, e.q, std::vector<i64>(5, 0), WeightDescriptor::wdag(5));
        double S = E.S(e.q, std::vector<i64>(5, 0));
        CHECK(e.contribution == doctest::Approx(S * I.value.real() / (36.0 * std::pow((double)e.q, 5))).epsilon(1e-4));
        sp += S / std::pow((double)e.q, 5);
    }
    CHECK(sp == doctest::Approx(singular_partial(r.form, 6)).epsilon(1e-14));
}

TEST_CASE("sweep") {
    CHECK(sweep({}, {8, 16}).empty());
    CorpusSpec cs;
    cs.seed = 3;
    cs.ns = {4, 5};
    cs.count = 2;
    cs.amax = 5;
    cs.nonsquare = true;
    auto rows = sweep(generate_corpus(cs), {4, 8});
    CHECK(rows.size() == 4);
    for (auto& r : rows) {
        CHECK(r.error.empty());
        CHECK(r.majorant_ok);
        CHECK(r.N >= 1);
        CHECK(std::isfinite(r.ratio_thm1));
        CHECK(r.sigma_inf >= 0);
    }
    CHECK(std::isnan(rows[0].ratio_thm2));
    CHECK(std::isfinite(rows[2].ratio_thm2));
}

TEST_CASE("corpus") {
    CorpusSpec cs;
    cs.seed = 42;
    cs.ns = {4};
    cs.count = 50;
    cs.nonsquare = true;
    auto a = generate_corpus(cs), b = generate_corpus(cs);
    CHECK(a == b);
    CHECK(a.size() == 50);
    for (auto& Q : a) {
        CHECK(Q.n() == 4);
        CHECK_FALSE(is_square(invariants_of(Q).disc));
        for (auto& c : Q.coeffs()) CHECK(abs(c) <= 10);
    }
    cs.seed = 43;
    CHECK(generate_corpus(cs) != a);
    cs.same_order = true;
    cs.amin = 5;
    cs.amax = 10;
    for (auto& Q : generate_corpus(cs)) CHECK(invariants_of(Q).height <= 4 * invariants_of(Q).min_coeff);
    CorpusSpec bad;
    bad.ns = {4};
    bad.amin = bad.amax = 2;
    CHECK_THROWS(generate_corpus(bad));  // never primitive
    SplitMix64 g(0);
    CHECK(g.next() == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("report output") {
    CHECK(sweep_csv({}) ==
          "index,form,B,N,X,M,env_thm1,ratio_thm1,env_thm2,ratio_thm2,singular_series,sigma_inf,majorant,"
          "majorant_constant,majorant_ok,error\n");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CorpusSpec cs;
    cs.seed = 8;
    cs.count = 2;
    auto rows = sweep(generate_corpus(cs), {4}, {0.05, false});
    auto j1 = dump_json(sweep_json(rows)), j2 = dump_json(sweep_json(sweep(generate_corpus(cs), {4}, {0.05, false})));
    CHECK(j1 == j2);
    auto parsed = nlohmann::json::parse(j1);
    CHECK(parsed["schema_version"] == kSchemaVersion);
    CHECK(parsed["rows"].size() == 2);
    CHECK(parsed["rows"][0]["N"].get<std::uint64_t>() == rows[0].N);
    CHECK(parsed["rows"][0]["singular_series"].is_null());
    CHECK_THROWS(write_file("/nonexistent-dir/x.json", "{}"));
}
