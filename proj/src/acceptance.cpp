#include "qdl/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "qdl/corpus.hpp"
#include "qdl/counting.hpp"
#include "qdl/densities.hpp"
#include "qdl/expsums.hpp"
#include "qdl/integrals.hpp"
#include "qdl/weights.hpp"

#ifndef QDL_DATA_DIR
#define QDL_DATA_DIR "tests/data"
#endif

namespace qdl {

namespace {

std::string fmt(const char* f, double v) {
    char b[64];
    std::snprintf(b, sizeof b, f, v);
    return b;
}

DiagonalForm reference_form() { return DiagonalForm::make(std::vector<i64>{1, 1, 1, 1, -1}); }

CriterionResult c1_counting() {
    CriterionResult r{1, "counting: meet-in-the-middle equals enumeration"};
    auto t0 = std::chrono::steady_clock::now();
    CorpusSpec cs;
    cs.seed = 101;
    cs.ns = {4, 5};
    cs.amax = 10;
    cs.count = 50;
    auto corpus = generate_corpus(cs);
    int mismatches = 0;
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        i64 B = 1 + (i64)(k % 12);
        if (corpus[k].n() == 5) B = 1 + (i64)(k % 8);  // keeps the enumeration within the time budget
        auto mitm = count_box(corpus[k], B, CountMethod::Mitm).count;
        auto enu = enumerate_oracle(corpus[k], B).size();
        if (mitm != enu) ++mismatches;
    }
    auto a1 = count_box(DiagonalForm::make(std::vector<i64>{1, 1, -1, -1}), 1).count;
    auto a2 = count_box(DiagonalForm::make(std::vector<i64>{1, 1, 1, -1}), 1).count;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = mismatches == 0 && a1 == 33 && a2 == 13 && secs <= 60;
    r.detail = std::to_string(corpus.size()) + " forms, mismatches=" + std::to_string(mismatches) +
               ", N(1,1,-1,-1;1)=" + std::to_string(a1) + ", N(1,1,1,-1;1)=" + std::to_string(a2) + fmt(", %.1fs", secs);
    return r;
}

CriterionResult c2_expsums() {
    CriterionResult r{2, "exponential sums: direct, multiplicative and closed form agree"};
    CorpusSpec cs;
    cs.seed = 202;
    cs.ns = {4};
    cs.amax = 10;
    cs.count = 20;
    auto corpus = generate_corpus(cs);
    double worst = 0, worst_int = 0;
    long compared = 0, closed = 0, zero_branch = 0, unit_branch = 0;
    std::mt19937_64 rng(7);
    for (auto& Q : corpus) {
        std::vector<std::vector<i64>> cvecs{{0, 0, 0, 0}, {1, 0, 0, 0}, {1, 2, 0, 1}};
        for (auto& c : cvecs) {
            for (i64 q = 1; q <= 400; ++q) {
                auto d = sq_direct(Q, q, c);
                auto m = sq_multiplicative(Q, q, c);
                worst = std::max(worst, std::fabs(d.value - m.value));
                worst_int = std::max(worst_int, std::fabs(d.value - (double)d.rounded));
                ++compared;
            }
        }
        auto D = invariants_of(Q).disc;
        for (i64 p : primes_up_to(101)) {
            if (p == 2 || mpz_divisible_ui_p(D.get_mpz_t(), p)) continue;
            for (auto& c : cvecs) {
                auto d = sq_direct(Q, p, c);
                long long cf = sp_closed(Q, p, c);
                worst = std::max(worst, std::fabs(d.value - (double)cf));
                ++closed;
                mpz_class qi = q_inverse_scaled(Q, c);
                if (mpz_divisible_ui_p(qi.get_mpz_t(), p))
                    ++zero_branch;
                else
                    ++unit_branch;
            }
        }
        for (int s = 0; s < 3; ++s) {
            i64 q = 1 + (i64)(rng() % 2000);
            auto d = sq_direct(Q, q, cvecs[s % 3]);
            worst_int = std::max(worst_int, std::fabs(d.value - (double)d.rounded));
        }
    }
    r.pass = worst < 1e-6 && worst_int < 1e-6 && zero_branch > 0 && unit_branch > 0;
    r.detail = std::to_string(compared) + " direct/multiplicative pairs, " + std::to_string(closed) +
               " closed-form values (branches " + std::to_string(zero_branch) + "/" + std::to_string(unit_branch) +
               ")" + fmt(", max diff %.3g", worst) + fmt(", max |value-rounded| %.3g", worst_int);
    return r;
}

CriterionResult c3_local_identity() {
    CriterionResult r{3, "p^{-k(n-1)} N_k(p) equals the exponential-sum partial sum"};
    CorpusSpec cs;
    cs.seed = 303;
    cs.ns = {4, 5};
    cs.amax = 10;
    cs.count = 50;
    auto corpus = generate_corpus(cs);
    long checks = 0, failures = 0;
    for (auto& Q : corpus) {
        std::size_t n = Q.n();
        std::vector<i64> zero(n, 0);
        for (i64 p : {3, 5, 7}) {
            mpq_class rhs = 1;
            mpz_class pk = 1;
            for (int k = 1;; ++k) {
                pk *= p;
                if (pk * pk > 1000000) break;
                i64 q = pk.get_si();
                auto s = sq_direct(Q, q, zero);
                mpz_class qn;
                mpz_pow_ui(qn.get_mpz_t(), pk.get_mpz_t(), n);
                rhs += mpq_class(mpz_class((long)s.rounded), qn);
                rhs.canonicalize();
                mpz_class den;
                mpz_pow_ui(den.get_mpz_t(), pk.get_mpz_t(), n - 1);
                mpq_class lhs(nk_count(Q, p, k, NkMethod::Convolution, 1e6), den);
                lhs.canonicalize();
                ++checks;
                if (lhs != rhs) ++failures;
            }
        }
    }
    r.pass = failures == 0;
    r.detail = std::to_string(checks) + " (form, p, k) identities, " + std::to_string(failures) + " failures";
    return r;
}

CriterionResult c4_sigma3() {
    CriterionResult r{4, "sigma_3 of (1,1,1,-1) is 5/6"};
    auto Q = DiagonalForm::make(std::vector<i64>{1, 1, 1, -1});
    auto d = sigma_p(Q, 3);
    bool partials_ok = d.partials.size() > 2 && d.partials[0] == 1 && d.partials[1] == mpq_class(7, 9);
    for (int k = 1; k <= 5 && k < (int)d.partials.size(); ++k) {
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 3, 3 * k);
        mpq_class v(nk_count(Q, 3, k, NkMethod::Convolution), den);
        v.canonicalize();
        if (v != d.partials[k]) partials_ok = false;
    }
    double err = std::fabs(d.value - 5.0 / 6.0);
    r.pass = partials_ok && err < 1e-6;
    r.detail = "sigma_3=" + format_double(d.value) + " (" + d.method + ")" + fmt(", |diff|=%.3g", err) +
               (partials_ok ? ", partials 1, 7/9, ... match N_k" : ", partials disagree with N_k");
    return r;
}

CriterionResult c5_stag() {
    CriterionResult r{5, "N_k(p) <= 4 p^{k(n-1)} for odd p dividing the discriminant"};
    CorpusSpec cs;
    cs.seed = 505;
    cs.ns = {4, 5};
    cs.amax = 30;
    cs.count = 50;
    auto corpus = generate_corpus(cs);
    int checked = 0, viol = 0;
    double mx = 0;
    for (auto& Q : corpus) {
        auto s = stag_check(Q);
        checked += s.checked;
        viol += s.violations;
        mx = std::max(mx, s.max_ratio);
    }
    r.pass = viol == 0 && checked > 0;
    r.detail = std::to_string(checked) + " (p, k) checks, " + std::to_string(viol) + " violations" +
               fmt(", max N_k/(4p^{k(n-1)})=%.4f", mx);
    return r;
}

CriterionResult c6_singular_growth() {
    CriterionResult r{6, "log S / log|Delta| stays small"};
    CorpusSpec cs;
    cs.seed = 606;
    cs.ns = {4, 5};
    cs.amax = 40;
    cs.count = 100;
    cs.nonsquare = true;
    cs.min_abs_disc = 100;
    cs.max_abs_disc = 1e6;
    auto corpus = generate_corpus(cs);
    std::vector<double> ratios;
    for (auto& Q : corpus) {
        double D = std::fabs(invariants_of(Q).disc.get_d());
        double S = singular_series(Q).value;
        ratios.push_back(std::log(S) / std::log(D));
    }
    auto sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    double mx = sorted.back();
    r.pass = std::isfinite(mx) && mx <= 0.25;
    r.detail = std::to_string(ratios.size()) + " forms, log S/log|D|: min " + fmt("%.4f", sorted.front()) +
               ", median " + fmt("%.4f", sorted[sorted.size() / 2]) + ", max " + fmt("%.4f", mx);
    return r;
}

CriterionResult c7_kernel_support() {
    CriterionResult r{7, "h vanishes for x > max(1, 2|y|); omega_eps saturates"};
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int nonzero = 0;
    for (int i = 0; i < 100000; ++i) {
        double y = (U(rng) * 2 - 1) * 5;
        double lo = std::max(1.0, 2 * std::fabs(y));
        double x = lo * (1 + 1e-12) + U(rng) * 10;
        if (h_eval(x, y) != 0.0) ++nonzero;
    }
    double worst = 0;
    for (double eps : {0.01, 0.1, 0.25, 0.5, 1.0, 2.0})
        for (int i = 0; i < 1000; ++i) {
            double x = 2 * eps + U(rng) * 5;
            worst = std::max(worst, std::fabs(omega_eps(eps, x) - 1));
        }
    r.pass = nonzero == 0 && worst <= 1e-10;
    r.detail = std::to_string(nonzero) + " nonzero kernel values of 100000" + fmt(", max |omega_eps - 1| = %.3g", worst);
    return r;
}

CriterionResult c8_c0_behaviour() {
    CriterionResult r{8, "I_q(0) / (A_1 sigma_inf B^n) tends to 1 as q/B shrinks"};
    auto Q = reference_form();
    auto O = orient_for_weight(Q);
    auto w = WeightDescriptor::wdag(Q.n());
    double A1 = O.form.coeff(0).get_d();
    auto si = sigma_infinity(O.form, w, 1e-6, 3);
    const i64 B = 20;
    double Bn = std::pow((double)B, (double)Q.n());
    std::vector<double> dev;
    std::string d;
    for (i64 q : {1, 2, 4, 8}) {
        auto I = iq_integral(O.form, B, q, std::vector<i64>(Q.n(), 0), w);
        dev.push_back(std::fabs(I.value.real() / (A1 * si.value * Bn) - 1));
        d += (d.empty() ? "" : ", ") + std::string("q=") + std::to_string(q) + ": " + fmt("%.4f", dev.back());
    }
    bool dec = true;
    for (std::size_t i = 1; i < dev.size(); ++i)
        if (dev[i] >= dev[i - 1]) dec = false;
    r.pass = dec && dev[0] < 0.05;
    r.detail = "deviations " + d + "; sigma_inf=" + fmt("%.8f", si.value);
    return r;
}

CriterionResult c9_sigma_inf_bounded() {
    CriterionResult r{9, "sigma_inf (A_1 H)^{1/2} is finite and resolution-stable"};
    CorpusSpec cs;
    cs.seed = 909;
    cs.ns = {4, 5};
    cs.amax = 10;
    cs.count = 12;
    auto corpus = generate_corpus(cs);
    double mx = 0, worst_change = 0;
    bool finite = true;
    for (auto& Q : corpus) {
        auto O = orient_for_weight(Q);
        auto w = WeightDescriptor::wdag(Q.n());
        double A1 = O.form.coeff(0).get_d(), H = invariants_of(Q).height.get_d();
        double s0 = sheet_integral(O.form, w, 0.0, 0) / A1, s1 = sheet_integral(O.form, w, 0.0, 1) / A1;
        double v = s1 * std::sqrt(A1 * H);
        if (!std::isfinite(v)) finite = false;
        mx = std::max(mx, v);
        if (s1 > 0) worst_change = std::max(worst_change, std::fabs(s1 - s0) / s1);
    }
    r.pass = finite && worst_change <= 0.02;
    r.detail = std::to_string(corpus.size()) + " forms, max sigma_inf (A_1 H)^{1/2} = " + fmt("%.6f", mx) +
               fmt(", max change between resolutions %.2e", worst_change);
    return r;
}

CriterionResult c10_reconstruction() {
    CriterionResult r{10, "truncated delta-method sum reproduces N_w(Q;40)"};
    ReconstructOptions o;
    o.c_max = 2;
    o.main = false;
    auto rep = reconstruct(reference_form(), 40, o);
    double gap = std::fabs(rep.reconstructed - rep.exact_weighted);
    double tail = std::fabs(rep.shell_total(2));
    r.pass = rep.rel_err_vs_exact <= 0.10 && tail <= 3 * gap;
    r.detail = "q_max=" + std::to_string(rep.q_max) + ", reconstructed " + fmt("%.4f", rep.reconstructed) +
               ", exact " + fmt("%.4f", rep.exact_weighted) + fmt(", rel err %.4f", rep.rel_err_vs_exact) +
               fmt(", |c|=2 shell %.4f", tail) + fmt(", %.0fs", rep.seconds);
    return r;
}

CriterionResult c11_main_term() {
    CriterionResult r{11, "N_w(Q;B) / (sigma_inf S B^3) approaches 1"};
    auto Q = reference_form();
    auto O = orient_for_weight(Q);
    auto w = WeightDescriptor::wdag(Q.n());
    double m1 = main_term(Q, 1);
    double r40 = count_weighted(O.form, 40, w) / (m1 * std::pow(40.0, 3));
    double r80 = count_weighted(O.form, 80, w) / (m1 * std::pow(80.0, 3));
    r.pass = r80 >= 0.8 && r80 <= 1.2 && std::fabs(r80 - 1) < std::fabs(r40 - 1);
    r.detail = "ratio at B=40: " + fmt("%.6f", r40) + ", at B=80: " + fmt("%.6f", r80);
    return r;
}

CriterionResult c12_growth() {
    CriterionResult r{12, "growth exponents of sum |S_q|"};
    std::vector<i64> ys;
    for (i64 y = 64; y <= 2048; y *= 2) ys.push_back(y);
    auto fit = [&](const DiagonalForm& Q, const std::vector<i64>& c) {
        ExpSumEngine E(Q);
        auto v = partial_sums_abs_at(E, ys, c);
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < ys.size(); ++i) pts.push_back({(double)ys[i], v[i]});
        return growth_fit(pts);
    };
    CorpusSpec c5;
    c5.seed = 1205;
    c5.ns = {5};
    c5.amax = 10;
    c5.count = 4;
    CorpusSpec c4 = c5;
    c4.seed = 1204;
    c4.ns = {4};
    c4.nonsquare = true;
    double m5 = 0, m4 = 0;
    for (auto& Q : generate_corpus(c5)) m5 = std::max(m5, fit(Q, std::vector<i64>(5, 0)));
    for (auto& Q : generate_corpus(c4)) m4 = std::max(m4, fit(Q, {1, 0, 0, 0}));
    double lim5 = (5 + 3 + delta_n(5)) / 2.0 + 0.3;
    r.pass = m5 <= lim5 && m4 <= 3.8;
    r.detail = "n=5 max slope " + fmt("%.4f", m5) + fmt(" (limit %.2f)", lim5) + ", n=4 max slope " + fmt("%.4f", m4) +
               " (limit 3.80)";
    return r;
}

CriterionResult c13_envelopes(const AcceptanceOptions& opt) {
    CriterionResult r{13, "envelope ratios bounded and match the stored baseline"};
    auto cur = envelope_summary();
    std::string path = opt.baseline_path.empty() ? std::string(QDL_DATA_DIR) + "/envelope_baseline.json" : opt.baseline_path;
    std::ifstream f(path);
    double m1 = cur["max_ratio_thm1"].get<double>(), m2 = cur["max_ratio_thm2"].get<double>();
    r.detail = "max N/env(thm1) " + format_double(m1) + ", max M/env(thm2) " + format_double(m2);
    if (!f) {
        r.pass = false;
        r.detail += "; baseline " + path + " missing";
        return r;
    }
    auto base = nlohmann::json::parse(f);
    double b1 = base.at("max_ratio_thm1").get<double>(), b2 = base.at("max_ratio_thm2").get<double>();
    double d1 = std::fabs(m1 / b1 - 1), d2 = std::fabs(m2 / b2 - 1);
    r.pass = std::isfinite(m1) && std::isfinite(m2) && d1 <= 0.05 && d2 <= 0.05;
    r.detail += fmt("; baseline deviation %.2e", d1) + fmt(" / %.2e", d2);
    return r;
}

}  // namespace

ojson envelope_summary() {
    CorpusSpec cs;
    cs.seed = 1313;
    cs.ns = {4, 5};
    cs.amax = 8;
    cs.count = 10;
    cs.nonsquare = true;
    auto corpus = generate_corpus(cs);
    std::vector<i64> Bs{8, 16, 32, 64};
    SweepOptions so;
    so.densities = false;
    auto rows = sweep(corpus, Bs, so);
    double m1 = 0, m2 = 0;
    ojson arr = ojson::array();
    for (auto& row : rows) {
        if (std::isfinite(row.ratio_thm1)) m1 = std::max(m1, row.ratio_thm1);
        if (std::isfinite(row.ratio_thm2)) m2 = std::max(m2, row.ratio_thm2);
        ojson o;
        o["form"] = row.form;
        o["B"] = row.B;
        o["N"] = row.N;
        o["M"] = row.M;
        o["ratio_thm1"] = std::isfinite(row.ratio_thm1) ? ojson(row.ratio_thm1) : ojson(nullptr);
        o["ratio_thm2"] = std::isfinite(row.ratio_thm2) ? ojson(row.ratio_thm2) : ojson(nullptr);
        arr.push_back(o);
    }
    ojson j = make_report("envelope_baseline");
    j["corpus_seed"] = cs.seed;
    j["epsilon"] = so.eps;
    j["max_ratio_thm1"] = m1;
    j["max_ratio_thm2"] = m2;
    j["rows"] = arr;
    return j;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        switch (id) {
            case 1: r = c1_counting(); break;
            case 2: r = c2_expsums(); break;
            case 3: r = c3_local_identity(); break;
            case 4: r = c4_sigma3(); break;
            case 5: r = c5_stag(); break;
            case 6: r = c6_singular_growth(); break;
            case 7: r = c7_kernel_support(); break;
            case 8: r = c8_c0_behaviour(); break;
            case 9: r = c9_sigma_inf_bounded(); break;
            case 10: r = c10_reconstruction(); break;
            case 11: r = c11_main_term(); break;
            case 12: r = c12_growth(); break;
            case 13: r = c13_envelopes(opt); break;
            default: throw std::invalid_argument("no criterion " + std::to_string(id));
        }
    } catch (const std::exception& ex) {
        r.id = id;
        r.pass = false;
        r.detail = std::string("error: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriteria; ++id) {
        if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
        out.push_back(run_criterion(id, opt));
        if (on_result) on_result(out.back());
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.title << " -- " << r.detail
       << fmt(" [%.1fs]", r.seconds);
    return os.str();
}

}  // namespace qdl
