#include "qdl/deltamethod.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

#include "qdl/counting.hpp"
#include "qdl/densities.hpp"
#include "qdl/expsums.hpp"
#include "qdl/weights.hpp"

namespace qdl {

double ReconstructionReport::shell_total(int shell) const {
    double s = 0;
    for (auto& e : ledger)
        if (e.shell == shell) s += e.contribution;
    return s;
}

namespace {

void check_reconstructible(const DiagonalForm& Q) {
    std::size_t n = Q.n();
    if (n < 4 || n > 6) throw std::invalid_argument("reconstruct: n must be 4, 5 or 6");
    if (n == 4 && is_square(invariants_of(Q).disc))
        throw std::invalid_argument("reconstruct: square discriminant with n = 4");
}

struct CClass {
    std::vector<i64> rep;  // nonnegative representative
    int shell = 0;
    double mult = 0;
};

// Orbits of [-c_max, c_max]^n under sign changes of every coordinate and
// permutations among slots with equal coefficients (S_q and I_q are invariant,
// with I(-c1, ...) = conj I(c1, ...) for the w-dagger weight).
std::vector<CClass> c_classes(const DiagonalForm& F, int c_max) {
    std::size_t n = F.n();
    std::map<std::vector<i64>, CClass> m;
    std::vector<i64> c(n, -c_max);
    while (true) {
        std::vector<i64> key(n);
        for (std::size_t i = 0; i < n; ++i) key[i] = std::abs(c[i]);
        for (std::size_t i = 1; i < n;) {
            std::size_t j = i;
            while (j < n && F.coeff(j) == F.coeff(i)) ++j;
            std::sort(key.begin() + i, key.begin() + j);
            i = j;
        }
        auto& cl = m[key];
        if (cl.rep.empty()) {
            cl.rep = key;
            cl.shell = (int)*std::max_element(key.begin(), key.end());
        }
        cl.mult += 1;
        std::size_t k = n;
        bool done = true;
        while (k > 0) {
            --k;
            if (++c[k] <= c_max) {
                done = false;
                break;
            }
            c[k] = -c_max;
        }
        if (done) break;
    }
    std::vector<CClass> out;
    for (auto& [k, v] : m) out.push_back(v);
    std::stable_sort(out.begin(), out.end(), [](const CClass& a, const CClass& b) { return a.shell < b.shell; });
    return out;
}

}  // namespace

ReconstructionReport reconstruct(const DiagonalForm& Q, i64 B, const ReconstructOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    check_reconstructible(Q);
    if (B < 1) throw std::invalid_argument("reconstruct: B must be positive");
    if (opt.c_max < 0) throw std::invalid_argument("reconstruct: c_max must be >= 0");
    std::size_t n = Q.n();
    auto O = orient_for_weight(Q);
    const DiagonalForm& F = O.form;
    auto w = WeightDescriptor::wdag(n);

    ReconstructionReport rep;
    rep.form = F;
    rep.B = B;
    rep.c_max = opt.c_max;
    rep.q_max = opt.q_max > 0 ? opt.q_max : vanishing_threshold(F, B, w);
    if (rep.q_max > kDefaultExpSumCap) throw CapExceeded("reconstruct: q_max exceeds the exponential sum cap");

    SheetIntegrator SI(F, w, B, opt.res);
    ExpSumEngine E(F);
    rep.X = SI.X();
    double Bn = std::pow((double)B, (double)n);
    auto classes = c_classes(F, opt.c_max);
    for (i64 q = 1; q <= rep.q_max; ++q) {
        std::vector<std::vector<i64>> cs;
        std::vector<double> svals;
        std::vector<std::size_t> which;
        for (std::size_t k = 0; k < classes.size(); ++k) {
            double s = E.S(q, classes[k].rep);
            if (s == 0) continue;
            cs.push_back(classes[k].rep);
            svals.push_back(s);
            which.push_back(k);
        }
        std::vector<double> shell(opt.c_max + 1, 0.0);
        if (!cs.empty()) {
            auto I = SI.star(q, cs);
            double scale = Bn / (rep.X * rep.X) / std::pow((double)q, (double)n);
            for (std::size_t k = 0; k < cs.size(); ++k) {
                auto& cl = classes[which[k]];
                shell[cl.shell] += cl.mult * svals[k] * I[k].real() * scale;
            }
        }
        for (int s = 0; s <= opt.c_max; ++s) {
            rep.ledger.push_back({q, s, shell[s]});
            rep.reconstructed += shell[s];
        }
    }
    if (opt.exact) {
        rep.exact_weighted = count_weighted(F, B, w);
        rep.rel_err_vs_exact = std::fabs(rep.reconstructed - rep.exact_weighted) / std::fabs(rep.exact_weighted);
    }
    if (opt.main) rep.main_term = main_term(Q, B);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

double main_term(const DiagonalForm& Q, i64 B) {
    check_reconstructible(Q);
    auto O = orient_for_weight(Q);
    auto si = sigma_infinity(O.form, WeightDescriptor::wdag(Q.n()), 1e-6, 3);
    auto ss = singular_series(Q);
    return si.value * ss.value * std::pow((double)B, (double)Q.n() - 2);
}

Theorem parse_theorem(const std::string& s) {
    if (s == "thm1") return Theorem::Thm1;
    if (s == "thm2") return Theorem::Thm2;
    if (s == "corollary") return Theorem::Corollary;
    if (s == "hb_n2") return Theorem::HbN2;
    throw std::invalid_argument("unknown theorem: " + s);
}

std::string theorem_name(Theorem t) {
    switch (t) {
        case Theorem::Thm1: return "thm1";
        case Theorem::Thm2: return "thm2";
        case Theorem::Corollary: return "corollary";
        case Theorem::HbN2: return "hb_n2";
    }
    return "?";
}

EnvelopeValue envelope(const DiagonalForm& Q, double Z, Theorem which, double eps) {
    if (!(Z >= 1)) throw std::invalid_argument("envelope: B or X must be >= 1");
    auto inv = invariants_of(Q);
    double n = (double)Q.n(), m = inv.min_coeff.get_d(), H = inv.height.get_d();
    double D = std::fabs(inv.disc.get_d()), dl = inv.delta_n;
    bool square = is_square(inv.disc);
    double De = std::pow(D, eps);
    EnvelopeValue e{which, 0, eps};
    switch (which) {
        case Theorem::Thm1:
            if (n < 4) throw std::invalid_argument("thm1: n must be >= 4");
            if (n == 4 && square) throw std::invalid_argument("thm1: square discriminant with n = 4");
            e.value = (std::pow(Z, n - 2) / std::sqrt(m * H) +
                       std::pow(H, 2 * n + 3) / (std::pow(m, 0.75 * n + 3) * std::sqrt(D)) *
                           std::pow(Z, (n - 1 + dl) / 2 + eps)) *
                      De;
            break;
        case Theorem::Thm2:
            if (n < 5) throw std::invalid_argument("thm2: n must be >= 5");
            e.value = (std::pow(Z, (n - 2) / 2) / std::sqrt(D) +
                       std::pow(H, n / 2 + eps) * std::pow(Z, (n - 1 + dl) / 4 + eps)) *
                      De;
            break;
        case Theorem::Corollary:
            if (n < 4) throw std::invalid_argument("corollary: n must be >= 4");
            if (n == 4 && square) throw std::invalid_argument("corollary: square discriminant with n = 4");
            if (H > 4 * m) throw std::invalid_argument("corollary: coefficients are not of the same order");
            e.value = (std::pow(Z, n - 2) / std::pow(D, 1 / n) + std::pow(D, 0.75) * std::pow(Z, (n - 1 + dl) / 2 + eps)) * De;
            break;
        case Theorem::HbN2:
            e.value = std::pow(Z, n - 2 + eps);
            break;
    }
    return e;
}

std::vector<SweepRow> sweep(const std::vector<DiagonalForm>& corpus, const std::vector<i64>& Bs, const SweepOptions& opt) {
    std::vector<SweepRow> rows;
    for (std::size_t f = 0; f < corpus.size(); ++f) {
        const auto& Q = corpus[f];
        std::size_t n = Q.n();
        double ss = std::numeric_limits<double>::quiet_NaN(), si = ss;
        std::string ferr;
        if (opt.densities) {
            try {
                check_reconstructible(Q);
                ss = singular_series(Q).value;
                si = sigma_infinity(orient_for_weight(Q).form, WeightDescriptor::wdag(n), 1e-4, 2).value;
            } catch (const std::exception& ex) {
                ferr = ex.what();
            }
        }
        for (i64 B : Bs) {
            SweepRow r;
            r.index = f;
            r.form = Q.str();
            r.B = B;
            r.singular = ss;
            r.sigma_inf = si;
            r.error = ferr;
            try {
                r.N = count_box(Q, B).count;
                r.X = (double)B * B;
                r.M = count_energy(Q, B * B).count;
                try {
                    r.env_thm1 = envelope(Q, B, Theorem::Thm1, opt.eps).value;
                    r.ratio_thm1 = r.N / r.env_thm1;
                } catch (const std::invalid_argument&) {
                }
                if (n >= 5) {
                    r.env_thm2 = envelope(Q, r.X, Theorem::Thm2, opt.eps).value;
                    r.ratio_thm2 = r.M / r.env_thm2;
                }
                // every slot in the lead position; the remaining (n-1)! orderings give the same count
                double fact = 1;
                for (std::size_t k = 2; k < n; ++k) fact *= k;
                double maj = 0;
                for (std::size_t lead = 0; lead < n; ++lead) {
                    std::vector<std::size_t> perm{lead};
                    for (std::size_t i = 0; i < n; ++i)
                        if (i != lead) perm.push_back(i);
                    auto P = permuted(Q, perm);
                    for (i64 Bj = B; Bj >= 1; Bj /= 2) maj += fact * count_weighted(P, Bj, WeightDescriptor::wdag(n));
                }
                r.majorant = maj;
                r.majorant_ok = r.N <= 1 || maj > 0;
                r.majorant_constant = maj > 0 ? (double)(r.N - 1) / maj : 0.0;
            } catch (const std::exception& ex) {
                if (!r.error.empty()) r.error += "; ";
                r.error += ex.what();
            }
            rows.push_back(r);
        }
    }
    return rows;
}

}  // namespace qdl
