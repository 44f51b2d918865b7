#include "qdl/form.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace qdl {

static constexpr i64 kCoeffLimit = (i64)1 << 40;

DiagonalForm DiagonalForm::make(const std::vector<mpz_class>& coeffs, bool primitive) {
    if (coeffs.size() < 3) throw FormError(FormErrorKind::TooShort, "form needs at least 3 coefficients");
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        int s = sgn(coeffs[i]);
        if (s == 0) throw FormError(FormErrorKind::ZeroCoefficient, "coefficient " + std::to_string(i + 1) + " is zero");
        (s > 0 ? pos : neg) = true;
    }
    if (!(pos && neg)) throw FormError(FormErrorKind::Definite, "form is definite (all coefficients share a sign)");
    if (primitive) {
        mpz_class g = 0;
        for (auto& c : coeffs) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g != 1) throw FormError(FormErrorKind::NotPrimitive, "coefficients have gcd " + g.get_str());
    }
    DiagonalForm f;
    f.c_ = coeffs;
    f.fits_ = true;
    for (auto& c : coeffs) {
        if (abs(c) >= kCoeffLimit) {
            f.fits_ = false;
            break;
        }
    }
    if (f.fits_)
        for (auto& c : coeffs) f.c64_.push_back(c.get_si());
    return f;
}

DiagonalForm DiagonalForm::make(const std::vector<i64>& coeffs, bool primitive) {
    std::vector<mpz_class> v;
    for (i64 c : coeffs) v.emplace_back((long)c);
    return make(v, primitive);
}

i64 DiagonalForm::a(std::size_t i) const {
    if (!fits_) throw FormError(FormErrorKind::Range, "coefficient too large for this operation");
    return c64_[i];
}

std::vector<i64> DiagonalForm::coeffs64() const {
    if (!fits_) throw FormError(FormErrorKind::Range, "coefficient too large for this operation");
    return c64_;
}

std::string DiagonalForm::str() const {
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (i) s += ',';
        s += c_[i].get_str();
    }
    return s;
}

namespace {

std::vector<mpz_class> parse_list(const std::string& s) {
    std::vector<mpz_class> out;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    };
    skip();
    if (i == s.size()) throw FormError(FormErrorKind::Parse, "empty list");
    while (true) {
        skip();
        std::size_t start = i;
        std::string tok;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) tok += s[i++];
        skip();
        while (i < s.size() && std::isdigit((unsigned char)s[i])) tok += s[i++];
        if (tok.empty() || tok == "-" || tok == "+")
            throw FormError(FormErrorKind::Parse, "expected integer at position " + std::to_string(start));
        if (tok[0] == '+') tok.erase(0, 1);
        out.emplace_back(tok);
        skip();
        if (i == s.size()) break;
        if (s[i] != ',') throw FormError(FormErrorKind::Parse, "unexpected character at position " + std::to_string(i));
        ++i;
    }
    return out;
}

}  // namespace

DiagonalForm parse_form(const std::string& s, bool primitive) { return DiagonalForm::make(parse_list(s), primitive); }

std::vector<i64> parse_int_vector(const std::string& s) {
    std::vector<i64> v;
    for (auto& m : parse_list(s)) {
        if (!m.fits_slong_p()) throw FormError(FormErrorKind::Range, "integer out of range: " + m.get_str());
        v.push_back(m.get_si());
    }
    return v;
}

mpz_class evaluate(const DiagonalForm& Q, const std::vector<i64>& x) {
    if (x.size() != Q.n()) throw FormError(FormErrorKind::DimensionMismatch, "dimension mismatch");
    mpz_class s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mpz_class xi = (long)x[i];
        s += Q.coeff(i) * xi * xi;
    }
    return s;
}

int delta_n(std::size_t n) { return (n % 2 == 0 && n >= 6) ? 1 : 0; }

FormInvariants invariants_of(const DiagonalForm& Q) {
    FormInvariants inv;
    inv.disc = 1;
    inv.min_coeff = abs(Q.coeff(0));
    inv.height = abs(Q.coeff(0));
    for (auto& c : Q.coeffs()) {
        inv.disc *= c;
        mpz_class a = abs(c);
        if (a < inv.min_coeff) inv.min_coeff = a;
        if (a > inv.height) inv.height = a;
    }
    inv.delta_n = delta_n(Q.n());
    return inv;
}

mpz_class q_inverse_scaled(const DiagonalForm& Q, const std::vector<i64>& c) {
    if (c.size() != Q.n()) throw FormError(FormErrorKind::DimensionMismatch, "dimension mismatch");
    mpz_class disc = 1;
    for (auto& a : Q.coeffs()) disc *= a;
    mpz_class s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        mpz_class ci = (long)c[i];
        s += (disc / Q.coeff(i)) * ci * ci;
    }
    return s;
}

DiagonalForm permuted(const DiagonalForm& Q, const std::vector<std::size_t>& perm) {
    std::vector<mpz_class> v;
    for (auto k : perm) v.push_back(Q.coeff(k));
    return DiagonalForm::make(v);
}

Normalized normalize_for_delta(const DiagonalForm& Q) {
    std::size_t first = 0;
    while (sgn(Q.coeff(first)) <= 0) ++first;
    Normalized r;
    r.perm.push_back(first);
    for (std::size_t i = 0; i < Q.n(); ++i)
        if (i != first) r.perm.push_back(i);
    r.form = permuted(Q, r.perm);
    return r;
}

Oriented orient_for_weight(const DiagonalForm& Q) {
    // score = (sum of |A_j| over opposite-sign j != lead) / |A_lead|; larger is better
    Oriented best;
    mpf_class best_score = -1;
    for (int s : {1, -1}) {
        for (std::size_t i = 0; i < Q.n(); ++i) {
            if (sgn(Q.coeff(i)) != s) continue;
            mpz_class neg = 0;
            for (std::size_t j = 0; j < Q.n(); ++j)
                if (j != i && sgn(Q.coeff(j)) == -s) neg += abs(Q.coeff(j));
            mpf_class score = mpf_class(neg, 128) / mpf_class(abs(Q.coeff(i)), 128);
            if (score > best_score) {
                best_score = score;
                best.sign = s;
                best.perm.assign(1, i);
                for (std::size_t j = 0; j < Q.n(); ++j)
                    if (j != i) best.perm.push_back(j);
            }
        }
    }
    std::vector<mpz_class> v;
    for (auto k : best.perm) v.push_back(best.sign * Q.coeff(k));
    best.form = DiagonalForm::make(v);
    return best;
}

}  // namespace qdl
