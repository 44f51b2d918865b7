#pragma once
// Diagonal quadratic forms A1 x1^2 + ... + An xn^2.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qdl/arith.hpp"

namespace qdl {

enum class FormErrorKind { TooShort, ZeroCoefficient, Definite, NotPrimitive, Parse, DimensionMismatch, Range };

class FormError : public std::invalid_argument {
public:
    FormError(FormErrorKind k, const std::string& msg) : std::invalid_argument(msg), kind(k) {}
    FormErrorKind kind;
};

struct FormInvariants {
    mpz_class disc;       // A1...An
    mpz_class min_coeff;  // m(Q)
    mpz_class height;     // H_Q
    int delta_n = 0;
};

class DiagonalForm {
public:
    DiagonalForm() = default;
    static DiagonalForm make(const std::vector<mpz_class>& coeffs, bool primitive = false);
    static DiagonalForm make(const std::vector<i64>& coeffs, bool primitive = false);

    std::size_t n() const { return c_.size(); }
    const mpz_class& coeff(std::size_t i) const { return c_[i]; }
    const std::vector<mpz_class>& coeffs() const { return c_; }
    // Machine-word view; throws FormError(Range) if some |A_i| >= 2^40.
    i64 a(std::size_t i) const;
    std::vector<i64> coeffs64() const;
    bool fits64() const { return fits_; }
    std::string str() const;
    bool operator==(const DiagonalForm& o) const { return c_ == o.c_; }

private:
    std::vector<mpz_class> c_;
    std::vector<i64> c64_;
    bool fits_ = false;
};

DiagonalForm parse_form(const std::string& s, bool primitive = false);
std::vector<i64> parse_int_vector(const std::string& s);

mpz_class evaluate(const DiagonalForm& Q, const std::vector<i64>& x);
FormInvariants invariants_of(const DiagonalForm& Q);
int delta_n(std::size_t n);
// Delta_Q * Q^{-1}(c) = sum (Delta/A_i) c_i^2.
mpz_class q_inverse_scaled(const DiagonalForm& Q, const std::vector<i64>& c);

struct Normalized {
    std::vector<std::size_t> perm;  // perm[k] = original index placed at slot k
    DiagonalForm form;
};
// First positive coefficient moved to the front, the rest keep their order.
Normalized normalize_for_delta(const DiagonalForm& Q);

struct Oriented {
    int sign = 1;  // form = sign * Q^perm
    std::vector<std::size_t> perm;
    DiagonalForm form;
};
// Picks the sign and leading slot so that the cone Q=0 meets the interior of the
// w-dagger support; the zero sets of Q and of the result correspond by permutation.
Oriented orient_for_weight(const DiagonalForm& Q);

DiagonalForm permuted(const DiagonalForm& Q, const std::vector<std::size_t>& perm);

}  // namespace qdl
