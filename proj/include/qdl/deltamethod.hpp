#pragma once
// Truncated delta-method reconstruction of N_w(Q;B), the main term, bound
// envelopes and corpus sweeps.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "qdl/form.hpp"
#include "qdl/integrals.hpp"

namespace qdl {

struct LedgerEntry {
    i64 q = 0;
    int shell = 0;  // |c|_inf
    double contribution = 0;
};

struct ReconstructionReport {
    DiagonalForm form;  // oriented form actually integrated
    i64 B = 0;
    double X = 0;
    double reconstructed = 0;
    double exact_weighted = 0;
    double main_term = std::numeric_limits<double>::quiet_NaN();
    i64 q_max = 0;
    int c_max = 0;
    std::vector<LedgerEntry> ledger;  // ordered by (q, shell)
    double rel_err_vs_exact = 0;
    double seconds = 0;

    double shell_total(int shell) const;
};

struct ReconstructOptions {
    i64 q_max = 0;  // 0: vanishing threshold
    int c_max = 2;
    bool exact = true;
    bool main = true;
    Resolution res{};
};

ReconstructionReport reconstruct(const DiagonalForm& Q, i64 B, const ReconstructOptions& opt = {});

// sigma_inf * singular series * B^{n-2}, both for the w-dagger orientation of Q.
double main_term(const DiagonalForm& Q, i64 B);

enum class Theorem { Thm1, Thm2, Corollary, HbN2 };
Theorem parse_theorem(const std::string& s);
std::string theorem_name(Theorem t);

struct EnvelopeValue {
    Theorem theorem = Theorem::Thm1;
    double value = 0;
    double epsilon_used = 0;
};

// Bound expression with implied constant 1. B for thm1, corollary and hb_n2; X for thm2.
EnvelopeValue envelope(const DiagonalForm& Q, double B_or_X, Theorem which, double eps = 0.05);

struct SweepRow {
    std::size_t index = 0;
    std::string form;
    i64 B = 0;
    std::uint64_t N = 0;      // zeros in the box |x| <= B
    double X = 0;             // energy parameter, B^2
    std::uint64_t M = 0;      // zeros with max |A_i x_i^2| <= X
    double env_thm1 = std::numeric_limits<double>::quiet_NaN();
    double env_thm2 = std::numeric_limits<double>::quiet_NaN();
    double ratio_thm1 = std::numeric_limits<double>::quiet_NaN();
    double ratio_thm2 = std::numeric_limits<double>::quiet_NaN();
    double singular = std::numeric_limits<double>::quiet_NaN();
    double sigma_inf = std::numeric_limits<double>::quiet_NaN();
    double majorant = 0;      // sum over leading slots and dyadic scales of N_w(Q^s; B/2^j)
    double majorant_constant = 0;  // (N - 1) / majorant
    bool majorant_ok = true;
    std::string error;
};

struct SweepOptions {
    double eps = 0.05;
    bool densities = true;
};

std::vector<SweepRow> sweep(const std::vector<DiagonalForm>& corpus, const std::vector<i64>& Bs,
                            const SweepOptions& opt = {});

}  // namespace qdl
