#pragma once
// Oscillatory integrals I_q(c), the sheet integral I(y) and sigma_infinity.

#include <complex>
#include <cstdint>
#include <vector>

#include "qdl/form.hpp"
#include "qdl/weights.hpp"

namespace qdl {

using cplx = std::complex<double>;

struct IntegralValue {
    cplx value;
    double abs_err = 0;
    std::uint64_t evals = 0;
};

// Range of R = Q / A1 over the support of w (A1 > 0 assumed).
void r_range(const DiagonalForm& Q, const WeightDescriptor& w, double& ymin, double& ymax);
// Largest q with I_q(c) possibly nonzero: h(q/X, y) vanishes once q/X > max(1, 2|y|).
i64 vanishing_threshold(const DiagonalForm& Q, i64 B, const WeightDescriptor& w);

struct Resolution {
    double ppr = 48;        // s-grid points per min(r, 1)
    double h_ppr = 128;     // kernel table points per min(r, 1)
    int u1_panels = 8;      // minimum Gauss panels in x1
    int u1_nodes = 8;
    Resolution refined() const { return {ppr * 2, h_ppr * 2, u1_panels * 2, u1_nodes}; }
};

// I_q(c) for many c at a common q. The x1 variable is integrated by Gauss panels;
// for each x1 node the remaining axes are reduced to the distribution of
// s = sum_{i>=2} a_i x_i^2 (a cell-mass histogram per axis, combined by FFT
// convolution) and h(r, x1^2 + s) is integrated against it.
class SheetIntegrator {
public:
    SheetIntegrator(const DiagonalForm& Q, const WeightDescriptor& w, i64 B, Resolution res = {});
    // B^{-n} I_q(c) for each c.
    std::vector<cplx> star(i64 q, const std::vector<std::vector<i64>>& cs);
    std::uint64_t evals() const { return evals_; }
    double X() const { return X_; }

private:
    DiagonalForm Q_;
    WeightDescriptor w_;
    i64 B_;
    double X_, A1_;
    std::vector<double> a_;  // A_i / A_1
    Resolution res_;
    std::uint64_t evals_ = 0;
};

IntegralValue iq_integral(const DiagonalForm& Q, i64 B, i64 q, const std::vector<i64>& c, const WeightDescriptor& w,
                          Resolution res = {});
// Straight tensor-product Gauss quadrature of the n-dimensional integral, two
// resolutions; throws BudgetExceeded-style std::length_error past max_evals.
IntegralValue iq_tensor(const DiagonalForm& Q, i64 B, i64 q, const std::vector<i64>& c, const WeightDescriptor& w,
                        int base_nodes = 12, double max_evals = 1e8);

// I(y) = int w / (dR/dx1) over the sheet R = y, by tensor Gauss panels in x2..xn.
double sheet_integral(const DiagonalForm& Q, const WeightDescriptor& w, double y, int level = 1);

struct SigmaInfinity {
    double value = 0;   // I(0) / A1
    double coarse = 0;  // same at the previous level
    double rel_change = 0;
    int level = 0;
};
SigmaInfinity sigma_infinity(const DiagonalForm& Q, const WeightDescriptor& w, double rel_tol = 1e-6, int max_level = 4);

struct DecayReport {
    double abs_value = 0;
    double ratio_n2 = 0;    // |I| / (B^{n+1}/q * H^{N+1} / (A1^{N/2+1/2} |c|^N)), N = 2
    double ratio_n4 = 0;    // same with N = 4
    double ratio_small = 0; // |I| / (H^{3n/2+1+e} / (A1^{n/2+1}|D|) B^{n/2+1+e} (|c|/q)^{1-n/2+e})
};
DecayReport decay_check(const DiagonalForm& Q, i64 B, i64 q, const std::vector<i64>& c, const WeightDescriptor& w,
                        double eps = 0.05);

}  // namespace qdl
