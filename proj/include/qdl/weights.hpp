#pragma once
// Bump weights, the omega_eps cutoffs and the delta-method kernel h(x, y).

#include <cstddef>
#include <string>
#include <vector>

namespace qdl {

class DiagonalForm;

double w0(double x);
// Integral of w0 over the real line.
double c0_const();
// int_{-1}^{s} w0, with exact saturation outside [-1, 1].
double w0_cumulative(double s);
double omega_eps(double eps, double x);
// Heath-Brown's bump 4 c0^{-1} w0(4x - 3), supported in (1/2, 1).
double omega_hb(double x);
// h(x, y), x > 0. Only the finitely many j with a nonzero term are visited.
double h_eval(double x, double y);
// Number of j terms h_eval would visit (for cost estimates).
double h_terms(double x, double y);

enum class WeightTag { W0Product, WDag, WQ, OmegaEps };

struct WeightDescriptor {
    WeightTag tag = WeightTag::WDag;
    std::size_t n = 0;
    std::vector<double> shift, scale;  // w0 product: prod w0((x_i - shift_i) / scale_i)
    std::vector<double> absA;          // w_Q
    double eps = 0.5;                  // omega_eps, n = 1

    static WeightDescriptor wdag(std::size_t n);
    static WeightDescriptor wq(const DiagonalForm& Q);
    static WeightDescriptor w0_product(std::vector<double> shift, std::vector<double> scale);
    static WeightDescriptor omega(double eps);
    std::string name() const;
};

WeightDescriptor parse_weight(const std::string& tag, const DiagonalForm& Q);

double weight_eval(const WeightDescriptor& w, const std::vector<double>& x);

// Every supported weight is lead(x1) * prod_{i>=2} axis(i, x1, x_i).
// The support of the lead factor is [lead_lo, lead_hi]; given x1, axis i is
// supported in [axis_lo, axis_hi].
double lead_factor(const WeightDescriptor& w, double x1);
double axis_factor(const WeightDescriptor& w, std::size_t i, double x1, double xi);
void lead_support(const WeightDescriptor& w, double& lo, double& hi);
void axis_support(const WeightDescriptor& w, std::size_t i, double x1, double& lo, double& hi);
// True when axis_factor(i, x1, -t) == axis_factor(i, x1, t) for all i >= 2.
bool axes_even(const WeightDescriptor& w);

}  // namespace qdl
