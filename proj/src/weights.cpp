#include "qdl/weights.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qdl/form.hpp"

namespace qdl {

double w0(double x) {
    double t = 1.0 - x * x;
    if (t <= 0.0) return 0.0;
    return std::exp(-1.0 / t);
}

namespace {

struct CumTable {
    static constexpr int N = 8192;
    double h = 2.0 / N;
    std::vector<double> W;  // W[k] = int_{-1}^{-1 + k h} w0
    double c0 = 0;
    CumTable() {
        W.assign(N + 1, 0.0);
        using boost::math::quadrature::gauss;
        for (int k = 0; k < N; ++k) {
            double a = -1.0 + k * h, b = a + h;
            W[k + 1] = W[k] + gauss<double, 20>::integrate(w0, a, b);
        }
        double err = 0;
        c0 = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(w0, -1.0, 1.0, 15, 1e-15, &err);
    }
    // cubic Hermite on node values W and slopes w0
    double eval(double s) const {
        if (s <= -1.0) return 0.0;
        if (s >= 1.0) return c0;
        double u = (s + 1.0) / h;
        int k = std::min((int)u, N - 1);
        double t = u - k;
        double a = -1.0 + k * h;
        double y0 = W[k], y1 = W[k + 1], m0 = w0(a) * h, m1 = w0(a + h) * h;
        double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
    }
};

const CumTable& table() {
    static const CumTable t;
    return t;
}

}  // namespace

double c0_const() { return table().c0; }

double w0_cumulative(double s) {
    const auto& t = table();
    if (s > 0) return t.c0 - t.eval(-s);
    return t.eval(s);
}

double omega_eps(double eps, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 2 * eps) return 1.0;
    double s = (x - eps) / eps;
    const auto& t = table();
    if (s > 0) return 1.0 - t.eval(-s) / t.c0;
    return t.eval(s) / t.c0;
}

double omega_hb(double x) {
    if (x <= 0.5 || x >= 1.0) return 0.0;
    return 4.0 / c0_const() * w0(4 * x - 3);
}

double h_eval(double x, double y) {
    if (!(x > 0)) throw std::invalid_argument("h_eval: x must be positive");
    double s = 0.0;
    // omega(xj) != 0 needs 1/2 < xj < 1
    if (x < 1.0) {
        long j0 = std::max(1L, (long)std::floor(0.5 / x));
        long j1 = (long)std::ceil(1.0 / x);
        for (long j = j0; j <= j1; ++j) s += omega_hb(x * j) / (x * j);
    }
    double ay = std::fabs(y);
    // omega(|y|/(xj)) != 0 needs |y|/x < j < 2|y|/x
    if (ay > 0 && 2 * ay > x) {
        long j0 = std::max(1L, (long)std::floor(ay / x));
        long j1 = (long)std::ceil(2 * ay / x);
        for (long j = j0; j <= j1; ++j) s -= omega_hb(ay / (x * j)) / (x * j);
    }
    return s;
}

double h_terms(double x, double y) {
    double t = x < 1.0 ? 0.5 / x + 2 : 0;
    double ay = std::fabs(y);
    if (2 * ay > x) t += ay / x + 2;
    return t;
}

WeightDescriptor WeightDescriptor::wdag(std::size_t n) {
    WeightDescriptor w;
    w.tag = WeightTag::WDag;
    w.n = n;
    return w;
}

WeightDescriptor WeightDescriptor::wq(const DiagonalForm& Q) {
    WeightDescriptor w;
    w.tag = WeightTag::WQ;
    w.n = Q.n();
    for (std::size_t i = 0; i < Q.n(); ++i) w.absA.push_back(std::fabs(Q.coeff(i).get_d()));
    return w;
}

WeightDescriptor WeightDescriptor::w0_product(std::vector<double> shift, std::vector<double> scale) {
    if (shift.size() != scale.size()) throw std::invalid_argument("w0_product: shift/scale size mismatch");
    for (double s : scale)
        if (!(s > 0)) throw std::invalid_argument("w0_product: scales must be positive");
    WeightDescriptor w;
    w.tag = WeightTag::W0Product;
    w.n = shift.size();
    w.shift = std::move(shift);
    w.scale = std::move(scale);
    return w;
}

WeightDescriptor WeightDescriptor::omega(double eps) {
    WeightDescriptor w;
    w.tag = WeightTag::OmegaEps;
    w.n = 1;
    w.eps = eps;
    return w;
}

std::string WeightDescriptor::name() const {
    switch (tag) {
        case WeightTag::WDag: return "wdag";
        case WeightTag::WQ: return "wq";
        case WeightTag::W0Product: return "w0_product";
        case WeightTag::OmegaEps: return "omega_eps";
    }
    return "?";
}

WeightDescriptor parse_weight(const std::string& tag, const DiagonalForm& Q) {
    if (tag == "wdag") return WeightDescriptor::wdag(Q.n());
    if (tag == "wq") return WeightDescriptor::wq(Q);
    throw std::invalid_argument("unsupported weight tag: " + tag);
}

double lead_factor(const WeightDescriptor& w, double x1) {
    switch (w.tag) {
        case WeightTag::WDag: return w0(x1 - 2.0);
        case WeightTag::WQ: return w0(2.0 * std::sqrt(w.absA[0]) * x1 - 2.0);
        case WeightTag::W0Product: return w0((x1 - w.shift[0]) / w.scale[0]);
        case WeightTag::OmegaEps: return omega_eps(w.eps, x1);
    }
    return 0;
}

double axis_factor(const WeightDescriptor& w, std::size_t i, double x1, double xi) {
    switch (w.tag) {
        case WeightTag::WDag: return x1 > 0 ? omega_eps(0.5, 1.0 - std::fabs(xi) / x1) : 0.0;
        case WeightTag::WQ: return w0(std::sqrt(w.absA[i]) * xi);
        case WeightTag::W0Product: return w0((xi - w.shift[i]) / w.scale[i]);
        case WeightTag::OmegaEps: break;
    }
    throw std::invalid_argument("axis_factor: weight has no axes");
}

void lead_support(const WeightDescriptor& w, double& lo, double& hi) {
    switch (w.tag) {
        case WeightTag::WDag: lo = 1; hi = 3; return;
        case WeightTag::WQ: {
            double s = 2.0 * std::sqrt(w.absA[0]);
            lo = 1.0 / s;
            hi = 3.0 / s;
            return;
        }
        case WeightTag::W0Product: lo = w.shift[0] - w.scale[0]; hi = w.shift[0] + w.scale[0]; return;
        case WeightTag::OmegaEps: lo = 0; hi = 1e300; return;
    }
}

void axis_support(const WeightDescriptor& w, std::size_t i, double x1, double& lo, double& hi) {
    switch (w.tag) {
        case WeightTag::WDag: lo = -x1; hi = x1; return;
        case WeightTag::WQ: hi = 1.0 / std::sqrt(w.absA[i]); lo = -hi; return;
        case WeightTag::W0Product: lo = w.shift[i] - w.scale[i]; hi = w.shift[i] + w.scale[i]; return;
        case WeightTag::OmegaEps: break;
    }
    throw std::invalid_argument("axis_support: weight has no axes");
}

bool axes_even(const WeightDescriptor& w) {
    if (w.tag != WeightTag::W0Product) return true;
    for (std::size_t i = 1; i < w.n; ++i)
        if (w.shift[i] != 0) return false;
    return true;
}

double weight_eval(const WeightDescriptor& w, const std::vector<double>& x) {
    if (x.size() != w.n) throw std::invalid_argument("weight_eval: dimension mismatch");
    double v = lead_factor(w, x[0]);
    for (std::size_t i = 1; i < x.size() && v != 0.0; ++i) v *= axis_factor(w, i, x[0], x[i]);
    return v;
}

}  // namespace qdl
