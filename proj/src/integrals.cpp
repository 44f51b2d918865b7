#include "qdl/integrals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <fftw3.h>

namespace qdl {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

struct Rule {
    std::vector<double> x, w;  // on [-1, 1]
};

template <int N>
Rule make_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    Rule r;
    auto ab = G::abscissa();
    auto wt = G::weights();
    for (std::size_t i = 0; i < ab.size(); ++i) {
        if (ab[i] == 0.0) {
            r.x.push_back(0.0);
            r.w.push_back(wt[i]);
        } else {
            r.x.push_back(ab[i]);
            r.w.push_back(wt[i]);
            r.x.push_back(-ab[i]);
            r.w.push_back(wt[i]);
        }
    }
    return r;
}

const Rule& gl(int n) {
    static const Rule r4 = make_rule<4>(), r6 = make_rule<6>(), r8 = make_rule<8>(), r10 = make_rule<10>(),
                      r12 = make_rule<12>(), r16 = make_rule<16>(), r20 = make_rule<20>();
    switch (n) {
        case 4: return r4;
        case 6: return r6;
        case 8: return r8;
        case 10: return r10;
        case 12: return r12;
        case 16: return r16;
        case 20: return r20;
    }
    throw std::invalid_argument("gl: unsupported node count");
}

// composite Gauss nodes on [a, b]
void panels(double a, double b, int P, int G, std::vector<double>& xs, std::vector<double>& ws) {
    const Rule& r = gl(G);
    double h = (b - a) / P;
    for (int p = 0; p < P; ++p) {
        double c = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            xs.push_back(c + 0.5 * h * r.x[i]);
            ws.push_back(0.5 * h * r.w[i]);
        }
    }
}

struct FFT {
    int n;
    fftw_complex* buf;
    fftw_plan plan;
    explicit FFT(int n_) : n(n_) {
        buf = fftw_alloc_complex(n);
        plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    ~FFT() {
        fftw_destroy_plan(plan);
        fftw_free(buf);
    }
    void run(const std::vector<cplx>& in, std::vector<cplx>& out) {
        for (int i = 0; i < n; ++i) {
            cplx v = i < (int)in.size() ? in[i] : cplx(0);
            buf[i][0] = v.real();
            buf[i][1] = v.imag();
        }
        fftw_execute(plan);
        out.resize(n);
        for (int i = 0; i < n; ++i) out[i] = {buf[i][0], buf[i][1]};
    }
};

FFT& fft_of(int n) {
    static std::map<int, std::unique_ptr<FFT>> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<FFT>(n)).first;
    return *it->second;
}

// h(r, .) tabulated on a uniform grid, Catmull-Rom interpolation
struct HTable {
    double y0, dy, r;
    std::vector<double> v;
    HTable(double r_, double ya, double yb, double dy_) : y0(ya - 2 * dy_), dy(dy_), r(r_) {
        int N = (int)std::ceil((yb - ya) / dy) + 5;
        v.resize(N);
        for (int i = 0; i < N; ++i) v[i] = h_eval(r, y0 + i * dy);
    }
    double operator()(double y) const {
        double u = (y - y0) / dy;
        int i = (int)std::floor(u);
        if (i < 1 || i + 2 >= (int)v.size()) return h_eval(r, y);
        double t = u - i;
        double p0 = v[i - 1], p1 = v[i], p2 = v[i + 1], p3 = v[i + 2];
        return p1 + 0.5 * t * (p2 - p0 + t * (2 * p0 - 5 * p1 + 4 * p2 - p3 + t * (3 * (p1 - p2) + p3 - p0)));
    }
};

// Each node's mass is spread over four grid points with cubic Lagrange weights,
// so the discrete convolution reproduces h exactly up to cubics.
struct AxisNodes {
    std::vector<int> cell;  // local index of the grid point left of the node
    std::vector<std::array<double, 4>> lw;
    std::vector<double> t, wf, sgn;
    int kmin = 0, len = 0;
};

// Gauss nodes of axis i at fixed u1, grouped by the s-cell of a t^2 they fall in.
AxisNodes axis_nodes(const WeightDescriptor& w, std::size_t i, double u1, double a, double ds, double kmax_phase) {
    AxisNodes out;
    double lo, hi;
    axis_support(w, i, u1, lo, hi);
    bool even = axes_even(w);
    std::vector<std::pair<double, double>> pieces;  // (sign, |u| range end)
    struct Piece {
        double sg, ta, tb, mult;
    };
    std::vector<Piece> ps;
    if (even) {
        ps.push_back({1.0, 0.0, std::max(std::fabs(lo), std::fabs(hi)), 2.0});
    } else {
        if (lo < 0) ps.push_back({-1.0, std::max(0.0, -std::min(hi, 0.0)), -lo, 1.0});
        if (hi > 0) ps.push_back({1.0, std::max(0.0, lo), hi, 1.0});
    }
    double smin = 1e300, smax = -1e300;
    for (auto& p : ps) {
        for (double t : {p.ta, p.tb}) {
            smin = std::min(smin, a * t * t);
            smax = std::max(smax, a * t * t);
        }
    }
    if (ps.empty()) return out;
    out.kmin = (int)std::floor(smin / ds) - 1;
    int kmaxc = (int)std::floor(smax / ds) + 2;
    out.len = kmaxc - out.kmin + 1;
    const Rule& r = gl(4);
    for (auto& p : ps) {
        if (p.tb <= p.ta) continue;
        int ka = (int)std::lround(a * p.ta * p.ta / ds), kb = (int)std::lround(a * p.tb * p.tb / ds);
        if (ka > kb) std::swap(ka, kb);
        for (int k = ka; k <= kb; ++k) {
            double slo = (k - 0.5) * ds, shi = (k + 0.5) * ds;
            double q1 = slo / a, q2 = shi / a;
            if (q1 > q2) std::swap(q1, q2);
            double t0 = std::sqrt(std::max(0.0, q1)), t1 = std::sqrt(std::max(0.0, q2));
            t0 = std::max(t0, p.ta);
            t1 = std::min(t1, p.tb);
            if (t1 <= t0) continue;
            int m = 1 + (int)std::ceil((t1 - t0) * kmax_phase * 2.0);
            double hseg = (t1 - t0) / m;
            for (int sgi = 0; sgi < m; ++sgi) {
                double c = t0 + (sgi + 0.5) * hseg;
                for (std::size_t g = 0; g < r.x.size(); ++g) {
                    double t = c + 0.5 * hseg * r.x[g];
                    double f = axis_factor(w, i, u1, p.sg * t);
                    if (f == 0.0) continue;
                    double pos = a * t * t / ds;
                    int c0 = std::clamp((int)std::floor(pos), out.kmin + 1, kmaxc - 2);
                    double fr = pos - c0;
                    out.cell.push_back(c0 - out.kmin);
                    out.lw.push_back({-fr * (fr - 1) * (fr - 2) / 6, (fr + 1) * (fr - 1) * (fr - 2) / 2,
                                      -(fr + 1) * fr * (fr - 2) / 2, (fr + 1) * fr * (fr - 1) / 6});
                    out.t.push_back(t);
                    out.wf.push_back(0.5 * hseg * r.w[g] * f * p.mult);
                    out.sgn.push_back(p.sg);
                }
            }
        }
    }
    return out;
}

}  // namespace

void r_range(const DiagonalForm& Q, const WeightDescriptor& w, double& ymin, double& ymax) {
    double A1 = Q.coeff(0).get_d();
    if (!(A1 > 0)) throw std::invalid_argument("r_range: leading coefficient must be positive");
    double lo, hi;
    lead_support(w, lo, hi);
    ymin = 1e300;
    ymax = -1e300;
    const int N = 2000;
    for (int k = 0; k <= N; ++k) {
        double u1 = lo + (hi - lo) * k / N;
        double smin = 0, smax = 0;
        for (std::size_t i = 1; i < Q.n(); ++i) {
            double a = Q.coeff(i).get_d() / A1, al, ah;
            axis_support(w, i, u1, al, ah);
            double m2 = std::max(al * al, ah * ah);
            double n2 = (al <= 0 && ah >= 0) ? 0.0 : std::min(al * al, ah * ah);
            smin += std::min(a * m2, a * n2);
            smax += std::max(a * m2, a * n2);
        }
        ymin = std::min(ymin, u1 * u1 + smin);
        ymax = std::max(ymax, u1 * u1 + smax);
    }
}

i64 vanishing_threshold(const DiagonalForm& Q, i64 B, const WeightDescriptor& w) {
    double ymin, ymax;
    r_range(Q, w, ymin, ymax);
    double X = std::sqrt(Q.coeff(0).get_d()) * B;
    double R = std::max(std::fabs(ymin), std::fabs(ymax));
    return (i64)std::floor(X * std::max(1.0, 2 * R));
}

SheetIntegrator::SheetIntegrator(const DiagonalForm& Q, const WeightDescriptor& w, i64 B, Resolution res)
    : Q_(Q), w_(w), B_(B), res_(res) {
    A1_ = Q.coeff(0).get_d();
    if (!(A1_ > 0)) throw std::invalid_argument("SheetIntegrator: leading coefficient must be positive");
    if (w.tag == WeightTag::OmegaEps || w.n != Q.n()) throw std::invalid_argument("SheetIntegrator: unsupported weight");
    X_ = std::sqrt(A1_) * (double)B;
    for (std::size_t i = 0; i < Q.n(); ++i) a_.push_back(Q.coeff(i).get_d() / A1_);
}

std::vector<cplx> SheetIntegrator::star(i64 q, const std::vector<std::vector<i64>>& cs) {
    std::size_t n = Q_.n();
    std::vector<cplx> out(cs.size(), 0.0);
    double ymin, ymax;
    r_range(Q_, w_, ymin, ymax);
    double r = q / X_;
    if (r > std::max(1.0, 2 * std::max(std::fabs(ymin), std::fabs(ymax)))) return out;
    double kap = (double)B_ / q;
    double d = std::min(r, 1.0);
    double ds = d / res_.ppr;
    HTable H(r, ymin - 4 * ds, ymax + 4 * ds, d / res_.h_ppr);
    evals_ += H.v.size();

    bool even = axes_even(w_);
    // distinct per-axis frequencies; even axes only see |c_i|
    double kmax1 = 0, kmax_all = 0;
    for (auto& c : cs) {
        if (c.size() != n) throw FormError(FormErrorKind::DimensionMismatch, "dimension mismatch");
        kmax1 = std::max(kmax1, std::fabs((double)c[0]) * kap);
        for (std::size_t i = 1; i < n; ++i) kmax_all = std::max(kmax_all, std::fabs((double)c[i]) * kap);
    }
    double lo, hi;
    lead_support(w_, lo, hi);
    int P = std::max(res_.u1_panels, (int)std::ceil((hi - lo) * std::max(kmax1, kmax_all) * 2.0 * res_.u1_panels / 8.0));
    std::vector<double> xs, ws;
    panels(lo, hi, P, res_.u1_nodes, xs, ws);

    // group axes with equal coefficient: they share node tables
    std::map<double, std::size_t> rep;
    std::vector<std::size_t> axis_rep(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        auto it = rep.find(a_[i]);
        if (it == rep.end() || w_.tag == WeightTag::W0Product) it = rep.emplace_hint(it, a_[i], i);
        axis_rep[i] = w_.tag == WeightTag::W0Product ? i : it->second;
    }

    std::vector<cplx> Gh, tmp, acc;
    for (std::size_t t = 0; t < xs.size(); ++t) {
        double u1 = xs[t];
        double lf = lead_factor(w_, u1);
        if (lf == 0.0) continue;
        std::map<std::size_t, AxisNodes> nodes;
        int K0 = 0, L = 1;
        bool empty = false;
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t ri = axis_rep[i];
            if (!nodes.count(ri)) nodes.emplace(ri, axis_nodes(w_, ri, u1, a_[ri], ds, kmax_all));
            auto& an = nodes[ri];
            if (an.len == 0 || an.t.empty()) empty = true;
            K0 += an.kmin;
            L += an.len - 1;
        }
        if (empty) continue;
        int M = 1;
        while (M < L) M <<= 1;
        FFT& F = fft_of(M);
        // kernel samples on the s grid
        std::vector<cplx> g(L);
        for (int k = 0; k < L; ++k) g[k] = H(u1 * u1 + (K0 + k) * ds);
        evals_ += L;
        F.run(g, Gh);
        // spectra of axis masses, keyed by (representative axis, signed frequency)
        std::map<std::pair<std::size_t, i64>, std::vector<cplx>> spec;
        auto spectrum = [&](std::size_t i, i64 ci) -> const std::vector<cplx>& {
            std::size_t ri = axis_rep[i];
            i64 key = even ? std::abs(ci) : ci;
            auto k = std::make_pair(ri, key);
            auto it = spec.find(k);
            if (it != spec.end()) return it->second;
            auto& an = nodes[ri];
            std::vector<cplx> m(an.len, 0.0);
            double kk = kap * (double)key;
            for (std::size_t j = 0; j < an.t.size(); ++j) {
                double ph = kTwoPi * kk * an.t[j];
                cplx v = even ? cplx(an.wf[j] * std::cos(ph)) : an.wf[j] * std::polar(1.0, -ph * an.sgn[j]);
                for (int l = 0; l < 4; ++l) m[an.cell[j] - 1 + l] += an.lw[j][l] * v;
            }
            evals_ += an.t.size();
            std::vector<cplx> s;
            F.run(m, s);
            return spec.emplace(k, std::move(s)).first->second;
        };
        double wt = ws[t] * lf;
        // cache the s-integral per tail vector c'
        std::map<std::vector<i64>, cplx> vcache;
        for (std::size_t ic = 0; ic < cs.size(); ++ic) {
            std::vector<i64> tail(cs[ic].begin() + 1, cs[ic].end());
            if (even)
                for (auto& v : tail) v = std::abs(v);
            auto it = vcache.find(tail);
            cplx V;
            if (it != vcache.end()) {
                V = it->second;
            } else {
                acc.assign(M, cplx(1.0));
                for (std::size_t i = 1; i < n; ++i) {
                    auto& s = spectrum(i, cs[ic][i]);
                    for (int f = 0; f < M; ++f) acc[f] *= s[f];
                }
                cplx sum = 0;
                for (int f = 0; f < M; ++f) sum += std::conj(Gh[f]) * acc[f];
                V = sum / (double)M;
                vcache.emplace(tail, V);
            }
            double ph = -kTwoPi * kap * (double)cs[ic][0] * u1;
            out[ic] += wt * std::polar(1.0, ph) * V;
        }
    }
    return out;
}

IntegralValue iq_integral(const DiagonalForm& Q, i64 B, i64 q, const std::vector<i64>& c, const WeightDescriptor& w,
                          Resolution res) {
    if (q < 1 || B < 1) throw std::invalid_argument("iq_integral: q and B must be positive");
    double Bn = std::pow((double)B, (double)Q.n());
    SheetIntegrator S1(Q, w, B, res), S2(Q, w, B, res.refined());
    cplx v1 = S1.star(q, {c})[0], v2 = S2.star(q, {c})[0];
    IntegralValue iv;
    iv.value = v2 * Bn;
    iv.abs_err = std::abs(v2 - v1) * Bn;
    iv.evals = S1.evals() + S2.evals();
    return iv;
}

IntegralValue iq_tensor(const DiagonalForm& Q, i64 B, i64 q, const std::vector<i64>& c, const WeightDescriptor& w,
                        int base_nodes, double max_evals) {
    std::size_t n = Q.n();
    double A1 = Q.coeff(0).get_d();
    if (!(A1 > 0)) throw std::invalid_argument("iq_tensor: leading coefficient must be positive");
    double X = std::sqrt(A1) * B, r = q / X, kap = (double)B / q;
    double ymin, ymax;
    r_range(Q, w, ymin, ymax);
    if (r > std::max(1.0, 2 * std::max(std::fabs(ymin), std::fabs(ymax)))) return {};
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = Q.coeff(i).get_d() / A1;
    double lo, hi;
    lead_support(w, lo, hi);
    auto run = [&](int nodes) -> cplx {
        std::vector<std::vector<double>> xs(n), ws(n);
        double total = 1;
        for (std::size_t i = 0; i < n; ++i) {
            double al = lo, ah = hi;
            if (i > 0) {
                double l1, h1, l2, h2;
                axis_support(w, i, lo, l1, h1);
                axis_support(w, i, hi, l2, h2);
                al = std::min(l1, l2);
                ah = std::max(h1, h2);
            }
            // resolve the phase and the kernel's width in R
            double span = ah - al;
            double gradR = 2 * std::max({std::fabs(al), std::fabs(ah)}) * std::fabs(a[i]);
            int P = (int)std::ceil(nodes * std::max(1 + kap * std::fabs((double)c[i]) * span,
                                                    gradR * span / (4 * std::min(r, 1.0))) / 8.0);
            P = std::max(P, 2);
            panels(al, ah, P, 8, xs[i], ws[i]);
            total *= xs[i].size();
        }
        if (total > max_evals) throw std::length_error("iq_tensor: evaluation budget exceeded");
        std::vector<std::size_t> idx(n, 0);
        cplx sum = 0;
        std::vector<double> x(n);
        while (true) {
            double wt = 1, R = 0, ph = 0;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] = xs[i][idx[i]];
                wt *= ws[i][idx[i]];
                R += a[i] * x[i] * x[i];
                ph += (double)c[i] * x[i];
            }
            double wv = weight_eval(w, x);
            if (wv != 0.0) sum += wt * wv * h_eval(r, R) * std::polar(1.0, -kTwoPi * kap * ph);
            std::size_t k = n;
            bool done = true;
            while (k > 0) {
                --k;
                if (++idx[k] < xs[k].size()) {
                    done = false;
                    break;
                }
                idx[k] = 0;
            }
            if (done) break;
        }
        return sum;
    };
    double Bn = std::pow((double)B, (double)n);
    cplx v1 = run(base_nodes), v2 = run(2 * base_nodes);
    IntegralValue iv;
    iv.value = v2 * Bn;
    iv.abs_err = std::abs(v2 - v1) * Bn;
    return iv;
}

double sheet_integral(const DiagonalForm& Q, const WeightDescriptor& w, double y, int level) {
    std::size_t n = Q.n();
    double A1 = Q.coeff(0).get_d();
    if (!(A1 > 0)) throw std::invalid_argument("sheet_integral: leading coefficient must be positive");
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = Q.coeff(i).get_d() / A1;
    double lo, hi;
    lead_support(w, lo, hi);
    bool even = axes_even(w);
    int P = 3 << level;
    std::vector<std::vector<double>> xs(n), ws(n);
    for (std::size_t i = 1; i < n; ++i) {
        double l1, h1, l2, h2;
        axis_support(w, i, lo, l1, h1);
        axis_support(w, i, hi, l2, h2);
        double al = std::min(l1, l2), ah = std::max(h1, h2);
        if (even) {
            panels(0.0, std::max(std::fabs(al), std::fabs(ah)), P, 8, xs[i], ws[i]);
            for (auto& v : ws[i]) v *= 2;
        } else {
            panels(al, ah, 2 * P, 8, xs[i], ws[i]);
        }
    }
    // remaining range of sum a_j x_j^2 over axes j > i, for pruning
    std::vector<double> rmin(n + 1, 0), rmax(n + 1, 0);
    for (std::size_t i = n - 1; i >= 1; --i) {
        double m2 = 0;
        for (double v : xs[i]) m2 = std::max(m2, v * v);
        rmin[i] = rmin[i + 1] + std::min(0.0, a[i] * m2);
        rmax[i] = rmax[i + 1] + std::max(0.0, a[i] * m2);
    }
    double lo2 = lo > 0 ? lo * lo : 0.0, hi2 = std::max(lo * lo, hi * hi);
    std::vector<double> x(n);
    long double total = 0;
    // recursive descent over axes 1..n-1
    auto rec = [&](auto&& self, std::size_t i, double S, double W) -> void {
        if (i == n) {
            double u2 = y - S;
            if (u2 <= 0) return;
            double u1 = std::sqrt(u2);
            for (double sg : {1.0, -1.0}) {
                if (sg < 0 && lo >= 0) break;
                x[0] = sg * u1;
                double f = weight_eval(w, x);
                if (f != 0.0) total += W * f / (2 * u1);
            }
            return;
        }
        for (std::size_t k = 0; k < xs[i].size(); ++k) {
            double S2 = S + a[i] * xs[i][k] * xs[i][k];
            double u2lo = y - S2 - rmax[i + 1], u2hi = y - S2 - rmin[i + 1];
            if (u2hi < lo2 || u2lo > hi2) continue;
            x[i] = xs[i][k];
            self(self, i + 1, S2, W * ws[i][k]);
        }
    };
    rec(rec, 1, 0.0, 1.0);
    return (double)total;
}

SigmaInfinity sigma_infinity(const DiagonalForm& Q, const WeightDescriptor& w, double rel_tol, int max_level) {
    double A1 = Q.coeff(0).get_d();
    SigmaInfinity s;
    double prev = sheet_integral(Q, w, 0.0, 0);
    for (int L = 1; L <= max_level; ++L) {
        double cur = sheet_integral(Q, w, 0.0, L);
        s.coarse = prev / A1;
        s.value = cur / A1;
        s.level = L;
        s.rel_change = cur == 0 ? 0.0 : std::fabs(cur - prev) / std::fabs(cur);
        if (s.rel_change < rel_tol || cur == 0) break;
        prev = cur;
    }
    return s;
}

DecayReport decay_check(const DiagonalForm& Q, i64 B, i64 q, const std::vector<i64>& c, const WeightDescriptor& w,
                        double eps) {
    double cn = 0;
    for (i64 v : c) cn = std::max(cn, std::fabs((double)v));
    if (cn == 0) throw std::invalid_argument("decay_check: c must be nonzero");
    auto inv = invariants_of(Q);
    double n = (double)Q.n(), H = inv.height.get_d(), A1 = Q.coeff(0).get_d(), D = std::fabs(inv.disc.get_d());
    DecayReport d;
    d.abs_value = std::abs(iq_integral(Q, B, q, c, w).value);
    double Bd = (double)B, qd = (double)q;
    auto env = [&](double N) { return std::pow(Bd, n + 1) / qd * std::pow(H, N + 1) / (std::pow(A1, N / 2 + 0.5) * std::pow(cn, N)); };
    d.ratio_n2 = d.abs_value / env(2);
    d.ratio_n4 = d.abs_value / env(4);
    double small = std::pow(H, 1.5 * n + 1 + eps) / (std::pow(A1, n / 2 + 1) * D) * std::pow(Bd, n / 2 + 1 + eps) *
                   std::pow(cn / qd, 1 - n / 2 + eps);
    d.ratio_small = d.abs_value / small;
    return d;
}

}  // namespace qdl
