#include "bifurc/resultant.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

#include "bifurc/errors.hpp"
#include "bifurc/util.hpp"

namespace bifurc {

Eigen::MatrixXd sylvester_matrix(const DeformationParams& p) {
    p.validate();
    const int m = p.m, n = 2 * m - 1;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) S(i, i + k) = p.a[k];
    for (int j = 0; j < m - 1; ++j) {
        for (int k = 0; k < m - 1; ++k) S(m + j, j + k) = p.abar[k];
        S(m + j, j + m) = 1.0;
    }
    return S;
}

double resultant(const DeformationParams& p) {
    return sylvester_matrix(p).partialPivLu().determinant();
}

double discriminant_tolerance(const DeformationParams& p, double tol) {
    return tol * (1.0 + std::pow(p.norm(), 2 * p.m - 1));
}

bool is_on_discriminant(const DeformationParams& p, double tol) {
    return std::abs(resultant(p)) <= discriminant_tolerance(p, tol);
}

namespace {

std::vector<std::complex<double>> poly_roots(const std::vector<double>& c) {
    // c[0] + c[1] y + ... ; leading coefficient assumed nonzero.
    const int n = static_cast<int>(c.size()) - 1;
    if (n <= 0) return {};
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -c[i] / c[n];
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    std::vector<std::complex<double>> r;
    for (int i = 0; i < n; ++i) r.push_back(es.eigenvalues()[i]);
    return r;
}

}  // namespace

double common_root_distance(const DeformationParams& p) {
    p.validate();
    double scale = 0;
    for (double v : p.a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return 0.0;
    std::vector<double> P(p.a);
    while (P.size() > 1 && std::abs(P.back()) <= 1e-14 * scale) P.pop_back();
    if (P.size() == 1) return std::numeric_limits<double>::infinity();
    std::vector<double> Q(p.abar);
    Q.push_back(0.0);
    Q.push_back(1.0);
    auto rp = poly_roots(P);
    auto rq = poly_roots(Q);
    double best = std::numeric_limits<double>::infinity();
    for (auto& u : rp)
        for (auto& v : rq) best = std::min(best, std::abs(u - v));
    return best;
}

bool StructureReport::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return !checks.empty();
}

namespace {

// Coefficients of t -> f(t), a polynomial of degree <= deg, recovered at Chebyshev nodes.
std::vector<double> poly_coeffs(const std::function<double(double)>& f, int deg) {
    std::vector<double> t, v;
    const int n = deg + 1;
    for (int k = 0; k < n; ++k) {
        double tk = std::cos(std::numbers::pi * (k + 0.5) / n);
        t.push_back(tk);
        v.push_back(f(tk));
    }
    return fit_poly(t, v, deg);
}

double max_abs(const std::vector<double>& c) {
    double s = 0;
    for (double v : c) s = std::max(s, std::abs(v));
    return s;
}

}  // namespace

StructureReport verify_structure(int m, int trials, unsigned seed) {
    if (m < 2 || m > 6) throw InvalidParams("verify_structure supports 2 <= m <= 6");
    StructureReport rep;
    rep.m = m;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    auto rnd = [&] {
        double v = U(rng);
        return v + (v < 0 ? -0.2 : 0.2);
    };
    const int deg = 2 * m - 1;
    const double sgn = (m % 2 == 0) ? 1.0 : -1.0;

    // (i) R(a0, 0..; 0..) = a0^m.
    {
        StructureCheck c{"lowest-order term a0^m", 0.0, 0.0, 0.0, true};
        for (int t = 0; t < trials; ++t) {
            double a0 = 2.0 * rnd();
            std::vector<double> a(m, 0.0), ab(m - 1, 0.0);
            a[0] = a0;
            double R = resultant(DeformationParams(m, a, ab));
            double ex = std::pow(a0, m);
            double err = std::abs(R - ex) / std::abs(ex);
            if (err > c.residual) {
                c.residual = err;
                c.expected = ex;
                c.observed = R;
            }
        }
        c.pass = c.residual < 1e-12;
        rep.checks.push_back(c);
    }

    // (ii) a0 = 0, abar = (abar0, 0, ...): lowest-order term (-1)^m abar0 a1^m.
    {
        StructureCheck cc{"a0=0 leading coefficient (-1)^m abar0 a1^m", 0.0, 0.0, 0.0, true};
        StructureCheck cs{"a0=0 joint-scaling slope", double(m + 1), 0.0, 0.0, true};
        double worst_slope = 0;
        for (int t = 0; t < trials; ++t) {
            std::vector<double> a(m), ab(m - 1, 0.0);
            a[0] = 0.0;
            for (int i = 1; i < m; ++i) a[i] = rnd();
            ab[0] = rnd();
            auto R = [&](double s) {
                std::vector<double> as(a), abs_(ab);
                for (auto& v : as) v *= s;
                for (auto& v : abs_) v *= s;
                return resultant(DeformationParams(m, as, abs_));
            };
            auto coef = poly_coeffs(R, deg);
            double scale = max_abs(coef);
            double ex = sgn * ab[0] * std::pow(a[1], m);
            double err = 0;
            for (int k = 0; k <= m; ++k) err = std::max(err, std::abs(coef[k]) / scale);
            err = std::max(err, std::abs(coef[m + 1] - ex) / std::abs(ex));
            if (err >= cc.residual) {
                cc.residual = err;
                cc.expected = ex;
                cc.observed = coef[m + 1];
            }
            std::vector<double> ts{1e-3, 1e-4, 1e-5, 1e-6}, rs;
            for (double s : ts) rs.push_back(R(s));
            auto fit = fit_loglog(ts, rs);
            double dev = std::abs(fit.slope - (m + 1));
            if (dev >= worst_slope) {
                worst_slope = dev;
                cs.observed = fit.slope;
                cs.residual = fit.rms;
            }
        }
        cc.pass = cc.residual < 1e-6;
        cs.pass = worst_slope < 0.05 * (m + 1);
        rep.checks.push_back(cc);
        rep.checks.push_back(cs);
    }

    // (iii) a0 = a1 = 0: divisible by abar0^2 with quotient leading term a2^m.
    {
        StructureCheck cd{"a0=a1=0 divisible by abar0^2", 0.0, 0.0, 0.0, true};
        StructureCheck cq{"a0=a1=0 quotient leading term a2^m", 0.0, 0.0, 0.0, true};
        for (int t = 0; t < trials; ++t) {
            std::vector<double> a(m), ab(m - 1);
            for (int i = 0; i < m; ++i) a[i] = i < 2 ? 0.0 : rnd();
            for (int j = 0; j < m - 1; ++j) ab[j] = rnd();
            if (m == 2) {
                double R = resultant(DeformationParams(m, a, ab));
                cd.residual = std::max(cd.residual, std::abs(R));
                cq.residual = std::max(cq.residual, std::abs(R));
                continue;
            }
            auto Rb = [&](double b0) {
                std::vector<double> abx(ab);
                abx[0] = b0;
                return resultant(DeformationParams(m, a, abx));
            };
            auto cb = poly_coeffs(Rb, m - 1);
            double sb = max_abs(cb);
            double errd = std::max(std::abs(cb[0]), std::abs(cb[1])) / sb;
            if (errd >= cd.residual) {
                cd.residual = errd;
                cd.observed = std::max(std::abs(cb[0]), std::abs(cb[1]));
            }
            auto Rt = [&](double s) {
                std::vector<double> as(a), abs_(ab);
                for (auto& v : as) v *= s;
                for (auto& v : abs_) v *= s;
                return resultant(DeformationParams(m, as, abs_));
            };
            auto ct = poly_coeffs(Rt, deg);
            double st = max_abs(ct);
            double ex = ab[0] * ab[0] * std::pow(a[2], m);
            double errq = 0;
            for (int k = 0; k <= m + 1; ++k) errq = std::max(errq, std::abs(ct[k]) / st);
            errq = std::max(errq, std::abs(ct[m + 2] - ex) / std::abs(ex));
            if (errq >= cq.residual) {
                cq.residual = errq;
                cq.expected = ex;
                cq.observed = ct[m + 2];
            }
        }
        cd.pass = cd.residual < 1e-6;
        cq.pass = cq.residual < 1e-6;
        rep.checks.push_back(cd);
        rep.checks.push_back(cq);
    }

    // Single-variable degrees: m in a0, m - 1 in abar0.
    {
        StructureCheck ca{"degree in a0", double(m), 0.0, 0.0, true};
        StructureCheck cb{"degree in abar0", double(m - 1), 0.0, 0.0, true};
        for (int t = 0; t < trials; ++t) {
            std::vector<double> a(m), ab(m - 1);
            for (auto& v : a) v = rnd();
            for (auto& v : ab) v = rnd();
            auto fa = [&](double s) {
                std::vector<double> ax(a);
                ax[0] = s;
                return resultant(DeformationParams(m, ax, ab));
            };
            auto fb = [&](double s) {
                std::vector<double> bx(ab);
                bx[0] = s;
                return resultant(DeformationParams(m, a, bx));
            };
            auto degree_of = [](const std::vector<double>& c) {
                double s = max_abs(c);
                int d = 0;
                for (size_t k = 0; k < c.size(); ++k)
                    if (std::abs(c[k]) > 1e-9 * s) d = static_cast<int>(k);
                return d;
            };
            auto ka = poly_coeffs(fa, deg);
            auto kb = poly_coeffs(fb, deg);
            int da = degree_of(ka), db = degree_of(kb);
            ca.observed = std::max(ca.observed, double(da));
            cb.observed = std::max(cb.observed, double(db));
            if (da != m) ca.pass = false;
            if (db != m - 1) cb.pass = false;
        }
        rep.checks.push_back(ca);
        rep.checks.push_back(cb);
    }
    return rep;
}

}  // namespace bifurc
