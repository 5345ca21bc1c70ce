#include "bifurc/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "bifurc/errors.hpp"
#include "bifurc/resultant.hpp"
#include "bifurc/util.hpp"

namespace bifurc {

namespace {

constexpr double kDiffStep = 1e-3;

double dtheta(const TorusFn& f, double th, double x, double h = kDiffStep) {
    return diff1([&](double t) { return f(t, x); }, th, h);
}

double dx(const TorusFn& f, double th, double x, double h = kDiffStep) {
    return diff1([&](double v) { return f(th, v); }, x, h);
}

Eigen::Vector2d grad(const TorusFn& f, const Eigen::Vector2d& p) {
    return {dtheta(f, p[0], p[1]), dx(f, p[0], p[1])};
}

struct Torus {
    bool x_periodic = true;
    double x_lo = 0.0;
    double x_hi = kTwoPi;

    Eigen::Vector2d wrap(const Eigen::Vector2d& p) const {
        Eigen::Vector2d q(wrap_2pi(p[0]), p[1]);
        if (x_periodic) q[1] = x_lo + wrap_2pi((p[1] - x_lo) * kTwoPi / (x_hi - x_lo)) * (x_hi - x_lo) / kTwoPi;
        return q;
    }
    // Representative of q closest to p.
    Eigen::Vector2d near(const Eigen::Vector2d& p, const Eigen::Vector2d& q) const {
        Eigen::Vector2d r(p[0] + angle_diff(q[0], p[0]), q[1]);
        if (x_periodic) {
            double per = x_hi - x_lo;
            double d = std::fmod(q[1] - p[1], per);
            if (d > per / 2) d -= per;
            if (d < -per / 2) d += per;
            r[1] = p[1] + d;
        }
        return r;
    }
    double dist(const Eigen::Vector2d& p, const Eigen::Vector2d& q) const { return (near(p, q) - p).norm(); }
};

// Newton projection onto f = 0 along the gradient.
bool project(const TorusFn& f, Eigen::Vector2d& p, double grad_tol, double newton_tol, int* iters = nullptr) {
    for (int it = 0; it < 12; ++it) {
        double v = f(p[0], p[1]);
        Eigen::Vector2d g = grad(f, p);
        double gn = g.squaredNorm();
        if (std::sqrt(gn) <= grad_tol) return false;
        Eigen::Vector2d step = v * g / gn;
        p -= step;
        if (step.norm() < newton_tol) {
            if (iters) *iters = it + 1;
            return true;
        }
    }
    return false;
}

// Newton for the square system (F, G) = 0 in (theta, x) with a finite-difference Jacobian.
bool newton2(const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& FG, Eigen::Vector2d& p,
             double step_tol = 1e-12, int max_it = 50, double max_step = 0.2, double jac_h = 1e-6) {
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_it; ++it) {
        Eigen::Vector2d v = FG(p);
        Eigen::Matrix2d J;
        for (int k = 0; k < 2; ++k) {
            Eigen::Vector2d e = Eigen::Vector2d::Zero();
            e[k] = jac_h;
            J.col(k) = (FG(p + e) - FG(p - e)) / (2 * jac_h);
        }
        Eigen::FullPivLU<Eigen::Matrix2d> lu(J);
        if (!lu.isInvertible()) return false;
        Eigen::Vector2d d = lu.solve(v);
        if (!d.allFinite()) return false;
        if (d.norm() > max_step) d *= max_step / d.norm();
        p -= d;
        last = d.norm();
        if (last < step_tol) return true;
    }
    return last < 1e-9;
}

}  // namespace

ExpansionData ExpansionData::analytic(int r_dim, int q, std::function<Eigen::MatrixXd(double)> b,
                                      std::function<std::vector<Eigen::MatrixXd>(double)> c) {
    ExpansionData d;
    d.r_dim = r_dim;
    d.q = q;
    d.b = std::move(b);
    if (c) {
        d.c = std::move(c);
    } else {
        d.c = [r_dim, q](double) { return std::vector<Eigen::MatrixXd>(r_dim, Eigen::MatrixXd::Zero(q, q)); };
    }
    return d;
}

Eigen::VectorXd ExpansionData::bs(double x, const Eigen::VectorXd& s) const { return b(x) * s; }

Eigen::VectorXd ExpansionData::cs(double x, const Eigen::VectorXd& s) const {
    auto cm = c(x);
    Eigen::VectorXd out(r_dim);
    for (int i = 0; i < r_dim; ++i) out[i] = s.dot(cm[i] * s);
    return out;
}

Eigen::VectorXd ExpansionData::reconstruct(const Eigen::VectorXd& eps, double x) const {
    return bs(x, eps) + cs(x, eps);
}

ExpansionData extract_expansion(const ParamMap& a, int q, int r_dim, double h, const ManifoldChart& chart) {
    if (h < 1e-6 || h > 1e-2) throw InvalidParams("difference step must lie in [1e-6, 1e-2]");
    const int n_check = 16;
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(q);
    for (int k = 0; k < n_check; ++k) {
        double x = chart.periodic() ? chart.lo + chart.period() * k / n_check
                                    : chart.lo + (chart.hi - chart.lo) * k / (n_check - 1);
        auto v = a(zero, x);
        if (static_cast<int>(v.size()) != r_dim) throw InvalidParams("parameter map returned wrong length");
        for (double c : v)
            if (std::abs(c) > 1e-10)
                throw ModelInconsistency("a(0, x) != 0 at x = " + std::to_string(x));
    }
    auto eval = [a, q, r_dim](const Eigen::VectorXd& e, double x) {
        auto v = a(e, x);
        return Eigen::Map<const Eigen::VectorXd>(v.data(), r_dim).eval();
    };
    ExpansionData d;
    d.r_dim = r_dim;
    d.q = q;
    d.b = [eval, q, r_dim, h](double x) {
        Eigen::MatrixXd B(r_dim, q);
        for (int j = 0; j < q; ++j) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(q);
            auto at = [&](double t) {
                e[j] = t;
                return eval(e, x);
            };
            B.col(j) = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
        }
        return B;
    };
    d.c = [eval, q, r_dim, h](double x) {
        std::vector<Eigen::MatrixXd> C(r_dim, Eigen::MatrixXd::Zero(q, q));
        Eigen::VectorXd e0 = Eigen::VectorXd::Zero(q);
        Eigen::VectorXd f0 = eval(e0, x);
        for (int j = 0; j < q; ++j) {
            auto at = [&](double t) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(q);
                e[j] = t;
                return eval(e, x);
            };
            Eigen::VectorXd d2 = (-at(2 * h) + 16 * at(h) - 30 * f0 + 16 * at(-h) - at(-2 * h)) / (12 * h * h);
            for (int i = 0; i < r_dim; ++i) C[i](j, j) = 0.5 * d2[i];
        }
        for (int j = 0; j < q; ++j) {
            for (int k = j + 1; k < q; ++k) {
                auto mixed = [&](double s) {
                    auto at = [&](double u, double v) {
                        Eigen::VectorXd e = Eigen::VectorXd::Zero(q);
                        e[j] = u;
                        e[k] = v;
                        return eval(e, x);
                    };
                    return ((at(s, s) - at(s, -s) - at(-s, s) + at(-s, -s)) / (4 * s * s)).eval();
                };
                Eigen::VectorXd d2 = (4 * mixed(h) - mixed(2 * h)) / 3;
                for (int i = 0; i < r_dim; ++i) C[i](j, k) = C[i](k, j) = 0.5 * d2[i];
            }
        }
        return C;
    };
    return d;
}

Eigen::VectorXd unit_direction(double theta) { return Eigen::Vector2d(std::cos(theta), std::sin(theta)); }

PinchResult pinch(double rho, const Eigen::VectorXd& s) {
    PinchResult r;
    double n = s.norm();
    if (std::abs(n - 1.0) > 1e-12) {
        r.normalised = true;
        r.eps = rho * s / n;
    } else {
        r.eps = rho * s;
    }
    return r;
}

const char* to_string(Stratum s) {
    switch (s) {
        case Stratum::T0: return "T0";
        case Stratum::T1: return "T1";
        case Stratum::T1prime: return "T1prime";
        case Stratum::T2: return "T2";
        default: return "NotInT";
    }
}

const char* to_string(PointKind k) {
    switch (k) {
        case PointKind::Interior: return "Interior";
        case PointKind::End: return "End";
        case PointKind::Intersection: return "Intersection";
        default: return "None";
    }
}

const char* to_string(MCase c) {
    switch (c) {
        case MCase::Regular: return "regular";
        case MCase::CaseII: return "case-ii";
        case MCase::CaseIII: return "case-iii";
        case MCase::Degenerate: return "degenerate";
        default: return "off-cone";
    }
}

const char* to_string(ArcKind k) {
    switch (k) {
        case ArcKind::FoldPairCusp: return "FoldPairCusp";
        case ArcKind::FoldArc: return "FoldArc";
        case ArcKind::EndArc: return "EndArc";
        case ArcKind::IntersectionArc: return "IntersectionArc";
        default: return "HysteresisArc";
    }
}

ClassifiedPoint classify_point_m2(const ExpansionData& data, const Eigen::VectorXd& s, double x, double tol) {
    if (data.r_dim != 3) throw InvalidParams("m = 2 classification needs three versal parameters");
    ClassifiedPoint p;
    p.s = s;
    p.theta = s.size() == 2 ? wrap_2pi(std::atan2(s[1], s[0])) : (s[0] >= 0 ? 0.0 : std::numbers::pi);
    p.x = x;
    Eigen::MatrixXd B = data.b(x);
    Eigen::VectorXd v = B * s;
    const double t = tol * std::max(1.0, B.norm());
    const double b1 = v[0], b2 = v[1], b3 = v[2];
    p.residuals = {b1, b2, b3};
    const bool z1 = std::abs(b1) <= t, z2 = std::abs(b2) <= t, z3 = std::abs(b3) <= t;
    if (z1 && z2 && z3) {
        p.stratum = Stratum::T0;
        p.kind = PointKind::None;
    } else if (!z1 || b3 > t) {
        p.stratum = Stratum::NotInT;
        p.kind = PointKind::None;
    } else if (z3) {
        p.stratum = Stratum::T1;
        p.kind = PointKind::End;
    } else if (z2) {
        p.stratum = Stratum::T1prime;
        p.kind = PointKind::Intersection;
    } else {
        p.stratum = Stratum::T2;
        p.kind = PointKind::Interior;
    }
    return p;
}

ClassifiedPoint classify_point_m(int m, const ExpansionData& data, const Eigen::VectorXd& s, double x, double tol) {
    if (m == 2) return classify_point_m2(data, s, x, tol);
    if (data.r_dim != 2 * m - 1) throw InvalidParams("expansion has wrong number of versal parameters");
    ClassifiedPoint p;
    p.s = s;
    p.theta = s.size() == 2 ? wrap_2pi(std::atan2(s[1], s[0])) : (s[0] >= 0 ? 0.0 : std::numbers::pi);
    p.x = x;
    Eigen::MatrixXd B = data.b(x);
    Eigen::VectorXd v = B * s;
    const double t = tol * std::max(1.0, B.norm());
    const double b0 = v[0], bb0 = v[m], b1 = v[1], b2 = v[2];
    p.residuals = {b0, bb0, b1, b2};
    if (std::abs(b0) > t) {
        p.mcase = MCase::NotOnCone;
        p.stratum = Stratum::NotInT;
        p.kind = PointKind::None;
    } else if (std::abs(b1) <= t) {
        p.mcase = std::abs(b2) > t ? MCase::CaseIII : MCase::Degenerate;
        p.stratum = std::abs(b2) > t ? Stratum::T1prime : Stratum::T0;
        p.kind = PointKind::None;
    } else if (std::abs(bb0) <= t) {
        p.mcase = MCase::CaseII;
        p.stratum = Stratum::T1;
        p.kind = PointKind::End;
    } else {
        p.mcase = MCase::Regular;
        p.stratum = Stratum::T2;
        p.kind = PointKind::Interior;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Curve tracing on the torus.

namespace {

double seg_dist(const Torus& T, const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    Eigen::Vector2d A = T.near(p, a);
    Eigen::Vector2d B = T.near(A, b);
    Eigen::Vector2d d = B - A;
    double L = d.squaredNorm();
    double t = L > 0 ? std::clamp((p - A).dot(d) / L, 0.0, 1.0) : 0.0;
    return (A + t * d - p).norm();
}

struct HalfTrace {
    std::vector<Eigen::Vector2d> pts;
    bool closed = false;
    bool singular = false;
};

HalfTrace trace_half(const TorusFn& f, const Torus& T, const Eigen::Vector2d& start, double dir, double tol,
                     const TraceOptions& opt) {
    HalfTrace h;
    h.pts.push_back(start);
    Eigen::Vector2d p = start;
    Eigen::Vector2d g0 = grad(f, p);
    if (g0.norm() <= tol) {
        h.singular = true;
        return h;
    }
    Eigen::Vector2d tprev = dir * Eigen::Vector2d(-g0[1], g0[0]) / g0.norm();
    double step = opt.step, arclen = 0.0;
    for (int n = 0; n < opt.max_steps; ++n) {
        Eigen::Vector2d g = grad(f, p);
        if (g.norm() <= tol) {
            h.singular = true;
            break;
        }
        Eigen::Vector2d t = Eigen::Vector2d(-g[1], g[0]) / g.norm();
        if (t.dot(tprev) < 0) t = -t;
        bool ok = false;
        Eigen::Vector2d q;
        int iters = 0;
        while (!ok) {
            q = p + step * t;
            Eigen::Vector2d pred = q;
            ok = project(f, q, tol, opt.newton_tol, &iters) && (q - pred).norm() < 0.5 * step;
            if (ok) {
                Eigen::Vector2d gq = grad(f, q);
                Eigen::Vector2d tq = Eigen::Vector2d(-gq[1], gq[0]) / gq.norm();
                if (std::abs(tq.dot(t)) < std::cos(0.5)) ok = false;
            }
            if (!ok) {
                step *= 0.5;
                if (step < 1e-9) break;
            }
        }
        if (!ok) {
            h.singular = true;
            break;
        }
        arclen += (q - p).norm();
        if (!T.x_periodic && (q[1] < T.x_lo || q[1] > T.x_hi)) break;
        Eigen::Vector2d qw = T.wrap(q);
        if (arclen > 4 * opt.max_step && T.dist(qw, h.pts.front()) < 1.1 * step) {
            h.closed = true;
            break;
        }
        h.pts.push_back(qw);
        p = q;
        tprev = t;
        if (iters <= 3) step = std::min(step * 1.5, opt.max_step);
    }
    return h;
}

}  // namespace

std::vector<Polyline> trace_zero_curve(const TorusFn& f, double tol, const TraceOptions& opt) {
    Torus T{opt.x_periodic, opt.x_lo, opt.x_hi};
    const int n = opt.grid;
    const double dth = kTwoPi / n;
    const int nx = opt.x_periodic ? n : n + 1;
    const double dxs = (opt.x_hi - opt.x_lo) / n;
    std::vector<double> F(static_cast<size_t>(n) * nx);
    auto at = [&](int i, int j) -> double& { return F[static_cast<size_t>(i) * nx + j]; };
    parallel_for(n, 0, [&](int i) {
        for (int j = 0; j < nx; ++j) at(i, j) = f(i * dth, opt.x_lo + j * dxs);
    });
    std::vector<Eigen::Vector2d> seeds;
    auto edge = [&](Eigen::Vector2d a, Eigen::Vector2d b, double fa, double fb) {
        if (fa == 0.0) {
            seeds.push_back(a);
            return;
        }
        if ((fa > 0) == (fb > 0) || fb == 0.0) return;
        for (int it = 0; it < 50; ++it) {
            Eigen::Vector2d c = 0.5 * (a + b);
            double fc = f(c[0], c[1]);
            if ((fc > 0) == (fa > 0)) {
                a = c;
                fa = fc;
            } else {
                b = c;
            }
        }
        seeds.push_back(0.5 * (a + b));
    };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < nx; ++j) {
            Eigen::Vector2d p(i * dth, opt.x_lo + j * dxs);
            int i1 = (i + 1) % n;
            edge(p, Eigen::Vector2d((i + 1) * dth, p[1]), at(i, j), at(i1, j));
            if (opt.x_periodic || j + 1 < nx) {
                int j1 = (j + 1) % nx;
                edge(p, Eigen::Vector2d(p[0], p[1] + dxs), at(i, j), at(i, j1));
            }
        }
    }
    std::vector<Polyline> curves;
    const double cover = std::max(2e-3, 0.05 * std::min(dth, dxs));
    for (auto s : seeds) {
        if (!project(f, s, tol, opt.newton_tol)) continue;
        s = T.wrap(s);
        if (!opt.x_periodic && (s[1] < opt.x_lo || s[1] > opt.x_hi)) continue;
        bool covered = false;
        for (const auto& c : curves) {
            const auto& P = c.pts;
            for (size_t k = 0; k + 1 < P.size() + (c.closed ? 1 : 0) && !covered; ++k)
                if (seg_dist(T, s, P[k], P[(k + 1) % P.size()]) < cover) covered = true;
            if (P.size() == 1 && T.dist(s, P[0]) < cover) covered = true;
            if (covered) break;
        }
        if (covered) continue;
        HalfTrace fwd = trace_half(f, T, s, 1.0, tol, opt);
        Polyline pl;
        if (fwd.closed) {
            pl.pts = fwd.pts;
            pl.closed = true;
        } else {
            HalfTrace bwd = trace_half(f, T, s, -1.0, tol, opt);
            pl.pts.assign(bwd.pts.rbegin(), bwd.pts.rend());
            pl.pts.insert(pl.pts.end(), fwd.pts.begin() + 1, fwd.pts.end());
            pl.singular = fwd.singular || bwd.singular;
        }
        curves.push_back(std::move(pl));
    }
    return curves;
}

std::vector<FoldPoint> find_fold_points(const TorusFn& f, const Polyline& curve, double tol) {
    std::vector<FoldPoint> out;
    const auto& P = curve.pts;
    if (P.size() < 2) return out;
    auto fx = [&](double th, double x) { return dx(f, th, x); };
    std::vector<double> v(P.size());
    for (size_t k = 0; k < P.size(); ++k) v[k] = fx(P[k][0], P[k][1]);
    const size_t nseg = curve.closed ? P.size() : P.size() - 1;
    Torus T;
    for (size_t k = 0; k < nseg; ++k) {
        size_t k1 = (k + 1) % P.size();
        if ((v[k] > 0) == (v[k1] > 0) && v[k] != 0.0) continue;
        Eigen::Vector2d a = P[k], b = T.near(a, P[k1]);
        double w = std::abs(v[k]) / (std::abs(v[k]) + std::abs(v[k1]) + 1e-300);
        Eigen::Vector2d p = a + w * (b - a);
        auto FG = [&](const Eigen::Vector2d& u) { return Eigen::Vector2d(f(u[0], u[1]), fx(u[0], u[1])); };
        if (!newton2(FG, p, 1e-13, 60, 0.05)) continue;
        Eigen::Vector2d pw = T.wrap(p);
        bool dup = false;
        for (const auto& o : out)
            if (T.dist(Eigen::Vector2d(o.theta, o.x), pw) < 1e-6) dup = true;
        if (dup) continue;
        FoldPoint fp;
        fp.theta = pw[0];
        fp.x = pw[1];
        fp.s = unit_direction(fp.theta);
        fp.second_derivative = diff2([&](double x) { return f(pw[0], x); }, pw[1], kDiffStep);
        Eigen::Vector2d g = grad(f, pw);
        fp.unresolved = std::abs(fp.second_derivative) <= tol || g.norm() <= tol;
        out.push_back(fp);
    }
    return out;
}

std::vector<FoldPoint> find_fold_points(const ExpansionData& data, const Polyline& curve, double tol) {
    TorusFn b1 = [&data](double th, double x) { return data.bs(x, unit_direction(th))[0]; };
    return find_fold_points(b1, curve, tol);
}

// ---------------------------------------------------------------------------
// Bifurcation arcs.

std::vector<double> default_rho_schedule() {
    std::vector<double> r;
    for (double v = 1e-2; v > 9e-6; v *= 0.5) r.push_back(v);
    return r;
}

double reduced_resultant(int m, const ExpansionData& data, double rho, double theta, double x) {
    Eigen::VectorXd s = unit_direction(theta);
    Eigen::VectorXd v = data.bs(x, s) + rho * data.cs(x, s);
    std::vector<double> a(v.data(), v.data() + v.size());
    if (rho == 0.0) return std::pow(a[0], m);
    for (auto& c : a) c *= rho;
    return resultant(DeformationParams::from_flat(m, a)) / std::pow(rho, m);
}

namespace {

struct Proto {
    ArcKind kind;
    double theta0, x0;
    ClassifiedPoint source;
    int num, den;
    std::vector<std::vector<ArcSample>> branches;
    std::vector<double> branch_theta0;
    std::vector<std::string> flags;
};

double pbar(int m, const ExpansionData& data, double th, double x) {
    const double h = 1e-4;
    return (reduced_resultant(m, data, h, th, x) - reduced_resultant(m, data, -h, th, x)) / (2 * h);
}

std::vector<ArcSample> follow(const std::function<Eigen::Vector2d(double rho, const Eigen::Vector2d&)>& system,
                              const std::function<Eigen::Vector2d(double rho)>& guess, const std::vector<double>& rhos,
                              double th0, double x0, double max_dev) {
    std::vector<double> order(rhos);
    std::sort(order.begin(), order.end());
    std::vector<ArcSample> out;
    Eigen::Vector2d prev;
    bool have_prev = false;
    for (double rho : order) {
        auto FG = [&](const Eigen::Vector2d& u) { return system(rho, u); };
        Eigen::Vector2d p = guess(rho);
        bool ok = newton2(FG, p, 1e-13, 60, 0.05, 1e-6);
        if (!ok && have_prev) {
            p = prev;
            ok = newton2(FG, p, 1e-13, 60, 0.05, 1e-6);
        }
        if (!ok) continue;
        if (std::abs(angle_diff(p[0], th0)) > max_dev || std::abs(p[1] - x0) > 4 * max_dev + 0.2) continue;
        ArcSample s;
        s.rho = rho;
        s.theta = wrap_2pi(p[0]);
        s.x = p[1];
        s.eps = rho * unit_direction(s.theta);
        out.push_back(s);
        prev = p;
        have_prev = true;
    }
    return out;
}

double fit_contact(const std::vector<ArcSample>& br, double th0) {
    if (br.size() < 5) return std::numeric_limits<double>::quiet_NaN();
    std::vector<ArcSample> s(br);
    std::sort(s.begin(), s.end(), [](auto& a, auto& b) { return a.rho < b.rho; });
    s.resize(s.size() - 2);
    std::vector<double> par, perp;
    for (const auto& p : s) {
        double d = angle_diff(p.theta, th0);
        double e_perp = p.rho * std::abs(std::sin(d));
        if (e_perp < 1e-300) continue;
        par.push_back(p.rho * std::cos(d));
        perp.push_back(e_perp);
    }
    if (par.size() < 3) return std::numeric_limits<double>::quiet_NaN();
    return fit_loglog(par, perp).slope;
}

}  // namespace

ArcAnalysis analyse_arcs(int m, const ExpansionData& data, const ArcOptions& opt) {
    if (data.q != 2) throw UnsupportedDimension("bifurcation arcs are computed for q = 2 only");
    if (data.r_dim != 2 * m - 1) throw InvalidParams("expansion has wrong number of versal parameters");
    ArcAnalysis A;
    A.m = m;
    const std::vector<double> rhos = opt.rho_schedule.empty() ? default_rho_schedule() : opt.rho_schedule;
    const double tol = opt.tol;
    Torus T{opt.trace.x_periodic, opt.trace.x_lo, opt.trace.x_hi};

    auto row = [&data](int r) {
        return TorusFn([&data, r](double th, double x) { return data.bs(x, unit_direction(th))[r]; });
    };
    TorusFn P = row(0), Pm = row(m), P1 = row(1);
    TorusFn Pbar = [&](double th, double x) { return pbar(m, data, th, x); };

    A.b0_curves = trace_zero_curve(P, 1e-10, opt.trace);
    for (const auto& c : A.b0_curves) {
        if (c.singular) A.flags.push_back("B0 curve contains a singular point");
        for (auto& f : find_fold_points(P, c, tol)) {
            bool dup = false;
            for (auto& g : A.folds)
                if (T.dist({g.theta, g.x}, {f.theta, f.x}) < 1e-6) dup = true;
            if (!dup) A.folds.push_back(f);
        }
    }

    auto add_point = [&](const Eigen::Vector2d& p) {
        for (auto& q : A.points)
            if (T.dist({q.theta, q.x}, p) < 1e-6) return;
        A.points.push_back(classify_point_m(m, data, unit_direction(p[0]), p[1], tol));
    };
    for (const auto& c : A.b0_curves) {
        const auto& pts = c.pts;
        const size_t nseg = c.closed ? pts.size() : (pts.empty() ? 0 : pts.size() - 1);
        for (const TorusFn* other : {&Pm, &P1}) {
            std::vector<double> v(pts.size());
            for (size_t k = 0; k < pts.size(); ++k) v[k] = (*other)(pts[k][0], pts[k][1]);
            for (size_t k = 0; k < nseg; ++k) {
                size_t k1 = (k + 1) % pts.size();
                if ((v[k] > 0) == (v[k1] > 0) && v[k] != 0.0) continue;
                Eigen::Vector2d a = pts[k], b = T.near(a, pts[k1]);
                double w = std::abs(v[k]) / (std::abs(v[k]) + std::abs(v[k1]) + 1e-300);
                Eigen::Vector2d p = a + w * (b - a);
                auto FG = [&](const Eigen::Vector2d& u) {
                    return Eigen::Vector2d(P(u[0], u[1]), (*other)(u[0], u[1]));
                };
                if (newton2(FG, p, 1e-14, 60, 0.05)) add_point(T.wrap(p));
            }
        }
    }

    std::vector<Proto> protos;
    auto system = [&](double rho, const Eigen::Vector2d& u) {
        double r = reduced_resultant(m, data, rho, u[0], u[1]);
        double rx = diff1([&](double x) { return reduced_resultant(m, data, rho, u[0], x); }, u[1], kDiffStep);
        return Eigen::Vector2d(r, rx);
    };

    // Fold arcs.
    for (const auto& f : A.folds) {
        Proto pr{m == 2 ? ArcKind::FoldPairCusp : ArcKind::FoldArc, f.theta, f.x, {}, m + 1, m, {}, {}, {}};
        pr.source = classify_point_m(m, data, f.s, f.x, tol);
        if (f.unresolved) {
            A.flags.push_back("unresolved singularity of the B0 projection");
            continue;
        }
        double K = Pbar(f.theta, f.x);
        double alpha = dtheta(P, f.theta, f.x);
        if (std::abs(alpha) < tol || std::abs(K) < tol) {
            pr.flags.push_back("degenerate fold");
            protos.push_back(pr);
            continue;
        }
        std::vector<double> signs;
        if (m % 2 == 0) {
            if (K < 0) signs = {1.0, -1.0};
        } else {
            signs = {K > 0 ? -1.0 : 1.0};
        }
        for (double sg : signs) {
            auto guess = [&](double rho) {
                double b0 = sg * std::pow(std::abs(rho * K), 1.0 / m);
                return Eigen::Vector2d(f.theta + b0 / alpha, f.x);
            };
            auto br = follow(system, guess, rhos, f.theta, f.x, 0.6);
            if (!br.empty()) {
                pr.branches.push_back(br);
                pr.branch_theta0.push_back(f.theta);
            }
        }
        protos.push_back(pr);
    }

    // End points (case (ii)) and intersection points.
    for (const auto& cp : A.points) {
        if (cp.kind == PointKind::End) {
            ArcKind kind = (m % 2 == 0) ? ArcKind::EndArc : ArcKind::HysteresisArc;
            Proto pr{kind, cp.theta, cp.x, cp, m, m - 1, {}, {}, {}};
            double Pt = dtheta(P, cp.theta, cp.x), Px = dx(P, cp.theta, cp.x);
            double Qt = dtheta(Pbar, cp.theta, cp.x), Qx = dx(Pbar, cp.theta, cp.x);
            if (std::abs(Qx) < tol) pr.flags.push_back("H2prime violated");
            Eigen::Matrix2d J;
            J << Pt, Px, Qt, Qx;
            double lambda = (std::abs(Qx) > 0) ? -m * Px / Qx : std::numeric_limits<double>::infinity();
            std::vector<double> signs;
            if (m % 2 == 0) {
                signs = {1.0};
            } else if (lambda > 0) {
                signs = {1.0, -1.0};
            }
            Eigen::FullPivLU<Eigen::Matrix2d> lu(J);
            if (!lu.isInvertible() || !std::isfinite(lambda)) {
                pr.flags.push_back("degenerate end point");
                protos.push_back(pr);
                continue;
            }
            for (double sg : signs) {
                auto guess = [&](double rho) {
                    double w = rho / lambda;
                    double p = (m % 2 == 0) ? std::copysign(std::pow(std::abs(w), 1.0 / (m - 1)), w)
                                            : sg * std::pow(std::abs(w), 1.0 / (m - 1));
                    double pb = -p / lambda;
                    Eigen::Vector2d d = lu.solve(Eigen::Vector2d(p, pb));
                    return Eigen::Vector2d(cp.theta + d[0], cp.x + d[1]);
                };
                auto br = follow(system, guess, rhos, cp.theta, cp.x, 0.6);
                if (!br.empty()) {
                    pr.branches.push_back(br);
                    pr.branch_theta0.push_back(cp.theta);
                }
            }
            protos.push_back(pr);
        } else if (m == 2 && cp.kind == PointKind::Intersection) {
            Proto pr{ArcKind::IntersectionArc, cp.theta, cp.x, cp, 3, 2, {}, {}, {}};
            auto sys = [&](double rho, const Eigen::Vector2d& u) {
                Eigen::VectorXd s = unit_direction(u[0]);
                Eigen::VectorXd v = data.bs(u[1], s) + rho * data.cs(u[1], s);
                return Eigen::Vector2d(v[0], v[1]);
            };
            auto guess = [&](double) { return Eigen::Vector2d(cp.theta, cp.x); };
            auto br = follow(sys, guess, rhos, cp.theta, cp.x, 0.6);
            if (!br.empty()) {
                pr.branches.push_back(br);
                pr.branch_theta0.push_back(cp.theta);
            }
            protos.push_back(pr);
        }
    }

    // Merge antipodal sources into one arc record.
    std::vector<bool> used(protos.size(), false);
    for (size_t i = 0; i < protos.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        Proto merged = protos[i];
        bool pairable = merged.kind != ArcKind::IntersectionArc &&
                        !(merged.kind == ArcKind::FoldPairCusp) && !(merged.kind == ArcKind::FoldArc && m % 2 == 0);
        if (pairable) {
            for (size_t j = i + 1; j < protos.size(); ++j) {
                if (used[j] || protos[j].kind != merged.kind) continue;
                if (std::abs(angle_diff(protos[j].theta0, merged.theta0 + std::numbers::pi)) < 1e-6 &&
                    T.dist({0.0, protos[j].x0}, {0.0, merged.x0}) < 1e-6) {
                    used[j] = true;
                    if (merged.branches.empty()) {
                        merged.theta0 = protos[j].theta0;
                        merged.source = protos[j].source;
                    }
                    for (size_t b = 0; b < protos[j].branches.size(); ++b) {
                        merged.branches.push_back(protos[j].branches[b]);
                        merged.branch_theta0.push_back(protos[j].branch_theta0[b]);
                    }
                    merged.flags.insert(merged.flags.end(), protos[j].flags.begin(), protos[j].flags.end());
                }
            }
        }
        if (merged.branches.empty()) continue;
        BifurcationArc arc;
        arc.kind = merged.kind;
        arc.theta0 = merged.theta0;
        arc.x0 = merged.x0;
        arc.origin_direction = unit_direction(merged.theta0);
        arc.source = merged.source;
        arc.contact_num = merged.num;
        arc.contact_den = merged.den;
        arc.branches = merged.branches;
        arc.flags = merged.flags;
        double sum = 0;
        int cnt = 0;
        for (size_t b = 0; b < arc.branches.size(); ++b) {
            const auto& br = arc.branches[b];
            auto smallest = std::min_element(br.begin(), br.end(), [](auto& u, auto& v) { return u.rho < v.rho; });
            double d = angle_diff(smallest->theta, merged.branch_theta0[b]);
            arc.sides.push_back(d > 0 ? 1 : (d < 0 ? -1 : 0));
            double e = fit_contact(br, merged.branch_theta0[b]);
            if (std::isfinite(e)) {
                sum += e;
                ++cnt;
            }
        }
        arc.fitted_exponent = cnt ? sum / cnt : std::numeric_limits<double>::quiet_NaN();
        A.arcs.push_back(std::move(arc));
    }
    return A;
}

std::vector<BifurcationArc> bifurcation_arcs_m2(const ExpansionData& data, const ArcOptions& opt) {
    return analyse_arcs(2, data, opt).arcs;
}

std::vector<BifurcationArc> bifurcation_arcs_m(int m, const ExpansionData& data, const ArcOptions& opt) {
    if (m < 3) throw InvalidParams("bifurcation_arcs_m expects m >= 3");
    return analyse_arcs(m, data, opt).arcs;
}

// ---------------------------------------------------------------------------

VariationalCurves variational_discriminant_m3(const TorusFn& b0, const TorusFn& b1, double tol,
                                              const TraceOptions& opt) {
    VariationalCurves out;
    Torus T{opt.x_periodic, opt.x_lo, opt.x_hi};
    TorusFn g = [&](double th, double x) { return dx(b0, th, x); };
    double gmax = 0;
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j)
            gmax = std::max(gmax, std::abs(g(kTwoPi * i / 64, opt.x_lo + (opt.x_hi - opt.x_lo) * j / 64)));
    if (gmax < tol) {
        out.degenerate = true;
        out.flags.push_back("b0 does not depend on x");
        return out;
    }
    out.b0_prime = trace_zero_curve(g, 1e-10, opt);
    out.b1 = trace_zero_curve(b1, 1e-10, opt);
    auto add = [&](std::vector<Eigen::Vector2d>& list, const Eigen::Vector2d& p) {
        for (auto& q : list)
            if (T.dist(q, p) < 1e-6) return;
        list.push_back(p);
    };
    // Tangential derivative of b1 along {g = 0}.
    TorusFn D = [&](double th, double x) {
        return dtheta(b1, th, x) * dx(g, th, x) - dx(b1, th, x) * dtheta(g, th, x);
    };
    for (const auto& c : out.b0_prime) {
        if (c.singular) out.flags.push_back("B0' curve contains a singular point");
        const auto& pts = c.pts;
        const size_t nseg = c.closed ? pts.size() : (pts.empty() ? 0 : pts.size() - 1);
        std::vector<double> v1(pts.size()), vd(pts.size());
        for (size_t k = 0; k < pts.size(); ++k) {
            v1[k] = b1(pts[k][0], pts[k][1]);
            vd[k] = D(pts[k][0], pts[k][1]);
        }
        for (size_t k = 0; k < nseg; ++k) {
            size_t k1 = (k + 1) % pts.size();
            Eigen::Vector2d a = pts[k], b = T.near(a, pts[k1]);
            if (!((v1[k] > 0) == (v1[k1] > 0) && v1[k] != 0.0)) {
                double w = std::abs(v1[k]) / (std::abs(v1[k]) + std::abs(v1[k1]) + 1e-300);
                Eigen::Vector2d p = a + w * (b - a);
                auto FG = [&](const Eigen::Vector2d& u) { return Eigen::Vector2d(g(u[0], u[1]), b1(u[0], u[1])); };
                if (newton2(FG, p, 1e-13, 60, 0.05)) {
                    Eigen::Matrix2d J;
                    J << dtheta(g, p[0], p[1]), dx(g, p[0], p[1]), dtheta(b1, p[0], p[1]), dx(b1, p[0], p[1]);
                    if (std::abs(J.determinant()) < tol) out.flags.push_back("tangential intersection");
                    add(out.end_points, T.wrap(p));
                }
            }
            if (!((vd[k] > 0) == (vd[k1] > 0) && vd[k] != 0.0)) {
                Eigen::Vector2d lo = a, hi = b;
                double flo = vd[k];
                Eigen::Vector2d mid;
                for (int it = 0; it < 40; ++it) {
                    mid = 0.5 * (lo + hi);
                    project(g, mid, 1e-12, 1e-13);
                    double fm = D(mid[0], mid[1]);
                    if ((fm > 0) == (flo > 0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                    if ((hi - lo).norm() < 1e-10) break;
                }
                add(out.intersection_points, T.wrap(mid));
            }
        }
    }
    return out;
}

}  // namespace bifurc
