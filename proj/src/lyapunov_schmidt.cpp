#include "bifurc/lyapunov_schmidt.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bifurc/errors.hpp"
#include "bifurc/util.hpp"

namespace bifurc {

namespace {

constexpr double kJacStep = 1e-4;

std::string at_x(double x) {
    std::ostringstream os;
    os << " at x = " << x;
    return os.str();
}

void fix_sign(Eigen::VectorXd& v) {
    Eigen::Index i;
    v.cwiseAbs().maxCoeff(&i);
    if (v[i] < 0) v = -v;
}

void procrustes(Eigen::MatrixXd& A, const Eigen::MatrixXd& ref) {
    if (A.cols() == 0) return;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A.transpose() * ref, Eigen::ComputeFullU | Eigen::ComputeFullV);
    A = A * svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace

Eigen::MatrixXd ambient_jacobian(const AmbientSystem& sys, const Eigen::VectorXd& eps, const Eigen::VectorXd& z) {
    Eigen::MatrixXd J(sys.N, sys.N);
    for (int k = 0; k < sys.N; ++k) {
        const double h = kJacStep * (1.0 + std::abs(z[k]));
        auto at = [&](double t) {
            Eigen::VectorXd w = z;
            w[k] += t;
            return sys.F(eps, w);
        };
        J.col(k) = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
    }
    return J;
}

LSReduction::LSReduction(AmbientSystem sys, LSOptions opt) : sys_(std::move(sys)), opt_(opt) {
    if (sys_.N < 2) throw InvalidParams("ambient dimension must be at least 2");
    if (opt_.n_samples < 4) throw InvalidParams("need at least 4 samples");
    const int n = opt_.n_samples;
    std::vector<double> xs(n);
    const auto& ch = sys_.chart;
    for (int i = 0; i < n; ++i) {
        if (ch.periodic()) {
            xs[i] = ch.lo + i * ch.period() / n;
        } else if (opt_.log_spacing && ch.lo > 0) {
            xs[i] = ch.lo * std::pow(ch.hi / ch.lo, static_cast<double>(i) / (n - 1));
        } else {
            xs[i] = ch.lo + i * (ch.hi - ch.lo) / (n - 1);
        }
    }
    frames_.resize(n);
    std::vector<std::string> warn(n);
    parallel_for(n, opt_.threads, [&](int i) {
        frames_[i] = make_frame(xs[i]);
        if (frames_[i].basis_condition > 1e6) warn[i] = "ill-conditioned bases" + at_x(xs[i]);
        const auto& s = frames_[i].singular_values;
        if (sys_.N >= 3 && s[sys_.N - 3] < opt_.gap * opt_.gap * opt_.kernel_tol * s[0])
            warn[i] = "small nonzero singular value" + at_x(xs[i]);
    });
    for (auto& w : warn)
        if (!w.empty()) warnings_.push_back(w);
    for (int i = 1; i < n; ++i) align(frames_[i], frames_[i - 1]);
    if (ch.periodic() && frames_.back().K.dot(frames_.front().K) < 0)
        throw NontrivialBundle("kernel bundle reverses orientation around the circle");
}

LSFrame LSReduction::make_frame(double x) const {
    const int N = sys_.N;
    LSFrame f;
    f.x = x;
    f.z = sys_.S(x);
    if (f.z.size() != N) throw ModelInconsistency("S(x) has the wrong dimension");
    if (sys_.dS) {
        f.T = sys_.dS(x);
    } else {
        const double h = 1e-4;
        f.T = (-sys_.S(x + 2 * h) + 8 * sys_.S(x + h) - 8 * sys_.S(x - h) + sys_.S(x - 2 * h)) / (12 * h);
    }
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(sys_.q);
    if (sys_.F(zero, f.z).norm() > 1e-10) throw ModelInconsistency("S is not an equilibrium manifold" + at_x(x));

    Eigen::MatrixXd DF = ambient_jacobian(sys_, zero, f.z);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(DF, Eigen::ComputeFullU | Eigen::ComputeFullV);
    f.singular_values = svd.singularValues();
    const double smax = f.singular_values[0];
    const double thr = opt_.kernel_tol * std::max(smax, 1e-300);
    int kdim = 0;
    for (int i = 0; i < N; ++i)
        if (f.singular_values[i] < thr) ++kdim;
    if (smax == 0.0) kdim = N;
    if (kdim != 2)
        throw ConstantCorankViolation("kernel dimension " + std::to_string(kdim) + " instead of 2" + at_x(x));
    if (N >= 3 && f.singular_values[N - 3] < opt_.gap * thr)
        throw ConstantCorankViolation("no singular value gap" + at_x(x));

    Eigen::MatrixXd V2 = svd.matrixV().rightCols(2);
    Eigen::Vector2d c = V2.transpose() * f.T;
    if ((V2 * c - f.T).norm() > 1e-6 * f.T.norm())
        throw ModelInconsistency("tangent direction is not in the kernel" + at_x(x));
    f.K = V2 * Eigen::Vector2d(-c[1], c[0]).normalized();
    fix_sign(f.K);

    Eigen::MatrixXd TK(N, 2);
    TK.col(0) = f.T.normalized();
    TK.col(1) = f.K;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(TK);
    Eigen::MatrixXd Qfull = qr.householderQ() * Eigen::MatrixXd::Identity(N, N);
    f.L = Qfull.rightCols(N - 2);

    f.UR = svd.matrixU().leftCols(N - 2);
    Eigen::MatrixXd Qr = svd.matrixU().rightCols(2);
    Eigen::Vector2d ct = Qr.transpose() * f.T;
    f.t_hat = Qr * ct;
    if (f.t_hat.norm() < 1e-8 * f.T.norm()) throw ModelInconsistency("tangent direction lies in the range" + at_x(x));
    f.P = Qr * Eigen::Vector2d(-ct[1], ct[0]).normalized();
    fix_sign(f.P);

    Eigen::MatrixXd A(N, N);
    A.col(0) = f.T.normalized();
    A.col(1) = f.P;
    A.rightCols(N - 2) = f.UR;
    Eigen::JacobiSVD<Eigen::MatrixXd> sa(A);
    f.basis_condition = sa.singularValues()[0] / sa.singularValues()[N - 1];
    return f;
}

void LSReduction::align(LSFrame& f, const LSFrame& ref) const {
    if (f.K.dot(ref.K) < 0) f.K = -f.K;
    if (f.P.dot(ref.P) < 0) f.P = -f.P;
    procrustes(f.L, ref.L);
    procrustes(f.UR, ref.UR);
}

LSFrame LSReduction::frame_at(double x) const {
    const auto& ch = sys_.chart;
    x = ch.reduce(x);
    LSFrame f = make_frame(x);
    size_t best = 0;
    double bd = 1e300;
    for (size_t i = 0; i < frames_.size(); ++i) {
        double d = ch.periodic() ? std::abs(angle_diff(x, frames_[i].x)) : std::abs(x - frames_[i].x);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    align(f, frames_[best]);
    return f;
}

void LSReduction::check_box(const Eigen::VectorXd& eps, double y) const {
    if (std::abs(y) > opt_.y_max || eps.norm() > opt_.eps_max)
        throw OutsideValidity("point outside the reduction's validity box");
}

Eigen::VectorXd LSReduction::solve_slave(const LSFrame& f, const Eigen::VectorXd& eps, double y) const {
    check_box(eps, y);
    const int n = sys_.N - 2;
    Eigen::VectorXd sigma = Eigen::VectorXd::Zero(n);
    if (n == 0) return sigma;
    const Eigen::VectorXd base = f.z + y * f.K;
    for (int it = 0; it < opt_.max_iter; ++it) {
        Eigen::VectorXd z = base + f.L * sigma;
        Eigen::VectorXd G = f.UR.transpose() * sys_.F(eps, z);
        Eigen::MatrixXd J = f.UR.transpose() * ambient_jacobian(sys_, eps, z) * f.L;
        Eigen::VectorXd d = J.fullPivLu().solve(G);
        if (!d.allFinite()) break;
        sigma -= d;
        if (d.norm() <= opt_.newton_tol * (1.0 + sigma.norm())) return sigma;
    }
    throw OutsideValidity("slave equation did not converge" + at_x(f.x));
}

Eigen::VectorXd LSReduction::solve_slave(const Eigen::VectorXd& eps, double x, double y) const {
    return solve_slave(frame_at(x), eps, y);
}

Eigen::VectorXd LSReduction::lift(const Eigen::VectorXd& eps, double x, double y) const {
    LSFrame f = frame_at(x);
    return f.z + y * f.K + f.L * solve_slave(f, eps, y);
}

Eigen::Vector2d LSReduction::reduced_field(const LSFrame& f, const Eigen::VectorXd& eps, double y) const {
    Eigen::VectorXd z = f.z + y * f.K + f.L * solve_slave(f, eps, y);
    Eigen::VectorXd F = sys_.F(eps, z);
    return {F.dot(f.t_hat) / f.t_hat.squaredNorm(), F.dot(f.P)};
}

Eigen::Vector2d LSReduction::reduced_field(const Eigen::VectorXd& eps, double x, double y) const {
    return reduced_field(frame_at(x), eps, y);
}

LSReduction build_reduction(const AmbientSystem& sys, const LSOptions& opt) { return LSReduction(sys, opt); }

std::vector<ComponentData> extract_branch_data(
    const std::function<Eigen::Vector2d(const Eigen::VectorXd&, double, double)>& field, int q, double x,
    double y_box, double eps_probe) {
    constexpr int kNodes = 25;
    constexpr int kDegree = 12;
    constexpr int kMaxOrder = 6;
    std::vector<double> s(kNodes);
    std::vector<std::vector<double>> vals(2, std::vector<double>(kNodes));
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(q);
    for (int k = 0; k < kNodes; ++k) {
        s[k] = std::cos(std::numbers::pi * (k + 0.5) / kNodes);
        Eigen::Vector2d v = field(zero, x, y_box * s[k]);
        vals[0][k] = v[0];
        vals[1][k] = v[1];
    }
    std::vector<ComponentData> out(2);
    for (int i = 0; i < 2; ++i) {
        std::vector<double> c = fit_poly(s, vals[i], kDegree);
        double mx = 0.0;
        for (double v : c) mx = std::max(mx, std::abs(v));
        if (mx < 1e-12) throw FlatComponent("reduced component " + std::to_string(i) + " vanishes" + at_x(x));
        for (int j = 1; j <= kMaxOrder; ++j) {
            if (std::abs(c[j]) > 1e-4 * mx) {
                out[i].m = j;
                out[i].r = c[j] / std::pow(y_box, j);
                break;
            }
        }
        if (out[i].m == 0)
            throw FlatComponent("no nonvanishing y-derivative up to order 6 in component " + std::to_string(i) + at_x(x));
        out[i].g.resize(q);
    }
    for (int j = 0; j < q; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(q);
        e[j] = eps_probe;
        Eigen::Vector2d d = (field(e, x, 0.0) - field(-e, x, 0.0)) / (2 * eps_probe);
        out[0].g[j] = d[0];
        out[1].g[j] = d[1];
    }
    return out;
}

std::vector<ComponentData> extract_branch_data(const LSReduction& red, double x, double y_box, double eps_probe) {
    LSFrame f = red.frame_at(x);
    auto field = [&](const Eigen::VectorXd& eps, double, double y) { return red.reduced_field(f, eps, y); };
    return extract_branch_data(field, red.system().q, x, y_box, eps_probe);
}

}  // namespace bifurc
