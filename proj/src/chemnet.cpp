#include "bifurc/chemnet.hpp"

#include <cmath>
#include <memory>

#include "bifurc/errors.hpp"
#include "bifurc/util.hpp"

namespace bifurc {

namespace {

const Eigen::Vector3d kW(1.0, 1.0, -1.0);
const Eigen::Vector3d kE(0.0, 1.0, 0.0);

double a_of(const Eigen::Vector3d& s) { return s.dot(kE) - s.dot(kW) / 3.0; }
Eigen::Vector3d b_of(const Eigen::Vector3d& s) { return s - s.dot(kW) / 3.0 * kW; }

}  // namespace

Eigen::Matrix3d ChemNetworkModel::stoichiometry() {
    Eigen::Matrix3d B;
    B << -1, 0, 1, -1, 1, 1, 1, 0, -1;
    return B;
}

Eigen::Vector3d ChemNetworkModel::nu(const Eigen::Vector3d& z) const { return {z[0] * z[1], v(z[0]), z[2]}; }

double ChemNetworkModel::v1(double x) const { return dv ? dv(x) : diff1(v, x, 1e-3); }
double ChemNetworkModel::v2(double x) const { return d2v ? d2v(x) : diff2(v, x, 1e-3); }

double ChemNetworkModel::x1_star() const {
    const int grid = 4000;
    std::vector<double> roots;
    double a = x1_lo, fa = v(a);
    double best = a, bestv = std::abs(fa);
    for (int i = 1; i <= grid; ++i) {
        double b = x1_lo + i * (x1_hi - x1_lo) / grid, fb = v(b);
        if (std::abs(fb) < bestv) {
            bestv = std::abs(fb);
            best = b;
        }
        if (fb == 0.0) {
            roots.push_back(b);
        } else if (fa * fb < 0) {
            double lo = a, hi = b, flo = fa;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi), fm = v(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm > 0) == (flo > 0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    if (roots.size() > 1) {
        // Adjacent detections of one root (exact grid hit plus sign change) are merged.
        std::vector<double> u{roots[0]};
        for (double r : roots)
            if (std::abs(r - u.back()) > 2.0 * (x1_hi - x1_lo) / grid) u.push_back(r);
        if (u.size() > 1) throw ModelInconsistency("v has more than one zero on the sampled range");
        return u[0];
    }
    if (roots.size() == 1) return roots[0];
    // Touching zero: minimise |v| near the best grid point.
    double lo = best - (x1_hi - x1_lo) / grid, hi = best + (x1_hi - x1_lo) / grid;
    for (int it = 0; it < 200; ++it) {
        double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (std::abs(v(m1)) < std::abs(v(m2)))
            hi = m2;
        else
            lo = m1;
    }
    double x = 0.5 * (lo + hi);
    if (std::abs(v(x)) > 1e-12) throw ModelInconsistency("v has no zero on the sampled range");
    return x;
}

Eigen::Vector3d ChemNetworkModel::point(double lambda) const {
    const double x1 = x1_star();
    return {x1, lambda / x1, lambda};
}

Eigen::Vector3d ChemNetworkModel::tangent() const { return {0.0, 1.0 / x1_star(), 1.0}; }

Eigen::Vector3d ChemNetworkModel::phi_at(const Eigen::VectorXd& s, const Eigen::Vector3d& z) const {
    Eigen::Vector3d out = Eigen::Vector3d::Zero();
    for (size_t i = 0; i < phi.size(); ++i) out += s[i] * phi[i](z);
    return out;
}

bool check_stoichiometry(double tol) {
    const Eigen::Matrix3d B = ChemNetworkModel::stoichiometry();
    Eigen::FullPivLU<Eigen::Matrix3d> lu(B);
    if (lu.rank() != 2) return false;
    if ((B * Eigen::Vector3d(1, 0, 1)).norm() > tol) return false;
    Eigen::Matrix<double, 3, 2> R;
    R.col(0) = kE;
    R.col(1) = kW;
    // Each column of B must lie in span{e, w}.
    for (int j = 0; j < 3; ++j) {
        Eigen::Vector3d c = B.col(j);
        Eigen::Vector2d coef = R.colPivHouseholderQr().solve(c);
        if ((R * coef - c).norm() > tol) return false;
    }
    return true;
}

AmbientSystem chem_ambient(const ChemNetworkModel& model) {
    AmbientSystem sys;
    sys.N = 3;
    sys.q = static_cast<int>(model.phi.size());
    const Eigen::Matrix3d B = ChemNetworkModel::stoichiometry();
    sys.F = [model, B](const Eigen::VectorXd& eps, const Eigen::VectorXd& z) -> Eigen::VectorXd {
        Eigen::Vector3d zz = z;
        Eigen::Vector3d f = B * model.nu(zz);
        for (size_t i = 0; i < model.phi.size(); ++i) f += eps[i] * model.phi[i](zz);
        return f;
    };
    const double x1 = model.x1_star();
    sys.S = [x1](double l) -> Eigen::VectorXd { return Eigen::Vector3d(x1, l / x1, l); };
    sys.dS = [x1](double) -> Eigen::VectorXd { return Eigen::Vector3d(0.0, 1.0 / x1, 1.0); };
    sys.chart = ManifoldChart::interval(model.lambda_lo, model.lambda_hi);
    return sys;
}

ChemRegularity chem_regularity(const ChemNetworkModel& model, int n_samples) {
    ChemRegularity res;
    res.x1_star = model.x1_star();
    res.dv_star = model.v1(res.x1_star);
    const Eigen::Matrix3d B = ChemNetworkModel::stoichiometry();
    int corank = -1;
    for (int i = 0; i < n_samples; ++i) {
        double l = model.lambda_lo * std::pow(model.lambda_hi / model.lambda_lo, static_cast<double>(i) / (n_samples - 1));
        Eigen::Vector3d z = model.point(l);
        Eigen::Matrix3d Dnu;
        Dnu << z[1], z[0], 0, model.v1(z[0]), 0, 0, 0, 0, 1;
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(B * Dnu);
        const auto& s = svd.singularValues();
        int kdim = 0;
        for (int k = 0; k < 3; ++k)
            if (s[k] < 1e-8 * s[0]) ++kdim;
        corank = std::max(corank, kdim - 1);
    }
    res.corank = corank;
    res.regular = corank == 0;
    res.consistent = res.regular == (std::abs(res.dv_star) > 1e-8);
    return res;
}

ChemBranchFunction chem_branch_function(const ChemNetworkModel& model, const Eigen::VectorXd& direction, int grid) {
    const double x1 = model.x1_star();
    if (std::abs(model.v2(x1)) < 1e-8) throw QuadraticCaseViolation("v''(x1*) = 0: the reduced problem is not quadratic");
    if (direction.size() != static_cast<Eigen::Index>(model.phi.size()))
        throw InvalidParams("direction has the wrong number of parameters");
    const Eigen::Vector3d s = model.tangent();
    const Eigen::Vector3d p = kE;
    const double as = a_of(s), ap = a_of(p);
    const Eigen::Vector3d bs = b_of(s), bp = b_of(p);
    ChemBranchFunction out;
    out.g = [=](double lambda) {
        Eigen::Vector3d ph = model.phi_at(direction, model.point(lambda));
        return as * bp.dot(ph) - ap * bs.dot(ph);
    };
    const auto chart = ManifoldChart::interval(model.lambda_lo, model.lambda_hi);
    double sup = 0.0;
    for (int i = 0; i < grid; ++i)
        sup = std::max(sup, std::abs(out.g(chart.lo + i * (chart.hi - chart.lo) / (grid - 1))));
    if (sup < 1e-14) {
        out.identically_zero = true;
        return out;
    }
    for (double z : scalar_zeros(out.g, chart, grid)) {
        if (std::abs(diff1(out.g, z, 1e-4)) > 1e-6 * (1.0 + sup))
            out.zeros.push_back(z);
        else
            out.degenerate_zeros.push_back(z);
    }
    return out;
}

ChemPipelineResult chem_pipeline(const ChemNetworkModel& model, const Eigen::VectorXd& direction, int grid, int threads) {
    LSOptions opt;
    opt.n_samples = 64;
    opt.log_spacing = true;
    opt.threads = threads;
    auto red = std::make_shared<LSReduction>(build_reduction(chem_ambient(model), opt));
    auto data_at = [red, direction](double x) {
        auto d = extract_branch_data(*red, x);
        BranchData bd;
        for (const auto& c : d) bd.comps.push_back({c.m, c.g.dot(direction), c.r});
        return bd;
    };
    BranchField f;
    f.chart = red->system().chart;
    const auto mid = data_at(0.5 * (f.chart.lo + f.chart.hi));
    f.m1 = mid.comps[0].m;
    f.m2 = mid.comps[1].m;
    f.g1 = [data_at](double x) { return data_at(x).comps[0].g; };
    f.g2 = [data_at](double x) { return data_at(x).comps[1].g; };
    f.r1 = [data_at](double x) { return data_at(x).comps[0].r; };
    f.r2 = [data_at](double x) { return data_at(x).comps[1].r; };
    ChemPipelineResult res;
    BranchOptions bo;
    bo.grid = grid;
    bo.threads = threads;
    res.points = find_branch_points(f, BranchVariant::General, bo);
    for (auto& p : res.points) p.direction = direction;
    const double xs = res.points.empty() ? 0.5 * (f.chart.lo + f.chart.hi) : res.points.front().x0;
    res.sample_data = extract_branch_data(*red, xs);
    return res;
}

}  // namespace bifurc
