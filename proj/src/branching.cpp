#include "bifurc/branching.hpp"

#include <algorithm>
#include <cmath>

#include "bifurc/errors.hpp"
#include "bifurc/util.hpp"

namespace bifurc {

namespace {

constexpr double kStep = 1e-3;

double sgn(double v) { return (v > 0) - (v < 0); }

double sup_abs(const std::function<double(double)>& f, const ManifoldChart& chart, int grid) {
    double s = 0.0;
    for (int i = 0; i < grid; ++i) {
        double x = chart.periodic() ? chart.lo + i * chart.period() / grid : chart.lo + i * (chart.hi - chart.lo) / (grid - 1);
        s = std::max(s, std::abs(f(x)));
    }
    return s;
}

}  // namespace

std::vector<ComponentValues> BranchData::sorted() const {
    std::vector<ComponentValues> c = comps;
    std::stable_sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return a.m < b.m; });
    return c;
}

NecessaryResult necessary_conditions(const BranchData& data, double tol) {
    NecessaryResult res;
    const auto c = data.sorted();
    double scale = 1.0;
    for (const auto& v : c) scale = std::max({scale, std::abs(v.g), std::abs(v.r)});
    const double t = tol * scale;
    for (int i = 0; i < static_cast<int>(c.size()); ++i)
        if (std::abs(c[i].g) > t) res.n = i;
    if (res.n < 0) {
        res.all_g_zero = true;
        return res;
    }
    for (int i = 0; i < static_cast<int>(c.size()); ++i) {
        for (int j = 0; j < static_cast<int>(c.size()); ++j) {
            if (c[i].m < c[j].m) {
                double v = c[i].r * c[j].g;
                if (std::abs(v) > t) res.failed.push_back({i, j, "r_i g_j", v});
            } else if (c[i].m == c[j].m && i < j) {
                double v = c[i].r * c[j].g - c[j].r * c[i].g;
                if (std::abs(v) > t) res.failed.push_back({i, j, "d_ij", v});
            }
        }
    }
    res.pass = res.failed.empty();
    return res;
}

const char* to_string(BranchVariant v) {
    switch (v) {
        case BranchVariant::Uniform: return "uniform";
        case BranchVariant::Variational: return "variational";
        default: return "general";
    }
}

const char* to_string(BranchStatus s) {
    switch (s) {
        case BranchStatus::Sufficient: return "Sufficient";
        case BranchStatus::DegenerateZero: return "DegenerateZero";
        default: return "NecessaryOnly";
    }
}

BranchVariant parse_variant(const std::string& s) {
    if (s == "general") return BranchVariant::General;
    if (s == "uniform") return BranchVariant::Uniform;
    if (s == "variational") return BranchVariant::Variational;
    throw InvalidParams("unknown variant '" + s + "'");
}

BranchField BranchField::from_model(const ReducedFieldModel& model, const Eigen::VectorXd& direction) {
    if (model.dims.d != 1 || model.components.size() != 2)
        throw UnsupportedDimension("branch point search needs a one-dimensional S (two components)");
    if (direction.size() != model.dims.q) throw InvalidParams("direction has the wrong number of parameters");
    BranchField f;
    f.m1 = model.components[0].m;
    f.m2 = model.components[1].m;
    f.chart = model.chart;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(model.dims.q);
    auto contract = [zero, direction](const FieldComponent& c) {
        return [zero, direction, g = c.g](double x) {
            double s = 0.0;
            for (size_t j = 0; j < g.size(); ++j) s += direction[j] * g[j](zero, x, 0.0);
            return s;
        };
    };
    f.g1 = contract(model.components[0]);
    f.g2 = contract(model.components[1]);
    f.r1 = [r = model.components[0].r](double x) { return r(x, 0.0); };
    f.r2 = [r = model.components[1].r](double x) { return r(x, 0.0); };
    return f;
}

BranchData BranchField::at(double x) const {
    return BranchData{{{m1, g1(x), r1(x)}, {m2, g2(x), r2(x)}}};
}

std::vector<double> scalar_zeros(const std::function<double(double)>& f, const ManifoldChart& chart, int grid,
                                 int threads) {
    const bool per = chart.periodic();
    const double dx = per ? chart.period() / grid : (chart.hi - chart.lo) / (grid - 1);
    std::vector<double> xs(grid), v(grid);
    for (int i = 0; i < grid; ++i) xs[i] = chart.lo + i * dx;
    parallel_for(grid, threads, [&](int i) { v[i] = f(xs[i]); });
    double sup = 0.0;
    for (double a : v) sup = std::max(sup, std::abs(a));
    std::vector<double> zeros;
    const int npairs = per ? grid : grid - 1;
    for (int i = 0; i < grid; ++i)
        if (v[i] == 0.0) zeros.push_back(xs[i]);
    for (int i = 0; i < npairs; ++i) {
        int j = (i + 1) % grid;
        if (!(v[i] * v[j] < 0)) continue;
        double lo = xs[i], hi = xs[i] + dx, flo = v[i];
        for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
            double mid = 0.5 * (lo + hi), fm = f(mid);
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
        zeros.push_back(0.5 * (lo + hi));
    }
    // Touching zeros: local minima of |f| without a sign change.
    for (int i = 0; i < grid; ++i) {
        if (!per && (i == 0 || i == grid - 1)) continue;
        int a = (i - 1 + grid) % grid, b = (i + 1) % grid;
        double fa = std::abs(v[a]), fi = std::abs(v[i]), fb = std::abs(v[b]);
        if (!(fi <= fa && fi <= fb) || fi == 0.0 || v[a] * v[i] < 0 || v[i] * v[b] < 0) continue;
        if (fi > 1e-3 * (1.0 + sup)) continue;
        double lo = xs[i] - dx, hi = xs[i] + dx;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        double fc = std::abs(f(c)), fd = std::abs(f(d));
        for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
            if (fc < fd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - gr * (hi - lo);
                fc = std::abs(f(c));
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + gr * (hi - lo);
                fd = std::abs(f(d));
            }
        }
        double xm = 0.5 * (lo + hi);
        if (std::abs(f(xm)) < 1e-10 * (1.0 + sup)) zeros.push_back(xm);
    }
    for (double& z : zeros) z = chart.periodic() ? chart.reduce(z) : std::clamp(z, chart.lo, chart.hi);
    std::sort(zeros.begin(), zeros.end());
    std::vector<double> out;
    for (double z : zeros) {
        bool dup = false;
        for (double o : out) {
            double d = per ? std::abs(angle_diff(z, o)) : std::abs(z - o);
            if (d < 0.5 * dx) dup = true;
        }
        if (!dup) out.push_back(z);
    }
    return out;
}

std::vector<BranchPoint> find_branch_points(const BranchField& field, BranchVariant variant, const BranchOptions& opt) {
    if (variant == BranchVariant::Variational)
        throw VariantMismatch("variational variant needs a variational model");
    BranchField f = field;
    if (f.m2 < f.m1) {
        std::swap(f.m1, f.m2);
        std::swap(f.g1, f.g2);
        std::swap(f.r1, f.r2);
    }
    const bool equal = f.m1 == f.m2;
    if (variant == BranchVariant::Uniform) {
        for (const auto* r : {&f.r1, &f.r2}) {
            double s = sup_abs(*r, f.chart, opt.grid);
            const bool per = f.chart.periodic();
            for (int i = 0; i < opt.grid; ++i) {
                double x = per ? f.chart.lo + i * f.chart.period() / opt.grid
                               : f.chart.lo + i * (f.chart.hi - f.chart.lo) / (opt.grid - 1);
                if (std::abs((*r)(x)) <= opt.tol * (1.0 + s))
                    throw VariantMismatch("uniform variant requires nonvanishing r on S");
            }
        }
    }
    std::function<double(double)> d12 = [f](double x) { return f.r1(x) * f.g2(x) - f.r2(x) * f.g1(x); };
    std::function<double(double)> necessary;
    if (equal)
        necessary = d12;
    else if (variant == BranchVariant::Uniform)
        necessary = f.g2;
    else
        necessary = [f](double x) { return f.r1(x) * f.g2(x); };

    const auto zeros = scalar_zeros(necessary, f.chart, opt.grid, opt.threads);
    const double sup_g = std::max(sup_abs(f.g1, f.chart, 256), sup_abs(f.g2, f.chart, 256));
    std::vector<BranchPoint> out;
    for (double x0 : zeros) {
        BranchPoint bp;
        bp.x0 = x0;
        BranchData data = f.at(x0);
        auto nc = necessary_conditions(data, opt.tol);
        if (nc.all_g_zero) {
            bp.flags.push_back("AllGZero");
            bp.condition = "vacuous";
            out.push_back(bp);
            continue;
        }
        std::function<double(double)> G;
        const bool g2_zero = std::abs(f.g2(x0)) <= opt.tol * (1.0 + sup_g);
        if (equal) {
            G = d12;
            bp.condition = variant == BranchVariant::Uniform ? "g_[n] = d12" : "g_{l,n} = d12";
        } else if (variant == BranchVariant::Uniform || g2_zero) {
            G = f.g2;
            bp.condition = variant == BranchVariant::Uniform ? "g_[n] = g2" : "g_{l,n} = g2";
        } else {
            G = f.r1;
            bp.condition = "g_{l,n} = r1";
        }
        const double sup = sup_abs(G, f.chart, opt.grid);
        bp.derivative = diff1(G, x0, kStep);
        bp.status = std::abs(bp.derivative) > 1e-6 * (1.0 + sup) ? BranchStatus::Sufficient : BranchStatus::DegenerateZero;
        if (!nc.pass) bp.flags.push_back("necessary conditions not met within tolerance");
        // Sign of the parameter for which the leading component admits real y.
        const auto& top = nc.n == 0 ? data.sorted()[0] : data.sorted()[1];
        if (top.m % 2 == 0 && top.g != 0.0 && top.r != 0.0) bp.eps_sign = static_cast<int>(-sgn(top.g * top.r));
        out.push_back(bp);
    }
    return out;
}

std::vector<BranchPoint> find_branch_points(const ReducedFieldModel& model, BranchVariant variant,
                                            const Eigen::VectorXd& direction, const BranchOptions& opt) {
    auto pts = find_branch_points(BranchField::from_model(model, direction), variant, opt);
    for (auto& p : pts) p.direction = direction;
    return pts;
}

VariationalResult variational_conditions(const std::function<double(double)>& g, const std::function<double(double)>& r,
                                         int m, double x0, double tol) {
    VariationalResult res;
    const double gx = diff1(g, x0, kStep), gxx = diff2(g, x0, kStep);
    const double rv = r(x0), rx = diff1(r, x0, kStep);
    res.necessary = std::abs(rv * gx) <= tol;
    res.sufficient_ii = std::abs(rv) > tol && std::abs(gx) <= tol && std::abs(gxx) > tol;
    res.sufficient_i = std::abs(rv) <= tol && std::abs(m * rx) > tol;
    if (res.sufficient_i) res.interpretation = "varbranch-i-d1";
    return res;
}

std::vector<BranchPoint> find_branch_points(const VariationalModel& model, const BranchOptions& opt) {
    auto N = [&model](double x) { return model.r(x) * diff1(model.g, x, kStep); };
    std::vector<BranchPoint> out;
    for (double x0 : scalar_zeros(N, model.chart, opt.grid, opt.threads)) {
        BranchPoint bp;
        bp.x0 = x0;
        auto vc = variational_conditions(model.g, model.r, model.m, x0, opt.tol);
        bp.derivative = diff1(N, x0, kStep);
        if (vc.sufficient_ii) {
            bp.status = BranchStatus::Sufficient;
            bp.condition = "nondegenerate critical point of g";
        } else if (vc.sufficient_i) {
            bp.status = BranchStatus::Sufficient;
            bp.condition = "regular zero of m r";
            bp.flags.push_back(vc.interpretation);
        } else {
            bp.status = vc.necessary ? BranchStatus::DegenerateZero : BranchStatus::NecessaryOnly;
            bp.condition = "r dg/dx";
        }
        out.push_back(bp);
    }
    return out;
}

int count_lower_bound(BranchVariant variant, const ManifoldChart& chart) {
    if (variant != BranchVariant::Variational || !chart.periodic())
        throw InvalidParams("the lower bound applies to variational problems on a circle");
    return 2;
}

}  // namespace bifurc
