#include "bifurc/deformation.hpp"

#include <cmath>
#include <string>

#include "bifurc/errors.hpp"
#include "bifurc/util.hpp"

namespace bifurc {

void ProblemDimensions::validate() const {
    if (d != 1 || k != 1) throw UnsupportedDimension("only d = k = 1 is supported");
    if (m < 2) throw InvalidParams("degeneracy degree m must be at least 2");
    if (q < 1 || q > 2) throw InvalidParams("q must be 1 or 2");
}

DeformationParams::DeformationParams(int m_, std::vector<double> a_, std::vector<double> abar_)
    : m(m_), a(std::move(a_)), abar(std::move(abar_)) {
    validate();
}

DeformationParams DeformationParams::m2(double a1, double a2, double a3) {
    return DeformationParams(2, {a1, a2}, {a3});
}

DeformationParams DeformationParams::from_flat(int m, const std::vector<double>& v) {
    if (m < 2 || static_cast<int>(v.size()) != 2 * m - 1)
        throw InvalidParams("expected " + std::to_string(2 * m - 1) + " parameters for m = " + std::to_string(m));
    return DeformationParams(m, std::vector<double>(v.begin(), v.begin() + m),
                             std::vector<double>(v.begin() + m, v.end()));
}

std::vector<double> DeformationParams::flat() const {
    std::vector<double> v(a);
    v.insert(v.end(), abar.begin(), abar.end());
    return v;
}

double DeformationParams::norm() const {
    double s = 0;
    for (double v : a) s += v * v;
    for (double v : abar) s += v * v;
    return std::sqrt(s);
}

void DeformationParams::validate() const {
    if (m < 2) throw InvalidParams("m must be at least 2");
    if (static_cast<int>(a.size()) != m || static_cast<int>(abar.size()) != m - 1)
        throw InvalidParams("parameter lengths do not match m");
}

std::array<double, 2> eval_versal_m2(const DeformationParams& p, double y) {
    if (p.m != 2 || p.a.size() != 2 || p.abar.size() != 1) throw InvalidParams("eval_versal_m2 requires m = 2");
    return {p.a[0] + p.a[1] * y, p.abar[0] + y * y};
}

std::array<double, 2> eval_versal_general(const DeformationParams& p, double y) {
    p.validate();
    double f = 0, g = 0, yp = 1;
    for (int i = 0; i < p.m; ++i) {
        f += p.a[i] * yp;
        if (i < p.m - 1) g += p.abar[i] * yp;
        yp *= y;
    }
    return {f, g + yp};
}

ManifoldChart ManifoldChart::circle() { return ManifoldChart{ChartKind::Circle, 0.0, kTwoPi}; }

ManifoldChart ManifoldChart::interval(double lo, double hi) {
    if (!(hi > lo)) throw InvalidParams("empty interval chart");
    return ManifoldChart{ChartKind::Interval, lo, hi};
}

double ManifoldChart::reduce(double x) const {
    if (periodic()) {
        double r = std::fmod(x - lo, period());
        if (r < 0) r += period();
        if (r >= period()) r -= period();
        return lo + r;
    }
    if (!contains(x)) throw DomainError("x = " + std::to_string(x) + " outside chart");
    return x;
}

bool ManifoldChart::contains(double x) const { return periodic() || (x >= lo && x <= hi); }

void ReducedFieldModel::validate() const {
    dims.validate();
    if (static_cast<int>(components.size()) != dims.d + 1) throw InvalidParams("need d + 1 field components");
    for (const auto& c : components) {
        if (c.m < 2) throw InvalidParams("component exponent must be at least 2");
        if (static_cast<int>(c.g.size()) != dims.q) throw InvalidParams("need one g callable per parameter");
        if (!c.r) throw InvalidParams("missing r callable");
    }
}

Eigen::VectorXd eval_reduced_field(const ReducedFieldModel& model, const Eigen::VectorXd& eps, double x, double y) {
    if (eps.size() != model.dims.q) throw InvalidParams("parameter vector has wrong length");
    double xc = model.chart.reduce(x);
    Eigen::VectorXd out(model.components.size());
    for (size_t i = 0; i < model.components.size(); ++i) {
        const auto& c = model.components[i];
        double v = 0;
        for (int j = 0; j < model.dims.q; ++j)
            if (eps[j] != 0.0) v += eps[j] * c.g[j](eps, xc, y);
        v += std::pow(y, c.m) * c.r(xc, y);
        out[i] = v;
    }
    return out;
}

DeformationParams VersalFamily::params(const Eigen::VectorXd& eps, double x) const {
    return DeformationParams::from_flat(m, a(eps, chart.reduce(x)));
}

Eigen::Vector2d VersalFamily::field(const Eigen::VectorXd& eps, double x, double y) const {
    auto v = eval_versal_general(params(eps, x), y);
    return {v[0], v[1]};
}

}  // namespace bifurc
