#include "bifurc/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "bifurc/errors.hpp"
#include "bifurc/util.hpp"

namespace bifurc {

Eigen::MatrixXd synthetic_b(int m, double x) {
    if (m < 2) throw InvalidParams("m must be at least 2");
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * m - 1, 2);
    B(0, 0) = -2.0 * std::cos(x);
    B(0, 1) = 1.0;
    B(1, 0) = 2.0;
    B(m, 0) = -2.0 * std::cos(x - 0.3);
    return B;
}

ExpansionData synthetic_expansion(int m) {
    return ExpansionData::analytic(2 * m - 1, 2, [m](double x) { return synthetic_b(m, x); });
}

VersalFamily synthetic_versal(int m) {
    VersalFamily f;
    f.m = m;
    f.q = 2;
    f.chart = ManifoldChart::circle();
    f.a = [m](const Eigen::VectorXd& eps, double x) {
        Eigen::VectorXd v = synthetic_b(m, x) * eps;
        return std::vector<double>(v.data(), v.data() + v.size());
    };
    return f;
}

ExpansionData classification_fixture() {
    return ExpansionData::analytic(3, 2, [](double x) {
        Eigen::MatrixXd B(3, 2);
        B << -std::sin(x), 1.0, -(std::sin(x) + 0.5 * std::sin(x - 1.0)), 1.0, -std::cos(x - 0.3), 0.0;
        return B;
    });
}

std::vector<ExpectedPoint> classification_fixture_points() {
    const double pi = std::numbers::pi;
    const double ts = std::atan(std::sin(1.0));
    std::vector<ExpectedPoint> pts{
        {PointKind::Intersection, ts, 1.0},
        {PointKind::Intersection, pi - ts, 1.0 + pi},
    };
    for (double xe : {0.3 + pi / 2, 0.3 + 3 * pi / 2}) {
        double th = std::atan(std::sin(xe));
        pts.push_back({PointKind::End, wrap_2pi(th), xe});
        pts.push_back({PointKind::End, wrap_2pi(th + pi), xe});
    }
    for (double xi : {0.0, 0.5}) pts.push_back({PointKind::Interior, wrap_2pi(std::atan(std::sin(xi))), xi});
    return pts;
}

namespace {

ReducedFieldModel two_component(int m1, int m2, ScalarField3 g1, ScalarField3 g2) {
    ReducedFieldModel model;
    model.dims = ProblemDimensions{1, 1, 1, m1};
    model.chart = ManifoldChart::circle();
    auto one = [](double, double) { return 1.0; };
    model.components = {FieldComponent{m1, {std::move(g1)}, one}, FieldComponent{m2, {std::move(g2)}, one}};
    return model;
}

}  // namespace

ReducedFieldModel example1_model() {
    return two_component(
        2, 3, [](const Eigen::VectorXd&, double, double) { return 1.0; },
        [](const Eigen::VectorXd&, double x, double) { return std::sin(x); });
}

ReducedFieldModel example2_model() {
    return two_component(
        2, 2, [](const Eigen::VectorXd&, double, double) { return 1.0; },
        [](const Eigen::VectorXd&, double x, double) { return std::cos(x); });
}

ReducedFieldModel scaling_model(int m) {
    return two_component(
        m, m + 1, [](const Eigen::VectorXd&, double, double) { return 1.0; },
        [](const Eigen::VectorXd&, double x, double) { return std::sin(x); });
}

}  // namespace bifurc
