#include <cmath>
#include <numbers>
#include <random>

#include "bifurc/blowup.hpp"
#include "bifurc/synthetic.hpp"
#include "doctest.h"

using namespace bifurc;

namespace {

ExpansionData column_data(double b1, double b2, double b3) {
    return ExpansionData::analytic(3, 2, [=](double) {
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3, 2);
        b(0, 0) = b1;
        b(1, 0) = b2;
        b(2, 0) = b3;
        return b;
    });
}

Eigen::VectorXd e1() { return Eigen::Vector2d(1, 0); }

}  // namespace

TEST_CASE("pinch") {
    CHECK(pinch(0.0, Eigen::Vector2d(0.6, 0.8)).eps.norm() == 0.0);
    auto p = pinch(0.1, e1());
    CHECK(p.eps(0) == doctest::Approx(0.1));
    CHECK(p.eps(1) == 0.0);
    CHECK(!p.normalised);
    auto a = pinch(-0.1, e1());
    auto b = pinch(0.1, Eigen::Vector2d(-1, 0));
    CHECK((a.eps - b.eps).norm() == 0.0);
    auto n = pinch(1.0, Eigen::Vector2d(3, 4));
    CHECK(n.normalised);
    CHECK(n.eps.norm() == doctest::Approx(1.0));
}

TEST_CASE("extract_expansion") {
    SUBCASE("linear") {
        auto d = extract_expansion([](const Eigen::VectorXd& e, double x) {
            return std::vector<double>{e(0), e(1), -e(0) + x * e(1)};
        }, 2, 3);
        double x = 0.7;
        Eigen::MatrixXd expect(3, 2);
        expect << 1, 0, 0, 1, -1, x;
        CHECK((d.b(x) - expect).norm() < 1e-8);
        for (const auto& c : d.c(x)) CHECK(c.norm() < 1e-8);
    }
    SUBCASE("pure quadratic") {
        auto d = extract_expansion([](const Eigen::VectorXd& e, double) {
            return std::vector<double>{e(0) * e(0), 0.0, 0.0};
        }, 2, 3);
        CHECK(d.b(1.0).norm() < 1e-6);
        CHECK(d.c(1.0)[0](0, 0) == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("mixed") {
        auto d = extract_expansion([](const Eigen::VectorXd& e, double x) {
            return std::vector<double>{std::sin(e(0)) * std::cos(x), e(1), e(0) * e(1)};
        }, 2, 3);
        double x = 1.3;
        Eigen::MatrixXd expect(3, 2);
        expect << std::cos(x), 0, 0, 1, 0, 0;
        CHECK((d.b(x) - expect).norm() < 1e-6);
        auto c = d.c(x);
        CHECK(c[2](0, 1) == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(c[2](1, 0) == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(std::abs(c[0](0, 0)) < 1e-6);
        Eigen::Vector2d eps(1e-3, -2e-3);
        Eigen::VectorXd direct(3);
        direct << std::sin(eps(0)) * std::cos(x), eps(1), eps(0) * eps(1);
        CHECK((d.reconstruct(eps, x) - direct).norm() < 1e-8);
    }
    SUBCASE("inconsistent") {
        CHECK_THROWS(extract_expansion([](const Eigen::VectorXd& e, double) {
            return std::vector<double>{1.0 + e(0), 0.0, 0.0};
        }, 2, 3));
    }
}

TEST_CASE("classify_point_m2 strata") {
    CHECK(classify_point_m2(column_data(0, 1, -1), e1(), 0).kind == PointKind::Interior);
    CHECK(classify_point_m2(column_data(0, 1, 0), e1(), 0).kind == PointKind::End);
    CHECK(classify_point_m2(column_data(0, 0, -1), e1(), 0).kind == PointKind::Intersection);
    CHECK(classify_point_m2(column_data(0.5, 1, -1), e1(), 0).kind == PointKind::None);
    CHECK(classify_point_m2(column_data(0, 1, 1), e1(), 0).kind == PointKind::None);
    auto z = classify_point_m2(column_data(0, 0, 0), e1(), 0);
    CHECK(z.kind == PointKind::None);
    CHECK(z.stratum == Stratum::T0);
}

TEST_CASE("classification properties") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_int_distribution<int> zero(0, 3);
    for (int i = 0; i < 2000; ++i) {
        double v[3];
        for (double& t : v) t = zero(rng) == 0 ? 0.0 : u(rng);
        auto d = column_data(v[0], v[1], v[2]);
        auto p = classify_point_m2(d, e1(), 0);
        if (p.kind != PointKind::None) CHECK(v[2] <= 1e-6);
        if (p.kind == PointKind::End) {
            CHECK(classify_point_m2(d, -e1(), 0).kind == PointKind::End);
        }
    }
}

TEST_CASE("classification fixture points") {
    auto data = classification_fixture();
    for (const auto& e : classification_fixture_points()) {
        auto p = classify_point_m2(data, unit_direction(e.theta), e.x);
        CHECK(p.kind == e.kind);
    }
    auto an = analyse_arcs(2, data);
    int ends = 0, inters = 0;
    for (const auto& p : an.points) {
        if (p.kind == PointKind::End) ++ends;
        if (p.kind == PointKind::Intersection) ++inters;
    }
    CHECK(ends == 4);
    CHECK(inters == 2);
}

TEST_CASE("trace_zero_curve") {
    auto diag = trace_zero_curve([](double t, double x) { return std::sin(t - x); });
    CHECK(diag.size() == 2);
    for (const auto& c : diag) {
        CHECK(c.closed);
        for (const auto& p : c.pts) CHECK(std::abs(std::sin(p(0) - p(1))) < 1e-8);
    }
    CHECK(trace_zero_curve([](double, double) { return 1.0; }).empty());
    auto vert = trace_zero_curve([](double t, double) { return std::cos(t) - 0.5; });
    CHECK(vert.size() == 2);
    for (const auto& c : vert) {
        CHECK(c.closed);
        for (const auto& p : c.pts) CHECK(std::abs(std::cos(p(0)) - 0.5) < 1e-8);
    }
}

TEST_CASE("find_fold_points") {
    TraceOptions opt;
    opt.x_periodic = false;
    opt.x_lo = -1;
    opt.x_hi = 1;
    TorusFn f = [](double t, double x) { return std::sin(t) - x * x; };
    auto curves = trace_zero_curve(f, 1e-8, opt);
    REQUIRE(!curves.empty());
    bool origin = false;
    for (const auto& c : curves)
        for (const auto& fp : find_fold_points(f, c)) {
            if (std::abs(fp.x) < 1e-6 && std::abs(std::sin(fp.theta)) < 1e-6) origin = true;
            CHECK(std::abs(fp.second_derivative + 2) < 1e-3);
        }
    CHECK(origin);

    TorusFn g = [](double t, double x) { return std::sin(t - x); };
    for (const auto& c : trace_zero_curve(g)) CHECK(find_fold_points(g, c).empty());

    TorusFn h = [](double t, double x) { return std::sin(t) - 0.5 * std::cos(x - 1.0); };
    std::vector<double> xs;
    for (const auto& c : trace_zero_curve(h))
        for (const auto& fp : find_fold_points(h, c)) xs.push_back(fp.x);
    bool at1 = false, at4 = false;
    for (double x : xs) {
        if (std::abs(x - 1.0) < 1e-6) at1 = true;
        if (std::abs(x - (1.0 + std::numbers::pi)) < 1e-6) at4 = true;
    }
    CHECK(at1);
    CHECK(at4);
}

TEST_CASE("synthetic arcs and contact orders") {
    for (int m = 2; m <= 4; ++m) {
        auto an = analyse_arcs(m, synthetic_expansion(m));
        int folds = 0;
        for (const auto& arc : an.arcs) {
            double expect;
            if (arc.kind == ArcKind::FoldPairCusp || arc.kind == ArcKind::FoldArc) {
                ++folds;
                expect = double(m + 1) / m;
            } else {
                expect = double(m) / (m - 1);
            }
            CHECK(arc.fitted_exponent == doctest::Approx(expect).epsilon(0.05));
        }
        CHECK(folds >= 1);
        if (m == 3) {
            int hyst = 0;
            for (const auto& arc : an.arcs) hyst += arc.kind == ArcKind::HysteresisArc;
            CHECK(hyst >= 1);
        }
        if (m == 4) {
            int ends = 0;
            for (const auto& arc : an.arcs) ends += arc.kind == ArcKind::EndArc;
            CHECK(ends >= 1);
        }
    }
}

TEST_CASE("variational discriminant m=3") {
    auto vc = variational_discriminant_m3([](double t, double x) { return std::cos(t) * std::sin(x); },
                                          [](double t, double x) { return std::sin(t) - std::cos(x); });
    CHECK(!vc.degenerate);
    CHECK(!vc.end_points.empty());
    for (const auto& p : vc.end_points) {
        CHECK(std::abs(std::cos(p(0)) * std::cos(p(1))) < 1e-6);
        CHECK(std::abs(std::sin(p(0)) - std::cos(p(1))) < 1e-6);
    }
    auto flat = variational_discriminant_m3([](double t, double) { return std::cos(t); },
                                            [](double t, double x) { return std::sin(t) - std::cos(x); });
    CHECK(flat.degenerate);
}
