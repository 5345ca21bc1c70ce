#include <cmath>
#include <numbers>

#include "bifurc/branching.hpp"
#include "bifurc/errors.hpp"
#include "bifurc/synthetic.hpp"
#include "doctest.h"

using namespace bifurc;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd dir1() {
    Eigen::VectorXd d(1);
    d << 1.0;
    return d;
}

bool near_angle(double a, double b, double tol) { return std::abs(std::remainder(a - b, 2 * kPi)) < tol; }

}  // namespace

TEST_CASE("pairwise determinants") {
    BranchData bd{{{2, 0.3, 1.5}, {2, -0.7, 0.4}, {3, 1.1, -2.0}}};
    for (int i = 0; i < 3; ++i) {
        CHECK(bd.d(i, i) == 0.0);
        for (int j = 0; j < 3; ++j) CHECK(bd.d(i, j) == -bd.d(j, i));
    }
}

TEST_CASE("necessary conditions") {
    auto ex1 = [](double x) { return BranchData{{{2, 1.0, 1.0}, {3, std::sin(x), 1.0}}}; };
    CHECK(necessary_conditions(ex1(0.0)).pass);
    CHECK(necessary_conditions(ex1(kPi)).pass);
    auto f = necessary_conditions(ex1(1.0));
    CHECK(!f.pass);
    REQUIRE(!f.failed.empty());
    CHECK(f.failed[0].value == doctest::Approx(std::sin(1.0)));

    auto ex2 = [](double x) { return BranchData{{{2, 1.0, 1.0}, {2, std::cos(x), 1.0}}}; };
    CHECK(necessary_conditions(ex2(0.0)).pass);
    CHECK(!necessary_conditions(ex2(1.0)).pass);

    auto zero = necessary_conditions(BranchData{{{2, 0.0, 1.0}, {3, 0.0, 2.0}}});
    CHECK(zero.pass);
    CHECK(zero.all_g_zero);
}

TEST_CASE("Example 1 branch points") {
    auto pts = find_branch_points(example1_model(), BranchVariant::General, dir1());
    REQUIRE(pts.size() == 2);
    bool at0 = false, atpi = false;
    for (const auto& p : pts) {
        CHECK(p.status == BranchStatus::Sufficient);
        CHECK(std::abs(std::abs(p.derivative) - 1.0) < 1e-4);
        at0 |= near_angle(p.x0, 0.0, 1e-8);
        atpi |= near_angle(p.x0, kPi, 1e-8);
    }
    CHECK(at0);
    CHECK(atpi);

    auto uni = find_branch_points(example1_model(), BranchVariant::Uniform, dir1());
    REQUIRE(uni.size() == pts.size());
    for (size_t i = 0; i < uni.size(); ++i) CHECK(uni[i].x0 == doctest::Approx(pts[i].x0).epsilon(1e-9));
}

TEST_CASE("Example 2 degenerate zero") {
    auto pts = find_branch_points(example2_model(), BranchVariant::General, dir1());
    REQUIRE(pts.size() == 1);
    CHECK(near_angle(pts[0].x0, 0.0, 1e-4));
    CHECK(pts[0].status == BranchStatus::DegenerateZero);
    CHECK(pts[0].condition == "g_{l,n} = d12");
}

TEST_CASE("unsupported dimension and variant mismatch") {
    auto model = example1_model();
    model.dims.d = 2;
    CHECK_THROWS_AS(find_branch_points(model, BranchVariant::General, dir1()), UnsupportedDimension);

    auto bf = BranchField::from_model(example1_model(), dir1());
    bf.r1 = [](double x) { return std::cos(x); };
    CHECK_THROWS_AS(find_branch_points(bf, BranchVariant::Uniform), VariantMismatch);
    CHECK_THROWS_AS(find_branch_points(bf, BranchVariant::Variational), VariantMismatch);
    CHECK_THROWS_AS(parse_variant("bogus"), InvalidParams);
    CHECK(parse_variant("uniform") == BranchVariant::Uniform);
}

TEST_CASE("variational branch points") {
    VariationalModel vm;
    vm.m = 4;
    vm.g = [](double x) { return std::cos(x); };
    vm.r = [](double) { return 1.0; };
    vm.chart = ManifoldChart::circle();
    auto pts = find_branch_points(vm);
    REQUIRE(pts.size() == 2);
    CHECK(near_angle(pts[0].x0 + pts[1].x0, kPi, 1e-6));
    CHECK(std::abs(std::abs(std::remainder(pts[0].x0 - pts[1].x0, 2 * kPi)) - kPi) < 1e-6);
    for (const auto& p : pts) CHECK(p.status == BranchStatus::Sufficient);
    for (double x0 : {0.0, kPi}) {
        auto vc = variational_conditions(vm.g, vm.r, 4, x0);
        CHECK(vc.necessary);
        CHECK(vc.sufficient_ii);
    }
    auto bad = variational_conditions(vm.g, vm.r, 4, 1.0);
    CHECK(!bad.necessary);

    vm.g = [](double x) { return std::sin(3 * x); };
    auto six = find_branch_points(vm);
    CHECK(six.size() == 6);
    for (const auto& p : six) CHECK(std::abs(std::cos(3 * p.x0)) < 1e-6);
    CHECK(six.size() >= static_cast<size_t>(count_lower_bound(BranchVariant::Variational, vm.chart)));
    CHECK(count_lower_bound(BranchVariant::Variational, ManifoldChart::circle()) == 2);
    CHECK_THROWS_AS(count_lower_bound(BranchVariant::General, ManifoldChart::circle()), InvalidParams);
}

TEST_CASE("scalar zeros") {
    auto z = scalar_zeros([](double x) { return std::sin(2 * x); }, ManifoldChart::circle(), 512);
    CHECK(z.size() == 4);
    auto t = scalar_zeros([](double x) { return 1 - std::cos(x); }, ManifoldChart::circle(), 512);
    REQUIRE(t.size() == 1);
    CHECK(near_angle(t[0], 0.0, 1e-4));
    CHECK(scalar_zeros([](double) { return 1.0; }, ManifoldChart::interval(0, 1), 64).empty());
}
