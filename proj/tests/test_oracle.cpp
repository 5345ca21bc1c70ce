#include <cmath>
#include <numbers>

#include "bifurc/errors.hpp"
#include "bifurc/oracle.hpp"
#include "bifurc/synthetic.hpp"
#include "doctest.h"

using namespace bifurc;

namespace {

Eigen::VectorXd eps1(double e) {
    Eigen::VectorXd v(1);
    v << e;
    return v;
}

std::vector<int> pattern(const CountMap& cm) {
    std::vector<int> out;
    for (int c : cm.counts)
        if (out.empty() || out.back() != c) out.push_back(c);
    return out;
}

}  // namespace

TEST_CASE("inconsistent systems have no zeros") {
    Field whitney = [](const Eigen::VectorXd& e, double, double y) -> Eigen::Vector2d {
        return {0.0 + 1.0 * y, -e[0] + y * y};
    };
    Window w{0.0, 1.0, false, -0.3, 0.3};
    CHECK(count_solutions(whitney, eps1(1e-2), w).count() == 0);

    Field cubic = [](const Eigen::VectorXd& e, double, double y) -> Eigen::Vector2d {
        return {y * y, y * y * y - e[0]};
    };
    Window wy{0.0, kTwoPi, true, -0.1, 0.1};
    CHECK(count_solutions(cubic, eps1(1e-6), wy).count() == 0);
}

TEST_CASE("Example 1 zero count") {
    auto sol = count_solutions(as_field(example1_model()), eps1(-1e-4), Window{});
    REQUIRE(sol.count() == 4);
    for (const auto& z : sol.zeros) {
        CHECK(z.residual < 1e-10);
        CHECK(std::abs(std::abs(z.y) - 1e-2) < 1e-4);
        CHECK(std::abs(std::sin(z.x) - z.y) < 1e-5);
    }
    for (size_t i = 0; i < sol.zeros.size(); ++i)
        for (size_t j = i + 1; j < sol.zeros.size(); ++j) {
            double d = std::hypot(sol.zeros[i].x - sol.zeros[j].x, sol.zeros[i].y - sol.zeros[j].y);
            CHECK(d > sol.dedup_radius);
        }
}

TEST_CASE("fold pair count pattern") {
    CountMapOptions opt;
    opt.n_angles = 96;
    opt.theta_lo = 1.5;
    opt.theta_hi = 3.9;
    opt.threads = 1;
    auto field = as_field(synthetic_versal(2));
    auto cm = region_count_map(field, 1e-2, Window{}, opt);
    CHECK(pattern(cm) == std::vector<int>{0, 2, 4, 2, 0});
    CHECK(!cm.inconsistent);
    REQUIRE(cm.jumps.size() == 4);
    CHECK(cm.jumps[1].theta < cm.jumps[2].theta);
    for (const auto& j : cm.jumps) CHECK(std::abs(j.size()) == 2);

    auto again = region_count_map(field, 1e-2, Window{}, opt);
    CHECK(again.counts == cm.counts);
    for (size_t k = 0; k < cm.jumps.size(); ++k) CHECK(again.jumps[k].theta == cm.jumps[k].theta);
}

TEST_CASE("branch scaling exponents") {
    BranchTraceOptions opt;
    opt.y_sign = 1;
    for (int m : {2, 3}) {
        auto tr = trace_branch(as_field(scaling_model(m)), 0.0, eps1(-1.0), opt);
        CHECK(tr.alpha_eps == doctest::Approx(m).epsilon(0.05));
        CHECK(tr.alpha_y == doctest::Approx(1.0).epsilon(0.05));
        CHECK(tr.alpha_x == doctest::Approx(1.0).epsilon(0.05));
        CHECK(std::abs(tr.x0_extrapolated) < 1e-3);
    }
    CHECK_THROWS_AS(trace_branch(as_field(scaling_model(2)), 0.0, eps1(1.0), opt), NoBranch);
}

TEST_CASE("kappa pairing") {
    Field sym = [](const Eigen::VectorXd& e, double x, double y) -> Eigen::Vector2d {
        return {y * y + e[0], std::sin(2 * x)};
    };
    auto sol = count_solutions(sym, eps1(-0.01), Window{});
    REQUIRE(sol.count() == 8);
    auto rep = kappa_pairing(sol, 1e-8);
    CHECK(rep.status == PairingReport::Status::Paired);
    CHECK(kappa_coincidence(sol) < 1e-8);

    Field two = [](const Eigen::VectorXd& e, double x, double y) -> Eigen::Vector2d {
        return {y * y + e[0], std::sin(x)};
    };
    auto s2 = count_solutions(two, eps1(-0.01), Window{0.5, 5.0, false, -0.3, 0.3});
    REQUIRE(s2.count() == 2);
    CHECK(kappa_pairing(s2, 1e-8).status == PairingReport::Status::Empty);

    Field skew = [](const Eigen::VectorXd& e, double x, double y) -> Eigen::Vector2d {
        return {y * y + e[0], std::sin(2 * x + y)};
    };
    auto s3 = count_solutions(skew, eps1(-0.01), Window{});
    REQUIRE(s3.count() == 8);
    CHECK(kappa_pairing(s3, 1e-8).status == PairingReport::Status::NotFound);
}
