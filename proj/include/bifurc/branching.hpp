#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "bifurc/deformation.hpp"

namespace bifurc {

// Values of one reduced component at a point of S, g contracted with the parameter direction.
struct ComponentValues {
    int m = 2;
    double g = 0.0;
    double r = 0.0;
};

struct BranchData {
    std::vector<ComponentValues> comps;

    // Components in order of increasing m (stable).
    std::vector<ComponentValues> sorted() const;
    double d(int i, int j) const { return comps[i].r * comps[j].g - comps[j].r * comps[i].g; }
};

struct ConditionFailure {
    int i = 0;
    int j = 0;
    std::string condition;
    double value = 0.0;
};

struct NecessaryResult {
    bool pass = true;
    bool all_g_zero = false;
    int n = -1;  // index of the last nonzero g in sorted order
    std::vector<ConditionFailure> failed;
};

NecessaryResult necessary_conditions(const BranchData& data, double tol = 1e-8);

enum class BranchVariant { General, Uniform, Variational };
enum class BranchStatus { NecessaryOnly, Sufficient, DegenerateZero };

const char* to_string(BranchVariant v);
const char* to_string(BranchStatus s);
BranchVariant parse_variant(const std::string& s);

struct BranchPoint {
    double x0 = 0.0;
    Eigen::VectorXd direction;
    int eps_sign = 0;  // sign of the scalar parameter along which solutions emanate (0: both)
    BranchStatus status = BranchStatus::NecessaryOnly;
    double derivative = 0.0;
    std::string condition;
    std::vector<std::string> flags;
};

// Scalar functions on S for a two-component reduced field along a fixed parameter direction.
struct BranchField {
    int m1 = 2;
    int m2 = 2;
    std::function<double(double)> g1, g2, r1, r2;
    ManifoldChart chart;

    static BranchField from_model(const ReducedFieldModel& model, const Eigen::VectorXd& direction);
    BranchData at(double x) const;
};

struct VariationalModel {
    int m = 4;
    std::function<double(double)> g;  // g(0, x, 0)
    std::function<double(double)> r;  // r(x, 0)
    ManifoldChart chart;
};

struct BranchOptions {
    int grid = 2048;
    double tol = 1e-6;
    int threads = 0;
};

std::vector<BranchPoint> find_branch_points(const BranchField& field, BranchVariant variant,
                                            const BranchOptions& opt = {});
std::vector<BranchPoint> find_branch_points(const ReducedFieldModel& model, BranchVariant variant,
                                            const Eigen::VectorXd& direction, const BranchOptions& opt = {});
std::vector<BranchPoint> find_branch_points(const VariationalModel& model, const BranchOptions& opt = {});

struct VariationalResult {
    bool necessary = false;
    bool sufficient_i = false;
    bool sufficient_ii = false;
    std::string interpretation;
};

VariationalResult variational_conditions(const std::function<double(double)>& g,
                                         const std::function<double(double)>& r, int m, double x0,
                                         double tol = 1e-6);

int count_lower_bound(BranchVariant variant, const ManifoldChart& chart);

// Zeros of a scalar map on a chart: sign changes and touching minima on a grid, then polished.
std::vector<double> scalar_zeros(const std::function<double(double)>& f, const ManifoldChart& chart, int grid,
                                 int threads = 1);

}  // namespace bifurc
