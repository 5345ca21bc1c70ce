#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

namespace bifurc {

struct ProblemDimensions {
    int d = 1;
    int k = 1;
    int q = 1;
    int m = 2;

    void validate() const;
};

// Versal parameters (a_0..a_{m-1}; abar_0..abar_{m-2}).
struct DeformationParams {
    int m = 2;
    std::vector<double> a;
    std::vector<double> abar;

    DeformationParams() = default;
    DeformationParams(int m, std::vector<double> a, std::vector<double> abar);

    // m = 2 labels (a1, a2, a3) = (a0, a1; abar0).
    static DeformationParams m2(double a1, double a2, double a3);
    // Flat vector of length 2m-1, a first then abar.
    static DeformationParams from_flat(int m, const std::vector<double>& v);
    std::vector<double> flat() const;
    double norm() const;
    void validate() const;
};

std::array<double, 2> eval_versal_m2(const DeformationParams& p, double y);
std::array<double, 2> eval_versal_general(const DeformationParams& p, double y);

enum class ChartKind { Circle, Interval };

struct ManifoldChart {
    ChartKind kind = ChartKind::Circle;
    double lo = 0.0;
    double hi = 6.283185307179586;

    static ManifoldChart circle();
    static ManifoldChart interval(double lo, double hi);

    bool periodic() const { return kind == ChartKind::Circle; }
    double period() const { return hi - lo; }
    // Canonical representative for circles; range check for intervals.
    double reduce(double x) const;
    bool contains(double x) const;
};

using ScalarField3 = std::function<double(const Eigen::VectorXd& eps, double x, double y)>;
using ScalarField2 = std::function<double(double x, double y)>;

struct FieldComponent {
    int m = 2;
    std::vector<ScalarField3> g;  // one callable per parameter direction
    ScalarField2 r;
};

struct ReducedFieldModel {
    ProblemDimensions dims;
    std::vector<FieldComponent> components;
    ManifoldChart chart;

    void validate() const;
};

Eigen::VectorXd eval_reduced_field(const ReducedFieldModel& model, const Eigen::VectorXd& eps, double x, double y);

// Versal family H(a(eps, x), y) with parameter map a: (eps, x) -> R^{2m-1}.
struct VersalFamily {
    int m = 2;
    int q = 2;
    std::function<std::vector<double>(const Eigen::VectorXd& eps, double x)> a;
    ManifoldChart chart;

    DeformationParams params(const Eigen::VectorXd& eps, double x) const;
    Eigen::Vector2d field(const Eigen::VectorXd& eps, double x, double y) const;
};

}  // namespace bifurc
