#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "bifurc/deformation.hpp"
#include "bifurc/util.hpp"

namespace bifurc {

using TorusFn = std::function<double(double theta, double x)>;
using ParamMap = std::function<std::vector<double>(const Eigen::VectorXd& eps, double x)>;

// a(eps, x) ~ b(x) eps + c(x)(eps, eps); c holds one symmetric q x q form per row.
struct ExpansionData {
    int r_dim = 3;
    int q = 2;
    std::function<Eigen::MatrixXd(double x)> b;
    std::function<std::vector<Eigen::MatrixXd>(double x)> c;

    static ExpansionData analytic(int r_dim, int q, std::function<Eigen::MatrixXd(double)> b,
                                  std::function<std::vector<Eigen::MatrixXd>(double)> c = nullptr);

    Eigen::VectorXd bs(double x, const Eigen::VectorXd& s) const;
    Eigen::VectorXd cs(double x, const Eigen::VectorXd& s) const;
    // Second-order reconstruction of a(eps, x).
    Eigen::VectorXd reconstruct(const Eigen::VectorXd& eps, double x) const;
};

ExpansionData extract_expansion(const ParamMap& a, int q, int r_dim, double h = 1e-3,
                                const ManifoldChart& chart = ManifoldChart::circle());

Eigen::VectorXd unit_direction(double theta);

struct PinchResult {
    Eigen::VectorXd eps;
    bool normalised = false;
};
PinchResult pinch(double rho, const Eigen::VectorXd& s);

enum class Stratum { T0, T1, T1prime, T2, NotInT };
enum class PointKind { Interior, End, Intersection, None };
// Cases for m >= 3: regular (i), abar0 = 0 (ii), b1 = 0 (iii).
enum class MCase { NotOnCone, Regular, CaseII, CaseIII, Degenerate };

const char* to_string(Stratum s);
const char* to_string(PointKind k);
const char* to_string(MCase c);

struct ClassifiedPoint {
    Eigen::VectorXd s;
    double theta = 0.0;
    double x = 0.0;
    PointKind kind = PointKind::None;
    Stratum stratum = Stratum::NotInT;
    MCase mcase = MCase::NotOnCone;
    std::vector<double> residuals;
};

ClassifiedPoint classify_point_m2(const ExpansionData& data, const Eigen::VectorXd& s, double x, double tol = 1e-6);
ClassifiedPoint classify_point_m(int m, const ExpansionData& data, const Eigen::VectorXd& s, double x,
                                 double tol = 1e-6);

struct Polyline {
    std::vector<Eigen::Vector2d> pts;  // (theta, x)
    bool closed = false;
    bool singular = false;
};

struct TraceOptions {
    int grid = 200;
    double step = kTwoPi / 400.0;
    double max_step = kTwoPi / 80.0;
    double newton_tol = 1e-10;
    bool x_periodic = true;
    double x_lo = 0.0;
    double x_hi = kTwoPi;
    int max_steps = 20000;
};

std::vector<Polyline> trace_zero_curve(const TorusFn& f, double tol = 1e-8, const TraceOptions& opt = {});

struct FoldPoint {
    double theta = 0.0;
    double x = 0.0;
    Eigen::VectorXd s;
    double second_derivative = 0.0;
    bool unresolved = false;
};

// Points of the curve f = 0 where df/dx = 0.
std::vector<FoldPoint> find_fold_points(const TorusFn& f, const Polyline& curve, double tol = 1e-6);
// Folds of the projection of B_1 = {b_1 = 0} (row 0 of b s).
std::vector<FoldPoint> find_fold_points(const ExpansionData& data, const Polyline& curve, double tol = 1e-6);

enum class ArcKind { FoldPairCusp, FoldArc, EndArc, IntersectionArc, HysteresisArc };
const char* to_string(ArcKind k);

struct ArcSample {
    double rho = 0.0;
    double theta = 0.0;
    double x = 0.0;
    Eigen::VectorXd eps;
};

struct BifurcationArc {
    ArcKind kind = ArcKind::FoldPairCusp;
    Eigen::VectorXd origin_direction;
    double theta0 = 0.0;
    double x0 = 0.0;
    ClassifiedPoint source;
    int contact_num = 3;
    int contact_den = 2;
    // One polyline per emanating branch.
    std::vector<std::vector<ArcSample>> branches;
    // Side of the tangent direction each branch lies on (+1 counter-clockwise).
    std::vector<int> sides;
    double fitted_exponent = 0.0;
    std::vector<std::string> flags;
};

struct ArcOptions {
    std::vector<double> rho_schedule;  // empty -> default
    double tol = 1e-6;
    TraceOptions trace;
    int threads = 0;
};

std::vector<double> default_rho_schedule();

// R_m(rho (b s + rho c(s, s))) / rho^m.
double reduced_resultant(int m, const ExpansionData& data, double rho, double theta, double x);

struct ArcAnalysis {
    int m = 2;
    std::vector<Polyline> b0_curves;
    std::vector<FoldPoint> folds;
    std::vector<ClassifiedPoint> points;  // end, intersection and case (ii)/(iii) points
    std::vector<BifurcationArc> arcs;
    std::vector<std::string> flags;
};

ArcAnalysis analyse_arcs(int m, const ExpansionData& data, const ArcOptions& opt = {});
std::vector<BifurcationArc> bifurcation_arcs_m2(const ExpansionData& data, const ArcOptions& opt = {});
std::vector<BifurcationArc> bifurcation_arcs_m(int m, const ExpansionData& data, const ArcOptions& opt = {});

struct VariationalCurves {
    std::vector<Polyline> b0_prime;
    std::vector<Polyline> b1;
    std::vector<Eigen::Vector2d> end_points;
    std::vector<Eigen::Vector2d> intersection_points;
    bool degenerate = false;
    std::vector<std::string> flags;
};

VariationalCurves variational_discriminant_m3(const TorusFn& b0, const TorusFn& b1, double tol = 1e-6,
                                              const TraceOptions& opt = {});

}  // namespace bifurc
