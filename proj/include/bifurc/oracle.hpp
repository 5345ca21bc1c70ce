#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "bifurc/util.hpp"

namespace bifurc {

using Field = std::function<Eigen::Vector2d(const Eigen::VectorXd& eps, double x, double y)>;

struct Window {
    double x_lo = 0.0;
    double x_hi = kTwoPi;
    bool x_periodic = true;
    double y_lo = -0.3;
    double y_hi = 0.3;

    double size() const { return std::max(x_hi - x_lo, y_hi - y_lo); }
};

struct Zero {
    double x = 0.0;
    double y = 0.0;
    double residual = 0.0;
};

struct SolutionSet {
    Eigen::VectorXd eps;
    std::vector<Zero> zeros;
    double dedup_radius = 0.0;
    bool too_many = false;

    int count() const { return static_cast<int>(zeros.size()); }
};

struct CountOptions {
    int nx = 200;
    int ny = 200;
    double dedup = 0.0;  // 0 -> 1e-6 * window size
    double newton_tol = 1e-12;
    int max_iter = 50;
    int threads = 1;
};

SolutionSet count_solutions(const Field& field, const Eigen::VectorXd& eps, const Window& w,
                            const CountOptions& opt = {});

struct Jump {
    double theta = 0.0;
    int from = 0;
    int to = 0;
    int size() const { return to - from; }
    bool odd() const { return (to - from) % 2 != 0; }
};

struct CountMap {
    double rho = 0.0;
    std::vector<double> angles;
    std::vector<int> counts;
    std::vector<Jump> jumps;
    bool inconsistent = false;  // an odd jump was seen
};

struct CountMapOptions {
    int n_angles = 720;
    double theta_lo = 0.0;
    double theta_hi = kTwoPi;  // a shorter range restricts the map to a sector
    double refine_tol = 1e-4;
    CountOptions count;
    int threads = 0;
};

CountMap region_count_map(const Field& field, double rho, const Window& w, const CountMapOptions& opt = {});

struct BranchSample {
    double t = 0.0;  // |y|
    double tau = 0.0;
    Eigen::VectorXd eps;
    double x = 0.0;
    double y = 0.0;
};

struct BranchTrace {
    std::vector<BranchSample> samples;
    double x0 = 0.0;
    double x0_extrapolated = 0.0;
    double alpha_eps = 0.0;
    double alpha_x = 0.0;
    double alpha_y = 0.0;
};

struct BranchTraceOptions {
    double tau_min = 1e-5;
    double tau_max = 1e-2;
    double x_halfwidth = 0.5;
    double y_max = 0.3;
    int y_sign = 0;  // pick the starting zero with this sign of y (0: any)
    int max_steps = 4000;
};

BranchTrace trace_branch(const Field& field, double x0, const Eigen::VectorXd& direction,
                         const BranchTraceOptions& opt = {});

struct PairingReport {
    enum class Status { Empty, Paired, NotFound } status = Status::Empty;
    double x_mismatch = 0.0;
    double y_reflection = 0.0;
};

const char* to_string(PairingReport::Status s);

PairingReport kappa_pairing(const SolutionSet& sol, double tol);

// min |x - x'| + |y + y'| over zeros with opposite signs of y.
double kappa_coincidence(const SolutionSet& sol);

}  // namespace bifurc

#include "bifurc/deformation.hpp"

namespace bifurc {

Field as_field(const VersalFamily& family);
// Two-component reduced models only.
Field as_field(const ReducedFieldModel& model);

}  // namespace bifurc
