#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "bifurc/deformation.hpp"

namespace bifurc {

struct AmbientSystem {
    int N = 3;
    int q = 1;
    std::function<Eigen::VectorXd(const Eigen::VectorXd& eps, const Eigen::VectorXd& z)> F;
    std::function<Eigen::VectorXd(double x)> S;
    std::function<Eigen::VectorXd(double x)> dS;  // optional; differenced from S when empty
    ManifoldChart chart;
};

struct LSOptions {
    int n_samples = 256;
    double kernel_tol = 1e-8;  // relative to the largest singular value
    double gap = 10.0;
    double y_max = 0.2;
    double eps_max = 0.05;
    double newton_tol = 1e-12;
    int max_iter = 50;
    bool log_spacing = false;
    int threads = 0;
};

// Per-sample bases. T spans T_xS, K the kernel complement, L the rest of the normal space;
// UR spans the range, P completes T + range.
struct LSFrame {
    double x = 0.0;
    Eigen::VectorXd z;
    Eigen::VectorXd T;
    Eigen::VectorXd K;
    Eigen::MatrixXd L;
    Eigen::MatrixXd UR;
    Eigen::VectorXd t_hat;
    Eigen::VectorXd P;
    Eigen::VectorXd singular_values;
    double basis_condition = 1.0;
};

class LSReduction {
public:
    LSReduction(AmbientSystem sys, LSOptions opt);

    const AmbientSystem& system() const { return sys_; }
    const LSOptions& options() const { return opt_; }
    const std::vector<LSFrame>& frames() const { return frames_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    LSFrame frame_at(double x) const;
    Eigen::VectorXd solve_slave(const LSFrame& f, const Eigen::VectorXd& eps, double y) const;
    Eigen::VectorXd solve_slave(const Eigen::VectorXd& eps, double x, double y) const;
    // Ambient point z(x) + y K + L sigma.
    Eigen::VectorXd lift(const Eigen::VectorXd& eps, double x, double y) const;
    Eigen::Vector2d reduced_field(const LSFrame& f, const Eigen::VectorXd& eps, double y) const;
    Eigen::Vector2d reduced_field(const Eigen::VectorXd& eps, double x, double y) const;

private:
    LSFrame make_frame(double x) const;
    void align(LSFrame& f, const LSFrame& ref) const;
    void check_box(const Eigen::VectorXd& eps, double y) const;

    AmbientSystem sys_;
    LSOptions opt_;
    std::vector<LSFrame> frames_;
    std::vector<std::string> warnings_;
};

LSReduction build_reduction(const AmbientSystem& sys, const LSOptions& opt = {});

// Ambient Jacobian in z by fourth-order differences.
Eigen::MatrixXd ambient_jacobian(const AmbientSystem& sys, const Eigen::VectorXd& eps, const Eigen::VectorXd& z);

struct ComponentData {
    int m = 0;
    double r = 0.0;         // y^m coefficient of the component at eps = 0
    Eigen::VectorXd g;      // d/d eps_j at (0, x, 0)
};

// Taylor data of the two reduced components at x (index 0: tangent, 1: P direction).
std::vector<ComponentData> extract_branch_data(const LSReduction& red, double x, double y_box = 0.1,
                                               double eps_probe = 1e-5);
// The same from an arbitrary reduced field (eps, x, y) -> R^2.
std::vector<ComponentData> extract_branch_data(
    const std::function<Eigen::Vector2d(const Eigen::VectorXd&, double, double)>& field, int q, double x,
    double y_box = 0.1, double eps_probe = 1e-5);

}  // namespace bifurc
