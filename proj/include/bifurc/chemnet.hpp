#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "bifurc/branching.hpp"
#include "bifurc/lyapunov_schmidt.hpp"

namespace bifurc {

using Perturbation = std::function<Eigen::Vector3d(const Eigen::Vector3d& z)>;

struct ChemNetworkModel {
    std::function<double(double)> v;
    std::function<double(double)> dv;   // optional; differenced when empty
    std::function<double(double)> d2v;  // optional
    std::vector<Perturbation> phi;      // one per parameter
    double x1_lo = 0.05;
    double x1_hi = 10.0;
    double lambda_lo = 0.1;
    double lambda_hi = 10.0;

    static Eigen::Matrix3d stoichiometry();
    Eigen::Vector3d nu(const Eigen::Vector3d& z) const;
    double v1(double x) const;
    double v2(double x) const;
    // Unique zero of v on [x1_lo, x1_hi]; double zeros are found by minimising |v|.
    double x1_star() const;
    Eigen::Vector3d point(double lambda) const;
    Eigen::Vector3d tangent() const;
    Eigen::Vector3d phi_at(const Eigen::VectorXd& s, const Eigen::Vector3d& z) const;
};

// Checks ker B = span{(1,0,1)} and range B = span{(0,1,0), (1,1,-1)}.
bool check_stoichiometry(double tol = 1e-12);

AmbientSystem chem_ambient(const ChemNetworkModel& model);

struct ChemRegularity {
    bool regular = false;
    int corank = 0;
    double x1_star = 0.0;
    double dv_star = 0.0;
    bool consistent = true;  // rank test agrees with v'(x1*) != 0
};

ChemRegularity chem_regularity(const ChemNetworkModel& model, int n_samples = 32);

struct ChemBranchFunction {
    std::function<double(double)> g;  // on S+ parametrised by lambda
    std::vector<double> zeros;        // simple zeros
    std::vector<double> degenerate_zeros;
    bool identically_zero = false;
};

// g = a(s)<b(p), phi> - a(p)<b(s), phi> with p = (0,1,0) and s tangent to S+.
ChemBranchFunction chem_branch_function(const ChemNetworkModel& model, const Eigen::VectorXd& direction,
                                        int grid = 2048);

struct ChemPipelineResult {
    std::vector<ComponentData> sample_data;  // at the first branch point, or the chart midpoint
    std::vector<BranchPoint> points;
};

// build_reduction -> extract_branch_data -> find_branch_points on the same network.
ChemPipelineResult chem_pipeline(const ChemNetworkModel& model, const Eigen::VectorXd& direction, int grid = 2048,
                                 int threads = 0);

}  // namespace bifurc
