#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bifurc/deformation.hpp"

namespace bifurc {

Eigen::MatrixXd sylvester_matrix(const DeformationParams& p);

double resultant(const DeformationParams& p);

// |R_m| <= tol * (1 + |a|^{2m-1}).
bool is_on_discriminant(const DeformationParams& p, double tol);
double discriminant_tolerance(const DeformationParams& p, double tol);

// Smallest distance between a root of sum a_i y^i and a root of sum abar_j y^j + y^m,
// over the complex roots. Infinity when the first polynomial is a nonzero constant.
double common_root_distance(const DeformationParams& p);

struct StructureCheck {
    std::string name;
    double expected = 0.0;
    double observed = 0.0;
    double residual = 0.0;
    bool pass = false;
};

struct StructureReport {
    int m = 0;
    std::vector<StructureCheck> checks;
    bool pass() const;
};

StructureReport verify_structure(int m, int trials, unsigned seed);

}  // namespace bifurc
