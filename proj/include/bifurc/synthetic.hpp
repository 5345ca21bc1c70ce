#pragma once

#include <vector>

#include "bifurc/blowup.hpp"
#include "bifurc/deformation.hpp"

namespace bifurc {

// Linear versal family on the circle: a0 = sin(th) - 2 cos(th) cos x, a1 = 2 cos(th),
// abar0 = -2 cos(th) cos(x - 0.3), all other parameters zero (eps = rho (cos th, sin th)).
Eigen::MatrixXd synthetic_b(int m, double x);
ExpansionData synthetic_expansion(int m);
VersalFamily synthetic_versal(int m);

// m = 2 expansion with analytically placed end and intersection points.
ExpansionData classification_fixture();

struct ExpectedPoint {
    PointKind kind = PointKind::None;
    double theta = 0.0;
    double x = 0.0;
};
std::vector<ExpectedPoint> classification_fixture_points();

// (eps g1 + y^2 r1, eps g2 + y^3 r2) with g = (1, sin x), r = (1, 1).
ReducedFieldModel example1_model();
// m = (2, 2), g = (1, cos x), r = (1, 1).
ReducedFieldModel example2_model();
// (eps + y^m, eps sin x + y^(m+1)).
ReducedFieldModel scaling_model(int m);

}  // namespace bifurc
