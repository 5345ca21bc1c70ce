#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bifurc {

struct RadialPotential {
    std::function<double(double)> V, dV, d2V;
    double lambda = 1.0;
    bool mexican_hat = false;

    // V(r) = -lambda^2 r^2 / 2 + r^4 / 4.
    static RadialPotential mexican(double lambda);
};

struct RadialPotentialModel {
    RadialPotential pot;
    double r0 = 1.0;
    double omega = 6.283185307179586;
    double E = 0.0;

    // Energy of the circular orbit of radius r0; requires V'(r0) > 0.
    static RadialPotentialModel circular(const RadialPotential& pot, double r0);
    double Omega() const;
};

double hamiltonian_omega_condition(const RadialPotentialModel& model, int n);

// Radius satisfying the degeneracy condition for mode n, or NaN.
double degenerate_radius(const RadialPotential& pot, int n);

struct EnergyLevel {
    int n = 0;
    bool valid = false;
    double r0 = 0.0;
    double E = 0.0;
    bool in_hill_region = false;
    std::string reason;
};

std::vector<EnergyLevel> degenerate_energies(const RadialPotential& pot, int n_lo, int n_hi);

struct KernelResult {
    int dimension = 1;
    int mode = 0;
    double frequency_square = 0.0;  // 4 + Omega / 2
    double mismatch = 0.0;
    bool borderline = false;
};

KernelResult kernel_dimension(const RadialPotentialModel& model, int n_modes = 32);

// Jacobi functional of the perturbed circular orbit q0 + y cos(n omega t) e(t).
double jacobi_functional(const RadialPotentialModel& model, int n, double y, int panels = 512);

struct QuarticFit {
    std::vector<double> coeffs;  // c0 .. c6 of J(y) - J(0)
    double rel2 = 0.0;           // |c2| / |c4|
    double rel3 = 0.0;
    double J0 = 0.0;
    double J0_fine = 0.0;  // same fit at twice the quadrature resolution
    double residual = 0.0;
    bool degenerate = false;
};

QuarticFit jacobi_quartic_fit(const RadialPotentialModel& model, int n, const std::vector<double>& y_samples,
                              int panels = 512);
// Throws DegeneracyCheckFailure when the quadratic or cubic term is significant.
double jacobi_reduced_quartic(const RadialPotentialModel& model, int n, const std::vector<double>& y_samples,
                              int panels = 512);

std::vector<double> default_y_samples();

}  // namespace bifurc
