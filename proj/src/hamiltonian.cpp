#include "bifurc/hamiltonian.hpp"

#include <cmath>
#include <limits>

#include "bifurc/errors.hpp"
#include "bifurc/util.hpp"

namespace bifurc {

RadialPotential RadialPotential::mexican(double lambda) {
    RadialPotential p;
    const double l2 = lambda * lambda;
    p.V = [l2](double r) { return -0.5 * l2 * r * r + 0.25 * r * r * r * r; };
    p.dV = [l2](double r) { return -l2 * r + r * r * r; };
    p.d2V = [l2](double r) { return -l2 + 3 * r * r; };
    p.lambda = lambda;
    p.mexican_hat = true;
    return p;
}

RadialPotentialModel RadialPotentialModel::circular(const RadialPotential& pot, double r0) {
    if (!(r0 > 0)) throw InvalidParams("radius must be positive");
    if (!(pot.dV(r0) > 0)) throw DomainError("V'(r0) must be positive for a circular orbit");
    RadialPotentialModel m;
    m.pot = pot;
    m.r0 = r0;
    m.E = pot.V(r0) + 0.5 * r0 * pot.dV(r0);
    return m;
}

double RadialPotentialModel::Omega() const { return r0 * pot.d2V(r0) / pot.dV(r0) + 1.0; }

double hamiltonian_omega_condition(const RadialPotentialModel& model, int n) {
    const double r = model.r0;
    return r * model.pot.d2V(r) - (2.0 * n * n - 9.0) * model.pot.dV(r);
}

double degenerate_radius(const RadialPotential& pot, int n) {
    const double k = 2.0 * n * n - 9.0;
    if (pot.mexican_hat) {
        const double n2 = static_cast<double>(n) * n;
        const double r2 = pot.lambda * pot.lambda * (n2 - 5.0) / (n2 - 6.0);
        return r2 > 0 ? std::sqrt(r2) : std::numeric_limits<double>::quiet_NaN();
    }
    auto f = [&](double r) { return r * pot.d2V(r) - k * pot.dV(r); };
    const int grid = 4000;
    const double rmax = 10.0 * std::max(1.0, pot.lambda);
    double a = rmax / grid, fa = f(a);
    for (int i = 2; i <= grid; ++i) {
        double b = i * rmax / grid, fb = f(b);
        if (fa * fb < 0) {
            double lo = a, hi = b;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                if ((f(mid) > 0) == (f(lo) > 0))
                    lo = mid;
                else
                    hi = mid;
            }
            double r = 0.5 * (lo + hi);
            if (pot.dV(r) > 0) return r;
        }
        a = b;
        fa = fb;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::vector<EnergyLevel> degenerate_energies(const RadialPotential& pot, int n_lo, int n_hi) {
    std::vector<EnergyLevel> out;
    for (int n = n_lo; n <= n_hi; ++n) {
        EnergyLevel e;
        e.n = n;
        const double r0 = degenerate_radius(pot, n);
        if (!std::isfinite(r0)) {
            e.reason = "no positive radius solves the degeneracy condition";
        } else if (!(pot.dV(r0) > 0)) {
            e.r0 = r0;
            e.reason = "V'(r0) <= 0: orbit outside the Hill region";
        } else {
            e.valid = true;
            e.r0 = r0;
            e.E = pot.V(r0) + r0 * r0 * pot.d2V(r0) / (2.0 * (2.0 * n * n - 9.0));
            if (pot.mexican_hat) {
                const double l4 = std::pow(pot.lambda, 4);
                const double tol = 1e-12 * l4;
                e.in_hill_region = e.E > -0.25 * l4 + tol && e.E < -tol;
            } else {
                e.in_hill_region = e.E > pot.V(r0);
            }
        }
        out.push_back(e);
    }
    return out;
}

KernelResult kernel_dimension(const RadialPotentialModel& model, int n_modes) {
    KernelResult k;
    k.frequency_square = 4.0 + model.Omega() / 2.0;
    k.mismatch = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= n_modes; ++n) {
        double d = std::abs(k.frequency_square - static_cast<double>(n) * n);
        if (d < k.mismatch) {
            k.mismatch = d;
            k.mode = n;
        }
    }
    if (k.mismatch < 1e-8) {
        k.dimension = 2;
    } else {
        k.borderline = k.mismatch < 1e-4;
        k.mode = 0;
    }
    return k;
}

double jacobi_functional(const RadialPotentialModel& model, int n, double y, int panels) {
    if (panels % 2) ++panels;
    const double w = model.omega, r0 = model.r0;
    auto integrand = [&](double t) {
        // q = (r0 + y cos(n w t)) e(t), e = (cos wt, sin wt).
        const double a = r0 + y * std::cos(n * w * t);
        const double da = -y * n * w * std::sin(n * w * t);
        const double speed2 = da * da + a * a * w * w;
        return (model.E - model.pot.V(std::abs(a))) * speed2 / 2.0;
    };
    const double h = 1.0 / panels;
    double s = integrand(0.0) + integrand(1.0);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
    return s * h / 3.0;
}

std::vector<double> default_y_samples() {
    std::vector<double> y;
    const int n = 16;
    for (int i = 0; i < n; ++i) y.push_back(1e-3 * std::pow(50.0, static_cast<double>(i) / (n - 1)));
    return y;
}

namespace {

std::vector<double> fit_increment(const RadialPotentialModel& model, int n, const std::vector<double>& ys, int panels,
                                  double* rms) {
    const double J0 = jacobi_functional(model, n, 0.0, panels);
    std::vector<double> t, v;
    for (double y : ys) {
        for (double s : {y, -y}) {
            t.push_back(s);
            v.push_back(jacobi_functional(model, n, s, panels) - J0);
        }
    }
    // Scale to [-1, 1] for conditioning.
    double ymax = 0.0;
    for (double y : t) ymax = std::max(ymax, std::abs(y));
    std::vector<double> ts(t.size());
    for (size_t i = 0; i < t.size(); ++i) ts[i] = t[i] / ymax;
    auto c = fit_poly(ts, v, 6);
    double err = 0.0, vmax = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
        double p = 0.0;
        for (int j = 6; j >= 0; --j) p = p * ts[i] + c[j];
        err += (p - v[i]) * (p - v[i]);
        vmax = std::max(vmax, std::abs(v[i]));
    }
    if (rms) *rms = std::sqrt(err / ts.size()) / std::max(vmax, 1e-300);
    for (int j = 0; j <= 6; ++j) c[j] /= std::pow(ymax, j);
    return c;
}

}  // namespace

QuarticFit jacobi_quartic_fit(const RadialPotentialModel& model, int n, const std::vector<double>& y_samples, int panels) {
    QuarticFit f;
    f.coeffs = fit_increment(model, n, y_samples, panels, &f.residual);
    auto fine = fit_increment(model, n, y_samples, 2 * panels, nullptr);
    f.J0 = f.coeffs[4];
    f.J0_fine = fine[4];
    const double c4 = std::max(std::abs(f.coeffs[4]), 1e-300);
    f.rel2 = std::abs(f.coeffs[2]) / c4;
    f.rel3 = std::abs(f.coeffs[3]) / c4;
    f.degenerate = f.rel2 < 1e-6 && f.rel3 < 1e-6;
    return f;
}

double jacobi_reduced_quartic(const RadialPotentialModel& model, int n, const std::vector<double>& y_samples, int panels) {
    QuarticFit f = jacobi_quartic_fit(model, n, y_samples, panels);
    if (!f.degenerate)
        throw DegeneracyCheckFailure("quadratic or cubic term present: |c2/c4| = " + std::to_string(f.rel2) +
                                     ", |c3/c4| = " + std::to_string(f.rel3));
    return f.J0;
}

}  // namespace bifurc
