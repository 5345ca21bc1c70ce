#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace bifurc {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduce an angle to [0, 2pi).
double wrap_2pi(double a);

// Signed difference a - b reduced to (-pi, pi].
double angle_diff(double a, double b);

// Least-squares line through (x, y); returns slope, intercept and rms residual.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log|y| against log|x|.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

// Least-squares polynomial coefficients c[0] + c[1] t + ... of the given degree.
std::vector<double> fit_poly(const std::vector<double>& t, const std::vector<double>& v, int degree);

// Fourth-order central differences.
double diff1(const std::function<double(double)>& f, double x, double h);
double diff2(const std::function<double(double)>& f, double x, double h);

// Run body(i) for i in [0, n) on up to `threads` workers. Each index is visited once.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

// Worker count used when a caller passes 0.
int default_threads();
void set_default_threads(int n);

}  // namespace bifurc
