#include "bifurc/util.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <thread>

namespace bifurc {

namespace {
std::atomic<int> g_threads{0};
}

double wrap_2pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}

double angle_diff(double a, double b) {
    double d = wrap_2pi(a - b);
    if (d > std::numbers::pi) d -= kTwoPi;
    return d;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit out;
    const size_t n = x.size();
    if (n < 2) return out;
    double sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / n, my = sy / n, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    out.slope = sxx > 0 ? sxy / sxx : 0.0;
    out.intercept = my - out.slope * mx;
    double ss = 0;
    for (size_t i = 0; i < n; ++i) {
        double r = y[i] - out.intercept - out.slope * x[i];
        ss += r * r;
    }
    out.rms = std::sqrt(ss / n);
    return out;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0 || y[i] == 0.0) continue;
        lx.push_back(std::log(std::abs(x[i])));
        ly.push_back(std::log(std::abs(y[i])));
    }
    return fit_line(lx, ly);
}

std::vector<double> fit_poly(const std::vector<double>& t, const std::vector<double>& v, int degree) {
    Eigen::MatrixXd A(t.size(), degree + 1);
    Eigen::VectorXd b(t.size());
    for (size_t i = 0; i < t.size(); ++i) {
        double p = 1.0;
        for (int j = 0; j <= degree; ++j) {
            A(i, j) = p;
            p *= t[i];
        }
        b(i) = v[i];
    }
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    return std::vector<double>(c.data(), c.data() + c.size());
}

double diff1(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

double diff2(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

int default_threads() {
    int n = g_threads.load();
    if (n > 0) return n;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_default_threads(int n) { g_threads.store(n); }

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 0) threads = default_threads();
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n || failed.load()) break;
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) err = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace bifurc
