#include "bifurc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bifurc/errors.hpp"

namespace bifurc {

namespace {

double xdist(const Window& w, double a, double b) {
    double d = a - b;
    if (w.x_periodic) {
        double per = w.x_hi - w.x_lo;
        d = std::fmod(d, per);
        if (d > per / 2) d -= per;
        if (d < -per / 2) d += per;
    }
    return d;
}

double reduce_x(const Window& w, double x) {
    if (!w.x_periodic) return x;
    double per = w.x_hi - w.x_lo;
    double r = std::fmod(x - w.x_lo, per);
    if (r < 0) r += per;
    return w.x_lo + r;
}

Eigen::Matrix2d jacobian(const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& G, const Eigen::Vector2d& u) {
    Eigen::Matrix2d J;
    for (int k = 0; k < 2; ++k) {
        double h = 1e-7 * (1.0 + std::abs(u[k]));
        Eigen::Vector2d e = Eigen::Vector2d::Zero();
        e[k] = h;
        J.col(k) = (G(u + e) - G(u - e)) / (2 * h);
    }
    return J;
}

// Newton on F, optionally deflated by previously found zeros.
bool newton(const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& F, Eigen::Vector2d& u,
            const std::vector<Eigen::Vector2d>& deflate, const Window& w, const CountOptions& opt) {
    auto G = [&](const Eigen::Vector2d& v) -> Eigen::Vector2d {
        Eigen::Vector2d r = F(v);
        for (const auto& z : deflate) {
            Eigen::Vector2d d(xdist(w, v[0], z[0]), v[1] - z[1]);
            r *= 1.0 / d.squaredNorm() + 1.0;
        }
        return r;
    };
    const double cap = 0.25 * w.size();
    for (int it = 0; it < opt.max_iter; ++it) {
        Eigen::Vector2d r = G(u);
        if (!r.allFinite()) return false;
        Eigen::Matrix2d J = jacobian(G, u);
        Eigen::FullPivLU<Eigen::Matrix2d> lu(J);
        if (!lu.isInvertible()) return false;
        Eigen::Vector2d d = lu.solve(r);
        if (!d.allFinite()) return false;
        if (d.norm() > cap) d *= cap / d.norm();
        u -= d;
        if (d.norm() < opt.newton_tol * (1.0 + u.norm())) break;
    }
    // Polish on the undeflated field.
    for (int it = 0; it < 5; ++it) {
        Eigen::Vector2d r = F(u);
        Eigen::Matrix2d J = jacobian(F, u);
        Eigen::FullPivLU<Eigen::Matrix2d> lu(J);
        if (!lu.isInvertible()) break;
        Eigen::Vector2d d = lu.solve(r);
        if (!d.allFinite() || d.norm() > 1e-3 * w.size()) break;
        u -= d;
        if (d.norm() < 1e-15) break;
    }
    return F(u).norm() < 1e-10;
}

}  // namespace

SolutionSet count_solutions(const Field& field, const Eigen::VectorXd& eps, const Window& w, const CountOptions& opt) {
    if (opt.nx < 50 || opt.ny < 50) throw InvalidParams("oracle grid must be at least 50 x 50");
    SolutionSet out;
    out.eps = eps;
    out.dedup_radius = opt.dedup > 0 ? opt.dedup : 1e-6 * w.size();
    const int nx = opt.nx, ny = opt.ny;
    const double dxs = (w.x_hi - w.x_lo) / (w.x_periodic ? nx : nx - 1);
    const double dys = (w.y_hi - w.y_lo) / (ny - 1);
    std::vector<double> N(static_cast<size_t>(nx) * ny);
    auto at = [&](int i, int j) -> double& { return N[static_cast<size_t>(i) * ny + j]; };
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) at(i, j) = field(eps, w.x_lo + i * dxs, w.y_lo + j * dys).norm();

    std::vector<Eigen::Vector2d> seeds;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            double v = at(i, j);
            bool minimum = true;
            for (int di = -1; di <= 1 && minimum; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (!di && !dj) continue;
                    int ii = i + di, jj = j + dj;
                    if (jj < 0 || jj >= ny) continue;
                    if (w.x_periodic) {
                        ii = (ii + nx) % nx;
                    } else if (ii < 0 || ii >= nx) {
                        continue;
                    }
                    double u = at(ii, jj);
                    // Strict on one side so that plateaus yield a single seed.
                    if (u < v || (u == v && (di < 0 || (di == 0 && dj < 0)))) {
                        minimum = false;
                        break;
                    }
                }
            }
            if (minimum) seeds.emplace_back(w.x_lo + i * dxs, w.y_lo + j * dys);
        }
    }

    auto F = [&](const Eigen::Vector2d& u) { return field(eps, u[0], u[1]); };
    auto inside = [&](const Eigen::Vector2d& u) {
        if (u[1] < w.y_lo || u[1] > w.y_hi) return false;
        return w.x_periodic || (u[0] >= w.x_lo && u[0] <= w.x_hi);
    };
    std::vector<std::vector<Eigen::Vector2d>> found(seeds.size());
    parallel_for(static_cast<int>(seeds.size()), opt.threads, [&](int k) {
        std::vector<Eigen::Vector2d> local;
        for (int pass = 0; pass < 3; ++pass) {
            Eigen::Vector2d u = seeds[k];
            if (!newton(F, u, local, w, opt)) break;
            if (!inside(u)) break;
            u[0] = reduce_x(w, u[0]);
            bool dup = false;
            for (const auto& z : local)
                if (std::hypot(xdist(w, u[0], z[0]), u[1] - z[1]) < out.dedup_radius) dup = true;
            if (dup) break;
            local.push_back(u);
        }
        found[k] = std::move(local);
    });
    std::vector<Eigen::Vector2d> all;
    for (const auto& f : found) {
        for (const auto& u : f) {
            bool dup = false;
            for (const auto& z : all)
                if (std::hypot(xdist(w, u[0], z[0]), u[1] - z[1]) < out.dedup_radius) dup = true;
            if (!dup) all.push_back(u);
        }
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]); });
    for (const auto& u : all) out.zeros.push_back({u[0], u[1], F(u).norm()});
    out.too_many = out.zeros.size() > 32;
    return out;
}

CountMap region_count_map(const Field& field, double rho, const Window& w, const CountMapOptions& opt) {
    CountMap cm;
    cm.rho = rho;
    const bool full = opt.theta_hi - opt.theta_lo >= kTwoPi - 1e-12;
    const int n = opt.n_angles;
    const double dth = (opt.theta_hi - opt.theta_lo) / (full ? n : n - 1);
    cm.angles.resize(n);
    cm.counts.resize(n);
    auto count_at = [&](double th) {
        Eigen::VectorXd e(2);
        e << rho * std::cos(th), rho * std::sin(th);
        return count_solutions(field, e, w, opt.count).count();
    };
    parallel_for(n, opt.threads, [&](int j) {
        cm.angles[j] = opt.theta_lo + j * dth;
        cm.counts[j] = count_at(cm.angles[j]);
    });
    std::vector<int> idx;
    for (int j = 0; j + 1 < n + (full ? 1 : 0); ++j)
        if (cm.counts[j] != cm.counts[(j + 1) % n]) idx.push_back(j);
    cm.jumps.resize(idx.size());
    parallel_for(static_cast<int>(idx.size()), opt.threads, [&](int k) {
        int j = idx[k];
        double lo = cm.angles[j], hi = lo + dth;
        int clo = cm.counts[j], chi = cm.counts[(j + 1) % n];
        while (hi - lo > opt.refine_tol) {
            double mid = 0.5 * (lo + hi);
            if (count_at(mid) == clo)
                lo = mid;
            else
                hi = mid;
        }
        cm.jumps[k] = Jump{wrap_2pi(0.5 * (lo + hi)), clo, chi};
    });
    for (const auto& j : cm.jumps)
        if (j.odd()) cm.inconsistent = true;
    return cm;
}

BranchTrace trace_branch(const Field& field, double x0, const Eigen::VectorXd& direction, const BranchTraceOptions& opt) {
    BranchTrace bt;
    bt.x0 = x0;
    Window w{x0 - opt.x_halfwidth, x0 + opt.x_halfwidth, false, -opt.y_max, opt.y_max};
    CountOptions co;
    co.threads = 1;
    auto sol = count_solutions(field, opt.tau_min * direction, w, co);
    const Zero* start = nullptr;
    for (const auto& z : sol.zeros) {
        if (std::abs(z.y) < 1e-14) continue;
        if (opt.y_sign != 0 && (z.y > 0) != (opt.y_sign > 0)) continue;
        if (!start || std::abs(z.x - x0) < std::abs(start->x - x0)) start = &z;
    }
    if (!start) throw NoBranch("no zero near x0 = " + std::to_string(x0) + " at the smallest parameter");

    auto G = [&](const Eigen::Vector3d& u) { return field(u[0] * direction, u[1], u[2]); };
    auto jac = [&](const Eigen::Vector3d& u) {
        Eigen::Matrix<double, 2, 3> J;
        for (int k = 0; k < 3; ++k) {
            double h = 1e-8 * (1.0 + std::abs(u[k]));
            Eigen::Vector3d e = Eigen::Vector3d::Zero();
            e[k] = h;
            J.col(k) = (G(u + e) - G(u - e)) / (2 * h);
        }
        return J;
    };
    auto tangent = [&](const Eigen::Vector3d& u, const Eigen::Vector3d& prev) {
        auto J = jac(u);
        Eigen::Vector3d t = Eigen::Vector3d(J.row(0)).cross(Eigen::Vector3d(J.row(1)));
        t.normalize();
        if (t.dot(prev) < 0) t = -t;
        return t;
    };
    Eigen::Vector3d u(opt.tau_min, start->x, start->y);
    Eigen::Vector3d t = tangent(u, Eigen::Vector3d(1, 0, 0));
    auto record = [&](const Eigen::Vector3d& v) {
        bt.samples.push_back({std::abs(v[2]), v[0], v[0] * direction, v[1], v[2]});
    };
    record(u);
    double ds = 0.2 * std::abs(u[2]);
    int ok_run = 0;
    for (int step = 0; step < opt.max_steps; ++step) {
        Eigen::Vector3d pred = u + ds * t;
        Eigen::Vector3d v = pred;
        bool conv = false;
        for (int it = 0; it < 15; ++it) {
            Eigen::Vector3d r;
            r.head<2>() = G(v);
            r[2] = t.dot(v - pred);
            Eigen::Matrix3d J;
            J.topRows<2>() = jac(v);
            J.row(2) = t.transpose();
            Eigen::Vector3d d = J.fullPivLu().solve(r);
            if (!d.allFinite()) break;
            v -= d;
            if (d.norm() < 1e-13 * (1.0 + v.norm())) {
                conv = G(v).norm() < 1e-10;
                break;
            }
        }
        if (!conv || (v - pred).norm() > 0.5 * ds) {
            ds *= 0.5;
            ok_run = 0;
            if (ds < 1e-14) break;
            continue;
        }
        Eigen::Vector3d tn = tangent(v, t);
        u = v;
        t = tn;
        if (u[0] <= 0 || std::abs(u[2]) > opt.y_max) break;
        record(u);
        if (u[0] > opt.tau_max) break;
        if (++ok_run >= 3) {
            ds *= 2.0;
            ok_run = 0;
        }
    }
    std::vector<double> ts, taus, dxv, ys, tq, xq;
    for (const auto& s : bt.samples) {
        if (s.tau < opt.tau_min * (1 - 1e-9) || s.tau > opt.tau_max) continue;
        ts.push_back(s.t);
        taus.push_back(s.tau);
        dxv.push_back(s.x - x0);
        ys.push_back(s.y);
        tq.push_back(s.t);
        xq.push_back(s.x);
    }
    bt.alpha_eps = fit_loglog(ts, taus).slope;
    bt.alpha_x = fit_loglog(ts, dxv).slope;
    bt.alpha_y = fit_loglog(ts, ys).slope;
    if (tq.size() >= 3) bt.x0_extrapolated = fit_poly(tq, xq, 2)[0];
    return bt;
}

const char* to_string(PairingReport::Status s) {
    switch (s) {
        case PairingReport::Status::Paired: return "Paired";
        case PairingReport::Status::NotFound: return "NotFound";
        default: return "Empty";
    }
}

PairingReport kappa_pairing(const SolutionSet& sol, double tol) {
    PairingReport rep;
    std::vector<Zero> pos, neg;
    for (const auto& z : sol.zeros) (z.y > 0 ? pos : neg).push_back(z);
    if (sol.zeros.size() < 4 || pos.empty() || neg.empty()) return rep;
    std::vector<bool> used(neg.size(), false);
    for (const auto& p : pos) {
        int best = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < neg.size(); ++k) {
            if (used[k]) continue;
            double d = std::abs(p.x - neg[k].x) + std::abs(p.y + neg[k].y);
            if (d < bd) {
                bd = d;
                best = static_cast<int>(k);
            }
        }
        if (best < 0) break;
        used[best] = true;
        rep.x_mismatch = std::max(rep.x_mismatch, std::abs(p.x - neg[best].x));
        rep.y_reflection = std::max(rep.y_reflection, std::abs(p.y + neg[best].y));
    }
    rep.status = (pos.size() == neg.size() && rep.x_mismatch < tol && rep.y_reflection < tol)
                     ? PairingReport::Status::Paired
                     : PairingReport::Status::NotFound;
    return rep;
}

double kappa_coincidence(const SolutionSet& sol) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : sol.zeros)
        for (const auto& b : sol.zeros)
            if (a.y > 0 && b.y < 0) best = std::min(best, std::abs(a.x - b.x) + std::abs(a.y + b.y));
    return best;
}

}  // namespace bifurc

namespace bifurc {

Field as_field(const VersalFamily& family) {
    return [family](const Eigen::VectorXd& eps, double x, double y) { return family.field(eps, x, y); };
}

Field as_field(const ReducedFieldModel& model) {
    if (model.components.size() != 2) throw UnsupportedDimension("oracle fields have two components");
    return [model](const Eigen::VectorXd& eps, double x, double y) {
        Eigen::VectorXd v = eval_reduced_field(model, eps, x, y);
        return Eigen::Vector2d(v[0], v[1]);
    };
}

}  // namespace bifurc
