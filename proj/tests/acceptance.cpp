#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bifurc/blowup.hpp"
#include "bifurc/branching.hpp"
#include "bifurc/chemnet.hpp"
#include "bifurc/errors.hpp"
#include "bifurc/hamiltonian.hpp"
#include "bifurc/lyapunov_schmidt.hpp"
#include "bifurc/oracle.hpp"
#include "bifurc/resultant.hpp"
#include "bifurc/synthetic.hpp"

using namespace bifurc;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::vector<std::string> info;
};

struct Criterion {
    int id;
    std::string title;
    double budget;  // seconds
    bool expected_failure;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

template <class... T>
std::string fmtn(const char* f, T... a) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

Eigen::VectorXd scalar(double v) {
    Eigen::VectorXd e(1);
    e << v;
    return e;
}

// Counts with consecutive duplicates removed.
std::vector<int> pattern(const std::vector<int>& counts) {
    std::vector<int> out;
    for (int c : counts)
        if (out.empty() || out.back() != c) out.push_back(c);
    return out;
}

bool contains_run(const std::vector<int>& p, const std::vector<int>& run) {
    if (p.size() < run.size()) return false;
    for (size_t i = 0; i + run.size() <= p.size(); ++i) {
        bool ok = true;
        for (size_t k = 0; k < run.size(); ++k) ok = ok && p[i + k] == run[k];
        if (ok) return true;
    }
    return false;
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

// Counts of the map restricted to |theta - theta0| <= span.
std::vector<int> sector_counts(const CountMap& cm, double theta0, double span) {
    std::vector<int> out;
    std::vector<std::pair<double, int>> sel;
    for (size_t i = 0; i < cm.angles.size(); ++i) {
        double d = angle_diff(cm.angles[i], theta0);
        if (std::abs(d) <= span) sel.push_back({d, cm.counts[i]});
    }
    std::sort(sel.begin(), sel.end());
    for (auto& s : sel) out.push_back(s.second);
    return out;
}

DeformationParams random_params(int m, std::mt19937& rng) {
    std::uniform_real_distribution<double> U(-1, 1);
    std::vector<double> a(m), ab(m - 1);
    for (double& v : a) v = U(rng);
    for (double& v : ab) v = U(rng);
    return {m, a, ab};
}

// Parameters whose two polynomials share the real root y0.
DeformationParams common_root_params(int m, std::mt19937& rng) {
    std::uniform_real_distribution<double> U(-1, 1);
    auto p = random_params(m, rng);
    const double y0 = U(rng);
    double s = 0.0, yp = y0;
    for (int i = 1; i < m; ++i, yp *= y0) s += p.a[i] * yp;
    p.a[0] = -s;
    s = 0.0;
    yp = y0;
    for (int j = 1; j < m - 1; ++j, yp *= y0) s += p.abar[j] * yp;
    p.abar[0] = -s - std::pow(y0, m);
    return p;
}

// ---------------------------------------------------------------------------

Outcome c1() {
    Outcome o;
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> U(-10, 10);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double a0 = U(rng), a1 = U(rng), ab = U(rng);
        double closed = a0 * a0 + a1 * a1 * ab;
        double R = resultant(DeformationParams::m2(a0, a1, ab));
        double scale = a0 * a0 + a1 * a1 * std::abs(ab);
        worst = std::max(worst, std::abs(R - closed) / std::max(scale, 1e-300));
    }
    o.info.push_back(fmt("max relative error %.3g over 1000 points", worst));
    o.pass = worst < 1e-12;
    return o;
}

Outcome c2() {
    Outcome o;
    o.pass = true;
    for (int m : {3, 4}) {
        auto rep = verify_structure(m, 20, 5);
        for (const auto& c : rep.checks) {
            o.info.push_back(fmtn("m=%d %s residual %.3g %s", m, c.name.c_str(), c.residual, c.pass ? "ok" : "bad"));
            const bool diagnostic = c.name.find("slope") != std::string::npos;
            o.pass = o.pass && c.pass && (diagnostic || c.residual < 1e-6);
        }
        o.pass = o.pass && rep.pass() && rep.checks.size() >= 3;
    }
    return o;
}

Outcome c3() {
    Outcome o;
    o.pass = true;
    const double tol = 1e-9;
    for (int m : {2, 3, 4}) {
        std::mt19937 rng(100 + m);
        int agree = 0, total = 0, band = 0, on = 0;
        for (int i = 0; i < 500; ++i) {
            auto p = i % 2 ? common_root_params(m, rng) : random_params(m, rng);
            const double dist = common_root_distance(p);
            bool oracle_on;
            if (dist < 1e-6)
                oracle_on = true;
            else if (dist > 1e-3)
                oracle_on = false;
            else {
                ++band;
                continue;
            }
            ++total;
            on += oracle_on;
            agree += is_on_discriminant(p, tol) == oracle_on;
        }
        o.info.push_back(fmtn("m=%d agreement %d/%d (on discriminant %d, in band %d)", m, agree, total, on, band));
        o.pass = o.pass && agree == total && on > 0 && on < total;
    }
    return o;
}

Outcome c4() {
    Outcome o;
    o.pass = true;
    auto data = classification_fixture();
    auto an = analyse_arcs(2, data);
    int found = 0, expected_points = 0;
    double worst = 0.0;
    for (const auto& e : classification_fixture_points()) {
        auto cp = classify_point_m2(data, unit_direction(e.theta), e.x);
        bool ok = cp.kind == e.kind;
        if (e.kind == PointKind::Interior) {
            ++found;
        } else {
            ++expected_points;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& p : an.points) {
                if (p.kind != e.kind) continue;
                double d = std::max(std::abs(angle_diff(p.theta, e.theta)), std::abs(angle_diff(p.x, e.x)));
                best = std::min(best, d);
            }
            worst = std::max(worst, best);
            ok = ok && best < 1e-6;
            found += ok;
        }
        o.pass = o.pass && ok;
    }
    int located = 0;
    for (const auto& p : an.points) located += p.kind == PointKind::End || p.kind == PointKind::Intersection;
    o.info.push_back(fmtn("%d fixture points classified, %d end/intersection points located (expected %d)", found,
                          located, expected_points));
    o.info.push_back(fmt("worst (theta, x) error %.3g", worst));
    o.pass = o.pass && located == expected_points;
    return o;
}

Outcome c5() {
    Outcome o;
    const double rho = 1e-2, tol = kTwoPi * std::sqrt(rho);
    auto an = analyse_arcs(2, synthetic_expansion(2));
    CountMapOptions opt;
    opt.n_angles = 360;
    auto cm = region_count_map(as_field(synthetic_versal(2)), rho, Window{}, opt);
    o.info.push_back("count sequence " + join(pattern(cm.counts)));
    bool cusp_ok = true, end_ok = true;
    int cusps = 0, ends = 0;
    for (const auto& arc : an.arcs) {
        if (arc.kind == ArcKind::FoldPairCusp) {
            ++cusps;
            auto p = pattern(sector_counts(cm, arc.theta0, tol));
            bool ok = contains_run(p, {0, 2, 4}) || contains_run(p, {4, 2, 0});
            o.info.push_back(fmtn("cusp at theta %.4f: local sequence %s", arc.theta0, join(p).c_str()));
            cusp_ok = cusp_ok && ok;
        } else if (arc.kind == ArcKind::EndArc) {
            ++ends;
            bool ok = false;
            for (double t0 : {arc.theta0, arc.theta0 + kPi}) {
                for (const auto& j : cm.jumps) {
                    if (std::abs(angle_diff(j.theta, t0)) > tol) continue;
                    if (std::min(j.from, j.to) == 0 && std::max(j.from, j.to) == 2) {
                        ok = true;
                        o.info.push_back(fmtn("end arc at theta %.4f: %d->%d jump at %.4f", t0, j.from, j.to, j.theta));
                    }
                }
            }
            end_ok = end_ok && ok;
        }
    }
    double worst = 0.0;
    for (const auto& j : cm.jumps) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& arc : an.arcs)
            for (double t0 : {arc.theta0, arc.theta0 + kPi}) best = std::min(best, std::abs(angle_diff(j.theta, t0)));
        worst = std::max(worst, best);
    }
    o.info.push_back(fmtn("%zu jumps, max distance to an arc tangent %.4f (limit %.4f)", cm.jumps.size(), worst, tol));
    o.pass = cusps > 0 && ends > 0 && cusp_ok && end_ok && worst <= tol && !cm.inconsistent;
    return o;
}

CountMap local_map(int m, double rho, double x0, double theta0) {
    Window w{x0 - 0.5, x0 + 0.5, false, -0.3, 0.3};
    CountMapOptions opt;
    opt.n_angles = 121;
    opt.theta_lo = theta0 - 0.3;
    opt.theta_hi = theta0 + 0.3;
    return region_count_map(as_field(synthetic_versal(m)), rho, w, opt);
}

Outcome c6() {
    Outcome o;
    const double rho = 1e-3;
    bool hyst = false, ends = false;
    {
        auto an = analyse_arcs(3, synthetic_expansion(3));
        for (const auto& arc : an.arcs) {
            if (arc.kind != ArcKind::HysteresisArc) continue;
            auto cm = local_map(3, rho, arc.x0, arc.theta0);
            auto p = pattern(cm.counts);
            o.info.push_back(fmtn("m=3 hysteresis pair at theta %.4f, x %.4f: local sequence %s", arc.theta0, arc.x0,
                                  join(p).c_str()));
            hyst = p == std::vector<int>{1, 3, 1} && arc.branches.size() == 2;
            break;
        }
    }
    {
        auto an = analyse_arcs(4, synthetic_expansion(4));
        for (const auto& arc : an.arcs) {
            if (arc.kind != ArcKind::EndArc) continue;
            bool both = true;
            for (double t0 : {arc.theta0, wrap_2pi(arc.theta0 + kPi)}) {
                auto cm = local_map(4, rho, arc.x0, t0);
                auto p = pattern(cm.counts);
                bool ok = p.size() == 2 && std::min(p[0], p[1]) == 0 && std::max(p[0], p[1]) == 2;
                std::string js;
                for (const auto& j : cm.jumps) js += fmtn(" %d->%d at %.4f", j.from, j.to, j.theta);
                o.info.push_back(fmtn("m=4 end arc along theta %.4f, x %.4f: sequence %s;%s", t0, arc.x0,
                                      join(p).c_str(), js.c_str()));
                both = both && ok;
            }
            ends = both;
            break;
        }
    }
    o.pass = hyst && ends;
    return o;
}

// Contact exponents from the approach of the fold-arc jumps to the tangent direction as rho shrinks,
// one per side of theta0 that carries a jump at every level. The two largest rho are left out of the fit.
std::vector<double> oracle_contact(int m, double theta0, double span) {
    std::vector<double> rs, dl, dr;
    for (int k = 0; k < 7; ++k) {
        const double rho = 1e-2 * std::pow(0.25, k);
        const double ym = std::min(0.3, 20 * std::pow(rho, 1.0 / m));
        Window w{0.0, kTwoPi, true, -ym, ym};
        CountMapOptions opt;
        opt.n_angles = 61;
        opt.theta_lo = theta0 - span;
        opt.theta_hi = theta0 + span;
        opt.refine_tol = 1e-6;
        auto cm = region_count_map(as_field(synthetic_versal(m)), rho, w, opt);
        double l = std::numeric_limits<double>::infinity(), r = l;
        for (const auto& j : cm.jumps) {
            double d = angle_diff(j.theta, theta0);
            if (d < 0)
                l = std::min(l, -d);
            else
                r = std::min(r, d);
        }
        if (k < 2) continue;
        rs.push_back(rho);
        dl.push_back(l);
        dr.push_back(r);
    }
    std::vector<double> out;
    for (const auto* d : {&dl, &dr}) {
        bool all = true;
        for (double v : *d) all = all && std::isfinite(v);
        if (all) out.push_back(1 + fit_loglog(rs, *d).slope);
    }
    return out;
}

Outcome c7() {
    Outcome o;
    o.pass = true;
    const double spans[] = {0.3, 0.5, 0.8};
    for (int m : {2, 3, 4}) {
        const double target = double(m + 1) / m;
        auto an = analyse_arcs(m, synthetic_expansion(m));
        double theta0 = 0.0;
        bool have = false;
        for (const auto& arc : an.arcs) {
            if (arc.kind != ArcKind::FoldPairCusp && arc.kind != ArcKind::FoldArc) continue;
            bool ok = std::abs(arc.fitted_exponent - target) <= 0.05 * target;
            o.info.push_back(fmtn("m=%d fold arc at theta %.4f: blow-up fit %.4f (target %.4f)", m, arc.theta0,
                                  arc.fitted_exponent, target));
            o.pass = o.pass && ok;
            if (!have) theta0 = arc.theta0;
            have = true;
        }
        auto fits = oracle_contact(m, theta0, spans[m - 2]);
        std::string fs;
        for (double f : fits) {
            fs += fmt(" %.4f", f);
            o.pass = o.pass && std::abs(f - target) <= 0.05 * target;
        }
        o.info.push_back(fmtn("m=%d oracle fit at theta %.4f:%s (%zu side(s))", m, theta0, fs.c_str(), fits.size()));
        o.pass = o.pass && have && !fits.empty();
    }
    return o;
}

Outcome c8() {
    Outcome o;
    o.pass = true;
    bool eps_y = true;
    for (int m : {2, 3}) {
        BranchTraceOptions opt;
        opt.y_sign = 1;
        auto tr = trace_branch(as_field(scaling_model(m)), 0.0, scalar(-1.0), opt);
        o.info.push_back(fmtn("m=%d exponents (%.4f, %.4f, %.4f), target (%d, %d, 1)", m, tr.alpha_eps, tr.alpha_x,
                              tr.alpha_y, m, m + 1));
        bool e = std::abs(tr.alpha_eps - m) <= 0.05 * m && std::abs(tr.alpha_y - 1) <= 0.05;
        bool x = std::abs(tr.alpha_x - (m + 1)) <= 0.05 * (m + 1);
        eps_y = eps_y && e;
        o.pass = o.pass && e && x;
    }
    o.info.push_back(std::string("eps and y exponents within 5%: ") + (eps_y ? "yes" : "no"));
    return o;
}

Outcome c9() {
    Outcome o;
    auto model = example1_model();
    auto pts = find_branch_points(model, BranchVariant::General, scalar(1.0));
    std::set<int> hit;
    bool ok = pts.size() == 2;
    for (const auto& p : pts) {
        int which = std::abs(angle_diff(p.x0, 0.0)) < 1e-6 ? 0 : std::abs(angle_diff(p.x0, kPi)) < 1e-6 ? 1 : -1;
        ok = ok && which >= 0 && p.status == BranchStatus::Sufficient;
        if (which >= 0) hit.insert(which);
        bool traced = false;
        const std::vector<int> signs = p.eps_sign == 0 ? std::vector<int>{1, -1} : std::vector<int>{p.eps_sign};
        for (int sgn : signs) {
            try {
                auto tr = trace_branch(as_field(model), p.x0, scalar(double(sgn)));
                double err = std::abs(angle_diff(tr.x0_extrapolated, p.x0));
                o.info.push_back(fmtn("branch point %.6f (%s): traced along eps sign %d, %zu samples, x0 error %.2g",
                                      p.x0, to_string(p.status), sgn, tr.samples.size(), err));
                traced = traced || err < 1e-3;
            } catch (const NoBranch&) {
            }
        }
        ok = ok && traced;
    }
    ok = ok && hit.size() == 2;
    auto deg = find_branch_points(example2_model(), BranchVariant::General, scalar(1.0));
    bool tagged = deg.size() == 1 && std::abs(angle_diff(deg[0].x0, 0.0)) < 1e-4 &&
                  deg[0].status == BranchStatus::DegenerateZero;
    if (!deg.empty())
        o.info.push_back(fmtn("degenerate example: %zu point(s), x0 %.3g, status %s", deg.size(), deg[0].x0,
                              to_string(deg[0].status)));
    o.pass = ok && tagged;
    return o;
}

Outcome c10() {
    Outcome o;
    auto hat = RadialPotential::mexican(1.0);
    const double r4 = degenerate_radius(hat, 4);
    const bool radius = r4 * r4 == 1.1 || std::abs(r4 * r4 - 1.1) <= 2e-16;
    const double r3 = degenerate_radius(hat, 3);
    auto levels = degenerate_energies(hat, 2, 6);
    const EnergyLevel *l3 = nullptr, *l4 = nullptr;
    for (const auto& l : levels) {
        if (l.n == 3) l3 = &l;
        if (l.n == 4) l4 = &l;
    }
    bool energies = l3 && l4 && l4->valid && std::abs(l4->E + 0.1925) <= 1e-10 && l4->in_hill_region &&
                    std::abs(l3->E) <= 1e-10 && !l3->in_hill_region;
    if (l3 && l4) {
        o.info.push_back(fmtn("r0^2(n=4) = %.17g, r0^2(n=3) = %.17g", r4 * r4, r3 * r3));
        o.info.push_back(fmtn("E4 = %.12f (Hill %d), E3 = %.3g (Hill %d)", l4->E, l4->in_hill_region, l3->E,
                              l3->in_hill_region));
    }
    auto k4 = kernel_dimension(RadialPotentialModel::circular(hat, r4));
    auto kg = kernel_dimension(RadialPotentialModel::circular(hat, 1.5));
    o.info.push_back(fmtn("kernel dimension %d at the n=4 level, %d at r0 = 1.5", k4.dimension, kg.dimension));
    o.pass = radius && energies && k4.dimension == 2 && kg.dimension == 1;
    return o;
}

Outcome c11() {
    Outcome o;
    auto hat = RadialPotential::mexican(1.0);
    auto ys = default_y_samples();
    auto fit = jacobi_quartic_fit(RadialPotentialModel::circular(hat, std::sqrt(1.1)), 4, ys);
    o.info.push_back(fmtn("n=4 level r0^2 = 1.1: |c2/c4| = %.3g, |c3/c4| = %.3g, J0 = %.6g", fit.rel2, fit.rel3,
                          fit.J0));
    auto alt = jacobi_quartic_fit(RadialPotentialModel::circular(hat, std::sqrt(1.2)), 4, ys);
    o.info.push_back(fmtn("radial second-variation level r0^2 = 1.2: |c2/c4| = %.3g, |c3/c4| = %.3g, J0 = %.6g",
                          alt.rel2, alt.rel3, alt.J0));
    o.pass = fit.rel2 < 1e-6 && fit.rel3 < 1e-6;
    return o;
}

ChemNetworkModel network(std::function<double(double)> v) {
    ChemNetworkModel m;
    m.v = std::move(v);
    m.phi = {[](const Eigen::Vector3d& z) { return Eigen::Vector3d(std::sin(z[2]), 0.3, 0.0); }};
    return m;
}

Outcome c12() {
    Outcome o;
    bool flips = true;
    int n = 0;
    for (int i = -20; i <= 20; ++i) {
        std::vector<double> mus{i / 20.0};
        if (i == 0) mus = {0.0, 1e-3, -1e-3};
        for (double mu : mus) {
            const double s = mu >= 0 ? 1.0 : -1.0;
            auto model = network([mu, s](double x) { return (x - 1) * (mu + s * (x - 1) * (x - 1)); });
            auto reg = chem_regularity(model);
            bool expect = mu != 0.0;
            flips = flips && reg.regular == expect && reg.consistent;
            ++n;
        }
    }
    o.info.push_back(fmtn("regularity matches v'(x1*) != 0 on %d family members: %s", n, flips ? "yes" : "no"));

    auto model = network([](double x) { return (x - 1) * (x - 1); });
    auto bf = chem_branch_function(model, scalar(1.0));
    auto pipe = chem_pipeline(model, scalar(1.0));
    bool mok = pipe.sample_data.size() == 2 && pipe.sample_data[1].m == 2;
    if (pipe.sample_data.size() == 2)
        o.info.push_back(fmtn("extracted orders m = (%d, %d)", pipe.sample_data[0].m, pipe.sample_data[1].m));
    bool match = bf.zeros.size() == pipe.points.size() && !bf.zeros.empty();
    double worst = 0.0;
    for (size_t i = 0; match && i < bf.zeros.size(); ++i) worst = std::max(worst, std::abs(bf.zeros[i] - pipe.points[i].x0));
    o.info.push_back(fmtn("%zu closed-form zeros, %zu pipeline points, max difference %.3g", bf.zeros.size(),
                          pipe.points.size(), worst));
    o.pass = flips && mok && match && worst <= 1e-5;
    return o;
}

struct ConeModel {
    std::string name;
    int m;
    VersalFamily family;
    ExpansionData data;
};

// Oracle zeros along fixed directions, counted in the rescaled variable y / rho^(1/m) and extrapolated to rho -> 0.
Outcome c13() {
    Outcome o;
    const double tol = 1e-6;
    std::vector<ConeModel> models;
    for (int m : {2, 3, 4}) models.push_back({"synthetic m=" + std::to_string(m), m, synthetic_versal(m), synthetic_expansion(m)});
    {
        VersalFamily fx;
        fx.m = 2;
        fx.q = 2;
        auto data = classification_fixture();
        fx.a = [data](const Eigen::VectorXd& e, double x) {
            Eigen::VectorXd v = data.reconstruct(e, x);
            return std::vector<double>(v.data(), v.data() + v.size());
        };
        fx.chart = ManifoldChart::circle();
        models.push_back({"classification fixture", 2, fx, data});
    }
    const std::vector<double> ts{4e-3, 2e-3, 1e-3, 5e-4};
    o.pass = true;
    for (const auto& M : models) {
        int checked = 0, on_cone = 0;
        double worst = 0.0;
        for (int k = 0; k < 24; ++k) {
            const double theta = (k + 0.5) * kTwoPi / 24;
            const Eigen::VectorXd s = unit_direction(theta);
            std::vector<SolutionSet> sols;
            for (double t : ts) {
                const double rho = std::pow(t, M.m);
                Field scaled = [&M, rho, t](const Eigen::VectorXd& e, double x, double yh) -> Eigen::Vector2d {
                    return M.family.field(rho * e, x, t * yh) / rho;
                };
                sols.push_back(count_solutions(scaled, s, Window{0.0, kTwoPi, true, -5.0, 5.0}));
            }
            bool same = true;
            for (const auto& sol : sols) same = same && sol.count() == sols[0].count() && !sol.too_many;
            if (!same) continue;
            for (const auto& z0 : sols[0].zeros) {
                std::vector<double> xs{z0.x};
                Zero cur = z0;
                bool chain = true;
                for (size_t i = 1; i < sols.size() && chain; ++i) {
                    double bd = std::numeric_limits<double>::infinity();
                    Zero next;
                    for (const auto& z : sols[i].zeros) {
                        double d = std::abs(angle_diff(z.x, cur.x)) + std::abs(z.y - cur.y);
                        if (d < bd) {
                            bd = d;
                            next = z;
                        }
                    }
                    chain = bd < 0.1;
                    cur = next;
                    xs.push_back(xs.back() + angle_diff(next.x, xs.back()));
                }
                if (!chain) continue;
                const double x0 = wrap_2pi(fit_poly(ts, xs, 3)[0]);
                const Eigen::VectorXd bs = M.data.bs(x0, s);
                const double scale = std::max(1.0, M.data.b(x0).norm());
                double res;
                if (M.m == 2)
                    res = std::max(std::abs(bs[0]), std::max(bs[2], 0.0)) / scale;
                else
                    res = std::abs(bs[0]) / scale;
                ++checked;
                worst = std::max(worst, res);
                on_cone += res <= 10 * tol;
            }
        }
        o.info.push_back(fmtn("%s: %d extrapolated branch points, %d on the tangent cone, worst residual %.3g",
                              M.name.c_str(), checked, on_cone, worst));
        o.pass = o.pass && checked > 0 && on_cone == checked;
    }
    return o;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "resultant closed form", 1, false, c1},
        {2, "resultant structure for m = 3, 4", 5, false, c2},
        {3, "discriminant oracle equivalence", 30, false, c3},
        {4, "classification of constructed points", 5, false, c4},
        {5, "fold-pair and end-arc count patterns (m = 2)", 120, false, c5},
        {6, "hysteresis (m = 3) and end arcs (m = 4)", 240, false, c6},
        {7, "contact orders", 600, false, c7},
        {8, "branch scaling exponents", 60, true, c8},
        {9, "branching conditions on the worked examples", 30, false, c9},
        {10, "Mexican hat degenerate levels", 10, false, c10},
        {11, "Jacobi quartic degeneracy at the n = 4 level", 60, true, c11},
        {12, "chemical network regularity and branch points", 60, false, c12},
        {13, "tangent-cone necessity", 300, false, c13},
    };
    int unexpected = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.info.push_back(std::string("exception: ") + e.what());
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_budget = dt <= c.budget;
        if (!in_budget) o.info.push_back(fmtn("runtime %.1f s exceeds budget %.0f s", dt, c.budget));
        const bool pass = o.pass && in_budget;
        std::printf("[%s] %d %s (%.2f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(), dt,
                    c.expected_failure ? (pass ? " unexpected pass" : " expected failure") : "");
        for (const auto& line : o.info) std::printf("    %s\n", line.c_str());
        std::fflush(stdout);
        if (pass == c.expected_failure) ++unexpected;
    }
    std::printf("%s\n", unexpected ? "acceptance: unexpected results" : "acceptance: all results as expected");
    return unexpected ? 1 : 0;
}
