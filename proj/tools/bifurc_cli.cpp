#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bifurc/blowup.hpp"
#include "bifurc/branching.hpp"
#include "bifurc/chemnet.hpp"
#include "bifurc/errors.hpp"
#include "bifurc/expr.hpp"
#include "bifurc/hamiltonian.hpp"
#include "bifurc/lyapunov_schmidt.hpp"
#include "bifurc/model_io.hpp"
#include "bifurc/oracle.hpp"
#include "bifurc/resultant.hpp"
#include "json.hpp"

using namespace bifurc;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
    std::string out;
    std::string format;
    unsigned seed = 0;
    int threads = 0;
};

// Rows of a table; emitted as CSV or as a JSON array of objects.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<json>> rows;

    json to_json() const {
        json a = json::array();
        for (const auto& r : rows) {
            json o = json::object();
            for (size_t i = 0; i < header.size(); ++i) o[header[i]] = r[i];
            a.push_back(o);
        }
        return a;
    }
};

struct Result {
    json doc;
    std::optional<Table> table;
    bool prefer_csv = false;
    bool warnings = false;
};

std::string csv_cell(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "nan";
    return v.dump();
}

void emit(const Globals& g, const Result& r) {
    std::ostringstream os;
    const bool csv = g.format.empty() ? r.prefer_csv && r.table : g.format == "csv";
    if (csv) {
        if (!r.table) throw InvalidParams("this subcommand has no CSV output");
        for (size_t i = 0; i < r.table->header.size(); ++i) os << (i ? "," : "") << r.table->header[i];
        os << "\n";
        for (const auto& row : r.table->rows) {
            for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
            os << "\n";
        }
    } else if (r.doc.is_array() && r.doc.size() > 0 && r.doc.front().is_object() && r.doc.front().contains("line")) {
        for (const auto& l : r.doc) os << l["line"].dump() << "\n";
    } else {
        os << r.doc.dump(2) << "\n";
    }
    if (g.out.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(g.out);
        if (!f) throw InvalidParams("cannot write " + g.out);
        f << os.str();
    }
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            v.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw InvalidParams("not a number: '" + item + "'");
        }
    }
    return v;
}

json vec_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json strings(const std::vector<std::string>& v) {
    json a = json::array();
    for (const auto& s : v) a.push_back(s);
    return a;
}

Eigen::VectorXd direction_from_angle(int q, double theta) {
    if (q == 2) return unit_direction(theta);
    if (q == 1) {
        Eigen::VectorXd d(1);
        d << (std::cos(theta) >= 0 ? 1.0 : -1.0);
        return d;
    }
    throw UnsupportedDimension("directions by angle need q = 1 or 2");
}

Field model_field(const LoadedModel& m, int& q) {
    if (m.versal) {
        q = m.versal->q;
        return as_field(*m.versal);
    }
    if (m.reduced) {
        q = m.reduced->dims.q;
        return as_field(*m.reduced);
    }
    throw InvalidParams("model must be of type reduced or versal");
}

ExpansionData versal_expansion(const VersalFamily& f) {
    return extract_expansion(f.a, f.q, 2 * f.m - 1, 1e-3, f.chart);
}

// ---------------------------------------------------------------------------

struct DiscriminantArgs {
    int m = 2;
    std::string params;
    double tol = 1e-10;
};

Result run_discriminant(const DiscriminantArgs& a) {
    auto v = parse_list(a.params);
    auto p = DeformationParams::from_flat(a.m, v);
    Result r;
    json line = json::object();
    line["m"] = a.m;
    line["params"] = v;
    line["resultant"] = resultant(p);
    line["on_discriminant"] = is_on_discriminant(p, a.tol);
    line["common_root_distance"] = common_root_distance(p);
    r.doc = json::array({json{{"line", line}}});
    r.table = Table{{"m", "resultant", "on_discriminant", "common_root_distance"},
                    {{a.m, line["resultant"], line["on_discriminant"], line["common_root_distance"]}}};
    return r;
}

struct ClassifyArgs {
    std::string model;
    int grid = 64;
    double tol = 1e-6;
};

Result run_classify(const ClassifyArgs& a) {
    auto m = load_model(a.model);
    if (!m.versal) throw InvalidParams("classify needs a versal model");
    const auto& f = *m.versal;
    if (f.q != 2) throw UnsupportedDimension("classification is implemented for q = 2");
    auto data = versal_expansion(f);
    Table t{{"theta", "x", "kind", "stratum", "case", "r0", "r1", "r2", "r3"}, {}};
    const auto& ch = f.chart;
    for (int i = 0; i < a.grid; ++i) {
        const double th = i * kTwoPi / a.grid;
        for (int k = 0; k < a.grid; ++k) {
            const double x = ch.periodic() ? ch.lo + k * ch.period() / a.grid
                                           : ch.lo + k * (ch.hi - ch.lo) / std::max(1, a.grid - 1);
            auto cp = f.m == 2 ? classify_point_m2(data, unit_direction(th), x, a.tol)
                               : classify_point_m(f.m, data, unit_direction(th), x, a.tol);
            std::vector<json> row{th, x, to_string(cp.kind), to_string(cp.stratum), to_string(cp.mcase)};
            for (int j = 0; j < 4; ++j) row.push_back(j < static_cast<int>(cp.residuals.size()) ? json(cp.residuals[j]) : json());
            t.rows.push_back(std::move(row));
        }
    }
    Result r;
    r.table = t;
    r.doc = json{{"m", f.m}, {"grid", a.grid}, {"points", t.to_json()}};
    r.prefer_csv = true;
    return r;
}

struct ArcsArgs {
    std::string model;
    std::string rho;
};

json point_json(const ClassifiedPoint& p) {
    return json{{"theta", p.theta}, {"x", p.x},           {"kind", to_string(p.kind)},
                {"stratum", to_string(p.stratum)},          {"case", to_string(p.mcase)},
                {"residuals", p.residuals}};
}

Result run_arcs(const ArcsArgs& a, int threads) {
    auto m = load_model(a.model);
    if (!m.versal) throw InvalidParams("arcs needs a versal model");
    auto data = versal_expansion(*m.versal);
    ArcOptions opt;
    opt.threads = threads;
    opt.trace.x_periodic = m.versal->chart.periodic();
    opt.trace.x_lo = m.versal->chart.lo;
    opt.trace.x_hi = m.versal->chart.hi;
    if (!a.rho.empty()) opt.rho_schedule = parse_list(a.rho);
    auto an = analyse_arcs(m.versal->m, data, opt);
    Result r;
    json folds = json::array(), points = json::array(), arcs = json::array();
    for (const auto& f : an.folds)
        folds.push_back({{"theta", f.theta}, {"x", f.x}, {"second_derivative", f.second_derivative},
                         {"unresolved", f.unresolved}});
    for (const auto& p : an.points) points.push_back(point_json(p));
    Table t{{"arc", "kind", "branch", "rho", "theta", "x", "eps1", "eps2"}, {}};
    for (size_t i = 0; i < an.arcs.size(); ++i) {
        const auto& arc = an.arcs[i];
        json br = json::array();
        for (size_t b = 0; b < arc.branches.size(); ++b) {
            json pl = json::array();
            for (const auto& s : arc.branches[b]) {
                pl.push_back({{"rho", s.rho}, {"theta", s.theta}, {"x", s.x}, {"eps", vec_json(s.eps)}});
                t.rows.push_back({static_cast<int>(i), to_string(arc.kind), static_cast<int>(b), s.rho, s.theta, s.x,
                                  s.eps.size() > 0 ? json(s.eps[0]) : json(), s.eps.size() > 1 ? json(s.eps[1]) : json()});
            }
            br.push_back(pl);
        }
        arcs.push_back({{"kind", to_string(arc.kind)},
                        {"theta0", arc.theta0},
                        {"x0", arc.x0},
                        {"origin_direction", vec_json(arc.origin_direction)},
                        {"contact_order", std::to_string(arc.contact_num) + "/" + std::to_string(arc.contact_den)},
                        {"fitted_exponent", arc.fitted_exponent},
                        {"sides", arc.sides},
                        {"flags", strings(arc.flags)},
                        {"branches", br}});
        if (!arc.flags.empty()) r.warnings = true;
    }
    if (!an.flags.empty()) r.warnings = true;
    r.doc = json{{"m", an.m}, {"folds", folds}, {"points", points}, {"arcs", arcs}, {"flags", strings(an.flags)}};
    r.table = t;
    return r;
}

struct ReduceArgs {
    std::string system;
    int samples = 256;
    int extract = 16;
};

Result run_reduce(const ReduceArgs& a, int threads) {
    auto m = load_model(a.system);
    if (!m.ambient) throw InvalidParams("reduce needs an ambient system");
    LSOptions opt;
    opt.n_samples = a.samples;
    opt.threads = threads;
    auto red = build_reduction(*m.ambient, opt);
    Result r;
    json samples = json::array();
    Table t{{"x", "kernel_dim", "sigma_residual", "basis_condition", "m1", "r1", "g1", "m2", "r2", "g2"}, {}};
    const auto& frames = red.frames();
    const int stride = std::max<int>(1, static_cast<int>(frames.size()) / std::max(1, a.extract));
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m.ambient->q);
    std::vector<std::string> warnings = red.warnings();
    for (size_t i = 0; i < frames.size(); ++i) {
        const auto& f = frames[i];
        const double smax = f.singular_values.size() ? f.singular_values.maxCoeff() : 0.0;
        int kdim = 0;
        for (int k = 0; k < f.singular_values.size(); ++k) kdim += f.singular_values[k] <= opt.kernel_tol * smax;
        const double sigma = red.solve_slave(f, zero, 0.0).norm();
        json s{{"x", f.x}, {"kernel_dim", kdim}, {"sigma_residual", sigma}, {"basis_condition", f.basis_condition}};
        std::vector<json> row{f.x, kdim, sigma, f.basis_condition};
        if (static_cast<int>(i) % stride == 0) {
            try {
                auto cd = extract_branch_data(red, f.x);
                json comps = json::array();
                for (const auto& c : cd) {
                    comps.push_back({{"m", c.m}, {"r", c.r}, {"g", vec_json(c.g)}});
                    row.insert(row.end(), {c.m, c.r, c.g.size() ? json(c.g[0]) : json()});
                }
                s["components"] = comps;
            } catch (const FlatComponent& e) {
                warnings.push_back(std::string("x = ") + std::to_string(f.x) + ": " + e.what());
            }
        }
        row.resize(t.header.size());
        t.rows.push_back(row);
        samples.push_back(s);
    }
    r.warnings = !warnings.empty();
    r.doc = json{{"N", m.ambient->N}, {"q", m.ambient->q}, {"samples", samples}, {"warnings", strings(warnings)}};
    r.table = t;
    return r;
}

struct BranchArgs {
    std::string model;
    std::string variant = "general";
    std::string direction;
    int grid = 2048;
};

Result run_branch_points(const BranchArgs& a, int threads) {
    auto m = load_model(a.model);
    BranchOptions opt;
    opt.grid = a.grid;
    opt.threads = threads;
    std::vector<BranchPoint> pts;
    const auto variant = parse_variant(a.variant);
    if (m.variational) {
        if (variant != BranchVariant::Variational) throw VariantMismatch("variational models need --variant variational");
        pts = find_branch_points(*m.variational, opt);
    } else if (m.reduced) {
        Eigen::VectorXd dir = Eigen::VectorXd::Zero(m.reduced->dims.q);
        if (a.direction.empty()) {
            dir[0] = 1.0;
        } else {
            auto v = parse_list(a.direction);
            if (static_cast<int>(v.size()) != dir.size()) throw InvalidParams("direction needs q entries");
            for (int i = 0; i < dir.size(); ++i) dir[i] = v[i];
        }
        pts = find_branch_points(*m.reduced, variant, dir, opt);
    } else {
        throw InvalidParams("branch-points needs a reduced or variational model");
    }
    Result r;
    json a_out = json::array();
    Table t{{"x0", "status", "eps_sign", "derivative", "condition", "flags"}, {}};
    for (const auto& p : pts) {
        a_out.push_back({{"x0", p.x0},
                         {"direction", vec_json(p.direction)},
                         {"eps_sign", p.eps_sign},
                         {"status", to_string(p.status)},
                         {"derivative", p.derivative},
                         {"condition", p.condition},
                         {"flags", strings(p.flags)}});
        std::string fl;
        for (const auto& f : p.flags) fl += (fl.empty() ? "" : ";") + f;
        t.rows.push_back({p.x0, to_string(p.status), p.eps_sign, p.derivative, p.condition, fl});
        if (!p.flags.empty() || p.status == BranchStatus::DegenerateZero) r.warnings = true;
    }
    r.doc = a_out;
    r.table = t;
    return r;
}

struct CountArgs {
    std::string model;
    double rho = 1e-2;
    int angles = 720;
    double y_max = 0.3;
};

Result run_count(const CountArgs& a, int threads) {
    auto m = load_model(a.model);
    int q = 0;
    Field field = model_field(m, q);
    const ManifoldChart chart = m.versal ? m.versal->chart : m.reduced->chart;
    Window w{chart.lo, chart.hi, chart.periodic(), -a.y_max, a.y_max};
    Result r;
    Table t{{"theta", "count"}, {}};
    json jumps = json::array();
    bool inconsistent = false;
    if (q == 2) {
        CountMapOptions opt;
        opt.n_angles = a.angles;
        opt.threads = threads;
        auto cm = region_count_map(field, a.rho, w, opt);
        for (size_t i = 0; i < cm.angles.size(); ++i) t.rows.push_back({cm.angles[i], cm.counts[i]});
        for (const auto& j : cm.jumps) jumps.push_back({{"theta", j.theta}, {"from", j.from}, {"to", j.to}});
        inconsistent = cm.inconsistent;
    } else if (q == 1) {
        for (double th : {0.0, std::numbers::pi}) {
            auto sol = count_solutions(field, a.rho * direction_from_angle(1, th), w);
            t.rows.push_back({th, sol.count()});
        }
    } else {
        throw UnsupportedDimension("count maps need q = 1 or 2");
    }
    r.warnings = inconsistent;
    r.doc = json{{"rho", a.rho}, {"counts", t.to_json()}, {"jumps", jumps}, {"inconsistent", inconsistent}};
    r.table = t;
    r.prefer_csv = true;
    return r;
}

struct TraceArgs {
    std::string model;
    double x0 = 0.0;
    double dir = 0.0;
    int y_sign = 0;
};

Result run_trace(const TraceArgs& a) {
    auto m = load_model(a.model);
    int q = 0;
    Field field = model_field(m, q);
    BranchTraceOptions opt;
    opt.y_sign = a.y_sign;
    auto tr = trace_branch(field, a.x0, direction_from_angle(q, a.dir), opt);
    Result r;
    Table t{{"t", "tau", "x", "y"}, {}};
    for (const auto& s : tr.samples) t.rows.push_back({s.t, s.tau, s.x, s.y});
    r.doc = json{{"x0", tr.x0},
                 {"x0_extrapolated", tr.x0_extrapolated},
                 {"alpha", {tr.alpha_eps, tr.alpha_x, tr.alpha_y}},
                 {"samples", t.to_json()}};
    r.table = t;
    r.prefer_csv = true;
    return r;
}

struct HamiltonianArgs {
    double lambda = 1.0;
    int n_lo = 2;
    int n_hi = 8;
    bool quartic = false;
    double r0 = 0.0;
};

Result run_hamiltonian(const HamiltonianArgs& a) {
    auto pot = RadialPotential::mexican(a.lambda);
    Result r;
    json levels = json::array();
    Table t{{"n", "valid", "r0", "E", "in_hill_region", "kernel_dim", "c2_rel", "c3_rel", "J0"}, {}};
    for (const auto& l : degenerate_energies(pot, a.n_lo, a.n_hi)) {
        json o{{"n", l.n}, {"valid", l.valid}, {"r0", l.r0}, {"E", l.E}, {"in_hill_region", l.in_hill_region}};
        std::vector<json> row{l.n, l.valid, l.r0, l.E, l.in_hill_region, json(), json(), json(), json()};
        if (!l.reason.empty()) o["reason"] = l.reason;
        if (l.valid) {
            auto model = RadialPotentialModel::circular(pot, l.r0);
            auto k = kernel_dimension(model);
            o["kernel_dimension"] = k.dimension;
            row[5] = k.dimension;
            if (a.quartic) {
                auto fit = jacobi_quartic_fit(model, l.n, default_y_samples());
                o["quartic"] = {{"c2_rel", fit.rel2}, {"c3_rel", fit.rel3}, {"J0", fit.J0}, {"degenerate", fit.degenerate}};
                row[6] = fit.rel2;
                row[7] = fit.rel3;
                row[8] = fit.J0;
                if (!fit.degenerate) r.warnings = true;
            }
        }
        levels.push_back(o);
        t.rows.push_back(row);
    }
    r.doc = json{{"lambda", a.lambda}, {"levels", levels}};
    if (a.r0 > 0) {
        auto model = RadialPotentialModel::circular(pot, a.r0);
        auto k = kernel_dimension(model);
        r.doc["orbit"] = {{"r0", a.r0},
                          {"E", model.E},
                          {"Omega", model.Omega()},
                          {"kernel_dimension", k.dimension},
                          {"mode", k.mode},
                          {"frequency_square", k.frequency_square}};
    }
    r.table = t;
    return r;
}

struct ChemArgs {
    std::string v = "(x-1)^2";
    std::vector<std::string> phi;
    std::string direction;
    bool pipeline = false;
    int grid = 2048;
};

Perturbation parse_phi(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) parts.push_back(item);
    if (parts.size() != 3) throw InvalidParams("--phi needs three ';'-separated expressions in z1, z2, z3");
    const std::vector<std::string> vars{"z1", "z2", "z3"};
    auto e0 = std::make_shared<Expr>(parts[0], vars), e1 = std::make_shared<Expr>(parts[1], vars),
         e2 = std::make_shared<Expr>(parts[2], vars);
    return [e0, e1, e2](const Eigen::Vector3d& z) {
        return Eigen::Vector3d(e0->eval(z.data()), e1->eval(z.data()), e2->eval(z.data()));
    };
}

Result run_chemnet(const ChemArgs& a, int threads) {
    ChemNetworkModel model;
    auto vx = std::make_shared<Expr>(a.v, std::vector<std::string>{"x"});
    model.v = [vx](double x) { return vx->eval(&x); };
    if (a.phi.empty()) throw InvalidParams("at least one --phi is required");
    for (const auto& p : a.phi) model.phi.push_back(parse_phi(p));
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(static_cast<int>(model.phi.size()));
    if (a.direction.empty()) {
        dir[0] = 1.0;
    } else {
        auto v = parse_list(a.direction);
        if (v.size() != model.phi.size()) throw InvalidParams("direction needs one entry per --phi");
        for (int i = 0; i < dir.size(); ++i) dir[i] = v[i];
    }
    Result r;
    auto reg = chem_regularity(model);
    json doc{{"stoichiometry_ok", check_stoichiometry()},
             {"regularity",
              {{"regular", reg.regular}, {"corank", reg.corank}, {"x1_star", reg.x1_star}, {"dv_star", reg.dv_star},
               {"consistent", reg.consistent}}}};
    Table t{{"source", "lambda", "status"}, {}};
    if (!reg.consistent) r.warnings = true;
    if (!reg.regular) {
        auto bf = chem_branch_function(model, dir, a.grid);
        doc["branch_function"] = {{"zeros", bf.zeros},
                                  {"degenerate_zeros", bf.degenerate_zeros},
                                  {"identically_zero", bf.identically_zero}};
        for (double z : bf.zeros) t.rows.push_back({"closed_form", z, "simple"});
        for (double z : bf.degenerate_zeros) t.rows.push_back({"closed_form", z, "degenerate"});
        if (bf.identically_zero || !bf.degenerate_zeros.empty()) r.warnings = true;
        if (a.pipeline) {
            auto pipe = chem_pipeline(model, dir, a.grid, threads);
            json comps = json::array(), pts = json::array();
            for (const auto& c : pipe.sample_data) comps.push_back({{"m", c.m}, {"r", c.r}, {"g", vec_json(c.g)}});
            for (const auto& p : pipe.points) {
                pts.push_back({{"lambda", p.x0}, {"status", to_string(p.status)}, {"condition", p.condition}});
                t.rows.push_back({"pipeline", p.x0, to_string(p.status)});
            }
            doc["pipeline"] = {{"components", comps}, {"branch_points", pts}};
        }
    }
    r.doc = doc;
    r.table = t;
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bifurcation analysis near normally degenerate equilibrium manifolds"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--out", g.out, "Write output to this file");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", g.seed, "Random seed (recorded; all computations are deterministic)");
    app.add_option("--threads", g.threads, "Worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);

    auto* disc = app.add_subcommand("discriminant", "Resultant and discriminant membership");
    auto* disc_eval = disc->add_subcommand("eval", "Evaluate R_m at a parameter vector");
    disc->require_subcommand(1);
    DiscriminantArgs da;
    disc_eval->add_option("--m", da.m, "Degeneracy degree")->required();
    disc_eval->add_option("--params", da.params, "a0,..,a_{m-1},abar0,..,abar_{m-2}")->required();
    disc_eval->add_option("--tol", da.tol, "Membership tolerance");

    auto* cls = app.add_subcommand("classify", "Classify a grid of (theta, x) points");
    ClassifyArgs ca;
    cls->add_option("--model", ca.model, "Versal model file")->required()->check(CLI::ExistingFile);
    cls->add_option("--grid", ca.grid, "Grid size per axis")->check(CLI::PositiveNumber);
    cls->add_option("--tol", ca.tol, "Zero tolerance");

    auto* arcs = app.add_subcommand("arcs", "Bifurcation arcs of a versal model");
    ArcsArgs aa;
    arcs->add_option("--model", aa.model, "Versal model file")->required()->check(CLI::ExistingFile);
    arcs->add_option("--rho", aa.rho, "Comma-separated radius schedule");

    auto* reduce = app.add_subcommand("reduce", "Lyapunov-Schmidt reduction of an ambient system");
    ReduceArgs ra;
    reduce->add_option("--system", ra.system, "Ambient system file")->required()->check(CLI::ExistingFile);
    reduce->add_option("--samples", ra.samples, "Samples along S")->check(CLI::PositiveNumber);
    reduce->add_option("--extract", ra.extract, "Samples with extracted branch data")->check(CLI::NonNegativeNumber);

    auto* bp = app.add_subcommand("branch-points", "Branch points of a reduced or variational model");
    BranchArgs ba;
    bp->add_option("--model", ba.model, "Model file")->required()->check(CLI::ExistingFile);
    bp->add_option("--variant", ba.variant, "general, uniform or variational")
        ->check(CLI::IsMember({"general", "uniform", "variational"}));
    bp->add_option("--direction", ba.direction, "Comma-separated parameter direction");
    bp->add_option("--grid", ba.grid, "Zero-search grid")->check(CLI::PositiveNumber);

    auto* count = app.add_subcommand("count", "Solution counts on a circle of radius rho");
    CountArgs co;
    count->add_option("--model", co.model, "Reduced or versal model file")->required()->check(CLI::ExistingFile);
    count->add_option("--rho", co.rho, "Parameter radius")->check(CLI::PositiveNumber);
    count->add_option("--angles", co.angles, "Number of directions")->check(CLI::PositiveNumber);
    count->add_option("--ymax", co.y_max, "Half-width of the y window")->check(CLI::PositiveNumber);

    auto* trace = app.add_subcommand("trace", "Trace a solution branch from a branch point");
    TraceArgs ta;
    trace->add_option("--model", ta.model, "Reduced or versal model file")->required()->check(CLI::ExistingFile);
    trace->add_option("--x0", ta.x0, "Branch point")->required();
    trace->add_option("--dir", ta.dir, "Direction angle (q = 1: sign of cos)");
    trace->add_option("--ysign", ta.y_sign, "Sign of y on the traced branch (0: any)");

    auto* ham = app.add_subcommand("hamiltonian", "Degenerate levels of the Mexican-hat potential");
    HamiltonianArgs ha;
    ham->add_option("--lambda", ha.lambda, "Potential parameter")->check(CLI::PositiveNumber);
    ham->add_option("--n-lo", ha.n_lo, "Lowest mode");
    ham->add_option("--n-hi", ha.n_hi, "Highest mode");
    ham->add_flag("--quartic", ha.quartic, "Fit the reduced Jacobi quartic at each level");
    ham->add_option("--r0", ha.r0, "Also report the circular orbit of this radius");

    auto* chem = app.add_subcommand("chemnet", "Reaction network with a degenerate equilibrium curve");
    ChemArgs ch;
    chem->add_option("--v", ch.v, "Rate function v in x");
    chem->add_option("--phi", ch.phi, "Perturbation 'e1;e2;e3' in z1, z2, z3 (repeat per parameter)");
    chem->add_option("--direction", ch.direction, "Comma-separated parameter direction");
    chem->add_flag("--pipeline", ch.pipeline, "Also run the generic reduction pipeline");
    chem->add_option("--grid", ch.grid, "Zero-search grid")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (g.threads > 0) set_default_threads(g.threads);
        Result r;
        if (disc->parsed())
            r = run_discriminant(da);
        else if (cls->parsed())
            r = run_classify(ca);
        else if (arcs->parsed())
            r = run_arcs(aa, g.threads);
        else if (reduce->parsed())
            r = run_reduce(ra, g.threads);
        else if (bp->parsed())
            r = run_branch_points(ba, g.threads);
        else if (count->parsed())
            r = run_count(co, g.threads);
        else if (trace->parsed())
            r = run_trace(ta);
        else if (ham->parsed())
            r = run_hamiltonian(ha);
        else
            r = run_chemnet(ch, g.threads);
        emit(g, r);
        if (r.warnings) {
            std::cerr << "warning: hypothesis violations or degenerate cases reported in the output\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
