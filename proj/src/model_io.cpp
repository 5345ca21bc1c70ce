#include "bifurc/model_io.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include "bifurc/errors.hpp"
#include "bifurc/expr.hpp"

namespace bifurc {

using nlohmann::ordered_json;

namespace {

std::vector<std::string> eps_names(int q) {
    std::vector<std::string> v;
    for (int j = 1; j <= q; ++j) v.push_back("eps" + std::to_string(j));
    return v;
}

std::string expr_string(const ordered_json& j, const std::string& what) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number()) return j.dump();
    throw ParseError(what + ": expected an expression string");
}

const ordered_json& field(const ordered_json& doc, const char* key) {
    if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return doc.at(key);
}

int int_field(const ordered_json& doc, const char* key, int def) {
    if (!doc.contains(key)) return def;
    if (!doc.at(key).is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
    return doc.at(key).get<int>();
}

ReducedFieldModel parse_reduced(const ordered_json& doc) {
    const int q = int_field(doc, "q", 1);
    const auto& mj = field(doc, "m");
    const auto& gj = field(doc, "g");
    const auto& rj = field(doc, "r");
    if (!mj.is_array() || !gj.is_array() || !rj.is_array() || mj.size() != gj.size() || mj.size() != rj.size())
        throw ParseError("m, g and r must be arrays of equal length");
    ReducedFieldModel model;
    model.chart = parse_chart(doc.value("chart", ordered_json::object()));
    auto gvars = eps_names(q);
    gvars.push_back("x");
    gvars.push_back("y");
    const std::vector<std::string> rvars{"x", "y"};
    for (size_t i = 0; i < mj.size(); ++i) {
        FieldComponent c;
        c.m = mj[i].get<int>();
        std::vector<ordered_json> gi;
        if (gj[i].is_array())
            for (const auto& e : gj[i]) gi.push_back(e);
        else
            gi.push_back(gj[i]);
        if (static_cast<int>(gi.size()) != q) throw ParseError("each g entry needs q expressions");
        for (const auto& e : gi) {
            auto ex = std::make_shared<Expr>(expr_string(e, "g"), gvars);
            c.g.push_back([ex, q](const Eigen::VectorXd& eps, double x, double y) {
                double v[34];
                for (int j = 0; j < q; ++j) v[j] = eps[j];
                v[q] = x;
                v[q + 1] = y;
                return ex->eval(v);
            });
        }
        auto rx = std::make_shared<Expr>(expr_string(rj[i], "r"), rvars);
        c.r = [rx](double x, double y) {
            double v[2] = {x, y};
            return rx->eval(v);
        };
        model.components.push_back(std::move(c));
    }
    if (q > 32) throw ParseError("at most 32 parameters are supported");
    model.dims = ProblemDimensions{static_cast<int>(mj.size()) - 1, 1, q, model.components.front().m};
    model.validate();
    return model;
}

VersalFamily parse_versal(const ordered_json& doc) {
    VersalFamily f;
    f.m = int_field(doc, "m", 2);
    f.q = int_field(doc, "q", 2);
    if (f.m < 2) throw ParseError("m must be at least 2");
    if (f.q < 1 || f.q > 32) throw ParseError("q must be between 1 and 32");
    f.chart = parse_chart(doc.value("chart", ordered_json::object()));
    const auto& aj = field(doc, "a");
    if (!aj.is_array() || static_cast<int>(aj.size()) != 2 * f.m - 1)
        throw ParseError("a must hold 2m-1 expressions");
    auto vars = eps_names(f.q);
    vars.push_back("x");
    std::vector<std::shared_ptr<Expr>> ex;
    for (const auto& e : aj) ex.push_back(std::make_shared<Expr>(expr_string(e, "a"), vars));
    const int q = f.q;
    f.a = [ex, q](const Eigen::VectorXd& eps, double x) {
        double v[33];
        for (int j = 0; j < q; ++j) v[j] = eps[j];
        v[q] = x;
        std::vector<double> out(ex.size());
        for (size_t i = 0; i < ex.size(); ++i) out[i] = ex[i]->eval(v);
        return out;
    };
    return f;
}

AmbientSystem parse_ambient(const ordered_json& doc) {
    AmbientSystem sys;
    sys.N = int_field(doc, "N", 0);
    sys.q = int_field(doc, "q", 1);
    if (sys.N < 2 || sys.N > 64) throw ParseError("N must be between 2 and 64");
    if (sys.q < 1 || sys.q > 32) throw ParseError("q must be between 1 and 32");
    sys.chart = parse_chart(doc.value("chart", ordered_json::object()));
    const auto& Fj = field(doc, "F");
    const auto& Sj = field(doc, "S");
    if (!Fj.is_array() || static_cast<int>(Fj.size()) != sys.N || !Sj.is_array() ||
        static_cast<int>(Sj.size()) != sys.N)
        throw ParseError("F and S must hold N expressions");
    auto vars = eps_names(sys.q);
    for (int i = 1; i <= sys.N; ++i) vars.push_back("z" + std::to_string(i));
    std::vector<std::shared_ptr<Expr>> F, S;
    for (const auto& e : Fj) F.push_back(std::make_shared<Expr>(expr_string(e, "F"), vars));
    for (const auto& e : Sj) S.push_back(std::make_shared<Expr>(expr_string(e, "S"), std::vector<std::string>{"x"}));
    const int q = sys.q, N = sys.N;
    sys.F = [F, q, N](const Eigen::VectorXd& eps, const Eigen::VectorXd& z) {
        std::vector<double> v(q + N);
        for (int j = 0; j < q; ++j) v[j] = eps[j];
        for (int i = 0; i < N; ++i) v[q + i] = z[i];
        Eigen::VectorXd out(N);
        for (int i = 0; i < N; ++i) out[i] = F[i]->eval(v.data());
        return out;
    };
    sys.S = [S, N](double x) {
        Eigen::VectorXd out(N);
        for (int i = 0; i < N; ++i) out[i] = S[i]->eval(&x);
        return out;
    };
    return sys;
}

VariationalModel parse_variational(const ordered_json& doc) {
    VariationalModel vm;
    vm.m = int_field(doc, "m", 4);
    vm.chart = parse_chart(doc.value("chart", ordered_json::object()));
    const std::vector<std::string> vars{"x"};
    auto g = std::make_shared<Expr>(expr_string(field(doc, "g"), "g"), vars);
    auto r = std::make_shared<Expr>(expr_string(doc.value("r", ordered_json("1")), "r"), vars);
    vm.g = [g](double x) { return g->eval(&x); };
    vm.r = [r](double x) { return r->eval(&x); };
    return vm;
}

}  // namespace

ManifoldChart parse_chart(const ordered_json& j) {
    if (!j.is_object()) throw ParseError("chart must be an object");
    const std::string kind = j.value("kind", std::string("circle"));
    if (kind == "circle") return ManifoldChart::circle();
    if (kind == "interval") {
        if (!j.contains("lo") || !j.contains("hi")) throw ParseError("interval chart needs lo and hi");
        return ManifoldChart::interval(j.at("lo").get<double>(), j.at("hi").get<double>());
    }
    throw ParseError("unknown chart kind '" + kind + "'");
}

LoadedModel parse_model(const ordered_json& doc) {
    if (!doc.is_object()) throw ParseError("model document must be a JSON object");
    LoadedModel lm;
    lm.doc = doc;
    lm.type = doc.value("type", std::string(doc.contains("a") ? "versal" : "reduced"));
    try {
        if (lm.type == "reduced")
            lm.reduced = parse_reduced(doc);
        else if (lm.type == "versal")
            lm.versal = parse_versal(doc);
        else if (lm.type == "ambient")
            lm.ambient = parse_ambient(doc);
        else if (lm.type == "variational")
            lm.variational = parse_variational(doc);
        else
            throw ParseError("unknown model type '" + lm.type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed model: ") + e.what());
    }
    return lm;
}

LoadedModel parse_model_text(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_model(doc);
}

LoadedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_text(ss.str());
}

std::string dump_model(const LoadedModel& model) { return model.doc.dump(2); }

}  // namespace bifurc
