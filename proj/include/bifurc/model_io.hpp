#pragma once

#include <optional>
#include <string>

#include "bifurc/branching.hpp"
#include "bifurc/deformation.hpp"
#include "bifurc/lyapunov_schmidt.hpp"
#include "json.hpp"

namespace bifurc {

// Model documents:
//   reduced:     {"type":"reduced","q":1,"m":[2,3],"g":[["1"],["sin(x)"]],"r":["1","1"],"chart":{...}}
//   versal:      {"type":"versal","m":2,"q":2,"a":[...2m-1 expressions in eps1..epsq, x],"chart":{...}}
//   ambient:     {"type":"ambient","N":3,"q":1,"F":[... in eps1..epsq, z1..zN],"S":[... in x],"chart":{...}}
//   variational: {"type":"variational","m":4,"g":"cos(x)","r":"1","chart":{...}}
// chart: {"kind":"circle"} or {"kind":"interval","lo":a,"hi":b}; circle is the default.
struct LoadedModel {
    std::string type;
    nlohmann::ordered_json doc;
    std::optional<ReducedFieldModel> reduced;
    std::optional<VersalFamily> versal;
    std::optional<AmbientSystem> ambient;
    std::optional<VariationalModel> variational;
};

LoadedModel parse_model(const nlohmann::ordered_json& doc);
LoadedModel parse_model_text(const std::string& text);
LoadedModel load_model(const std::string& path);
std::string dump_model(const LoadedModel& model);

ManifoldChart parse_chart(const nlohmann::ordered_json& j);

}  // namespace bifurc
