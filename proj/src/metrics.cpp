#include "tomoqubo/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <vector>

namespace tomoqubo {

ReconstructionReport make_report(std::string method, std::string scenario, const Image& recon,
                                 const Image& truth, int projections, double a, double b,
                                 std::optional<double> achieved, std::optional<double> target) {
  ReconstructionReport r;
  r.method = std::move(method);
  r.scenario = std::move(scenario);
  r.projections = projections;
  r.a = a;
  r.b = b;
  r.abs_error = tomoqubo::abs_error(recon, truth);
  r.tv_squared = tomoqubo::tv_squared(recon);
  r.tv_absolute = tomoqubo::tv_absolute(recon);
  r.achieved_energy = achieved;
  r.target_energy = target;
  r.error_free = r.abs_error == 0.0;
  return r;
}

std::string reports_to_json(std::span<const ReconstructionReport> reports) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json e;
    e["method"] = r.method;
    e["scenario"] = r.scenario;
    e["projections"] = r.projections;
    e["a"] = r.a;
    e["b"] = r.b;
    e["abs_error"] = r.abs_error;
    e["tv_squared"] = r.tv_squared;
    e["tv_absolute"] = r.tv_absolute;
    e["achieved_energy"] = r.achieved_energy ? nlohmann::ordered_json(*r.achieved_energy) : nullptr;
    e["target_energy"] = r.target_energy ? nlohmann::ordered_json(*r.target_energy) : nullptr;
    e["error_free"] = r.error_free;
    doc.push_back(std::move(e));
  }
  return doc.dump(2);
}

std::string reports_to_table(std::span<const ReconstructionReport> reports) {
  std::vector<std::string> methods;
  std::vector<std::string> scenarios;
  std::map<std::pair<std::string, std::string>, double> cells;
  for (const auto& r : reports) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
    if (std::find(scenarios.begin(), scenarios.end(), r.scenario) == scenarios.end())
      scenarios.push_back(r.scenario);
    cells[{r.scenario, r.method}] = r.abs_error;
  }

  std::size_t label_width = 8;
  for (const auto& s : scenarios) label_width = std::max(label_width, s.size());
  constexpr int kCell = 12;

  char buf[64];
  std::string out;
  out += std::string("Scenario") + std::string(label_width - 8, ' ');
  for (const auto& m : methods) {
    std::snprintf(buf, sizeof buf, " %*s", kCell, m.c_str());
    out += buf;
  }
  out += '\n';
  for (const auto& s : scenarios) {
    out += s + std::string(label_width - s.size(), ' ');
    for (const auto& m : methods) {
      const auto it = cells.find({s, m});
      if (it == cells.end())
        std::snprintf(buf, sizeof buf, " %*s", kCell, "-");
      else
        std::snprintf(buf, sizeof buf, " %*.2f", kCell, it->second);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace tomoqubo
