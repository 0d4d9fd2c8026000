// scenario.hpp - declarative description of a computation: structure, grids,
// requested outputs, numeric options.
//
// Scenario files are JSON with // comments allowed. Keys carry their units
// (thickness_um, temperature_K, energy grids in eV, positions in um) so a
// file can never be mis-read in the wrong unit system. Example:
//
//   {
//     "layers": [
//       {"n": [2.5, 0.4], "thickness": "semi-infinite", "temperature_K": 300},
//       {"n": [1.2, 0.2], "thickness_um": 10.0,          "temperature_K": 200},
//       {"n": [1.5, 0.5], "thickness": "semi-infinite", "temperature_K": 100}
//     ],
//     "energy_grid_ev":   {"min": 0.02, "max": 0.16, "count": 200},
//     "position_grid_um": {"min": -5.0, "max": 15.0, "count": 400},
//     "outputs": ["ldos", "t_eff"],
//     "quadrature_rtol": 1e-8,
//     "threads": 4
//   }
//
// Grids also accept {"values": [...]} with an explicit list.

#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfed/errors.hpp"
#include "qfed/quadrature.hpp"
#include "qfed/stack.hpp"

namespace qfed {

// One CSV column name per quantity; groups in scenario files expand to these.
enum class Quantity {
  LdosNormalized,  // units of 2/(pi c S)
  LdosRaw,         // 1/(eV um)
  LdosElectric,    // units of 2/(pi c S)
  LdosMagnetic,
  NTotal,
  NPlus,
  NMinus,
  Poynting,
  EnergyDensity,
  TEffTotal,
  TEffPlus,
  TEffMinus,
  CommutatorNormPlus,
  CommutatorNormMinus,
};

inline const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::LdosNormalized: return "ldos";
    case Quantity::LdosRaw: return "ldos_raw";
    case Quantity::LdosElectric: return "ldos_electric";
    case Quantity::LdosMagnetic: return "ldos_magnetic";
    case Quantity::NTotal: return "n_total";
    case Quantity::NPlus: return "n_plus";
    case Quantity::NMinus: return "n_minus";
    case Quantity::Poynting: return "poynting";
    case Quantity::EnergyDensity: return "energy_density";
    case Quantity::TEffTotal: return "t_eff_total";
    case Quantity::TEffPlus: return "t_eff_plus";
    case Quantity::TEffMinus: return "t_eff_minus";
    case Quantity::CommutatorNormPlus: return "commutator_norm_plus";
    case Quantity::CommutatorNormMinus: return "commutator_norm_minus";
  }
  return "?";
}

struct Scenario {
  std::vector<Layer> layers;
  std::vector<double> energies_ev;
  std::vector<double> positions_um;
  std::vector<Quantity> outputs;  // sorted by column name
  double quadrature_rtol = 1e-8;
  int threads = 0;  // 0 = pick automatically

  LayerStack stack() const { return LayerStack(layers); }
};

namespace scenario_detail {

inline std::vector<Quantity> expand_output_token(const std::string& token) {
  if (token == "ldos") return {Quantity::LdosNormalized};
  if (token == "ldos_raw") return {Quantity::LdosRaw};
  if (token == "ldos_em_split") return {Quantity::LdosElectric, Quantity::LdosMagnetic};
  if (token == "ldos_electric") return {Quantity::LdosElectric};
  if (token == "ldos_magnetic") return {Quantity::LdosMagnetic};
  if (token == "n_total") return {Quantity::NTotal};
  if (token == "n_plus") return {Quantity::NPlus};
  if (token == "n_minus") return {Quantity::NMinus};
  if (token == "poynting") return {Quantity::Poynting};
  if (token == "energy_density") return {Quantity::EnergyDensity};
  if (token == "t_eff") return {Quantity::TEffTotal, Quantity::TEffPlus, Quantity::TEffMinus};
  if (token == "t_eff_total") return {Quantity::TEffTotal};
  if (token == "t_eff_plus") return {Quantity::TEffPlus};
  if (token == "t_eff_minus") return {Quantity::TEffMinus};
  if (token == "commutator_norm")
    return {Quantity::CommutatorNormPlus, Quantity::CommutatorNormMinus};
  if (token == "commutator_norm_plus") return {Quantity::CommutatorNormPlus};
  if (token == "commutator_norm_minus") return {Quantity::CommutatorNormMinus};
  throw ScenarioError("outputs: unknown quantity \"" + token + "\"");
}

inline double require_number(const nlohmann::json& node, const std::string& field) {
  if (!node.contains(field) || !node[field].is_number())
    throw ScenarioError(field + ": expected a number");
  return node[field].get<double>();
}

}  // namespace scenario_detail

inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/true,
                                 /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }

  Scenario s;

  if (!root.contains("layers") || !root["layers"].is_array() || root["layers"].size() < 2)
    throw ScenarioError("layers: expected an array of at least two layers");
  std::size_t index = 0;
  for (const auto& jl : root["layers"]) {
    const std::string where = "layers[" + std::to_string(index) + "]";
    Layer l;
    if (!jl.contains("n") || !jl["n"].is_array() || jl["n"].size() != 2 ||
        !jl["n"][0].is_number() || !jl["n"][1].is_number())
      throw ScenarioError(where + ".n: expected [n_real, n_imag]");
    l.refractive_index = complexd(jl["n"][0].get<double>(), jl["n"][1].get<double>());
    const bool has_marker = jl.contains("thickness");
    const bool has_um = jl.contains("thickness_um");
    if (has_marker == has_um)
      throw ScenarioError(where + ": give exactly one of thickness_um or "
                                  "thickness: \"semi-infinite\"");
    if (has_marker) {
      if (!jl["thickness"].is_string() || jl["thickness"].get<std::string>() != "semi-infinite")
        throw ScenarioError(where + ".thickness: only the marker \"semi-infinite\" is allowed");
    } else {
      if (!jl["thickness_um"].is_number())
        throw ScenarioError(where + ".thickness_um: expected a number");
      l.thickness_um = jl["thickness_um"].get<double>();
    }
    if (!jl.contains("temperature_K") || !jl["temperature_K"].is_number())
      throw ScenarioError(where + ".temperature_K: expected a number");
    l.temperature_k = jl["temperature_K"].get<double>();
    s.layers.push_back(l);
    ++index;
  }
  // model invariants, reported with the scenario field name
  try {
    (void)LayerStack(s.layers);
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }

  auto parse_grid = [&](const char* field, bool is_energy) -> std::vector<double> {
    if (!root.contains(field)) throw ScenarioError(std::string(field) + ": missing");
    const nlohmann::json& g = root[field];
    if (!g.is_object()) throw ScenarioError(std::string(field) + ": expected an object");
    try {
      if (g.contains("values")) {
        if (!g["values"].is_array())
          throw ScenarioError(std::string(field) + ".values: expected an array of numbers");
        auto v = g["values"].get<std::vector<double>>();
        return is_energy ? EnergyGrid::from_values(v).values()
                         : PositionGrid::from_values(v).values();
      }
      const double vmin = scenario_detail::require_number(g, "min");
      const double vmax = scenario_detail::require_number(g, "max");
      const double count_d = scenario_detail::require_number(g, "count");
      const auto count = static_cast<std::size_t>(count_d);
      if (count_d != static_cast<double>(count))
        throw ScenarioError(std::string(field) + ".count: expected a positive integer");
      return is_energy ? EnergyGrid::uniform(vmin, vmax, count).values()
                       : PositionGrid::uniform(vmin, vmax, count).values();
    } catch (const std::invalid_argument& e) {
      throw ScenarioError(std::string(field) + ": " + e.what());
    }
  };
  s.energies_ev = parse_grid("energy_grid_ev", true);
  s.positions_um = parse_grid("position_grid_um", false);

  if (!root.contains("outputs") || !root["outputs"].is_array() || root["outputs"].empty())
    throw ScenarioError("outputs: expected a non-empty array of quantity names");
  std::set<Quantity> wanted;
  for (const auto& jt : root["outputs"]) {
    if (!jt.is_string()) throw ScenarioError("outputs: entries must be strings");
    for (Quantity q : scenario_detail::expand_output_token(jt.get<std::string>()))
      wanted.insert(q);
  }
  s.outputs.assign(wanted.begin(), wanted.end());
  std::sort(s.outputs.begin(), s.outputs.end(), [](Quantity a, Quantity b) {
    return std::string(quantity_name(a)) < quantity_name(b);
  });

  if (root.contains("quadrature_rtol")) {
    if (!root["quadrature_rtol"].is_number() || !(root["quadrature_rtol"].get<double>() > 0.0))
      throw ScenarioError("quadrature_rtol: expected a positive number");
    s.quadrature_rtol = root["quadrature_rtol"].get<double>();
  }
  if (root.contains("threads")) {
    if (!root["threads"].is_number_integer() || root["threads"].get<int>() < 0)
      throw ScenarioError("threads: expected a non-negative integer");
    s.threads = root["threads"].get<int>();
  }
  return s;
}

// Canonical JSON form; re-parses to an identical model.
inline std::string serialize_scenario(const Scenario& s) {
  nlohmann::json root;
  for (const Layer& l : s.layers) {
    nlohmann::json jl;
    jl["n"] = {l.refractive_index.real(), l.refractive_index.imag()};
    if (l.semi_infinite())
      jl["thickness"] = "semi-infinite";
    else
      jl["thickness_um"] = *l.thickness_um;
    jl["temperature_K"] = l.temperature_k;
    root["layers"].push_back(jl);
  }
  root["energy_grid_ev"]["values"] = s.energies_ev;
  root["position_grid_um"]["values"] = s.positions_um;
  for (Quantity q : s.outputs) root["outputs"].push_back(quantity_name(q));
  root["quadrature_rtol"] = s.quadrature_rtol;
  root["threads"] = s.threads;
  return root.dump(2) + "\n";
}

}  // namespace qfed
