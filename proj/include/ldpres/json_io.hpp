// Copyright 2026 The ldpres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "ldpres/error.hpp"
#include "ldpres/incidence.hpp"
#include "ldpres/mechanisms.hpp"
#include "ldpres/resolutions.hpp"

// JSON wire formats. Points and block indices are 1-based on the wire.
namespace ldpres::json {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json one_based(const std::vector<std::vector<int>>& lists) {
  Json out = Json::array();
  for (const auto& list : lists) {
    Json row = Json::array();
    for (int i : list) row.push_back(i + 1);
    out.push_back(std::move(row));
  }
  return out;
}

inline std::vector<std::vector<int>> zero_based(const Json& lists, const char* what) {
  if (!lists.is_array()) throw ArgumentError(std::string(what) + " must be an array of arrays");
  std::vector<std::vector<int>> out;
  for (const auto& row : lists) {
    if (!row.is_array()) throw ArgumentError(std::string(what) + " must be an array of arrays");
    std::vector<int> list;
    for (const auto& i : row) {
      if (!i.is_number_integer()) throw ArgumentError(std::string(what) + " entries must be integers");
      list.push_back(i.get<int>() - 1);
    }
    out.push_back(std::move(list));
  }
  return out;
}

}  // namespace detail

// {"v": int, "blocks": [[int,...],...], "groups": [[blockIdx,...],...]?}
inline Json design_to_json(const IncidenceStructure& s) {
  Json j;
  j["v"] = s.v();
  j["blocks"] = detail::one_based(s.blocks());
  if (s.has_groups()) j["groups"] = detail::one_based(s.groups());
  return j;
}

inline IncidenceStructure design_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("v") || !j.contains("blocks")) {
    throw ArgumentError("design JSON needs \"v\" and \"blocks\"");
  }
  if (!j["v"].is_number_integer()) throw ArgumentError("design \"v\" must be an integer");
  BlockGroups groups;
  if (j.contains("groups")) groups = detail::zero_based(j["groups"], "groups");
  return IncidenceStructure(j["v"].get<int>(), detail::zero_based(j["blocks"], "blocks"),
                            std::move(groups));
}

inline Json params_to_json(const DesignParams& p) {
  Json j;
  j["v"] = p.v;
  j["b"] = p.b;
  j["r"] = p.r;
  j["k"] = p.k;
  j["lambda"] = p.lambda;
  return j;
}

// {"design": ..., "classes": [[blockIdx,...],...], "alphas": [int,...]}
inline Json resolution_to_json(const IncidenceStructure& s, const Resolution& res) {
  Json j;
  j["design"] = design_to_json(s);
  j["classes"] = detail::one_based(res.classes);
  j["alphas"] = res.alphas;
  return j;
}

// Block partition from a resolution (or bare {"classes": ...}) document.
inline std::vector<std::vector<int>> partition_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("classes")) throw ArgumentError("resolution JSON needs \"classes\"");
  return detail::zero_based(j["classes"], "classes");
}

// {"design": ..., "epsilon": float}
inline Json mechanism_to_json(const BlockDesignMechanism& mech) {
  Json j;
  j["design"] = design_to_json(mech.design());
  j["epsilon"] = mech.epsilon();
  return j;
}

inline BlockDesignMechanism mechanism_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("design") || !j.contains("epsilon") || !j["epsilon"].is_number()) {
    throw ArgumentError("mechanism JSON needs \"design\" and numeric \"epsilon\"");
  }
  return BlockDesignMechanism(design_from_json(j["design"]), j["epsilon"].get<double>());
}

// Mechanism JSON plus {"resolution": {...}, "pu": [[num, den], ...]}.
inline Json decomposed_to_json(const BlockDesignMechanism& mech, const DecomposedMechanism& dec) {
  Json j = mechanism_to_json(mech);
  Json res;
  res["classes"] = detail::one_based(dec.resolution.classes);
  res["alphas"] = dec.resolution.alphas;
  j["resolution"] = std::move(res);
  Json pu = Json::array();
  for (std::size_t u = 0; u < dec.shared_symbols(); ++u) {
    const auto [num, den] = dec.pu_fraction(u);
    pu.push_back(Json::array({num, den}));
  }
  j["pu"] = std::move(pu);
  return j;
}

// Rebuilds the decomposition from the design and partition; pu is recomputed.
inline std::pair<BlockDesignMechanism, DecomposedMechanism> decomposed_from_json(const Json& j) {
  auto mech = mechanism_from_json(j);
  if (!j.contains("resolution")) throw ArgumentError("decomposed mechanism JSON needs \"resolution\"");
  auto check = verify_resolution(mech.design(), partition_from_json(j["resolution"]));
  if (auto* failure = std::get_if<ResolutionFailure>(&check)) {
    throw ArgumentError("resolution in JSON is invalid: " + failure->message);
  }
  auto dec = decompose(mech, std::get<Resolution>(check));
  return {std::move(mech), std::move(dec)};
}

}  // namespace ldpres::json
