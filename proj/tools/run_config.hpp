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
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ldpres/designs.hpp"
#include "ldpres/error.hpp"

namespace ldpres::cli {

using Json = nlohmann::ordered_json;

// How to obtain a design: a named construction with its parameters, or a JSON file.
// put and cost subcommands reuse v and k here with an empty kind.
struct DesignSpec {
  std::string kind;  // complete | ag | hadamard3 | roundrobin | file | ""
  std::optional<int> v, k, d, m, t, lambda;
  std::optional<std::int64_t> q;
  std::optional<std::string> file;

  friend bool operator==(const DesignSpec&, const DesignSpec&) = default;
};

struct RunConfig {
  std::string command;
  std::string action;
  DesignSpec design;
  std::string resolution = "none";  // none | cyclic | baranyai | parallel | h3 | file
  std::optional<std::string> resolution_file;
  std::optional<std::string> mechanism_file;
  std::vector<std::int64_t> sizes;
  std::optional<double> epsilon;
  std::optional<double> check_epsilon;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> alpha;
  std::optional<int> trials;
  std::vector<double> p_true;
  std::uint64_t seed = 0;
  int workers = 1;
  bool materialize = false;
  std::string format = "json";
  std::optional<std::string> output;
  Caps caps;

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.command == b.command && a.action == b.action && a.design == b.design &&
           a.resolution == b.resolution && a.resolution_file == b.resolution_file &&
           a.mechanism_file == b.mechanism_file && a.sizes == b.sizes && a.epsilon == b.epsilon &&
           a.check_epsilon == b.check_epsilon && a.n == b.n && a.alpha == b.alpha &&
           a.trials == b.trials && a.p_true == b.p_true && a.seed == b.seed &&
           a.workers == b.workers && a.materialize == b.materialize && a.format == b.format &&
           a.output == b.output && a.caps.max_blocks == b.caps.max_blocks &&
           a.caps.max_points == b.caps.max_points;
  }
};

namespace detail {

template <class T>
void put_optional(Json& j, const char* key, const std::optional<T>& value) {
  if (value) j[key] = *value;
}

template <class T>
void get_optional(const Json& j, const char* key, std::optional<T>& value) {
  if (j.contains(key)) {
    value = j.at(key).get<T>();
  } else {
    value.reset();
  }
}

}  // namespace detail

// Unset optional fields are omitted, so the serialization is a fixed function of the config.
inline Json to_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["action"] = c.action;
  if (c.design != DesignSpec{}) {
    Json d;
    d["kind"] = c.design.kind;
    detail::put_optional(d, "v", c.design.v);
    detail::put_optional(d, "k", c.design.k);
    detail::put_optional(d, "d", c.design.d);
    detail::put_optional(d, "m", c.design.m);
    detail::put_optional(d, "q", c.design.q);
    detail::put_optional(d, "t", c.design.t);
    detail::put_optional(d, "lambda", c.design.lambda);
    detail::put_optional(d, "file", c.design.file);
    j["design"] = std::move(d);
  }
  j["resolution"] = c.resolution;
  detail::put_optional(j, "resolutionFile", c.resolution_file);
  detail::put_optional(j, "mechanismFile", c.mechanism_file);
  if (!c.sizes.empty()) j["sizes"] = c.sizes;
  detail::put_optional(j, "epsilon", c.epsilon);
  detail::put_optional(j, "checkEpsilon", c.check_epsilon);
  detail::put_optional(j, "n", c.n);
  detail::put_optional(j, "alpha", c.alpha);
  detail::put_optional(j, "trials", c.trials);
  if (!c.p_true.empty()) j["pTrue"] = c.p_true;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["materialize"] = c.materialize;
  j["format"] = c.format;
  detail::put_optional(j, "output", c.output);
  j["capBlocks"] = c.caps.max_blocks;
  j["capPoints"] = c.caps.max_points;
  return j;
}

inline RunConfig config_from_json(const Json& j) {
  try {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.action = j.at("action").get<std::string>();
    if (j.contains("design")) {
      const Json& d = j.at("design");
      c.design.kind = d.value("kind", std::string());
      detail::get_optional(d, "v", c.design.v);
      detail::get_optional(d, "k", c.design.k);
      detail::get_optional(d, "d", c.design.d);
      detail::get_optional(d, "m", c.design.m);
      detail::get_optional(d, "q", c.design.q);
      detail::get_optional(d, "t", c.design.t);
      detail::get_optional(d, "lambda", c.design.lambda);
      detail::get_optional(d, "file", c.design.file);
    }
    c.resolution = j.at("resolution").get<std::string>();
    detail::get_optional(j, "resolutionFile", c.resolution_file);
    detail::get_optional(j, "mechanismFile", c.mechanism_file);
    if (j.contains("sizes")) c.sizes = j.at("sizes").get<std::vector<std::int64_t>>();
    detail::get_optional(j, "epsilon", c.epsilon);
    detail::get_optional(j, "checkEpsilon", c.check_epsilon);
    detail::get_optional(j, "n", c.n);
    detail::get_optional(j, "alpha", c.alpha);
    detail::get_optional(j, "trials", c.trials);
    if (j.contains("pTrue")) c.p_true = j.at("pTrue").get<std::vector<double>>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.workers = j.at("workers").get<int>();
    c.materialize = j.at("materialize").get<bool>();
    c.format = j.at("format").get<std::string>();
    detail::get_optional(j, "output", c.output);
    c.caps.max_blocks = j.at("capBlocks").get<std::int64_t>();
    c.caps.max_points = j.at("capPoints").get<std::int64_t>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed run config: ") + e.what());
  }
}

}  // namespace ldpres::cli
