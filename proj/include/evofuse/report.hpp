// Copyright 2026 The evofuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "evofuse/nsga2.hpp"

namespace evofuse {

/// `eer,params,chromosome` with a header row; real chromosomes are quoted.
std::string front_csv(const ParetoFront& front);
ParetoFront read_front_csv(const std::filesystem::path& path, std::optional<Encoding> hint = std::nullopt);

/// `generation,hypervolume`.
std::string hv_trace_csv(std::span<const double> trace);

/// One named system in a comparison table.
struct SystemRow {
  std::string system;
  double eer = 0.0;
  std::optional<double> min_dcf;
  std::int64_t params = 0;
  bool dominated = false;
};

/// `system,eer,min_dcf,params` (min_dcf may be empty).
std::string systems_csv(const std::vector<SystemRow>& rows, bool with_dominated_flag = false);
std::vector<SystemRow> read_systems_csv(const std::filesystem::path& path);

/// Flags every row dominated (in EER and params) by any row of `reference`.
void flag_dominated(std::vector<SystemRow>& rows, const std::vector<SystemRow>& reference);

/// Fixed-width human-readable table.
std::string format_table(const std::vector<SystemRow>& rows);

}  // namespace evofuse
