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

#include "evofuse/report.hpp"

#include <iomanip>
#include <sstream>

#include "evofuse/csv.hpp"
#include "evofuse/error.hpp"

namespace evofuse {

std::string front_csv(const ParetoFront& front) {
  std::ostringstream out;
  out << "eer,params,chromosome\n";
  for (const auto& m : front.members) {
    out << io::format_exact(m.objectives.eer) << ',' << m.objectives.params << ','
        << io::csv_quote(serialize(m.chromosome)) << '\n';
  }
  return out.str();
}

ParetoFront read_front_csv(const std::filesystem::path& path, std::optional<Encoding> hint) {
  auto const lines = io::read_lines(path);
  if (lines.empty() || io::split_csv(lines.front().text) != std::vector<std::string>{"eer", "params", "chromosome"}) {
    throw DataError(path.string() + ": expected header 'eer,params,chromosome'");
  }
  ParetoFront front;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto const f = io::split_csv(lines[i].text);
    auto const where = path.string() + ":" + std::to_string(lines[i].number) + ": ";
    if (f.size() != 3) throw DataError(where + "expected 3 fields");
    auto const e = io::parse_real(f[0]);
    auto const p = io::parse_int(f[1]);
    if (!e || !p) throw DataError(where + "invalid objective values");
    front.members.push_back({{*e, *p}, parse_chromosome(f[2], hint)});
  }
  return front;
}

std::string hv_trace_csv(std::span<const double> trace) {
  std::ostringstream out;
  out << "generation,hypervolume\n";
  for (std::size_t g = 0; g < trace.size(); ++g) out << g << ',' << io::format_exact(trace[g]) << '\n';
  return out.str();
}

std::string systems_csv(const std::vector<SystemRow>& rows, bool with_dominated_flag) {
  std::ostringstream out;
  out << "system,eer,min_dcf,params" << (with_dominated_flag ? ",dominated" : "") << '\n';
  for (const auto& r : rows) {
    out << io::csv_quote(r.system) << ',' << io::format_exact(r.eer) << ','
        << (r.min_dcf ? io::format_exact(*r.min_dcf) : std::string()) << ',' << r.params;
    if (with_dominated_flag) out << ',' << (r.dominated ? 1 : 0);
    out << '\n';
  }
  return out.str();
}

std::vector<SystemRow> read_systems_csv(const std::filesystem::path& path) {
  auto const lines = io::read_lines(path);
  if (lines.empty()) throw DataError(path.string() + ": empty file");
  auto const header = io::split_csv(lines.front().text);
  bool const flagged = header == std::vector<std::string>{"system", "eer", "min_dcf", "params", "dominated"};
  if (!flagged && header != std::vector<std::string>{"system", "eer", "min_dcf", "params"}) {
    throw DataError(path.string() + ": expected header 'system,eer,min_dcf,params'");
  }
  std::vector<SystemRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto const f = io::split_csv(lines[i].text);
    auto const where = path.string() + ":" + std::to_string(lines[i].number) + ": ";
    if (f.size() != header.size()) throw DataError(where + "wrong field count");
    SystemRow row;
    row.system = f[0];
    auto const e = io::parse_real(f[1]);
    auto const p = io::parse_int(f[3]);
    if (!e || !p) throw DataError(where + "invalid values");
    row.eer = *e;
    row.params = *p;
    if (!f[2].empty()) {
      row.min_dcf = io::parse_real(f[2]);
      if (!row.min_dcf) throw DataError(where + "invalid min_dcf");
    }
    if (flagged) {
      if (f[4] != "0" && f[4] != "1") throw DataError(where + "dominated must be 0 or 1");
      row.dominated = f[4] == "1";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void flag_dominated(std::vector<SystemRow>& rows, const std::vector<SystemRow>& reference) {
  for (auto& r : rows) {
    for (const auto& q : reference) {
      if (dominates(FusionObjectives{q.eer, q.params}, FusionObjectives{r.eer, r.params})) {
        r.dominated = true;
        break;
      }
    }
  }
}

std::string format_table(const std::vector<SystemRow>& rows) {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.system.size());
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(width)) << "system" << "  " << std::right << std::setw(8) << "EER%"
      << "  " << std::setw(8) << "minDCF" << "  " << std::setw(8) << "params" << "\n";
  for (const auto& r : rows) {
    char eer[32];
    std::snprintf(eer, sizeof(eer), "%.2f", 100.0 * r.eer);
    char dcf[32] = "-";
    if (r.min_dcf) std::snprintf(dcf, sizeof(dcf), "%.4f", *r.min_dcf);
    out << std::left << std::setw(static_cast<int>(width)) << r.system << "  " << std::right << std::setw(8) << eer
        << "  " << std::setw(8) << dcf << "  " << std::setw(8) << io::format_params(r.params)
        << (r.dominated ? "  (dominated)" : "") << "\n";
  }
  return out.str();
}

}  // namespace evofuse
