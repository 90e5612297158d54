// Copyright 2026 The dualgeom Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dualgeom/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dualgeom {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

VerificationReport::VerificationReport(std::string command) : command_(std::move(command)) {}

void VerificationReport::add_input(std::string source, std::string sha256) {
  inputs_.emplace_back(std::move(source), std::move(sha256));
}

void VerificationReport::add_inputs(
    const std::vector<std::pair<std::string, std::string>>& digests) {
  for (const auto& [source, sha] : digests) add_input(source, sha);
}

CheckRecord& VerificationReport::check(std::string id, std::string anchor, double residual,
                                       double tolerance, std::string notes) {
  const bool pass = std::isfinite(residual) && residual < tolerance;
  checks_.push_back({std::move(id), std::move(anchor), residual, tolerance, pass, false,
                     std::move(notes)});
  return checks_.back();
}

CheckRecord& VerificationReport::info(std::string id, std::string anchor, double residual,
                                      double tolerance, std::string notes) {
  CheckRecord& r = check(std::move(id), std::move(anchor), residual, tolerance, std::move(notes));
  r.informational = true;
  return r;
}

CheckRecord& VerificationReport::check_flag(std::string id, std::string anchor, bool holds,
                                            std::string notes) {
  return check(std::move(id), std::move(anchor), holds ? 0.0 : 1.0, 0.5, std::move(notes));
}

void VerificationReport::add_detail(std::string key, OrderedJson value) {
  details_[key] = std::move(value);
}

std::size_t VerificationReport::failures() const {
  return static_cast<std::size_t>(std::count_if(checks_.begin(), checks_.end(), [](const auto& c) {
    return !c.informational && !c.pass;
  }));
}

std::string VerificationReport::to_json() const {
  OrderedJson j;
  j["tool"] = "dualgeom";
  j["version"] = kToolVersion;
  j["command"] = command_;
  j["config"] = config_;
  OrderedJson inputs = OrderedJson::array();
  for (const auto& [source, sha] : inputs_) inputs.push_back({{"source", source}, {"sha256", sha}});
  j["inputs"] = inputs;
  OrderedJson checks = OrderedJson::array();
  for (const CheckRecord& c : checks_) {
    OrderedJson r;
    r["id"] = c.id;
    r["anchor"] = c.anchor;
    r["residual"] = c.residual;
    r["tolerance"] = c.tolerance;
    r["pass"] = c.pass;
    r["informational"] = c.informational;
    r["notes"] = c.notes;
    checks.push_back(std::move(r));
  }
  j["checks"] = checks;
  j["summary"] = summary_;
  j["details"] = details_;
  j["overall"] = {{"pass", overall_pass()},
                  {"checks", checks_.size()},
                  {"failures", failures()},
                  {"informational",
                   std::count_if(checks_.begin(), checks_.end(),
                                 [](const auto& c) { return c.informational; })}};
  return j.dump(2) + "\n";
}

std::string VerificationReport::to_text() const {
  std::string out = "dualgeom " + std::string(kToolVersion) + ": " + command_ + "\n";
  for (const auto& [source, sha] : inputs_) out += "input  " + source + "  sha256:" + sha + "\n";
  if (!config_.empty()) {
    out += "config";
    for (auto it = config_.begin(); it != config_.end(); ++it)
      out += " " + it.key() + "=" + it.value().dump();
    out += "\n";
  }
  for (const std::string& line : summary_) out += line + "\n";

  if (!checks_.empty()) {
    std::size_t width = 2;
    for (const CheckRecord& c : checks_) width = std::max(width, c.id.size());
    out += "\nstatus  " + std::string("id") + std::string(width - 2, ' ') +
           "  residual    tolerance   statement\n";
    for (const CheckRecord& c : checks_) {
      const char* status = c.informational ? (c.pass ? "info  " : "INFO  ") : (c.pass ? "pass  " : "FAIL  ");
      out += status;
      out += "  " + c.id + std::string(width - c.id.size(), ' ');
      out += "  " + format_number(c.residual) + "   " + format_number(c.tolerance) + "   " +
             c.anchor + "\n";
      if (!c.notes.empty()) out += std::string(10 + width, ' ') + "  note: " + c.notes + "\n";
    }
  }
  const std::size_t informational = static_cast<std::size_t>(std::count_if(
      checks_.begin(), checks_.end(), [](const auto& c) { return c.informational; }));
  out += "\noverall: " + std::string(overall_pass() ? "PASS" : "FAIL") + " (" +
         std::to_string(checks_.size()) + " checks, " + std::to_string(failures()) + " failed, " +
         std::to_string(informational) + " informational)\n";
  return out;
}

}  // namespace dualgeom
