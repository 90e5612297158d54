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

#ifndef DUALGEOM_REPORT_HPP
#define DUALGEOM_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dualgeom {

inline constexpr const char* kToolVersion = "0.1.0";

using OrderedJson = nlohmann::ordered_json;

/// One verified identity: the largest residual seen against its tolerance.
/// Informational records are reported but never fail a run.
struct CheckRecord {
  std::string id;
  /// The statement being checked, written out.
  std::string anchor;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool informational = false;
  std::string notes;
};

/// Deterministic record of one command run. Contains no timestamps or host
/// data, so identical inputs and configuration give identical bytes.
class VerificationReport {
 public:
  explicit VerificationReport(std::string command);

  const std::string& command() const { return command_; }
  void set_config(OrderedJson config) { config_ = std::move(config); }
  void add_input(std::string source, std::string sha256);
  void add_inputs(const std::vector<std::pair<std::string, std::string>>& digests);

  /// pass iff residual is finite and below tolerance.
  CheckRecord& check(std::string id, std::string anchor, double residual, double tolerance,
                     std::string notes = {});
  CheckRecord& info(std::string id, std::string anchor, double residual, double tolerance,
                    std::string notes = {});
  /// A boolean outcome recorded as residual 0 (holds) or 1 (fails) against
  /// tolerance 0.5.
  CheckRecord& check_flag(std::string id, std::string anchor, bool holds, std::string notes = {});

  /// Human-readable headline, e.g. a final verdict.
  void add_summary(std::string line) { summary_.push_back(std::move(line)); }
  /// Structured payload, serialized under "details" in the JSON report only.
  void add_detail(std::string key, OrderedJson value);

  const std::vector<CheckRecord>& checks() const { return checks_; }
  const std::vector<std::string>& summary() const { return summary_; }
  const OrderedJson& details() const { return details_; }

  std::size_t failures() const;
  /// Every non-informational check passes.
  bool overall_pass() const { return failures() == 0; }

  std::string to_json() const;
  std::string to_text() const;

 private:
  std::string command_;
  OrderedJson config_ = OrderedJson::object();
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<CheckRecord> checks_;
  std::vector<std::string> summary_;
  OrderedJson details_ = OrderedJson::object();
};

/// "%.3e"-style formatting used throughout the text reports.
std::string format_number(double v);

}  // namespace dualgeom

#endif  // DUALGEOM_REPORT_HPP
