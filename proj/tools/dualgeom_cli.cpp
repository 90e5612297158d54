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

// Command-line front end: dualgeom <command> [inputs] [flags].

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dualgeom/commands.hpp"
#include "dualgeom/error.hpp"
#include "dualgeom/spec_io.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFailures = 1;
constexpr int kInputError = 2;

int emit(const dualgeom::VerificationReport& rep, const dualgeom::RunConfig& config, bool json) {
  std::cout << (json ? rep.to_json() : rep.to_text());
  if (config.report_path) {
    std::ofstream out(*config.report_path, std::ios::binary);
    if (!out) throw dualgeom::SpecError("cannot write report to " + *config.report_path);
    out << rep.to_json();
  }
  return rep.overall_pass() ? kPass : kFailures;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dualgeom;

  CLI::App app{"Dualistic structures on charts and twisted products: conjugation, curvature, "
               "block formulas and flatness reductions, each checked against direct computation."};
  app.require_subcommand(1);

  RunConfig config;
  std::string point;
  std::string report;
  bool json = false;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--samples", config.samples, "Seeded sample points per check")
        ->capture_default_str();
    cmd->add_option("--seed", config.seed, "Sampling seed")->capture_default_str();
    cmd->add_option("--tol-exact", config.tol_exact, "Tolerance for exact identities")
        ->capture_default_str();
    cmd->add_option("--tol-fd", config.tol_fd, "Tolerance for finite-difference checks")
        ->capture_default_str();
    cmd->add_option("--point", point, "Evaluation point \"c1,c2,...\" (default: domain center)");
    cmd->add_option("--report", report, "Also write the JSON report to this path");
    cmd->add_flag("--json", json, "Print the JSON report instead of the table");
  };

  std::string spec_path;
  CLI::App* check = app.add_subcommand("check", "Validate a metric and its connection pair");
  check->add_option("spec", spec_path, "Manifold document")->required();
  add_common(check);

  CLI::App* conj = app.add_subcommand("conjugate", "Compute the conjugate connection");
  conj->add_option("spec", spec_path, "Manifold document")->required();
  add_common(conj);

  bool weyl = false;
  CLI::App* curv = app.add_subcommand("curvature", "Curvature, Ricci, scalar and Weyl tensors");
  curv->add_option("spec", spec_path, "Manifold document")->required();
  curv->add_flag("--weyl", weyl, "Include the Weyl conformal tensor (dimension >= 3)");
  add_common(curv);

  std::vector<std::string> twist_inputs;
  std::string twist_expr;
  CLI::App* twist = app.add_subcommand(
      "twist", "Block formulas of a twisted product: PRODUCT, or BASE FIBER --twist EXPR");
  twist->add_option("inputs", twist_inputs, "Product document, or base and fiber documents")
      ->required()
      ->expected(1, 2);
  twist->add_option("--twist", twist_expr, "Twisting function b over base and fiber coordinates");
  add_common(twist);

  CLI::App* flat = app.add_subcommand("flatness", "Dual flatness of an induced product structure");
  flat->add_option("spec", spec_path, "Product document")->required();
  add_common(flat);

  CLI::App* verify = app.add_subcommand("verify-paper", "Run the built-in fixture suite");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (!point.empty()) config.point = parse_point(point);
    if (!report.empty()) config.report_path = report;
    config.validate();

    if (check->parsed())
      return emit(cmd_check(load_manifold(spec_path, config.samples, config.seed), config),
                  config, json);
    if (conj->parsed())
      return emit(cmd_conjugate(load_manifold(spec_path, config.samples, config.seed), config),
                  config, json);
    if (curv->parsed())
      return emit(
          cmd_curvature(load_manifold(spec_path, config.samples, config.seed), config, weyl),
          config, json);
    if (twist->parsed()) {
      ProductDocument doc = [&] {
        if (twist_inputs.size() == 1) {
          if (!twist_expr.empty())
            throw SpecError("--twist is only used with separate base and fiber documents");
          return load_product(twist_inputs[0], config.samples, config.seed);
        }
        if (twist_expr.empty()) throw SpecError("--twist is required with base and fiber documents");
        return make_product_document(load_manifold(twist_inputs[0], config.samples, config.seed),
                                     load_manifold(twist_inputs[1], config.samples, config.seed),
                                     twist_expr, config.samples, config.seed);
      }();
      return emit(cmd_twist(doc, config), config, json);
    }
    if (flat->parsed())
      return emit(cmd_flatness(load_product(spec_path, config.samples, config.seed), config),
                  config, json);
    if (verify->parsed()) return emit(cmd_verify_paper(config), config, json);
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ConjugacyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
