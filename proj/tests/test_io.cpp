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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <set>
#include <string>

#include <json.hpp>

#include "dualgeom/commands.hpp"
#include "dualgeom/error.hpp"
#include "dualgeom/report.hpp"
#include "dualgeom/spec_io.hpp"

using namespace dualgeom;
using nlohmann::json;

namespace {

const std::filesystem::path kFixtures = DUALGEOM_FIXTURES_DIR;

json sphere_doc() {
  return json::parse(R"({"name": "S", "coords": ["th", "ph"], "domain": [[0.3, 2.8], [0, 6]],
                         "metric": [["1", "0"], ["0", "sin(th)^2"]],
                         "connection": {"kind": "levi-civita"}})");
}

const CheckRecord& find(const VerificationReport& rep, const std::string& id) {
  for (const CheckRecord& c : rep.checks())
    if (c.id == id) return c;
  FAIL("no check named " << id);
  throw std::logic_error("unreachable");
}

bool has(const VerificationReport& rep, const std::string& id) {
  for (const CheckRecord& c : rep.checks())
    if (c.id == id) return true;
  return false;
}

bool summary_mentions(const VerificationReport& rep, const std::string& part) {
  for (const std::string& line : rep.summary())
    if (line.find(part) != std::string::npos) return true;
  return false;
}

void expect_spec_error(json doc, const std::string& fragment) {
  try {
    parse_manifold(doc);
    FAIL("expected SpecError mentioning " << fragment);
  } catch (const SpecError& e) {
    CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
  }
}

}  // namespace

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("manifold documents") {
  const ManifoldDocument s = load_manifold(kFixtures / "sphere2.json");
  CHECK(s.manifold.dim() == 2);
  CHECK(s.connection.provenance() == Provenance::LeviCivita);
  CHECK_FALSE(s.dual.has_value());
  REQUIRE(s.digests.size() == 1);
  CHECK(s.digests[0].second.size() == 64);

  const ManifoldDocument bad = load_manifold(kFixtures / "line_bad_pair.json");
  CHECK(bad.dual.has_value());
  CHECK(bad.connection.label() == "explicit");

  const ManifoldDocument inline_doc = parse_manifold(sphere_doc());
  CHECK(inline_doc.manifold.name() == "S");
}

TEST_CASE("product documents") {
  const ProductDocument t = load_product(kFixtures / "product_twisted_exp_xu.json");
  CHECK(t.product.classification() == TwistClass::ProperTwisted);
  CHECK(t.digests.size() == 3);
  CHECK(std::holds_alternative<ProductDocument>(load_spec(kFixtures / "product_inline.json")));
  CHECK(std::holds_alternative<ManifoldDocument>(load_spec(kFixtures / "sphere2.json")));
  const ProductDocument w = make_product_document(load_manifold(kFixtures / "euclidean1_x.json"),
                                                  load_manifold(kFixtures / "euclidean1_u.json"), "exp(x)");
  CHECK(w.product.classification() == TwistClass::Warped);
  CHECK_THROWS_AS(make_product_document(load_manifold(kFixtures / "euclidean1_x.json"),
                                        load_manifold(kFixtures / "euclidean1_x.json"), "1"),
                  SpecError);
  CHECK_THROWS_AS(make_product_document(load_manifold(kFixtures / "euclidean1_x.json"),
                                        load_manifold(kFixtures / "euclidean1_u.json"), "exp(x*"),
                  SpecError);
}

TEST_CASE("invalid manifold documents") {
  CHECK_THROWS_AS(load_manifold(kFixtures / "nonsymmetric.json"), SpecError);
  CHECK_THROWS_AS(load_manifold(kFixtures / "does_not_exist.json"), SpecError);

  json d = sphere_doc();
  d.erase("name");
  expect_spec_error(d, "name");
  d = sphere_doc();
  d["coords"] = {"th", "th"};
  expect_spec_error(d, "coords");
  d = sphere_doc();
  d["coords"] = {"sin", "ph"};
  expect_spec_error(d, "reserved");
  d = sphere_doc();
  d["domain"] = {{0.3, 2.8}};
  expect_spec_error(d, "domain");
  d = sphere_doc();
  d["metric"][1][1] = "sin(th)^";
  expect_spec_error(d, "metric");
  d = sphere_doc();
  d["metric"][0][1] = "0.1";
  expect_spec_error(d, "not symmetric");
  d = sphere_doc();
  d["connection"] = {{"kind", "mystery"}};
  expect_spec_error(d, "connection");
  d = sphere_doc();
  d["connection"] = {{"kind", "explicit"}, {"gamma", {{"0,0", "1"}}}};
  expect_spec_error(d, "gamma");
  d = sphere_doc();
  d["connection"] = {{"kind", "explicit"}, {"gamma", {{"0,0,5", "1"}}}};
  expect_spec_error(d, "gamma");
  d = sphere_doc();
  d["metric"][1][1] = "-1";
  CHECK_THROWS_AS(parse_manifold(d), GeometryError);
}

TEST_CASE("report records") {
  VerificationReport rep("unit");
  CHECK(rep.check("a", "x = x", 1e-12, 1e-8).pass);
  CHECK_FALSE(rep.check("b", "x = y", 1.0, 1e-8).pass);
  CHECK_FALSE(rep.check("c", "nan", std::numeric_limits<double>::quiet_NaN(), 1e-8).pass);
  rep.info("d", "measured", 5.0, 1e-8);
  CHECK(rep.check_flag("e", "flag", true).pass);
  CHECK(rep.failures() == 2);
  CHECK_FALSE(rep.overall_pass());
  const json j = json::parse(rep.to_json());
  CHECK(j["checks"].size() == 5);
  CHECK(j["checks"][3]["informational"] == true);
  CHECK(rep.to_json() == rep.to_json());
  CHECK(rep.to_text().find("FAIL") != std::string::npos);
  CHECK(format_number(1234.5) == "1.234e+03");
}

TEST_CASE("run configuration") {
  RunConfig c;
  c.validate();
  c.samples = 0;
  CHECK_THROWS_AS(c.validate(), SpecError);
  c = RunConfig{};
  c.tol_exact = -1.0;
  CHECK_THROWS_AS(c.validate(), SpecError);
  const Vector p = parse_point("0.5, -1e-1");
  CHECK(p.size() == 2);
  CHECK(p(1) == doctest::Approx(-0.1));
  CHECK_THROWS_AS(parse_point("0.5,abc"), SpecError);
}

TEST_CASE("check command") {
  const RunConfig cfg;
  const VerificationReport s = cmd_check(load_manifold(kFixtures / "sphere2.json"), cfg);
  CHECK(s.overall_pass());
  const VerificationReport bad = cmd_check(load_manifold(kFixtures / "line_bad_pair.json"), cfg);
  CHECK_FALSE(bad.overall_pass());
  CHECK(find(bad, "conjugacy").residual == doctest::Approx(1.4));
  const VerificationReport f = cmd_check(load_manifold(kFixtures / "fisher_normal.json"), cfg);
  CHECK(f.overall_pass());
  CHECK(find(f, "statistical").residual < 1e-8);
  CHECK(summary_mentions(f, "classification: statistical"));
  CHECK(cmd_check(load_manifold(kFixtures / "fisher_exponential.json"), cfg).overall_pass());
  CHECK(cmd_conjugate(load_manifold(kFixtures / "line_pair.json"), cfg).overall_pass());
}

TEST_CASE("curvature command") {
  RunConfig cfg;
  cfg.point = parse_point("1.0471975511965976,1");
  const VerificationReport s = cmd_curvature(load_manifold(kFixtures / "sphere2.json"), cfg, false);
  CHECK(s.details()["scalar"].get<double>() == doctest::Approx(2.0));
  CHECK(summary_mentions(s, "sectional curvature K = 1"));
  const VerificationReport e = cmd_curvature(load_manifold(kFixtures / "euclidean3.json"), RunConfig{}, true);
  CHECK(e.overall_pass());
  CHECK(e.details()["scalar"].get<double>() == 0.0);
  CHECK_THROWS_AS(cmd_curvature(load_manifold(kFixtures / "sphere2.json"), RunConfig{}, true),
                  DimensionError);
}

TEST_CASE("twist command") {
  const RunConfig cfg;
  const VerificationReport w = cmd_twist(load_product(kFixtures / "product_warped_exp_x.json"), cfg);
  CHECK(w.overall_pass());
  for (const CheckRecord& c : w.checks())
    if (c.id.rfind("curvature", 0) == 0 || c.id == "block-levi-civita") CHECK_MESSAGE(c.residual < 1e-8, c.id);
  const VerificationReport t = cmd_twist(load_product(kFixtures / "product_twisted_exp_xu.json"), cfg);
  CHECK(t.overall_pass());
  CHECK(has(t, "curvature R(U,V)W [g(V,U) pairing]"));
  CHECK(has(t, "curvature R(U,V)W [g(V,W) pairing]"));
  const VerificationReport d = cmd_twist(load_product(kFixtures / "product_direct.json"), cfg);
  CHECK(d.overall_pass());
  CHECK(summary_mentions(d, ": direct"));
  CHECK(find(d, "curvature R(X,Y)U").residual == 0.0);
}

TEST_CASE("flatness command") {
  const RunConfig cfg;
  const VerificationReport s = cmd_flatness(load_product(kFixtures / "product_flat_separable.json"), cfg);
  CHECK(s.overall_pass());
  CHECK(summary_mentions(s, "dually flat (reduction and direct computation agree)"));
  const VerificationReport t = cmd_flatness(load_product(kFixtures / "product_inline.json"), cfg);
  CHECK(summary_mentions(t, "not mixed-Ricci-flat"));
  CHECK(summary_mentions(t, "direct verdict"));
  const VerificationReport b = cmd_flatness(load_product(kFixtures / "product_sphere_base.json"), cfg);
  CHECK(summary_mentions(b, "not dually flat: base structure"));
  const VerificationReport f = cmd_flatness(load_product(kFixtures / "product_fisher_flat.json"), cfg);
  CHECK(f.overall_pass());
  CHECK(summary_mentions(f, "direct verdict: dually flat"));
}

TEST_CASE("verify-paper suite") {
  RunConfig cfg;
  cfg.samples = 16;
  const VerificationReport a = cmd_verify_paper(cfg);
  CHECK(a.overall_pass());
  std::size_t informational = 0;
  for (const CheckRecord& c : a.checks()) informational += c.informational;
  CHECK(informational > 0);

  RunConfig seven = cfg;
  seven.seed = 7;
  const VerificationReport b = cmd_verify_paper(seven);
  REQUIRE(a.checks().size() == b.checks().size());
  bool moved = false;
  for (std::size_t i = 0; i < a.checks().size(); ++i) {
    CHECK(a.checks()[i].id == b.checks()[i].id);
    if (!a.checks()[i].informational) CHECK(a.checks()[i].pass == b.checks()[i].pass);
    moved |= a.checks()[i].residual != b.checks()[i].residual;
  }
  CHECK(moved);
  CHECK(a.to_json() == cmd_verify_paper(cfg).to_json());

  RunConfig strict = cfg;
  strict.tol_exact = 1e-15;
  CHECK(cmd_verify_paper(strict).failures() > 0);
}
