#include <cmath>
#include <numbers>

#include "doctest.h"
#include "json.hpp"
#include "pvw/errors.hpp"
#include "pvw/resonance_scanner.hpp"
#include "pvw/special_functions.hpp"

using namespace pvw;

TEST_CASE("grid validation") {
  ScanGrid g;
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g.nu_values = {0.8};
  CHECK_THROWS_AS(g.validate(), ValidationError);
  g.nu_values = {0.5, 1.0};
  CHECK_NOTHROW(g.validate());
  g.L_max = 1;
  CHECK_THROWS_AS(g.validate(), ValidationError);
}

TEST_CASE("single cells") {
  ScanGrid g;
  g.nu_values = {0.5, 1.0};
  g.n_max = 1;
  g.L_max = 2;
  const ScanReport rep = scan_conjecture(g);
  REQUIRE(rep.records.size() == 2);
  const ScanRecord& half = rep.records[0];
  CHECK(half.control);
  CHECK(std::abs(half.value) < 1e-14);  // J_{1/2}(2 pi) = 0
  CHECK(half.nearest_q == 2);
  CHECK(half.refined);
  const ScanRecord& one = rep.records[1];
  CHECK(one.x == doctest::Approx(7.6634).epsilon(1e-4));
  CHECK(std::abs(one.value) > 0.1);
  // J_1 at twice its first zero, against the library oracle
  CHECK(one.value == doctest::Approx(std::cyl_bessel_j(1.0, one.x)).epsilon(1e-12));
  CHECK(rep.global_min_abs_value == doctest::Approx(std::abs(one.value)));
}

TEST_CASE("resonance verdicts") {
  ModelParams p;
  p.N = 4;
  const ResonanceVerdict v = detect_resonance(p, 2);
  CHECK_FALSE(v.resonant);
  CHECK(v.label == "Case-1");
  CHECK(v.q == 2);
  CHECK(v.margin == doctest::Approx(7.66341 - 7.01559).epsilon(1e-5));
  CHECK(v.margin_pi() == doctest::Approx(v.margin / std::numbers::pi));

  ModelParams control;
  control.N = 3;  // nu = 1/2
  for (int L : {2, 3}) {
    const ResonanceVerdict c = detect_resonance(control, L);
    CHECK(c.resonant);
    CHECK(c.q == L);
    CHECK(c.label == (L == 2 ? "Case-2" : "Case-1.2"));
  }

  ModelParams six;
  six.N = 6;
  for (int L : {2, 3}) {
    const ResonanceVerdict s = detect_resonance(six, L);
    CHECK_FALSE(s.resonant);
    CHECK(s.margin > 0.01);
  }
  CHECK_THROWS_AS(detect_resonance(p, 1), ValidationError);
}

TEST_CASE("full grid, control row and consistency") {
  ScanGrid g;
  g.nu_values = {3.0, 1.0, 0.5};
  g.n_max = 20;
  g.L_max = 10;
  const ScanReport rep = scan_conjecture(g);
  CHECK(rep.failures == 0);
  CHECK(rep.records.size() == 3u * 20u * 9u);
  CHECK(rep.records.front().nu == 0.5);
  CHECK(rep.global_min_abs_value > 0.0);
  CHECK(rep.control_max_abs_value < 1e-13);
  for (const auto& r : rep.records)
    if (r.control) CHECK(r.nearest_q == r.n * r.L);

  // detect_resonance reproduces the scan's distances
  for (const auto& r : rep.records) {
    if (r.nu != 1.0 || r.n > 3 || r.L > 3) continue;
    ModelParams p;
    p.N = 2 * (r.nu + 1);
    p.n0 = r.n;
    CHECK(std::abs(detect_resonance(p, r.L).margin - r.distance) <= 1e-12);
  }

  // byte-identical reruns
  CHECK(scan_csv(scan_conjecture(g)) == scan_csv(rep));
  CHECK(scan_summary_json(scan_conjecture(g)) == scan_summary_json(rep));
  const auto j = nlohmann::json::parse(scan_summary_json(rep));
  CHECK(j["note"].get<std::string>().find("evidence") != std::string::npos);
}
