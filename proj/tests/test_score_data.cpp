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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "evofuse/error.hpp"
#include "evofuse/score_data.hpp"
#include "evofuse/synthgen.hpp"
#include "test_util.hpp"

using namespace evofuse;

namespace {

void write_small_pool(const testutil::TempDir& dir) {
  testutil::write(dir / "manifest.csv",
                  "name,param_count,score_file\n"
                  "alpha,100,scores/alpha.txt\n"
                  "beta,250,scores/beta.txt\n");
  testutil::write(dir / "labels.txt", "t1 bonafide\nt2 spoof\nt3 bonafide\nt4 spoof\n");
  testutil::write(dir / "scores/alpha.txt", "t4 0.1\nt3 0.9\nt2 -0.5\nt1 2.5\n");
  testutil::write(dir / "scores/beta.txt", "t1 1\r\nt2 2\r\nt3 3\r\nt4 4\r\n");
}

}  // namespace

TEST_CASE("load_manifest assigns ids in file order and resolves score paths") {
  testutil::TempDir dir;
  write_small_pool(dir);
  auto const pool = load_manifest(dir / "manifest.csv");
  REQUIRE(pool.size() == 2);
  CHECK(pool[0].name == "alpha");
  CHECK(pool[1].id == 1);
  CHECK(pool[1].param_count == 250);
  CHECK(pool.total_params() == 350);
  CHECK(pool[0].score_path == dir / "scores/alpha.txt");
}

TEST_CASE("Table 1 fixture manifest") {
  auto const pool = load_manifest(testutil::fixture("ssl_detectors.csv"));
  CHECK(pool.size() == 36);
  CHECK(std::abs(static_cast<double>(pool.total_params()) - 18.555e9) <= 0.01e9);
}

TEST_CASE("load_manifest with a single detector") {
  testutil::TempDir dir;
  testutil::write(dir / "m.csv", "name,param_count,score_file\nonly,7,x.txt\n");
  CHECK(load_manifest(dir / "m.csv").size() == 1);
}

TEST_CASE("load_manifest rejects bad input") {
  testutil::TempDir dir;
  SUBCASE("duplicate name") {
    testutil::write(dir / "m.csv", "name,param_count,score_file\na,1,x\na,2,y\n");
    CHECK_THROWS_AS(load_manifest(dir / "m.csv"), DataError);
  }
  SUBCASE("non-positive count") {
    testutil::write(dir / "m.csv", "name,param_count,score_file\na,0,x\n");
    CHECK_THROWS_AS(load_manifest(dir / "m.csv"), DataError);
  }
  SUBCASE("non-integer count") {
    testutil::write(dir / "m.csv", "name,param_count,score_file\na,1.5,x\n");
    CHECK_THROWS_AS(load_manifest(dir / "m.csv"), DataError);
  }
  SUBCASE("bad header") {
    testutil::write(dir / "m.csv", "name,params,file\na,1,x\n");
    CHECK_THROWS_AS(load_manifest(dir / "m.csv"), DataError);
  }
  SUBCASE("unreadable") { CHECK_THROWS_AS(load_manifest(dir / "missing.csv"), DataError); }
}

TEST_CASE("load_labels") {
  testutil::TempDir dir;
  SUBCASE("3 + 3") {
    testutil::write(dir / "l.txt", "a bonafide\nb spoof\nc bonafide\nd spoof\ne bonafide\nf spoof\n");
    auto const l = load_labels(dir / "l.txt");
    CHECK(l.size() == 6);
    CHECK(l.bonafide_count() == 3);
    CHECK(l.spoof_count() == 3);
    CHECK(l.trial_ids()[4] == "e");
  }
  SUBCASE("unknown token") {
    testutil::write(dir / "l.txt", "a bonafide\nb fake\n");
    CHECK_THROWS_WITH_AS(load_labels(dir / "l.txt"), doctest::Contains("fake"), DataError);
  }
  SUBCASE("single class") {
    testutil::write(dir / "l.txt", "a bonafide\nb bonafide\n");
    CHECK_THROWS_AS(load_labels(dir / "l.txt"), DataError);
  }
  SUBCASE("duplicate id") {
    testutil::write(dir / "l.txt", "a bonafide\na spoof\n");
    CHECK_THROWS_AS(load_labels(dir / "l.txt"), DataError);
  }
}

TEST_CASE("assemble_matrix aligns by trial id") {
  testutil::TempDir dir;
  write_small_pool(dir);
  auto const pool = load_manifest(dir / "manifest.csv");
  auto const labels = load_labels(dir / "labels.txt");
  auto const a = assemble_matrix(pool, labels);
  REQUIRE(a.matrix.detectors() == 2);
  REQUIRE(a.matrix.trials() == 4);
  CHECK(a.matrix.scores()(0, 0) == 2.5);
  CHECK(a.matrix.scores()(0, 1) == -0.5);
  CHECK(a.matrix.scores()(0, 3) == 0.1);
  CHECK(a.matrix.scores()(1, 2) == 3.0);
  CHECK(a.stats[1].min == 1.0);
  CHECK(a.stats[1].max == 4.0);
  CHECK(a.stats[1].mean == doctest::Approx(2.5));
}

TEST_CASE("assemble_matrix errors name the detector and trial") {
  testutil::TempDir dir;
  write_small_pool(dir);
  auto const pool = load_manifest(dir / "manifest.csv");
  auto const labels = load_labels(dir / "labels.txt");
  SUBCASE("missing trial") {
    testutil::write(dir / "scores/beta.txt", "t1 1\nt2 2\nt4 4\n");
    CHECK_THROWS_WITH_AS(assemble_matrix(pool, labels), doctest::Contains("'beta'"), DataError);
    CHECK_THROWS_WITH_AS(assemble_matrix(pool, labels), doctest::Contains("'t3'"), DataError);
  }
  SUBCASE("NaN score") {
    testutil::write(dir / "scores/alpha.txt", "t1 NaN\nt2 0\nt3 0\nt4 0\n");
    CHECK_THROWS_AS(assemble_matrix(pool, labels), DataError);
  }
  SUBCASE("missing file") {
    std::filesystem::remove(dir / "scores/alpha.txt");
    CHECK_THROWS_WITH_AS(assemble_matrix(pool, labels), doctest::Contains("alpha.txt"), DataError);
  }
  SUBCASE("duplicate trial line") {
    testutil::write(dir / "scores/alpha.txt", "t1 0\nt1 1\nt2 0\nt3 0\nt4 0\n");
    CHECK_THROWS_AS(assemble_matrix(pool, labels), DataError);
  }
}

TEST_CASE("score lines for unlabelled trials are counted and ignored") {
  testutil::TempDir dir;
  write_small_pool(dir);
  testutil::write(dir / "scores/beta.txt", "t1 1\nt2 2\nt3 3\nt4 4\nt5 5\n");
  auto const a = assemble_matrix(load_manifest(dir / "manifest.csv"), load_labels(dir / "labels.txt"));
  CHECK(a.stats[1].unused_lines == 1);
  CHECK(a.matrix.trials() == 4);
}

TEST_CASE("optional z-normalisation") {
  testutil::TempDir dir;
  write_small_pool(dir);
  auto const a = assemble_matrix(load_manifest(dir / "manifest.csv"), load_labels(dir / "labels.txt"), {true, 1});
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(a.matrix.row(i).mean() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((a.matrix.row(i).array().square().mean()) == doctest::Approx(1.0));
  }
}

TEST_CASE("write then re-assemble is bit-identical and order-insensitive") {
  auto const data = generate(scenario_s1(42, 50));
  auto const& m = data.matrix;
  testutil::TempDir dir;
  std::vector<DetectorMeta> metas;
  for (std::size_t i = 0; i < m.detectors(); ++i) {
    auto meta = m.pool()[i];
    meta.score_path = dir / "scores" / (meta.name + ".txt");
    write_scores(meta.score_path, m, i);
    metas.push_back(meta);
  }
  write_manifest(dir / "manifest.csv", DetectorPool(metas));
  write_labels(dir / "labels.txt", m.labels());

  auto const back = assemble_matrix(load_manifest(dir / "manifest.csv"), load_labels(dir / "labels.txt"), {false, 3});
  CHECK((back.matrix.scores().array() == m.scores().array()).all());

  // shuffle every score file's lines
  std::mt19937_64 rng(7);
  for (const auto& meta : metas) {
    auto text = testutil::slurp(meta.score_path);
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (std::size_t nl; (nl = text.find('\n', start)) != std::string::npos; start = nl + 1) {
      lines.push_back(text.substr(start, nl - start));
    }
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string joined;
    for (const auto& l : lines) joined += l + "\n";
    testutil::write(meta.score_path, joined);
  }
  auto const shuffled = assemble_matrix(load_manifest(dir / "manifest.csv"), load_labels(dir / "labels.txt"));
  CHECK((shuffled.matrix.scores().array() == m.scores().array()).all());
}

TEST_CASE("ScoreMatrix invariants") {
  DetectorPool pool({{0, "a", 1, "a"}});
  TrialLabels labels({"x", "y"}, {Label::bonafide, Label::spoof});
  ScoreArray bad(1, 2);
  bad << 1.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(ScoreMatrix(pool, labels, bad), DataError);
  CHECK_THROWS_AS(ScoreMatrix(pool, labels, ScoreArray::Zero(2, 2)), DataError);
  CHECK_NOTHROW(ScoreMatrix(pool, labels, ScoreArray::Zero(1, 2)));
}
