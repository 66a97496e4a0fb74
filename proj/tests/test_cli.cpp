/* Copyright 2026 The jacprop Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "jacprop/cli.hpp"
#include "jacprop/model_io.hpp"
#include "support/random_models.hpp"

namespace jacprop {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "jacprop");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("jacprop_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  fs::path dir_;
};

constexpr const char* kIdentity = R"({"schema_version": "1", "input_dim": 2,
  "layers": [{"weights": [[1, 2]], "activation": {"kind": "identity"}}]})";

TEST_F(CliTest, JacobianOfLinearModelIsWeightRow) {
  const auto model = write("m.json", kIdentity);
  const auto r = run({"jacobian", "--model", model, "--input", "1,1"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, "1,2\n");
  EXPECT_EQ(r.err, "");
}

TEST_F(CliTest, LayerOneIsIdentity) {
  const auto model = write("m.json", save_model(testing::seeded_net(
                                         1, {3, 2}, {ActivationSpec::tanh()})
                                         .model()));
  const auto r =
      run({"jacobian", "--model", model, "--input", "0.5,0,1", "--layer", "1"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, "1,0,0\n0,1,0\n0,0,1\n");
}

TEST_F(CliTest, LastLayerMatchesDefault) {
  const auto model = write("m.json", save_model(testing::reference_net().model()));
  for (const char* format : {"csv", "json"}) {
    const auto plain = run({"jacobian", "--model", model, "--input",
                            "0.1,-0.2,0.3,-0.4", "--format", format});
    const auto layered = run({"jacobian", "--model", model, "--input",
                              "0.1,-0.2,0.3,-0.4", "--layer", "4", "--format", format});
    EXPECT_EQ(plain.code, 0);
    EXPECT_EQ(plain.out, layered.out);
  }
}

TEST_F(CliTest, CheckReferenceModel) {
  const auto model = write("m.json", save_model(testing::reference_net().model()));
  const auto r = run({"check", "--model", model, "--input", "0.1,-0.2,0.3,-0.4"});
  EXPECT_EQ(r.code, cli::kOk);
  const Matrix row = parse_matrix(r.out, true);
  ASSERT_EQ(row.cols(), 5);
  EXPECT_LT(row(0, 0), 1e-5);
  EXPECT_EQ(row(0, 4), 1.0);
}

TEST_F(CliTest, CheckFailureExitCode) {
  LayeredModel model;
  model.input_dim = 1;
  model.layers.push_back({Matrix::Constant(1, 1, 3.0), ActivationSpec::tanh()});
  const auto path = write("m.json", save_model(model));
  const auto r = run({"check", "--model", path, "--input", "0.2", "--fd-scheme",
                      "forward", "--fd-step", "0.1", "--tolerance", "1e-6"});
  EXPECT_EQ(r.code, cli::kCheckFailed);
  EXPECT_FALSE(r.err.empty());
  EXPECT_NO_THROW(parse_matrix(r.out, true));
}

TEST_F(CliTest, Validate) {
  const auto good = write("good.json", kIdentity);
  auto r = run({"validate", "--model", good});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, "OK\n");

  const auto bad = write("bad.json", R"({"schema_version": "1", "input_dim": 2,
    "layers": [{"weights": [[1, 2, 3]], "activation": {"kind": "tanh"}}]})");
  r = run({"validate", "--model", bad});
  EXPECT_EQ(r.code, cli::kValidationFailure);
  EXPECT_NE(r.out.find("layer 1"), std::string::npos);

  r = run({"validate", "--model", bad, "--format", "json"});
  EXPECT_EQ(r.code, cli::kValidationFailure);
  EXPECT_NE(r.out.find("\"valid\": false"), std::string::npos);
}

TEST_F(CliTest, ForwardAndVerbose) {
  const auto model = write("m.json", kIdentity);
  auto r = run({"forward", "--model", model, "--input", "1,1"});
  EXPECT_EQ(r.out, "3\n");
  r = run({"forward", "--model", model, "--input", "1,1", "--verbose"});
  EXPECT_EQ(r.out, "layer,unit,value\n1,1,1\n1,2,1\n2,1,3\n");
  r = run({"forward", "--model", model, "--input", "1,1", "--format", "json"});
  EXPECT_NE(r.out.find("\"output\""), std::string::npos);
}

TEST_F(CliTest, InputFromFile) {
  const auto model = write("m.json", kIdentity);
  const auto input = write("x.csv", "2, 3\n");
  const auto r = run({"forward", "--model", model, "--input", "@" + input});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "8\n");
}

TEST_F(CliTest, InputGivenTwiceIsAnError) {
  const auto model = write("m.json", kIdentity);
  const auto input = write("x.csv", "2,3\n");
  const auto r = run({"forward", "--model", model, "--input", "1,1", "--input",
                      "@" + input});
  EXPECT_EQ(r.code, cli::kIoOrParseFailure);
  EXPECT_EQ(r.out, "");
}

TEST_F(CliTest, ReportTopK) {
  const auto model = write("m.json", save_model(testing::reference_net().model()));
  auto r = run({"report", "--model", model, "--input", "0.1,-0.2,0.3,-0.4",
                "--top-k", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
  r = run({"report", "--model", model, "--input", "0.1,-0.2,0.3,-0.4", "--format",
           "json"});
  EXPECT_NE(r.out.find("\"same_unit\": true"), std::string::npos);
}

TEST_F(CliTest, StrictSingularities) {
  const auto model = write("m.json", R"({"schema_version": "1", "input_dim": 1,
    "layers": [{"weights": [[1]], "activation": {"kind": "relu"}}]})");
  auto r = run({"jacobian", "--model", model, "--input", "0"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, "0\n");
  EXPECT_NE(r.err.find("singular"), std::string::npos);
  r = run({"jacobian", "--model", model, "--input", "0", "--strict-singularities"});
  EXPECT_EQ(r.code, cli::kSingularity);
  EXPECT_EQ(r.out, "");
}

TEST_F(CliTest, FailureCodes) {
  const auto model = write("m.json", kIdentity);
  EXPECT_EQ(run({"jacobian", "--model", (dir_ / "missing.json").string(),
                 "--input", "1,1"}).code,
            cli::kIoOrParseFailure);
  EXPECT_EQ(run({"jacobian", "--model", model, "--input", "1,x"}).code,
            cli::kIoOrParseFailure);
  EXPECT_EQ(run({"jacobian", "--model", model, "--input", "1,1,1"}).code,
            cli::kValidationFailure);
  EXPECT_EQ(run({"jacobian", "--model", model, "--input", "1,1", "--layer", "3"}).code,
            cli::kValidationFailure);
  EXPECT_EQ(run({"jacobian", "--model", model}).code, cli::kIoOrParseFailure);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kIoOrParseFailure);
  EXPECT_EQ(run({}).code, cli::kIoOrParseFailure);
}

}  // namespace
}  // namespace jacprop
