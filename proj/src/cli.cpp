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

#include "jacprop/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "jacprop/errors.hpp"
#include "jacprop/fd_oracle.hpp"
#include "jacprop/jacobian.hpp"
#include "jacprop/model.hpp"
#include "jacprop/model_io.hpp"
#include "jacprop/sensitivity.hpp"

namespace jacprop::cli {
namespace {

struct Invocation {
  std::string model_path;
  std::string input;
  std::optional<std::size_t> layer;
  double fd_step = 1e-5;
  std::string fd_scheme = "central";
  double tolerance = 1e-5;
  std::string format = "csv";
  std::optional<std::size_t> top_k;
  bool strict_singularities = false;
  bool verbose = false;
};

class IoError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Vector read_input(const std::string& input) {
  if (!input.empty() && input.front() == '@') {
    return parse_vector(read_file(input.substr(1)));
  }
  return parse_vector(input);
}

LayeredModel read_model(const Invocation& inv) {
  LayeredModel model = load_model(read_file(inv.model_path));
  if (inv.strict_singularities) {
    for (auto& layer : model.layers) {
      layer.activation.relu_zero_policy = ReluZeroPolicy::kReject;
    }
  }
  return model;
}

void warn_singular_hits(const std::vector<SingularHit>& hits,
                        std::ostream& err) {
  for (const auto& hit : hits) {
    err << "warning: activation evaluated at its singular point: layer "
        << hit.layer << ", unit " << hit.coordinate << "\n";
  }
}

// Carries no layer number so that `--layer L` and the default agree byte for
// byte.
std::string matrix_to_json(const Matrix& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  nlohmann::ordered_json doc;
  doc["rows"] = m.rows();
  doc["cols"] = m.cols();
  doc["matrix"] = std::move(rows);
  return doc.dump(2) + "\n";
}

int do_validate(const Invocation& inv, std::ostream& out, std::ostream& err) {
  std::vector<Violation> violations;
  try {
    violations = validate_model(parse_model(read_file(inv.model_path)));
  } catch (const ValidationError& e) {
    violations.push_back({0, e.what()});
  }
  if (inv.format == "json") {
    nlohmann::ordered_json doc;
    doc["valid"] = violations.empty();
    auto list = nlohmann::ordered_json::array();
    for (const auto& v : violations) {
      list.push_back({{"layer", v.layer}, {"message", v.message}});
    }
    doc["violations"] = std::move(list);
    out << doc.dump(2) << "\n";
  } else if (violations.empty()) {
    out << "OK\n";
  } else {
    for (const auto& v : violations) {
      out << (v.layer == 0 ? std::string("model")
                           : "layer " + std::to_string(v.layer))
          << ": " << v.message << "\n";
    }
  }
  if (violations.empty()) return kOk;
  err << "error: model is invalid (" << violations.size() << " violation"
      << (violations.size() == 1 ? "" : "s") << ")\n";
  return kValidationFailure;
}

int do_forward(const Invocation& inv, std::ostream& out) {
  const LayeredModel model = read_model(inv);
  const auto activations = forward(model, read_input(inv.input));
  if (inv.format == "json") {
    nlohmann::ordered_json doc;
    const Vector& y = activations.back();
    doc["output"] = std::vector<double>(y.data(), y.data() + y.size());
    if (inv.verbose) {
      auto all = nlohmann::ordered_json::array();
      for (const auto& a : activations) {
        all.push_back(std::vector<double>(a.data(), a.data() + a.size()));
      }
      doc["activations"] = std::move(all);
    }
    out << doc.dump(2) << "\n";
  } else if (inv.verbose) {
    out << "layer,unit,value\n";
    for (std::size_t l = 0; l < activations.size(); ++l) {
      for (Eigen::Index i = 0; i < activations[l].size(); ++i) {
        out << l + 1 << ',' << i + 1 << ','
            << format_number(activations[l][i]) << '\n';
      }
    }
  } else {
    out << emit_matrix(activations.back().transpose());
  }
  return kOk;
}

int do_jacobian(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const LayeredModel model = read_model(inv);
  const std::size_t layer = inv.layer.value_or(model.num_layers());
  if (layer > model.num_layers()) {
    throw DimensionError("--layer " + std::to_string(layer) + " outside 1.." +
                         std::to_string(model.num_layers()));
  }
  const JacobianTrace trace = jacobian_forward(model, read_input(inv.input));
  warn_singular_hits(trace.singular_hits, err);
  const Matrix& jac = jacobian_at_layer(trace, layer);
  out << (inv.format == "json" ? matrix_to_json(jac) : emit_matrix(jac));
  return kOk;
}

int do_check(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const LayeredModel model = read_model(inv);
  const Vector x = read_input(inv.input);
  const JacobianTrace trace = jacobian_forward(model, x);
  warn_singular_hits(trace.singular_hits, err);
  const FdConfig cfg{inv.fd_step, inv.fd_scheme == "forward"
                                      ? FdScheme::kForward
                                      : FdScheme::kCentral};
  const Matrix fd = finite_difference_jacobian(model, x, cfg);
  const ComparisonResult result =
      compare_jacobians(trace.full, fd, inv.tolerance);
  if (inv.format == "json") {
    out << comparison_to_json(result);
  } else {
    out << "max_abs_diff,max_rel_diff,argmax_row,argmax_col,within_tolerance\n"
        << format_number(result.max_abs_diff) << ','
        << format_number(result.max_rel_diff) << ',' << result.argmax_row
        << ',' << result.argmax_col << ',' << (result.within_tolerance ? 1 : 0)
        << '\n';
  }
  if (!result.within_tolerance) {
    err << "Jacobian and finite differences disagree by "
        << format_number(result.max_abs_diff) << " at (" << result.argmax_row
        << ',' << result.argmax_col << "), tolerance "
        << format_number(inv.tolerance) << "\n";
    return kCheckFailed;
  }
  return kOk;
}

int do_report(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const LayeredModel model = read_model(inv);
  const JacobianTrace trace = jacobian_forward(model, read_input(inv.input));
  warn_singular_hits(trace.singular_hits, err);
  // Outputs of a softmax layer are probabilities and share a unit.
  const bool same_unit =
      model.layers.back().activation.kind == ActivationKind::kSoftmax;
  SensitivityReport report = build_report(trace.full, same_unit);
  report.singular_hits = trace.singular_hits;

  const std::size_t k = inv.top_k.value_or(
      std::max(report.feature_ranking.size(), report.output_ranking.size()));
  if (inv.format == "json") {
    report.feature_ranking.resize(
        std::min(k, report.feature_ranking.size()));
    report.output_ranking.resize(std::min(k, report.output_ranking.size()));
    out << report_to_json(report);
    return kOk;
  }
  out << "axis,rank,index,score\n";
  for (auto axis : {Axis::kFeature, Axis::kOutput}) {
    std::size_t rank = 0;
    for (const auto& [index, score] : top_k(report, axis, k)) {
      out << (axis == Axis::kFeature ? "feature" : "output") << ',' << ++rank
          << ',' << index << ',' << format_number(score) << '\n';
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Exact Jacobians of feedforward models by forward propagation",
               args.empty() ? "jacprop" : args.front()};
  app.require_subcommand(1);

  Invocation inv;
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", inv.model_path, "Model file (JSON)")
        ->required();
    sub->add_option("--format", inv.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input", inv.input,
                    "Instance as inline CSV, or @FILE to read it from a file")
        ->required();
  };
  auto add_strict = [&](CLI::App* sub) {
    sub->add_flag("--strict-singularities", inv.strict_singularities,
                  "Fail when a relu-type activation hits its kink");
  };

  auto* validate = app.add_subcommand("validate", "Check model dimensions");
  add_model(validate);

  auto* fwd = app.add_subcommand("forward", "Evaluate the model");
  add_model(fwd);
  add_input(fwd);
  fwd->add_flag("--verbose", inv.verbose, "Print every layer's activation");

  auto* jac = app.add_subcommand("jacobian", "Compute J^[L] or J^[l]");
  add_model(jac);
  add_input(jac);
  add_strict(jac);
  jac->add_option("--layer", inv.layer, "Layer l in 1..L (1 = input)")
      ->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand(
      "check", "Compare the Jacobian with finite differences");
  add_model(check);
  add_input(check);
  add_strict(check);
  check->add_option("--fd-step", inv.fd_step, "Finite-difference step")
      ->check(CLI::PositiveNumber);
  check->add_option("--fd-scheme", inv.fd_scheme, "forward or central")
      ->check(CLI::IsMember({"forward", "central"}));
  check->add_option("--tolerance", inv.tolerance,
                    "Largest accepted absolute difference")
      ->check(CLI::NonNegativeNumber);

  auto* report = app.add_subcommand("report", "Per-instance sensitivity");
  add_model(report);
  add_input(report);
  add_strict(report);
  report->add_option("--top-k", inv.top_k, "Keep the k highest ranked entries")
      ->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("jacprop");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kIoOrParseFailure;
  }

  try {
    if (validate->parsed()) return do_validate(inv, out, err);
    if (fwd->parsed()) return do_forward(inv, out);
    if (jac->parsed()) return do_jacobian(inv, out, err);
    if (check->parsed()) return do_check(inv, out, err);
    if (report->parsed()) return do_report(inv, out, err);
  } catch (const SingularityError& e) {
    err << "error: " << e.what() << "\n";
    return kSingularity;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoOrParseFailure;
  }
  return kIoOrParseFailure;
}

}  // namespace jacprop::cli
