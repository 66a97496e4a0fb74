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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "jacprop/errors.hpp"
#include "jacprop/fd_oracle.hpp"
#include "jacprop/jacobian.hpp"
#include "jacprop/model_io.hpp"
#include "jacprop/sensitivity.hpp"

namespace py = pybind11;

namespace jacprop {
namespace {

ActivationSpec make_activation(const std::string& kind, std::optional<double> alpha,
                               const std::string& relu_zero_policy) {
  const auto k = parse_activation_kind(kind);
  if (!k) throw SchemaError("unknown activation kind '" + kind + "'");
  const auto policy = parse_relu_zero_policy(relu_zero_policy);
  if (!policy) {
    throw SchemaError("unknown relu_zero_policy '" + relu_zero_policy + "'");
  }
  ActivationSpec spec{*k, 0.0, *policy};
  if (*k == ActivationKind::kLeakyRelu) spec.alpha = alpha.value_or(0.01);
  if (const std::string problem = check_activation(spec); !problem.empty()) {
    throw SchemaError(problem);
  }
  return spec;
}

FdScheme make_scheme(const std::string& name) {
  if (name == "central") return FdScheme::kCentral;
  if (name == "forward") return FdScheme::kForward;
  throw SchemaError("unknown finite-difference scheme '" + name + "'");
}

Axis make_axis(const std::string& name) {
  if (name == "feature") return Axis::kFeature;
  if (name == "output") return Axis::kOutput;
  throw SchemaError("unknown axis '" + name + "'");
}

// Layers arrive as dicts with the same keys as the model file.
LayeredModel model_from_layers(std::size_t input_dim, const py::list& layers) {
  std::vector<AffineLayer> affine;
  for (const auto& item : layers) {
    const auto layer = item.cast<py::dict>();
    AffineLayer a;
    a.weights = layer["weights"].cast<Matrix>();
    if (layer.contains("bias") && !layer["bias"].is_none()) {
      a.bias = layer["bias"].cast<Vector>();
    }
    const std::string kind =
        layer.contains("activation") ? layer["activation"].cast<std::string>() : "identity";
    std::optional<double> alpha;
    if (layer.contains("alpha")) alpha = layer["alpha"].cast<double>();
    const std::string policy = layer.contains("relu_zero_policy")
                                   ? layer["relu_zero_policy"].cast<std::string>()
                                   : "derivative_zero";
    a.activation = make_activation(kind, alpha, policy);
    affine.push_back(std::move(a));
  }
  LayeredModel model = fold_biases(input_dim, affine);
  require_valid(model);
  return model;
}

py::dict comparison_dict(const ComparisonResult& r) {
  py::dict d;
  d["max_abs_diff"] = r.max_abs_diff;
  d["max_rel_diff"] = r.max_rel_diff;
  d["argmax_row"] = r.argmax_row;
  d["argmax_col"] = r.argmax_col;
  d["within_tolerance"] = r.within_tolerance;
  return d;
}

}  // namespace
}  // namespace jacprop

PYBIND11_MODULE(_jacprop, m) {
  using namespace jacprop;
  m.doc() = "Exact input-output Jacobians of layered models by forward propagation.";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", error);
  py::register_exception<NonFiniteError>(m, "NonFiniteError", error);
  py::register_exception<SingularityError>(m, "SingularityError", error);
  py::register_exception<ParseError>(m, "ParseError", error);
  py::register_exception<SchemaError>(m, "SchemaError", error);
  py::register_exception<ValidationError>(m, "ValidationError", error);

  py::class_<LayeredModel>(m, "Model")
      .def_static("from_layers", &model_from_layers, py::arg("input_dim"),
                  py::arg("layers"),
                  "Build a model from dicts with weights, bias, activation, alpha "
                  "and relu_zero_policy.")
      .def_property_readonly("input_dim",
                             [](const LayeredModel& model) { return model.feature_dim(); })
      .def_property_readonly("output_dim", &LayeredModel::output_dim)
      .def_property_readonly("num_layers", &LayeredModel::num_layers)
      .def_property_readonly("has_bias",
                             [](const LayeredModel& model) { return model.constant_input; })
      .def("widths",
           [](const LayeredModel& model) {
             std::vector<std::size_t> w;
             for (std::size_t l = 1; l <= model.num_layers(); ++l) w.push_back(model.width(l));
             return w;
           })
      .def("evaluate", [](const LayeredModel& model, const Vector& x) { return evaluate(model, x); },
           py::arg("x"))
      .def("forward", [](const LayeredModel& model, const Vector& x) { return forward(model, x); },
           py::arg("x"), "Activations a^[1] .. a^[L].")
      .def("violations",
           [](const LayeredModel& model) {
             std::vector<std::pair<std::size_t, std::string>> out;
             for (const auto& v : validate_model(model)) out.emplace_back(v.layer, v.message);
             return out;
           })
      .def("to_json", &save_model)
      .def("__eq__", [](const LayeredModel& a, const LayeredModel& b) { return a == b; })
      .def("__repr__", [](const LayeredModel& model) {
        std::string widths;
        for (std::size_t l = 1; l <= model.num_layers(); ++l) {
          widths += (l == 1 ? "" : "->") + std::to_string(model.width(l));
        }
        return "<jacprop.Model " + widths + ">";
      });

  py::class_<JacobianTrace>(m, "JacobianTrace")
      .def_readonly("full", &JacobianTrace::full)
      .def_readonly("per_layer", &JacobianTrace::per_layer)
      .def_readonly("activations", &JacobianTrace::activations)
      .def_readonly("weighted_inputs", &JacobianTrace::weighted_inputs)
      .def_property_readonly("singular_hits",
                             [](const JacobianTrace& t) {
                               std::vector<std::pair<std::size_t, std::size_t>> hits;
                               for (const auto& h : t.singular_hits) {
                                 hits.emplace_back(h.layer, h.coordinate);
                               }
                               return hits;
                             })
      .def("at_layer", &jacobian_at_layer, py::arg("layer"));

  py::class_<SensitivityReport>(m, "SensitivityReport")
      .def_readonly("feature_scores", &SensitivityReport::feature_scores)
      .def_readonly("output_scores", &SensitivityReport::output_scores)
      .def_readonly("feature_ranking", &SensitivityReport::feature_ranking)
      .def_readonly("output_ranking", &SensitivityReport::output_ranking)
      .def_readonly("per_entry", &SensitivityReport::per_entry)
      .def_readonly("same_unit", &SensitivityReport::same_unit)
      .def("top_k",
           [](const SensitivityReport& r, const std::string& axis, std::size_t k) {
             return top_k(r, make_axis(axis), k);
           },
           py::arg("axis"), py::arg("k"))
      .def("to_json", &report_to_json);

  m.def("load_model", &load_model, py::arg("text"), "Parse and validate a model document.");
  m.def("parse_model", &parse_model, py::arg("text"), "Parse without validating.");
  m.def("save_model", &save_model, py::arg("model"));

  m.def("jacobian",
        [](const LayeredModel& model, const Vector& x) { return jacobian_forward(model, x); },
        py::arg("model"), py::arg("x"));
  m.def("finite_difference_jacobian",
        [](const LayeredModel& model, const Vector& x, double step, const std::string& scheme) {
          return finite_difference_jacobian(model, x, {step, make_scheme(scheme)});
        },
        py::arg("model"), py::arg("x"), py::arg("step") = 1e-5,
        py::arg("scheme") = "central");
  m.def("compare_jacobians",
        [](const Matrix& a, const Matrix& b, double tolerance) {
          return comparison_dict(compare_jacobians(a, b, tolerance));
        },
        py::arg("a"), py::arg("b"), py::arg("tolerance"));
  m.def("sensitivity_report", &build_report, py::arg("jacobian"),
        py::arg("same_unit") = false);

  m.def("activation_apply",
        [](const std::string& kind, const Vector& z, std::optional<double> alpha) {
          return activation_apply(make_activation(kind, alpha, "derivative_zero"), z);
        },
        py::arg("kind"), py::arg("z"), py::arg("alpha") = py::none());
  m.def("activation_jacobian",
        [](const std::string& kind, const Vector& z, std::optional<double> alpha,
           const std::string& relu_zero_policy) {
          return activation_jacobian(make_activation(kind, alpha, relu_zero_policy), z).matrix;
        },
        py::arg("kind"), py::arg("z"), py::arg("alpha") = py::none(),
        py::arg("relu_zero_policy") = "derivative_zero");

  m.def("emit_matrix", &emit_matrix, py::arg("matrix"),
        py::arg("header") = std::vector<std::string>{});
  m.def("parse_vector", &parse_vector, py::arg("text"));
  m.def("parse_matrix", &parse_matrix, py::arg("text"), py::arg("has_header") = false);
}
