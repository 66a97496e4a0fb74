"""Exact input-output Jacobians of layered models by forward propagation."""

from ._jacprop import (
    DimensionError,
    Error,
    JacobianTrace,
    Model,
    NonFiniteError,
    ParseError,
    SchemaError,
    SensitivityReport,
    SingularityError,
    ValidationError,
    activation_apply,
    activation_jacobian,
    compare_jacobians,
    emit_matrix,
    finite_difference_jacobian,
    jacobian,
    load_model,
    parse_matrix,
    parse_model,
    parse_vector,
    save_model,
    sensitivity_report,
)


def load_model_file(path):
    with open(path, encoding="utf-8") as f:
        return load_model(f.read())


__all__ = [
    "DimensionError",
    "Error",
    "JacobianTrace",
    "Model",
    "NonFiniteError",
    "ParseError",
    "SchemaError",
    "SensitivityReport",
    "SingularityError",
    "ValidationError",
    "activation_apply",
    "activation_jacobian",
    "compare_jacobians",
    "emit_matrix",
    "finite_difference_jacobian",
    "jacobian",
    "load_model",
    "load_model_file",
    "parse_matrix",
    "parse_model",
    "parse_vector",
    "save_model",
    "sensitivity_report",
]
