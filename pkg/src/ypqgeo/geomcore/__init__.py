"""Chart-level differential geometry: jets, forms, curvature, Killing ops."""

from .charts import Chart, ChartPoint, DEFAULT_MARGIN, base_point, cone_point
from .forms import AntisymForm, d_field, differential, wedge
from .jets import Jet2, constant, seed, variable
from .curvature import (
    FormField,
    MetricEval,
    MetricField,
    SpecialKillingFit,
    christoffel,
    constant_tensor_field,
    covariant_derivative_form,
    evaluate_form,
    evaluate_metric,
    exterior_derivative,
    killing_vector_residual,
    killing_yano_residual,
    ky_tensor_field,
    ky_to_sk,
    metric_tensor_field,
    ricci,
    special_killing_fit,
    stackel_killing_residual,
    volume_form,
    volume_form_field,
)

__all__ = [
    "Chart", "ChartPoint", "DEFAULT_MARGIN", "base_point", "cone_point",
    "AntisymForm", "d_field", "differential", "wedge",
    "Jet2", "constant", "seed", "variable",
    "FormField", "MetricEval", "MetricField", "SpecialKillingFit",
    "christoffel", "constant_tensor_field", "covariant_derivative_form",
    "evaluate_form", "evaluate_metric", "exterior_derivative",
    "killing_vector_residual", "killing_yano_residual", "ky_tensor_field",
    "ky_to_sk", "metric_tensor_field", "ricci", "special_killing_fit",
    "stackel_killing_residual", "volume_form", "volume_form_field",
]
