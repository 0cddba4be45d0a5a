"""Numerics for the conical (cosmic-string) spacetime.

Submodules:
    metric    exact metric, splittings, pointwise bounds, integrability probe
    mollify   mollifier catalog and convolution-smoothed fields
    causal    tangent/curve classification, slice crossings, arclength
    wave      divergence-form finite-difference wave solver
    curvetop  curve-space topologies, canonical parametrizations, compactness
    ioutil    manifests, curve/profile CSVs, snapshot formats
    cli       manifest-driven experiment runner
"""

from .metric import (AxisError, ConicalParams, QuadratureError, QuadratureSpec,
                     angular_components, lower_bound_margin, metric_cartesian,
                     metric_cylindrical, pullback_residual, sobolev_probe,
                     spatial_metric, split_metric)
from .mollify import (MollifierSpec, MollifierVariant, RegularizedField,
                      beta, beta_conservative, bump_mollifier, c_phi,
                      gaussian_mollifier, moment_corrected_mollifier,
                      strict_net_mollifier, strict_net_threshold,
                      verify_lower_bound)
from .causal import (CausalClass, CrossingReport, CurveFamily, PreconditionError,
                     SampledCurve, arclength, cauchy_crossing, classify_tangent,
                     curve_causal_profile, family_crossing, unit_speed_reparam)
from .curvetop import (CurveClass, ParamCurve01, arzela_ascoli_extract,
                       box_lipschitz_constant, image_subset_check,
                       lipschitz_bound, proportional_reparam, to_image_class,
                       uniform_distance)
from .wave import (Grid2D, SpatialOperator, WaveState, assemble, energy,
                   energy_drift, epsilon_study, solve, step)

__version__ = "0.1.0"
