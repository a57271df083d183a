"""Spectrum-sensing performance of a cognitive-radio node next to an RIS-assisted primary user."""
from ._accel import backend
from .analytic import (
    CltMoments,
    FormulaMode,
    MetricBundle,
    clt_moments,
    detection_argument,
    metric_bundle,
    p_detection,
    p_false_alarm,
    p_missed,
    p_transmission,
    threshold_from_pf,
    throughput,
    throughput_asymptotic,
    throughput_paper_literal,
)
from .model import ChannelParams, RisConfigKind, RngStream, SecondaryNetParams, SensingParams
from .montecarlo import McEstimate, mc_metric_bundle, mc_p_detection, mc_p_false_alarm

__version__ = "0.1.0"
