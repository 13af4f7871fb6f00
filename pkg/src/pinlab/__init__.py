"""Optimal pinning sets for network synchronization under the annealed degree approximation."""
from .degree_model import DegreeDistribution, connect_or_regenerate, generate_ucm, sample_degree_sequence
from .estimators import CentralityPinning, ExhaustivePinning, GreedyPinning, ThresholdPinning, make_estimator
from .graph import Graph, PinningPartition, degree_histogram, largest_connected_component, load_edge_list
from .metrics import (EffectivenessCurve, endpoint_effectiveness, evaluate_curve, hamming,
                      improvement_ratios, pinning_efficiency)
from .spectral import SpectralResult, annealed_lambda1, grounded_lambda1, quenched_lambda1

__version__ = "0.1.0"

__all__ = [
    "CentralityPinning", "DegreeDistribution", "EffectivenessCurve", "ExhaustivePinning", "Graph",
    "GreedyPinning", "PinningPartition", "SpectralResult", "ThresholdPinning", "annealed_lambda1",
    "connect_or_regenerate", "degree_histogram", "endpoint_effectiveness", "evaluate_curve",
    "generate_ucm", "grounded_lambda1", "hamming", "improvement_ratios", "largest_connected_component",
    "load_edge_list", "make_estimator", "pinning_efficiency", "quenched_lambda1",
    "sample_degree_sequence",
]
