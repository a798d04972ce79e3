"""Corpus-based text generation through dependency-tree construction."""
from .corpus import (CorpusError, DependencyTree, MeaningLabel, MeaningRepresentation, Scenario,
                     Token, all_candidate_labels, load_conllu, load_scenarios)
from .model import FORMAT_VERSION, TrainedModel, train_model
from .realizer import generate

__version__ = "0.1.0"

__all__ = ["CorpusError", "DependencyTree", "MeaningLabel", "MeaningRepresentation", "Scenario",
           "Token", "all_candidate_labels", "load_conllu", "load_scenarios", "FORMAT_VERSION",
           "TrainedModel", "train_model", "generate"]
