"""Behavioural code-integrity attestation workbench for PLC control logic.

Subpackages:
  stlang        parser/type checker/interpreter for the control dialect
  plantmodel    built-in mini-plant, physics stepper, trace generator
  flowanalysis  dynamic input-importance scoring
  dataset       label codec, feature vectors, training-data collection
  learner       from-scratch MLP training (alarm nets and command nets)
  attacklab     code-mutation attacks and adversarial noise search
  attester      trace/stream attestation and false-alarm reporting
"""

__version__ = "0.1.0"
