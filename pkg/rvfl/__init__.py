from .core import DesignMatrices
from .core import EnhancementMap
from .core import HyperParams
from .core import OutputWeights
from .core import Standardizer
from .core import encode_label
from .core import extend
from .core import extend_many
from .core import init_enhancement
from .core import predict
from .core import train_batch
from .weighting import WeightScheme
from .weighting import calibrate_theta
from .weighting import limit_proportion
from .weighting import proportion_recent
from .weighting import weight_at
from .incremental import IncrementalState
from .incremental import current_prediction
from .incremental import init_state
from .incremental import load_state
from .incremental import save_state
from .incremental import step
from .incremental import step_rescaled
from .detectors import DetectorKind
from .detectors import detector_update
from .detectors import list_detectors
from .detectors import make_detector
from .managed import ManagedModel
from .managed import managed_step
from .harness import ExperimentConfig
from .harness import RunResult
from .harness import aggregate_runs
from .harness import cumulative_accuracy
from .harness import mean_curves
from .harness import run_experiments
from .harness import run_prequential
from .harness import windowed_accuracy
from .stream import DemoStream
from .stream import DriftSpec
from .stream import LabeledStream
from .stream import load_csv
from .stream import split_offline_online
from .stream import synth_drift_stream
from .stream import write_csv
from .errors import RVFLError
