"""
Experiment configuration files: the published schema, validation that
collects every problem before reporting, and the translation into
ExperimentConfig objects.
"""
import json

from .dataset_schemas import dataset_schemas
from .detectors import DetectorKind
from .errors import ConfigError, InvalidArgumentError
from .harness import DEFAULT_SEEDS, METHODS, ExperimentConfig
from .incremental import MODES
from .stream import DriftSpec

_POSITIVE_INT = {"type": "integer", "minimum": 1}

SEGMENT_SCHEMA = {
    "type": "object",
    "required": ["length", "class_means"],
    "additionalProperties": False,
    "properties": {
        "length": _POSITIVE_INT,
        "class_means": {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1,
                                                                    "items": {"type": "number"}}},
        "scale": {"type": "number", "exclusiveMinimum": 0},
    },
}

SYNTH_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "segments": {"type": "array", "minItems": 1, "items": SEGMENT_SCHEMA},
        "d": _POSITIVE_INT,
        "m": _POSITIVE_INT,
        "segment_length": _POSITIVE_INT,
        "n_segments": _POSITIVE_INT,
        "separation": {"type": "number"},
        "scale": {"type": "number", "exclusiveMinimum": 0},
        "shift": {"type": "integer"},
    },
}

CSV_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "feature_count": _POSITIVE_INT,
        "label_column": {"type": ["integer", "string"]},
        "label_values": {"type": "object", "additionalProperties": _POSITIVE_INT},
        "label_names": {"type": "array", "items": {"type": "string"}},
        "n_classes": _POSITIVE_INT,
        "expected_length": _POSITIVE_INT,
        "expected_class_counts": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
    },
}

# presets that describe a file layout; the others describe generated streams
CSV_PRESETS = sorted(name for name, preset in dataset_schemas.items() if "feature_count" in preset)

METHOD_SCHEMA = {
    "type": "object",
    "required": ["method"],
    "additionalProperties": False,
    "properties": {
        "method": {"enum": list(METHODS)},
        "theta": {"type": "number", "minimum": 1},
        "k": _POSITIVE_INT,
        "detector": {"enum": sorted(DetectorKind.DEFAULTS)},
        "params": {"type": "object"},
        "mode": {"enum": list(MODES)},
    },
}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["data", "methods"],
    "additionalProperties": False,
    "properties": {
        "data": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "path": {"type": "string"},
                "preset": {"enum": sorted(dataset_schemas)},
                "schema": CSV_SCHEMA,
                "synthetic": SYNTH_SCHEMA,
            },
        },
        "methods": {"type": "array", "minItems": 1, "items": METHOD_SCHEMA},
        "seeds": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 0}},
        "output_dir": {"type": "string"},
        "offline_count": _POSITIVE_INT,
        "window": _POSITIVE_INT,
        "periodic_retrain_every": {"type": ["integer", "null"], "minimum": 1},
        "hyperparameters": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "lambda": {"type": "number", "exclusiveMinimum": 0},
                "n_groups": _POSITIVE_INT,
                "nodes_per_group": _POSITIVE_INT,
                "standardize": {"type": "boolean"},
                "mode": {"enum": list(MODES)},
            },
        },
    },
}

_TYPES = {
    "object": lambda v: isinstance(v, dict),
    "array": lambda v: isinstance(v, list),
    "string": lambda v: isinstance(v, str),
    "boolean": lambda v: isinstance(v, bool),
    "integer": lambda v: isinstance(v, int) and not isinstance(v, bool),
    "number": lambda v: isinstance(v, (int, float)) and not isinstance(v, bool),
    "null": lambda v: v is None,
}


def _check(value, schema, path, diagnostics):
    types = schema.get("type")
    if types is not None:
        if isinstance(types, str):
            types = [types]
        if not any(_TYPES[t](value) for t in types):
            diagnostics.append("{0}: expected {1}, got {2}".format(path, " or ".join(types), json.dumps(value)))
            return
    if "enum" in schema and value not in schema["enum"]:
        diagnostics.append("{0}: '{1}' is not one of: {2}".format(path, value, ", ".join(map(str, schema["enum"]))))
        return
    if _TYPES["number"](value):
        if "minimum" in schema and value < schema["minimum"]:
            diagnostics.append("{0}: must be >= {1}, got {2}".format(path, schema["minimum"], value))
        if "exclusiveMinimum" in schema and value <= schema["exclusiveMinimum"]:
            diagnostics.append("{0}: must be > {1}, got {2}".format(path, schema["exclusiveMinimum"], value))
    if isinstance(value, list):
        if len(value) < schema.get("minItems", 0):
            diagnostics.append("{0}: needs at least {1} item(s)".format(path, schema["minItems"]))
        if "items" in schema:
            for i, item in enumerate(value):
                _check(item, schema["items"], "{0}[{1}]".format(path, i), diagnostics)
    if isinstance(value, dict):
        for key in schema.get("required", []):
            if key not in value:
                diagnostics.append("{0}: missing required key '{1}'".format(path, key))
        properties = schema.get("properties", {})
        extra = schema.get("additionalProperties", True)
        for key, item in value.items():
            if key in properties:
                _check(item, properties[key], "{0}.{1}".format(path, key), diagnostics)
            elif extra is False:
                diagnostics.append("{0}: unknown key '{1}'".format(path, key))
            elif isinstance(extra, dict):
                _check(item, extra, "{0}.{1}".format(path, key), diagnostics)


def schema_diagnostics(doc, schema):
    """Every structural problem of doc under schema, as 'path: message' lines."""
    diagnostics = []
    _check(doc, schema, "$", diagnostics)
    return diagnostics


class RunPlan(object):
    """A validated run configuration."""

    def __init__(self, data, configs, output_dir):
        self.data = data
        self.configs = configs
        self.output_dir = output_dir

    @property
    def seeds(self):
        return self.configs[0].seeds

    @property
    def offline_count(self):
        return self.configs[0].offline_count

    @property
    def window(self):
        return self.configs[0].window


def validate_synth_spec(doc):
    """Validate a synthetic stream description and build its DriftSpec."""
    diagnostics = schema_diagnostics(doc, SYNTH_SCHEMA)
    if not diagnostics:
        try:
            return DriftSpec.from_dict(doc)
        except (InvalidArgumentError, TypeError) as e:
            diagnostics.append("$: {0}".format(e))
    raise ConfigError(diagnostics)


def validate_config(doc):
    """
    Check a run configuration and turn it into a RunPlan.

    Raises
    ------
    ConfigError
        listing every problem found

    Examples
    --------
    >>> plan = validate_config({"data": {"synthetic": {"d": 4, "m": 2, "segment_length": 50}},
    ...                         "methods": [{"method": "lite", "theta": 1.003}]})
    >>> [c.label for c in plan.configs]
    ['Lite-RVFL(theta=1.003)']
    """
    diagnostics = schema_diagnostics(doc, CONFIG_SCHEMA)
    if diagnostics:
        raise ConfigError(diagnostics)

    data = doc["data"]
    preset = data.get("preset")
    if ("path" in data) == ("synthetic" in data):
        diagnostics.append("$.data: give exactly one of 'path' or 'synthetic'")
    elif "synthetic" in data:
        for key in ("preset", "schema"):
            if key in data:
                diagnostics.append("$.data.{0}: applies to a 'path' only".format(key))
    elif preset is None and "schema" not in data:
        diagnostics.append("$.data: a 'path' needs a 'preset' or a 'schema'")
    elif preset is not None and preset not in CSV_PRESETS:
        diagnostics.append("$.data.preset: '{0}' does not describe a CSV file. Must be one of: {1}".format(
            preset, ", ".join(CSV_PRESETS)))
    elif preset is None and "feature_count" not in data["schema"]:
        diagnostics.append("$.data.schema: missing required key 'feature_count'")
    if "synthetic" in data:
        try:
            DriftSpec.from_dict(data["synthetic"])
        except (InvalidArgumentError, TypeError) as e:
            diagnostics.append("$.data.synthetic: {0}".format(e))

    hyper = doc.get("hyperparameters", {})
    shared = {
        "offline_count": doc.get("offline_count", 200),
        "seeds": doc.get("seeds", list(DEFAULT_SEEDS)),
        "window": doc.get("window", 500),
        "lam": hyper.get("lambda", 0.1),
        "n_groups": hyper.get("n_groups", 10),
        "nodes_per_group": hyper.get("nodes_per_group", 10),
        "standardize": hyper.get("standardize", False),
    }
    configs = []
    for i, method in enumerate(doc["methods"]):
        path = "$.methods[{0}]".format(i)
        name = method["method"]
        kwargs = dict(shared)
        kwargs["mode"] = method.get("mode", hyper.get("mode", "direct"))
        if name != "managed":
            kwargs["periodic_retrain_every"] = doc.get("periodic_retrain_every")
        if name == "lite":
            kwargs["theta"] = method.get("theta", 1.003)
        elif name == "alt":
            kwargs["k"] = method.get("k", 2)
        elif name == "managed":
            if "detector" not in method:
                diagnostics.append("{0}: managed methods need a 'detector'".format(path))
                continue
            try:
                kwargs["detector"] = DetectorKind(method["detector"], **method.get("params", {}))
            except InvalidArgumentError as e:
                diagnostics.append("{0}.params: {1}".format(path, e))
                continue
        for key in ("theta", "k", "detector", "params"):
            if key in method and name != {"theta": "lite", "k": "alt"}.get(key, "managed"):
                diagnostics.append("{0}: '{1}' does not apply to method '{2}'".format(path, key, name))
        try:
            configs.append(ExperimentConfig(name, **kwargs))
        except InvalidArgumentError as e:
            diagnostics.append("{0}: {1}".format(path, e))

    labels = [c.label for c in configs]
    for label in sorted(set(l for l in labels if labels.count(l) > 1)):
        diagnostics.append("$.methods: '{0}' is listed more than once".format(label))

    if diagnostics:
        raise ConfigError(diagnostics)
    return RunPlan(data, configs, doc.get("output_dir", "rvfl-output"))


def read_json(path):
    """Parse a JSON document; unreadable or malformed files are ConfigErrors."""
    try:
        with open(path) as f:
            doc = json.load(f)
    except (IOError, OSError) as e:
        raise ConfigError("{0}: could not be read ({1})".format(path, e))
    except ValueError as e:
        raise ConfigError("{0}: not valid JSON ({1})".format(path, e))
    return doc


def load_config(path):
    """Read and validate a JSON run configuration."""
    return validate_config(read_json(path))
