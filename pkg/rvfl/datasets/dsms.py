# Driving-safety monitoring stream: 24 sensor features, three safety levels.
# Column order and label text vary between published copies; override
# label_column / label_values in the run config when they differ.
schema = {
    "name": "dsms",
    "feature_count": 24,
    "label_column": -1,
    "label_values": {
        "safe": 1,
        "generally safe": 2,
        "generally_safe": 2,
        "unsafe": 3,
        "0": 1,
        "1": 2,
        "2": 3,
    },
    "label_names": ["safe", "generally safe", "unsafe"],
    "n_classes": 3,
    "expected_length": 30000,
    "expected_class_counts": {
        "1": 8514,
        "2": 10974,
        "3": 10512,
    },
}
