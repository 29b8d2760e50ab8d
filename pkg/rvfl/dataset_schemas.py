from .datasets import dsms as dsms_schema
from .datasets import synthetic as synthetic_schema

dataset_schemas = {
    "dsms": dsms_schema.schema,
    "synthetic": synthetic_schema.schema,
}
