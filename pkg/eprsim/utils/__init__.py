from .json_schema import get_base_schema, get_schema_from_method_signature, dict_deep_update, get_defaults
from .config import load_config_from_file
from .random import make_rng, spawn_rngs, derive_seed
