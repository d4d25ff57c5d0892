"""Loading experiment configurations from YAML and JSON files."""
import json
import os
from pathlib import Path

import yaml

from ..exceptions import ConfigurationError

SEED_ENVIRONMENT_VARIABLE = "EPRSIM_SEED"


class NoDatesSafeLoader(yaml.SafeLoader):
    @classmethod
    def remove_implicit_resolver(cls, tag_to_remove):
        """
        Remove implicit resolvers for a particular tag.

        Takes care not to modify resolvers in super classes. Configurations are echoed
        into the JSON summary, so YAML timestamps must stay strings.
        """
        if "yaml_implicit_resolvers" not in cls.__dict__:
            cls.yaml_implicit_resolvers = cls.yaml_implicit_resolvers.copy()

        for first_letter, mappings in cls.yaml_implicit_resolvers.items():
            cls.yaml_implicit_resolvers[first_letter] = [
                (tag, regexp) for tag, regexp in mappings if tag != tag_to_remove
            ]


NoDatesSafeLoader.remove_implicit_resolver("tag:yaml.org,2002:timestamp")


def load_config_from_file(file) -> dict:
    """Safely load an experiment configuration from a YAML or JSON file."""
    file = Path(file)
    if not file.is_file():
        raise ConfigurationError(f"{file} is not a file.")
    if file.suffix not in (".yml", ".yaml", ".json"):
        raise ConfigurationError(f"{file} is not a valid .yml, .yaml or .json file.")

    with open(file, "r", encoding="utf-8") as f:
        try:
            if file.suffix == ".json":
                config = json.load(f)
            else:
                config = yaml.load(f, Loader=NoDatesSafeLoader)
        except (json.JSONDecodeError, yaml.YAMLError, UnicodeDecodeError) as e:
            raise ConfigurationError(f"Could not parse {file}: {e}") from e
    if not isinstance(config, dict):
        raise ConfigurationError(f"{file} must contain a mapping at the top level.")
    return config


def seed_from_environment(environ=None):
    """Return the integer seed from EPRSIM_SEED, or None when unset."""
    environ = os.environ if environ is None else environ
    value = environ.get(SEED_ENVIRONMENT_VARIABLE)
    if value is None or value == "":
        return None
    try:
        return int(value)
    except ValueError as e:
        raise ConfigurationError(f"{SEED_ENVIRONMENT_VARIABLE} must be an integer, got '{value}'.") from e
