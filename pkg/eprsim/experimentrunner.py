"""Validate experiment configurations, run experiments and write their outputs."""
import json
import logging
import time
from pathlib import Path
from typing import Optional

from jsonschema import ValidationError, validate

from . import __version__
from .exceptions import ConfigurationError
from .experiments import experiment_classes
from .utils.io import write_summary, write_table
from .utils.json_schema import get_defaults

logger = logging.getLogger(__name__)

CONFIG_SCHEMA_PATH = Path(__file__).parent / "schemas" / "experiment_schema.json"
SHARED_FIELDS = ("seed", "model", "n_events", "progress")


class ExperimentRunner:
    """Primary class running one configured experiment."""

    experiment_classes = experiment_classes

    @classmethod
    def get_experiment_class(cls, experiment: str):
        if experiment not in cls.experiment_classes:
            raise ConfigurationError(
                f"Unknown experiment '{experiment}'; expected one of {sorted(cls.experiment_classes)}."
            )
        return cls.experiment_classes[experiment]

    @classmethod
    def get_config_schema(cls, experiment: Optional[str] = None):
        """
        Compile the configuration schema, extended by the options of one experiment.

        Fields declared in the shared schema keep their declaration; a default from the
        experiment's signature is added when the shared schema has none.
        """
        with open(CONFIG_SCHEMA_PATH, "r") as f:
            config_schema = json.load(f)
        if experiment is None:
            return config_schema
        options_schema = cls.get_experiment_class(experiment).get_options_schema()
        for key, prop in options_schema["properties"].items():
            if key in config_schema["properties"]:
                if "default" in prop:
                    config_schema["properties"][key].setdefault("default", prop["default"])
            else:
                config_schema["properties"][key] = prop
        return config_schema

    @classmethod
    def validate_config(cls, config: dict):
        """Validate config against the shared schema, then against the schema of its experiment."""
        shared_schema = dict(cls.get_config_schema(), additionalProperties=True)
        try:
            validate(instance=config, schema=shared_schema)
            validate(instance=config, schema=cls.get_config_schema(config["experiment"]))
        except ValidationError as e:
            location = "/".join(str(p) for p in e.absolute_path) or "<root>"
            raise ConfigurationError(f"Invalid configuration at {location}: {e.message}") from e
        logger.info("Configuration is valid!")

    def __init__(self, config: dict):
        """Validate config, fill its defaults and instantiate the experiment."""
        self.validate_config(config)
        experiment_class = self.get_experiment_class(config["experiment"])
        config_schema = self.get_config_schema(config["experiment"])
        self.config = dict(get_defaults(config_schema), **config)
        if self.config.get("angles") is None and experiment_class.default_angles is not None:
            self.config["angles"] = experiment_class.default_angles
        self.output = Path(self.config.get("output") or f"{config['experiment']}_results.csv")

        options_keys = experiment_class.get_options_schema()["properties"]
        self.experiment = experiment_class(**{k: self.config[k] for k in SHARED_FIELDS if k in self.config})
        self.options = {k: self.config[k] for k in options_keys if k in self.config}

    @property
    def summary_path(self) -> Path:
        return self.output.with_suffix(".json")

    def run(self) -> dict:
        """Run the experiment, write the result CSV and the JSON summary, and return the summary."""
        logger.info("Running experiment '%s' with seed %d", self.experiment.name, self.experiment.seed)
        start = time.perf_counter()
        result = self.experiment.run_experiment(**self.options)
        duration = time.perf_counter() - start

        outputs = dict(table=str(write_table(result.table, self.output)))
        for suffix, table in result.extra_tables.items():
            extra_path = self.output.with_name(f"{self.output.stem}_{suffix}.csv")
            outputs[suffix] = str(write_table(table, extra_path))
        summary = dict(
            experiment=self.experiment.name,
            config=self.config,
            seed=self.experiment.seed,
            version=__version__,
            duration_seconds=duration,
            outputs=outputs,
            **result.scalars,
        )
        write_summary(summary, self.summary_path)
        logger.info("Results written to %s and %s", self.output, self.summary_path)
        return summary
