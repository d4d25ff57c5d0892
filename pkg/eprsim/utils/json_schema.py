"""JSON-schema helpers used to validate experiment configurations."""
import collections.abc
import inspect

import numpy as np

from .types import FilePathType

ANNOTATION_JSON_TYPE_MAP = dict(
    bool="boolean",
    str="string",
    int="integer",
    float="number",
    dict="object",
    list="array",
    tuple="array",
    FilePathType="string",
)


def dict_deep_update(d: dict, u: dict, append_list: bool = True, remove_repeats: bool = True) -> dict:
    """Perform an update to all nested keys of dictionary d from dictionary u."""
    for k, v in u.items():
        if isinstance(v, collections.abc.Mapping):
            d[k] = dict_deep_update(d.get(k, {}), v, append_list=append_list, remove_repeats=remove_repeats)
        elif append_list and isinstance(v, list):
            d[k] = d.get(k, []) + v
            # Remove repeated items if they exist, keeping first-seen order
            if remove_repeats and len(d[k]) > 0:
                d[k] = list(dict.fromkeys(d[k]))
        else:
            d[k] = v
    return d


def get_base_schema(tag=None, root=False, id_=None, **kwargs) -> dict:
    """Return the base schema used for all other schemas."""
    base_schema = dict(required=[], properties={}, type="object", additionalProperties=False)
    if tag is not None:
        base_schema.update(tag=tag)
    if root:
        base_schema.update({"$schema": "http://json-schema.org/draft-07/schema#"})
    if id_:
        base_schema.update({"$id": id_})
    base_schema.update(**kwargs)
    return base_schema


def _json_type_of(annotation, param) -> str:
    if hasattr(annotation, "__args__"):  # Annotation has __args__ if it was made by typing.Union
        args = annotation.__args__
        valid_args = [getattr(x, "__name__", None) in ANNOTATION_JSON_TYPE_MAP for x in args]
        if not any(valid_args):
            raise ValueError("No valid arguments were found in the json type mapping!")
        param_types = [ANNOTATION_JSON_TYPE_MAP[x.__name__] for x in np.array(args, dtype=object)[valid_args]]
        if len(set(param_types)) > 1:
            # int and float unify to number
            if set(param_types) == {"integer", "number"}:
                return "number"
            raise ValueError(
                f"Conflicting json parameter types were detected from the annotation! {annotation.__args__} found."
            )
        return param_types[0]
    name = getattr(annotation, "__name__", None)
    if name not in ANNOTATION_JSON_TYPE_MAP:
        raise ValueError(f"No valid arguments were found in the json type mapping {annotation} for parameter {param}")
    return ANNOTATION_JSON_TYPE_MAP[name]


def get_schema_from_method_signature(class_method, exclude: list = None) -> dict:
    """
    Take a class method and return a json-schema of the input args.

    Parameters
    ----------
    class_method: function
    exclude: list, optional
    Returns
    -------
    dict
    """
    if exclude is None:
        exclude = ["self", "kwargs"]
    else:
        exclude = exclude + ["self", "kwargs"]
    input_schema = get_base_schema()
    for param_name, param in inspect.signature(class_method).parameters.items():
        if param_name in exclude:
            continue
        if param.annotation is param.empty:
            raise NotImplementedError(
                f"The annotation type of '{param}' in function '{class_method}' is not implemented! "
                "Annotate the argument or write the json-schema for this method manually."
            )
        arg_spec = {param_name: dict(type=_json_type_of(param.annotation, param))}
        if param.annotation == FilePathType:
            arg_spec[param_name].update(format="file")
        if param.default is param.empty:
            input_schema["required"].append(param_name)
        elif param.default is not None:
            default = list(param.default) if isinstance(param.default, tuple) else param.default
            arg_spec[param_name].update(default=default)
        input_schema["properties"] = dict_deep_update(input_schema["properties"], arg_spec)
    input_schema["additionalProperties"] = any(
        p.kind == inspect.Parameter.VAR_KEYWORD for p in inspect.signature(class_method).parameters.values()
    )
    return input_schema


def get_defaults(schema: dict) -> dict:
    """Collect the top-level default values declared in a schema."""
    return {key: val["default"] for key, val in schema["properties"].items() if "default" in val}
