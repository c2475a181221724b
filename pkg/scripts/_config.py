"""Turn a dataclass of defaults into command-line overrides."""
from __future__ import annotations

import argparse
import dataclasses
import typing


def parse_config(cls, argv=None):
    parser = argparse.ArgumentParser(description=cls.__doc__)
    hints = typing.get_type_hints(cls)
    for f in dataclasses.fields(cls):
        hint = hints[f.name]
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        flag = "--" + f.name.replace("_", "-")
        if typing.get_origin(hint) is tuple:
            item = typing.get_args(hint)[0]
            parser.add_argument(flag, type=item, nargs="+", default=default)
        else:
            parser.add_argument(flag, type=hint, default=default)
    return cls(**{k: tuple(v) if isinstance(v, list) else v for k, v in vars(parser.parse_args(argv)).items()})
