import argparse
from pydoc import locate

import yaml


def _add_option(parser, param_name: str, values: dict, default=None):
    default = values.get('default') if default is None else default
    kwargs = {"help": values.get('description')}
    if 'choices' in values:
        kwargs['choices'] = values['choices']
    if values['type'] in ['int', 'str']:
        parser.add_argument("--" + str(param_name), type=locate(values['type']), default=default, **kwargs)
    elif values['type'] == 'rational':
        # Kept as text and parsed exactly later on.
        parser.add_argument("--" + str(param_name), type=str, default=default, **kwargs)
    elif values['type'] == 'bool':
        parser.add_argument("--" + str(param_name), action="store_true", default=bool(default), **kwargs)
    else:
        raise NotImplementedError(f"Option type '{values['type']}' not implemented.")


def make_parser(cli_config_yaml, prog: str = "lieh1tools"):
    """ One subparser per subcommand; each subcommand pulls its option groups from the YAML table and may
    override group defaults. """
    with open(cli_config_yaml, 'r') as fp:
        config = yaml.safe_load(fp)

    parser = argparse.ArgumentParser(prog=prog, description=config.get('description'))
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for name, sub in config['subcommands'].items():
        subparser = subparsers.add_parser(name, help=sub.get('description'), description=sub.get('description'))
        overrides = sub.get('defaults') or {}
        for group in sub['groups']:
            options = config['groups'][group]
            for param_name, values in options.items():
                _add_option(subparser, param_name, values, overrides.get(param_name))
    return parser
