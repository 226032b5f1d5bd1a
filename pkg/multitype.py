import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from loguru import logger

from libraries.engine import EngineOptions, MultitypeResult, Strategy, compute_multitype
from libraries.eqparser import InputDocument, format_jet, read_document
from libraries.errors import MultitypeError, NotFoundWithinBudget
from libraries.models import equivalence_map, model_of, verify_model_map
from libraries.normalize import make_regular, normalize_model
from libraries.oracle import oracle_multitype
from libraries.reports import (
    adaptedness_document,
    dumps,
    map_document,
    normalization_document,
    result_document,
    text_lines,
    weight_strings,
)
from libraries.transforms import apply
from libraries.utilities import MultitypeTask, init_logging
from libraries.weights import is_adapted, parse_fraction_list, validate_weight

# Multitype of a real hypersurface v = F(z, zb, u) given as an equation file.
#    Examples: multitype.py multitype --input diag.eq --json
#              multitype.py check-weight --weight 1/4,1/6 --input f.eq
#              multitype.py equiv --input a.eq --input2 b.eq


@dataclass
class MultitypeCommand(MultitypeTask):
    '''
    Base for the commands: reads the input files and runs the engine.

    Attributes
    ----------
    input
        Equation file with the defining function
    input2
        Second equation file, used by `equiv`
    weight
        Comma-separated weight, used by `check-weight`
    '''

    input: str = None
    input2: str = None
    weight: str = None

    def document(self, path: str = None) -> InputDocument:
        path = path or self.input
        if not path:
            raise ValueError('No input file given, use --input')
        logger.info(f'Reading {path}')
        return read_document(path)

    def jet(self, path: str = None):
        document = self.document(path)
        return document.jet(self.trunc or document.option('trunc'))

    def engine(self, jet) -> MultitypeResult:
        options = EngineOptions(trunc=self.trunc or jet.trunc, strategy=Strategy(self.strategy))
        return compute_multitype(jet, options)

    def run(self) -> dict:
        raise NotImplementedError


@dataclass
class Multitype(MultitypeCommand):
    def run(self) -> dict:
        result = self.engine(self.jet())
        logger.info(f'Multitype {result.multitype}')
        return result_document(result)


@dataclass
class Model(MultitypeCommand):
    def run(self) -> dict:
        result = self.engine(self.jet())
        return {'weight': weight_strings(result.weight), 'model': format_jet(model_of(result))}


@dataclass
class Normalize(MultitypeCommand):
    def run(self) -> dict:
        result = self.engine(self.jet())
        regular = make_regular(result.model, result.weight, self.seed)
        maps, normal, report = normalize_model(apply(result.model, regular), result.weight)
        document = normalization_document([regular] + maps, normal, report)
        document['weight'] = weight_strings(result.weight)
        return document


@dataclass
class Equivalence(MultitypeCommand):
    def run(self) -> dict:
        first = self.engine(self.jet(self.input))
        second = self.engine(self.jet(self.input2))
        if first.weight != second.weight:
            raise NotFoundWithinBudget(
                f'Different multitype weights {first.weight} and {second.weight}'
            )
        hmap = equivalence_map(first.model, second.model, first.weight, self.budget, self.seed)
        verify_model_map(hmap, first.model, second.model).raise_for_failure()
        return {
            'weight': weight_strings(first.weight),
            'source_model': format_jet(first.model),
            'target_model': format_jet(second.model),
            'map': map_document(hmap),
            'verified': True,
        }


@dataclass
class CheckWeight(MultitypeCommand):
    def run(self) -> dict:
        if not self.weight:
            raise ValueError('No weight given, use --weight')
        weight, reason = validate_weight(parse_fraction_list(self.weight))
        if weight is None:
            return {'weight': self.weight, 'valid': False, 'reason': reason}
        document = adaptedness_document(weight, is_adapted(self.jet(), weight))
        document['valid'] = True
        return document


@dataclass
class Oracle(MultitypeCommand):
    def run(self) -> dict:
        weight = oracle_multitype(self.jet(), self.denominator_bound, self.map_budget)
        return {'weight': weight_strings(weight)}


MULTITYPE_ACTIONS = {
    'multitype': Multitype,
    'normalize': Normalize,
    'model': Model,
    'equiv': Equivalence,
    'check-weight': CheckWeight,
    'oracle': Oracle,
}


def parse_arguments(argv=None):
    parser = argparse.ArgumentParser(
        description='''
    Catlin multitype of a polynomial real hypersurface, its model and
    maps between models. Reads config from base.config.yaml and command line.'''
    )
    parser.add_argument('action', choices=MULTITYPE_ACTIONS, help='Command to run')
    parser.add_argument('--input', '-i', default=None, help='Equation file')
    parser.add_argument('--input2', default=None, help='Second equation file for `equiv`')
    parser.add_argument('--json', action='store_true', help='Print a JSON document')
    parser.add_argument('--trunc', type=int, default=None, help='Truncation degree D')
    parser.add_argument('--seed', type=int, default=None, help='Seed for random choices')
    parser.add_argument('--budget', type=int, default=None, help='Search budget for `equiv`')
    parser.add_argument(
        '--denominator-bound', type=int, default=None, help='Smallest entry 1/(B+1) for `oracle`'
    )
    parser.add_argument('--map-budget', type=int, default=None, help='Map family size for `oracle`')
    parser.add_argument('--strategy', choices=('linear', 'ladder'), default=None)
    parser.add_argument('--weight', default=None, help='Weight such as 1/4,1/6')
    parser.add_argument('--tasklist', default=None, help='Task list to use from base.config.yaml')
    parser.add_argument('--config', default=None, help='Config file, defaults to base.config.yaml')
    return parser.parse_args(argv)


def main(argv=None) -> int:
    init_logging(logger, log_file=None)
    params = parse_arguments(argv)
    task = MULTITYPE_ACTIONS[params.action]()
    if params.config:
        task.base_cfg = params.config
    overrides = {
        name: getattr(params, name)
        for name in (
            'input', 'input2', 'trunc', 'seed', 'budget',
            'denominator_bound', 'map_budget', 'strategy', 'weight',
        )
    }
    try:
        task.read_config(Path(__file__).name, logger, params.tasklist, overrides)
        init_logging(logger, task.log_level, task.log_file)
        document = task.run()
    except MultitypeError as error:
        logger.error(f'{type(error).__name__}: {error}')
        return error.exit_code
    except (OSError, ValueError) as error:
        logger.error(str(error))
        return 1
    document['command'] = params.action
    if params.json:
        print(dumps(document))
    else:
        print('\n'.join(text_lines(document)))
    return 0


# Run the script if it isn't imported
if __name__ == '__main__':
    sys.exit(main())
