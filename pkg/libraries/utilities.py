# Holds utility functions used across scripts:
# logging setup and reading task configs.

import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import yaml

BASE_CFG = 'base.config.yaml'
DEF_LOG_FILE = 'logs/multitype.log'


def init_logging(logger, level: str = 'INFO', log_file: str = DEF_LOG_FILE):
    # stdout is reserved for reports, so console logs go to stderr
    logger.remove()
    logger.add(
        sys.stderr,
        format='<green>{time:HH:mm:ss}</green> '
        '<level>{level:1.1}</level> '
        '<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line:3d}</cyan> '
        '<level>{message}</level>',
        level=level,
    )
    if log_file:
        logger.add(
            log_file,
            rotation='10MB',
            retention='1 month',
            enqueue=True,
            format='{time:YYYY-MM-DD at HH:mm:ss} | {level} | {message}',
            level=level,
            encoding='utf-8',
        )


@dataclass
class MultitypeTask:
    '''
    Parameters shared by the multitype commands.

    Values come from the script-parameters section of base.config.yaml,
    then from the named task list, then from command line flags.
    '''

    trunc: int = None
    seed: int = 0
    budget: int = 12
    denominator_bound: int = 12
    map_budget: int = 2000
    strategy: str = 'ladder'
    log_level: str = 'INFO'
    log_file: str = DEF_LOG_FILE

    base_cfg: str = BASE_CFG

    def post_update(self):
        '''
        Called after the parameters are read from config files and flags.
        Normalizes types that YAML or argparse may leave as strings.
        '''
        for name in ('seed', 'budget', 'denominator_bound', 'map_budget'):
            setattr(self, name, int(getattr(self, name)))
        if self.trunc is not None:
            self.trunc = int(self.trunc)
        if self.strategy not in ('linear', 'ladder'):
            raise ValueError(f'Unknown elimination strategy {self.strategy!r}')

    def _update(self, values: dict) -> bool:
        names = [field.name for field in fields(self)]
        updated = False
        for key, value in values.items():
            key = key.replace('-', '_')
            if not key.startswith('_') and key in names:
                updated = True
                self.__setattr__(key, value)
        return updated

    def read_config(self, script: str, logger, task_list: str = None, overrides: dict = None):
        base_config = self.base_cfg
        if script.endswith('.py'):
            script = script.rpartition('.')[0]

        yaml_config = {}
        if base_config and Path(base_config).exists():
            with open(base_config, mode='r', encoding='utf-8') as f:
                yaml_config = yaml.safe_load(f) or {}
        elif task_list:
            logger.error('No config found!')
            raise ValueError('No config found!')

        # Defaults section of base config
        defaults = yaml_config.get('script-parameters', {}) or {}
        if script in defaults and self._update(defaults[script] or {}):
            logger.debug(f'Updated parameters from global section of {base_config}.')

        # Overrides from the 'task list' section of base config
        if task_list:
            if task_list not in yaml_config:
                raise ValueError(f'Task list {task_list!r} not found in {base_config}')
            task = [val for val in yaml_config[task_list] if val.get('script') == script]
            if task and self._update(task[0].get('script-parameters', {}) or {}):
                logger.debug(f'Updated parameters from {task_list} section of {base_config}.')

        # Command line flags win over both
        self._update({k: v for k, v in (overrides or {}).items() if v is not None})

        self.post_update()
        logger.debug(f'{asdict(self)}')
        return self
