import json
import shutil

import pytest

from multitype import main

CONFIG = '''
script-parameters:
  multitype:
    log_level: WARNING
    log_file: null

quick:
  - script: multitype
    script-parameters:
      strategy: linear
'''


@pytest.fixture
def workdir(tmp_path, monkeypatch, fixtures_dir):
    for path in fixtures_dir.glob('*.eq'):
        shutil.copy(path, tmp_path / path.name)
    (tmp_path / 'base.config.yaml').write_text(CONFIG, encoding='utf-8')
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run_json(capsys, *argv) -> dict:
    assert main(list(argv) + ['--json']) == 0
    return json.loads(capsys.readouterr().out)


def test_multitype_json(workdir, capsys):
    document = run_json(capsys, 'multitype', '--input', 'diagonal.eq')
    assert document['command'] == 'multitype'
    assert document['multitype'] == ['4', '6']
    assert document['weight'] == ['1/4', '1/6']
    assert document['generating_sequence'] == [['1/4', '1/4'], ['1/4', '1/6']]
    assert document['flags'] == {'truncated': False, 'elimination_complete': True}
    assert document['model'] == 'z1^2*zb1^2 + z2^3*zb2^3'


def test_multitype_text(workdir, capsys):
    assert main(['multitype', '-i', 'staircase.eq']) == 0
    assert 'multitype: (4, 6)' in capsys.readouterr().out.splitlines()


def test_model_and_normalize(workdir, capsys):
    assert run_json(capsys, 'model', '-i', 'mixed.eq')['weight'] == ['1/4', '1/6']
    document = run_json(capsys, 'normalize', '-i', 'staircase.eq')
    assert document['clean']
    assert document['weight'] == ['1/4', '1/6']


def test_equivalence(workdir, capsys):
    document = run_json(capsys, 'equiv', '-i', 'diagonal.eq', '--input2', 'scaled.eq')
    assert document['verified']
    assert document['target_model'] == '(1/16)*z1^2*zb1^2 + z2^3*zb2^3'


def test_check_weight(workdir, capsys):
    document = run_json(capsys, 'check-weight', '--weight', '1/2,2/5', '-i', 'diagonal.eq')
    assert not document['valid']
    assert 'entry 2' in document['reason']
    document = run_json(capsys, 'check-weight', '--weight', '1/4,1/6', '-i', 'diagonal.eq')
    assert document['valid'] and document['adapted']


def test_oracle(workdir, capsys):
    document = run_json(
        capsys, 'oracle', '-i', 'diagonal.eq', '--denominator-bound', '8', '--map-budget', '50'
    )
    assert document['weight'] == ['1/4', '1/6']


def test_tasklist(workdir, capsys):
    document = run_json(capsys, 'multitype', '-i', 'mixed.eq', '--tasklist', 'quick')
    assert document['multitype'] == ['4', '6']
    assert main(['multitype', '-i', 'mixed.eq', '--tasklist', 'missing']) == 1


@pytest.mark.parametrize(
    'argv, code',
    [
        (['multitype', '-i', 'broken.eq'], 2),
        (['multitype', '-i', 'imaginary.eq'], 3),
        (['multitype', '-i', 'flat.eq'], 4),
        (['multitype', '-i', 'diagonal.eq', '--trunc', '4'], 5),
        (['multitype', '-i', 'absent.eq'], 1),
        (['multitype'], 1),
    ],
)
def test_exit_codes(workdir, argv, code):
    assert main(argv) == code
