# Rendering of results as canonical JSON documents and plain text.
# Every rational goes out as a lowest-terms string, never as a float.

import json

from libraries.eqparser import format_coefficient, format_holomorphic, format_jet
from libraries.engine import MultitypeResult, StageTrace
from libraries.normalize import NormalizationReport
from libraries.transforms import HoloMap
from libraries.weights import AdaptednessReport, Weight, format_fraction


def weight_strings(weight: Weight) -> list:
    return [format_fraction(x) for x in weight]


def multitype_strings(multitype: tuple) -> list:
    return ['inf' if m is None else format_fraction(m) for m in multitype]


def key_string(key) -> str:
    return f'{list(key.alpha)}/{list(key.alpha_hat)}/{key.l}'


def map_document(hmap: HoloMap) -> dict:
    document = {
        f'z{i + 1}': format_holomorphic(comp) for i, comp in enumerate(hmap.components()[:-1])
    }
    document['w'] = format_holomorphic(hmap.components()[-1])
    return document


def stage_document(trace: StageTrace) -> dict:
    return {
        'index': trace.index,
        'weight': weight_strings(trace.weight),
        'eliminated_before': trace.eliminated_before,
        'eliminated': trace.eliminated,
        'fixed': [format_fraction(x) for x in trace.fixed],
        'theta': [
            {
                'key': key_string(entry.key),
                'coefficient': format_coefficient(entry.coefficient),
                'value': format_fraction(entry.value),
            }
            for entry in trace.theta
        ],
        'w_max': None if trace.w_max is None else format_fraction(trace.w_max),
        'maps': len(trace.maps),
        'complete': trace.complete,
    }


def result_document(result: MultitypeResult) -> dict:
    return {
        'n': result.weight.n,
        'multitype': multitype_strings(result.multitype),
        'weight': weight_strings(result.weight),
        'generating_sequence': [weight_strings(w) for w in result.generating.weights],
        'stages': [stage_document(trace) for trace in result.traces],
        'model': format_jet(result.model),
        'witness_map': map_document(result.total_map),
        'flags': {
            'truncated': result.truncated,
            'elimination_complete': result.complete,
        },
        'trunc': result.jet.trunc,
    }


def normalization_document(maps: list, normal, report: NormalizationReport) -> dict:
    return {
        'model': format_jet(normal),
        'maps': [map_document(hmap) for hmap in maps],
        'leading_terms': [
            {'k': lead.k, 'gamma': list(lead.gamma), 'gamma_hat': list(lead.gamma_hat)}
            for lead in report.leading
        ],
        'residual_scalings': [
            {'k': r.k, 'coefficient': format_coefficient(r.coefficient), 'p': r.p, 'q': r.q}
            for r in report.residual_scalings
        ],
        'skipped_axes': report.skipped_axes,
        'leftover_targets': [{'k': k, 'key': key_string(key)} for k, key in report.leftover_targets],
        'verbatim_nonzero': [{'k': k, 'key': key_string(key)} for k, key in report.verbatim_nonzero],
        'clean': report.clean,
    }


def adaptedness_document(weight: Weight, report: AdaptednessReport) -> dict:
    return {
        'weight': weight_strings(weight),
        'adapted': report.adapted,
        'reason': report.reason,
        'offending': [key_string(key) for key in report.offending],
        'model': None if report.model is None else format_jet(report.model),
    }


def dumps(document: dict) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False)


def text_lines(document: dict, indent: str = '') -> list:
    lines = []
    for key in sorted(document):
        value = document[key]
        if isinstance(value, dict):
            lines.append(f'{indent}{key}:')
            lines.extend(text_lines(value, indent + '  '))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f'{indent}{key}:')
            for item in value:
                lines.append(f'{indent}  -')
                lines.extend(text_lines(item, indent + '    '))
        elif isinstance(value, list):
            lines.append(f'{indent}{key}: {_tuple_text(value)}')
        else:
            lines.append(f'{indent}{key}: {value}')
    return lines


def _tuple_text(values: list) -> str:
    return '(' + ', '.join(_tuple_text(v) if isinstance(v, list) else str(v) for v in values) + ')'
