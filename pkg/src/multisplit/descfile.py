"""Splitting description files.

A description is a JSON object.  Matrix paths are Matrix Market files,
resolved relative to the description file.  Three layouts are understood::

    {"engine": "multisplit", "recipe": "explicit",
     "parts": [{"M": "M1.mtx", "N": "N1.mtx", "weight": 0.5},
               {"M": "M2.mtx", "weight": [0.25, 0.75, ...]}]}

    {"engine": "multisplit", "recipe": "hadjidimos",
     "rho": [0.001, 0.001], "weights": [0.5, 0.5]}

    {"engine": "pss",
     "parts": [{"partition": "strict-upper", "alpha": 2.0, "weight": 0.5},
               {"partition": "strict-lower", "block_sizes": [4, 4],
                "alpha": 1.0, "weight": 0.25},
               {"N": "N3.mtx", "alpha": 1.0, "weight": 0.25}]}

Multisplitting parts use the difference convention ``A = M - N``; an
omitted ``N`` defaults to ``M - A``.  ``weight`` is a scalar ``beta_k`` or the
diagonal of ``E_k``.  PSS parts use the sum convention ``A = M + N`` and give
``N`` either as a file or as a (block) triangular ``partition`` of ``A``.
"""
import json
import os

from .mmio import read_matrix
from .splittings import (bts_split, hadjidimos_multisplitting,
                         make_multisplitting, ps_split, pss_collection, ts_split)

__all__ = ['load_description', 'build_multisplitting', 'build_pss']


def load_description(path):
    path = os.fspath(path)
    with open(path) as fh:
        desc = json.load(fh)
    if not isinstance(desc, dict):
        raise ValueError(f'{path}: description must be a JSON object')
    desc.setdefault('engine', 'multisplit')
    desc['_base'] = os.path.dirname(os.path.abspath(path))
    return desc


def _path(desc, rel):
    if os.path.isabs(rel):
        return rel
    return os.path.join(desc.get('_base', '.'), rel)


def _matrix(desc, rel):
    p = _path(desc, rel)
    if not os.path.exists(p):
        raise FileNotFoundError(p)
    return read_matrix(p)


def build_multisplitting(desc, A):
    """Multisplitting described by ``desc``; returns ``(ms, params)`` where
    ``params`` is the construction's parameter record or ``None``."""
    if desc.get('engine', 'multisplit') != 'multisplit':
        raise ValueError(f"description engine is {desc.get('engine')!r}, expected 'multisplit'")
    recipe = desc.get('recipe', 'explicit')
    if recipe == 'hadjidimos':
        return hadjidimos_multisplitting(A, desc['rho'], desc.get('weights'))
    if recipe != 'explicit':
        raise ValueError(f'unknown multisplitting recipe {recipe!r}')
    if desc.get('convention', 'difference') != 'difference':
        raise ValueError('multisplitting parts must use the difference convention')
    parts, weights = [], []
    for part in desc['parts']:
        M = _matrix(desc, part['M'])
        N = _matrix(desc, part['N']) if 'N' in part else M - A
        parts.append((M, N))
        weights.append(part['weight'])
    return make_multisplitting(A, parts, weights), None


def build_pss(desc, A):
    """PSS collection described by ``desc``; returns ``(splits, betas)``."""
    if desc.get('engine') != 'pss':
        raise ValueError(f"description engine is {desc.get('engine')!r}, expected 'pss'")
    splits, betas = [], []
    for part in desc['parts']:
        alpha = float(part.get('alpha', 1.0))
        if 'N' in part:
            s = ps_split(A, _matrix(desc, part['N']), alpha)
        elif 'block_sizes' in part:
            s = bts_split(A, part['block_sizes'], part.get('partition', 'strict-upper'), alpha)
        else:
            s = ts_split(A, part.get('partition', 'strict-upper'), alpha)
        splits.append(s)
        betas.append(part.get('weight', 1.0 / len(desc['parts'])))
    return pss_collection(splits, betas)
