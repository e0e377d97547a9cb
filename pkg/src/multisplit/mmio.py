"""Matrix Market reading and writing for dense matrices and vectors.

The heavy lifting is done by :func:`scipy.io.mmread` and
:func:`scipy.io.mmwrite`, which implement the coordinate and array formats
with real, complex, integer and pattern fields and the general, symmetric,
skew-symmetric and Hermitian symmetries.
"""
import io
import os

import numpy as np
import scipy.io
import scipy.sparse

__all__ = ['read_matrix', 'write_matrix', 'read_vector', 'write_vector']


def read_matrix(path):
    """Read a Matrix Market file into a dense array."""
    path = os.fspath(path)
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    M = scipy.io.mmread(path)
    if scipy.sparse.issparse(M):
        M = M.toarray()
    M = np.asarray(M)
    if M.dtype.kind in 'biu':
        M = M.astype(np.float64)
    return M


def write_matrix(path, A, fmt='array', symmetry=None, comment=''):
    """Write ``A`` in Matrix Market format.

    ``fmt`` is ``'array'`` (dense) or ``'coordinate'``.  ``symmetry`` is
    detected when ``None``; pass ``'general'`` to force full storage.
    """
    A = np.asarray(A)
    if fmt == 'coordinate':
        A = scipy.sparse.coo_matrix(A)
    elif fmt != 'array':
        raise ValueError(f"fmt must be 'array' or 'coordinate', got {fmt!r}")
    field = 'complex' if np.iscomplexobj(A) else 'real'
    scipy.io.mmwrite(os.fspath(path), A, comment=comment, field=field,
                     precision=17, symmetry=symmetry)


def read_vector(path):
    """Read a right-hand side: Matrix Market (``n x 1``) or whitespace text."""
    path = os.fspath(path)
    with open(path) as fh:
        head = fh.readline()
    if head.startswith('%%MatrixMarket'):
        v = read_matrix(path)
        return np.asarray(v).reshape(-1)
    data = np.loadtxt(path, dtype=complex, ndmin=1)
    if np.all(data.imag == 0):
        data = data.real
    return data


def write_vector(path, v):
    v = np.asarray(v).reshape(-1, 1)
    field = 'complex' if np.iscomplexobj(v) else 'real'
    scipy.io.mmwrite(os.fspath(path), v, field=field, precision=17,
                     symmetry='general')


def to_string(A, **kwargs):
    buf = io.BytesIO()
    A = np.asarray(A)
    field = 'complex' if np.iscomplexobj(A) else 'real'
    scipy.io.mmwrite(buf, A, field=field, precision=17, **kwargs)
    return buf.getvalue().decode()
