"""Pure numpy fallback for the compiled scan kernel."""

import numpy as np


def dominant_diagonal_count(c):
    """Count diagonal entries strictly greater than every other entry in
    their row and their column. Ties do not count."""
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError("similarity matrix must be square")
    diag = np.diag(c)
    off = c.copy()
    np.fill_diagonal(off, -np.inf)
    row_best = off.max(axis=1)
    col_best = off.max(axis=0)
    return int(np.count_nonzero((diag > row_best) & (diag > col_best)))
