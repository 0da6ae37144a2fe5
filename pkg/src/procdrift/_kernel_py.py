"""Pure-numpy fallback for the per-trace constraint statistic kernel.

For every trace the kernel produces integer count tensors from which each
template's (activations, satisfied) pair can be read off:

  counts[t, a]      occurrences of a
  chain[t, a, b]    adjacent pairs a,b (immediate follows)
  resp[t, a, b]     occurrences of a with some b anywhere later
  altresp[t, a, b]  occurrences of a with some b later and no a in between
  prec[t, a, b]     occurrences of b with some a anywhere earlier
  altprec[t, a, b]  occurrences of b with some a earlier and no b in between
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def log_tensors(codes: np.ndarray, offsets: np.ndarray, n_acts: int):
    codes = np.ascontiguousarray(codes, dtype=np.int32)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    n_traces = len(offsets) - 1
    a = n_acts
    counts = np.zeros((n_traces, a), np.int64)
    chain = np.zeros((n_traces, a, a), np.int64)
    resp = np.zeros((n_traces, a, a), np.int64)
    altresp = np.zeros((n_traces, a, a), np.int64)
    prec = np.zeros((n_traces, a, a), np.int64)
    altprec = np.zeros((n_traces, a, a), np.int64)

    for t in range(n_traces):
        seq = codes[offsets[t] : offsets[t + 1]]
        n = len(seq)
        if n == 0:
            continue
        counts[t] = np.bincount(seq, minlength=a)
        if n > 1:
            np.add.at(chain[t], (seq[:-1], seq[1:]), 1)

        # prefix[x, i] = occurrences of x in seq[:i]
        onehot = np.zeros((a, n + 1), np.int64)
        onehot[seq, np.arange(1, n + 1)] = 1
        prefix = np.cumsum(onehot, axis=1)

        positions = [np.flatnonzero(seq == x) for x in range(a)]
        last = np.array([p[-1] if len(p) else -1 for p in positions])
        first = np.array([p[0] if len(p) else n for p in positions])

        for x in range(a):
            pos = positions[x]
            if len(pos) == 0:
                continue
            # eventually-follows: occurrences of x strictly before the last b
            resp[t, x, :] = np.searchsorted(pos, last, side="left")
            # eventually-precedes: occurrences of x strictly after the first b
            prec[t, :, x] = len(pos) - np.searchsorted(pos, first, side="right")
            # alternation: target must appear in the gap to the next x
            nxt = np.append(pos[1:], n)
            altresp[t, x, :] = ((prefix[:, nxt] - prefix[:, pos + 1]) > 0).sum(axis=1)
            # alternation (precedence): source in the gap from the previous x
            prev = np.concatenate(([-1], pos[:-1]))
            altprec[t, :, x] = ((prefix[:, pos] - prefix[:, prev + 1]) > 0).sum(axis=1)

    return counts, chain, resp, altresp, prec, altprec
