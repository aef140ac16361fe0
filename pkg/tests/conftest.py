import math

import pytest

from renewalcov.process import Trace


def make_trace(ns, Ps, lams, gaps=None, S=None, s2=None, prefix=(2,),
               max_gap_ratio=0.0):
    """Synthetic trace for diagnostics tests; derives S from 1/lambda if
    not given (S_n = sum over the listed checkpoints only, so pass S
    explicitly when the grid is sparse)."""
    ns = list(ns)
    Ps = [int(p) for p in Ps]
    lams = [float(v) for v in lams]
    if gaps is None:
        gaps = [0] + [Ps[i] - Ps[i - 1] for i in range(1, len(Ps))]
    if S is None:
        acc = 0.0
        S = []
        for v in lams:
            acc += 1.0 / v
            S.append(acc)
    return Trace(n=ns, P=Ps, gap=list(gaps), lam=lams,
                 log_lambda=[math.log(v) for v in lams], S=list(S),
                 s2=list(s2) if s2 is not None else [],
                 prefix=prefix, config_echo=None, max_gap_ratio=max_gap_ratio,
                 max_gap_ratio_left=max_gap_ratio)


@pytest.fixture
def identity_trace():
    """Constant lambda = 1/4 and P_n = 2 + sum_{k<n} 1/lambda_k exactly,
    so the concentration deviation is identically zero."""
    ns = list(range(1, 21))
    lam = 0.25
    Ps = [2 + 4 * (n - 1) for n in ns]
    S = [4.0 * n for n in ns]
    s2 = [16.0 * n for n in ns]
    return make_trace(ns, Ps, [lam] * len(ns), S=S, s2=s2)
