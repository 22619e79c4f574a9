"""Root finding for strictly decreasing scalar functions.

One solver serves both the single-code mean-length inversion and the
two-code equilibrium split: both reduce to solving f(x) = target for a
smooth, strictly decreasing f whose limits bracket the target.
"""

from __future__ import annotations

import math
from typing import Callable

__all__ = ["solve_decreasing"]

# Hard ceiling on bracket expansion; any feasible target is bracketed long
# before this because f approaches its limits exponentially fast.
_MAX_EXPAND = 2000


def solve_decreasing(
    f: Callable[[float], float],
    target: float,
    df: Callable[[float], float] | None = None,
    lo: float = -1.0,
    hi: float = 1.0,
    f_tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Solve f(x) = target for strictly decreasing f.

    Starts from the bracket [lo, hi] and grows it geometrically until it
    straddles the target.  Then iterates Newton steps (when df is given)
    safeguarded by bisection: a step is rejected in favour of the midpoint
    whenever it would leave the bracket or fail to shrink faster than
    halving, so progress is at worst geometric.  Iteration continues until
    the bracket collapses to machine precision, making the returned point as
    sharp as float64 allows; f_tol is the guaranteed bound on the residual
    |f(x) - target|, checked at the end.
    """
    if not lo < hi:
        raise ValueError("need lo < hi to start the bracket")

    flo = f(lo)
    fhi = f(hi)
    # Grow left until f(lo) >= target (f decreasing: the left end is the high side).
    for _ in range(_MAX_EXPAND):
        if flo >= target:
            break
        hi, fhi = lo, flo
        lo = 2.0 * lo if lo < 0 else -1.0
        flo = f(lo)
    else:
        raise ValueError(f"could not bracket target {target} from the left")
    # Grow right until f(hi) <= target.
    for _ in range(_MAX_EXPAND):
        if fhi <= target:
            break
        lo, flo = hi, fhi
        hi = 2.0 * hi if hi > 0 else 1.0
        fhi = f(hi)
    else:
        raise ValueError(f"could not bracket target {target} from the right")

    best_x, best_gap = lo, abs(flo - target)
    if abs(fhi - target) < best_gap:
        best_x, best_gap = hi, abs(fhi - target)

    x = 0.5 * (lo + hi)
    step_prev = hi - lo
    step = step_prev
    for _ in range(max_iter):
        fx = f(x)
        if math.isnan(fx):
            raise ValueError(f"function returned nan at {x}")
        gap = abs(fx - target)
        if gap < best_gap:
            best_x, best_gap = x, gap
        if gap == 0.0:
            return x
        if fx > target:
            lo = x
        else:
            hi = x
        width = hi - lo
        if width <= 4.0 * math.ulp(max(abs(lo), abs(hi), 1.0)):
            break
        x_next = math.nan
        if df is not None:
            d = df(x)
            if d != 0.0 and math.isfinite(d):
                candidate = x - (fx - target) / d
                # Accept only if inside the bracket and at least as fast as
                # bisection relative to the step before last (rtsafe rule).
                if lo < candidate < hi and 2.0 * gap <= abs(step_prev * d):
                    x_next = candidate
        step_prev = step
        if math.isnan(x_next):
            x_next = lo + 0.5 * width
        step = x_next - x
        x = x_next

    if best_gap > f_tol:
        raise ValueError(
            f"no convergence: best residual {best_gap:.3e} exceeds {f_tol:.3e}"
        )
    return best_x
