"""Numeric Busemann limit oracle.

Evaluates  b_xi(x, y) = lim_{s->inf} ( d(x, sigma(s)) - d(y, sigma(s)) )
along the ray sigma from x toward xi, for any space exposing dist/ray.
This is the independent cross-check for every closed-form Busemann
implementation in the package, including the product decomposition.

The finite-horizon values are sampled on a geometric schedule s = s0 * r^k
capped by the ray's safely evaluable range.  Models with exponential
convergence (hyperbolic plane, trees) settle by raw differences.  Euclidean
factors and products converge like a power series in 1/s, with additional
exponentially decaying transients exp(-2 theta_i s) from hyperbolic
factors, so the trailing samples are extrapolated with Neville schemes over
several window lengths: short windows dodge the transients, long windows
cut the series truncation, and the scheme whose last two extrapolants agree
best wins.  Products use a denser schedule (r = 2^(1/4)) because skewed
slopes leave only a narrow clean zone between the slowest transient and the
evaluation horizon.
"""

from __future__ import annotations

from .errors import ConvergenceError

DEFAULT_ATOL = 1e-10
DEFAULT_MAX_PARAM = 2.0 ** 20  # hard schedule cap; models stop far earlier


def _window_diagonal(values: list[float], ratio: float, window: int) -> float:
    row = list(values[-window:])
    level = 1
    while len(row) > 1:
        row = [row[i] + (row[i] - row[i - 1]) / (ratio ** level - 1.0)
               for i in range(1, len(row))]
        level += 1
    return row[0]


def busemann_limit(space, xi, x, y, *, atol: float = DEFAULT_ATOL,
                   s0: float = 1.0) -> float:
    """Busemann value by taking the limit numerically along ray(x, xi)."""
    x = space.check_point(x)
    y = space.check_point(y)
    if space.point_eq(x, y):
        return 0.0
    ray = space.ray(x, xi)
    ratio = getattr(space, "limit_ratio", 2.0)
    max_window = getattr(space, "limit_window", 5)
    cap = getattr(ray, "max_param",
                  getattr(space, "max_ray_param", DEFAULT_MAX_PARAM))
    max_param = min(cap, DEFAULT_MAX_PARAM)
    windows = range(3, max_window + 1)

    raws: list[float] = []
    diags: dict[int, list[float]] = {w: [] for w in windows}
    hits: dict[int, int] = {w: 0 for w in windows}
    raw_hits = 0
    s = s0
    while True:
        sigma = ray.eval(s)
        raws.append(space.dist(x, sigma) - space.dist(y, sigma))
        if len(raws) >= 2:
            if abs(raws[-1] - raws[-2]) <= atol:
                raw_hits += 1
                if raw_hits >= 2:
                    return raws[-1]
            else:
                raw_hits = 0
        for w in windows:
            if len(raws) < w:
                continue
            hist = diags[w]
            hist.append(_window_diagonal(raws, ratio, w))
            if len(hist) >= 2 and abs(hist[-1] - hist[-2]) <= atol:
                hits[w] += 1
                if hits[w] >= 2:
                    return hist[-1]
            elif len(hist) >= 2:
                hits[w] = 0
        if s * ratio > max_param:
            break
        s *= ratio

    # horizon reached: take the window whose extrapolants agree best, and
    # accept it when the agreement supports a usable residual
    best = None
    for w in windows:
        hist = diags[w]
        if len(hist) >= 2:
            residual = abs(hist[-1] - hist[-2])
            if best is None or residual < best[0]:
                best = (residual, hist[-1])
    if best is None:
        raise ConvergenceError("Busemann limit horizon too short to start")
    residual, value = best
    if residual > max(1e4 * atol, 1e-6):
        raise ConvergenceError(
            f"Busemann limit not converged by s = {s:g} (residual {residual:g})")
    return value
