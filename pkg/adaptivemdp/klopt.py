""" KL divergence and the two KL-constrained linear programs on the simplex: the optimistic
index (largest value within a KL ball) and the minimal KL perturbation beating a threshold """

import logging
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from adaptivemdp.config import SolverFailure

CONSTRAINT_TOLERANCE = 1e-10
MAX_ROOT_ITERATIONS = 200
SUM_TOLERANCE = 1e-12
PROBABILITY_FLOOR = 1e-300
# exp(-745) underflows, so the log-scale brackets stop before it
LOG_FLOOR = -700.0

diag = logging.getLogger("KlOpt")


def _checkDistribution(p, name, strictlyPositive):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1:
        raise ValueError(name + " must be a vector")
    if strictlyPositive and not np.all(p > 0):
        raise ValueError(name + " must be strictly positive")
    if np.any(p < 0):
        raise ValueError(name + " has negative components")
    if abs(p.sum() - 1.0) > SUM_TOLERANCE * max(1, p.size):
        raise ValueError(name + " sums to " + repr(float(p.sum())) + ", not 1")
    return p


def kl_divergence(p, q):
    p = _checkDistribution(p, "p", strictlyPositive=True)
    q = _checkDistribution(q, "q", strictlyPositive=False)
    if p.shape != q.shape:
        raise ValueError("p and q have different lengths")
    if np.any(q <= PROBABILITY_FLOOR):
        return np.inf
    return float(np.sum(p * np.log(p / q)))


def _divergence(p, q):
    # no validation, used inside the root finders on points known to be interior
    return float(np.sum(p * np.log(p / q)))


def _findRoot(function, low, high, what):
    try:
        root, result = brentq(function, low, high, xtol=1e-14, rtol=4 * np.finfo(float).eps,
                              maxiter=MAX_ROOT_ITERATIONS, full_output=True, disp=False)
    except ValueError as e:
        raise SolverFailure(what + ": root not bracketed on [" + repr(low) + ", " + repr(high) + "]",
                            diagnostics={ "low" : low, "high" : high, "error" : str(e) })
    if not result.converged:
        raise SolverFailure(what + ": root finder did not converge in " + str(MAX_ROOT_ITERATIONS) + " iterations",
                            residual=float(function(root)), diagnostics={ "root" : root, "flag" : result.flag })
    return root


def _tiltedMaximizer(p, gaps, logWidth):
    # q_y proportional to p_y / (nu - v_y), written with nu = max(v) + exp(logWidth)
    weights = p / (gaps + np.exp(logWidth))
    return weights / weights.sum()


def ucb_index(p_hat, v, reward, radius):
    """ sup of reward + q.v over q with I(p_hat, q) <= radius. Returns the index and an attaining
    q; an infinite radius gives the unconstrained sup with all mass on the argmax of v """
    p = _checkDistribution(p_hat, "p_hat", strictlyPositive=True)
    v = np.asarray(v, dtype=float)
    if v.shape != p.shape:
        raise ValueError("v must have " + str(p.size) + " entries")
    if radius < 0 or np.isnan(radius):
        raise ValueError("radius must be non-negative, got " + repr(radius))
    top = v.max()
    span = top - v.min()
    if radius == 0 or span == 0:
        return reward + float(p @ v), p.copy()
    atTop = v == top
    if np.isinf(radius):
        corner = atTop / atTop.sum()
        return reward + top, corner

    gaps = top - v
    scale = np.log(span)

    def excess(logWidth):
        return _divergence(p, _tiltedMaximizer(p, gaps, logWidth)) - radius

    high = scale
    while excess(high) > 0:
        high += 1.0
    low = high - 1.0
    while excess(low) <= 0:
        low -= 1.0
        if low < LOG_FLOOR:
            # ball contains points arbitrarily close to the corner; the sup is its closure value
            corner = atTop / atTop.sum()
            diag.debug("UCB radius " + repr(radius) + " reaches the simplex corner")
            return reward + top, corner
    logWidth = _findRoot(excess, low, high, "UCB index")
    maximizer = _tiltedMaximizer(p, gaps, logWidth)
    if excess(logWidth) > CONSTRAINT_TOLERANCE:
        maximizer = _tiltedMaximizer(p, gaps, high)
    return reward + float(maximizer @ v), maximizer


def min_kl_above_threshold(p, v, threshold):
    """ inf of I(p, q) over q with q.v > threshold. 0 when p itself qualifies, +inf when
    no point of the closed simplex does """
    p = _checkDistribution(p, "p", strictlyPositive=True)
    v = np.asarray(v, dtype=float)
    if v.shape != p.shape:
        raise ValueError("v must have " + str(p.size) + " entries")
    if float(p @ v) >= threshold:
        return 0.0
    top = v.max()
    if threshold >= top:
        return np.inf

    offsets = v - threshold
    # lambda = (1 - exp(logSlack)) / (max(v) - threshold) keeps 1 - lambda*offsets strictly positive
    topOffset = top - threshold

    def tilt(logSlack):
        return 1.0 - (1.0 - np.exp(logSlack)) / topOffset * offsets

    def meanShift(logSlack):
        return float(np.sum(p * offsets / tilt(logSlack)))

    high = 0.0
    low = -1.0
    while meanShift(low) <= 0:
        low -= 1.0
        if low < LOG_FLOOR:
            raise SolverFailure("minimal KL: dual bracket collapsed", diagnostics={ "threshold" : threshold })
    logSlack = _findRoot(meanShift, low, high, "minimal KL")
    tilted = tilt(logSlack)
    if np.any(tilted <= PROBABILITY_FLOOR):
        return np.inf
    return float(np.sum(p * np.log(tilted)))


@lru_cache(maxsize=4)
def _simplexMesh(dimension, step):
    count = int(round(1.0 / step))
    interior = np.arange(1, count) * step
    if dimension == 2:
        return np.stack([ interior, 1.0 - interior ], axis=1)
    first, second = np.meshgrid(interior, interior, indexing="ij")
    first, second = first.ravel(), second.ravel()
    third = 1.0 - first - second
    keep = third > step / 2
    return np.stack([ first[keep], second[keep], third[keep] ], axis=1)


def kl_grid_oracle(program, p, v, bound, step=1e-3, reward=0.0):
    """ Exhaustive optimum over an interior simplex mesh, for checking the dual solvers.
    program "ucb": max reward + q.v subject to I(p,q) <= bound.
    program "threshold": min I(p,q) subject to q.v > bound (inf when no mesh point qualifies) """
    p = _checkDistribution(p, "p", strictlyPositive=True)
    v = np.asarray(v, dtype=float)
    if p.size > 3:
        raise ValueError("grid oracle only handles up to 3 states, got " + str(p.size))
    if p.size == 1:
        if program == "ucb":
            return reward + float(v[0])
        return 0.0 if v[0] > bound else np.inf
    if step > 1e-3:
        raise ValueError("grid step must be at most 1e-3")
    mesh = _simplexMesh(p.size, step)
    divergences = np.sum(p * np.log(p / mesh), axis=1)
    values = mesh @ v
    if program == "ucb":
        inside = divergences <= bound
        # the centre is always feasible, add it so a radius of 0 is exact
        return reward + max(float(values[inside].max()) if inside.any() else -np.inf, float(p @ v))
    elif program == "threshold":
        if float(p @ v) > bound:
            return 0.0
        feasible = values > bound
        return float(divergences[feasible].min()) if feasible.any() else np.inf
    raise ValueError("unknown program " + repr(program))
