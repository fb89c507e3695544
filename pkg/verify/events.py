"""
Joint-event predicates evaluated on the terminal values of a simulated path.

Each factory returns an Event whose predicate reads M_n, [M]_n, <M>_n or an
estimator from a MartingalePath. The events match the inequalities in
bounds/ and applications/ one to one; `EVENT_FAMILIES` maps the names used
on the command line to the factories.
"""

import math
from typing import Callable, Dict, NamedTuple

from models.processes import MartingalePath
from utils.errors import ParameterError

Predicate = Callable[[MartingalePath], bool]


class Event(NamedTuple):
    description: str
    predicate: Predicate


def _ratio(numerator: float, denominator: float) -> float:
    """numerator / denominator with +-inf for a vanishing denominator and nan for 0/0"""
    if denominator == 0:
        if numerator == 0:
            return math.nan
        return math.copysign(math.inf, numerator)
    return numerator / denominator


# Martingale events

def two_sided(x: float) -> Event:
    return Event(f"|M_n| >= {x!r}", lambda path: abs(path.M) >= x)


def predictable_ceiling(x: float, y: float) -> Event:
    """M_n >= x and <M>_n <= y"""
    return Event(
        f"M_n >= {x!r} and <M>_n <= {y!r}",
        lambda path: path.M >= x and path.predictable <= y,
    )


def total_ceiling(x: float, y: float, sided: str = "one") -> Event:
    """M_n >= x (|M_n| >= x when two-sided) and [M]_n <= y"""
    if sided == "two":
        return Event(f"|M_n| >= {x!r} and [M]_n <= {y!r}", lambda path: abs(path.M) >= x and path.total <= y)
    return Event(f"M_n >= {x!r} and [M]_n <= {y!r}", lambda path: path.M >= x and path.total <= y)


def sum_ceiling(x: float, y: float) -> Event:
    """|M_n| >= x and [M]_n + <M>_n <= y"""
    return Event(
        f"|M_n| >= {x!r} and [M]_n + <M>_n <= {y!r}",
        lambda path: abs(path.M) >= x and path.total + path.predictable <= y,
    )


def lower_variation_gap(x: float, y: float, a: float = 0.0, b: float = 1.0, exchange: bool = False) -> Event:
    """
    |M_n| / (a + b <M>_n) >= x and <M>_n >= [M]_n + y; with exchange the
    roles of <M>_n and [M]_n are swapped.
    """
    if exchange:
        def predicate(path: MartingalePath) -> bool:
            return abs(_ratio(path.M, a + b * path.total)) >= x and path.total >= path.predictable + y

        return Event(f"|M_n|/({a!r} + {b!r}[M]_n) >= {x!r} and [M]_n >= <M>_n + {y!r}", predicate)

    def predicate(path: MartingalePath) -> bool:
        return abs(_ratio(path.M, a + b * path.predictable)) >= x and path.predictable >= path.total + y

    return Event(f"|M_n|/({a!r} + {b!r}<M>_n) >= {x!r} and <M>_n >= [M]_n + {y!r}", predicate)


def variation_ratio(x: float, y: float, a: float = 0.0, b: float = 1.0, sided: str = "two", exchange: bool = False) -> Event:
    """M_n / (a + b <M>_n) >= x (absolute value when two-sided) and [M]_n <= y <M>_n"""
    norm = abs if sided == "two" else (lambda v: v)
    if exchange:
        def predicate(path: MartingalePath) -> bool:
            return norm(_ratio(path.M, a + b * path.total)) >= x and path.predictable <= y * path.total

        return Event(f"M_n/({a!r} + {b!r}[M]_n) >= {x!r} and <M>_n <= {y!r}[M]_n ({sided}-sided)", predicate)

    def predicate(path: MartingalePath) -> bool:
        return norm(_ratio(path.M, a + b * path.predictable)) >= x and path.total <= y * path.predictable

    return Event(f"M_n/({a!r} + {b!r}<M>_n) >= {x!r} and [M]_n <= {y!r}<M>_n ({sided}-sided)", predicate)


def total_normalized(x: float, a: float = 0.0, b: float = 1.0, floor: float = 0.0) -> Event:
    """M_n / (a + b [M]_n) >= x and [M]_n >= floor"""

    def predicate(path: MartingalePath) -> bool:
        return _ratio(path.M, a + b * path.total) >= x and path.total >= floor

    suffix = f" and [M]_n >= {floor!r}" if floor > 0 else ""
    return Event(f"M_n/({a!r} + {b!r}[M]_n) >= {x!r}{suffix}", predicate)


def predictable_normalized(x: float, a: float = 0.0, b: float = 1.0) -> Event:
    """M_n / (a + b <M>_n) >= x"""
    return Event(
        f"M_n/({a!r} + {b!r}<M>_n) >= {x!r}",
        lambda path: _ratio(path.M, a + b * path.predictable) >= x,
    )


# Estimator events

def estimator_deviation(estimator: str, x: float, offset: float = 0.0, sided: str = "two") -> Event:
    """|est_n - target| >= x + offset (est_n - target >= x + offset when one-sided)"""
    threshold = x + offset

    def predicate(path: MartingalePath) -> bool:
        if estimator not in path.estimators:
            raise ParameterError(f"Path has no estimator {estimator!r}", f"available: {', '.join(path.estimators)}")
        deviation = path.estimate(estimator) - path.target
        if sided == "two":
            deviation = abs(deviation)
        return deviation >= threshold

    bars = "|" if sided == "two" else ""
    return Event(f"{bars}{estimator} - target{bars} >= {threshold!r}", predicate)


def least_squares(x: float) -> Event:
    return estimator_deviation("theta_hat", x)


def yule_walker(x: float, theta: float = 0.0, one_sided: bool = False) -> Event:
    """|theta_tilde_n - theta| >= x + |theta|, or theta_tilde_n - theta >= x"""
    if one_sided:
        return estimator_deviation("theta_tilde", x, sided="one")
    return estimator_deviation("theta_tilde", x, offset=abs(theta))


def lotka_nagaev(x: float) -> Event:
    return estimator_deviation("m_tilde", x)


def harris(x: float) -> Event:
    return estimator_deviation("m_hat", x)


# family name -> factory(x, **params)
EVENT_FAMILIES: Dict[str, Callable[..., Event]] = {
    "two-sided": two_sided,
    "predictable-ceiling": predictable_ceiling,
    "total-ceiling": total_ceiling,
    "sum-ceiling": sum_ceiling,
    "lower-variation-gap": lower_variation_gap,
    "variation-ratio": variation_ratio,
    "total-normalized": total_normalized,
    "predictable-normalized": predictable_normalized,
    "least-squares": least_squares,
    "yule-walker": yule_walker,
    "lotka-nagaev": lotka_nagaev,
    "harris": harris,
}


def make_event(family: str, x: float, **params) -> Event:
    try:
        factory = EVENT_FAMILIES[family]
    except KeyError:
        raise ParameterError(f"Unknown event family {family!r}", f"expected one of {', '.join(EVENT_FAMILIES)}")
    return factory(x, **params)


__all__ = [
    "Event",
    "Predicate",
    "EVENT_FAMILIES",
    "make_event",
    "two_sided",
    "predictable_ceiling",
    "total_ceiling",
    "sum_ceiling",
    "lower_variation_gap",
    "variation_ratio",
    "total_normalized",
    "predictable_normalized",
    "estimator_deviation",
    "least_squares",
    "yule_walker",
    "lotka_nagaev",
    "harris",
]
