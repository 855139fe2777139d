"""Published four-player strategy sets and the win probabilities reported for them.

Matrices are given to four decimals and are therefore only approximately
unitary; project them with :func:`qarbiter.ga.nearest_unitary` before use.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PublishedSet:
    priorities: tuple[float, float, float, float]
    matrices: tuple[np.ndarray, ...]
    reported: tuple[float, float, float, float]


def _m(a, b, c, d):
    return np.array([[a, b], [c, d]], dtype=complex)


PUBLISHED_SETS = {
    "descending-a": PublishedSet(
        priorities=(0.4, 0.3, 0.2, 0.1),
        matrices=(
            _m(-0.0038 - 0.4920j, 0.8361 + 0.2427j, -0.8361 + 0.2427j, -0.0038 + 0.4920j),
            _m(-0.2486 - 0.7967j, 0.5318 - 0.1438j, -0.5318 - 0.1438j, -0.2486 + 0.7967j),
            _m(-0.1978 + 0.0281j, -0.3488 + 0.9157j, 0.3488 + 0.9157j, -0.1978 - 0.0281j),
            _m(-0.7550 + 0.4130j, 0.1562 - 0.4847j, -0.1562 - 0.4847j, -0.7550 - 0.4130j),
        ),
        reported=(0.4010, 0.2990, 0.1935, 0.1065),
    ),
    "descending-b": PublishedSet(
        priorities=(0.4, 0.3, 0.2, 0.1),
        matrices=(
            _m(0.1769 + 0.3634j, 0.8405 - 0.3607j, -0.8405 - 0.3607j, 0.1769 - 0.3634j),
            _m(-0.7518 + 0.4023j, 0.3505 + 0.3874j, -0.3505 + 0.3874j, -0.7518 - 0.4023j),
            _m(-0.2903 + 0.2477j, 0.8993 - 0.2138j, -0.8993 - 0.2138j, -0.2903 - 0.2477j),
            _m(0.7454 - 0.3901j, -0.2846 - 0.4597j, 0.2846 - 0.4597j, 0.7454 + 0.3901j),
        ),
        reported=(0.4009, 0.2996, 0.1934, 0.1061),
    ),
    "middle-heavy": PublishedSet(
        priorities=(0.15, 0.35, 0.35, 0.14),
        matrices=(
            _m(-0.2432 + 0.8720j, -0.4180 + 0.0762j, 0.4180 + 0.0762j, -0.2432 - 0.8720j),
            _m(-0.1250 - 0.1227j, -0.9785 + 0.1093j, 0.9785 + 0.1093j, -0.1250 + 0.1227j),
            _m(0.3280 - 0.8451j, 0.3140 + 0.2821j, -0.3140 + 0.2821j, 0.3280 + 0.8451j),
            _m(0.6939 + 0.1171j, 0.6621 - 0.2578j, -0.6621 - 0.2578j, 0.6939 - 0.1171j),
        ),
        reported=(0.1548, 0.3496, 0.3497, 0.1459),
    ),
}
