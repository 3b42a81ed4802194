"""Matrices of the worked example, entered as exact rationals."""

from fractions import Fraction


def F(s):
    return Fraction(s)


EXAMPLE_A = [[1, 1, 1, 1], [0, 0, 1, 1], [0, 0, 1, 1], [0, 0, 0, 1]]
EXAMPLE_X = [[1, 1, 0], [1, 0, 0], [1, 0, 0], [1, 0, 0]]
EXAMPLE_Y = [[0, 0, 0], [0, 0, 0], [1, 0, 0], [1, 0, 1]]
EXAMPLE_APINV = [
    [F("1/2"), F("-1/4"), F("-1/4"), 0],
    [F("1/2"), F("-1/4"), F("-1/4"), 0],
    [0, F("1/2"), F("1/2"), -1],
    [0, 0, 0, 1],
]
EXAMPLE_XY = [[0, 0, 1, 1]] * 4
EXAMPLE_W1_PINV = [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, F("1/2")], [0, 0, 0, F("1/2")]]
EXAMPLE_W2_PINV = [[0, 0, 0, 0], [F("1/4")] * 4, [F("1/4")] * 4, [0, 0, 0, 0]]
EXAMPLE_UPDATE = [[F("1/2"), 0, 0, 0], [F("1/2"), 0, 0, 0], [0, 0, 0, -1], [0, 0, 0, 0]]


