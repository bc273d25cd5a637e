"""Gaussian basis-set data for H, C, N, O: STO-3G and 6-31G / 6-31G*.

Exponents and contraction coefficients are the standard published values
(EMSL / Gaussian Basis Set Exchange).  Coefficients refer to normalized
primitives; shells are given as (l, [exponents], [coefficients]) with SP
shells split into separate S and P entries sharing exponents.
"""

from __future__ import annotations

STO3G = {
    "H": [
        (0, [3.425250914, 0.6239137298, 0.1688554040],
            [0.1543289673, 0.5353281423, 0.4446345422]),
    ],
    "C": [
        (0, [71.61683735, 13.04509632, 3.530512160],
            [0.1543289673, 0.5353281423, 0.4446345422]),
        (0, [2.941249355, 0.6834830964, 0.2222899159],
            [-0.09996722919, 0.3995128261, 0.7001154689]),
        (1, [2.941249355, 0.6834830964, 0.2222899159],
            [0.1559162750, 0.6076837186, 0.3919573931]),
    ],
    "N": [
        (0, [99.10616896, 18.05231239, 4.885660238],
            [0.1543289673, 0.5353281423, 0.4446345422]),
        (0, [3.780455879, 0.8784966449, 0.2857143744],
            [-0.09996722919, 0.3995128261, 0.7001154689]),
        (1, [3.780455879, 0.8784966449, 0.2857143744],
            [0.1559162750, 0.6076837186, 0.3919573931]),
    ],
    "O": [
        (0, [130.7093214, 23.80886605, 6.443608313],
            [0.1543289673, 0.5353281423, 0.4446345422]),
        (0, [5.033151319, 1.169596125, 0.3803889600],
            [-0.09996722919, 0.3995128261, 0.7001154689]),
        (1, [5.033151319, 1.169596125, 0.3803889600],
            [0.1559162750, 0.6076837186, 0.3919573931]),
    ],
}

_631G = {
    "H": [
        (0, [18.73113696, 2.825394365, 0.6401216923],
            [0.03349460434, 0.2347269535, 0.8137573261]),
        (0, [0.1612777588], [1.0]),
    ],
    "C": [
        (0, [3047.524880, 457.3695180, 103.9486850, 29.21015530, 9.286662960,
             3.163926960],
            [0.001834737132, 0.01403732281, 0.06884262226, 0.2321844432,
             0.4679413484, 0.3623119853]),
        (0, [7.868272350, 1.881288540, 0.5442492580],
            [-0.1193324198, -0.1608541517, 1.143456438]),
        (1, [7.868272350, 1.881288540, 0.5442492580],
            [0.06899906659, 0.3164239610, 0.7443082909]),
        (0, [0.1687144782], [1.0]),
        (1, [0.1687144782], [1.0]),
    ],
    "N": [
        (0, [4173.511460, 627.4579110, 142.9020930, 40.23432930, 12.82021290,
             4.390437010],
            [0.001834772160, 0.01399462700, 0.06858655181, 0.2322408730,
             0.4690699481, 0.3604551991]),
        (0, [11.62636186, 2.716279807, 0.7722183966],
            [-0.1149611817, -0.1691174786, 1.145851947]),
        (1, [11.62636186, 2.716279807, 0.7722183966],
            [0.06757974388, 0.3239072959, 0.7408951398]),
        (0, [0.2120314975], [1.0]),
        (1, [0.2120314975], [1.0]),
    ],
    "O": [
        (0, [5484.671660, 825.2349460, 188.0469580, 52.96450000, 16.89757040,
             5.799635340],
            [0.001831074430, 0.01395017220, 0.06844507810, 0.2327143360,
             0.4701928980, 0.3585208530]),
        (0, [15.53961625, 3.599933586, 1.013761750],
            [-0.1107775495, -0.1480262627, 1.130767015]),
        (1, [15.53961625, 3.599933586, 1.013761750],
            [0.07087426823, 0.3397528391, 0.7271585773]),
        (0, [0.2700058226], [1.0]),
        (1, [0.2700058226], [1.0]),
    ],
}

_POLARIZATION_D = {"C": 0.8, "N": 0.8, "O": 0.8}


def _with_star(element: str) -> list:
    shells = list(_631G[element])
    if element in _POLARIZATION_D:
        shells.append((2, [_POLARIZATION_D[element]], [1.0]))
    return shells


BASIS_SETS = {
    "sto-3g": STO3G,
    "6-31g": _631G,
    "6-31g*": {el: _with_star(el) for el in _631G},
}

NUCLEAR_CHARGE = {"H": 1, "C": 6, "N": 7, "O": 8}

ANGSTROM_TO_BOHR = 1.8897261245650618


def get_shells(element: str, basis: str):
    try:
        return BASIS_SETS[basis.lower()][element]
    except KeyError as exc:
        raise KeyError(f"no data for element {element} in basis {basis}") from exc
