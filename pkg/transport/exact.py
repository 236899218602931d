#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Simplexe de transport en arithmétique rationnelle exacte.
Sert d'oracle pour les petites instances (n, m <= 5 par défaut).
"""

import logging
from collections import deque
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from config.settings import get_settings
from measures.errors import BudgetExceededError, DimensionMismatchError, SolverError

logger = logging.getLogger("tcilab.transport")

MAX_PIVOTS = 10000
DENOMINATOR_LIMIT = 10 ** 12

Cell = Tuple[int, int]


def to_fraction(x) -> Fraction:
    """Conversion exacte des rationnels, approchée au dénominateur 10^12 pour les flottants"""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(float(x)).limit_denominator(DENOMINATOR_LIMIT)


def _balanced(weights: Sequence) -> List[Fraction]:
    values = [to_fraction(x) for x in weights]
    # la dernière masse absorbe l'écart d'arrondi pour que la somme vaille 1
    values[-1] = Fraction(1) - sum(values[:-1], Fraction(0))
    if values[-1] < 0:
        raise SolverError("Marges incompatibles avec une conversion rationnelle exacte")
    return values


def _northwest_corner(a: List[Fraction], b: List[Fraction]) -> Dict[Cell, Fraction]:
    a, b = list(a), list(b)
    n, m = len(a), len(b)
    basis: Dict[Cell, Fraction] = {}
    i = j = 0
    for _ in range(n + m - 1):
        amount = min(a[i], b[j])
        basis[(i, j)] = amount
        a[i] -= amount
        b[j] -= amount
        if i == n - 1:
            j += 1
        elif j == m - 1:
            i += 1
        elif a[i] == 0:
            i += 1
        else:
            j += 1
    return basis


def _potentials(basis: Dict[Cell, Fraction], C, n: int, m: int):
    # u_i + v_j = C_ij sur les cellules de base (arbre couvrant), u_0 = 0
    u: List[Optional[Fraction]] = [None] * n
    v: List[Optional[Fraction]] = [None] * m
    u[0] = Fraction(0)
    rows: Dict[int, List[int]] = {}
    cols: Dict[int, List[int]] = {}
    for (i, j) in basis:
        rows.setdefault(i, []).append(j)
        cols.setdefault(j, []).append(i)
    queue = deque([("r", 0)])
    while queue:
        side, k = queue.popleft()
        if side == "r":
            for j in rows.get(k, []):
                if v[j] is None:
                    v[j] = C[k][j] - u[k]
                    queue.append(("c", j))
        else:
            for i in cols.get(k, []):
                if u[i] is None:
                    u[i] = C[i][k] - v[k]
                    queue.append(("r", i))
    if any(x is None for x in u) or any(x is None for x in v):
        raise SolverError("Base dégénérée non connexe")
    return u, v


def _tree_path(basis: Dict[Cell, Fraction], start_row: int, end_col: int) -> List[Cell]:
    # chemin de cellules de base reliant la ligne start_row à la colonne end_col
    adjacency: Dict[Tuple[str, int], List[Tuple[Tuple[str, int], Cell]]] = {}
    for (i, j) in basis:
        adjacency.setdefault(("r", i), []).append((("c", j), (i, j)))
        adjacency.setdefault(("c", j), []).append((("r", i), (i, j)))
    start, goal = ("r", start_row), ("c", end_col)
    previous = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            break
        for neighbour, cell in adjacency.get(node, []):
            if neighbour not in previous:
                previous[neighbour] = (node, cell)
                queue.append(neighbour)
    if goal not in previous:
        raise SolverError("Cellule entrante hors de l'arbre de base")
    path = []
    node = goal
    while previous[node] is not None:
        node, cell = previous[node]
        path.append(cell)
    # path est parcouru depuis la colonne d'arrivée vers la ligne de départ
    return path


def solve_ot_exact(mu_weights: Sequence, nu_weights: Sequence, cost: Sequence[Sequence],
                   max_points: Optional[int] = None):
    """
    Transport optimal exact par le simplexe de transport

    Args:
        mu_weights: Marges source (rationnels ou flottants)
        nu_weights: Marges cible
        cost: Matrice de coût n x m
        max_points (int, optional): Taille maximale acceptée (transport.exact_oracle_max_points)

    Returns:
        tuple: (valeur Fraction, plan sous forme de liste de listes de Fraction)
    """
    max_points = max_points if max_points is not None else get_settings().exact_oracle_max_points
    a, b = _balanced(mu_weights), _balanced(nu_weights)
    n, m = len(a), len(b)
    if max(n, m) > max_points:
        raise BudgetExceededError(f"Oracle exact limité à {max_points} points (n={n}, m={m})")
    C = [[to_fraction(x) for x in row] for row in cost]
    if len(C) != n or any(len(row) != m for row in C):
        raise DimensionMismatchError(f"Coût incompatible avec des marges de tailles ({n}, {m})")

    basis = _northwest_corner(a, b)
    for pivot in range(MAX_PIVOTS):
        u, v = _potentials(basis, C, n, m)
        entering = None
        # règle de Bland: première cellule de coût réduit négatif
        for i in range(n):
            for j in range(m):
                if (i, j) not in basis and C[i][j] - u[i] - v[j] < 0:
                    entering = (i, j)
                    break
            if entering:
                break
        if entering is None:
            break
        path = _tree_path(basis, entering[0], entering[1])
        minus = path[0::2]
        plus = path[1::2]
        theta = min(basis[cell] for cell in minus)
        leaving = min(cell for cell in minus if basis[cell] == theta)
        for cell in minus:
            basis[cell] -= theta
        for cell in plus:
            basis[cell] += theta
        basis[entering] = theta
        del basis[leaving]
    else:
        raise SolverError(f"Simplexe exact non convergent après {MAX_PIVOTS} pivots")

    plan = [[Fraction(0)] * m for _ in range(n)]
    for (i, j), amount in basis.items():
        plan[i][j] = amount
    value = sum((plan[i][j] * C[i][j] for i in range(n) for j in range(m)), Fraction(0))
    logger.debug(f"Simplexe exact {n}x{m}: valeur {value} en {pivot} pivots")
    return value, plan
