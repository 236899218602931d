#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Transformée de Legendre monotone des fonctions affines par morceaux.

Une fonction échantillonnée est décrite par ses points (t_k, v_k), t_0 = 0,
et par son prolongement au-delà du dernier point: +inf (right_slope None) ou
affine de pente right_slope. La conjuguée s -> sup_{t>=0} (st - f(t)) est
encore affine par morceaux, de points de rupture les pentes de l'enveloppe
convexe inférieure.
"""

from typing import Optional, Tuple

import numpy as np


def lower_hull(t: np.ndarray, v: np.ndarray) -> np.ndarray:
    """
    Indices des sommets de l'enveloppe convexe inférieure (chaîne monotone)

    Les abscisses doivent être croissantes; les points alignés sont retirés.
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(v, dtype=float)
    hull = []
    for k in range(t.shape[0]):
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            # produit vectoriel (j - i) x (k - i) <= 0: j n'est pas un sommet
            cross = (t[j] - t[i]) * (v[k] - v[i]) - (v[j] - v[i]) * (t[k] - t[i])
            if cross <= 0.0:
                hull.pop()
            else:
                break
        hull.append(k)
    return np.array(hull, dtype=int)


def hull_slopes(t: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.diff(v) / np.diff(t)


def pl_conjugate(t: np.ndarray, v: np.ndarray, right_slope: Optional[float] = None,
                 slope_tol: float = 1e-10,
                 merge_rtol: float = 1e-9) -> Tuple[np.ndarray, np.ndarray, Optional[float]]:
    """
    Conjuguée monotone d'une fonction affine par morceaux

    Une pente de l'enveloppe à moins de merge_rtol·max(1, |s|) du point de rupture
    précédent ne crée pas de nouveau point: celui-ci glisse jusqu'à elle et son
    argmax devient le dernier t de la série. Les valeurs sont cumulées de gauche à
    droite, s -> f*(s_k) + t_k (s - s_k): le résultat reste sous la conjuguée
    exacte, d'au plus la largeur des séries fusionnées fois l'étendue en t.

    Args:
        t (np.ndarray): Points de rupture, t[0] = 0, strictement croissants
        v (np.ndarray): Valeurs finies aux points de rupture
        right_slope (float, optional): Pente au-delà de t[-1], None pour +inf
        slope_tol (float): Tolérance sur la compatibilité de right_slope
        merge_rtol (float): Écart relatif en deçà duquel deux pentes sont confondues

    Returns:
        tuple: (points s, valeurs, pente à droite) de la conjuguée
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(v, dtype=float)
    idx = lower_hull(t, v)
    th, vh = t[idx], v[idx]
    slopes = hull_slopes(th, vh)

    # les pentes nulles en tête se confondent avec s = 0; l'argmax en 0 est la fin du plateau
    positive = np.flatnonzero(slopes > 0.0)
    first = int(positive[0]) if positive.size else slopes.size
    s_pts = [0.0]
    t_arg = [float(th[first])]
    values = [-float(vh[first])]
    for j in range(first, slopes.size):
        sj = float(slopes[j])
        if len(s_pts) > 1 and sj - s_pts[-1] <= merge_rtol * max(1.0, abs(s_pts[-1])):
            # même série: le point de rupture glisse vers sj, l'argmax vers th[j + 1]
            sj = max(sj, s_pts[-1])
            values[-1] = values[-2] + t_arg[-2] * (sj - s_pts[-2])
            s_pts[-1] = sj
            t_arg[-1] = float(th[j + 1])
            continue
        values.append(values[-1] + t_arg[-1] * (sj - s_pts[-1]))
        s_pts.append(sj)
        t_arg.append(float(th[j + 1]))
    s = np.array(s_pts)
    values = np.array(values)

    if right_slope is None:
        return s, values, float(th[-1])

    last = float(slopes[-1]) if slopes.size else 0.0
    if right_slope < last - slope_tol * max(1.0, abs(last)):
        raise ValueError(f"Pente à droite {right_slope} inférieure à la dernière pente {last}")
    if right_slope > s[-1] + merge_rtol * max(1.0, abs(s[-1])):
        s = np.append(s, right_slope)
        values = np.append(values, values[-1] + t_arg[-1] * (right_slope - s[-2]))
    elif right_slope > s[-1] and s.size > 1:
        # la conjuguée est finie jusqu'à right_slope inclus: le dernier point y glisse
        values[-1] = values[-2] + t_arg[-2] * (right_slope - s[-2])
        s[-1] = right_slope
    return s, values, None
