#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Gestionnaire principal de l'application.
Charge les fichiers d'entrée, répartit les sous-commandes vers les modules de
calcul et traduit les rapports en codes de sortie.
"""

import argparse
import logging
from enum import IntEnum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from config.settings import Settings
from connectors.file_connector import (
    load_alpha, load_cost, load_experiment, load_family, load_measure, load_space
)
from criteria.constructors import (
    alpha_chi_envelope, alpha_dp, alpha_lipschitz_orlicz, alpha_moment, alpha_orlicz_nei,
    alpha_small_t, alpha_t1_integral, alpha_weighted_ckp
)
from devlab.concentration import concentration_consistency, marton_bound_check
from devlab.deviation import deviation_tail
from devlab.empirical import banach_mean_deviation, empirical_process
from devlab.experiment import ExperimentConfig
from duality.best import best_alpha, best_transport_brute, j_phi
from duality.checks import bg_check
from duality.family import PotentialFamily, cost_dual, lipschitz_ball
from measures.entropy import relative_entropy, tv_norm
from measures.errors import ConfigError, TcilabError
from measures.finite_space import FiniteSpace, ProbMeasure
from ratefn.calculus import inf_convolution_many, monotone_conjugate
from ratefn.functions import IncreasingFunction, RateFunction
from reports.report_types import CurveReport, Report, ValueReport, Verdict
from reports.report_writer import write_report
from tensor.tensorization import verify_product_tci
from transport.cost import CostMatrix
from transport.exact import solve_ot_exact
from transport.solver import solve_ot

logger = logging.getLogger("tcilab.core")


class ExitCode(IntEnum):
    """Codes de sortie de la ligne de commande"""
    SUCCESS = 0
    ERROR = 1       # usage ou configuration
    FALSIFIED = 2   # inégalité falsifiée, témoin dans le rapport


COMMANDS = (
    "ot", "entropy", "conjugate", "infconv", "alpha", "bg-check", "jphi", "brute-j",
    "tensor-check", "marton", "concentration", "deviate", "emp-process", "banach-dev",
)

CONSTRUCTORS = (
    "best", "weighted-ckp", "small-t", "orlicz-nei", "lipschitz-orlicz", "t1-integral",
    "dp", "chi-envelope", "moment",
)


def build_parser() -> argparse.ArgumentParser:
    """Analyseur des arguments de la ligne de commande"""
    parser = argparse.ArgumentParser(
        prog="tcilab",
        description="Inégalités de coût de transport et d'entropie sur des espaces finis",
    )
    parser.add_argument("command", choices=COMMANDS, help="Sous-commande à exécuter")
    parser.add_argument("--space", help="Fichier JSON de l'espace fini")
    parser.add_argument("--measure", help="Fichier JSON de la mesure de référence mu")
    parser.add_argument("--nu", help="Fichier JSON d'une seconde mesure (nu, ou second facteur)")
    parser.add_argument("--cost", action="append", default=[],
                        help="Fichier JSON du coût (répétable pour tensor-check)")
    parser.add_argument("--alpha", action="append", default=[],
                        help="Fichier JSON d'une fonction de taux (répétable)")
    parser.add_argument("--family", help="Fichier JSON de la famille de potentiels")
    parser.add_argument("--experiment", help="Fichier JSON de l'expérience Monte Carlo")
    parser.add_argument("--seed", type=int, help="Graine des flux aléatoires")
    parser.add_argument("--replicas", type=int, help="Nombre de répliques Monte Carlo")
    parser.add_argument("--grid", help="Grille en s, r ou t: 'début:fin:points' ou 'a,b,c'")
    parser.add_argument("--t", dest="t_points", help="Points d'évaluation des courbes, même syntaxe")
    parser.add_argument("--name", choices=CONSTRUCTORS, help="Constructeur utilisé par 'alpha'")
    parser.add_argument("--param", action="append", default=[], metavar="CLE=VALEUR",
                        help="Paramètre d'un constructeur ou d'une expérience (répétable)")
    parser.add_argument("--out", help="Répertoire des rapports")
    parser.add_argument("--format", choices=("json", "csv"), help="Format des rapports")
    parser.add_argument("--config", help="Fichier de configuration JSON")
    parser.add_argument("--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR"),
                        help="Niveau de journalisation")
    return parser


def parse_grid(text: Optional[str]) -> Optional[np.ndarray]:
    """
    'début:fin:points' (linspace) ou liste 'a,b,c'

    Raises:
        ConfigError: syntaxe invalide
    """
    if text is None:
        return None
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            return np.linspace(float(start), float(stop), int(num))
        return np.array([float(x) for x in text.split(",") if x.strip()])
    except ValueError:
        raise ConfigError(f"Grille invalide: {text!r}", field="grid")


def parse_params(items: List[str]) -> Dict[str, Any]:
    """key=value; une valeur contenant des virgules devient une liste de nombres"""
    params: Dict[str, Any] = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(f"Paramètre sans '=': {item!r}", field="param")
        key, value = item.split("=", 1)
        try:
            if "," in value:
                params[key.strip()] = [float(v) for v in value.split(",") if v.strip()]
            else:
                params[key.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"Valeur non numérique pour '{key}': {value!r}", field=f"param.{key}")
    return params


class AppManager:
    """
    Gestionnaire principal de l'application.
    Associe chaque sous-commande à une opération et écrit son rapport.
    """

    def __init__(self, settings: Settings):
        """
        Initialise le gestionnaire d'application

        Args:
            settings (Settings): Configuration de l'application
        """
        self.settings = settings
        self.handlers: Dict[str, Callable[[argparse.Namespace], Report]] = {
            "ot": self.cmd_ot,
            "entropy": self.cmd_entropy,
            "conjugate": self.cmd_conjugate,
            "infconv": self.cmd_infconv,
            "alpha": self.cmd_alpha,
            "bg-check": self.cmd_bg_check,
            "jphi": self.cmd_jphi,
            "brute-j": self.cmd_brute_j,
            "tensor-check": self.cmd_tensor_check,
            "marton": self.cmd_marton,
            "concentration": self.cmd_concentration,
            "deviate": self.cmd_deviate,
            "emp-process": self.cmd_emp_process,
            "banach-dev": self.cmd_banach_dev,
        }
        self.last_report: Optional[Report] = None
        self.last_path: Optional[Path] = None

    def run(self, args: argparse.Namespace) -> int:
        """
        Exécute une sous-commande

        Returns:
            int: 0 si tout est vérifié, 2 si une inégalité est falsifiée, 1 en cas d'erreur
        """
        logger.info(f"Sous-commande {args.command}")
        try:
            report = self.handlers[args.command](args)
            out = args.out or self.settings.output_dir
            fmt = args.format or self.settings.output_format
            self.last_path = write_report(report, out, fmt)
        except TcilabError as e:
            logger.error(f"{type(e).__name__}: {e}")
            return int(ExitCode.ERROR)

        self.last_report = report
        self._print_summary(report)
        if report.verdict is Verdict.FAIL:
            logger.warning(f"Inégalité falsifiée, témoin dans {self.last_path}")
            return int(ExitCode.FALSIFIED)
        return int(ExitCode.SUCCESS)

    def _print_summary(self, report: Report):
        if isinstance(report, ValueReport):
            for key, value in report.values.items():
                if not isinstance(value, (list, dict)):
                    print(f"{key} = {value}")
        print(f"{report.name}: {report.verdict.value} ({self.last_path})")

    # --- chargement des entrées ---

    def _space(self, args) -> Optional[FiniteSpace]:
        return load_space(args.space) if args.space else None

    def _measure(self, args, space: Optional[FiniteSpace] = None) -> ProbMeasure:
        if not args.measure:
            raise ConfigError("--measure est requis", field="measure")
        return load_measure(args.measure, space if space is not None else self._space(args))

    def _nu(self, args, space: Optional[FiniteSpace]) -> ProbMeasure:
        if not args.nu:
            raise ConfigError("--nu est requis", field="nu")
        return load_measure(args.nu, space)

    def _cost(self, args, space: Optional[FiniteSpace], index: int = 0) -> CostMatrix:
        if not args.cost:
            raise ConfigError("--cost est requis", field="cost")
        return load_cost(args.cost[min(index, len(args.cost) - 1)], space)

    def _alphas(self, args) -> List[RateFunction]:
        return [load_alpha(path) for path in args.alpha]

    def _family(self, args, mu: ProbMeasure, cost: Optional[CostMatrix]) -> PotentialFamily:
        """Famille du fichier, sinon boule de Lipschitz (métrique) ou famille duale du coût"""
        if args.family:
            return load_family(args.family, mu.n, cost, mu)
        if cost is None:
            raise ConfigError("--family ou --cost est requis", field="family")
        return lipschitz_ball(cost, mu) if cost.is_metric else cost_dual(cost)

    def _alpha_or_best(self, args, family: PotentialFamily, mu: ProbMeasure) -> RateFunction:
        alphas = self._alphas(args)
        return alphas[0] if alphas else best_alpha(family, mu)

    def _t_points(self, args) -> np.ndarray:
        t = parse_grid(args.t_points)
        return t if t is not None else np.linspace(0.0, self.settings.t_max, 101)

    def _curve(self, name: str, f: IncreasingFunction, x: np.ndarray, x_label: str = "t",
               exact: bool = True) -> CurveReport:
        try:
            spec = f.to_spec()
        except NotImplementedError:
            spec = {"form": type(f).__name__}
        return CurveReport(name=name, verdict=Verdict.INFO, x_label=x_label, x=x.tolist(),
                           y=np.asarray(f(x), dtype=float).tolist(), spec=spec, exact=exact)

    # --- sous-commandes ---

    def cmd_ot(self, args) -> Report:
        space = self._space(args)
        mu = self._measure(args, space)
        nu = self._nu(args, mu.space)
        cost = self._cost(args, mu.space)
        result = solve_ot(mu, nu, cost)
        values = {"value": result.value, "plan": result.plan.pi.tolist()}
        if max(cost.shape) <= self.settings.exact_oracle_max_points:
            exact_value, _ = solve_ot_exact(mu.w, nu.w, cost.C)
            values["exact_value"] = float(exact_value)
        return ValueReport(name="ot", verdict=Verdict.INFO, values=values)

    def cmd_entropy(self, args) -> Report:
        mu = self._measure(args)
        nu = self._nu(args, mu.space)
        H = relative_entropy(nu, mu)
        tv = tv_norm(nu, mu)
        return ValueReport(name="entropy", verdict=Verdict.INFO,
                           values={"entropy": H, "tv": tv, "pinsker_gap": 0.5 * tv ** 2 - H})

    def cmd_conjugate(self, args) -> Report:
        alphas = self._alphas(args)
        if not alphas:
            raise ConfigError("--alpha est requis", field="alpha")
        return self._curve("conjugate", monotone_conjugate(alphas[0]), self._t_points(args), "s")

    def cmd_infconv(self, args) -> Report:
        alphas = self._alphas(args)
        if len(alphas) < 2:
            raise ConfigError("infconv requiert au moins deux --alpha", field="alpha")
        return self._curve("infconv", inf_convolution_many(alphas), self._t_points(args))

    def cmd_alpha(self, args) -> Report:
        if not args.name:
            raise ConfigError("--name est requis pour 'alpha'", field="name")
        params = parse_params(args.param)
        mu = self._measure(args)
        cost = self._cost(args, mu.space) if args.cost else None
        gamma = self._alphas(args)[0] if args.alpha else None
        alpha = self._construct(args, args.name, params, mu, cost, gamma)
        report = self._curve(f"alpha-{args.name}", alpha, self._t_points(args))
        report.metadata["params"] = params
        return report

    def _construct(self, args, name: str, params: Dict[str, Any], mu: ProbMeasure,
                   cost: Optional[CostMatrix], gamma: Optional[RateFunction]) -> RateFunction:
        def need(key: str):
            if key not in params:
                raise ConfigError(f"Le constructeur '{name}' requiert --param {key}=...", field=f"param.{key}")
            return params[key]

        def need_cost() -> CostMatrix:
            if cost is None:
                raise ConfigError(f"Le constructeur '{name}' requiert --cost", field="cost")
            return cost

        def need_gamma() -> RateFunction:
            if gamma is None:
                raise ConfigError(f"Le constructeur '{name}' requiert --alpha (gamma ou beta)", field="alpha")
            return gamma

        if name == "best":
            return best_alpha(self._family(args, mu, cost), mu)
        if name == "weighted-ckp":
            return alpha_weighted_ckp(need("chi"), mu)
        if name == "small-t":
            return alpha_small_t(need("chi"), mu)
        if name == "orlicz-nei":
            return alpha_orlicz_nei(mu)
        if name == "lipschitz-orlicz":
            return alpha_lipschitz_orlicz(need_cost(), mu)
        if name == "t1-integral":
            return alpha_t1_integral(need_cost(), mu, need("a"), need_gamma(), int(need("x")))
        if name == "dp":
            return alpha_dp(need_cost(), need("p"), mu, need_gamma(), int(need("x")))
        if name == "chi-envelope":
            return alpha_chi_envelope(need("chi"), mu, need_gamma(), int(need("x")))
        return alpha_moment(need_cost(), mu, need_gamma())

    def cmd_bg_check(self, args) -> Report:
        mu = self._measure(args)
        cost = self._cost(args, mu.space) if args.cost else None
        family = self._family(args, mu, cost)
        alpha = self._alpha_or_best(args, family, mu)
        return bg_check(alpha, family, mu, parse_grid(args.grid))

    def cmd_jphi(self, args) -> Report:
        mu = self._measure(args)
        cost = self._cost(args, mu.space) if args.cost else None
        family = self._family(args, mu, cost)
        return self._curve("jphi", j_phi(family, mu), self._t_points(args), exact=family.exact)

    def cmd_brute_j(self, args) -> Report:
        mu = self._measure(args)
        cost = self._cost(args, mu.space)
        h = parse_params(args.param).get("h")
        family = load_family(args.family, mu.n, cost, mu) if args.family else None
        return self._curve("brute-j", best_transport_brute(mu, cost, h, family), self._t_points(args))

    def cmd_tensor_check(self, args) -> Report:
        mu1 = self._measure(args)
        mu2 = self._nu(args, None)
        c1 = self._cost(args, mu1.space, 0)
        c2 = self._cost(args, mu2.space, 1)
        alphas = self._alphas(args)
        if len(alphas) >= 2:
            alpha1, alpha2 = alphas[0], alphas[1]
        else:
            alpha1 = best_alpha(lipschitz_ball(c1, mu1) if c1.is_metric else cost_dual(c1), mu1)
            alpha2 = best_alpha(lipschitz_ball(c2, mu2) if c2.is_metric else cost_dual(c2), mu2)
        h = parse_params(args.param).get("h")
        return verify_product_tci(mu1, mu2, c1, c2, alpha1, alpha2, h)

    def _metric_alpha(self, args, mu: ProbMeasure, d: CostMatrix):
        """Fonction du fichier; sinon best_alpha si la boule est exacte, le constructeur d'Orlicz au-delà"""
        alphas = self._alphas(args)
        if alphas:
            return alphas[0], "file"
        if mu.n <= self.settings.vertex_enumeration_max_points:
            return best_alpha(lipschitz_ball(d, mu), mu), "best_alpha"
        return alpha_lipschitz_orlicz(d, mu), "lipschitz-orlicz"

    def cmd_marton(self, args) -> Report:
        mu = self._measure(args)
        d = self._cost(args, mu.space)
        alpha, source = self._metric_alpha(args, mu, d)
        return marton_bound_check(mu, d, alpha, parse_grid(args.grid), alpha_source=source)

    def cmd_concentration(self, args) -> Report:
        mu = self._measure(args)
        d = self._cost(args, mu.space)
        alpha, source = self._metric_alpha(args, mu, d)
        r = parse_grid(args.grid)
        if r is None:
            r = np.linspace(0.0, 1.5 * d.diameter, 100)
        report = concentration_consistency(mu, d, alpha, r)
        report.metadata["alpha_source"] = source
        return report

    def _experiment(self, args) -> ExperimentConfig:
        config = load_experiment(args.experiment) if args.experiment else ExperimentConfig()
        params = parse_params(args.param)
        data = config.to_dict()
        if "sizes" in params:
            sizes = params["sizes"]
            data["sample_sizes"] = [int(n) for n in (sizes if isinstance(sizes, list) else [sizes])]
        grid = parse_grid(args.grid)
        if grid is not None:
            data["t_grid"] = grid.tolist()
        config = ExperimentConfig.from_dict(data).with_overrides(args.seed, args.replicas)
        if not config.sample_sizes or not config.t_grid:
            raise ConfigError("L'expérience requiert des tailles (--param sizes=...) et une grille en t (--grid)",
                              field="sample_sizes")
        return config

    def cmd_deviate(self, args) -> Report:
        config = self._experiment(args)
        mu = self._measure(args)
        cost = self._cost(args, mu.space)
        family = load_family(args.family, mu.n, cost, mu) if args.family else None
        alphas = self._alphas(args)
        if alphas:
            alpha = alphas[0]
        else:
            alpha = best_alpha(family if family is not None else self._family(args, mu, cost), mu)
        return deviation_tail(config, mu, alpha, cost, family)

    def cmd_emp_process(self, args) -> Report:
        config = self._experiment(args)
        mu = self._measure(args)
        d = self._cost(args, mu.space)
        # classe de fonctions: phis de la famille, sommets de la boule de Lipschitz par défaut
        family = load_family(args.family, mu.n, d, mu) if args.family else lipschitz_ball(d, mu)
        alpha, _ = self._metric_alpha(args, mu, d)
        return empirical_process(config, mu, d, family.phis, alpha)

    def cmd_banach_dev(self, args) -> Report:
        config = self._experiment(args)
        mu = self._measure(args)
        return banach_mean_deviation(config, mu)
