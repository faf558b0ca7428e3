"""Pares sintéticos de similaridade controlada e o experimento sobre eles.

A tarefa derivada põe as cidades da base igualmente espaçadas num círculo, na
ordem do ótimo conhecido da base, e embaralha um arco contíguo de
ceil((1 - s) * D) posições, sorteando de novo enquanto a fração de arestas
compartilhadas ficar a mais de 0.05 de s. O ótimo da derivada é a ordem no círculo.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from parsers.comum import distancias_euclidianas
from services.estatistica import marca_significancia, wilcoxon_rank_sum
from services.evolucao import run_sto
from services.orquestrador import MultitaskConfig, run_mtea_ast
from services.problemas import ProblemInstance, ProblemKind, as_permutation
from services.unificacao import hamming_similarity

logger = logging.getLogger(__name__)

RAIO = 1000.0
TOLERANCIA = 0.05
MAX_SORTEIOS = 1000


@dataclass
class SyntheticPair:
    base: ProblemInstance
    base_optimum: np.ndarray
    derived: ProblemInstance
    derived_optimum: np.ndarray
    target_similarity: float
    achieved_similarity: float


def grade_similaridade(texto):
    """'0:1:0.05' -> [0.0, 0.05, ..., 1.0] (extremos inclusos)."""
    try:
        inicio, fim, passo = (float(v) for v in str(texto).split(":"))
    except ValueError:
        raise ValueError(f"grade de similaridade inválida '{texto}', use inicio:fim:passo") from None
    if passo <= 0 or not 0.0 <= inicio <= fim <= 1.0:
        raise ValueError(f"grade de similaridade inválida '{texto}'")
    quantidade = int(round((fim - inicio) / passo)) + 1
    return [round(min(inicio + passo * i, fim), 10) for i in range(quantidade)]


def make_synthetic_pair(base, optimal_tour, s, rng, raio=RAIO):
    if base.kind != ProblemKind.TSP:
        raise ValueError(f"par sintético exige instância TSP, recebido {base.kind.value}")
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"violação de contrato: similaridade {s} fora de [0, 1]")
    if optimal_tour is None:
        raise ValueError(f"instância {base.name} sem tour ótimo conhecido")
    d = base.dimension
    otimo = as_permutation(optimal_tour, d)

    embaralhar = math.ceil(round((1.0 - s) * d, 9))
    ordem = otimo.copy()
    medida = 1.0
    if embaralhar > 0:
        posicoes = (int(rng.integers(d)) + np.arange(embaralhar)) % d
        # sorteia de novo até a similaridade medida ficar na tolerância; fica com a mais próxima
        melhor_desvio = np.inf
        for _ in range(MAX_SORTEIOS):
            candidata = otimo.copy()
            candidata[posicoes] = otimo[rng.permutation(posicoes)]
            sim = hamming_similarity(otimo, candidata, ProblemKind.TSP)
            if abs(sim - s) < melhor_desvio:
                ordem, medida, melhor_desvio = candidata, sim, abs(sim - s)
            if melhor_desvio <= TOLERANCIA:
                break

    angulos = 2.0 * np.pi * np.arange(d) / d
    coords = np.empty((d, 2))
    coords[ordem - 1] = np.column_stack([raio * np.cos(angulos), raio * np.sin(angulos)])
    derivada = ProblemInstance(
        kind=ProblemKind.TSP,
        dimension=d,
        name=f"{base.name}-circ-{s:.2f}",
        dist=distancias_euclidianas(coords),
        coords=coords,
    )
    return SyntheticPair(
        base=base,
        base_optimum=otimo,
        derived=derivada,
        derived_optimum=ordem,
        target_similarity=float(s),
        achieved_similarity=medida,
    )


def _par_de_execucoes(base, derivada, config, semente):
    mtea = run_mtea_ast(MultitaskConfig(**{**config, "instances": [base, derivada], "seed": semente}))
    sto_config = MultitaskConfig(**{**config, "instances": [base], "seed": semente})
    sto = run_sto(base, sto_config.evo_params(0), sto_config.generations)
    return mtea.final_bests[0], sto.final_bests[0]


def executar_sintetico(base, optimal_tour, niveis, runs, config, seed=0):
    """Para cada nível s: R execuções pareadas de MTEA-AST (base + derivada) e STO (base).

    `config` traz os campos de MultitaskConfig exceto instances e seed.
    Retorna um DataFrame com uma linha por nível.
    """
    if runs < 1:
        raise ValueError(f"runs deve ser >= 1: {runs}")
    linhas = []
    for nivel, s in enumerate(niveis):
        par = make_synthetic_pair(base, optimal_tour, s, np.random.default_rng(seed + nivel))
        resultados = [
            _par_de_execucoes(base, par.derived, config, seed + 1000 * r)
            for r in range(runs)
        ]
        mtea = np.array([m for m, _ in resultados])
        sto = np.array([t for _, t in resultados])
        _, p = wilcoxon_rank_sum(sto, mtea)
        linhas.append({
            "similarity": s,
            "achieved_similarity": par.achieved_similarity,
            "mtea_mean": mtea.mean(),
            "mtea_std": mtea.std(ddof=1) if runs > 1 else 0.0,
            "sto_mean": sto.mean(),
            "sto_std": sto.std(ddof=1) if runs > 1 else 0.0,
            "p_value": p,
            "mark": marca_significancia(p, sto.mean(), mtea.mean()),
        })
        logger.info(
            f"[SINTETICO] s={s:.2f} (medida {par.achieved_similarity:.2f}): "
            f"MTEA-AST {mtea.mean():.2f} x STO {sto.mean():.2f}, p={p:.3g}"
        )
    return pd.DataFrame(linhas)
