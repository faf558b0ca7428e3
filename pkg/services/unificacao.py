"""Unificação de dimensão entre tarefas e seleção adaptativa de tarefas.

- unify_dimension: inserção gulosa dos rótulos que faltam (menor aumento de
  custo no alvo) ou filtragem dos rótulos que sobram.
- hamming_similarity / build_similarity_matrix: similaridade entre os
  melhores de cada população (arestas para TSP/CVRP, posições para QAP/LOP).
- transfer_strengths: filtro de 10% e cota inteira de candidatos por fonte.
"""
import logging
from dataclasses import dataclass

import numpy as np

from services.problemas import TIPOS_PERMUTACAO, ProblemKind, evaluate_partial

logger = logging.getLogger(__name__)

LIMIAR_SIMILARIDADE = 0.1


@dataclass
class TransferPlan:
    target: int
    strengths: np.ndarray
    eps: int
    lam: int = None

    @property
    def total(self):
        return int(self.strengths.sum())


# ---------------- Unificação de dimensão ----------------

def insertion_costs(instance, partial, label):
    """Objetivo do alvo após inserir `label` em cada posição 0..m da permutação parcial."""
    partial = np.asarray(partial, dtype=np.int64)
    m = len(partial)
    kind = instance.kind

    if kind == ProblemKind.TSP and m > 0:
        base = evaluate_partial(instance, partial)
        idx = partial - 1
        c = label - 1
        anterior = np.r_[idx[-1], idx]       # vizinho antes da posição k
        seguinte = np.r_[idx, idx[0]]        # vizinho depois da posição k
        d = instance.dist
        return base + d[anterior, c] + d[c, seguinte] - d[anterior, seguinte]

    if kind == ProblemKind.LOP:
        base = evaluate_partial(instance, partial)
        idx = partial - 1
        c = label - 1
        w = instance.weight
        antes = np.r_[0.0, np.cumsum(w[idx, c])]                  # sum W[x_i, c], i < k
        depois = w[c, idx].sum() - np.r_[0.0, np.cumsum(w[c, idx])]  # sum W[c, x_i], i >= k
        return base - (antes + depois + w[c, c])

    # QAP (todas as posições mudam de local) e CVRP (rotas redivididas)
    return np.array([
        evaluate_partial(instance, np.insert(partial, k, label)) for k in range(m + 1)
    ])


def unify_dimension(x, target):
    x = np.asarray(x, dtype=np.int64)
    ds, dt = len(x), target.dimension
    if ds == dt:
        return x.copy()
    if ds > dt:
        return x[x <= dt]
    parcial = x.copy()
    for rotulo in range(ds + 1, dt + 1):
        custos = insertion_costs(target, parcial, rotulo)
        parcial = np.insert(parcial, int(np.argmin(custos)), rotulo)
    return parcial


# ---------------- Similaridade ----------------

def to_edge_set(s):
    s = np.asarray(s)
    return frozenset(
        (min(int(u), int(v)), max(int(u), int(v))) for u, v in zip(s, np.roll(s, -1))
    )


def _codigos_arestas(s):
    s = np.asarray(s, dtype=np.int64)
    prox = np.roll(s, -1)
    u, v = np.minimum(s, prox), np.maximum(s, prox)
    return np.unique(u * (len(s) + 1) + v)


def hamming_similarity(a, b, kind):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if len(a) != len(b):
        raise ValueError(f"violação de contrato: dimensões {len(a)} e {len(b)}")
    d = len(a)
    if d == 0:
        return 1.0
    if ProblemKind(kind) in TIPOS_PERMUTACAO:
        ea, eb = _codigos_arestas(a), _codigos_arestas(b)
        comuns = np.intersect1d(ea, eb, assume_unique=True).size
        diferenca = ea.size + eb.size - 2 * comuns
        return 1.0 - diferenca / (2.0 * d)
    return 1.0 - np.count_nonzero(a != b) / d


def hamming_distance(a, b, kind):
    return 1.0 - hamming_similarity(a, b, kind)


def build_similarity_matrix(bests, instances):
    """sim[t][s] = similaridade entre o melhor de s mapeado para t e o melhor de t."""
    k = len(instances)
    sim = np.ones((k, k))
    for t, alvo in enumerate(instances):
        for s in range(k):
            if s == t:
                continue
            mapeado = unify_dimension(bests[s], alvo)
            sim[t, s] = hamming_similarity(mapeado, bests[t], alvo.kind)
    return sim


# ---------------- Força de transferência ----------------

def transfer_strengths(sim_row, eps, target=None, lam=None):
    """Cotas inteiras p(s,t) proporcionais à similaridade (maiores restos).

    Fontes com similaridade < 10% recebem zero; empates de resto vão para o
    menor índice. Sem nenhuma fonte aprovada, o plano é vazio.
    """
    if eps < 1:
        raise ValueError(f"eps deve ser >= 1: {eps}")
    sims = np.array(sim_row, dtype=float)
    aprovadas = sims >= LIMIAR_SIMILARIDADE
    if target is not None:
        aprovadas[target] = False
    forcas = np.zeros(len(sims), dtype=np.int64)
    if not aprovadas.any():
        return TransferPlan(target=target, strengths=forcas, eps=eps, lam=lam)

    pesos = np.where(aprovadas, sims, 0.0)
    cotas = eps * pesos / pesos.sum()
    forcas[:] = np.floor(cotas + 1e-12).astype(np.int64)
    restos = cotas - forcas
    faltam = eps - int(forcas.sum())
    ordem = sorted(np.flatnonzero(aprovadas), key=lambda i: (-round(restos[i], 12), i))
    for i in ordem[:faltam]:
        forcas[i] += 1
    return TransferPlan(target=target, strengths=forcas, eps=eps, lam=lam)
