"""Operadores genéticos, buscas locais por tipo de problema e o AG híbrido (STO).

Buscas locais são de primeira melhora: para cada posição i os deltas de todos
os vizinhos são calculados de uma vez com numpy e o primeiro que melhora é
aplicado. `budget` limita o número de movimentos de melhora (None = até o
ótimo local).
"""
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from services.problemas import ProblemKind, evaluate, random_permutation, tour_matrix

logger = logging.getLogger(__name__)

EPS = 1e-9


@dataclass
class Individual:
    genome: np.ndarray
    fitness: float


@dataclass
class Population:
    members: list

    def __post_init__(self):
        self.members = sorted(self.members, key=lambda ind: ind.fitness)

    def __len__(self):
        return len(self.members)

    @property
    def best(self):
        return self.members[0]

    @property
    def fitnesses(self):
        return np.array([ind.fitness for ind in self.members])


@dataclass
class EvoParams:
    pop_size: int = 30
    mutation_prob: float = 0.1
    ls_budget: int = None
    rng_seed: int = 0

    def __post_init__(self):
        if self.pop_size < 2:
            raise ValueError(f"pop_size deve ser >= 2: {self.pop_size}")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError(f"mutation_prob fora de [0, 1]: {self.mutation_prob}")
        if self.ls_budget is not None and self.ls_budget < 0:
            raise ValueError(f"ls_budget negativo: {self.ls_budget}")

    def budget_para(self, dimension):
        # padrão: D movimentos de melhora por chamada
        return dimension if self.ls_budget is None else self.ls_budget


@dataclass
class MultitaskRun:
    algorithm: str
    task_names: list
    traces: list
    best_solutions: list
    similarity_snapshots: list = field(default_factory=list)
    interactions: np.ndarray = None
    evaluations: list = None
    wall_time: float = 0.0
    seed: int = 0

    def __post_init__(self):
        k = len(self.task_names)
        if self.interactions is None:
            self.interactions = np.zeros((k, k), dtype=np.int64)
        if self.evaluations is None:
            self.evaluations = [0] * k

    @property
    def final_bests(self):
        return [trace[-1] for trace in self.traces]


# ---------------- Operadores de variação ----------------

def order_crossover(p1, p2, rng, cortes=None):
    """OX clássico: o filho 1 herda p1[a..b] no lugar e completa com p2 na ordem de p2."""
    p1 = np.asarray(p1)
    p2 = np.asarray(p2)
    if len(p1) != len(p2):
        raise ValueError(f"violação de contrato: pais de tamanhos {len(p1)} e {len(p2)}")
    n = len(p1)
    if n < 2:
        return p1.copy(), p2.copy()
    if cortes is None:
        a, b = sorted(rng.integers(0, n, size=2))
    else:
        a, b = cortes

    def _filho(doador, outro):
        filho = np.zeros(n, dtype=np.int64)
        filho[a:b + 1] = doador[a:b + 1]
        resto = outro[~np.isin(outro, doador[a:b + 1])]
        livres = np.r_[0:a, b + 1:n]
        filho[livres] = resto
        return filho

    return _filho(p1, p2), _filho(p2, p1)


def swap_mutation(s, rng, posicoes=None):
    s = np.array(s, dtype=np.int64)
    if len(s) < 2:
        return s
    i, j = rng.choice(len(s), size=2, replace=False) if posicoes is None else posicoes
    s[i], s[j] = s[j], s[i]
    return s


# ---------------- Buscas locais ----------------

def _esgotado(movimentos, budget):
    return budget is not None and movimentos >= budget


def _dois_opt_ciclo(t, dist, budget, aceitar=None):
    """2-opt de primeira melhora sobre o ciclo fechado `t` (índices de matriz).

    Com `t[0]` fixo (depósito do CVRP) nenhum movimento o desloca, pois só
    segmentos t[i+1..j] são invertidos. `aceitar` valida o candidato quando o
    delta do ciclo é só uma triagem.
    """
    n = len(t)
    movimentos = 0
    melhorou = True
    while melhorou and not _esgotado(movimentos, budget):
        melhorou = False
        inicio = 0
        while inicio < n - 2 and not _esgotado(movimentos, budget):
            aplicado = None
            for di, j in np.argwhere(_deltas_dois_opt(t, dist, inicio) < -EPS):
                i = inicio + int(di)
                candidato = t.copy()
                candidato[i + 1:j + 1] = candidato[i + 1:j + 1][::-1]
                if aceitar is None or aceitar(candidato):
                    aplicado = i
                    break
            if aplicado is None:
                break
            t = candidato
            movimentos += 1
            melhorou = True
            inicio = aplicado + 1
    return t


def _deltas_dois_opt(t, dist, inicio):
    """Matriz de deltas dos movimentos (i, j) com i >= inicio, em ordem de linha.

    Movimentos inválidos (j < i + 2, ou i = 0 com j = n - 1) ficam com delta 0.
    """
    n = len(t)
    i = np.arange(inicio, n - 2)[:, None]
    j = np.arange(n)[None, :]
    a, b = t[i], t[i + 1]
    c, e = t[j], t[(j + 1) % n]
    delta = dist[a, c] + dist[b, e] - dist[a, b] - dist[c, e]
    valido = (j >= i + 2) & ((i > 0) | (j < n - 1))
    return np.where(valido, delta, 0.0)


def two_opt(s, instance, budget=None):
    if instance.kind not in (ProblemKind.TSP, ProblemKind.CVRP):
        raise ValueError(f"2-opt não se aplica a {instance.kind.value}")
    s = np.asarray(s, dtype=np.int64)
    if budget == 0 or len(s) < 3:
        return s.copy()
    dist, deslocamento = tour_matrix(instance)

    if instance.kind == ProblemKind.TSP:
        t = _dois_opt_ciclo(s + deslocamento, dist, budget)
        return t - deslocamento

    # CVRP: giant tour com o depósito (índice 0) fixo na frente; o delta do
    # ciclo é triagem e o custo decodificado decide
    custo = [evaluate(instance, s)]

    def aceitar(candidato):
        novo = evaluate(instance, candidato[1:])
        if novo < custo[0] - EPS:
            custo[0] = novo
            return True
        return False

    t = _dois_opt_ciclo(np.r_[0, s], dist, budget, aceitar)
    return t[1:]


def _delta_troca_qap(fluxo, dist, p, r):
    """Delta de trocar as posições r e k para todo k (fórmula de Taillard, matrizes gerais)."""
    pr = p[r]
    pk = p
    delta = (
        (dist[r, r] - np.diag(dist)) * (np.diag(fluxo)[pk] - fluxo[pr, pr])
        + (dist[r, :] - dist[:, r]) * (fluxo[pk, pr] - fluxo[pr, pk])
    )
    # termos com as demais posições m != r, k
    d_mr = dist[:, r][:, None] - dist          # dist[m, r] - dist[m, k] -> [m, k]
    d_rm = dist[r, :][:, None] - dist.T        # dist[r, m] - dist[k, m] -> [m, k]
    f_mk = fluxo[np.ix_(p, pk)] - fluxo[p, pr][:, None]    # fluxo[p_m, p_k] - fluxo[p_m, p_r]
    f_km = fluxo[np.ix_(pk, p)].T - fluxo[pr, p][:, None]  # fluxo[p_k, p_m] - fluxo[p_r, p_m]
    termos = d_mr * f_mk + d_rm * f_km
    mascara = np.ones_like(termos, dtype=bool)
    mascara[r, :] = False
    mascara[np.arange(len(p)), np.arange(len(p))] = False
    delta = delta + np.where(mascara, termos, 0.0).sum(axis=0)
    delta[r] = 0.0
    return delta


def swap_local_search(s, instance, budget=None):
    if instance.kind != ProblemKind.QAP:
        raise ValueError(f"busca por trocas é do QAP, recebido {instance.kind.value}")
    p = np.asarray(s, dtype=np.int64) - 1
    n = len(p)
    if budget == 0 or n < 2:
        return p + 1
    movimentos = 0
    melhorou = True
    while melhorou and not _esgotado(movimentos, budget):
        melhorou = False
        for r in range(n - 1):
            delta = _delta_troca_qap(instance.flow, instance.dist, p, r)
            melhores = np.flatnonzero(delta[r + 1:] < -EPS)
            if melhores.size:
                k = r + 1 + melhores[0]
                p[r], p[k] = p[k], p[r]
                movimentos += 1
                melhorou = True
                if _esgotado(movimentos, budget):
                    break
    return p + 1


def _mover(s, i, j):
    elemento = s[i]
    resto = np.delete(s, i)
    return np.insert(resto, j, elemento)


def insertion_local_search(s, instance, budget=None):
    """Remove um elemento e o reinsere em outra posição (vizinhança do LOP)."""
    if instance.kind != ProblemKind.LOP:
        raise ValueError(f"busca por inserção é do LOP, recebido {instance.kind.value}")
    s = np.array(s, dtype=np.int64)
    n = len(s)
    if budget == 0 or n < 2:
        return s
    w = instance.weight
    movimentos = 0
    melhorou = True
    while melhorou and not _esgotado(movimentos, budget):
        melhorou = False
        for i in range(n):
            idx = s - 1
            x = idx[i]
            # variação da aptidão (negada) quando x ultrapassa cada elemento
            diff = w[x, idx] - w[idx, x]
            acumulado = np.cumsum(diff)
            delta = np.zeros(n)
            # para a direita até j > i: soma diff[i+1..j]
            delta[i + 1:] = acumulado[i + 1:] - acumulado[i]
            # para a esquerda até j < i: -soma diff[j..i-1]
            anterior = acumulado[i - 1] if i > 0 else 0.0
            base = np.r_[0.0, acumulado[:-1]]
            delta[:i] = -(anterior - base[:i])
            j = int(np.argmin(delta))
            if delta[j] < -EPS:
                s = _mover(s, i, j)
                movimentos += 1
                melhorou = True
                if _esgotado(movimentos, budget):
                    break
    return s


BUSCAS_LOCAIS = {
    ProblemKind.TSP: two_opt,
    ProblemKind.CVRP: two_opt,
    ProblemKind.QAP: swap_local_search,
    ProblemKind.LOP: insertion_local_search,
}


def local_search(s, instance, budget=None):
    busca = BUSCAS_LOCAIS.get(instance.kind)
    if busca is None:
        raise ValueError(f"violação de contrato: tipo de problema desconhecido {instance.kind}")
    return busca(s, instance, budget)


# ---------------- AG híbrido ----------------

def initial_population(instance, n, rng):
    genomas = [random_permutation(instance.dimension, rng) for _ in range(n)]
    return Population([Individual(g, evaluate(instance, g)) for g in genomas])


def _torneio_binario(pop, rng):
    # populacao ordenada: o menor indice vence (empate incluso)
    i, j = rng.integers(0, len(pop), size=2)
    return pop.members[min(i, j)]


def select_top(individuos, n):
    # sort estável: em empate os pais (primeiros na lista) ficam
    return Population(sorted(individuos, key=lambda ind: ind.fitness)[:n])


def generation_step(pop, instance, params, rng):
    n = params.pop_size
    budget = params.budget_para(instance.dimension)
    filhos = []
    while len(filhos) < n:
        pai1 = _torneio_binario(pop, rng)
        pai2 = _torneio_binario(pop, rng)
        for filho in order_crossover(pai1.genome, pai2.genome, rng):
            if len(filhos) == n:
                break
            if rng.random() < params.mutation_prob:
                filho = swap_mutation(filho, rng)
            filho = local_search(filho, instance, budget)
            filhos.append(Individual(filho, evaluate(instance, filho)))
    return select_top(pop.members + filhos, n)


def run_sto(instance, params, generations, rng=None):
    """AG híbrido de tarefa única; registra o melhor de cada geração."""
    if rng is None:
        rng = np.random.default_rng(params.rng_seed)
    inicio = time.perf_counter()
    pop = initial_population(instance, params.pop_size, rng)
    trace = [pop.best.fitness]
    avaliacoes = params.pop_size
    for _ in range(generations):
        pop = generation_step(pop, instance, params, rng)
        trace.append(pop.best.fitness)
        avaliacoes += params.pop_size
    duracao = time.perf_counter() - inicio
    logger.info(f"[STO] {instance.name}: melhor {trace[-1]:.2f} em {generations} gerações ({duracao:.1f}s)")
    return MultitaskRun(
        algorithm="sto",
        task_names=[instance.name],
        traces=[trace],
        best_solutions=[pop.best],
        evaluations=[avaliacoes],
        wall_time=duracao,
        seed=params.rng_seed,
    )
