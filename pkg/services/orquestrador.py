"""Laço principal multitarefa (K populações com transferência periódica) e o MFEA.

A cada α gerações há uma fase de transferência: retrato dos melhores de cada
tarefa, matriz de similaridade, plano por alvo e rodada de transferência.
Todas as rodadas leem o mesmo retrato; as populações novas só entram depois
de todos os alvos. Um alvo que recebe sementes não evolui nessa geração;
um alvo com plano vazio evolui normalmente (com K=1 o laço é o STO).
"""
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from services.evolucao import (
    EvoParams,
    Individual,
    MultitaskRun,
    generation_step,
    initial_population,
    local_search,
    order_crossover,
    swap_mutation,
)
from services.problemas import evaluate, random_permutation
from services.transferencia import transfer_round
from services.unificacao import build_similarity_matrix, transfer_strengths

logger = logging.getLogger(__name__)


@dataclass
class MultitaskConfig:
    instances: list = field(default_factory=list)
    pop_size: int = 30
    generations: int = 300
    eps: int = 10
    lam: int = 3
    alpha: int = 10
    mutation_prob: float = 0.1
    ls_budget: int = None
    growth_budget: int = None
    no_ts: bool = False
    seed: int = 0

    def validar(self):
        k = len(self.instances)
        if k < 1:
            raise ValueError("nenhuma instância informada")
        if self.pop_size < 2:
            raise ValueError(f"pop_size deve ser >= 2: {self.pop_size}")
        if self.generations < 1:
            raise ValueError(f"generations deve ser >= 1: {self.generations}")
        if self.alpha < 1:
            raise ValueError(f"alpha deve ser >= 1: {self.alpha}")
        if not 1 <= self.lam <= self.eps <= k * self.pop_size:
            raise ValueError(
                f"exigido 1 <= lambda <= eps <= K*N: lambda={self.lam}, eps={self.eps}, K*N={k * self.pop_size}"
            )
        if self.growth_budget is not None and self.growth_budget < 0:
            raise ValueError(f"growth_budget negativo: {self.growth_budget}")
        EvoParams(self.pop_size, self.mutation_prob, self.ls_budget, self.seed)

    def evo_params(self, k):
        # fluxos aleatórios por tarefa: semente mestre + índice da tarefa
        return EvoParams(self.pop_size, self.mutation_prob, self.ls_budget, self.seed + k)

    def budget_crescimento(self, dimension):
        # padrão: 50 passadas de D movimentos, ou o ótimo local antes disso
        return 50 * dimension if self.growth_budget is None else self.growth_budget


def run_mtea_ast(config):
    config.validar()
    instancias = config.instances
    k = len(instancias)
    n = config.pop_size
    inicio = time.perf_counter()

    params = [config.evo_params(t) for t in range(k)]
    rngs = [np.random.default_rng(p.rng_seed) for p in params]
    pops = [initial_population(inst, n, rng) for inst, rng in zip(instancias, rngs)]
    traces = [[pop.best.fitness] for pop in pops]
    avaliacoes = [n] * k
    interacoes = np.zeros((k, k), dtype=np.int64)
    retratos = []

    for g in range(1, config.generations + 1):
        transferidas = {}
        if g % config.alpha == 0:
            melhores = [pop.best.genome for pop in pops]
            sim = build_similarity_matrix(melhores, instancias)
            retratos.append(sim)
            for t in range(k):
                plano = transfer_strengths(sim[t], config.eps, target=t, lam=config.lam)
                if plano.total == 0:
                    continue
                nova, contagem, av = transfer_round(
                    t, pops, instancias, plano,
                    growth_budget=config.budget_crescimento(instancias[t].dimension),
                    lam=config.lam,
                    direct=config.no_ts,
                )
                transferidas[t] = nova
                interacoes[t] += contagem
                avaliacoes[t] += av

        for t in range(k):
            if t in transferidas:
                pops[t] = transferidas[t]
            else:
                pops[t] = generation_step(pops[t], instancias[t], params[t], rngs[t])
                avaliacoes[t] += n
            traces[t].append(pops[t].best.fitness)

    duracao = time.perf_counter() - inicio
    algoritmo = "mtea-ast-nots" if config.no_ts else "mtea-ast"
    logger.info(
        f"[{algoritmo.upper()}] {k} tarefas, semente {config.seed}: "
        f"{[round(tr[-1], 2) for tr in traces]} ({duracao:.1f}s, {int(interacoes.sum())} sementes)"
    )
    return MultitaskRun(
        algorithm=algoritmo,
        task_names=[inst.name for inst in instancias],
        traces=traces,
        best_solutions=[pop.best for pop in pops],
        similarity_snapshots=retratos,
        interactions=interacoes,
        evaluations=avaliacoes,
        wall_time=duracao,
        seed=config.seed,
    )


# ---------------- MFEA (espaço de busca unificado) ----------------

def decode_unified(genome, task_dim):
    genome = np.asarray(genome)
    return genome[genome <= task_dim]


def _reembutir(genome, task_dim, decodificado):
    genome = np.array(genome, dtype=np.int64)
    genome[genome <= task_dim] = decodificado
    return genome


def factorial_ranks(custos):
    """Posição (1-based) de cada indivíduo em cada tarefa.

    Custo não avaliado (inf) tem rank inf, para não virar fator de habilidade.
    """
    custos = np.asarray(custos, dtype=float)
    ranks = np.empty(custos.shape, dtype=float)
    for t in range(custos.shape[1]):
        ordem = np.argsort(custos[:, t], kind="stable")
        ranks[ordem, t] = np.arange(1, custos.shape[0] + 1)
    ranks[np.isinf(custos)] = np.inf
    return ranks


def skill_factors(ranks):
    return np.argmin(ranks, axis=1)


def scalar_fitness(ranks):
    return 1.0 / ranks.min(axis=1)


def run_mfea_baseline(config, rmp=0.9):
    config.validar()
    if not 0.0 <= rmp <= 1.0:
        raise ValueError(f"rmp fora de [0, 1]: {rmp}")
    instancias = config.instances
    k = len(instancias)
    tamanho = k * config.pop_size
    dims = [inst.dimension for inst in instancias]
    dmax = max(dims)
    rng = np.random.default_rng(config.seed)
    inicio = time.perf_counter()

    def avaliar(genoma, t):
        return evaluate(instancias[t], decode_unified(genoma, dims[t]))

    def melhorar(genoma, t):
        budget = config.ls_budget if config.ls_budget is not None else dims[t]
        decodificado = local_search(decode_unified(genoma, dims[t]), instancias[t], budget)
        return _reembutir(genoma, dims[t], decodificado)

    genomas = [random_permutation(dmax, rng) for _ in range(tamanho)]
    custos = np.array([[avaliar(g, t) for t in range(k)] for g in genomas])
    avaliacoes = [tamanho] * k
    habilidade = skill_factors(factorial_ranks(custos))
    traces = [[float(custos[:, t].min())] for t in range(k)]

    for _ in range(config.generations):
        filhos, habilidades_filhos = [], []
        ordem = rng.permutation(tamanho)
        for a, b in zip(ordem[0::2], ordem[1::2]):
            if habilidade[a] == habilidade[b] or rng.random() < rmp:
                pares = order_crossover(genomas[a], genomas[b], rng)
                for filho in pares:
                    if rng.random() < config.mutation_prob:
                        filho = swap_mutation(filho, rng)
                    # imitação vertical: herda o fator de habilidade de um dos pais
                    filhos.append(filho)
                    habilidades_filhos.append(habilidade[a] if rng.random() < 0.5 else habilidade[b])
            else:
                for pai in (a, b):
                    filhos.append(swap_mutation(genomas[pai], rng))
                    habilidades_filhos.append(habilidade[pai])

        custos_filhos = np.full((len(filhos), k), np.inf)
        for i, (filho, t) in enumerate(zip(filhos, habilidades_filhos)):
            filho = melhorar(filho, t)
            filhos[i] = filho
            custos_filhos[i, t] = avaliar(filho, t)
            avaliacoes[t] += 1

        todos = genomas + filhos
        todos_custos = np.vstack([custos, custos_filhos])
        ranks = factorial_ranks(todos_custos)
        escolhidos = np.argsort(-scalar_fitness(ranks), kind="stable")[:tamanho]
        genomas = [todos[i] for i in escolhidos]
        custos = todos_custos[escolhidos]
        habilidade = skill_factors(ranks[escolhidos])
        for t in range(k):
            traces[t].append(float(custos[:, t].min()))

    melhores = []
    for t in range(k):
        i = int(np.argmin(custos[:, t]))
        melhores.append(Individual(decode_unified(genomas[i], dims[t]), float(custos[i, t])))

    duracao = time.perf_counter() - inicio
    logger.info(f"[MFEA] {k} tarefas, semente {config.seed}: {[round(tr[-1], 2) for tr in traces]} ({duracao:.1f}s)")
    return MultitaskRun(
        algorithm="mfea",
        task_names=[inst.name for inst in instancias],
        traces=traces,
        best_solutions=melhores,
        evaluations=avaliacoes,
        wall_time=duracao,
        seed=config.seed,
    )
