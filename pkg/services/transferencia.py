"""Estratégia de transferência entre tarefas.

Candidatos de cada fonte são ordenados pela aptidão de habilidade (média de
1/rank na fonte e 1/rank do mapeamento no alvo), as λ melhores sementes
passam por busca local intensiva e substituem, uma a uma, o membro original
mais próximo em distância de Hamming.
"""
import logging
from dataclasses import dataclass

import numpy as np

from services.evolucao import Individual, Population, local_search
from services.problemas import evaluate
from services.unificacao import hamming_distance, unify_dimension

logger = logging.getLogger(__name__)


@dataclass
class SeedCandidate:
    genome: np.ndarray
    source_task: int
    ability_fitness: float
    target_fitness: float


def factorial_rank(value, pop):
    # empates compartilham a melhor posição
    return 1 + int(np.count_nonzero(pop.fitnesses < value))


def f_m(rank):
    return 1.0 / rank


def _habilidade(ind, source_pop, target_pop, target):
    v_fonte = f_m(factorial_rank(ind.fitness, source_pop))
    mapeado = unify_dimension(ind.genome, target)
    valor = evaluate(target, mapeado)
    v_alvo = f_m(factorial_rank(valor, target_pop))
    return (v_fonte + v_alvo) / 2.0, mapeado, valor


def ability_fitness(ind, source_pop, target_pop, target):
    return _habilidade(ind, source_pop, target_pop, target)[0]


def select_candidates(source_pop, target_pop, target, p_st, source_task=None):
    """Os p_st melhores, por aptidão de habilidade, entre os 2*p_st melhores da fonte."""
    if p_st < 1:
        raise ValueError(f"p_st deve ser >= 1: {p_st}")
    candidatos = []
    for ind in source_pop.members[:2 * p_st]:
        habilidade, mapeado, valor = _habilidade(ind, source_pop, target_pop, target)
        candidatos.append(SeedCandidate(mapeado, source_task, habilidade, valor))
    candidatos.sort(key=lambda c: -c.ability_fitness)
    return candidatos[:p_st]


def grow_seed(genome, target, growth_budget=None):
    return local_search(genome, target, growth_budget)


def _atribuir_sementes(membros, seeds, kind):
    """Índice do membro substituído por cada semente (None se nenhuma troca é permitida).

    O melhor atual (membros[0]) só sai para uma semente que não seja pior.
    """
    disponiveis = list(range(len(membros)))
    atribuicao = []
    for seed in seeds:
        ordem = sorted(
            disponiveis,
            key=lambda i: (hamming_distance(seed.genome, membros[i].genome, kind), -membros[i].fitness, i),
        )
        escolhido = next(
            (i for i in ordem if i != 0 or seed.fitness <= membros[0].fitness),
            None,
        )
        if escolhido is not None:
            disponiveis.remove(escolhido)
        atribuicao.append(escolhido)
    return atribuicao


def _inserir(target_pop, seeds, kind):
    if len(seeds) > len(target_pop):
        raise ValueError(f"violação de contrato: {len(seeds)} sementes para população de {len(target_pop)}")
    membros = list(target_pop.members)
    atribuicao = _atribuir_sementes(membros, seeds, kind)
    for seed, i in zip(seeds, atribuicao):
        if i is not None:
            membros[i] = seed
    return Population(membros), atribuicao


def insert_seeds(target_pop, seeds, kind):
    return _inserir(target_pop, seeds, kind)[0]


def transfer_round(target_idx, populations, instances, plan, growth_budget=None, lam=None, direct=False):
    """Uma rodada de transferência para o alvo `target_idx`.

    Retorna (população, sementes inseridas por fonte, avaliações no alvo).
    `direct` é a variante sem estratégia de transferência: os p melhores de
    cada fonte por aptidão, mapeados e inseridos sem seleção nem crescimento.
    """
    alvo = instances[target_idx]
    pop_alvo = populations[target_idx]
    contagem = np.zeros(len(populations), dtype=np.int64)
    if plan.total == 0:
        return pop_alvo, contagem, 0
    lam = plan.lam if lam is None else lam
    avaliacoes = 0

    sementes, origens = [], []
    if direct:
        for s, p in enumerate(plan.strengths):
            if p <= 0 or s == target_idx:
                continue
            for ind in populations[s].members[:p]:
                genoma = unify_dimension(ind.genome, alvo)
                sementes.append(Individual(genoma, evaluate(alvo, genoma)))
                origens.append(s)
                avaliacoes += 1
        sementes, origens = sementes[:len(pop_alvo)], origens[:len(pop_alvo)]
    else:
        candidatos = []
        for s, p in enumerate(plan.strengths):
            if p <= 0 or s == target_idx:
                continue
            avaliacoes += min(2 * int(p), len(populations[s]))
            candidatos.extend(select_candidates(populations[s], pop_alvo, alvo, int(p), s))
        candidatos.sort(key=lambda c: -c.ability_fitness)
        for candidato in candidatos[:lam]:
            genoma = grow_seed(candidato.genome, alvo, growth_budget)
            sementes.append(Individual(genoma, evaluate(alvo, genoma)))
            origens.append(candidato.source_task)
            avaliacoes += 1

    nova, atribuicao = _inserir(pop_alvo, sementes, alvo.kind)
    for s, i in zip(origens, atribuicao):
        if i is not None:
            contagem[s] += 1
    logger.debug(
        f"[TRANSFERENCIA] alvo {target_idx}: forças {plan.strengths.tolist()}, sementes por fonte {contagem.tolist()}"
    )
    return nova, contagem, avaliacoes
