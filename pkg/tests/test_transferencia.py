import numpy as np
import pytest

from services.evolucao import EPS, Individual, Population, initial_population, local_search
from services.problemas import evaluate, random_permutation
from services.transferencia import (
    ability_fitness,
    factorial_rank,
    grow_seed,
    insert_seeds,
    select_candidates,
    transfer_round,
)
from services.unificacao import TransferPlan, unify_dimension


def _pop(valores, d=4):
    return Population([Individual(np.arange(1, d + 1), float(v)) for v in valores])


def test_factorial_rank_empates_compartilham_posicao():
    pop = _pop([1, 2, 2, 3])
    assert factorial_rank(0.5, pop) == 1
    assert factorial_rank(2, pop) == 2
    assert factorial_rank(2.5, pop) == 4
    assert factorial_rank(5, pop) == 5


def test_ability_fitness_media_das_duas_tarefas(instancia):
    alvo = instancia("TSP", 5, seed=1)
    genoma = np.array([2, 5, 1, 4, 3])
    valor = evaluate(alvo, genoma)
    fonte = _pop([1, 2, 3, 4], d=5)
    individuo = Individual(genoma, 4.0)
    pop_alvo = _pop([valor - 1, valor + 1, valor + 2], d=5)
    # rank 4 na fonte (1/4) e rank 2 no alvo (1/2)
    assert ability_fitness(individuo, fonte, pop_alvo, alvo) == pytest.approx(0.375)


def test_select_candidates(instancia, rng):
    fonte_inst = instancia("TSP", 6, seed=2)
    alvo = instancia("TSP", 8, seed=3)
    fonte = initial_population(fonte_inst, 10, rng)
    pop_alvo = initial_population(alvo, 10, rng)
    candidatos = select_candidates(fonte, pop_alvo, alvo, 3, source_task=1)
    assert len(candidatos) == 3
    habilidades = [c.ability_fitness for c in candidatos]
    assert habilidades == sorted(habilidades, reverse=True)
    for c in candidatos:
        assert c.source_task == 1
        assert sorted(c.genome.tolist()) == list(range(1, 9))
        assert c.target_fitness == evaluate(alvo, c.genome)


def test_select_candidates_p_invalido(instancia, rng):
    inst = instancia("TSP", 5)
    pop = initial_population(inst, 4, rng)
    with pytest.raises(ValueError):
        select_candidates(pop, pop, inst, 0)


def _pop_distinta():
    genomas = [[1, 2, 3, 4], [2, 1, 3, 4], [1, 2, 4, 3], [4, 3, 2, 1]]
    return Population([Individual(np.array(g), float(i + 1)) for i, g in enumerate(genomas)])


def test_insert_seeds_substitui_o_mais_proximo():
    pop = _pop_distinta()
    semente = Individual(np.array([1, 2, 4, 3]), 2.5)
    nova = insert_seeds(pop, [semente], "QAP")
    assert len(nova) == 4
    genomas = [ind.genome.tolist() for ind in nova.members]
    assert [1, 2, 4, 3] in genomas
    assert 2.5 in nova.fitnesses.tolist()
    assert 3.0 not in nova.fitnesses.tolist()


def test_insert_seeds_protege_o_melhor():
    pop = _pop_distinta()
    # idêntica ao melhor, mas pior: vai para o próximo mais próximo
    semente = Individual(np.array([1, 2, 3, 4]), 10.0)
    nova = insert_seeds(pop, [semente], "QAP")
    assert nova.best.fitness == 1.0
    assert len(nova) == 4
    assert 10.0 in nova.fitnesses.tolist()


def test_insert_seeds_melhor_substitui_o_melhor():
    pop = _pop_distinta()
    semente = Individual(np.array([1, 2, 3, 4]), 0.5)
    nova = insert_seeds(pop, [semente], "QAP")
    assert nova.fitnesses.tolist() == [0.5, 2.0, 3.0, 4.0]


def test_insert_seeds_excesso_de_sementes():
    pop = _pop_distinta()
    sementes = [Individual(np.array([1, 2, 3, 4]), 0.0)] * 5
    with pytest.raises(ValueError, match="violação de contrato"):
        insert_seeds(pop, sementes, "QAP")


def _cenario(instancia, rng):
    instancias = [instancia("TSP", 7, seed=4), instancia("CVRP", 6, seed=5), instancia("LOP", 8, seed=6)]
    pops = [initial_population(inst, 8, rng) for inst in instancias]
    return instancias, pops


def test_transfer_round_mantem_tamanho_e_conta_sementes(instancia, rng):
    instancias, pops = _cenario(instancia, rng)
    plano = TransferPlan(target=0, strengths=np.array([0, 3, 2]), eps=5, lam=2)
    nova, contagem, avaliacoes = transfer_round(0, pops, instancias, plano, growth_budget=10, lam=2)
    assert len(nova) == 8
    assert contagem[0] == 0
    assert contagem.sum() <= 2
    assert avaliacoes > 0
    assert nova.best.fitness <= pops[0].best.fitness
    for ind in nova.members:
        assert sorted(ind.genome.tolist()) == list(range(1, 8))
        assert ind.fitness == evaluate(instancias[0], ind.genome)


def test_transfer_round_plano_vazio(instancia, rng):
    instancias, pops = _cenario(instancia, rng)
    plano = TransferPlan(target=1, strengths=np.zeros(3, dtype=np.int64), eps=5)
    nova, contagem, avaliacoes = transfer_round(1, pops, instancias, plano)
    assert nova is pops[1]
    assert contagem.tolist() == [0, 0, 0]
    assert avaliacoes == 0


def test_transfer_round_direto_sem_crescimento(instancia, rng):
    instancias, pops = _cenario(instancia, rng)
    plano = TransferPlan(target=2, strengths=np.array([2, 1, 0]), eps=3, lam=1)
    nova, contagem, avaliacoes = transfer_round(2, pops, instancias, plano, direct=True)
    assert len(nova) == 8
    assert avaliacoes == 3
    assert contagem.sum() <= 3
    assert contagem[2] == 0


def test_grow_seed_budget_zero_e_identidade(instancia, rng):
    for kind in ("TSP", "CVRP", "QAP", "LOP"):
        alvo = instancia(kind, 8, seed=7)
        genoma = random_permutation(8, rng)
        assert grow_seed(genoma, alvo, 0).tolist() == genoma.tolist()


def test_grow_seed_otimo_local_nao_muda(instancia, rng):
    for kind in ("TSP", "QAP", "LOP"):
        alvo = instancia(kind, 8, seed=8)
        otimo_local = local_search(random_permutation(8, rng), alvo)
        assert grow_seed(otimo_local, alvo, 400).tolist() == otimo_local.tolist()


def test_grow_seed_sem_limite_nenhum_2opt_melhora(instancia, rng):
    alvo = instancia("TSP", 8, seed=9)
    for _ in range(10):
        semente = random_permutation(8, rng)
        crescida = grow_seed(semente, alvo)
        custo = evaluate(alvo, crescida)
        assert custo <= evaluate(alvo, semente)
        for a in range(1, 8):
            for b in range(a + 1, 8):
                vizinho = crescida.copy()
                vizinho[a:b + 1] = vizinho[a:b + 1][::-1]
                assert evaluate(alvo, vizinho) >= custo - EPS


def _substituicoes_por_forca_bruta(membros, sementes):
    # cada semente fica com o membro original livre mais próximo (posições diferentes),
    # desempate pelo pior e depois pelo menor índice; o melhor só sai para semente não pior
    livres = set(range(len(membros)))
    escolhidos = []
    for semente in sementes:
        opcoes = []
        for i in livres:
            if i == 0 and semente.fitness > membros[0].fitness:
                continue
            diferentes = sum(int(x != y) for x, y in zip(semente.genome, membros[i].genome))
            opcoes.append((diferentes, -membros[i].fitness, i))
        i = min(opcoes)[2]
        livres.remove(i)
        escolhidos.append(i)
    return escolhidos


def test_insert_seeds_confere_com_atribuicao_por_forca_bruta():
    rng = np.random.default_rng(31)
    for _ in range(100):
        membros = Population([
            Individual(random_permutation(5, rng), float(f))
            for f in rng.permutation(np.arange(1, 7))
        ]).members
        sementes = [Individual(random_permutation(5, rng), float(f)) for f in rng.choice([0.5, 2.5, 9.5], 2)]
        trocados = _substituicoes_por_forca_bruta(membros, sementes)
        nova = insert_seeds(Population(list(membros)), sementes, "QAP")
        restantes = [m.fitness for i, m in enumerate(membros) if i not in trocados]
        assert sorted(nova.fitnesses.tolist()) == sorted(restantes + [s.fitness for s in sementes])
        for semente in sementes:
            assert any(ind.genome.tolist() == semente.genome.tolist() for ind in nova.members)


def test_transfer_round_escolhe_o_top_lambda_do_conjunto(instancia, rng):
    instancias = [
        instancia("TSP", 7, seed=10),
        instancia("TSP", 6, seed=11),
        instancia("QAP", 9, seed=12),
        instancia("LOP", 7, seed=13),
    ]
    pops = [initial_population(inst, 10, rng) for inst in instancias]
    alvo, pop_alvo = instancias[0], pops[0]
    plano = TransferPlan(target=0, strengths=np.array([0, 5, 3, 2]), eps=10, lam=3)

    conjunto = []
    for s, p in enumerate(plano.strengths):
        if p == 0:
            continue
        da_fonte = [
            (ability_fitness(ind, pops[s], pop_alvo, alvo), s, unify_dimension(ind.genome, alvo))
            for ind in pops[s].members[:2 * p]
        ]
        da_fonte.sort(key=lambda c: -c[0])
        conjunto.extend(da_fonte[:p])
    conjunto.sort(key=lambda c: -c[0])
    top = conjunto[:3]

    nova, contagem, avaliacoes = transfer_round(0, pops, instancias, plano, growth_budget=0, lam=3)
    esperado = np.zeros(4, dtype=np.int64)
    for _, s, genoma in top:
        esperado[s] += 1
        assert any(ind.genome.tolist() == genoma.tolist() for ind in nova.members)
    assert contagem.tolist() == esperado.tolist()
    assert avaliacoes == 2 * 10 + 3
    assert len(nova) == 10
    assert nova.fitnesses.tolist() == sorted(nova.fitnesses.tolist())
