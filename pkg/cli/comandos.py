import json
import logging
import os

import pandas as pd

from parsers.tsplib import importar_tour
from services.config import carregar_parametros, pasta_dados
from services.experimentos import (
    ExperimentConfig,
    carregar_instancia,
    carregar_otimos,
    executar_experimento,
    prior_similarity,
    resolver_instancias,
)
from services.processamento import ler_execucoes, summarize, write_outputs, write_prior_similarity
from services.sintetico import executar_sintetico, grade_similaridade

logger = logging.getLogger(__name__)


def _parametros(args, **extras):
    return carregar_parametros(
        args.config,
        pop=args.pop,
        gens=args.gens,
        eps=args.eps,
        alpha=args.alpha,
        mutation_prob=args.mutation_prob,
        ls_budget=args.ls_budget,
        growth_budget=args.growth_budget,
        rmp=args.rmp,
        runs=args.runs,
        seed=args.seed,
        workers=args.workers,
        out=args.out,
        **{"lambda": args.lambda_},
        **extras,
    )


def _experimento(p):
    return ExperimentConfig(
        benchmark=p.get("benchmark") or [],
        algorithm=p["algo"],
        runs=p["runs"],
        pop_size=p["pop"],
        generations=p["gens"],
        eps=p["eps"],
        lam=p["lambda"],
        alpha=p["alpha"],
        mutation_prob=p["mutation_prob"],
        ls_budget=p["ls_budget"],
        growth_budget=p["growth_budget"],
        rmp=p["rmp"],
        seed=p["seed"],
        workers=p["workers"],
        out=p.get("out") or os.path.join("resultados", p["algo"]),
    )


def _imprimir(resumo):
    print(resumo.tabela().to_string(index=False, float_format=lambda v: f"{v:.2f}"))


def comando_run(args):
    p = _parametros(args, benchmark=args.benchmark, algo=args.algo, data=args.data)
    experimento = _experimento(p)
    experimento.validar()
    if not experimento.benchmark:
        raise ValueError("informe --benchmark (nome do catálogo ou arquivos de instância)")
    instancias = resolver_instancias(experimento.benchmark, pasta_dados(p.get("data")))
    otimos = carregar_otimos(instancias, args.optima) if args.optima else None
    runs = executar_experimento(experimento, instancias)
    referencia = ler_execucoes(args.reference) if args.reference else None
    resumo = summarize(runs, referencia)
    write_outputs(runs, experimento.out, config=experimento.eco(), resumo=resumo, seed=experimento.seed)
    if otimos is not None:
        write_prior_similarity(prior_similarity(instancias, otimos), [inst.name for inst in instancias], experimento.out)
    _imprimir(resumo)


def comando_synth(args):
    p = _parametros(args, sim_grid=args.sim_grid)
    experimento = _experimento(p)
    niveis = grade_similaridade(p["sim_grid"])
    base = carregar_instancia(args.base, "tsplib")
    tour = importar_tour(args.opt)
    config = {
        "pop_size": experimento.pop_size,
        "generations": experimento.generations,
        "eps": experimento.eps,
        "lam": experimento.lam,
        "alpha": experimento.alpha,
        "mutation_prob": experimento.mutation_prob,
        "ls_budget": experimento.ls_budget,
        "growth_budget": experimento.growth_budget,
    }
    tabela = executar_sintetico(base, tour, niveis, experimento.runs, config, seed=experimento.seed)

    pasta = p.get("out") or os.path.join("resultados", "sintetico")
    os.makedirs(pasta, exist_ok=True)
    tabela.to_csv(os.path.join(pasta, "synthetic.csv"), index=False)
    with open(os.path.join(pasta, "summary.json"), "w", encoding="utf-8") as f:
        json.dump(
            {
                "base": base.name,
                "master_seed": experimento.seed,
                "runs": experimento.runs,
                "levels": niveis,
                "config": config,
            },
            f,
            indent=2,
            ensure_ascii=False,
        )
    logger.info(f"[SINTETICO] {len(niveis)} níveis gravados em {pasta}")
    print(tabela.to_string(index=False, float_format=lambda v: f"{v:.3f}"))


def comando_stats(args):
    sujeito = ler_execucoes(args.subject)
    referencia = ler_execucoes(args.reference)
    resumo = summarize(sujeito, referencia)
    pasta = args.out or args.subject
    os.makedirs(pasta, exist_ok=True)
    with open(os.path.join(pasta, "stats.json"), "w", encoding="utf-8") as f:
        json.dump(
            {"subject": args.subject, "reference": args.reference, "summary": resumo.to_dict()},
            f,
            indent=2,
            ensure_ascii=False,
        )
    _imprimir(resumo)


def comando_prior(args):
    instancias = resolver_instancias(args.benchmark, pasta_dados(args.data))
    matriz = prior_similarity(instancias, carregar_otimos(instancias, args.optima))
    nomes = [inst.name for inst in instancias]
    write_prior_similarity(matriz, nomes, args.out or "resultados")
    print(pd.DataFrame(matriz, index=nomes, columns=nomes).to_string(float_format=lambda v: f"{v:.2f}"))
