import argparse
import logging
import sys

from cli.comandos import comando_prior, comando_run, comando_stats, comando_synth
from services.config import configurar_log
from services.experimentos import ALGORITMOS


def _opcoes_algoritmo(parser):
    grupo = parser.add_argument_group("parâmetros do algoritmo")
    grupo.add_argument("--pop", type=int, help="tamanho da população por tarefa (N)")
    grupo.add_argument("--gens", type=int, help="número de gerações (G)")
    grupo.add_argument("--eps", type=int, help="candidatos a semente por rodada (ε)")
    grupo.add_argument("--lambda", dest="lambda_", type=int, help="sementes inseridas por rodada (λ)")
    grupo.add_argument("--alpha", type=int, help="intervalo de transferência em gerações (α)")
    grupo.add_argument("--mutation-prob", type=float)
    grupo.add_argument("--ls-budget", type=int, help="movimentos de melhora por busca local (padrão D)")
    grupo.add_argument("--growth-budget", type=int, help="movimentos no crescimento de sementes (padrão 50*D)")
    grupo.add_argument("--rmp", type=float, help="probabilidade de cruzamento entre tarefas do MFEA")
    grupo.add_argument("--runs", type=int, help="execuções independentes")
    grupo.add_argument("--seed", type=int, help="semente mestre")
    grupo.add_argument("--workers", type=int, help="processos em paralelo")
    grupo.add_argument("--config", help="arquivo JSON chave-valor; opções da linha de comando prevalecem")
    grupo.add_argument("--out", help="pasta de saída")


def construir_parser():
    parser = argparse.ArgumentParser(
        prog="mtea-ast",
        description="Otimização evolutiva multitarefa com seleção adaptativa de tarefas",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log em nível DEBUG")
    sub = parser.add_subparsers(dest="comando", required=True)

    run = sub.add_parser("run", help="executa um algoritmo sobre um benchmark")
    run.add_argument("--benchmark", nargs="+", help="nome do catálogo (TSP, ALL, ...) ou arquivos de instância")
    run.add_argument("--algo", choices=ALGORITMOS)
    run.add_argument("--reference", help="pasta de resultados usada como referência nas marcas +/≈/-")
    run.add_argument("--data", help="pasta com os arquivos dos benchmarks (ou MTEA_DADOS)")
    run.add_argument("--optima", help="pasta com as soluções ótimas conhecidas; grava prior_similarity.csv")
    _opcoes_algoritmo(run)
    run.set_defaults(funcao=comando_run)

    synth = sub.add_parser("synth", help="experimento de similaridade controlada (TSP circular)")
    synth.add_argument("--base", required=True, help="instância TSP base")
    synth.add_argument("--opt", required=True, help="tour ótimo da base (.opt.tour)")
    synth.add_argument("--sim-grid", help="níveis de similaridade inicio:fim:passo (padrão 0:1:0.05)")
    _opcoes_algoritmo(synth)
    synth.set_defaults(funcao=comando_synth)

    prior = sub.add_parser("prior", help="similaridade a priori entre os ótimos conhecidos das tarefas")
    prior.add_argument("--benchmark", nargs="+", required=True)
    prior.add_argument("--optima", required=True, help="pasta com as soluções ótimas conhecidas")
    prior.add_argument("--data", help="pasta com os arquivos dos benchmarks (ou MTEA_DADOS)")
    prior.add_argument("--out", help="pasta de saída (padrão: resultados)")
    prior.set_defaults(funcao=comando_prior)

    stats = sub.add_parser("stats", help="compara duas pastas de resultados")
    stats.add_argument("--subject", required=True)
    stats.add_argument("--reference", required=True)
    stats.add_argument("--out", help="onde gravar stats.json (padrão: pasta do sujeito)")
    stats.set_defaults(funcao=comando_stats)
    return parser


def iniciar_aplicacao(argv=None):
    args = construir_parser().parse_args(argv)
    configurar_log(logging.DEBUG if args.verbose else logging.INFO)
    try:
        args.funcao(args)
    except (ValueError, OSError) as e:
        print(f"Erro: {e}", file=sys.stderr)
        return 1
    return 0
