"""Montagem de benchmarks e execução de experimentos independentes."""
import importlib
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields

from services.config import carregar_benchmarks
from services.evolucao import MultitaskRun, run_sto
from services.orquestrador import MultitaskConfig, run_mfea_baseline, run_mtea_ast
from services.problemas import ProblemKind, as_permutation, evaluate
from services.unificacao import build_similarity_matrix

logger = logging.getLogger(__name__)

ALGORITMOS = ("mtea-ast", "mtea-ast-nots", "sto", "mfea")

# extensão -> módulo em parsers/; sem extensão conhecida, LOLIB
FORMATOS_POR_EXTENSAO = {".tsp": "tsplib", ".vrp": "cvrplib", ".dat": "qaplib"}
FORMATOS_POR_TIPO = {
    ProblemKind.TSP: "tsplib",
    ProblemKind.CVRP: "cvrplib",
    ProblemKind.QAP: "qaplib",
    ProblemKind.LOP: "lolib",
}

# sementes de execuções diferentes não se sobrepõem às sementes por tarefa (seed + k)
PASSO_SEMENTE = 1000


def carregar_instancia(caminho, formato=None):
    if formato is None:
        formato = FORMATOS_POR_EXTENSAO.get(os.path.splitext(str(caminho))[1].lower(), "lolib")
    try:
        modulo = importlib.import_module(f"parsers.{formato}")
    except ModuleNotFoundError:
        raise ValueError(f"formato de instância desconhecido: '{formato}'") from None
    instancia = modulo.importar_instancia(caminho)
    logger.info(f"[{formato.upper()}] {instancia!r} carregada de {caminho}")
    return instancia


def _arquivos_do_benchmark(nome, catalogo):
    dominios = {chave.upper(): chave for chave in catalogo["dominios"]}
    compostos = {chave.upper(): valor for chave, valor in catalogo["compostos"].items()}
    chave = nome.strip().upper()
    if chave in dominios:
        grupos = [dominios[chave]]
    elif chave in compostos:
        grupos = compostos[chave]
    else:
        conhecidos = list(catalogo["dominios"]) + list(catalogo["compostos"])
        raise ValueError(f"benchmark desconhecido '{nome}'; disponíveis: {', '.join(conhecidos)}")

    arquivos = []
    for grupo in grupos:
        dominio = catalogo["dominios"][grupo]
        for item in dominio["instancias"]:
            arquivos.append((os.path.join(dominio["pasta"], item["arquivo"]), dominio["formato"]))
    return arquivos


def assemble_benchmark(name, data_dir, catalogo=None):
    """Instâncias de um benchmark do catálogo, na ordem TSP, CVRP, QAP, LOP."""
    arquivos = _arquivos_do_benchmark(name, catalogo or carregar_benchmarks())
    ausentes = [rel for rel, _ in arquivos if not os.path.isfile(os.path.join(data_dir, rel))]
    if ausentes:
        raise FileNotFoundError(
            f"arquivos do benchmark '{name}' ausentes em {data_dir}: {', '.join(ausentes)}"
        )
    return [carregar_instancia(os.path.join(data_dir, rel), formato) for rel, formato in arquivos]


def resolver_instancias(benchmark, data_dir, catalogo=None):
    """Nome do catálogo (um único item) ou lista de arquivos de instância."""
    if isinstance(benchmark, str):
        benchmark = [parte for parte in benchmark.split(",") if parte.strip()]
    benchmark = [str(b).strip() for b in benchmark]
    if not benchmark:
        raise ValueError("nenhum benchmark ou arquivo de instância informado")
    if len(benchmark) == 1 and not os.path.isfile(benchmark[0]):
        return assemble_benchmark(benchmark[0], data_dir, catalogo)
    ausentes = [caminho for caminho in benchmark if not os.path.isfile(caminho)]
    if ausentes:
        raise FileNotFoundError(f"arquivos de instância ausentes: {', '.join(ausentes)}")
    return [carregar_instancia(caminho) for caminho in benchmark]


def _modulo_do_tipo(kind):
    return importlib.import_module(f"parsers.{FORMATOS_POR_TIPO[ProblemKind(kind)]}")


def carregar_otimos(instancias, pasta):
    """Soluções ótimas conhecidas: <nome da instância><extensão do formato> em `pasta`.

    TSP .opt.tour, CVRP .sol (rotas do CVRPLIB), QAP .sln, LOP .sol (ordem simples).
    """
    caminhos = [
        os.path.join(pasta, inst.name + _modulo_do_tipo(inst.kind).EXTENSAO_SOLUCAO)
        for inst in instancias
    ]
    ausentes = [os.path.basename(c) for c in caminhos if not os.path.isfile(c)]
    if ausentes:
        raise FileNotFoundError(f"soluções ótimas ausentes em {pasta}: {', '.join(ausentes)}")
    otimos = []
    for inst, caminho in zip(instancias, caminhos):
        otimo = as_permutation(_modulo_do_tipo(inst.kind).importar_solucao(caminho), inst.dimension)
        logger.debug(f"[OTIMOS] {inst.name}: {evaluate(inst, otimo):.2f} ({caminho})")
        otimos.append(otimo)
    return otimos


def prior_similarity(instancias, otimos):
    """Similaridade a priori: a mesma matriz das rodadas, sobre os ótimos conhecidos."""
    return build_similarity_matrix(otimos, instancias)


@dataclass
class ExperimentConfig:
    benchmark: list = field(default_factory=list)
    algorithm: str = "mtea-ast"
    runs: int = 20
    pop_size: int = 30
    generations: int = 300
    eps: int = 10
    lam: int = 3
    alpha: int = 10
    mutation_prob: float = 0.1
    ls_budget: int = None
    growth_budget: int = None
    rmp: float = 0.9
    seed: int = 0
    workers: int = 1
    out: str = "resultados"

    def validar(self):
        if self.algorithm not in ALGORITMOS:
            raise ValueError(f"algoritmo desconhecido '{self.algorithm}'; use um de {', '.join(ALGORITMOS)}")
        if self.runs < 1:
            raise ValueError(f"runs deve ser >= 1: {self.runs}")
        if self.workers < 1:
            raise ValueError(f"workers deve ser >= 1: {self.workers}")

    def multitask_config(self, instancias, semente):
        return MultitaskConfig(
            instances=list(instancias),
            pop_size=self.pop_size,
            generations=self.generations,
            eps=self.eps,
            lam=self.lam,
            alpha=self.alpha,
            mutation_prob=self.mutation_prob,
            ls_budget=self.ls_budget,
            growth_budget=self.growth_budget,
            no_ts=self.algorithm == "mtea-ast-nots",
            seed=semente,
        )

    def eco(self):
        """Configuração serializável (vai para summary.json)."""
        return {f.name: getattr(self, f.name) for f in fields(self)}


def semente_da_execucao(seed_mestre, run_id):
    return seed_mestre + PASSO_SEMENTE * run_id


def _executar_sto(config):
    # uma execução STO independente por tarefa, reunidas num único registro
    config.validar()
    parciais = [
        run_sto(inst, config.evo_params(k), config.generations)
        for k, inst in enumerate(config.instances)
    ]
    return MultitaskRun(
        algorithm="sto",
        task_names=[inst.name for inst in config.instances],
        traces=[p.traces[0] for p in parciais],
        best_solutions=[p.best_solutions[0] for p in parciais],
        evaluations=[p.evaluations[0] for p in parciais],
        wall_time=sum(p.wall_time for p in parciais),
        seed=config.seed,
    )


def executar_algoritmo(algoritmo, config, rmp=0.9):
    if algoritmo in ("mtea-ast", "mtea-ast-nots"):
        config.no_ts = algoritmo == "mtea-ast-nots"
        return run_mtea_ast(config)
    if algoritmo == "sto":
        return _executar_sto(config)
    if algoritmo == "mfea":
        return run_mfea_baseline(config, rmp=rmp)
    raise ValueError(f"algoritmo desconhecido '{algoritmo}'")


def _executar_uma(argumentos):
    experimento, instancias, run_id = argumentos
    config = experimento.multitask_config(instancias, semente_da_execucao(experimento.seed, run_id))
    logger.info(f"[EXPERIMENTO] {experimento.algorithm} execução {run_id + 1}/{experimento.runs}")
    return executar_algoritmo(experimento.algorithm, config, experimento.rmp)


def executar_experimento(experimento, instancias):
    """R execuções independentes; o resultado segue a ordem de run_id."""
    experimento.validar()
    experimento.multitask_config(instancias, experimento.seed).validar()
    tarefas = [(experimento, instancias, r) for r in range(experimento.runs)]
    if experimento.workers == 1:
        return [_executar_uma(t) for t in tarefas]
    with ProcessPoolExecutor(max_workers=experimento.workers) as executor:
        return list(executor.map(_executar_uma, tarefas))
