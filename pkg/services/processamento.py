"""Resumo estatístico das execuções e gravação/leitura dos arquivos de saída.

Arquivos de uma pasta de resultados:
  convergence.csv        run_id, task, generation, best_fitness
  similarity_<r>.csv     um bloco K x K por execução na rodada r (run_id, target, T1..TK)
  interactions.csv       sementes acumuladas por alvo e fonte (run_id, target, T1..TK)
  prior_similarity.csv   similaridade entre os ótimos conhecidos (target, task, T1..TK), com --optima
  summary.json           algoritmo, tarefas, semente mestre, configuração e resumo
"""
import glob
import json
import logging
import os
import re
from dataclasses import asdict, dataclass

import numpy as np
import pandas as pd

from services.estatistica import marca_significancia, wilcoxon_rank_sum
from services.evolucao import MultitaskRun

logger = logging.getLogger(__name__)

CONVERGENCIA = "convergence.csv"
INTERACOES = "interactions.csv"
RESUMO = "summary.json"
SIMILARIDADE_PRIORI = "prior_similarity.csv"
PADRAO_SIMILARIDADE = re.compile(r"similarity_(\d+)\.csv")


@dataclass
class StatsSummary:
    tasks: list
    mean: list
    std: list
    reference_mean: list = None
    reference_std: list = None
    p_values: list = None
    marks: list = None

    def to_dict(self):
        return asdict(self)

    def tabela(self):
        df = pd.DataFrame({"task": self.tasks, "mean": self.mean, "std": self.std})
        if self.marks is not None:
            df["reference_mean"] = self.reference_mean
            df["reference_std"] = self.reference_std
            df["p_value"] = self.p_values
            df["mark"] = self.marks
        return df


def _finais(runs):
    return pd.DataFrame([run.final_bests for run in runs], columns=runs[0].task_names)


def _media_desvio(finais):
    return finais.mean().tolist(), finais.std(ddof=1).fillna(0.0).tolist()


def summarize(runs, reference=None):
    """Média e desvio dos melhores finais por tarefa; com `reference`, as marcas
    do teste da soma dos postos da referência contra o sujeito (p < 0.05)."""
    if not runs:
        raise ValueError("nenhuma execução para resumir")
    finais = _finais(runs)
    media, desvio = _media_desvio(finais)
    resumo = StatsSummary(tasks=list(runs[0].task_names), mean=media, std=desvio)
    if not reference:
        return resumo

    finais_ref = _finais(reference)
    if finais_ref.shape[1] != finais.shape[1]:
        raise ValueError(
            f"referência com {finais_ref.shape[1]} tarefas, sujeito com {finais.shape[1]}"
        )
    resumo.reference_mean, resumo.reference_std = _media_desvio(finais_ref)
    resumo.p_values, resumo.marks = [], []
    for k in range(finais.shape[1]):
        _, p = wilcoxon_rank_sum(finais_ref.iloc[:, k], finais.iloc[:, k])
        resumo.p_values.append(p)
        resumo.marks.append(marca_significancia(p, resumo.reference_mean[k], media[k]))
    return resumo


# ---------------- Escrita ----------------

def _blocos(matrizes_por_execucao):
    linhas = []
    for run_id, matriz in matrizes_por_execucao:
        matriz = np.asarray(matriz)
        for alvo, linha in enumerate(matriz, start=1):
            linhas.append([run_id, alvo, *linha.tolist()])
    return linhas


def _tabela_blocos(linhas, k):
    return pd.DataFrame(linhas, columns=["run_id", "target", *[f"T{i}" for i in range(1, k + 1)]])


def write_outputs(runs, pasta, config=None, resumo=None, seed=None):
    if not runs:
        raise ValueError("nenhuma execução para gravar")
    os.makedirs(pasta, exist_ok=True)
    k = len(runs[0].task_names)

    convergencia = pd.DataFrame(
        [
            (run_id, task, geracao, float(valor))
            for run_id, run in enumerate(runs)
            for task, trace in enumerate(run.traces, start=1)
            for geracao, valor in enumerate(trace)
        ],
        columns=["run_id", "task", "generation", "best_fitness"],
    )
    convergencia.to_csv(os.path.join(pasta, CONVERGENCIA), index=False)

    rodadas = max(len(run.similarity_snapshots) for run in runs)
    for r in range(rodadas):
        blocos = [
            (run_id, run.similarity_snapshots[r])
            for run_id, run in enumerate(runs)
            if r < len(run.similarity_snapshots)
        ]
        _tabela_blocos(_blocos(blocos), k).to_csv(
            os.path.join(pasta, f"similarity_{r + 1:03d}.csv"), index=False
        )

    interacoes = _blocos([(run_id, run.interactions) for run_id, run in enumerate(runs)])
    _tabela_blocos(interacoes, k).to_csv(os.path.join(pasta, INTERACOES), index=False)

    conteudo = {
        "algorithm": runs[0].algorithm,
        "tasks": list(runs[0].task_names),
        "master_seed": runs[0].seed if seed is None else seed,
        "run_seeds": [run.seed for run in runs],
        "config": config or {},
        "final_bests": [[float(v) for v in run.final_bests] for run in runs],
        "evaluations": [[int(v) for v in run.evaluations] for run in runs],
        "summary": (resumo or summarize(runs)).to_dict(),
    }
    with open(os.path.join(pasta, RESUMO), "w", encoding="utf-8") as f:
        json.dump(conteudo, f, indent=2, ensure_ascii=False)
    logger.info(f"[SAIDA] {len(runs)} execuções gravadas em {pasta} ({rodadas} rodadas de similaridade)")


def write_prior_similarity(matriz, nomes, pasta):
    """prior_similarity.csv: target, task, T1..TK (uma linha por alvo)."""
    matriz = np.asarray(matriz, dtype=float)
    k = len(nomes)
    if matriz.shape != (k, k):
        raise ValueError(f"matriz {matriz.shape} incompatível com {k} tarefas")
    os.makedirs(pasta, exist_ok=True)
    tabela = pd.DataFrame(matriz, columns=[f"T{i}" for i in range(1, k + 1)])
    tabela.insert(0, "task", list(nomes))
    tabela.insert(0, "target", range(1, k + 1))
    caminho = os.path.join(pasta, SIMILARIDADE_PRIORI)
    tabela.to_csv(caminho, index=False)
    logger.info(f"[SAIDA] similaridade a priori gravada em {caminho}")
    return caminho


# ---------------- Leitura ----------------

def ler_resumo(pasta):
    caminho = os.path.join(pasta, RESUMO)
    if not os.path.isfile(caminho):
        raise FileNotFoundError(f"{RESUMO} não encontrado em {pasta}")
    with open(caminho, "r", encoding="utf-8") as f:
        return json.load(f)


def _matrizes(tabela, k):
    colunas = [f"T{i}" for i in range(1, k + 1)]
    return {
        int(run_id): bloco.sort_values("target")[colunas].to_numpy()
        for run_id, bloco in tabela.groupby("run_id")
    }


def _arquivos_de_similaridade(pasta):
    """similarity_<r>.csv em ordem numérica de rodada (o número pode passar de 3 dígitos)."""
    rodadas = []
    for caminho in glob.glob(os.path.join(pasta, "similarity_*.csv")):
        encontrado = PADRAO_SIMILARIDADE.fullmatch(os.path.basename(caminho))
        if encontrado:
            rodadas.append((int(encontrado.group(1)), caminho))
    return [caminho for _, caminho in sorted(rodadas)]


def ler_execucoes(pasta):
    """Reconstrói as execuções gravadas por write_outputs (sem solução nem tempo)."""
    resumo = ler_resumo(pasta)
    nomes = resumo["tasks"]
    k = len(nomes)
    convergencia = pd.read_csv(os.path.join(pasta, CONVERGENCIA), float_precision="round_trip")
    interacoes = _matrizes(pd.read_csv(os.path.join(pasta, INTERACOES)), k)
    rodadas = [
        _matrizes(pd.read_csv(caminho, float_precision="round_trip"), k)
        for caminho in _arquivos_de_similaridade(pasta)
    ]

    runs = []
    for run_id, dados in convergencia.groupby("run_id"):
        run_id = int(run_id)
        traces = [
            dados[dados["task"] == t].sort_values("generation")["best_fitness"].tolist()
            for t in range(1, k + 1)
        ]
        runs.append(MultitaskRun(
            algorithm=resumo["algorithm"],
            task_names=list(nomes),
            traces=traces,
            best_solutions=[],
            similarity_snapshots=[r[run_id] for r in rodadas if run_id in r],
            interactions=interacoes[run_id].astype(np.int64),
            evaluations=resumo["evaluations"][run_id],
            seed=resumo["run_seeds"][run_id],
        ))
    return runs
