import json
import logging
import os
from pathlib import Path

RAIZ_PROJETO = Path(__file__).resolve().parent.parent

# Chaves aceitas em arquivos de configuração e na linha de comando
CHAVES_PARAMETROS = (
    "pop", "gens", "eps", "lambda", "alpha", "mutation_prob", "ls_budget",
    "growth_budget", "rmp", "runs", "seed", "workers", "sim_grid",
    "benchmark", "algo", "data", "out",
)


def recurso_path(rel_path):
    """Resolve caminho para arquivos de configuração do projeto"""
    return str(RAIZ_PROJETO / rel_path)


def pasta_dados(padrao=None):
    return padrao or os.environ.get("MTEA_DADOS") or str(Path.cwd() / "dados")


def carregar_benchmarks(caminho_config=None):
    with open(caminho_config or recurso_path("config/benchmarks.json"), "r", encoding="utf-8") as f:
        return json.load(f)


def _ler_json(caminho):
    with open(caminho, "r", encoding="utf-8") as f:
        dados = json.load(f)
    if not isinstance(dados, dict):
        raise ValueError(f"arquivo de configuração {caminho} deve conter um objeto chave-valor")
    return {chave.replace("-", "_"): valor for chave, valor in dados.items()}


def carregar_parametros(caminho=None, **sobrescritas):
    """Padrões de config/parametros.json < arquivo do usuário < opções da linha de comando."""
    parametros = _ler_json(recurso_path("config/parametros.json"))
    if caminho:
        parametros.update(_ler_json(caminho))
    parametros.update({chave: valor for chave, valor in sobrescritas.items() if valor is not None})
    desconhecidas = sorted(set(parametros) - set(CHAVES_PARAMETROS))
    if desconhecidas:
        raise ValueError(f"chaves de configuração desconhecidas: {', '.join(desconhecidas)}")
    return parametros


def configurar_log(nivel=logging.INFO):
    logging.basicConfig(
        level=nivel,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%H:%M:%S",
    )
