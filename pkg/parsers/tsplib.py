import logging

import numpy as np

from parsers.comum import (
    ParseError,
    distancias_euclidianas,
    inteiro_cabecalho,
    ler_arquivo,
    ler_cabecalho,
    ler_linhas_numericas,
    localizar_secao,
    tokens_numericos,
)
from services.problemas import ProblemInstance, ProblemKind, as_permutation

logger = logging.getLogger(__name__)

FORMATO = "TSPLIB"
EXTENSAO_SOLUCAO = ".opt.tour"
SECOES = ("NODE_COORD_SECTION", "EDGE_WEIGHT_SECTION", "DISPLAY_DATA_SECTION", "TOUR_SECTION")
FORMATOS_EXPLICITOS = ("FULL_MATRIX", "UPPER_ROW", "LOWER_DIAG_ROW")


def _matriz_explicita(linhas, inicio, n, formato_pesos):
    esperado = {
        "FULL_MATRIX": n * n,
        "UPPER_ROW": n * (n - 1) // 2,
        "LOWER_DIAG_ROW": n * (n + 1) // 2,
    }[formato_pesos]
    # DISPLAY_DATA_SECTION pode vir depois da matriz
    valores, origem = tokens_numericos(linhas, inicio, FORMATO, limite=esperado)
    if len(valores) < esperado:
        linha = origem[-1] if origem else inicio
        raise ParseError(FORMATO, f"EDGE_WEIGHT_SECTION com {len(valores)} valores, esperados {esperado}", linha)
    valores = valores[:esperado]

    if formato_pesos == "FULL_MATRIX":
        return valores.reshape(n, n)
    dist = np.zeros((n, n))
    if formato_pesos == "UPPER_ROW":
        dist[np.triu_indices(n, k=1)] = valores
    else:
        dist[np.tril_indices(n)] = valores
    return np.maximum(dist, dist.T)


def parse_tsplib(texto):
    linhas = texto.splitlines()
    cabecalho, inicio = ler_cabecalho(linhas, FORMATO, SECOES)
    n = inteiro_cabecalho(cabecalho, "DIMENSION", FORMATO)
    nome = cabecalho.get("NAME", "tsp")
    tipo_peso = cabecalho.get("EDGE_WEIGHT_TYPE", "").upper()

    if tipo_peso == "EUC_2D":
        secao = localizar_secao(linhas, "NODE_COORD_SECTION", inicio)
        if secao is None:
            raise ParseError(FORMATO, "NODE_COORD_SECTION ausente", len(linhas))
        dados, _ = ler_linhas_numericas(linhas, secao + 1, n, 3, FORMATO)
        coords = dados[:, 1:3]
        dist = distancias_euclidianas(coords)
    elif tipo_peso == "EXPLICIT":
        formato_pesos = cabecalho.get("EDGE_WEIGHT_FORMAT", "FULL_MATRIX").upper()
        if formato_pesos not in FORMATOS_EXPLICITOS:
            raise ParseError(FORMATO, f"EDGE_WEIGHT_FORMAT não suportado: {formato_pesos}")
        secao = localizar_secao(linhas, "EDGE_WEIGHT_SECTION", inicio)
        if secao is None:
            raise ParseError(FORMATO, "EDGE_WEIGHT_SECTION ausente", len(linhas))
        dist = _matriz_explicita(linhas, secao + 1, n, formato_pesos)
        coords = None
        if not np.array_equal(dist, dist.T) or np.any(np.diag(dist) != 0):
            raise ParseError(FORMATO, "matriz explícita não simétrica ou com diagonal não nula", secao + 1)
    else:
        raise ParseError(FORMATO, f"EDGE_WEIGHT_TYPE não suportado: '{tipo_peso or '?'}'")

    logger.debug(f"[TSPLIB] {nome}: {n} cidades ({tipo_peso})")
    return ProblemInstance(kind=ProblemKind.TSP, dimension=n, name=nome, dist=dist, coords=coords)


def parse_tour(texto):
    """Lê um arquivo .opt.tour (TOUR_SECTION terminada por -1)."""
    linhas = texto.splitlines()
    secao = localizar_secao(linhas, "TOUR_SECTION")
    if secao is None:
        raise ParseError(FORMATO, "TOUR_SECTION ausente", len(linhas))
    rotulos = []
    for i in range(secao + 1, len(linhas)):
        for parte in linhas[i].split():
            if parte in ("-1", "EOF"):
                return as_permutation(rotulos)
            try:
                rotulos.append(int(parte))
            except ValueError:
                raise ParseError(FORMATO, f"rótulo não inteiro '{parte}'", i + 1) from None
    return as_permutation(rotulos)


def importar_instancia(caminho):
    return parse_tsplib(ler_arquivo(caminho))


def importar_tour(caminho):
    return parse_tour(ler_arquivo(caminho))


def importar_solucao(caminho):
    return importar_tour(caminho)
