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
)
from services.problemas import ProblemInstance, ProblemKind, as_permutation

logger = logging.getLogger(__name__)

FORMATO = "CVRPLIB"
EXTENSAO_SOLUCAO = ".sol"
SECOES = ("NODE_COORD_SECTION", "DEMAND_SECTION", "DEPOT_SECTION", "EDGE_WEIGHT_SECTION")


def _ler_deposito(linhas, secao):
    depositos = []
    for i in range(secao + 1, len(linhas)):
        for parte in linhas[i].split():
            if parte in ("-1", "EOF"):
                return depositos
            try:
                depositos.append(int(parte))
            except ValueError:
                raise ParseError(FORMATO, f"depósito não inteiro '{parte}'", i + 1) from None
    return depositos


def parse_cvrp(texto):
    """Lê uma instância CVRPLIB/TSPLIB; o depósito vira o índice 0 e os clientes 1..D."""
    linhas = texto.splitlines()
    cabecalho, inicio = ler_cabecalho(linhas, FORMATO, SECOES)
    nome = cabecalho.get("NAME", "cvrp")
    total_nos = inteiro_cabecalho(cabecalho, "DIMENSION", FORMATO)
    if "CAPACITY" not in cabecalho:
        raise ParseError(FORMATO, "CAPACITY ausente")
    try:
        capacidade = float(cabecalho["CAPACITY"])
    except ValueError:
        raise ParseError(FORMATO, f"CAPACITY não numérica: '{cabecalho['CAPACITY']}'") from None
    if capacidade <= 0:
        raise ParseError(FORMATO, f"CAPACITY deve ser positiva: {capacidade:g}")

    tipo_peso = cabecalho.get("EDGE_WEIGHT_TYPE", "EUC_2D").upper()
    if tipo_peso != "EUC_2D":
        raise ParseError(FORMATO, f"EDGE_WEIGHT_TYPE não suportado: '{tipo_peso}'")

    secao_coords = localizar_secao(linhas, "NODE_COORD_SECTION", inicio)
    if secao_coords is None:
        raise ParseError(FORMATO, "NODE_COORD_SECTION ausente", len(linhas))
    coords, _ = ler_linhas_numericas(linhas, secao_coords + 1, total_nos, 3, FORMATO)

    secao_demanda = localizar_secao(linhas, "DEMAND_SECTION", inicio)
    if secao_demanda is None:
        raise ParseError(FORMATO, "DEMAND_SECTION ausente", len(linhas))
    demandas, _ = ler_linhas_numericas(linhas, secao_demanda + 1, total_nos, 2, FORMATO)

    secao_deposito = localizar_secao(linhas, "DEPOT_SECTION", inicio)
    depositos = _ler_deposito(linhas, secao_deposito) if secao_deposito is not None else []
    if len(depositos) != 1:
        raise ParseError(FORMATO, f"depósito não identificado (encontrados {len(depositos)})",
                         secao_deposito + 1 if secao_deposito is not None else None)

    ids = coords[:, 0].astype(int).tolist()
    deposito = depositos[0]
    if deposito not in ids:
        raise ParseError(FORMATO, f"depósito {deposito} não está em NODE_COORD_SECTION", secao_deposito + 1)

    # Depósito primeiro, clientes na ordem do arquivo
    ordem = [ids.index(deposito)] + [k for k, no in enumerate(ids) if no != deposito]
    demanda_por_no = {int(no): valor for no, valor in demandas}
    faltando = [no for no in ids if no not in demanda_por_no]
    if faltando:
        raise ParseError(FORMATO, f"demanda ausente para os nós {faltando[:5]}", secao_demanda + 1)

    clientes = [ids[k] for k in ordem[1:]]
    vetor_demanda = np.array([demanda_por_no[no] for no in clientes], dtype=float)
    for no, valor in zip(clientes, vetor_demanda):
        if valor > capacidade:
            raise ParseError(
                FORMATO,
                f"instância inviável: cliente {no} com demanda {valor:g} acima da capacidade {capacidade:g}",
                secao_demanda + 1 + ids.index(no) + 1,
            )

    xy = coords[ordem, 1:3]
    logger.debug(f"[CVRPLIB] {nome}: {len(clientes)} clientes, capacidade {capacidade:g}")
    return ProblemInstance(
        kind=ProblemKind.CVRP,
        dimension=len(clientes),
        name=nome,
        dist=distancias_euclidianas(xy),
        demands=vetor_demanda,
        capacity=capacidade,
        coords=xy,
    )


def importar_instancia(caminho):
    return parse_cvrp(ler_arquivo(caminho))


def parse_solucao(texto):
    """Arquivo .sol: linhas 'Route #k: c1 c2 ...' com clientes 1..D; o giant tour é a concatenação."""
    rotulos = []
    for numero, linha in enumerate(texto.splitlines(), start=1):
        cabeca, separador, corpo = linha.partition(":")
        if not separador or not cabeca.strip().lower().startswith("route"):
            continue
        for parte in corpo.split():
            try:
                rotulos.append(int(parte))
            except ValueError:
                raise ParseError(FORMATO, f"cliente não inteiro '{parte}'", numero) from None
    if not rotulos:
        raise ParseError(FORMATO, "solução sem rotas", 1)
    return as_permutation(rotulos)


def importar_solucao(caminho):
    return parse_solucao(ler_arquivo(caminho))
