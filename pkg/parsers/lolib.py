import logging
from pathlib import Path

from parsers.comum import ParseError, ler_arquivo, tokens_numericos
from services.problemas import ProblemInstance, ProblemKind, as_permutation

logger = logging.getLogger(__name__)

FORMATO = "LOLIB"
EXTENSAO_SOLUCAO = ".sol"


def _linha_de_nome(linha):
    partes = linha.split()
    if len(partes) != 1:
        return True
    try:
        float(partes[0])
    except ValueError:
        return True
    return False


def parse_lolib(texto, nome="lop"):
    """Linha de nome opcional, n, depois a matriz n x n por linhas."""
    linhas = texto.splitlines()
    inicio = 0
    while inicio < len(linhas) and not linhas[inicio].strip():
        inicio += 1
    if inicio < len(linhas) and _linha_de_nome(linhas[inicio]):
        nome = linhas[inicio].strip() or nome
        inicio += 1

    valores, origem = tokens_numericos(linhas, inicio, FORMATO)
    if len(valores) == 0:
        raise ParseError(FORMATO, "dimensão ausente", inicio + 1)
    n = int(valores[0])
    if n != valores[0] or n < 1:
        raise ParseError(FORMATO, f"dimensão inválida: {valores[0]:g}", origem[0])
    if len(valores) - 1 != n * n:
        raise ParseError(FORMATO, f"{len(valores) - 1} elementos de matriz, esperados {n * n}", origem[-1])

    logger.debug(f"[LOLIB] {nome}: n={n}")
    return ProblemInstance(kind=ProblemKind.LOP, dimension=n, name=nome, weight=valores[1:].reshape(n, n))


def importar_instancia(caminho):
    return parse_lolib(ler_arquivo(caminho), nome=Path(caminho).name)


def parse_solucao(texto):
    """Ordem dos setores, um rótulo 1..n por posição (EOF opcional)."""
    valores, _ = tokens_numericos(texto.splitlines(), 0, FORMATO)
    return as_permutation(valores)


def importar_solucao(caminho):
    return parse_solucao(ler_arquivo(caminho))
