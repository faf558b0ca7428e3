import logging
from pathlib import Path

import numpy as np

from parsers.comum import ParseError, ler_arquivo, tokens_numericos
from services.problemas import ProblemInstance, ProblemKind, as_permutation

logger = logging.getLogger(__name__)

FORMATO = "QAPLIB"
EXTENSAO_SOLUCAO = ".sln"


def parse_qaplib(texto, nome="qap"):
    """n, depois duas matrizes n x n: fluxo e distância (convenção QAPLIB)."""
    linhas = texto.splitlines()
    valores, origem = tokens_numericos(linhas, 0, FORMATO)
    if len(valores) == 0:
        raise ParseError(FORMATO, "arquivo vazio", 1)
    n = int(valores[0])
    if n != valores[0] or n < 1:
        raise ParseError(FORMATO, f"dimensão inválida: {valores[0]:g}", origem[0])

    esperado = 2 * n * n
    corpo = valores[1:]
    if len(corpo) != esperado:
        linha = origem[-1] if origem else 1
        raise ParseError(FORMATO, f"{len(corpo)} elementos de matriz, esperados {esperado} (2 x {n}²)", linha)

    fluxo = corpo[: n * n].reshape(n, n)
    dist = corpo[n * n:].reshape(n, n)
    logger.debug(f"[QAPLIB] {nome}: n={n}")
    return ProblemInstance(kind=ProblemKind.QAP, dimension=n, name=nome, flow=fluxo, dist=dist)


def importar_instancia(caminho):
    return parse_qaplib(ler_arquivo(caminho), nome=Path(caminho).stem)


def parse_solucao(texto):
    """Arquivo .sln: n, valor ótimo e a permutação p (instalação i no local p(i)).

    O genoma guarda a instalação de cada local, então devolve a inversa de p.
    """
    valores, origem = tokens_numericos(texto.splitlines(), 0, FORMATO)
    if len(valores) < 2:
        raise ParseError(FORMATO, "solução sem dimensão e valor", 1)
    n = int(valores[0])
    locais = as_permutation(valores[2:], n)
    return np.argsort(locais) + 1


def importar_solucao(caminho):
    return parse_solucao(ler_arquivo(caminho))
