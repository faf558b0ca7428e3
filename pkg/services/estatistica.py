"""Teste de Wilcoxon da soma dos postos (Mann-Whitney), bilateral."""
import itertools
import logging

import numpy as np
from scipy.stats import norm, rankdata, tiecorrect

logger = logging.getLogger(__name__)

LIMITE_EXATO = 14
METODOS = ("auto", "exato", "normal")


def _p_exato(postos, n, soma_a):
    # todas as partições dos postos combinados em grupos de tamanho n
    media = n * (len(postos) + 1) / 2.0
    observado = abs(soma_a - media)
    total = extremos = 0
    for grupo in itertools.combinations(postos, n):
        total += 1
        if abs(sum(grupo) - media) >= observado - 1e-9:
            extremos += 1
    return extremos / total


def _p_normal(postos, n, m, u):
    desvio = np.sqrt(tiecorrect(postos) * n * m * (n + m + 1) / 12.0)
    if desvio == 0:
        return 1.0
    z = max(abs(u - n * m / 2.0) - 0.5, 0.0) / desvio
    return min(1.0, 2.0 * norm.sf(z))


def wilcoxon_rank_sum(a, b, metodo="auto"):
    """Retorna (U, p) com U = R_a - n(n+1)/2.

    Até 14 observações no total a distribuição é enumerada; acima disso usa a
    aproximação normal com correção de empates e de continuidade.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    n, m = a.size, b.size
    if n == 0 or m == 0:
        raise ValueError(f"amostras vazias: tamanhos {n} e {m}")
    if metodo not in METODOS:
        raise ValueError(f"método desconhecido '{metodo}', use um de {METODOS}")

    postos = rankdata(np.r_[a, b])
    soma_a = float(postos[:n].sum())
    u = soma_a - n * (n + 1) / 2.0

    if metodo == "exato" or (metodo == "auto" and n + m <= LIMITE_EXATO):
        p = _p_exato(postos.tolist(), n, soma_a)
    else:
        p = _p_normal(postos, n, m, u)
    return float(u), float(p)


def marca_significancia(p, media_referencia, media_sujeito, nivel=0.05):
    # "-": referência significativamente pior que o sujeito; "+": melhor
    if p < nivel and media_referencia > media_sujeito:
        return "-"
    if p < nivel and media_referencia < media_sujeito:
        return "+"
    return "≈"
