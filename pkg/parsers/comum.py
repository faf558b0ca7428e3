import logging
import re

import numpy as np

logger = logging.getLogger(__name__)

# Linha de cabeçalho TSPLIB: "CHAVE : valor" (o ":" é opcional em alguns arquivos)
PADRAO_CABECALHO = re.compile(r"^\s*([A-Z_]+)\s*:?\s*(.*?)\s*$")


class ParseError(ValueError):
    """Erro de leitura de instância, sempre com o número da linha (1-based)."""

    def __init__(self, formato, mensagem, linha=None):
        self.formato = formato
        self.linha = linha
        onde = f" (linha {linha})" if linha is not None else ""
        super().__init__(f"[{formato}] {mensagem}{onde}")


def nint(valores):
    """Arredondamento TSPLIB: inteiro mais próximo, floor(x + 0.5)."""
    return np.floor(np.asarray(valores, dtype=float) + 0.5)


def distancias_euclidianas(coords):
    coords = np.asarray(coords, dtype=float)
    diff = coords[:, None, :] - coords[None, :, :]
    return nint(np.sqrt((diff ** 2).sum(axis=2)))


def ler_cabecalho(linhas, formato, secoes):
    """Lê pares CHAVE : valor até a primeira seção conhecida.

    Retorna (cabecalho, indice_da_primeira_secao). Linhas vazias são ignoradas.
    """
    cabecalho = {}
    for i, linha in enumerate(linhas):
        texto = linha.strip()
        if not texto:
            continue
        chave = texto.split()[0].rstrip(":")
        if chave in secoes or chave == "EOF":
            return cabecalho, i
        match = PADRAO_CABECALHO.match(texto)
        if not match or not match.group(2):
            raise ParseError(formato, f"cabeçalho malformado: '{texto}'", i + 1)
        cabecalho[match.group(1)] = match.group(2)
    return cabecalho, len(linhas)


def inteiro_cabecalho(cabecalho, chave, formato, obrigatorio=True):
    valor = cabecalho.get(chave)
    if valor is None:
        if obrigatorio:
            raise ParseError(formato, f"campo {chave} ausente")
        return None
    try:
        return int(float(valor))
    except ValueError:
        raise ParseError(formato, f"campo {chave} não numérico: '{valor}'") from None


def localizar_secao(linhas, nome, inicio=0):
    for i in range(inicio, len(linhas)):
        partes = linhas[i].split()
        if partes and partes[0].rstrip(":") == nome:
            return i
    return None


def ler_linhas_numericas(linhas, inicio, quantidade, colunas, formato):
    """Lê `quantidade` linhas não vazias a partir de `inicio` com `colunas` números cada."""
    dados = []
    i = inicio
    while len(dados) < quantidade:
        if i >= len(linhas):
            raise ParseError(formato, f"seção truncada: esperadas {quantidade} linhas, lidas {len(dados)}", i)
        partes = linhas[i].split()
        i += 1
        if not partes:
            continue
        if len(partes) < colunas:
            raise ParseError(formato, f"esperados {colunas} valores, encontrados {len(partes)}", i)
        try:
            dados.append([float(p) for p in partes[:colunas]])
        except ValueError:
            raise ParseError(formato, f"valor não numérico em '{linhas[i - 1].strip()}'", i) from None
    return np.array(dados, dtype=float), i


def tokens_numericos(linhas, inicio, formato, limite=None):
    """Números de `inicio` em diante, com a linha de cada um (para mensagens).

    Para em EOF ou, com `limite`, logo que `limite` valores forem lidos.
    """
    valores, origem = [], []
    for i in range(inicio, len(linhas)):
        for parte in linhas[i].split():
            if parte == "EOF" or (limite is not None and len(valores) >= limite):
                return np.array(valores, dtype=float), origem
            try:
                valores.append(float(parte))
            except ValueError:
                raise ParseError(formato, f"valor não numérico '{parte}'", i + 1) from None
            origem.append(i + 1)
    return np.array(valores, dtype=float), origem


def ler_arquivo(caminho):
    with open(caminho, "r", encoding="utf-8", errors="replace") as f:
        return f.read()
