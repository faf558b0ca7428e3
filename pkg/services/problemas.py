"""Modelos dos quatro problemas combinatórios e avaliação de permutações.

Convenção única: toda aptidão é de minimização e carregada como float.
Permutações são arrays numpy de rótulos 1..D.

Observação sobre o QAP: a fórmula publicada indexa a distância por
instalações (d[s_i][s_j]); usamos a forma QAPLIB, sum flow[s_i][s_j] * dist[i][j],
para que os valores de referência da QAPLIB validem o avaliador.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

logger = logging.getLogger(__name__)


class ProblemKind(str, Enum):
    TSP = "TSP"
    CVRP = "CVRP"
    QAP = "QAP"
    LOP = "LOP"


# Tipos cuja similaridade é medida por arestas (invariância a rotação)
TIPOS_PERMUTACAO = (ProblemKind.TSP, ProblemKind.CVRP)


def _matriz(valor, forma, nome):
    if valor is None:
        raise ValueError(f"matriz {nome} obrigatória")
    matriz = np.array(valor, dtype=float)
    if matriz.shape != forma:
        raise ValueError(f"matriz {nome} com forma {matriz.shape}, esperada {forma}")
    matriz.setflags(write=False)
    return matriz


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    kind: ProblemKind
    dimension: int
    name: str = ""
    dist: np.ndarray = None
    flow: np.ndarray = None
    weight: np.ndarray = None
    demands: np.ndarray = None
    capacity: float = None
    coords: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        kind = ProblemKind(self.kind)
        object.__setattr__(self, "kind", kind)
        d = int(self.dimension)
        if d < 1:
            raise ValueError(f"dimensão inválida: {self.dimension}")
        object.__setattr__(self, "dimension", d)

        if kind == ProblemKind.TSP:
            dist = _matriz(self.dist, (d, d), "dist")
            self._checar_simetria(dist)
            object.__setattr__(self, "dist", dist)
        elif kind == ProblemKind.CVRP:
            dist = _matriz(self.dist, (d + 1, d + 1), "dist")
            self._checar_simetria(dist)
            object.__setattr__(self, "dist", dist)
            if self.capacity is None or float(self.capacity) <= 0:
                raise ValueError(f"capacidade inválida: {self.capacity}")
            object.__setattr__(self, "capacity", float(self.capacity))
            demandas = np.array(self.demands, dtype=float)
            if demandas.shape != (d,):
                raise ValueError(f"vetor de demandas com forma {demandas.shape}, esperada ({d},)")
            if (demandas < 0).any():
                raise ValueError("demanda negativa")
            excede = np.flatnonzero(demandas > self.capacity)
            if excede.size:
                raise ValueError(
                    f"cliente {int(excede[0]) + 1} com demanda {demandas[excede[0]]:g} acima da capacidade {self.capacity:g}"
                )
            demandas.setflags(write=False)
            object.__setattr__(self, "demands", demandas)
        elif kind == ProblemKind.QAP:
            object.__setattr__(self, "flow", _matriz(self.flow, (d, d), "flow"))
            object.__setattr__(self, "dist", _matriz(self.dist, (d, d), "dist"))
        else:
            object.__setattr__(self, "weight", _matriz(self.weight, (d, d), "weight"))

        if self.coords is not None:
            coords = np.array(self.coords, dtype=float)
            coords.setflags(write=False)
            object.__setattr__(self, "coords", coords)

    @staticmethod
    def _checar_simetria(dist):
        if (dist < 0).any():
            raise ValueError("distância negativa")
        if not np.array_equal(dist, dist.T):
            raise ValueError("matriz de distâncias não simétrica")
        if np.any(np.diag(dist) != 0):
            raise ValueError("diagonal da matriz de distâncias diferente de zero")

    def __repr__(self):
        return f"ProblemInstance({self.kind.value}, {self.name!r}, D={self.dimension})"


@dataclass(frozen=True)
class RouteSet:
    routes: tuple

    @property
    def giant_tour(self):
        return [c for rota in self.routes for c in rota]


def as_permutation(seq, dimension=None):
    """Converte para array de rótulos e valida a bijeção sobre {1..D}."""
    s = np.asarray(seq, dtype=np.int64).ravel()
    d = len(s) if dimension is None else dimension
    if len(s) != d or not np.array_equal(np.sort(s), np.arange(1, d + 1)):
        raise ValueError(f"não é permutação de 1..{d}: {s.tolist()}")
    return s


def random_permutation(dimension, rng):
    return rng.permutation(dimension).astype(np.int64) + 1


def _checar_dimensao(instance, s):
    if len(s) != instance.dimension:
        raise ValueError(
            f"violação de contrato: permutação de tamanho {len(s)} para {instance.name or instance.kind.value} com D={instance.dimension}"
        )


def decode_cvrp(instance, s):
    """Divisão gulosa sequencial do giant tour: nova rota quando a capacidade estoura."""
    if instance.kind != ProblemKind.CVRP:
        raise ValueError(f"decode_cvrp exige CVRP, recebido {instance.kind.value}")
    rotas, atual, carga = [], [], 0.0
    for c in s:
        c = int(c)
        demanda = instance.demands[c - 1]
        if atual and carga + demanda > instance.capacity:
            rotas.append(tuple(atual))
            atual, carga = [], 0.0
        atual.append(c)
        carga += demanda
    if atual:
        rotas.append(tuple(atual))
    return RouteSet(tuple(rotas))


def _custo_rotas(instance, rotas):
    dist = instance.dist
    total = 0.0
    for rota in rotas:
        idx = np.fromiter(rota, dtype=np.int64)
        total += dist[0, idx[0]] + dist[idx[:-1], idx[1:]].sum() + dist[idx[-1], 0]
    return float(total)


def _avaliar(instance, s):
    kind = instance.kind
    if len(s) == 0:
        return 0.0
    if kind == ProblemKind.TSP:
        idx = s - 1
        return float(instance.dist[idx, np.roll(idx, -1)].sum())
    if kind == ProblemKind.CVRP:
        return _custo_rotas(instance, decode_cvrp(instance, s).routes)
    idx = s - 1
    m = len(idx)
    if kind == ProblemKind.QAP:
        return float((instance.flow[np.ix_(idx, idx)] * instance.dist[:m, :m]).sum())
    # LOP: maximização convertida em minimização (inclui a diagonal, constante)
    return float(-np.triu(instance.weight[np.ix_(idx, idx)]).sum())


def evaluate(instance, s):
    s = np.asarray(s, dtype=np.int64)
    _checar_dimensao(instance, s)
    return _avaliar(instance, s)


def evaluate_partial(instance, partial):
    """Objetivo de uma permutação parcial (subconjunto de rótulos).

    TSP: ciclo fechado sobre as cidades presentes. CVRP: giant tour parcial
    decodificado. QAP/LOP: sub-bloco induzido pelos elementos presentes,
    ocupando as posições 0..m-1.
    """
    return _avaliar(instance, np.asarray(partial, dtype=np.int64))


def tour_matrix(instance):
    """(matriz, deslocamento) para indexar a matriz de distâncias por rótulo."""
    if instance.kind == ProblemKind.TSP:
        return instance.dist, -1
    if instance.kind == ProblemKind.CVRP:
        return instance.dist, 0
    raise ValueError(f"{instance.kind.value} não tem matriz de rota")
