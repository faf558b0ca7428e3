import numpy as np
import pytest

from parsers.comum import distancias_euclidianas
from services.problemas import ProblemInstance, ProblemKind


def _tsp(d, rng):
    coords = rng.uniform(0, 100, size=(d, 2))
    return ProblemInstance(ProblemKind.TSP, d, name=f"tsp{d}", dist=distancias_euclidianas(coords), coords=coords)


def _cvrp(d, rng):
    coords = rng.uniform(0, 100, size=(d + 1, 2))
    return ProblemInstance(
        ProblemKind.CVRP,
        d,
        name=f"cvrp{d}",
        dist=distancias_euclidianas(coords),
        demands=rng.integers(1, 10, size=d),
        capacity=20,
        coords=coords,
    )


def _qap(d, rng):
    # matrizes gerais (assimétricas, diagonal não nula)
    return ProblemInstance(
        ProblemKind.QAP,
        d,
        name=f"qap{d}",
        flow=rng.integers(0, 10, size=(d, d)),
        dist=rng.integers(0, 10, size=(d, d)),
    )


def _lop(d, rng):
    return ProblemInstance(ProblemKind.LOP, d, name=f"lop{d}", weight=rng.integers(0, 50, size=(d, d)))


FABRICAS = {
    ProblemKind.TSP: _tsp,
    ProblemKind.CVRP: _cvrp,
    ProblemKind.QAP: _qap,
    ProblemKind.LOP: _lop,
}


@pytest.fixture
def instancia():
    def criar(kind, d, seed=0):
        return FABRICAS[ProblemKind(kind)](d, np.random.default_rng(seed))

    return criar


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def tsp_texto():
    def criar(coords, nome="teste"):
        linhas = [
            f"NAME : {nome}",
            "TYPE : TSP",
            f"DIMENSION : {len(coords)}",
            "EDGE_WEIGHT_TYPE : EUC_2D",
            "NODE_COORD_SECTION",
        ]
        linhas += [f"{i} {x} {y}" for i, (x, y) in enumerate(coords, start=1)]
        linhas.append("EOF")
        return "\n".join(linhas) + "\n"

    return criar
