import numpy as np
import pytest

from parsers.comum import ParseError, nint
from parsers.cvrplib import parse_cvrp
from parsers.cvrplib import parse_solucao as parse_solucao_cvrp
from parsers.lolib import parse_lolib
from parsers.lolib import parse_solucao as parse_solucao_lop
from parsers.qaplib import parse_qaplib
from parsers.qaplib import parse_solucao as parse_solucao_qap
from parsers.tsplib import parse_tour, parse_tsplib
from services.problemas import ProblemKind, evaluate


def test_nint_arredonda_meio_para_cima():
    assert nint([0.5, 1.49, 2.5, 3.6]).tolist() == [1.0, 1.0, 3.0, 4.0]


def test_tsplib_euc_2d(tsp_texto):
    inst = parse_tsplib(tsp_texto([(0, 0), (3, 0), (3, 4), (0, 4)], nome="ret"))
    assert inst.kind == ProblemKind.TSP
    assert inst.name == "ret"
    assert inst.dimension == 4
    assert inst.dist[0, 2] == 5.0
    assert evaluate(inst, [1, 2, 3, 4]) == 14.0


def test_tsplib_upper_row():
    texto = "\n".join([
        "NAME: exp",
        "TYPE: TSP",
        "DIMENSION: 3",
        "EDGE_WEIGHT_TYPE: EXPLICIT",
        "EDGE_WEIGHT_FORMAT: UPPER_ROW",
        "EDGE_WEIGHT_SECTION",
        "1 2",
        "3",
        "EOF",
    ])
    inst = parse_tsplib(texto)
    assert inst.dist.tolist() == [[0, 1, 2], [1, 0, 3], [2, 3, 0]]
    assert inst.coords is None


def test_tsplib_lower_diag_row():
    texto = "\n".join([
        "DIMENSION: 3",
        "EDGE_WEIGHT_TYPE: EXPLICIT",
        "EDGE_WEIGHT_FORMAT: LOWER_DIAG_ROW",
        "EDGE_WEIGHT_SECTION",
        "0 1 0 2 3 0",
    ])
    assert parse_tsplib(texto).dist.tolist() == [[0, 1, 2], [1, 0, 3], [2, 3, 0]]


@pytest.mark.parametrize("formato, pesos", [
    ("FULL_MATRIX", ["0 1 2", "1 0 3", "2 3 0"]),
    ("UPPER_ROW", ["1 2", "3"]),
])
def test_tsplib_explicito_seguido_de_display_data(formato, pesos):
    texto = "\n".join([
        "NAME: bays3",
        "TYPE: TSP",
        "DIMENSION: 3",
        "EDGE_WEIGHT_TYPE: EXPLICIT",
        f"EDGE_WEIGHT_FORMAT: {formato}",
        "DISPLAY_DATA_TYPE: TWOD_DISPLAY",
        "EDGE_WEIGHT_SECTION",
        *pesos,
        "DISPLAY_DATA_SECTION",
        "1 1150.0 1760.0",
        "2 630.0 1660.0",
        "3 40.0 2090.0",
        "EOF",
    ])
    inst = parse_tsplib(texto)
    assert inst.dist.tolist() == [[0, 1, 2], [1, 0, 3], [2, 3, 0]]
    assert evaluate(inst, [1, 2, 3]) == 6.0


def test_tsplib_coordenada_invalida_indica_linha(tsp_texto):
    texto = tsp_texto([(0, 0), (1, 1)]).replace("2 1 1", "2 1 x")
    with pytest.raises(ParseError) as erro:
        parse_tsplib(texto)
    assert erro.value.linha == 7
    assert "[TSPLIB]" in str(erro.value)


def test_tsplib_tipo_de_peso_nao_suportado():
    with pytest.raises(ParseError, match="EDGE_WEIGHT_TYPE"):
        parse_tsplib("DIMENSION: 2\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n")


def test_tsplib_secao_truncada(tsp_texto):
    texto = tsp_texto([(0, 0), (1, 1), (2, 2)]).replace("3 2 2\nEOF\n", "")
    with pytest.raises(ParseError, match="truncada"):
        parse_tsplib(texto)


def test_parse_tour():
    texto = "NAME : t.opt.tour\nTYPE : TOUR\nDIMENSION : 4\nTOUR_SECTION\n3\n1\n4\n2\n-1\nEOF\n"
    assert parse_tour(texto).tolist() == [3, 1, 4, 2]


def test_parse_tour_rejeita_repeticao():
    with pytest.raises(ValueError):
        parse_tour("TOUR_SECTION\n1\n1\n-1\n")


CVRP = """NAME : mini
TYPE : CVRP
DIMENSION : 4
EDGE_WEIGHT_TYPE : EUC_2D
CAPACITY : 10
NODE_COORD_SECTION
1 3 0
2 0 0
3 0 4
4 6 0
DEMAND_SECTION
1 4
2 0
3 6
4 5
DEPOT_SECTION
2
-1
EOF
"""


def test_cvrp_deposito_vai_para_indice_zero():
    inst = parse_cvrp(CVRP)
    assert inst.kind == ProblemKind.CVRP
    assert inst.dimension == 3
    assert inst.capacity == 10.0
    # clientes 1, 3, 4 do arquivo, nessa ordem
    assert inst.demands.tolist() == [4.0, 6.0, 5.0]
    assert inst.coords[0].tolist() == [0.0, 0.0]
    assert inst.dist[0, 1] == 3.0
    assert inst.dist[0, 2] == 4.0


def test_cvrp_demanda_acima_da_capacidade():
    with pytest.raises(ParseError, match="inviável"):
        parse_cvrp(CVRP.replace("3 6\n", "3 60\n"))


def test_cvrp_sem_deposito():
    with pytest.raises(ParseError, match="depósito"):
        parse_cvrp(CVRP.replace("DEPOT_SECTION\n2\n-1\n", "DEPOT_SECTION\n-1\n"))


def test_cvrp_sem_capacidade():
    with pytest.raises(ParseError, match="CAPACITY"):
        parse_cvrp(CVRP.replace("CAPACITY : 10\n", ""))


def test_qaplib_fluxo_primeiro():
    texto = "2\n\n0 3\n1 0\n\n0 5\n7 0\n"
    inst = parse_qaplib(texto, nome="mini")
    assert inst.flow.tolist() == [[0, 3], [1, 0]]
    assert inst.dist.tolist() == [[0, 5], [7, 0]]
    # 3*5 + 1*7
    assert evaluate(inst, [1, 2]) == 22.0
    # 1*5 + 3*7
    assert evaluate(inst, [2, 1]) == 26.0


def test_qaplib_quantidade_errada():
    with pytest.raises(ParseError, match="esperados 8"):
        parse_qaplib("2\n0 3\n1 0\n0 5\n")


def test_lolib_com_e_sem_linha_de_nome():
    com_nome = parse_lolib("N-teste\n2\n0 4\n1 0\n")
    sem_nome = parse_lolib("2\n0 4\n1 0\n", nome="arquivo")
    assert com_nome.name == "N-teste"
    assert sem_nome.name == "arquivo"
    assert np.array_equal(com_nome.weight, sem_nome.weight)
    assert evaluate(com_nome, [1, 2]) == -4.0


def test_lolib_dimensao_um():
    inst = parse_lolib("1\n7\n")
    assert evaluate(inst, [1]) == -7.0


def test_lolib_matriz_incompleta():
    with pytest.raises(ParseError):
        parse_lolib("3\n1 2 3\n4 5 6\n")


def test_qaplib_solucao_vira_instalacao_por_local():
    # instalação 1 no local 2, 2 no 3, 3 no 1
    assert parse_solucao_qap("3 10\n2 3 1\n").tolist() == [3, 1, 2]


def test_qaplib_solucao_confere_com_objetivo_publicado(instancia):
    inst = instancia("QAP", 5, seed=40)
    locais = np.array([4, 1, 5, 3, 2])
    publicado = sum(
        inst.flow[i, j] * inst.dist[locais[i] - 1, locais[j] - 1] for i in range(5) for j in range(5)
    )
    texto = f"5 {publicado}\n" + " ".join(map(str, locais)) + "\n"
    assert evaluate(inst, parse_solucao_qap(texto)) == float(publicado)


def test_cvrp_solucao_concatena_rotas():
    texto = "Route #1: 3 1\nRoute #2: 2\nCost 27\n"
    assert parse_solucao_cvrp(texto).tolist() == [3, 1, 2]
    with pytest.raises(ParseError, match="sem rotas"):
        parse_solucao_cvrp("Cost 27\n")
    with pytest.raises(ValueError):
        parse_solucao_cvrp("Route #1: 1 1\n")


def test_lolib_solucao():
    assert parse_solucao_lop("2 3 1\nEOF\n").tolist() == [2, 3, 1]
