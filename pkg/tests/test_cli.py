import json

import pandas as pd
import pytest

from cli.app import iniciar_aplicacao

RAPIDO = ["--runs", "2", "--pop", "4", "--gens", "3", "--eps", "2", "--lambda", "1", "--alpha", "1"]


@pytest.fixture
def arquivos(tmp_path, tsp_texto):
    a = tmp_path / "a.tsp"
    b = tmp_path / "b.tsp"
    a.write_text(tsp_texto([(0, 0), (3, 0), (3, 4), (0, 4), (1, 2)], "a"))
    b.write_text(tsp_texto([(0, 0), (1, 0), (2, 2), (0, 5), (4, 4), (5, 1)], "b"))
    return str(a), str(b)


def test_run_grava_resultados(arquivos, tmp_path, capsys):
    saida = tmp_path / "mtea"
    codigo = iniciar_aplicacao(["run", "--benchmark", *arquivos, "--algo", "mtea-ast", *RAPIDO, "--out", str(saida)])
    assert codigo == 0
    assert (saida / "convergence.csv").exists()
    assert (saida / "interactions.csv").exists()
    assert (saida / "similarity_003.csv").exists()
    resumo = json.loads((saida / "summary.json").read_text(encoding="utf-8"))
    assert resumo["master_seed"] == 0
    assert resumo["config"]["algorithm"] == "mtea-ast"
    assert "a" in capsys.readouterr().out


def test_stats_compara_duas_pastas(arquivos, tmp_path):
    for algoritmo in ("mtea-ast", "sto"):
        assert iniciar_aplicacao(
            ["run", "--benchmark", *arquivos, "--algo", algoritmo, *RAPIDO, "--out", str(tmp_path / algoritmo)]
        ) == 0
    codigo = iniciar_aplicacao(
        ["stats", "--subject", str(tmp_path / "mtea-ast"), "--reference", str(tmp_path / "sto")]
    )
    assert codigo == 0
    stats = json.loads((tmp_path / "mtea-ast" / "stats.json").read_text(encoding="utf-8"))
    assert set(stats["summary"]["marks"]) <= {"+", "-", "≈"}
    assert len(stats["summary"]["p_values"]) == 2


def test_synth(tmp_path, tsp_texto):
    base = tmp_path / "base.tsp"
    base.write_text(tsp_texto([(0, 0), (4, 0), (4, 4), (0, 4), (2, 6), (6, 2)], "base"))
    tour = tmp_path / "base.opt.tour"
    tour.write_text("TOUR_SECTION\n1\n2\n6\n3\n5\n4\n-1\n")
    saida = tmp_path / "sint"
    codigo = iniciar_aplicacao([
        "synth", "--base", str(base), "--opt", str(tour), "--sim-grid", "0:1:0.5",
        *RAPIDO, "--out", str(saida),
    ])
    assert codigo == 0
    tabela = pd.read_csv(saida / "synthetic.csv")
    assert tabela["similarity"].tolist() == [0.0, 0.5, 1.0]
    assert json.loads((saida / "summary.json").read_text(encoding="utf-8"))["master_seed"] == 0


def test_erro_vira_codigo_um(tmp_path, capsys):
    codigo = iniciar_aplicacao(["run", "--benchmark", "NAO_EXISTE", "--data", str(tmp_path), "--out", str(tmp_path)])
    assert codigo == 1
    assert "Erro: benchmark desconhecido" in capsys.readouterr().err


def test_arquivo_invalido_vira_codigo_um(tmp_path, capsys):
    ruim = tmp_path / "ruim.tsp"
    ruim.write_text("DIMENSION: 2\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n")
    codigo = iniciar_aplicacao(["run", "--benchmark", str(ruim), *RAPIDO, "--out", str(tmp_path / "x")])
    assert codigo == 1
    assert "[TSPLIB]" in capsys.readouterr().err


def test_config_com_chave_desconhecida(tmp_path, arquivos, capsys):
    config = tmp_path / "c.json"
    config.write_text('{"geracoes": 3}', encoding="utf-8")
    codigo = iniciar_aplicacao(["run", "--benchmark", *arquivos, "--config", str(config)])
    assert codigo == 1
    assert "geracoes" in capsys.readouterr().err


def _otimos(tmp_path):
    pasta = tmp_path / "otimos"
    pasta.mkdir()
    (pasta / "a.opt.tour").write_text("TOUR_SECTION\n1 2 3 5 4\n-1\n")
    (pasta / "b.opt.tour").write_text("TOUR_SECTION\n1 2 6 5 3 4\n-1\n")
    return str(pasta)


def test_run_com_otimos_grava_similaridade_a_priori(arquivos, tmp_path):
    saida = tmp_path / "mtea"
    codigo = iniciar_aplicacao([
        "run", "--benchmark", *arquivos, "--algo", "sto", *RAPIDO,
        "--optima", _otimos(tmp_path), "--out", str(saida),
    ])
    assert codigo == 0
    priori = pd.read_csv(saida / "prior_similarity.csv")
    assert priori["task"].tolist() == ["a", "b"]
    assert priori["T1"].tolist()[0] == 1.0 and priori["T2"].tolist()[1] == 1.0
    assert ((priori[["T1", "T2"]] >= 0) & (priori[["T1", "T2"]] <= 1)).all().all()


def test_prior_sem_executar(arquivos, tmp_path):
    saida = tmp_path / "priori"
    codigo = iniciar_aplicacao(["prior", "--benchmark", *arquivos, "--optima", _otimos(tmp_path), "--out", str(saida)])
    assert codigo == 0
    assert (saida / "prior_similarity.csv").exists()
    assert not (saida / "convergence.csv").exists()


def test_prior_com_otimo_ausente(arquivos, tmp_path, capsys):
    pasta = tmp_path / "vazia"
    pasta.mkdir()
    codigo = iniciar_aplicacao(["prior", "--benchmark", *arquivos, "--optima", str(pasta), "--out", str(tmp_path)])
    assert codigo == 1
    assert "a.opt.tour" in capsys.readouterr().err
