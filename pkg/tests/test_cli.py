"""Command line behavior: outputs, formats, caching, exit codes."""

import io
import json
import os
import sys

from motsteen import cli


def run_cli(argv, env=None):
    old_env = {}
    for k, v in (env or {}).items():
        old_env[k] = os.environ.get(k)
        os.environ[k] = v
    buf = io.StringIO()
    old = sys.stdout
    sys.stdout = buf
    try:
        code = cli.main(argv)
    finally:
        sys.stdout = old
        for k, v in old_env.items():
            if v is None:
                os.environ.pop(k, None)
            else:
                os.environ[k] = v
    return code, buf.getvalue()


def test_dims_pretty():
    code, out = run_cli(
        ["dims", "--prime", "2", "--scheme", "algclosed", "--dmax", "4", "--wmax", "4"]
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["d", "w", "dim", "rank", "ker", "im", "homology", "notes"]
    rows = {tuple(l.split()[:2]): l.split()[2:] for l in lines[1:]}
    assert rows[("0", "0")][:5] == ["1", "0", "1", "0", "1"]
    assert rows[("2", "1")][:5] == ["1", "0", "1", "1", "0"]


def test_dims_json_schema():
    code, out = run_cli(
        ["dims", "--prime", "2", "--scheme", "algclosed", "--dmax", "3",
         "--wmax", "2", "--format", "json"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "motsteen.dims/1"
    for row in doc["rows"]:
        assert row["ker"] + row["rank"] == row["dim"]
        assert set(row) == {"bidegree", "dim", "rank", "ker", "im", "homology", "notes"}


def test_dims_empty_range():
    code, out = run_cli(
        ["dims", "--prime", "2", "--scheme", "algclosed", "--dmax", "0",
         "--wmax", "0", "--format", "tsv"]
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("d\tw")
    assert [l.split("\t")[:2] for l in lines[1:]] == [["0", "0"]]


def test_dims_deterministic_and_cache_byte_identical(tmp_path):
    args = ["dims", "--prime", "2", "--scheme", "real-p2", "--dmax", "6",
            "--wmax", "5", "--format", "json", "--cache", str(tmp_path / "c")]
    code1, cold = run_cli(args)
    assert code1 == 0
    assert any((tmp_path / "c").iterdir())
    code2, warm = run_cli(args)
    assert code2 == 0
    assert warm == cold
    # and identical to an uncached run
    code3, plain = run_cli(args[:-2])
    assert plain == warm


def test_cache_env_override(tmp_path):
    env_dir = tmp_path / "envcache"
    args = ["dims", "--prime", "2", "--scheme", "algclosed", "--dmax", "3",
            "--wmax", "3"]
    code, _ = run_cli(args, env={"MOTSTEEN_CACHE": str(env_dir)})
    assert code == 0
    assert any(env_dir.iterdir())


def test_cached_kernel_round_trip(tmp_path):
    from motsteen.cache import ResultCache
    from motsteen.cli import Config, cached_kernel
    from motsteen.grading import Bidegree

    cfg = Config(p=2, scheme="real-p2", dmax=6, wmax=5)
    cache = ResultCache(str(tmp_path))
    h = cfg.handle()
    cold = cached_kernel(Bidegree(2, 0), h, cfg, cache)
    warm = cached_kernel(Bidegree(2, 0), h, cfg, cache)
    assert cold == warm
    from motsteen.bockstein import ker_beta_basis

    direct = [list(v) for v in ker_beta_basis(Bidegree(2, 0), h).generic.vectors]
    assert warm == direct


def test_cache_version_mismatch_recomputes(tmp_path):
    from motsteen.cache import ResultCache

    c = ResultCache(str(tmp_path))
    key = {"kind": "basis", "p": 2}
    c.store(key, [1, 2, 3])
    # corrupt the version tag on disk
    path = c._path(key)
    doc = json.loads(open(path).read())
    doc["version"] = "0"
    open(path, "w").write(json.dumps(doc))
    assert c.load(key) is None
    assert c.get_or_compute(key, lambda: [4]) == [4]


def test_verify_and_present_deterministic():
    vargs = ["verify", "linear", "--prime", "3", "--scheme", "algclosed",
             "--dmax", "6", "--wmax", "6", "--format", "json"]
    pargs = ["present", "--prime", "2", "--scheme", "zhalf", "--bound", "2"]
    assert run_cli(vargs) == run_cli(vargs)
    assert run_cli(pargs) == run_cli(pargs)


def test_verify_beta2_pass():
    code, out = run_cli(
        ["verify", "beta2", "--prime", "2", "--scheme", "algclosed",
         "--dmax", "20", "--wmax", "10"]
    )
    assert code == 0
    assert out.startswith("PASS")


def test_verify_products_warn_not_fail_and_strict():
    args = ["verify", "products", "--prime", "2", "--scheme", "algclosed",
            "--dmax", "6", "--wmax", "6"]
    code, out = run_cli(args)
    assert code == 0
    assert "WARN" in out and "FAIL" not in out
    code_strict, _ = run_cli(args + ["--strict"])
    assert code_strict == 1


def test_verify_chi_negative_control():
    """An intentionally corrupted conjugation memo must fail the suite."""
    from motsteen import steenrod
    from motsteen.elements import algebra, term_element
    from motsteen.elements import CoeffMonomial

    h = algebra("algclosed", 2, ambient="a")
    good = steenrod.chi_generator("tau", 2, h)
    try:
        steenrod._chi_gen_cache[("tau", 2, 2)] = term_element(
            2, 1, CoeffMonomial(), steenrod.SteenrodMonomial((), (2,))
        )
        steenrod._chi_mono_cache.clear()
        code, out = run_cli(
            ["verify", "chi", "--prime", "2", "--scheme", "algclosed",
             "--dmax", "14", "--wmax", "7"]
        )
        assert code == 1
        assert "FAIL" in out
    finally:
        steenrod._chi_gen_cache[("tau", 2, 2)] = good
        steenrod._chi_mono_cache.clear()


def test_verify_z12_requires_zhalf():
    code, out = run_cli(
        ["verify", "z12", "--prime", "2", "--scheme", "algclosed",
         "--dmax", "4", "--wmax", "4"]
    )
    assert code == 1
    code, out = run_cli(
        ["verify", "z12", "--prime", "2", "--scheme", "zhalf",
         "--dmax", "4", "--wmax", "4"]
    )
    assert code == 0
    assert "WARN" in out


def test_verify_json_format():
    code, out = run_cli(
        ["verify", "blocks", "--prime", "3", "--scheme", "algclosed",
         "--dmax", "4", "--wmax", "4", "--format", "json"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "motsteen.verify/1"
    assert doc["checks"][0]["status"] == "PASS"


def test_invalid_config_exits_nonzero(capsys):
    code = cli.main(["dims", "--prime", "4", "--scheme", "algclosed"])
    assert code == 1
    assert "error" in capsys.readouterr().err
    code = cli.main(["dims", "--prime", "3", "--scheme", "zhalf"])
    assert code == 1
    capsys.readouterr()
    code = cli.main(["dims", "--prime", "3", "--scheme", "finite"])
    assert code == 1
    capsys.readouterr()


def test_present_algclosed_bound2():
    code, out = run_cli(
        ["present", "--prime", "2", "--scheme", "algclosed", "--bound", "2"]
    )
    assert code == 0
    doc = json.loads(out)
    mz = doc["dual_steenrod_integral_form"]
    names = [g["name"] for g in mz["generators"]]
    assert names == ["xi_1", "tau_1", "xi_2", "tau_2"]
    assert mz["relations"] == ["tau_1^2 + xi_2*tau"]
    assert doc["coefficients"]["scheme"] == "algclosed"


def test_present_real_integral_part():
    code, out = run_cli(
        ["present", "--prime", "2", "--scheme", "real-p2", "--bound", "1"]
    )
    doc = json.loads(out)
    ints = doc["integral_coefficients"]
    by_name = {g["name"]: g for g in ints["generators"]}
    assert by_name["rho"]["order"] == 2
    assert by_name["tau^2"]["order"] == "free"
    assert "2*rho" in ints["relations"]
    # the quadratic relation carries the rho terms over the reals
    assert doc["dual_steenrod_full"]["relations"][0] == (
        "tau_0^2 + xi_1*tau + xi_1*tau_0*rho + tau_1*rho"
    )


def test_present_bound_zero_is_coefficients_only():
    code, out = run_cli(
        ["present", "--prime", "3", "--scheme", "algclosed", "--bound", "0"]
    )
    doc = json.loads(out)
    assert doc["dual_steenrod_integral_form"]["generators"] == []
    assert doc["pullback"]["torsion_generators"] == []
    assert doc["coefficients"]["generators"] == [
        {"name": "tau", "bidegree": [0, -1]}
    ]


def test_present_w_table_override(tmp_path):
    table = tmp_path / "w.json"
    table.write_text(json.dumps({"2": 4}))
    code, out = run_cli(
        ["present", "--prime", "2", "--scheme", "zhalf", "--bound", "1",
         "--w-table", str(table)]
    )
    assert code == 0
    doc = json.loads(out)
    by_name = {g["name"]: g for g in doc["integral_coefficients"]["generators"]}
    assert by_name["eps_2"]["order"] == 4
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"2": 3}))
    code = cli.main(
        ["present", "--prime", "2", "--scheme", "zhalf", "--w-table", str(bad)]
    )
    assert code == 1
