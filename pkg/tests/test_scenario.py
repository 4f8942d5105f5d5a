"""Scenario parsing, defaults, validation and round-trip serialization."""

import pytest

import greenlink as gl
from greenlink.errors import ConfigError
from greenlink.scenario import PRESETS, dump_scenario, load_scenario, parse_scenario

SINGLE = """
[link]
distance_m = 10.0
eta = 3.5
gain_margin_db = 40.0
l1_db = 30.0
n0_db = -180.0

[fading]
type = "rayleigh"
omega = 1.0

[scheme]
id = "ncmfsk"
m = 4
payload_bits = 8192
bandwidth_hz = 62500.0
frame_period_s = 1.4
transient_s = 5.0e-6
target_ser = 1.0e-3
"""


class TestParsing:
    def test_single_scenario_builds_engine_inputs(self):
        cfg, link, fading, circuit = parse_scenario(SINGLE).build_single()
        assert cfg.scheme == gl.SchemeId.NC_MFSK and cfg.m == 4
        assert link.gain_margin == pytest.approx(1e4)
        assert link.reference_gain == pytest.approx(1e3)
        assert link.noise_psd == pytest.approx(1e-18)
        assert fading.is_rayleigh_like
        assert circuit == gl.CircuitProfile.passband()

    def test_unknown_key_rejected(self):
        text = SINGLE.replace("distance_m = 10.0", "distnace_m = 10.0")
        with pytest.raises(ConfigError, match="distnace_m"):
            parse_scenario(text)

    def test_missing_section(self):
        text = SINGLE.replace("[fading]", "[circuit]").replace('type = "rayleigh"', "")
        with pytest.raises(ConfigError, match="fading"):
            parse_scenario(text).build_single()

    def test_rician_requires_k(self):
        text = SINGLE.replace('type = "rayleigh"', 'type = "rician"')
        with pytest.raises(ConfigError, match="k_db"):
            parse_scenario(text)

    def test_k_only_for_rician(self):
        text = SINGLE.replace('type = "rayleigh"', 'type = "rayleigh"\nk_db = 3.0')
        with pytest.raises(ConfigError):
            parse_scenario(text)

    def test_rician_k_converted_once(self):
        text = SINGLE.replace('type = "rayleigh"', 'type = "rician"\nk_db = 10.0')
        fading = parse_scenario(text).build_fading()
        assert fading.k == pytest.approx(10.0)

    def test_invalid_toml(self):
        with pytest.raises(ConfigError, match="TOML"):
            parse_scenario("[link\n")

    def test_unknown_scheme_id(self):
        with pytest.raises(ConfigError, match="unknown scheme id"):
            parse_scenario(SINGLE.replace('id = "ncmfsk"', 'id = "qpsk"'))


class TestDefaults:
    def test_transient_defaults_per_scheme(self):
        text = SINGLE.replace("transient_s = 5.0e-6\n", "")
        scn = parse_scenario(text)
        assert scn.build_config(scheme=gl.SchemeId.NC_MFSK, m=2).transient_s == 5e-6
        assert scn.build_config(scheme=gl.SchemeId.MQAM, m=4).transient_s == 20e-6
        assert scn.build_config(scheme=gl.SchemeId.OOK, m=2).transient_s == 2e-9

    def test_circuit_defaults_by_category(self):
        scn = parse_scenario(SINGLE)
        assert scn.build_circuit(gl.SchemeId.MQAM) == gl.CircuitProfile.passband()
        assert scn.build_circuit(gl.SchemeId.OOK) == gl.CircuitProfile.uwb()

    def test_circuit_override(self):
        text = SINGLE + "\n[circuit]\np_lna = 0.012\n"
        circ = parse_scenario(text).build_circuit(gl.SchemeId.NC_MFSK)
        assert circ.p_lna == 0.012
        assert circ.p_sy == 10e-3

    def test_fixed_rate_m_defaults_to_two(self):
        text = SINGLE.replace('id = "ncmfsk"', 'id = "ook"').replace("m = 4\n", "")
        assert parse_scenario(text).build_config().m == 2

    def test_variable_m_required(self):
        text = SINGLE.replace("m = 4\n", "")
        with pytest.raises(ConfigError, match="m is required"):
            parse_scenario(text).build_config()


class TestSweepSection:
    def test_sweep_axes(self):
        text = SINGLE + '\n[sweep]\nschemes = ["ncmfsk", "mqam"]\nm = [4, 16]\ndistance_m = [5.0, 10.0]\nk_db = [10.0]\n'
        spec = parse_scenario(text).build_sweep()
        assert spec.schemes == (gl.SchemeId.NC_MFSK, gl.SchemeId.MQAM)
        assert spec.m_values == (4, 16)
        assert spec.k_db_values == (10.0,)

    def test_sweep_defaults_from_scheme_section(self):
        text = SINGLE + "\n[sweep]\ndistance_m = [5.0, 10.0]\n"
        spec = parse_scenario(text).build_sweep()
        assert spec.schemes == (gl.SchemeId.NC_MFSK,)
        assert spec.m_values == (4,)

    def test_empty_axis_rejected(self):
        text = SINGLE + "\n[sweep]\nm = []\n"
        with pytest.raises(ConfigError, match="non-empty"):
            parse_scenario(text)

    def test_missing_sweep_section(self):
        with pytest.raises(ConfigError, match="sweep"):
            parse_scenario(SINGLE).build_sweep()


class TestRoundTrip:
    def test_single_round_trip(self):
        first = parse_scenario(SINGLE)
        second = parse_scenario(dump_scenario(first))
        assert first.build_single() == second.build_single()
        assert first == second

    def test_preset_round_trips(self):
        for name in PRESETS:
            scn = load_scenario(name)
            again = parse_scenario(dump_scenario(scn))
            assert scn.build_link() == again.build_link()
            assert scn.build_fading() == again.build_fading()
            if scn.sweep is not None:
                assert scn.build_sweep() == again.build_sweep()


class TestPresets:
    @pytest.mark.parametrize("name", PRESETS)
    def test_presets_load_and_sweep(self, name):
        spec = load_scenario(name).build_sweep()
        assert spec.schemes

    def test_unknown_source(self):
        with pytest.raises(ConfigError, match="neither a file nor a preset"):
            load_scenario("fig99")

    def test_file_path_loads(self, tmp_path):
        p = tmp_path / "s.toml"
        p.write_text(SINGLE)
        assert load_scenario(str(p)).build_single()
