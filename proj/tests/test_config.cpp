#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "stap/config.hpp"

using namespace stap;

TEST_CASE("key-value parsing") {
  const KeyValueFile kv = parse_key_value(
      "# comment\n"
      "  num_trials = 12  \n"
      "; also a comment\n"
      "\n"
      "[algorithm]\n"
      "name = abfa-sg\n"
      "step_size = 0.01 # trailing\n"
      "[algorithm]\n"
      "name = mswf\n");
  CHECK(kv.globals.at("num_trials") == "12");
  REQUIRE(kv.sections.size() == 2);
  CHECK(kv.sections[0].name == "algorithm");
  CHECK(kv.sections[0].values.at("step_size") == "0.01");
  CHECK(kv.sections[0].line == 5);
  CHECK(kv.sections[1].values.at("name") == "mswf");

  CHECK_THROWS_AS(parse_key_value("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_key_value("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(parse_key_value("[unterminated\n"), ConfigError);
  CHECK_THROWS_AS(read_key_value_file("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("scenario parsing") {
  const RadarScenario sc = parse_scenario(parse_key_value(
      "num_elements = 4\nnum_pulses = 6\ncnr_db = -inf\njammer_azimuths = 10, -20.5\nsnr_db = 3\n"));
  CHECK(sc.num_elements == 4);
  CHECK(sc.num_pulses == 6);
  CHECK(std::isinf(sc.cnr_db));
  CHECK(sc.jammer_azimuths == std::vector<double>{10.0, -20.5});
  CHECK(sc.snr_db == 3.0);
  CHECK(sc.prf == 300.0);

  const RadarScenario none = parse_scenario(parse_key_value("jammer_azimuths =\n"));
  CHECK(none.jammer_azimuths.empty());

  CHECK_THROWS_AS(parse_scenario(parse_key_value("bogus = 1\n")), ConfigError);
  CHECK_THROWS_AS(parse_scenario(parse_key_value("num_elements = four\n")), ConfigError);
  CHECK_THROWS_AS(parse_scenario(parse_key_value("num_elements = 0\n")), ConfigError);
  CHECK_THROWS_AS(parse_scenario(parse_key_value("jammer_azimuths = 95\n")), ConfigError);
}

TEST_CASE("experiment parsing") {
  const ExperimentConfig cfg = parse_experiment(parse_key_value(
      "num_trials = 7\nbase_seed = 18446744073709551615\nsnapshot_count = 50\nthreads = 2\n"
      "normalize_power = false\nnum_pulses = 4\n"
      "[algorithm]\nname = abfa-rls\nlabel = rls-fast\nforgetting = 0.99\nsets = 4\n"
      "[algorithm]\nname = avf\nrank = 2\n"));
  CHECK(cfg.num_trials == 7);
  CHECK(cfg.base_seed == 18446744073709551615ull);
  CHECK(cfg.snapshot_count == 50);
  CHECK(cfg.threads == 2);
  CHECK_FALSE(cfg.normalize_power);
  CHECK(cfg.scenario.full_dimension() == 32);
  REQUIRE(cfg.algorithms.size() == 2);
  CHECK(cfg.algorithms[0].kind == AlgorithmKind::kAbfaRls);
  CHECK(cfg.algorithms[0].label == "rls-fast");
  CHECK(cfg.algorithms[0].forgetting == 0.99);
  CHECK(cfg.algorithms[0].sets == 4);
  CHECK(cfg.algorithms[1].label == "avf");
  CHECK(cfg.algorithms[1].rank == 2);

  CHECK_THROWS_AS(parse_experiment(parse_key_value("nonsense = 1\n")), ConfigError);
  CHECK_THROWS_AS(parse_experiment(parse_key_value("[filter]\nname = avf\n")), ConfigError);
  CHECK_THROWS_AS(parse_experiment(parse_key_value("[algorithm]\nrank = 2\n")), ConfigError);
  CHECK_THROWS_AS(parse_experiment(parse_key_value("[algorithm]\nname = gsc\n")), ConfigError);
  CHECK_THROWS_AS(parse_experiment(parse_key_value("[algorithm]\nname = avf\ncolour = red\n")), ConfigError);
  CHECK_THROWS_AS(parse_experiment(parse_key_value("[algorithm]\nname = abfa-sg\nrank = 5\n")), ConfigError);
  CHECK_THROWS_AS(parse_experiment(parse_key_value("[algorithm]\nname = abfa-sg\nsets = 17\n")), ConfigError);
  CHECK_THROWS_AS(parse_experiment(parse_key_value("[algorithm]\nname = avf\n[algorithm]\nname = avf\n")),
                  ConfigError);
  CHECK_THROWS_AS(parse_experiment(parse_key_value("num_trials = 0\n")), ConfigError);
  CHECK_THROWS_AS(parse_experiment(parse_key_value("pfa = 1\n")), ConfigError);
  CHECK_THROWS_AS(parse_experiment(parse_key_value("base_seed = -3\n")), ConfigError);
}

TEST_CASE("reference experiment") {
  const ExperimentConfig cfg = ExperimentConfig::reference();
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.num_trials == 100);
  CHECK(cfg.snapshot_count == 1000);
  CHECK(cfg.scenario.full_dimension() == 64);
  REQUIRE(cfg.algorithms.size() == 6);
  CHECK(cfg.algorithms[0].rank == 4);
  CHECK(cfg.algorithms[0].sets == 16);
  CHECK(cfg.algorithms[0].forgetting == 0.9998);
  CHECK(cfg.algorithms[1].step_size == 0.005);
}

TEST_CASE("shipped config files") {
  const std::filesystem::path dir = STAP_SOURCE_DIR "/configs";
  const ExperimentConfig ref = load_experiment(dir / "reference.cfg");
  const ExperimentConfig builtin = ExperimentConfig::reference();
  REQUIRE(ref.algorithms.size() == builtin.algorithms.size());
  for (std::size_t i = 0; i < ref.algorithms.size(); ++i) {
    CHECK(ref.algorithms[i].label == builtin.algorithms[i].label);
    CHECK(ref.algorithms[i].kind == builtin.algorithms[i].kind);
  }
  CHECK(ref.num_trials == builtin.num_trials);
  const RadarScenario sc = load_scenario(dir / "airborne.cfg");
  CHECK(sc.full_dimension() == 64);
  CHECK(sc.jammer_azimuths == RadarScenario{}.jammer_azimuths);
}
