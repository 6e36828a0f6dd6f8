#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "zsg/game.hpp"
#include "zsg/game_io.hpp"

// Exercises the installed command-line binary end to end: exit codes,
// manifest contents, and the byte-identical rerun guarantee. The binary path
// arrives in ZSG_CLI.

namespace {

namespace fs = std::filesystem;

std::string cli() {
  const char* env = std::getenv("ZSG_CLI");
  REQUIRE_MESSAGE(env != nullptr, "ZSG_CLI must point at the built binary");
  return env;
}

int run(const std::string& args) {
  std::string cmd = cli() + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

int run_with_env(const std::string& env_assignment, const std::string& args) {
  std::string cmd = "env " + env_assignment + " " + cli() + " " + args +
                    " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string first_line(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(name) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  std::string operator/(const std::string& leaf) const {
    return (dir / leaf).string();
  }
};

} // namespace

TEST_CASE("missing or malformed invocations are configuration errors") {
  CHECK(run("") == 2);
  CHECK(run("--help") == 0);
  CHECK(run("gen --no-such-flag 1") == 2);
  CHECK(run("vi no_such_game_file.txt") == 2);
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("gen writes a loadable game plus a manifest that lists it") {
  Scratch s("cli_gen");
  std::string game = s / "g.game";
  CHECK(run("gen --states 3 --actions 2 2 --seed 7 -o " + game) == 0);
  zsg::StochasticGame g = zsg::load_game(game);
  CHECK(g.num_states == 3);
  CHECK(zsg::validate_game(g).ok);

  std::string manifest = slurp(game + ".manifest");
  CHECK(manifest.find("command gen") != std::string::npos);
  CHECK(manifest.find("output " + game) != std::string::npos);
  CHECK(manifest.find("config_hash") != std::string::npos);
  CHECK(manifest.find("seed 7") != std::string::npos);

  // Same seed, same bytes.
  std::string game2 = s / "g2.game";
  CHECK(run("gen --states 3 --actions 2 2 --seed 7 -o " + game2) == 0);
  CHECK(slurp(game) == slurp(game2));
}

TEST_CASE("vi emits per-state values and an iteration log") {
  Scratch s("cli_vi");
  std::string game = s / "g.game";
  REQUIRE(run("gen --states 4 --actions 2 3 --seed 3 -o " + game) == 0);
  CHECK(run("vi " + game + " --tol 1e-9 -o " + (s / "vi")) == 0);
  CHECK(first_line(s / "vi_values.csv") == "s,v1,v2,v_sum");
  CHECK(first_line(s / "vi_iterations.csv") == "player,t,step_norm");
  std::string manifest = slurp(s / "vi_manifest.txt");
  CHECK(manifest.find("duality_defect") != std::string::npos);
}

TEST_CASE("gap scores a saved policy") {
  Scratch s("cli_gap");
  std::string game = s / "g.game";
  REQUIRE(run("gen --states 3 --actions 2 2 --seed 11 -o " + game) == 0);
  zsg::JointPolicy u = zsg::JointPolicy::uniform(3, 2, 2);
  std::string policy = s / "uniform.policy";
  zsg::save_policy(u, policy);
  CHECK(run("gap " + game + " " + policy + " -o " + (s / "gap")) == 0);
  CHECK(first_line(s / "gap_values.csv") == "s,br1,v1,br2,v2");
  std::string manifest = slurp(s / "gap_manifest.txt");
  CHECK(manifest.find("nash_gap") != std::string::npos);

  zsg::JointPolicy bad = zsg::JointPolicy::uniform(2, 2, 2);
  std::string badpath = s / "bad.policy";
  zsg::save_policy(bad, badpath);
  CHECK(run("gap " + game + " " + badpath) == 2);
}

TEST_CASE("drift audits random trajectories and summarizes the slack") {
  Scratch s("cli_drift");
  CHECK(run("drift --trials 2 --size 3 --steps 50 --seed 4 -o " + (s / "d")) == 0);
  CHECK(first_line(s / "d_trial0.csv") ==
        "k,V_k,V_next,bound,slack,noise_x_norm,noise_y_norm");
  CHECK(first_line(s / "d_summary.csv") == "trial,steps,l_b,min_slack,satisfied");
  std::string manifest = slurp(s / "d_manifest.txt");
  CHECK(manifest.find("satisfied_trials") != std::string::npos);
  CHECK(run("drift --trials 0") == 2);
}

TEST_CASE("diagnose reports chain and completeness estimates") {
  Scratch s("cli_diagnose");
  std::string game = s / "g.game";
  REQUIRE(run("gen --states 3 --actions 2 2 --seed 19 -o " + game) == 0);
  CHECK(run("diagnose " + game + " --pairs 4 --samples 3 -o " + (s / "diag")) == 0);
  CHECK(first_line(s / "diag_stationary.csv") == "s,stationary");
  std::string header = first_line(s / "diag_summary.csv");
  CHECK(header.find("excitation_floor") != std::string::npos);
  CHECK(header.find("completeness_max_1") != std::string::npos);
}

TEST_CASE("learn runs end to end and reruns byte-identically") {
  Scratch s("cli_learn");
  std::string game = s / "g.game";
  REQUIRE(run("gen --states 2 --actions 2 2 --seed 1 -o " + game) == 0);

  std::string common = "learn " + game +
                       " --T 2 --K 30 --alpha 0.1 --beta 0.01 --tau 0.2"
                       " --seed 5 --gap-every 1 -o learn --outdir ";
  CHECK(run(common + (s / "a")) == 0);
  CHECK(run(common + (s / "b")) == 0);
  for (std::string leaf : {"learn_diag.csv", "learn_weights.csv", "learn_policy.txt"})
    CHECK(slurp((s / "a") + "/" + leaf) == slurp((s / "b") + "/" + leaf));

  CHECK(first_line((s / "a") + "/learn_diag.csv") ==
        "t,k,L_v,L_sum,L_theta,L_w,nash_gap,td_norm_1,td_norm_2");
  zsg::JointPolicy learned = zsg::load_policy((s / "a") + "/learn_policy.txt");
  CHECK(learned.pi1.rows() == 2);

  // Without gap tracking the column disappears.
  CHECK(run("learn " + game + " --T 1 --K 10 --seed 5 -o plain --outdir " +
            (s / "c")) == 0);
  CHECK(first_line((s / "c") + "/plain_diag.csv") ==
        "t,k,L_v,L_sum,L_theta,L_w,td_norm_1,td_norm_2");

  // Bad hyperparameters are configuration errors.
  CHECK(run("learn " + game + " --alpha 0") == 2);
  CHECK(run("learn " + game + " --beta 2") == 2);
}

TEST_CASE("config file keys apply and explicit flags win") {
  Scratch s("cli_config");
  std::string game = s / "g.game";
  REQUIRE(run("gen --states 2 --actions 2 2 --seed 2 -o " + game) == 0);
  std::string cfg = s / "run.cfg";
  {
    std::ofstream out(cfg);
    out << "# run settings\n"
        << "T=3\n"
        << "K=40\n"
        << "alpha=0.2\n"
        << "seed=9\n";
  }
  CHECK(run("learn " + game + " --config " + cfg + " --alpha 0.1 -o cfg --outdir " +
            (s / "out")) == 0);
  std::string manifest = slurp((s / "out") + "/cfg_manifest.txt");
  CHECK(manifest.find("alpha 0.1") != std::string::npos);   // flag beat the file
  CHECK(manifest.find("K 40") != std::string::npos);        // file beat the default
  CHECK(manifest.find("T 3") != std::string::npos);
  CHECK(manifest.find("seed 9") != std::string::npos);

  {
    std::ofstream out(cfg, std::ios::app);
    out << "no_such_key=1\n";
  }
  CHECK(run("learn " + game + " --config " + cfg) == 2);
}

TEST_CASE("the output root environment variable redirects bare file names") {
  Scratch s("cli_envroot");
  CHECK(run_with_env("ZSG_OUTPUT_ROOT=" + (s / "rooted"),
                     "gen --states 2 --actions 2 2 --seed 6 -o env.game") == 0);
  CHECK(fs::exists(fs::path(s / "rooted") / "env.game"));
}

TEST_CASE("manifests list exactly the files the run produced") {
  Scratch s("cli_manifest");
  std::string game = s / "g.game";
  REQUIRE(run("gen --states 2 --actions 2 2 --seed 8 -o " + game) == 0);
  REQUIRE(run("learn " + game + " --T 1 --K 10 --seed 1 --record -o rec --outdir " +
              (s / "out")) == 0);
  std::istringstream manifest(slurp((s / "out") + "/rec_manifest.txt"));
  std::string line;
  int outputs = 0;
  while (std::getline(manifest, line)) {
    if (line.rfind("output ", 0) == 0) {
      outputs++;
      CHECK(fs::exists(line.substr(7)));
    }
  }
  // diag, policy, weights, and two observation streams
  CHECK(outputs == 5);
}
