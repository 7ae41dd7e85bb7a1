#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef GRIDRISK_CLI_PATH
#error "GRIDRISK_CLI_PATH must be defined"
#endif
#ifndef GRIDRISK_DATA_DIR
#error "GRIDRISK_DATA_DIR must be defined"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  const auto out_path = fs::temp_directory_path() / "gridrisk_cli_out.txt";
  const auto err_path = fs::temp_directory_path() / "gridrisk_cli_err.txt";
  const std::string cmd = std::string(GRIDRISK_CLI_PATH) + " " + args + " >" +
                          out_path.string() + " 2>" + err_path.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

std::string data_file(const std::string& name) {
  return (fs::path(GRIDRISK_DATA_DIR) / name).string();
}

std::string first_data_line(const std::string& csv_text) {
  std::istringstream ss(csv_text);
  std::string line;
  std::getline(ss, line);  // manifest comment
  std::getline(ss, line);  // header
  return line;
}

}  // namespace

TEST_CASE("cli: simulate emits a cascade outcome JSON") {
  const auto r = run_cli("simulate --case " + data_file("triangle3.json") + " --outages 1,3");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"is_blackout\": true") != std::string::npos);
  CHECK(r.out.find("\"load_shed_mw\": 100.0") != std::string::npos);
  CHECK(r.out.find("\"shed_fraction\": 1.0") != std::string::npos);
}

TEST_CASE("cli: simulate threshold flag") {
  // Islanding bus 3 of radial4 sheds 1/62 ~ 1.6%.
  const auto base = run_cli("simulate --case " + data_file("radial4.json") + " --outages 2");
  CHECK(base.out.find("\"is_blackout\": false") != std::string::npos);
  const auto strict = run_cli("simulate --case " + data_file("radial4.json") +
                              " --outages 2 --threshold 0.01");
  CHECK(strict.out.find("\"is_blackout\": true") != std::string::npos);
}

TEST_CASE("cli: campaign ledgers are byte-identical across runs and worker counts") {
  const auto dir = fs::temp_directory_path();
  const std::string base = "rc-campaign --case " + data_file("stress.json") +
                           " --trials 150 --seed 7 --checkpoint-every 0";
  const auto l1 = (dir / "cli_ledger1.jsonl").string();
  const auto l2 = (dir / "cli_ledger2.jsonl").string();
  const auto l3 = (dir / "cli_ledger3.jsonl").string();
  std::error_code ec;
  for (const auto& p : {l1, l2, l3}) {
    fs::remove(p, ec);
    fs::remove(p + ".meta.json", ec);
  }
  CHECK(run_cli(base + " --workers 1 --out " + l1).exit_code == 0);
  CHECK(run_cli(base + " --workers 1 --out " + l2).exit_code == 0);
  CHECK(run_cli(base + " --workers 3 --out " + l3).exit_code == 0);
  const std::string a = slurp(l1);
  CHECK(!a.empty());
  CHECK(a == slurp(l2));
  CHECK(a == slurp(l3));
}

TEST_CASE("cli: risk without --ledger exits 2 with a usage message") {
  const auto r = run_cli("risk --case " + data_file("stress.json"));
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("--ledger") != std::string::npos);
}

TEST_CASE("cli: unknown flags and missing subcommand exit 2") {
  CHECK(run_cli("simulate --case x.json --no-such-flag 1").exit_code == 2);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("analyze bogus-kind --ledger x --case " + data_file("triangle3.json"))
            .exit_code == 2);
}

TEST_CASE("cli: missing input file exits 3") {
  const auto r = run_cli("simulate --case /nonexistent/nope.json --outages 1");
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("cli: jointp prints the value and error estimate") {
  const auto r = run_cli("jointp --case " + data_file("stress.json") +
                         " --branches 401,402 --rho0 0.15 --L 300");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("joint_probability") != std::string::npos);
  CHECK(r.out.find("abs_error_estimate") != std::string::npos);
  // Parallel circuits at rho0=0.15: well above the independent product.
  double value = 0.0;
  std::sscanf(r.out.c_str(), "joint_probability %lf", &value);
  CHECK(value > 1.04e-4 * 1.04e-4);
  CHECK(value < 1.05e-4);  // Frechet upper bound

  const auto bad = run_cli("jointp --case " + data_file("stress.json") +
                           " --branches 101 --rho0 0.15 --L 300");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: matpower import via coords") {
  const auto r = run_cli("simulate --case " + data_file("case5.m") + " --coords " +
                         data_file("case5_coords.csv") + " --outages 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"is_blackout\"") != std::string::npos);
}

TEST_CASE("cli: end-to-end campaign, estimate-size, risk, analyze") {
  const auto dir = fs::temp_directory_path() / "gridrisk_cli_e2e";
  fs::create_directories(dir);
  const auto ledger = (dir / "ledger.jsonl").string();
  std::error_code ec;
  fs::remove(ledger, ec);
  fs::remove(ledger + ".meta.json", ec);

  REQUIRE(run_cli("rc-campaign --case " + data_file("stress.json") +
                  " --trials 2000 --seed 11 --workers 2 --out " + ledger)
              .exit_code == 0);

  SUBCASE("estimate-size emits bounds JSON and the undersampling CSV") {
    const auto out = (dir / "bounds").string();
    const auto r = run_cli("estimate-size --ledger " + ledger + " --case " +
                           data_file("stress.json") + " --k 3 --top-m 4 --workers 2 --out " + out);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"chao_lower\"") != std::string::npos);
    CHECK(r.out.find("\"rcp_upper\"") != std::string::npos);
    CHECK(r.out.find("\"q_proportion\"") != std::string::npos);
    const std::string csv = slurp(out + "_undersampling.csv");
    CHECK(first_data_line(csv) == "branch_a,branch_b,rc_found,true_count,proportion");
    CHECK(fs::exists(out + ".manifest.json"));
  }

  SUBCASE("risk grid CSV has the stable schema") {
    const auto out = (dir / "risk.csv").string();
    const auto r = run_cli("risk --case " + data_file("stress.json") + " --ledger " + ledger +
                           " --rho0 0,0.15 --L 0,300 --k3-bounds chao,rcp --workers 2 --out " +
                           out);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(out);
    CHECK(first_data_line(csv) ==
          "rho0,L,r2,r3_low,r3_high,total_low,total_high,share3_low,share3_high");
    // 2x2 grid -> 4 data rows.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  }

  SUBCASE("analyze emits schema-stable CSV datasets") {
    const auto out = (dir / "an").string();
    CHECK(run_cli("analyze accumulation --ledger " + ledger + " --case " +
                  data_file("stress.json") + " --out " + out)
              .exit_code == 0);
    CHECK(first_data_line(slurp(out + "_accumulation.csv")) == "discoveries,unique");
    CHECK(fs::exists(out + "_accumulation_k2.csv"));
    CHECK(fs::exists(out + "_accumulation_k3.csv"));

    CHECK(run_cli("analyze pair-freq --ledger " + ledger + " --case " +
                  data_file("stress.json") + " --out " + out)
              .exit_code == 0);
    CHECK(first_data_line(slurp(out + "_pair_freq.csv")) == "branch_a,branch_b,count");

    CHECK(run_cli("analyze distributions --ledger " + ledger + " --case " +
                  data_file("stress.json") + " --out " + out)
              .exit_code == 0);
    CHECK(first_data_line(slurp(out + "_blackout_sizes.csv")) == "k,shed_mw");
    CHECK(first_data_line(slurp(out + "_blackout_sizes_summary.csv")) == "k,count,median_mw");

    CHECK(run_cli("analyze distances --ledger " + ledger + " --case " +
                  data_file("stress.json") + " --benign-samples 500 --seed 3 --out " + out)
              .exit_code == 0);
    CHECK(first_data_line(slurp(out + "_malignancy_distances.csv")) == "k,distance_km");
    CHECK(first_data_line(slurp(out + "_benign_distances.csv")) == "distance_km");
    CHECK(first_data_line(slurp(out + "_distances_summary.csv")) == "group,count,median_km");
  }

  SUBCASE("load sweep mode") {
    const auto out = (dir / "sweep.csv").string();
    const auto r = run_cli("risk --case " + data_file("stress.json") +
                           " --load-factors 0.9,1.0 --trials-per-level 50 --seed 5 --rho0 0.1 "
                           "--L 300 --workers 2 --scheme 20,14,10,7,5 --out " +
                           out);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(out);
    CHECK(first_data_line(csv) == "factor,r2,unique_k2,trials_aborted");
  }
}

TEST_CASE("cli: outputs reference their manifest") {
  const auto dir = fs::temp_directory_path();
  const auto out = (dir / "cli_sim_out.json").string();
  const auto r = run_cli("simulate --case " + data_file("triangle3.json") +
                         " --outages 1 --out " + out);
  CHECK(r.exit_code == 0);
  const std::string j = slurp(out);
  CHECK(j.find("\"manifest\"") != std::string::npos);
  const std::string manifest = slurp(out + ".manifest.json");
  CHECK(manifest.find("\"case_hash\"") != std::string::npos);
  CHECK(manifest.find("fnv1a64:") != std::string::npos);
  CHECK(manifest.find("\"command\": \"simulate\"") != std::string::npos);
}
