#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(ENDURE_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buf;
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), int(buf.size()), pipe) != nullptr) {
    output += buf.data();
  }
  const int status = pclose(pipe);
  RunResult r;
  r.output = output;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("endure_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int counter() {
    static int n = 0;
    return n++;
  }
};

}  // namespace

TEST_CASE("help exists for every subcommand") {
  CHECK(run_cli("--help").exit_code == 0);
  for (const char* sub :
       {"sweep", "parity", "maxfuel", "reduce", "scale-dt", "platforms"}) {
    const auto r = run_cli(std::string(sub) + " --help");
    INFO(sub);
    CHECK(r.exit_code == 0);
  }
}

TEST_CASE("unknown flags exit 2") {
  CHECK(run_cli("sweep --no-such-flag").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("sweep writes the grid and reports the corners") {
  TempDir dir;
  const auto r = run_cli("sweep --platform puma --eta-dev 0.105 --steps 12 --out " +
                         dir.path.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("stock battery, no fuel : 2 h") != std::string::npos);

  const auto csv = slurp(dir.path / "sweep.csv");
  CHECK(csv.rfind("battery_Wh,fuel_mL,endurance_h,avg_power_W,total_mass_kg,"
                  "m_airframe_kg,m_battery_kg,m_hardware_kg,m_tank_kg,"
                  "m_fuel_kg,feasible,binding_constraint,fuel_usable\n",
                  0) == 0);
  // Header plus 144 cells.
  const auto rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 145);

  const auto meta = nlohmann::json::parse(slurp(dir.path / "sweep.meta.json"));
  CHECK(meta.at("schema_version").get<int>() == 1);
  CHECK(meta.at("platform").at("name").get<std::string>() == "Puma");
  CHECK(meta.at("design").at("device_efficiency").get<double>() == 0.105);
  CHECK(meta.at("grid").at("battery_steps").get<int>() == 12);
}

TEST_CASE("a 50-step sweep emits the full 2500-cell grid") {
  TempDir dir;
  const auto r = run_cli("sweep --platform puma --eta-dev 0.105 --steps 50 --out " +
                         dir.path.string());
  CHECK(r.exit_code == 0);
  const auto csv = slurp(dir.path / "sweep.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2501);  // header + cells
  CHECK(r.output.find("stock battery, no fuel : 2 h") != std::string::npos);
}

TEST_CASE("sweep reruns and parallel runs are byte-identical") {
  TempDir a, b, c;
  CHECK(run_cli("sweep --platform puma --eta-dev 0.105 --steps 9 --out " +
                a.path.string())
            .exit_code == 0);
  CHECK(run_cli("sweep --platform puma --eta-dev 0.105 --steps 9 --out " +
                b.path.string())
            .exit_code == 0);
  CHECK(run_cli("sweep --platform puma --eta-dev 0.105 --steps 9 --jobs 4 --out " +
                c.path.string())
            .exit_code == 0);
  const auto ca = slurp(a.path / "sweep.csv");
  CHECK(ca == slurp(b.path / "sweep.csv"));
  CHECK(ca == slurp(c.path / "sweep.csv"));
}

TEST_CASE("sweep config errors exit 2, infeasible models exit 3") {
  CHECK(run_cli("sweep --platform nosuch").exit_code == 2);
  CHECK(run_cli("sweep --platform puma --eta-dev 1.5").exit_code == 2);
  // Hardware that cannot fit under the mass cap is a model-domain failure.
  TempDir dir;
  CHECK(run_cli("sweep --platform raven --eta-dev 0.105 --out " +
                dir.path.string())
            .exit_code == 3);
}

TEST_CASE("config file feeds defaults that flags override") {
  TempDir dir;
  const fs::path cfg = dir.path / "run.json";
  {
    std::ofstream out(cfg);
    out << R"({"platform":"puma","eta_dev":0.105,"battery_steps":5,
               "fuel_steps":4,"out_dir":")"
        << dir.path.string() << R"("})";
  }
  CHECK(run_cli("--config " + cfg.string() + " sweep").exit_code == 0);
  const auto meta = nlohmann::json::parse(slurp(dir.path / "sweep.meta.json"));
  CHECK(meta.at("grid").at("battery_steps").get<int>() == 5);
  CHECK(meta.at("grid").at("fuel_steps").get<int>() == 4);

  // A flag beats the config file.
  CHECK(run_cli("--config " + cfg.string() + " sweep --eta-dev 0.12")
            .exit_code == 0);
  const auto meta2 = nlohmann::json::parse(slurp(dir.path / "sweep.meta.json"));
  CHECK(meta2.at("design").at("device_efficiency").get<double>() == 0.12);
}

TEST_CASE("parity command reports the Puma neighborhood") {
  TempDir dir;
  const auto r =
      run_cli("parity --platform puma --out " + dir.path.string());
  CHECK(r.exit_code == 0);
  const auto csv = slurp(dir.path / "parity.csv");
  CHECK(csv.find("Puma") != std::string::npos);
  CHECK(csv.find("ok") != std::string::npos);

  const auto single = run_cli("parity --platform puma --multiple 2 --out " +
                              dir.path.string());
  CHECK(single.exit_code == 0);
  CHECK(single.output.find("x2") != std::string::npos);
}

TEST_CASE("parity --all tolerates per-row failures") {
  TempDir dir;
  const auto r = run_cli("parity --all --out " + dir.path.string());
  // Raven cannot host the default hardware, but the batch still succeeds.
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("Raven") != std::string::npos);
  CHECK(r.output.find("issue") != std::string::npos);
}

TEST_CASE("maxfuel prints the binding rule") {
  const auto r = run_cli("maxfuel --platform talon --eta-dev 0.08");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("volume_cap-bound") != std::string::npos);
}

TEST_CASE("reduce consumes logs and emits the summary artifacts") {
  TempDir dir;
  const fs::path temp_csv = dir.path / "temps.csv";
  const fs::path power_csv = dir.path / "power.csv";
  {
    std::ofstream t(temp_csv);
    t << "timestamp,T_hot_C,T_cold_C,T_amb_C\n";
    for (int s = 0; s <= 9462; ++s) {
      t << s << ",340,74,25\n";
    }
    std::ofstream p(power_csv);
    p << "time_s,voltage_V,current_A\n";
    for (int s = 0; s <= 9462; s += 2) {
      p << s << ",2.0,2.3\n";
    }
  }
  const auto r = run_cli(
      "reduce --temp-log " + temp_csv.string() + " --power-log " +
      power_csv.string() +
      " --fuel-burned-g 121.7 --dry-mass-g 413 --canister-g 227 --out " +
      dir.path.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("device efficiency") != std::string::npos);

  const auto summary = nlohmann::json::parse(slurp(dir.path / "summary.json"));
  CHECK(summary.at("schema_version").get<int>() == 1);
  CHECK(summary.at("avg_power_w").get<double>() == Catch::Approx(4.6));
  CHECK(summary.at("thermal_power_w").get<double>() ==
        Catch::Approx(629.7).margin(1.0));
  CHECK(summary.at("device_efficiency").get<double>() ==
        Catch::Approx(0.0183).margin(5e-4));
  CHECK(fs::exists(dir.path / "power_smoothed.csv"));

  // Identity window passes the raw series through.
  const auto rw = run_cli(
      "reduce --temp-log " + temp_csv.string() + " --power-log " +
      power_csv.string() +
      " --fuel-burned-g 121.7 --dry-mass-g 413 --canister-g 227 --window 1 "
      "--out " +
      dir.path.string());
  CHECK(rw.exit_code == 0);
  const auto smoothed = slurp(dir.path / "power_smoothed.csv");
  CHECK(smoothed.find("0,4.6,4.6") != std::string::npos);
}

TEST_CASE("reduce exits 2 when a mapped column is missing") {
  TempDir dir;
  const fs::path temp_csv = dir.path / "temps.csv";
  const fs::path power_csv = dir.path / "power.csv";
  {
    std::ofstream t(temp_csv);
    t << "time,hot,cold,amb\n0,340,74,25\n";
    std::ofstream p(power_csv);
    p << "time_s,voltage_V,current_A\n0,2,2.3\n2,2,2.3\n";
  }
  const auto r = run_cli(
      "reduce --temp-log " + temp_csv.string() + " --power-log " +
      power_csv.string() + " --fuel-burned-g 10 --dry-mass-g 413 --canister-g 227");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("timestamp") != std::string::npos);
}

TEST_CASE("scale-dt prints the quadratic table and guards the bound") {
  const auto r = run_cli("scale-dt --power 20 --eta 0.05 --dt-ref 300 --dt-to 600 --steps 3");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("80") != std::string::npos);   // 4x power at 2x dT
  CHECK(r.output.find("0.1") != std::string::npos);  // 2x efficiency

  CHECK(run_cli("scale-dt --power 20 --eta 0.6 --dt-ref 300 --dt-to 600")
            .exit_code == 2);
}

TEST_CASE("platforms list honors the ENDURE_PLATFORMS override") {
  const auto r = run_cli("platforms list");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("Puma") != std::string::npos);
  CHECK(r.output.find("Trinity") != std::string::npos);

  TempDir dir;
  const fs::path reg = dir.path / "custom.json";
  {
    std::ofstream out(reg);
    out << R"({"platforms":[{"name":"Skiff","class":"ground",
      "specific_power_w_per_kg": 5.0, "battery_energy_wh": 500.0,
      "battery_mass_kg": 4.0, "battery_volume_l": 2.0,
      "stated_endurance_h": 10.0}]})";
  }
  const std::string cmd =
      "ENDURE_PLATFORMS=" + reg.string() + " " + ENDURE_CLI_PATH +
      " platforms list 2>&1";
  std::array<char, 4096> buf;
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), int(buf.size()), pipe) != nullptr) {
    output += buf.data();
  }
  pclose(pipe);
  CHECK(output.find("Skiff") != std::string::npos);
  CHECK(output.find("Puma") == std::string::npos);
}
