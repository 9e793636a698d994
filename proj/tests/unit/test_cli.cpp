#include <doctest.h>

#include "approx.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "biphoton/artifacts.hpp"
#include "biphoton/commands.hpp"
#include "biphoton/config.hpp"

using namespace biphoton;
namespace fs = std::filesystem;

namespace {

const char* kSmallConfig = R"(seed = 5

[crystal]
length_um = 6.6

[pump]
waist_um = 10
wavelength_nm = 532

[signal]
wavelength_nm = 797

[idler]
wavelength_nm = 1600

[grid]
theta_max_deg = 17.46
n = 201

[counting]
acquisition_time_s = 60
singles_rate_signal_hz = 5000
singles_rate_idler_hz = 5000
pair_rate_open_hz = 200

[set]
seed_angles_deg = -5:5:0.5
camera_theta_max_deg = 10
camera_n = 101
mask_from_deg = -1
mask_to_deg = 1

[knife]
positions_deg = -1:16:1

[slit]
centers_deg = -3:3:0.25
width_deg = 0.5

[sweep]
length_um = 4, 6.6
waist_um = 10
)";

fs::path work(const std::string& name) {
  const fs::path p = fs::path(TEST_WORK_DIR) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunConfig small_config(const fs::path& out) {
  auto c = parse_config(kSmallConfig);
  c.output_dir = out.string();
  return c;
}

int run(std::string_view cmd, const RunConfig& c, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_command(cmd, c, CommandOptions{std::nullopt, true}, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(read_file(p)); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("every command succeeds on a small configuration") {
    const auto dir = work("all");
    const auto c = small_config(dir);
    for (const auto& name : command_names()) {
      std::string err;
      CAPTURE(name);
      CAPTURE(err);
      CHECK(run(name, c, &err) == exit_ok);
    }
    for (const char* f : {"tpi.csv", "tpi.pgm", "tpi.json", "report.json", "knife.csv", "slit.csv", "set_tpi.csv",
                          "set.json", "fit_knife.json", "fit_slit.json", "sweep.csv", "budget.json", "nearfield.json"}) {
      CAPTURE(f);
      CHECK(fs::exists(dir / f));
    }
    const auto report = read_json(dir / "report.json");
    CHECK(report.contains("R_1D"));
    CHECK(report.contains("K"));
    CHECK(report.at("config_hash").get<std::string>() == config_hash_hex(c));
    CHECK(report.at("seed").get<std::uint64_t>() == 5);
    const auto budget = read_json(dir / "budget.json");
    CHECK(budget.at("pair").get<double>() == rel(1.0));
  }

  TEST_CASE("SET artifact marks masked rows as missing") {
    const auto dir = work("set");
    REQUIRE(run("scan-set", small_config(dir)) == exit_ok);
    std::istringstream in(read_file(dir / "set_tpi.csv"));
    std::string line;
    int nan_rows = 0, data_rows = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line.find('\\') != std::string::npos) continue;
      const double seed = std::stod(line.substr(0, line.find(',')));
      const bool has_nan = line.find("nan") != std::string::npos;
      CAPTURE(seed);
      CHECK(has_nan == (seed >= -1.0 - 1e-9 && seed <= 1.0 + 1e-9));
      (has_nan ? nan_rows : data_rows)++;
    }
    CHECK(nan_rows == 5);
    CHECK(data_rows == 16);
  }

  TEST_CASE("fitting a written scan file reproduces the simulated fit") {
    const auto dir = work("refit");
    const auto c = small_config(dir);
    REQUIRE(run("fit-slit", c) == exit_ok);
    const auto first = read_json(dir / "fit_slit.json");
    std::ostringstream out, err;
    REQUIRE(run_command("fit-slit", c, CommandOptions{dir / "slit.csv", true}, out, err) == exit_ok);
    const auto second = read_json(dir / "fit_slit.json");
    CHECK(first.at("fit").at("parameters") == second.at("fit").at("parameters"));
  }

  TEST_CASE("error classes map to exit codes") {
    const auto dir = work("errors");
    auto c = small_config(dir);

    auto domain = c;
    domain.setup.length_um = 1.38;
    domain.grid = {35.0, 201};
    CHECK(run("report", domain) == exit_domain);

    auto io = c;
    const auto blocker = dir / "file";
    std::ofstream(blocker) << "x";
    io.output_dir = (blocker / "sub").string();
    CHECK(run("budget", io) == exit_io);

    CHECK(run("no-such-command", c) == exit_usage);

    std::ostringstream out, err;
    CHECK(run_command("fit-slit", c, CommandOptions{dir / "missing.csv", true}, out, err) == exit_io);
  }

#ifdef BIPHOTON_CLI
  TEST_CASE("command-line runs are byte-for-byte reproducible") {
    const auto dir = work("binary");
    const auto cfg = dir / "run.ini";
    std::ofstream(cfg) << kSmallConfig;
    auto invoke = [&](const std::string& args) {
      const std::string cmd = std::string("\"") + BIPHOTON_CLI + "\" " + args + " > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    for (const char* sub : {"scan-knife", "tpi"}) {
      REQUIRE(invoke(std::string(sub) + " --config " + cfg.string() + " --seed 9 --out " + (dir / "a").string()) == 0);
      REQUIRE(invoke(std::string(sub) + " --config " + cfg.string() + " --seed 9 --out " + (dir / "b").string()) == 0);
    }
    for (const char* f : {"knife.csv", "tpi.csv", "tpi.pgm", "tpi.json"}) {
      CAPTURE(f);
      CHECK(read_file(dir / "a" / f) == read_file(dir / "b" / f));
    }
    REQUIRE(invoke("scan-knife --config " + cfg.string() + " --seed 10 --out " + (dir / "c").string()) == 0);
    CHECK(read_file(dir / "a" / "knife.csv") != read_file(dir / "c" / "knife.csv"));

    const auto bad = dir / "bad.ini";
    std::ofstream(bad) << "[crystal]\nlength_um = -1\n";
    CHECK(invoke("tpi --config " + bad.string()) == exit_usage);
    CHECK(invoke("tpi") == exit_usage);
    CHECK(invoke("tpi --config " + (dir / "absent.ini").string()) == exit_io);
  }
#endif
}
